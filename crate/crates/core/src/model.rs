//! Pairing Hamiltonian instance and the seniority-zero pair basis.
//!
//! A basis configuration is an `omega`-bit mask: bit `k - 1` set means the
//! time-reversed pair `(k, k̄)` is fully occupied. Pair creation operators on
//! distinct levels commute, so hopping a pair between levels never produces
//! a fermionic sign.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::{Error, Real, Result};

/// Largest basis the enumerator will build unless told otherwise.
pub const DEFAULT_CAPACITY: usize = 10_000_000;

/// Largest supported level count (masks are `u64`, Gosper's step needs headroom).
pub const MAX_OMEGA: usize = 62;

/// One instance of the constant-coupling pairing Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    omega: usize,
    pairs: usize,
    eps: T,
    coupling: T,
    levels: Option<Vec<T>>,
}

impl<T: Real> ModelParams<T> {
    /// Half-filled model (`pairs = omega / 2`) with levels `k * eps`.
    pub fn new(omega: usize, eps: T, coupling: T) -> Result<Self> {
        let p = Self { omega, pairs: omega / 2, eps, coupling, levels: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_pairs(mut self, pairs: usize) -> Result<Self> {
        self.pairs = pairs;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the equally spaced spectrum by explicit level energies.
    pub fn with_levels(mut self, levels: Vec<T>) -> Result<Self> {
        self.levels = Some(levels);
        self.validate()?;
        Ok(self)
    }

    /// Same instance at a different coupling.
    pub fn with_coupling(&self, coupling: T) -> Result<Self> {
        let mut p = self.clone();
        p.coupling = coupling;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.omega == 0 || !self.omega.is_multiple_of(2) {
            return bad(format!("omega must be a positive even integer, got {}", self.omega));
        }
        if self.omega > MAX_OMEGA {
            return bad(format!("omega {} exceeds the supported maximum {MAX_OMEGA}", self.omega));
        }
        if self.pairs == 0 || self.pairs > self.omega {
            return bad(format!("pairs must lie in 1..={}, got {}", self.omega, self.pairs));
        }
        if !(self.eps > T::zero()) {
            return bad("level spacing must be positive".into());
        }
        if !(self.coupling >= T::zero()) {
            return bad("coupling must be non-negative".into());
        }
        if let Some(levels) = &self.levels {
            if levels.len() != self.omega {
                return bad(format!("{} level energies given for omega = {}", levels.len(), self.omega));
            }
            if levels.windows(2).any(|w| !(w[0] <= w[1])) {
                return bad("level energies must be nondecreasing".into());
            }
        }
        Ok(())
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// Fermion number `N = 2 * pairs`.
    pub fn particles(&self) -> usize {
        2 * self.pairs
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn is_half_filled(&self) -> bool {
        2 * self.pairs == self.omega
    }

    /// Single-particle energy of level `k` (1-based).
    pub fn level(&self, k: usize) -> T {
        match &self.levels {
            Some(l) => l[k - 1],
            None => self.eps * T::from_usize_lossy(k),
        }
    }

    pub fn level_energies(&self) -> Vec<T> {
        (1..=self.omega).map(|k| self.level(k)).collect()
    }

    /// Mean level energy, the half-filling chemical potential.
    pub fn mean_level(&self) -> T {
        let sum = (1..=self.omega).fold(T::zero(), |acc, k| acc + self.level(k));
        sum / T::from_usize_lossy(self.omega)
    }

    /// Energy of the unperturbed Fermi sea, `2 Σ_{k ≤ pairs} ε_k`.
    pub fn fermi_sea_energy(&self) -> T {
        let two = T::lit(2.0);
        (1..=self.pairs).fold(T::zero(), |acc, k| acc + two * self.level(k))
    }
}

/// `C(n, k)` in `u128`, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Ordered list of fixed-popcount pair configurations.
#[derive(Debug)]
pub struct PairBasis {
    omega: usize,
    pairs: usize,
    configs: Vec<u64>,
    hops: OnceLock<Vec<u32>>,
}

impl Clone for PairBasis {
    fn clone(&self) -> Self {
        Self { omega: self.omega, pairs: self.pairs, configs: self.configs.clone(), hops: OnceLock::new() }
    }
}

impl PartialEq for PairBasis {
    fn eq(&self, other: &Self) -> bool {
        self.omega == other.omega && self.pairs == other.pairs && self.configs == other.configs
    }
}

impl PairBasis {
    pub fn new(omega: usize, pairs: usize) -> Result<Self> {
        Self::with_capacity(omega, pairs, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(omega: usize, pairs: usize, cap: usize) -> Result<Self> {
        if omega == 0 || omega > MAX_OMEGA || pairs > omega {
            return Err(Error::Argument(format!("no pair basis for omega={omega}, pairs={pairs}")));
        }
        let dim = binomial(omega, pairs);
        if dim > cap as u128 {
            return Err(Error::Capacity { dim, cap });
        }
        let mut configs = Vec::with_capacity(dim as usize);
        if pairs == 0 {
            configs.push(0);
        } else {
            let limit = 1u64 << omega;
            let mut x = (1u64 << pairs) - 1;
            while x < limit {
                configs.push(x);
                // Gosper's hack: next larger integer with the same popcount.
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(configs.len() as u128, dim);
        Ok(Self { omega, pairs, configs, hops: OnceLock::new() })
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[u64] {
        &self.configs
    }

    pub fn config(&self, i: usize) -> u64 {
        self.configs[i]
    }

    pub fn rank(&self, mask: u64) -> Option<usize> {
        self.configs.binary_search(&mask).ok()
    }

    /// Whether level `k` (1-based) is occupied in configuration `i`.
    #[inline]
    pub fn occupied(&self, i: usize, k: usize) -> bool {
        self.configs[i] >> (k - 1) & 1 == 1
    }

    /// Number of configurations reached from any configuration by one pair hop.
    pub fn hops_per_config(&self) -> usize {
        self.pairs * (self.omega - self.pairs)
    }

    /// Flattened neighbour table: row `i` lists the ranks of every
    /// configuration obtained from `configs[i]` by moving one pair.
    pub fn hops(&self) -> &[u32] {
        self.hops.get_or_init(|| {
            let width = self.hops_per_config();
            let mut table = vec![0u32; self.dim() * width];
            if width == 0 {
                return table;
            }
            table.par_chunks_mut(width).zip(self.configs.par_iter()).for_each(|(row, &mask)| {
                let mut j = 0;
                for a in 0..self.omega {
                    if mask >> a & 1 == 0 {
                        continue;
                    }
                    for b in 0..self.omega {
                        if mask >> b & 1 == 1 {
                            continue;
                        }
                        let target = mask ^ (1 << a) ^ (1 << b);
                        row[j] = self.rank(target).expect("hop stays in basis") as u32;
                        j += 1;
                    }
                }
            });
            table
        })
    }

    pub fn neighbours(&self, i: usize) -> &[u32] {
        let w = self.hops_per_config();
        &self.hops()[i * w..(i + 1) * w]
    }
}

/// Enumerates the pair basis of `params` with the default capacity cap.
pub fn enumerate_basis<T: Real>(params: &ModelParams<T>) -> Result<PairBasis> {
    PairBasis::new(params.omega(), params.pairs())
}

/// Diagonal of H: `2 Σ_{k∈ν} ε_k − G · pairs` (the `k = k'` pairing term).
pub fn diagonal<T: Real>(params: &ModelParams<T>, basis: &PairBasis) -> Vec<T> {
    let levels = params.level_energies();
    let shift = params.coupling() * T::from_usize_lossy(basis.pairs());
    let two = T::lit(2.0);
    basis
        .configs()
        .iter()
        .map(|&mask| {
            let mut e = T::zero();
            let mut m = mask;
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                e += two * levels[k];
                m &= m - 1;
            }
            e - shift
        })
        .collect()
}

fn check_basis<T: Real>(params: &ModelParams<T>, basis: &PairBasis) -> Result<()> {
    if basis.omega() != params.omega() || basis.pairs() != params.pairs() {
        return Err(Error::Argument(format!(
            "basis (omega={}, pairs={}) does not match parameters (omega={}, pairs={})",
            basis.omega(),
            basis.pairs(),
            params.omega(),
            params.pairs()
        )));
    }
    Ok(())
}

/// `y = H x` without materialising H.
pub fn apply_hamiltonian<T: Real>(params: &ModelParams<T>, basis: &PairBasis, x: &DVector<T>) -> Result<DVector<T>> {
    check_basis(params, basis)?;
    if x.len() != basis.dim() {
        return Err(Error::Dimension { expected: basis.dim(), got: x.len() });
    }
    let diag = diagonal(params, basis);
    Ok(apply_with_diagonal(params.coupling(), basis, &diag, x))
}

pub(crate) fn apply_with_diagonal<T: Real>(g: T, basis: &PairBasis, diag: &[T], x: &DVector<T>) -> DVector<T> {
    let xs = x.as_slice();
    let mut y = DVector::zeros(basis.dim());
    if g == T::zero() || basis.hops_per_config() == 0 {
        for (yi, (&d, &xi)) in y.iter_mut().zip(diag.iter().zip(xs)) {
            *yi = d * xi;
        }
        return y;
    }
    let hops = basis.hops();
    let w = basis.hops_per_config();
    y.as_mut_slice().par_iter_mut().enumerate().with_min_len(256).for_each(|(i, yi)| {
        let mut off = T::zero();
        for &j in &hops[i * w..(i + 1) * w] {
            off += xs[j as usize];
        }
        *yi = diag[i] * xs[i] - g * off;
    });
    y
}

/// Dense matrix of H in the pair basis.
pub fn dense_hamiltonian<T: Real>(params: &ModelParams<T>, basis: &PairBasis) -> Result<DMatrix<T>> {
    check_basis(params, basis)?;
    let n = basis.dim();
    let diag = diagonal(params, basis);
    let g = params.coupling();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = diag[i];
        if g != T::zero() {
            for &j in basis.neighbours(i) {
                h[(j as usize, i)] = -g;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_basis() {
        let b = PairBasis::new(2, 1).unwrap();
        assert_eq!(b.configs(), &[0b01, 0b10]);
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn four_level_half_filled_listing() {
        let b = PairBasis::new(4, 2).unwrap();
        assert_eq!(b.configs(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for (i, &m) in b.configs().iter().enumerate() {
            assert_eq!(b.rank(m), Some(i));
        }
    }

    #[test]
    fn sixteen_levels_dimension() {
        let b = PairBasis::new(16, 8).unwrap();
        assert_eq!(b.dim(), 12870);
        assert!(b.configs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn capacity_is_enforced() {
        let err = PairBasis::with_capacity(16, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::Capacity { dim: 12870, cap: 1000 }));
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::<f64>::new(3, 1.0, 0.1).is_err());
        assert!(ModelParams::<f64>::new(4, 0.0, 0.1).is_err());
        assert!(ModelParams::<f64>::new(4, 1.0, -0.1).is_err());
        assert!(ModelParams::<f64>::new(4, 1.0, 0.1).unwrap().with_pairs(5).is_err());
        let p = ModelParams::<f64>::new(4, 1.0, 0.1).unwrap();
        assert!(p.clone().with_levels(vec![1.0, 2.0, 1.5, 3.0]).is_err());
        assert!(p.clone().with_levels(vec![1.0, 2.0]).is_err());
        let q = p.with_levels(vec![0.0, 0.0, 1.0, 4.0]).unwrap();
        assert_eq!(q.level(4), 4.0);
    }

    #[test]
    fn free_two_level_action() {
        let p = ModelParams::<f64>::new(2, 1.0, 0.0).unwrap();
        let b = enumerate_basis(&p).unwrap();
        let y = apply_hamiltonian(&p, &b, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(y.as_slice(), &[2.0, 0.0]);
    }

    #[test]
    fn coupled_two_level_action() {
        let p = ModelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let b = enumerate_basis(&p).unwrap();
        let y = apply_hamiltonian(&p, &b, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(y.as_slice(), &[1.0, -1.0]);
    }

    #[test]
    fn length_mismatch() {
        let p = ModelParams::<f64>::new(4, 1.0, 1.0).unwrap();
        let b = enumerate_basis(&p).unwrap();
        let err = apply_hamiltonian(&p, &b, &DVector::zeros(5)).unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 6, got: 5 });
    }

    #[test]
    fn connectivity() {
        for (omega, pairs) in [(4, 2), (6, 2), (8, 4), (8, 5)] {
            let b = PairBasis::new(omega, pairs).unwrap();
            for i in 0..b.dim() {
                let mut n = b.neighbours(i).to_vec();
                assert_eq!(n.len(), pairs * (omega - pairs));
                n.sort_unstable();
                n.dedup();
                assert_eq!(n.len(), pairs * (omega - pairs));
                assert!(!n.contains(&(i as u32)));
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(62, 31), 465428353255261088);
    }
}
