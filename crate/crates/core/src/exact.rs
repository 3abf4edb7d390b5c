//! Exact ground state in the pair basis and the reduced objects built from it.

use std::sync::Arc;

use nalgebra::{DVector, Matrix2, Matrix4};

use crate::entanglement::binary_entropy_clamped;
use crate::linalg::{lanczos_lowest, spectrum_entropy, sym_eigen, LanczosOptions};
use crate::model::{apply_with_diagonal, dense_hamiltonian, diagonal, PairBasis, DEFAULT_CAPACITY};
use crate::{Error, ModelParams, Real, Result};

/// Real amplitudes over a pair basis.
#[derive(Debug, Clone)]
pub struct PairState<T> {
    basis: Arc<PairBasis>,
    amps: DVector<T>,
    energy: Option<T>,
}

impl<T: Real> PairState<T> {
    /// Wraps externally built amplitudes, normalising them.
    pub fn new(basis: Arc<PairBasis>, amps: DVector<T>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::Dimension { expected: basis.dim(), got: amps.len() });
        }
        let n = amps.norm();
        if !(n > T::zero()) {
            return Err(Error::Argument("state vector has zero norm".into()));
        }
        Ok(Self { basis, amps: amps / n, energy: None })
    }

    pub(crate) fn with_energy(mut self, energy: T) -> Self {
        self.energy = Some(energy);
        self
    }

    /// Fermi sea: the lowest `pairs` levels doubly occupied.
    pub fn fermi_sea(basis: Arc<PairBasis>) -> Self {
        let mut amps = DVector::zeros(basis.dim());
        amps[0] = T::one();
        Self { basis, amps, energy: None }
    }

    pub fn basis(&self) -> &PairBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> Arc<PairBasis> {
        Arc::clone(&self.basis)
    }

    pub fn amps(&self) -> &DVector<T> {
        &self.amps
    }

    pub fn energy(&self) -> Option<T> {
        self.energy
    }

    pub fn omega(&self) -> usize {
        self.basis.omega()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.omega() {
            Err(Error::LevelIndex { index: k, omega: self.omega() })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactOptions<T> {
    /// Dense diagonalisation up to and including this dimension.
    pub dense_threshold: usize,
    pub capacity: usize,
    pub lanczos: LanczosOptions<T>,
    /// Amplitudes above `-gauge_tol` count as non-negative.
    pub gauge_tol: T,
}

impl<T: Real> Default for ExactOptions<T> {
    fn default() -> Self {
        Self {
            dense_threshold: 2000,
            capacity: DEFAULT_CAPACITY,
            lanczos: LanczosOptions::default(),
            gauge_tol: T::tol(1e-9),
        }
    }
}

/// Lowest eigenvector of H in the pair basis, in the non-negative gauge.
pub fn ground_state<T: Real>(params: &ModelParams<T>) -> Result<PairState<T>> {
    let basis = Arc::new(PairBasis::with_capacity(params.omega(), params.pairs(), DEFAULT_CAPACITY)?);
    ground_state_in(params, basis, &ExactOptions::default())
}

/// Same as [`ground_state`] on a prebuilt (shareable) basis.
pub fn ground_state_in<T: Real>(
    params: &ModelParams<T>,
    basis: Arc<PairBasis>,
    opts: &ExactOptions<T>,
) -> Result<PairState<T>> {
    params.validate()?;
    if basis.omega() != params.omega() || basis.pairs() != params.pairs() {
        return Err(Error::Argument("basis does not match model parameters".into()));
    }
    if basis.dim() > opts.capacity {
        return Err(Error::Capacity { dim: basis.dim() as u128, cap: opts.capacity });
    }
    let diag = diagonal(params, &basis);
    let g = params.coupling();
    let scale = params.eps();

    // H is diagonal at G = 0; a unique minimum is the ground state exactly.
    if g == T::zero() {
        let lowest = diag.iter().copied().fold(diag[0], T::min);
        let mut at = diag.iter().enumerate().filter(|(_, &d)| d == lowest).map(|(i, _)| i);
        if let (Some(i), None) = (at.next(), at.next()) {
            let mut amps = DVector::zeros(basis.dim());
            amps[i] = T::one();
            return Ok(PairState { basis, amps, energy: None }.with_energy(lowest));
        }
    }

    let (energy, mut amps) = if basis.dim() <= opts.dense_threshold {
        let h = dense_hamiltonian(params, &basis)?;
        let (vals, vecs) = sym_eigen(&h);
        let x = vecs.column(0).into_owned();
        let r = (&h * &x - &x * vals[0]).norm();
        let tol = opts.lanczos.residual_tol * vals[0].abs().max(scale);
        if r > tol {
            return Err(Error::NotConverged { iterations: 0, residual: r.as_f64() });
        }
        (vals[0], x)
    } else {
        let mut lopts = opts.lanczos.clone();
        lopts.residual_scale = scale;
        let start = DVector::from_element(basis.dim(), T::one());
        let res = lanczos_lowest(&start, |x| apply_with_diagonal(g, &basis, &diag, x), &lopts)?;
        (res.value, res.vector)
    };

    if amps.iter().fold(T::zero(), |a, &x| a + x) < T::zero() {
        amps.neg_mut();
    }
    for (i, a) in amps.iter_mut().enumerate() {
        if *a < T::zero() {
            if *a < -opts.gauge_tol {
                return Err(Error::Gauge { index: i, value: a.as_f64() });
            }
            *a = T::zero();
        }
    }
    let n = amps.norm();
    amps /= n;
    Ok(PairState { basis, amps, energy: None }.with_energy(energy))
}

/// Average occupations `f_k` of each single-particle state `k` (equal for `k̄`).
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationProfile<T> {
    pub f: Vec<T>,
}

impl<T: Real> OccupationProfile<T> {
    pub fn omega(&self) -> usize {
        self.f.len()
    }

    /// Occupation of level `k` (1-based).
    pub fn get(&self, k: usize) -> T {
        self.f[k - 1]
    }

    /// `2 Σ f_k`.
    pub fn particle_number(&self) -> T {
        self.f.iter().fold(T::zero(), |a, &x| a + x) * T::lit(2.0)
    }
}

pub fn occupations<T: Real>(state: &PairState<T>) -> OccupationProfile<T> {
    let basis = state.basis();
    let mut f = vec![T::zero(); basis.omega()];
    for (i, &a) in state.amps().iter().enumerate() {
        let w = a * a;
        let mut m = basis.config(i);
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            f[k] += w;
            m &= m - 1;
        }
    }
    OccupationProfile { f }
}

/// One-body entanglement entropy `2 Σ_k h(f_k)`.
pub fn one_body_entropy<T: Real>(profile: &OccupationProfile<T>) -> T {
    let two = T::lit(2.0);
    profile.f.iter().fold(T::zero(), |a, &f| a + two * binary_entropy_clamped(f))
}

/// Quadratic (linear) entropy of the one-body density, `8 Σ_k f_k (1 − f_k)`.
pub fn quadratic_entropy<T: Real>(profile: &OccupationProfile<T>) -> T {
    let eight = T::lit(8.0);
    profile.f.iter().fold(T::zero(), |a, &f| a + eight * f * (T::one() - f))
}

/// Entropy of the bipartition {k} | {k̄}: the amplitudes are already its
/// Schmidt coefficients.
pub fn schmidt_entropy<T: Real>(state: &PairState<T>) -> T {
    let w: Vec<T> = state.amps().iter().map(|&a| a * a).collect();
    spectrum_entropy(&w)
}

/// Reduced state of a single mode `k` (also `k̄`, and the even block of the
/// pair `k k̄`) in the basis {occupied, empty}.
pub fn pair_mode_state<T: Real>(profile: &OccupationProfile<T>, k: usize) -> Result<Matrix2<T>> {
    if k == 0 || k > profile.omega() {
        return Err(Error::LevelIndex { index: k, omega: profile.omega() });
    }
    let f = profile.get(k);
    Ok(Matrix2::new(f, T::zero(), T::zero(), T::one() - f))
}

/// Non-zero even-parity block of the reduced state of modes `k k̄ k' k̄'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourModeEvenBlock<T> {
    /// Both pairs occupied.
    pub nn: T,
    /// Pair `k` occupied, pair `k'` empty.
    pub n_tilde: T,
    /// Pair `k` empty, pair `k'` occupied.
    pub tilde_n: T,
    /// Both pairs empty.
    pub tilde_tilde: T,
    /// `⟨c†_k c†_k̄ c_k̄' c_k'⟩`.
    pub pair_transfer: T,
    pub fk: T,
    pub fkp: T,
}

impl<T: Real> FourModeEvenBlock<T> {
    /// Block from its four probabilities and the pair-transfer element; the
    /// marginals are derived.
    pub fn from_parts(nn: T, n_tilde: T, tilde_n: T, tilde_tilde: T, pair_transfer: T) -> Self {
        Self { nn, n_tilde, tilde_n, tilde_tilde, pair_transfer, fk: nn + n_tilde, fkp: nn + tilde_n }
    }

    /// 4×4 matrix in the basis {both pairs, pair k, pair k', vacuum}.
    pub fn matrix(&self) -> Matrix4<T> {
        let z = T::zero();
        #[rustfmt::skip]
        let m = Matrix4::new(
            self.nn, z, z, z,
            z, self.n_tilde, self.pair_transfer, z,
            z, self.pair_transfer, self.tilde_n, z,
            z, z, z, self.tilde_tilde,
        );
        m
    }

    /// Eigenvalues of [`Self::matrix`], ascending.
    pub fn spectrum(&self) -> [T; 4] {
        let two = T::lit(2.0);
        let mean = (self.n_tilde + self.tilde_n) / two;
        let half_gap = ((self.n_tilde - self.tilde_n) / two).hypot(self.pair_transfer);
        let mut s = [self.nn, self.tilde_tilde, mean - half_gap, mean + half_gap];
        s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        s
    }

    /// Von Neumann entropy (base 2) of the block.
    pub fn entropy(&self) -> T {
        spectrum_entropy(&self.spectrum())
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        let probs = [self.nn, self.n_tilde, self.tilde_n, self.tilde_tilde];
        if probs.iter().any(|&p| p < -tol || p > T::one() + tol) {
            return Err(Error::Validation("four-mode probability outside [0, 1]".into()));
        }
        let total = probs.iter().fold(T::zero(), |a, &p| a + p);
        if (total - T::one()).abs() > tol {
            return Err(Error::Validation(format!("four-mode probabilities sum to {}", total.as_f64())));
        }
        if (self.nn + self.n_tilde - self.fk).abs() > tol || (self.nn + self.tilde_n - self.fkp).abs() > tol {
            return Err(Error::Validation("four-mode marginals disagree with occupations".into()));
        }
        if self.n_tilde * self.tilde_n - self.pair_transfer * self.pair_transfer < -tol {
            return Err(Error::Validation("inner block of the four-mode state is not PSD".into()));
        }
        Ok(())
    }
}

/// Reduced even-parity block for levels `k != kp` (1-based).
pub fn four_mode_block<T: Real>(state: &PairState<T>, k: usize, kp: usize) -> Result<FourModeEvenBlock<T>> {
    state.check_level(k)?;
    state.check_level(kp)?;
    if k == kp {
        return Err(Error::Argument(format!("four-mode block needs distinct levels, got k = k' = {k}")));
    }
    let basis = state.basis();
    let amps = state.amps();
    let bk = 1u64 << (k - 1);
    let bkp = 1u64 << (kp - 1);
    let (mut nn, mut nt, mut tn, mut tt, mut pt) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for (i, &mask) in basis.configs().iter().enumerate() {
        let a = amps[i];
        let w = a * a;
        match (mask & bk != 0, mask & bkp != 0) {
            (true, true) => nn += w,
            (true, false) => nt += w,
            (false, true) => {
                tn += w;
                // Move the pair from k' to k.
                if let Some(j) = basis.rank(mask ^ bk ^ bkp) {
                    pt += amps[j] * a;
                }
            }
            (false, false) => tt += w,
        }
    }
    Ok(FourModeEvenBlock::from_parts(nn, nt, tn, tt, pt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::LanczosOptions;

    fn two_level(g: f64) -> PairState<f64> {
        ground_state(&ModelParams::new(2, 1.0, g).unwrap()).unwrap()
    }

    #[test]
    fn two_level_amplitudes() {
        let s = two_level(1.0);
        let lam = 2f64.sqrt();
        let a1 = ((lam + 1.0) / (2.0 * lam)).sqrt();
        let a2 = ((lam - 1.0) / (2.0 * lam)).sqrt();
        assert!((s.amps()[0] - a1).abs() < 1e-12);
        assert!((s.amps()[1] - a2).abs() < 1e-12);
        assert!((a1 - 0.92388).abs() < 1e-5 && (a2 - 0.38268).abs() < 1e-5);
        // eigenvalue of [[1, -1], [-1, 3]]
        assert!((s.energy().unwrap() - (2.0 - lam)).abs() < 1e-12);
    }

    #[test]
    fn two_level_occupations_and_entropies() {
        let s = two_level(1.0);
        let p = occupations(&s);
        assert!((p.f[0] - 0.853553).abs() < 1e-6);
        assert!((p.f[1] - 0.146447).abs() < 1e-6);
        assert!((p.particle_number() - 2.0).abs() < 1e-12);
        assert!((one_body_entropy(&p) - 2.403504).abs() < 1e-6);
        assert!((schmidt_entropy(&s) - 0.60087).abs() < 1e-5);
    }

    #[test]
    fn two_level_block() {
        let b = four_mode_block(&two_level(1.0), 1, 2).unwrap();
        assert!(b.nn.abs() < 1e-15 && b.tilde_tilde.abs() < 1e-15);
        assert!((b.n_tilde - 0.853553).abs() < 1e-6);
        assert!((b.tilde_n - 0.146447).abs() < 1e-6);
        assert!((b.pair_transfer - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-12);
        b.validate(1e-12).unwrap();
    }

    #[test]
    fn free_ground_state_is_fermi_sea() {
        for omega in [2, 4, 8, 14] {
            let p = ModelParams::<f64>::new(omega, 1.0, 0.0).unwrap();
            let s = ground_state(&p).unwrap();
            assert_eq!(s.amps()[0], 1.0, "omega={omega}");
            assert_eq!(s.amps().iter().filter(|&&a| a != 0.0).count(), 1);
            assert!((s.energy().unwrap() - p.fermi_sea_energy()).abs() < 1e-9);
            let prof = occupations(&s);
            for k in 1..=omega {
                let expect = if k <= omega / 2 { 1.0 } else { 0.0 };
                assert!((prof.get(k) - expect).abs() < 1e-12);
            }
            assert!(one_body_entropy(&prof).abs() < 1e-10);
            assert!(quadratic_entropy(&prof).abs() < 1e-10);
            assert!(schmidt_entropy(&s).abs() < 1e-10);
        }
    }

    #[test]
    fn lanczos_and_dense_agree() {
        let p = ModelParams::<f64>::new(10, 1.0, 0.4).unwrap();
        let basis = Arc::new(PairBasis::new(10, 5).unwrap());
        let dense = ground_state_in(&p, basis.clone(), &ExactOptions::default()).unwrap();
        let opts = ExactOptions { dense_threshold: 0, ..ExactOptions::default() };
        let lanczos = ground_state_in(&p, basis, &opts).unwrap();
        assert!((dense.energy().unwrap() - lanczos.energy().unwrap()).abs() < 1e-10);
        assert!((dense.amps() - lanczos.amps()).amax() < 1e-8);
    }

    #[test]
    fn solver_reports_non_convergence() {
        let p = ModelParams::<f64>::new(12, 1.0, 0.3).unwrap();
        let basis = Arc::new(PairBasis::new(12, 6).unwrap());
        let opts = ExactOptions {
            dense_threshold: 0,
            lanczos: LanczosOptions { max_iter: 3, ..LanczosOptions::default() },
            ..ExactOptions::default()
        };
        assert!(matches!(ground_state_in(&p, basis, &opts), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn single_mode_states() {
        let prof = OccupationProfile { f: vec![1.0, 0.5] };
        assert_eq!(pair_mode_state(&prof, 1).unwrap(), Matrix2::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(pair_mode_state(&prof, 2).unwrap(), Matrix2::new(0.5, 0.0, 0.0, 0.5));
        assert!(matches!(pair_mode_state(&prof, 3), Err(Error::LevelIndex { .. })));
        assert!(matches!(pair_mode_state(&prof, 0), Err(Error::LevelIndex { .. })));
    }

    #[test]
    fn block_argument_errors() {
        let s = two_level(0.5);
        assert!(matches!(four_mode_block(&s, 1, 1), Err(Error::Argument(_))));
        assert!(matches!(four_mode_block(&s, 1, 3), Err(Error::LevelIndex { .. })));
    }

    #[test]
    fn single_precision_two_level() {
        let s = ground_state(&ModelParams::<f32>::new(2, 1.0, 1.0).unwrap()).unwrap();
        assert!((s.amps()[0] - 0.92388).abs() < 1e-5);
    }
}
