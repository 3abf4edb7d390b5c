//! Full Fock-space oracle for small systems.
//!
//! The `2Ω` single-particle modes are ordered `(1, 1̄, 2, 2̄, …)`: mode
//! `2(k−1)` is `k` and mode `2(k−1)+1` is `k̄`. A basis index is a bit mask
//! `n` over modes and stands for `Π_m (c†_m)^{n_m} |0⟩` with the creation
//! operators applied left to right in increasing `m`. All fermionic signs
//! follow from this convention.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::binary_entropy_clamped;
use crate::exact::{occupations, one_body_entropy, FourModeEvenBlock, OccupationProfile, PairState};
use crate::linalg::{spectrum_entropy, sym_eigen};
use crate::{Error, Real, Result};

/// Largest Ω embedded into Fock space (`2^{2Ω} = 4096`).
pub const MAX_EMBED_OMEGA: usize = 6;
/// Largest Ω for [`verify_minimum`].
pub const MAX_VERIFY_OMEGA: usize = 4;
/// Coordinate step used by [`verify_minimum`].
pub const PERTURBATION_STEP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum FockState<T: Real> {
    Pure {
        modes: usize,
        psi: DVector<T>,
    },
    Mixed {
        modes: usize,
        rho: DMatrix<T>,
    },
    /// Density matrix diagonal in the occupation basis.
    Diagonal {
        modes: usize,
        p: DVector<T>,
    },
}

impl<T: Real> FockState<T> {
    pub fn modes(&self) -> usize {
        match self {
            FockState::Pure { modes, .. } | FockState::Mixed { modes, .. } | FockState::Diagonal { modes, .. } => {
                *modes
            }
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.modes()
    }

    /// Dense density matrix.
    pub fn density(&self) -> DMatrix<T> {
        match self {
            FockState::Pure { psi, .. } => psi * psi.transpose(),
            FockState::Mixed { rho, .. } => rho.clone(),
            FockState::Diagonal { p, .. } => DMatrix::from_diagonal(p),
        }
    }

    /// `⟨n|ρ|n⟩`.
    pub fn probability(&self, n: usize) -> T {
        match self {
            FockState::Pure { psi, .. } => psi[n] * psi[n],
            FockState::Mixed { rho, .. } => rho[(n, n)],
            FockState::Diagonal { p, .. } => p[n],
        }
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |a, n| a + self.probability(n))
    }

    /// Von Neumann entropy, base 2.
    pub fn entropy(&self) -> T {
        match self {
            FockState::Pure { .. } => T::zero(),
            FockState::Mixed { rho, .. } => spectrum_entropy(sym_eigen(rho).0.as_slice()),
            FockState::Diagonal { p, .. } => spectrum_entropy(p.as_slice()),
        }
    }
}

/// Fock mode of level `k` (1-based); `bar` selects `k̄`.
pub fn mode(k: usize, bar: bool) -> usize {
    2 * (k - 1) + usize::from(bar)
}

/// Sign of moving `c_j` past the occupied modes below `j`.
fn jw_sign(n: usize, j: usize) -> bool {
    (n & ((1usize << j) - 1)).count_ones() % 2 == 1
}

/// `c_j |ψ⟩`.
pub fn annihilate<T: Real>(psi: &DVector<T>, j: usize) -> DVector<T> {
    let mut out = DVector::zeros(psi.len());
    for (n, &a) in psi.iter().enumerate() {
        if a != T::zero() && n >> j & 1 == 1 {
            out[n ^ (1 << j)] = if jw_sign(n, j) { -a } else { a };
        }
    }
    out
}

/// `c†_j |ψ⟩`.
pub fn create<T: Real>(psi: &DVector<T>, j: usize) -> DVector<T> {
    let mut out = DVector::zeros(psi.len());
    for (n, &a) in psi.iter().enumerate() {
        if a != T::zero() && n >> j & 1 == 0 {
            out[n | (1 << j)] = if jw_sign(n, j) { -a } else { a };
        }
    }
    out
}

/// Pair-basis state as a Fock vector. Pair creation operators of distinct
/// levels commute, so no signs arise.
pub fn embed<T: Real>(state: &PairState<T>) -> Result<FockState<T>> {
    let omega = state.omega();
    if omega > MAX_EMBED_OMEGA {
        return Err(Error::Capacity { dim: 1u128 << (2 * omega), cap: 1 << (2 * MAX_EMBED_OMEGA) });
    }
    let modes = 2 * omega;
    let mut psi = DVector::zeros(1 << modes);
    for (i, &a) in state.amps().iter().enumerate() {
        let cfg = state.basis().config(i);
        let mut n = 0usize;
        for k in 0..omega {
            if cfg >> k & 1 == 1 {
                n |= 0b11 << (2 * k);
            }
        }
        psi[n] = a;
    }
    Ok(FockState::Pure { modes, psi })
}

/// Mode-wise occupations `⟨c†_j c_j⟩`.
pub fn mode_occupations<T: Real>(state: &FockState<T>) -> Vec<T> {
    let mut f = vec![T::zero(); state.modes()];
    for n in 0..state.dim() {
        let p = state.probability(n);
        for (j, fj) in f.iter_mut().enumerate() {
            if n >> j & 1 == 1 {
                *fj += p;
            }
        }
    }
    f
}

/// One-body density `ρ_ij = ⟨c†_j c_i⟩` of a pure state, by operator
/// application.
pub fn one_body_density<T: Real>(psi: &DVector<T>, modes: usize) -> DMatrix<T> {
    let lowered: Vec<DVector<T>> = (0..modes).map(|j| annihilate(psi, j)).collect();
    DMatrix::from_fn(modes, modes, |i, j| lowered[j].dot(&lowered[i]))
}

/// `⟨c†_k c†_k̄ c_k̄' c_k'⟩` of a pure state, by operator application.
pub fn pair_transfer<T: Real>(psi: &DVector<T>, k: usize, kp: usize) -> T {
    let mut v = annihilate(psi, mode(kp, false));
    v = annihilate(&v, mode(kp, true));
    v = create(&v, mode(k, true));
    v = create(&v, mode(k, false));
    psi.dot(&v)
}

/// Number-conserving gaussian reproducing the given occupations on all
/// `2Ω` modes: `Π_j [f_j n_j + (1 − f_j)(1 − n_j)]`.
pub fn gaussian_from_occupations<T: Real>(profile: &OccupationProfile<T>) -> Result<FockState<T>> {
    let omega = profile.omega();
    if omega > MAX_EMBED_OMEGA {
        return Err(Error::Capacity { dim: 1u128 << (2 * omega), cap: 1 << (2 * MAX_EMBED_OMEGA) });
    }
    let mut mode_f = Vec::with_capacity(2 * omega);
    for (k, &f) in profile.f.iter().enumerate() {
        if !(f > T::zero() && f < T::one()) {
            return Err(Error::DegenerateGaussian { mode: 2 * k, value: f.as_f64() });
        }
        mode_f.extend([f, f]);
    }
    Ok(product_state(&mode_f))
}

fn product_state<T: Real>(mode_f: &[T]) -> FockState<T> {
    let modes = mode_f.len();
    let p = DVector::from_fn(1 << modes, |n, _| {
        mode_f.iter().enumerate().fold(T::one(), |acc, (j, &f)| acc * if n >> j & 1 == 1 { f } else { T::one() - f })
    });
    FockState::Diagonal { modes, p }
}

/// Gaussian `Z⁻¹ exp(−Σ λ_j n_j)`.
pub fn gaussian_from_exponents<T: Real>(lambda: &[T]) -> FockState<T> {
    let f: Vec<T> = lambda.iter().map(|&l| T::one() / (T::one() + l.exp())).collect();
    product_state(&f)
}

/// `λ_j = ln(1/f_j − 1)`.
pub fn exponents_from_occupations<T: Real>(mode_f: &[T]) -> Vec<T> {
    mode_f.iter().map(|&f| (T::one() / f - T::one()).ln()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy<T> {
    Finite(T),
    /// `supp ρ ⊄ supp ρ'`.
    Infinite,
}

impl<T: Real> RelativeEntropy<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }
}

/// `S(ρ‖ρ') = −Tr ρ log₂ ρ' − S(ρ)`.
pub fn relative_entropy<T: Real>(rho: &FockState<T>, rhop: &FockState<T>) -> Result<RelativeEntropy<T>> {
    if rho.modes() != rhop.modes() {
        return Err(Error::Dimension { expected: rho.dim(), got: rhop.dim() });
    }
    let support_tol = T::tol(1e-14);
    let ln2 = T::LN_2();
    let mut cross = T::zero();
    match rhop {
        FockState::Diagonal { p, .. } => {
            for n in 0..rho.dim() {
                let w = rho.probability(n);
                if p[n] > T::zero() {
                    cross -= w * p[n].ln() / ln2;
                } else if w > support_tol {
                    return Ok(RelativeEntropy::Infinite);
                }
            }
        }
        _ => {
            let (vals, vecs) = sym_eigen(&rhop.density());
            let dense = rho.density();
            for (i, &l) in vals.iter().enumerate() {
                let v = vecs.column(i);
                let w = v.dot(&(&dense * v));
                if l > support_tol {
                    cross -= w * l.ln() / ln2;
                } else if w > support_tol {
                    return Ok(RelativeEntropy::Infinite);
                }
            }
        }
    }
    Ok(RelativeEntropy::Finite(cross - rho.entropy()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimumReport<T> {
    /// `S(ρ‖ρ')` at the matched gaussian.
    pub relative_entropy: T,
    /// `2 Σ_k h(f_k)`.
    pub one_body_entropy: T,
    pub identity_error: T,
    /// Increase of `S(ρ‖ρ')` for each perturbation.
    pub increases: Vec<T>,
    /// `max(0, −min increase)`.
    pub max_violation: T,
}

impl<T: Real> MinimumReport<T> {
    pub fn passed(&self, identity_tol: T) -> bool {
        self.identity_error <= identity_tol && self.increases.iter().all(|&d| d > T::zero())
    }
}

/// Checks that the gaussian matched to the one-body density minimises the
/// relative entropy, with minimum `2 Σ_k h(f_k)`, against `perturbations`
/// random moves `λ_j → λ_j ± 0.05`.
pub fn verify_minimum<T: Real>(state: &PairState<T>, perturbations: usize, seed: u64) -> Result<MinimumReport<T>> {
    if state.omega() > MAX_VERIFY_OMEGA {
        return Err(Error::Capacity { dim: 1u128 << (2 * state.omega()), cap: 1 << (2 * MAX_VERIFY_OMEGA) });
    }
    let rho = embed(state)?;
    let profile = occupations(state);
    let matched = gaussian_from_occupations(&profile)?;
    let base = relative_entropy(&rho, &matched)?
        .finite()
        .ok_or_else(|| Error::Validation("matched gaussian does not cover the state".into()))?;
    let target = one_body_entropy(&profile);

    let mode_f: Vec<T> = profile.f.iter().flat_map(|&f| [f, f]).collect();
    let lambda = exponents_from_occupations(&mode_f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = T::lit(PERTURBATION_STEP);
    let mut increases = Vec::with_capacity(perturbations);
    for _ in 0..perturbations {
        let j = rng.gen_range(0..lambda.len());
        let mut l = lambda.clone();
        l[j] += if rng.gen_bool(0.5) { step } else { -step };
        let value = relative_entropy(&rho, &gaussian_from_exponents(&l))?
            .finite()
            .ok_or_else(|| Error::Validation("perturbed gaussian lost support".into()))?;
        increases.push(value - base);
    }
    let min_inc = increases.iter().copied().fold(T::one() / T::machine_eps(), T::min);
    Ok(MinimumReport {
        relative_entropy: base,
        one_body_entropy: target,
        identity_error: (base - target).abs(),
        max_violation: if increases.is_empty() { T::zero() } else { (-min_inc).max(T::zero()) },
        increases,
    })
}

/// Reduced state of the modes in `keep` (strictly increasing). Local index
/// bit `i` is the occupation of `keep[i]`; the kept operators are moved to
/// the left of the traced ones before tracing, which fixes the signs.
pub fn partial_trace<T: Real>(state: &FockState<T>, keep: &[usize]) -> Result<DMatrix<T>> {
    let modes = state.modes();
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.last().is_some_and(|&m| m >= modes) {
        return Err(Error::Argument(format!("kept modes must be increasing and below {modes}, got {keep:?}")));
    }
    let keep_mask: usize = keep.iter().fold(0, |m, &j| m | 1 << j);
    let rest: Vec<usize> = (0..modes).filter(|j| keep_mask >> j & 1 == 0).collect();
    let dim_a = 1usize << keep.len();

    let split = |n: usize| -> (usize, usize, bool) {
        let a = keep.iter().enumerate().fold(0, |acc, (i, &j)| acc | (n >> j & 1) << i);
        let b = rest.iter().enumerate().fold(0, |acc, (i, &j)| acc | (n >> j & 1) << i);
        // Each kept occupied mode passes the traced occupied modes below it.
        let mut swaps = 0u32;
        for &j in keep {
            if n >> j & 1 == 1 {
                swaps += (n & !keep_mask & ((1usize << j) - 1)).count_ones();
            }
        }
        (a, b, swaps % 2 == 1)
    };

    let mut out = DMatrix::zeros(dim_a, dim_a);
    match state {
        FockState::Pure { psi, .. } => {
            let dim_b = 1usize << rest.len();
            let mut m = DMatrix::zeros(dim_b, dim_a);
            for (n, &x) in psi.iter().enumerate() {
                if x != T::zero() {
                    let (a, b, neg) = split(n);
                    m[(b, a)] = if neg { -x } else { x };
                }
            }
            out = m.transpose() * m;
        }
        FockState::Diagonal { p, .. } => {
            for (n, &x) in p.iter().enumerate() {
                let (a, _, _) = split(n);
                out[(a, a)] += x;
            }
        }
        FockState::Mixed { rho, .. } => {
            let parts: Vec<(usize, usize, bool)> = (0..state.dim()).map(split).collect();
            for n in 0..state.dim() {
                for np in 0..state.dim() {
                    let (a, b, s) = parts[n];
                    let (ap, bp, sp) = parts[np];
                    if b == bp {
                        let x = rho[(n, np)];
                        out[(a, ap)] += if s != sp { -x } else { x };
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reduced 16×16 state of modes `k, k̄, k', k̄'`, with the local indices of
/// the pair states.
#[derive(Debug, Clone, PartialEq)]
pub struct FourModeFock<T: Real> {
    pub rho: DMatrix<T>,
    /// Local index of `c†_k c†_k̄|0⟩`.
    pub pair_k: usize,
    /// Local index of `c†_k' c†_k̄'|0⟩`.
    pub pair_kp: usize,
}

pub const LOCAL_VACUUM: usize = 0;
pub const LOCAL_BOTH: usize = 15;

impl<T: Real> FourModeFock<T> {
    pub fn even_block(&self) -> FourModeEvenBlock<T> {
        let r = &self.rho;
        FourModeEvenBlock::from_parts(
            r[(LOCAL_BOTH, LOCAL_BOTH)],
            r[(self.pair_k, self.pair_k)],
            r[(self.pair_kp, self.pair_kp)],
            r[(LOCAL_VACUUM, LOCAL_VACUUM)],
            // ⟨pair k'|ρ|pair k⟩ = ⟨c†_k c†_k̄ c_k̄' c_k'⟩
            r[(self.pair_kp, self.pair_k)],
        )
    }

    /// Largest `|ρ_ij|` with `i` or `j` of odd local parity.
    pub fn odd_parity_max(&self) -> T {
        self.max_where(|i| i.count_ones() % 2 == 1)
    }

    /// Largest `|ρ_ij|` with `i` or `j` outside the four paired states.
    pub fn broken_pair_max(&self) -> T {
        let paired = [LOCAL_VACUUM, self.pair_k, self.pair_kp, LOCAL_BOTH];
        self.max_where(|i| !paired.contains(&i))
    }

    fn max_where(&self, pick: impl Fn(usize) -> bool) -> T {
        let mut worst = T::zero();
        for i in 0..16 {
            for j in 0..16 {
                if pick(i) || pick(j) {
                    worst = worst.max(self.rho[(i, j)].abs());
                }
            }
        }
        worst
    }
}

/// Partial trace onto levels `k ≠ k'` (1-based).
pub fn partial_trace_four_modes<T: Real>(state: &FockState<T>, k: usize, kp: usize) -> Result<FourModeFock<T>> {
    let omega = state.modes() / 2;
    for idx in [k, kp] {
        if idx == 0 || idx > omega {
            return Err(Error::LevelIndex { index: idx, omega });
        }
    }
    if k == kp {
        return Err(Error::Argument(format!("four-mode trace needs distinct levels, got k = k' = {k}")));
    }
    let (lo, hi) = (k.min(kp), k.max(kp));
    let keep = [mode(lo, false), mode(lo, true), mode(hi, false), mode(hi, true)];
    let rho = partial_trace(state, &keep)?;
    let (pair_k, pair_kp) = if k < kp { (3, 12) } else { (12, 3) };
    Ok(FourModeFock { rho, pair_k, pair_kp })
}

/// Entropy of the reduced state of all `k` modes (tracing out every `k̄`).
pub fn unbarred_entropy<T: Real>(state: &FockState<T>) -> Result<T> {
    let keep: Vec<usize> = (0..state.modes() / 2).map(|k| 2 * k).collect();
    let rho = partial_trace(state, &keep)?;
    Ok(spectrum_entropy(sym_eigen(&rho).0.as_slice()))
}

/// `Σ_j h(f_j)` over all modes of a product state.
pub fn mode_entropy_sum<T: Real>(state: &FockState<T>) -> T {
    mode_occupations(state).into_iter().fold(T::zero(), |a, f| a + binary_entropy_clamped(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ground_state;
    use crate::ModelParams;
    use std::sync::Arc;

    fn state(omega: usize, g: f64) -> PairState<f64> {
        ground_state(&ModelParams::new(omega, 1.0, g).unwrap()).unwrap()
    }

    #[test]
    fn operators_anticommute() {
        let psi = DVector::from_fn(16, |i, _| (i as f64 * 0.7).sin());
        for i in 0..4 {
            for j in 0..4 {
                let a = create(&annihilate(&psi, j), i) + annihilate(&create(&psi, i), j);
                let expect = if i == j { psi.clone() } else { DVector::zeros(16) };
                assert!((a - expect).amax() < 1e-15);
                let b = create(&create(&psi, j), i) + create(&create(&psi, i), j);
                assert!(b.amax() < 1e-15);
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let basis = Arc::new(crate::PairBasis::new(2, 1).unwrap());
        let sea = embed(&PairState::<f64>::fermi_sea(basis)).unwrap();
        let FockState::Pure { psi, .. } = &sea else { panic!() };
        assert_eq!(psi[0b0011], 1.0);
        let s = embed(&state(2, 1.0)).unwrap();
        let FockState::Pure { psi, .. } = &s else { panic!() };
        assert!((psi[0b0011] - 0.92388).abs() < 1e-5);
        assert!((psi[0b1100] - 0.38268).abs() < 1e-5);
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        let big = ground_state(&ModelParams::new(8, 1.0, 0.5).unwrap()).unwrap();
        assert!(matches!(embed(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn gaussian_examples() {
        let half = OccupationProfile { f: vec![0.5f64; 3] };
        let g = gaussian_from_occupations(&half).unwrap();
        assert!((g.entropy() - 6.0).abs() < 1e-12);
        let p = occupations(&state(2, 1.0));
        let g = gaussian_from_occupations(&p).unwrap();
        assert!((g.entropy() - one_body_entropy(&p)).abs() < 1e-12);
        assert!((g.entropy() - 2.403504).abs() < 1e-6);
        assert!((g.trace() - 1.0).abs() < 1e-14);
        let edge = OccupationProfile { f: vec![1.0f64, 0.0] };
        assert!(matches!(gaussian_from_occupations(&edge), Err(Error::DegenerateGaussian { .. })));
    }

    #[test]
    fn relative_entropy_examples() {
        let p = occupations(&state(2, 1.0));
        let g = gaussian_from_occupations(&p).unwrap();
        assert!(relative_entropy(&g, &g).unwrap().finite().unwrap().abs() < 1e-12);
        let rho = embed(&state(2, 1.0)).unwrap();
        let s = relative_entropy(&rho, &g).unwrap().finite().unwrap();
        assert!((s - g.entropy()).abs() < 1e-12);
        // same through the dense path
        let dense = FockState::Mixed { modes: 4, rho: g.density() };
        let s2 = relative_entropy(&rho, &dense).unwrap().finite().unwrap();
        assert!((s - s2).abs() < 1e-10);
        let narrow = FockState::Diagonal { modes: 4, p: DVector::from_fn(16, |i, _| if i == 3 { 1.0 } else { 0.0 }) };
        assert_eq!(relative_entropy(&rho, &narrow).unwrap(), RelativeEntropy::Infinite);
    }

    #[test]
    fn minimum_examples() {
        let r = verify_minimum(&state(2, 1.0), 20, 7).unwrap();
        assert!(r.passed(1e-8), "{r:?}");
        let r = verify_minimum(&state(4, 1.0), 20, 7).unwrap();
        assert!(r.identity_error < 1e-8 && r.max_violation == 0.0);
        assert!(verify_minimum(&state(6, 1.0), 1, 7).is_err());
    }

    #[test]
    fn partial_trace_matches_pair_objects() {
        let s = state(4, 1.0);
        let rho = embed(&s).unwrap();
        for (k, kp) in [(2, 3), (1, 4), (3, 1)] {
            let t = partial_trace_four_modes(&rho, k, kp).unwrap();
            let b = crate::exact::four_mode_block(&s, k, kp).unwrap();
            let f = t.even_block();
            for (x, y) in [
                (f.nn, b.nn),
                (f.n_tilde, b.n_tilde),
                (f.tilde_n, b.tilde_n),
                (f.tilde_tilde, b.tilde_tilde),
                (f.pair_transfer, b.pair_transfer),
            ] {
                assert!((x - y).abs() < 1e-12);
            }
            assert_eq!(t.odd_parity_max(), 0.0);
            assert!(t.broken_pair_max() < 1e-15);
            let FockState::Pure { psi, .. } = &rho else { panic!() };
            assert!((pair_transfer(psi, k, kp) - b.pair_transfer).abs() < 1e-12);
        }
    }

    #[test]
    fn traced_signs_follow_anticommutation() {
        // c†_1 c†_2 |0⟩ reduced to mode 1 and 2 keeps its off-diagonal sign
        // in (|01⟩ + |10⟩) combinations.
        let mut psi = DVector::<f64>::zeros(8);
        psi[0b011] = 0.6;
        psi[0b110] = 0.8;
        let s = FockState::Pure { modes: 3, psi: psi.clone() };
        let r = partial_trace(&s, &[0, 2]).unwrap();
        // |011⟩ = c†0 c†1, |110⟩ = c†1 c†2 = −c†2 c†1 reorders with a sign.
        assert!((r[(0b01, 0b10)] + 0.48).abs() < 1e-15);
        let m = FockState::Mixed { modes: 3, rho: &psi * psi.transpose() };
        assert!((partial_trace(&m, &[0, 2]).unwrap() - r).amax() < 1e-15);
        assert!(partial_trace(&s, &[2, 0]).is_err());
    }
}
