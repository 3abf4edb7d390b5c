use std::sync::Arc;

use nalgebra::DVector;
use rayon::prelude::*;

use super::bcs::bcs_amplitudes;
use crate::exact::PairState;
use crate::linalg::golden_section;
use crate::model::{apply_with_diagonal, diagonal, PairBasis, DEFAULT_CAPACITY};
use crate::{Error, ModelParams, Real, Result};

/// Points in the logarithmic bracket scan preceding the golden-section search.
pub const PBCS_SCAN_POINTS: usize = 16;

/// Number-projected BCS state with a variationally optimised gap.
#[derive(Debug, Clone)]
pub struct PbcsSolution<T> {
    pub delta_var: T,
    pub state: PairState<T>,
    /// Projected energy `⟨ψ|H|ψ⟩` at `delta_var`.
    pub energy: T,
    /// The minimum sits at an end of the search range.
    pub at_boundary: bool,
}

fn check_basis<T: Real>(params: &ModelParams<T>, basis: &PairBasis) -> Result<()> {
    if basis.omega() != params.omega() || basis.pairs() != params.pairs() {
        return Err(Error::Argument("basis does not match model parameters".into()));
    }
    Ok(())
}

/// `P_N |BCS(Δ)⟩` with `u, v` from the BCS formulas at `μ = ⟨ε⟩`.
pub fn pbcs_state<T: Real>(params: &ModelParams<T>, delta: T) -> Result<PairState<T>> {
    let basis = Arc::new(PairBasis::with_capacity(params.omega(), params.pairs(), DEFAULT_CAPACITY)?);
    pbcs_state_in(params, basis, delta)
}

pub fn pbcs_state_in<T: Real>(params: &ModelParams<T>, basis: Arc<PairBasis>, delta: T) -> Result<PairState<T>> {
    params.validate()?;
    check_basis(params, &basis)?;
    if !(delta >= T::zero()) || !delta.is_finite() {
        return Err(Error::Domain { value: delta.as_f64(), domain: "[0, inf)" });
    }
    if delta == T::zero() {
        return Ok(PairState::fermi_sea(basis));
    }
    let mu = params.mean_level();
    let shifted: Vec<T> = params.level_energies().into_iter().map(|e| e - mu).collect();
    let (_, _, _, f) = bcs_amplitudes(&shifted, delta);
    let half = T::lit(0.5);
    // ln v_k and ln u_k; the products are formed as exp(Σ − max) so that
    // Δ ≫ ε or Δ ≪ ε cannot underflow.
    let log_v: Vec<T> = f.iter().map(|&x| half * x.ln()).collect();
    let log_u: Vec<T> = f.iter().map(|&x| half * (T::one() - x).ln()).collect();
    let omega = params.omega();
    let logs: Vec<T> = basis
        .configs()
        .iter()
        .map(|&mask| (0..omega).fold(T::zero(), |acc, k| acc + if mask >> k & 1 == 1 { log_v[k] } else { log_u[k] }))
        .collect();
    let top = logs.iter().copied().fold(logs[0], T::max);
    let amps = DVector::from_iterator(logs.len(), logs.iter().map(|&l| (l - top).exp()));
    PairState::new(basis, amps)
}

/// `⟨ψ|H|ψ⟩` for a normalised state.
pub fn projected_energy<T: Real>(params: &ModelParams<T>, state: &PairState<T>) -> Result<T> {
    check_basis(params, state.basis())?;
    let diag = diagonal(params, state.basis());
    Ok(energy_with_diagonal(params.coupling(), state, &diag))
}

fn energy_with_diagonal<T: Real>(g: T, state: &PairState<T>, diag: &[T]) -> T {
    let hx = apply_with_diagonal(g, state.basis(), diag, state.amps());
    state.amps().dot(&hx)
}

/// Minimises the projected energy over `Δ ∈ [0, 3GΩ]`.
pub fn pbcs_optimize<T: Real>(params: &ModelParams<T>) -> Result<PbcsSolution<T>> {
    let basis = Arc::new(PairBasis::with_capacity(params.omega(), params.pairs(), DEFAULT_CAPACITY)?);
    pbcs_optimize_in(params, basis)
}

pub fn pbcs_optimize_in<T: Real>(params: &ModelParams<T>, basis: Arc<PairBasis>) -> Result<PbcsSolution<T>> {
    params.validate()?;
    check_basis(params, &basis)?;
    let g = params.coupling();
    let diag = diagonal(params, &basis);
    let energy_at = |d: T| -> Result<T> {
        let s = pbcs_state_in(params, Arc::clone(&basis), d)?;
        Ok(energy_with_diagonal(g, &s, &diag))
    };

    if g == T::zero() {
        let state = PairState::fermi_sea(Arc::clone(&basis));
        let energy = energy_with_diagonal(g, &state, &diag);
        return Ok(PbcsSolution { delta_var: T::zero(), state, energy, at_boundary: true });
    }

    let upper = T::lit(3.0) * g * T::from_usize_lossy(params.omega());
    let lower = upper * T::lit(1e-6);
    let ratio = (upper / lower).ln() / T::from_usize_lossy(PBCS_SCAN_POINTS - 1);
    let mut grid = vec![T::zero()];
    grid.extend((0..PBCS_SCAN_POINTS).map(|i| {
        if i + 1 == PBCS_SCAN_POINTS {
            upper
        } else {
            lower * (ratio * T::from_usize_lossy(i)).exp()
        }
    }));
    let energies: Vec<T> = grid.par_iter().map(|&d| energy_at(d)).collect::<Result<_>>()?;
    let best = (0..grid.len())
        .min_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let at_boundary = best == 0 || best + 1 == grid.len();

    let (mut delta, mut energy) = (grid[best], energies[best]);
    if !at_boundary {
        let (a, b) = (grid[best - 1], grid[best + 1]);
        let f = |d: T| energy_at(d).unwrap_or(T::one() / T::machine_eps());
        let (x, fx) = golden_section(f, a, b, (b - a) * T::tol(1e-9));
        if fx <= energy {
            delta = x;
            energy = fx;
        }
    }
    let state = pbcs_state_in(params, basis, delta)?.with_energy(energy);
    Ok(PbcsSolution { delta_var: delta, state, energy, at_boundary })
}
