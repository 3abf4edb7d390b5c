//! Every measure at a single coupling for one method.

use std::sync::Arc;

use pairsim::entanglement::{
    binary_entropy_clamped, concurrence_closed, discord, eof_from_concurrence, mutual_information,
};
use pairsim::exact::{four_mode_block, ground_state_in, occupations, one_body_entropy, schmidt_entropy, ExactOptions};
use pairsim::meanfield::{bcs_energy, bcs_entropies, bcs_four_mode, pbcs_optimize_in, solve_gap};
use pairsim::model::binomial;
use pairsim::{FourModeEvenBlock, ModelParams, PairBasis};

use crate::{Method, Result};

/// Correlations between the pairs `k k̄` and `k' k̄'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMeasures {
    pub k: usize,
    pub kp: usize,
    pub concurrence: f64,
    pub e_pair: f64,
    pub mutual_information: f64,
    pub discord: f64,
}

impl PairMeasures {
    pub fn from_block(k: usize, kp: usize, block: &FourModeEvenBlock<f64>) -> Result<Self> {
        let concurrence = concurrence_closed(block);
        Ok(Self {
            k,
            kp,
            concurrence,
            e_pair: eof_from_concurrence(concurrence)?.e_pair,
            mutual_information: mutual_information(block),
            discord: discord(block),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasures {
    pub method: Method,
    /// `G / ε`.
    pub g: f64,
    pub energy: f64,
    /// One-body entropy over its maximum `2Ω`.
    pub e_over_2omega: f64,
    /// `k | k̄` entropy over its maximum: `log₂ C(Ω, N/2)` at fixed particle
    /// number, `Ω` for BCS.
    pub e_schmidt_scaled: f64,
    /// `Δ / (GΩ/2)`; absent for the exact method, 0 at `G = 0`.
    pub delta_over_g: Option<f64>,
    /// `(k, h(f_k))` for the requested levels.
    pub h_f: Vec<(usize, f64)>,
    pub pairs: Vec<PairMeasures>,
}

fn scaled_gap(delta: f64, params: &ModelParams<f64>) -> f64 {
    let g = params.coupling() * params.omega() as f64 / 2.0;
    if g == 0.0 {
        0.0
    } else {
        delta / g
    }
}

/// Evaluates `method` at `params`; `basis` must match `params`.
pub fn evaluate(
    method: Method,
    params: &ModelParams<f64>,
    basis: &Arc<PairBasis>,
    levels: &[usize],
    level_pairs: &[(usize, usize)],
) -> Result<PointMeasures> {
    let omega = params.omega();
    let g = params.coupling() / params.eps();
    let two_omega = 2.0 * omega as f64;
    let schmidt_max = (binomial(omega, params.pairs()) as f64).log2();
    let scaled_schmidt = |s: f64| if schmidt_max > 0.0 { s / schmidt_max } else { 0.0 };
    let h_of = |f: &[f64]| levels.iter().map(|&k| (k, binary_entropy_clamped(f[k - 1]))).collect::<Vec<_>>();

    match method {
        Method::Exact | Method::Pbcs => {
            let (state, energy, delta_over_g) = if method == Method::Exact {
                let s = ground_state_in(params, Arc::clone(basis), &ExactOptions::default())?;
                let e = s.energy().unwrap_or(f64::NAN);
                (s, e, None)
            } else {
                let sol = pbcs_optimize_in(params, Arc::clone(basis))?;
                let d = scaled_gap(sol.delta_var, params);
                (sol.state, sol.energy, Some(d))
            };
            let occ = occupations(&state);
            let pairs = level_pairs
                .iter()
                .map(|&(k, kp)| PairMeasures::from_block(k, kp, &four_mode_block(&state, k, kp)?))
                .collect::<Result<_>>()?;
            Ok(PointMeasures {
                method,
                g,
                energy,
                e_over_2omega: one_body_entropy(&occ) / two_omega,
                e_schmidt_scaled: scaled_schmidt(schmidt_entropy(&state)),
                delta_over_g,
                h_f: h_of(&occ.f),
                pairs,
            })
        }
        Method::Bcs => {
            let sol = solve_gap(params)?;
            let ent = bcs_entropies(&sol);
            let pairs = level_pairs
                .iter()
                .map(|&(k, kp)| PairMeasures::from_block(k, kp, &bcs_four_mode(&sol, k, kp)?))
                .collect::<Result<_>>()?;
            Ok(PointMeasures {
                method,
                g,
                energy: bcs_energy(params, &sol)?,
                e_over_2omega: ent.e_one_body / two_omega,
                e_schmidt_scaled: ent.e_schmidt / omega as f64,
                delta_over_g: Some(scaled_gap(sol.delta, params)),
                h_f: h_of(&sol.f),
                pairs,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(omega: usize, g: f64, method: Method) -> PointMeasures {
        let p = ModelParams::new(omega, 1.0, g).unwrap();
        let basis = Arc::new(PairBasis::new(omega, omega / 2).unwrap());
        evaluate(method, &p, &basis, &[1, omega], &[(omega / 2, omega / 2 + 1)]).unwrap()
    }

    #[test]
    fn two_level_concurrence() {
        let m = at(2, 1.0, Method::Exact);
        assert!((m.pairs[0].concurrence - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(m.delta_over_g.is_none());
    }

    #[test]
    fn bcs_scaled_entropies_coincide() {
        let m = at(8, 2.0, Method::Bcs);
        assert!(m.e_over_2omega > 0.0);
        assert!((m.e_over_2omega - m.e_schmidt_scaled).abs() < 1e-12);
    }

    #[test]
    fn zero_coupling_is_uncorrelated() {
        for method in Method::ALL {
            let m = at(6, 0.0, method);
            assert_eq!(m.e_over_2omega, 0.0, "{method:?}");
            assert_eq!(m.e_schmidt_scaled, 0.0);
            assert!(m.pairs.iter().all(|p| p.concurrence == 0.0 && p.mutual_information.abs() < 1e-15));
            assert_eq!(m.delta_over_g.unwrap_or(0.0), 0.0);
        }
    }
}
