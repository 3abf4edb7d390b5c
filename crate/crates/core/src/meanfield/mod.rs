//! BCS mean field and number-projected BCS (projection before variation).

mod bcs;
mod pbcs;

pub use bcs::{
    bcs_energy, bcs_entropies, bcs_four_mode, critical_coupling, generalized_density, solve_gap, BcsEntropies,
    BcsSolution, CriticalCoupling, GC_GAMMA,
};
pub use pbcs::{
    pbcs_optimize, pbcs_optimize_in, pbcs_state, pbcs_state_in, projected_energy, PbcsSolution, PBCS_SCAN_POINTS,
};
