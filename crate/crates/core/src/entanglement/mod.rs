//! Entropies, fermionic concurrence, entanglement of formation, mutual
//! information and quantum discord of pair-mode reduced states.
//!
//! Every function here is pure; entropies are in bits.

mod concurrence;
mod discord;
mod entropy;
mod limits;

pub use concurrence::{
    concurrence_closed, concurrence_general, concurrence_with_conjugation, conjugation_matrix, eof_from_concurrence,
    mutual_information, EntanglementOfFormation, EvenParityState8,
};
pub use discord::{
    conditional_entropy, discord, discord_report, two_qubit_rep, DiscordReport, TwoQubitRep, THETA_GRID_POINTS,
};
pub use entropy::{binary_entropy, binary_entropy_clamped, vn_entropy};
pub use limits::{strong_coupling_limits, StrongCouplingLimits};
