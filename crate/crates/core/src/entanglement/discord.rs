//! Quantum discord of a pair-mode block viewed as a two-qubit X state.
//!
//! Each pair `(k, k̄)` is an even-parity qubit with `σ_z = +1` when the pair
//! is occupied. The block has Bloch vectors along z and a diagonal
//! correlation tensor with `c_yy = c_xx`, so the state is symmetric about z
//! and projective measurements on qubit B only need a polar angle.

use nalgebra::Matrix4;

use super::entropy::binary_entropy_clamped;
use crate::exact::FourModeEvenBlock;
use crate::linalg::golden_section;
use crate::Real;

/// Number of grid points on `[0, π/2]` scanned before refinement.
pub const THETA_GRID_POINTS: usize = 181;

/// Two-qubit parametrisation of a pair-mode block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitRep<T> {
    pub rz_a: T,
    pub rz_b: T,
    pub cxx: T,
    pub czz: T,
}

impl<T: Real> TwoQubitRep<T> {
    /// `¼ (1 + r_a σ_z⊗1 + r_b 1⊗σ_z + c_xx (σ_x⊗σ_x + σ_y⊗σ_y) + c_zz σ_z⊗σ_z)`
    /// in the basis {↑↑, ↑↓, ↓↑, ↓↓}, ↑ = occupied pair.
    ///
    /// `c_zz` here is the full correlator `⟨σ_z σ_z⟩`; the stored field is the
    /// connected part, so `r_a r_b` is added back.
    pub fn density(&self) -> Matrix4<T> {
        let q = T::lit(0.25);
        let (a, b) = (self.rz_a, self.rz_b);
        let zz = self.czz + a * b;
        let z = T::zero();
        let one = T::one();
        let x = self.cxx / T::lit(2.0);
        #[rustfmt::skip]
        let m = Matrix4::new(
            q * (one + a + b + zz), z, z, z,
            z, q * (one + a - b - zz), x, z,
            z, x, q * (one - a + b - zz), z,
            z, z, z, q * (one - a - b + zz),
        );
        m
    }
}

/// `r_z = 2f − 1` for each pair, `c_xx = 2⟨c†c†cc⟩`, `c_zz = 4(⟨n n⟩ − f_k f_k')`.
pub fn two_qubit_rep<T: Real>(block: &FourModeEvenBlock<T>) -> TwoQubitRep<T> {
    let two = T::lit(2.0);
    TwoQubitRep {
        rz_a: two * block.fk - T::one(),
        rz_b: two * block.fkp - T::one(),
        cxx: two * block.pair_transfer,
        czz: T::lit(4.0) * (block.nn - block.fk * block.fkp),
    }
}

/// Entropy of qubit A conditioned on a projective measurement of qubit B
/// along `(sin θ, 0, cos θ)`.
pub fn conditional_entropy<T: Real>(rep: &TwoQubitRep<T>, theta: T) -> T {
    let (kx, kz) = (theta.sin(), theta.cos());
    let half = T::lit(0.5);
    let mut total = T::zero();
    for nu in [T::one(), -T::one()] {
        let denom = T::one() + nu * rep.rz_b * kz;
        let p = half * denom;
        if p <= T::zero() {
            continue;
        }
        let vx = nu * rep.cxx * kx / denom;
        let vz = rep.rz_a + nu * rep.czz * kz / denom;
        let len = vx.hypot(vz).min(T::one());
        total += p * binary_entropy_clamped(half * (T::one() + len));
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordReport<T> {
    pub value: T,
    /// Minimising polar angle.
    pub theta: T,
    pub min_conditional_entropy: T,
    /// Conditional entropy for a measurement in the xy plane.
    pub conditional_xy: T,
    /// Conditional entropy for a measurement along z.
    pub conditional_z: T,
    /// `S(AB) − S(B)`.
    pub quantum_conditional: T,
}

/// Discord `D(A|B)` with the measurement on the `k'` pair.
pub fn discord_report<T: Real>(block: &FourModeEvenBlock<T>) -> DiscordReport<T> {
    let rep = two_qubit_rep(block);
    let ce = |t: T| conditional_entropy(&rep, t);
    let half_pi = T::FRAC_PI_2();
    let n = THETA_GRID_POINTS - 1;
    let step = half_pi / T::from_usize_lossy(n);

    let mut best = (T::zero(), ce(T::zero()));
    let mut best_i = 0;
    for i in 1..=n {
        let t = if i == n { half_pi } else { step * T::from_usize_lossy(i) };
        let v = ce(t);
        if v < best.1 {
            best = (t, v);
            best_i = i;
        }
    }
    let lo = step * T::from_usize_lossy(best_i.saturating_sub(1));
    let hi = (step * T::from_usize_lossy(best_i + 1)).min(half_pi);
    let refined = golden_section(ce, lo, hi, T::tol(1e-10));
    if refined.1 < best.1 {
        best = refined;
    }

    let quantum_conditional = block.entropy() - binary_entropy_clamped(block.fkp);
    let mut value = best.1 - quantum_conditional;
    if value < T::zero() && value >= -T::tol(1e-10) {
        value = T::zero();
    }
    DiscordReport {
        value,
        theta: best.0,
        min_conditional_entropy: best.1,
        conditional_xy: ce(half_pi),
        conditional_z: ce(T::zero()),
        quantum_conditional,
    }
}

pub fn discord<T: Real>(block: &FourModeEvenBlock<T>) -> T {
    discord_report(block).value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strong_block() -> FourModeEvenBlock<f64> {
        FourModeEvenBlock::from_parts(14.0 / 60.0, 16.0 / 60.0, 16.0 / 60.0, 14.0 / 60.0, 16.0 / 60.0)
    }

    fn two_level_block() -> FourModeEvenBlock<f64> {
        let lam = 2f64.sqrt();
        let a1 = (lam + 1.0) / (2.0 * lam);
        let a2 = (lam - 1.0) / (2.0 * lam);
        FourModeEvenBlock::from_parts(0.0, a1, a2, 0.0, (a1 * a2).sqrt())
    }

    #[test]
    fn rep_assembles_back_to_block() {
        for b in [strong_block(), two_level_block()] {
            let d = two_qubit_rep(&b).density() - b.matrix();
            assert!(d.amax() < 1e-15);
        }
    }

    #[test]
    fn strong_coupling_rep() {
        let r = two_qubit_rep(&strong_block());
        assert!(r.rz_a.abs() < 1e-15 && r.rz_b.abs() < 1e-15);
        assert!((r.cxx - 32.0 / 60.0).abs() < 1e-15);
        assert!((r.czz + 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn two_level_rep() {
        let r = two_qubit_rep(&two_level_block());
        let s = 0.5f64.sqrt();
        assert!((r.rz_a - s).abs() < 1e-12 && (r.rz_b + s).abs() < 1e-12);
        assert!((r.cxx - s).abs() < 1e-12 && (r.czz + 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_conditional_entropy_is_flat() {
        let rep = TwoQubitRep { rz_a: 0.4f64, rz_b: -0.2, cxx: 0.0, czz: 0.0 };
        let h = binary_entropy_clamped(0.7f64);
        for t in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2] {
            assert!((conditional_entropy(&rep, t) - h).abs() < 1e-14);
        }
    }

    #[test]
    fn strong_coupling_xy_measurement() {
        let rep = two_qubit_rep(&strong_block());
        let v = conditional_entropy(&rep, std::f64::consts::FRAC_PI_2);
        // h((1 + 8/15) / 2) evaluated independently
        let p = 23.0f64 / 30.0;
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((v - h).abs() < 1e-14);
        assert!((v - 0.783777).abs() < 1e-6);
    }

    #[test]
    fn pure_state_conditional_states_are_pure() {
        let rep = two_qubit_rep(&two_level_block());
        assert!(conditional_entropy(&rep, std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn discord_examples() {
        let product = FourModeEvenBlock::from_parts(0.21f64, 0.09, 0.49, 0.21, 0.0);
        assert!(discord(&product).abs() < 1e-12);
        let pure = discord(&two_level_block());
        assert!((pure - binary_entropy_clamped(0.8535533905932737)).abs() < 1e-9);
        let d = discord_report(&strong_block());
        assert!((d.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        assert!((d.value - 0.5 * (1.0 - 3f64.log2() / 2.0) * (3.0 + 1.0 / 16.0)).abs() / d.value < 0.01);
    }
}
