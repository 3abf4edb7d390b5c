use nalgebra::DMatrix;

use crate::entanglement::binary_entropy_clamped;
use crate::exact::{FourModeEvenBlock, OccupationProfile};
use crate::linalg::hermitian_eigenvalues;
use crate::{Error, ModelParams, Real, Result};

/// Constant in the large-Ω estimate of the critical coupling, `−ψ(½)`.
pub const GC_GAMMA: f64 = 1.9635;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCoupling<T> {
    /// `2 / Σ_k 1/|ε_k − μ|`.
    pub exact: T,
    /// `ε / (ln(Ω/2) + γ)`, valid for many equally spaced levels.
    pub estimate: T,
}

fn require_half_filling<T: Real>(params: &ModelParams<T>) -> Result<()> {
    if params.is_half_filled() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "BCS with mu at the level mean needs half filling, got {} pairs on {} levels",
            params.pairs(),
            params.omega()
        )))
    }
}

/// Level energies measured from the chemical potential, `ε̃_k = ε_k − μ`.
fn shifted_levels<T: Real>(params: &ModelParams<T>) -> (T, Vec<T>) {
    let mu = params.mean_level();
    (mu, params.level_energies().into_iter().map(|e| e - mu).collect())
}

pub fn critical_coupling<T: Real>(params: &ModelParams<T>) -> Result<CriticalCoupling<T>> {
    params.validate()?;
    require_half_filling(params)?;
    let (_, shifted) = shifted_levels(params);
    let mut sum = T::zero();
    for (i, &e) in shifted.iter().enumerate() {
        if e.abs() < T::tol(1e-14) {
            return Err(Error::DegenerateFermiLevel { level: i + 1, gap: e.abs().as_f64() });
        }
        sum += T::one() / e.abs();
    }
    let half_omega = T::from_usize_lossy(params.omega()) / T::lit(2.0);
    Ok(CriticalCoupling { exact: T::lit(2.0) / sum, estimate: params.eps() / (half_omega.ln() + T::lit(GC_GAMMA)) })
}

/// BCS mean-field solution at half filling.
#[derive(Debug, Clone, PartialEq)]
pub struct BcsSolution<T> {
    pub delta: T,
    pub mu: T,
    pub u: Vec<T>,
    pub v: Vec<T>,
    /// Quasiparticle energies `√(ε̃² + Δ²)`.
    pub lambda: Vec<T>,
    /// `f_k = v_k²`.
    pub f: Vec<T>,
    pub coupling: T,
}

impl<T: Real> BcsSolution<T> {
    pub fn omega(&self) -> usize {
        self.f.len()
    }

    pub fn occupations(&self) -> OccupationProfile<T> {
        OccupationProfile { f: self.f.clone() }
    }

    /// `u_k v_k = Δ / (2λ_k)` for level `k` (1-based).
    pub fn uv(&self, k: usize) -> T {
        self.u[k - 1] * self.v[k - 1]
    }

    /// `|Σ_k 1/(2λ_k) − 1/G|`, zero for the normal solution.
    pub fn gap_residual(&self) -> T {
        if self.delta == T::zero() {
            return T::zero();
        }
        let s = self.lambda.iter().fold(T::zero(), |a, &l| a + T::one() / (T::lit(2.0) * l));
        (s - T::one() / self.coupling).abs()
    }
}

/// Occupations, amplitudes and quasiparticle energies for a given gap.
pub(crate) fn bcs_amplitudes<T: Real>(shifted: &[T], delta: T) -> (Vec<T>, Vec<T>, Vec<T>, Vec<T>) {
    let two = T::lit(2.0);
    let mut u = Vec::with_capacity(shifted.len());
    let mut v = Vec::with_capacity(shifted.len());
    let mut lambda = Vec::with_capacity(shifted.len());
    let mut f = Vec::with_capacity(shifted.len());
    for &e in shifted {
        let l = e.hypot(delta);
        // The smaller of v², u² is written as Δ²/(2λ(λ + |ε̃|)) to avoid
        // cancellation when Δ ≪ |ε̃|.
        let small = if l == T::zero() { T::lit(0.5) } else { delta * delta / (two * l * (l + e.abs())) };
        let (fk, gk) = if e > T::zero() {
            (small, T::one() - small)
        } else if e < T::zero() {
            (T::one() - small, small)
        } else {
            (T::lit(0.5), T::lit(0.5))
        };
        u.push(gk.sqrt());
        v.push(fk.sqrt());
        lambda.push(l);
        f.push(fk);
    }
    (u, v, lambda, f)
}

/// Solves `Σ_k 1/(2λ_k) = 1/G` by bisection on `(0, GΩ]`; `Δ = 0` for
/// `G ≤ G_c`.
pub fn solve_gap<T: Real>(params: &ModelParams<T>) -> Result<BcsSolution<T>> {
    let gc = critical_coupling(params)?.exact;
    let g = params.coupling();
    let (mu, shifted) = shifted_levels(params);
    let two = T::lit(2.0);

    let delta = if g <= gc {
        T::zero()
    } else {
        let target = T::one() / g;
        let excess = |d: T| shifted.iter().fold(T::zero(), |a, &e| a + T::one() / (two * e.hypot(d))) - target;
        let mut lo = T::zero();
        let mut hi = g * T::from_usize_lossy(params.omega());
        if !(excess(hi) < T::zero()) {
            return Err(Error::Bracket(format!("gap equation has no root below G*Omega = {}", hi.as_f64())));
        }
        // Run to the floating-point limit; the interval shrinks by half
        // per step so this is at most a few hundred iterations.
        for _ in 0..400 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if excess(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::machine_eps() * hi {
                break;
            }
        }
        let mid = (lo + hi) / two;
        if !(mid > T::zero()) {
            return Err(Error::Bracket("gap bisection collapsed to zero".into()));
        }
        mid
    };

    let (u, v, lambda, f) = bcs_amplitudes(&shifted, delta);
    Ok(BcsSolution { delta, mu, u, v, lambda, f, coupling: g })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcsEntropies<T> {
    /// `2 Σ h(f_k)`.
    pub e_one_body: T,
    /// `Σ h(f_k)`.
    pub e_schmidt: T,
    /// `⟨N²⟩ − ⟨N⟩² = 4 Σ u_k² v_k²`.
    pub number_fluctuation: T,
    /// Entropy of the generalised one-body density.
    pub e_qsp: T,
    /// Largest distance of a generalised-density eigenvalue from {0, 1}.
    pub qsp_deviation: T,
}

/// Generalised one-body density `[[ρ, κ], [−κ*, 1 − ρ*]]` over the `2Ω`
/// modes ordered `(1, 1̄, 2, 2̄, …)`, with `κ_{k k̄} = u_k v_k`.
pub fn generalized_density<T: Real>(sol: &BcsSolution<T>) -> DMatrix<T> {
    let modes = 2 * sol.omega();
    let mut m = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..sol.omega() {
        let f = sol.f[k];
        let uv = sol.u[k] * sol.v[k];
        let (a, b) = (2 * k, 2 * k + 1);
        m[(a, a)] = f;
        m[(b, b)] = f;
        m[(modes + a, modes + a)] = T::one() - f;
        m[(modes + b, modes + b)] = T::one() - f;
        // κ block and its partner −κ*
        m[(a, modes + b)] = uv;
        m[(b, modes + a)] = -uv;
        m[(modes + a, b)] = -uv;
        m[(modes + b, a)] = uv;
    }
    m
}

pub fn bcs_entropies<T: Real>(sol: &BcsSolution<T>) -> BcsEntropies<T> {
    let e_schmidt = sol.f.iter().fold(T::zero(), |a, &f| a + binary_entropy_clamped(f));
    let four = T::lit(4.0);
    let number_fluctuation = sol.u.iter().zip(&sol.v).fold(T::zero(), |a, (&u, &v)| a + four * u * u * v * v);
    let eig = hermitian_eigenvalues(&generalized_density(sol));
    let qsp_deviation = eig.iter().fold(T::zero(), |a, &l| a.max(l.abs().min((l - T::one()).abs())));
    let e_qsp = eig.iter().fold(T::zero(), |a, &l| a + binary_entropy_clamped(l));
    BcsEntropies { e_one_body: T::lit(2.0) * e_schmidt, e_schmidt, number_fluctuation, e_qsp, qsp_deviation }
}

/// `⟨BCS|H|BCS⟩ = 2 Σ_k ε_k v_k² − G (Σ_k u_k v_k)² − G Σ_k v_k⁴`.
pub fn bcs_energy<T: Real>(params: &ModelParams<T>, sol: &BcsSolution<T>) -> Result<T> {
    if params.omega() != sol.omega() {
        return Err(Error::Argument("solution does not match model parameters".into()));
    }
    let two = T::lit(2.0);
    let kinetic = (1..=sol.omega()).fold(T::zero(), |a, k| a + two * params.level(k) * sol.f[k - 1]);
    let pairing = sol.u.iter().zip(&sol.v).fold(T::zero(), |a, (&u, &v)| a + u * v);
    let diagonal = sol.f.iter().fold(T::zero(), |a, &f| a + f * f);
    Ok(kinetic - params.coupling() * (pairing * pairing + diagonal))
}

/// Four-mode block of the BCS state: factorised probabilities and
/// `⟨c†_k c†_k̄ c_k̄' c_k'⟩ = u_k v_k u_k' v_k'`.
pub fn bcs_four_mode<T: Real>(sol: &BcsSolution<T>, k: usize, kp: usize) -> Result<FourModeEvenBlock<T>> {
    let omega = sol.omega();
    for idx in [k, kp] {
        if idx == 0 || idx > omega {
            return Err(Error::LevelIndex { index: idx, omega });
        }
    }
    if k == kp {
        return Err(Error::Argument(format!("four-mode block needs distinct levels, got k = k' = {k}")));
    }
    let (f, fp) = (sol.f[k - 1], sol.f[kp - 1]);
    let (g, gp) = (T::one() - f, T::one() - fp);
    let (nn, tt) = (f * fp, g * gp);
    // u_k v_k u_k' v_k' = √(⟨n n⟩⟨ñ ñ⟩) for the product state; forming it
    // from the same products keeps the closed-form concurrence exactly 0.
    Ok(FourModeEvenBlock::from_parts(nn, f * gp, g * fp, tt, (nn * tt).sqrt()))
}
