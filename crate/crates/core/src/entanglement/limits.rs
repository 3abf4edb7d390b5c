use crate::{Error, Real, Result};

/// Closed-form strong-coupling values (`G / (Ω ε) → ∞`, half filling).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongCouplingLimits<T> {
    /// `⟨n n⟩ = ⟨ñ ñ⟩ = (Ω − 2) / (4(Ω − 1))`.
    pub nn: T,
    /// Inner block entries, `Ω / (4(Ω − 1))`.
    pub inner: T,
    /// Concurrence `1 / (Ω − 1)`.
    pub c: T,
    /// Large-Ω mutual information `½(1 + 1/Ω)`.
    pub i_approx: T,
    /// Large-Ω block entropy `½(3 − 1/Ω)`.
    pub s_approx: T,
    /// Large-Ω discord `½(1 − log₂3 / 2)(3 + 1/Ω)`.
    pub d_approx: T,
    /// `Ω → ∞` discord `3/2 − ¾ log₂ 3`.
    pub d_inf: T,
}

pub fn strong_coupling_limits<T: Real>(omega: usize) -> Result<StrongCouplingLimits<T>> {
    if omega < 2 || !omega.is_multiple_of(2) {
        return Err(Error::Argument(format!("strong-coupling limits need an even omega >= 2, got {omega}")));
    }
    let o = T::from_usize_lossy(omega);
    let one = T::one();
    let half = T::lit(0.5);
    let four = T::lit(4.0);
    let log2_3 = T::lit(3.0).log2();
    Ok(StrongCouplingLimits {
        nn: (o - T::lit(2.0)) / (four * (o - one)),
        inner: o / (four * (o - one)),
        c: one / (o - one),
        i_approx: half * (one + one / o),
        s_approx: half * (T::lit(3.0) - one / o),
        d_approx: half * (one - log2_3 / T::lit(2.0)) * (T::lit(3.0) + one / o),
        d_inf: T::lit(1.5) - T::lit(0.75) * log2_3,
    })
}
