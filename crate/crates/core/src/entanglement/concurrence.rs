use nalgebra::{Complex, DMatrix};

use super::entropy::binary_entropy_clamped;
use crate::exact::FourModeEvenBlock;
use crate::linalg::{hermitian_eigenvalues, hermiticity_error};
use crate::{Error, Real, Result};

/// Closed-form concurrence of a pair-mode block,
/// `2 max(|⟨c†_k c†_k̄ c_k̄' c_k'⟩| − √(⟨n n⟩⟨ñ ñ⟩), 0)`.
pub fn concurrence_closed<T: Real>(block: &FourModeEvenBlock<T>) -> T {
    let outer = (block.nn * block.tilde_tilde).max(T::zero()).sqrt();
    (T::lit(2.0) * (block.pair_transfer.abs() - outer)).max(T::zero())
}

/// Even number-parity state of four fermionic modes, as an 8×8 density
/// matrix in the basis
/// `{|0⟩, c†₁c†₂|0⟩, c†₁c†₃|0⟩, c†₁c†₄|0⟩, −|0̄⟩, c₂c₁|0̄⟩, c₃c₁|0̄⟩, c₄c₁|0̄⟩}`
/// with `|0̄⟩ = c†₁c†₂c†₃c†₄|0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenParityState8<T: Real> {
    rho: DMatrix<Complex<T>>,
}

impl<T: Real> EvenParityState8<T> {
    pub fn new(rho: DMatrix<Complex<T>>) -> Result<Self> {
        if rho.nrows() != 8 || rho.ncols() != 8 {
            return Err(Error::Dimension { expected: 8, got: rho.nrows() });
        }
        if hermiticity_error(&rho) > T::tol(1e-10) {
            return Err(Error::Validation("even-parity state is not Hermitian".into()));
        }
        let tr = rho.trace().re;
        if (tr - T::one()).abs() > T::tol(1e-8) {
            return Err(Error::Validation(format!("even-parity state has trace {}", tr.as_f64())));
        }
        let min = hermitian_eigenvalues(&rho)[0];
        if min < -T::tol(1e-12) {
            return Err(Error::Validation(format!("even-parity state has eigenvalue {:e}", min.as_f64())));
        }
        Ok(Self { rho })
    }

    /// Embeds a pair-mode block with modes `(1, 2, 3, 4) = (k, k̄, k', k̄')`:
    /// pair `k` is `c†₁c†₂|0⟩`, pair `k'` is `c₂c₁|0̄⟩ = c†₃c†₄|0⟩` and both
    /// pairs occupied is `|0̄⟩`.
    pub fn from_block(block: &FourModeEvenBlock<T>) -> Self {
        let c = |x: T| Complex::new(x, T::zero());
        let mut rho = DMatrix::from_element(8, 8, c(T::zero()));
        rho[(0, 0)] = c(block.tilde_tilde);
        rho[(1, 1)] = c(block.n_tilde);
        rho[(4, 4)] = c(block.nn);
        rho[(5, 5)] = c(block.tilde_n);
        // ⟨5|ρ|1⟩ = ⟨c†_k c†_k̄ c_k̄' c_k'⟩
        rho[(5, 1)] = c(block.pair_transfer);
        rho[(1, 5)] = c(block.pair_transfer);
        Self { rho }
    }

    /// Pure state `|ψ⟩⟨ψ|` from 8 amplitudes in the basis above.
    pub fn from_pure(amps: &[Complex<T>]) -> Result<Self> {
        if amps.len() != 8 {
            return Err(Error::Dimension { expected: 8, got: amps.len() });
        }
        let v = nalgebra::DVector::from_column_slice(amps);
        let n = v.norm();
        let v = v / Complex::new(n, T::zero());
        Self::new(&v * v.adjoint())
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.rho
    }
}

/// Conjugation matrix `[[0, I₄], [I₄, 0]]` of the even sector.
pub fn conjugation_matrix<T: Real>() -> DMatrix<Complex<T>> {
    DMatrix::from_fn(8, 8, |i, j| {
        if (i + 4) % 8 == j {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// `B` with `ρ = B B†`, from the eigendecomposition with negative round-off
/// eigenvalues dropped.
fn psd_factor<T: Real>(m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let eig = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex::new(l.max(T::zero()).sqrt(), T::zero())));
    &eig.eigenvectors * d
}

/// Fermionic concurrence `max(2 λ_max − Tr R, 0)` with
/// `R = √(√ρ ρ̃ √ρ)` and `ρ̃ = T ρ* T`.
pub fn concurrence_general<T: Real>(state: &EvenParityState8<T>) -> T {
    concurrence_with_conjugation(state, &conjugation_matrix())
}

/// [`concurrence_general`] with an explicit conjugation matrix.
///
/// With `ρ = B B†`, `R²` shares its spectrum with `M M†` for
/// `M = B† T B*`, so the eigenvalues of `R` are the singular values of `M`.
/// This avoids taking square roots of round-off sized eigenvalues.
pub fn concurrence_with_conjugation<T: Real>(state: &EvenParityState8<T>, conj: &DMatrix<Complex<T>>) -> T {
    let b = psd_factor(state.matrix());
    let m = b.adjoint() * conj * b.map(|z| z.conj());
    let r = m.singular_values();
    let trace = r.iter().fold(T::zero(), |a, &x| a + x);
    let max = r.iter().fold(T::zero(), |a, &x| a.max(x));
    (T::lit(2.0) * max - trace).max(T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementOfFormation<T> {
    /// Four-mode one-body entanglement of formation, `4 h(f₊)`.
    pub e_qsp: T,
    /// Bipartite entanglement between the two pairs, `e_qsp / 4`.
    pub e_pair: T,
}

/// Entanglement of formation from a concurrence, `f± = (1 ± √(1 − C²)) / 2`.
pub fn eof_from_concurrence<T: Real>(c: T) -> Result<EntanglementOfFormation<T>> {
    let slack = T::tol(1e-12);
    if !(c >= -slack && c <= T::one() + slack) {
        return Err(Error::Domain { value: c.as_f64(), domain: "[0, 1]" });
    }
    let c = c.max(T::zero()).min(T::one());
    let f_plus = (T::one() + (T::one() - c * c).sqrt()) / T::lit(2.0);
    let e_pair = binary_entropy_clamped(f_plus);
    Ok(EntanglementOfFormation { e_qsp: T::lit(4.0) * e_pair, e_pair })
}

/// `I = h(f_k) + h(f_k') − S(block)`.
pub fn mutual_information<T: Real>(block: &FourModeEvenBlock<T>) -> T {
    binary_entropy_clamped(block.fk) + binary_entropy_clamped(block.fkp) - block.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level_block() -> FourModeEvenBlock<f64> {
        let lam = 2f64.sqrt();
        let a1 = (lam + 1.0) / (2.0 * lam);
        let a2 = (lam - 1.0) / (2.0 * lam);
        FourModeEvenBlock::from_parts(0.0, a1, a2, 0.0, (a1 * a2).sqrt())
    }

    fn strong_block(omega: f64) -> FourModeEvenBlock<f64> {
        let outer = (omega - 2.0) / (4.0 * (omega - 1.0));
        let inner = omega / (4.0 * (omega - 1.0));
        FourModeEvenBlock::from_parts(outer, inner, inner, outer, inner)
    }

    #[test]
    fn closed_form_examples() {
        assert!((concurrence_closed(&two_level_block()) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((concurrence_closed(&strong_block(16.0)) - 1.0 / 15.0).abs() < 1e-12);
        // factorised (BCS-like) block
        let (f, g) = (0.3f64, 0.8f64);
        let b = FourModeEvenBlock::from_parts(
            f * g,
            f * (1.0 - g),
            (1.0 - f) * g,
            (1.0 - f) * (1.0 - g),
            (f * (1.0 - f) * g * (1.0 - g)).sqrt(),
        );
        assert!(concurrence_closed(&b) < 1e-15);
    }

    #[test]
    fn general_concurrence_matches_closed_form() {
        for b in [two_level_block(), strong_block(16.0), strong_block(4.0)] {
            let g = concurrence_general(&EvenParityState8::from_block(&b));
            assert!((g - concurrence_closed(&b)).abs() < 1e-10, "{g}");
        }
    }

    #[test]
    fn general_concurrence_of_pure_states() {
        let z = Complex::new(0.0f64, 0.0);
        let one = Complex::new(1.0, 0.0);
        let vac = EvenParityState8::from_pure(&[one, z, z, z, z, z, z, z]).unwrap();
        assert!(concurrence_general(&vac) < 1e-12);
        let slater = EvenParityState8::from_pure(&[z, z, one, z, z, z, z, z]).unwrap();
        assert!(concurrence_general(&slater) < 1e-12);
        let paired = EvenParityState8::from_pure(&[one, z, z, z, one, z, z, z]).unwrap();
        assert!((concurrence_general(&paired) - 1.0).abs() < 1e-10);
        // complex phases do not change the value
        let phase = Complex::new(0.6, 0.8);
        let paired = EvenParityState8::from_pure(&[one, z, z, z, phase, z, z, z]).unwrap();
        assert!((concurrence_general(&paired) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_invalid_states() {
        let bad = DMatrix::from_element(8, 8, Complex::new(0.125f64, 0.0)) * Complex::new(2.0, 0.0);
        assert!(EvenParityState8::new(bad).is_err());
        let mut nonpsd = DMatrix::from_element(8, 8, Complex::new(0.0f64, 0.0));
        nonpsd[(0, 0)] = Complex::new(1.5, 0.0);
        nonpsd[(1, 1)] = Complex::new(-0.5, 0.0);
        assert!(EvenParityState8::new(nonpsd).is_err());
    }

    #[test]
    fn eof_values() {
        let e0 = eof_from_concurrence(0.0f64).unwrap();
        assert_eq!((e0.e_qsp, e0.e_pair), (0.0, 0.0));
        let e1 = eof_from_concurrence(1.0f64).unwrap();
        assert!((e1.e_qsp - 4.0).abs() < 1e-15 && (e1.e_pair - 1.0).abs() < 1e-15);
        let e = eof_from_concurrence(1.0f64 / 15.0).unwrap();
        // h((1 + √(224/225)) / 2) evaluated independently
        assert!((e.e_pair - 0.012518444729991).abs() < 1e-12);
        // approaches ½ Ω⁻² log₂(2Ω√e) at C = 1/(Ω − 1)
        for (omega, tol) in [(16.0f64, 0.13), (256.0, 0.01), (1024.0, 0.002)] {
            let e = eof_from_concurrence(1.0 / (omega - 1.0)).unwrap();
            let asym = 0.5 / (omega * omega) * (2.0 * omega * 0.5f64.exp()).log2();
            assert!((e.e_pair / asym - 1.0).abs() < tol);
        }
        assert!(eof_from_concurrence(1.5f64).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let product = FourModeEvenBlock::from_parts(0.25f64, 0.25, 0.25, 0.25, 0.0);
        assert!(mutual_information(&product).abs() < 1e-14);
        let i = mutual_information(&two_level_block());
        assert!((i - 2.0 * binary_entropy_clamped(0.8535533905932737)).abs() < 1e-12);
        assert!((i - 1.201752).abs() < 1e-6);
    }
}
