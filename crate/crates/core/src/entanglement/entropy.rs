use nalgebra::{ComplexField, DMatrix};

use crate::linalg::{hermitian_eigenvalues, spectrum_entropy};
use crate::{Error, Real, Result};

/// Base-2 binary entropy, with `h(0) = h(1) = 0`.
pub fn binary_entropy<T: Real>(f: T) -> Result<T> {
    let slack = T::tol(1e-12);
    if !(f >= -slack && f <= T::one() + slack) {
        return Err(Error::Domain { value: f.as_f64(), domain: "[0, 1]" });
    }
    Ok(binary_entropy_clamped(f))
}

/// Binary entropy for arguments already known to be probabilities; values
/// at or beyond the endpoints give exactly zero.
#[inline]
pub fn binary_entropy_clamped<T: Real>(f: T) -> T {
    if f <= T::zero() || f >= T::one() {
        return T::zero();
    }
    let g = T::one() - f;
    -(f * f.ln() + g * g.ln()) / T::LN_2()
}

/// Von Neumann entropy (bits) of a Hermitian, unit-trace matrix.
pub fn vn_entropy<N, T>(rho: &DMatrix<N>) -> Result<T>
where
    N: ComplexField<RealField = T>,
    T: Real,
{
    if rho.nrows() != rho.ncols() {
        return Err(Error::Validation("density matrix is not square".into()));
    }
    let trace = rho.trace().real();
    if (trace - T::one()).abs() > T::tol(1e-8) {
        return Err(Error::Validation(format!("trace {} differs from 1", trace.as_f64())));
    }
    Ok(spectrum_entropy(&hermitian_eigenvalues(rho)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        assert!((binary_entropy(0.5f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.853553f64).unwrap() - 0.60087).abs() < 1e-5);
        assert!(binary_entropy(1.1f64).is_err());
        assert!(binary_entropy(-0.01f64).is_err());
        assert_eq!(binary_entropy(1.0 + 1e-14f64).unwrap(), 0.0);
    }

    #[test]
    fn vn_entropy_values() {
        let id = DMatrix::<f64>::identity(4, 4) / 4.0;
        assert!((vn_entropy(&id).unwrap() - 2.0).abs() < 1e-14);
        let v = DVector::from_vec(vec![0.6f64, 0.8]);
        let pure = &v * v.transpose();
        assert!(vn_entropy(&pure).unwrap().abs() < 1e-12);
        assert!(vn_entropy(&(id * 2.0)).is_err());
    }
}
