//! Dense Hermitian eigendecompositions and a Lanczos ground-state solver.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_traits::Zero;

use crate::{Error, Real, Result};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
pub fn sym_eigen<T: Real>(m: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(m.nrows(), n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix (real or complex), ascending.
pub fn hermitian_eigenvalues<N>(m: &DMatrix<N>) -> Vec<N::RealField>
where
    N: ComplexField,
    N::RealField: Copy + PartialOrd,
{
    let mut v: Vec<_> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Largest deviation from Hermiticity, `max |m_ij − conj(m_ji)|`.
pub fn hermiticity_error<N>(m: &DMatrix<N>) -> N::RealField
where
    N: ComplexField,
{
    let mut worst = N::RealField::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)].clone() - m[(j, i)].clone().conjugate()).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `−Σ λ log₂ λ` over a spectrum, skipping non-positive entries.
pub fn spectrum_entropy<T: Real>(spectrum: &[T]) -> T {
    let ln2 = T::LN_2();
    spectrum.iter().filter(|&&l| l > T::zero()).fold(T::zero(), |acc, &l| acc - l * l.ln() / ln2)
}

/// Minimum of a unimodal `f` on `[a, b]` by golden-section search, to an
/// interval width `tol`. Returns `(x, f(x))`.
pub fn golden_section<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, tol: T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOptions<T> {
    pub max_iter: usize,
    /// Relative change of the lowest Ritz value between checks.
    pub eig_tol: T,
    /// Residual bound relative to `max(|E|, residual_scale)`.
    pub residual_tol: T,
    pub residual_scale: T,
    /// Ritz values are recomputed every `check_every` steps.
    pub check_every: usize,
}

impl<T: Real> Default for LanczosOptions<T> {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            eig_tol: T::tol(1e-13),
            residual_tol: T::tol(1e-10),
            residual_scale: T::one(),
            check_every: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult<T> {
    pub value: T,
    pub vector: DVector<T>,
    pub iterations: usize,
    pub residual: T,
}

fn lowest_ritz<T: Real>(alpha: &[T], beta: &[T]) -> (T, DVector<T>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let (vals, vecs) = sym_eigen(&t);
    (vals[0], vecs.column(0).into_owned())
}

/// Lowest eigenpair of the symmetric operator `apply` by Lanczos iteration
/// with full reorthogonalisation against every stored Krylov vector.
pub fn lanczos_lowest<T, F>(start: &DVector<T>, apply: F, opts: &LanczosOptions<T>) -> Result<LanczosResult<T>>
where
    T: Real,
    F: Fn(&DVector<T>) -> DVector<T>,
{
    let n = start.len();
    let norm = start.norm();
    if n == 0 || norm == T::zero() {
        return Err(Error::Argument("Lanczos start vector is empty or zero".into()));
    }
    let max_iter = opts.max_iter.min(n).max(1);
    let breakdown = T::machine_eps() * T::lit(1e2);

    let mut basis: Vec<DVector<T>> = vec![start / norm];
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut prev_theta: Option<T> = None;
    let mut last_residual = T::lit(1e30);

    for j in 0..max_iter {
        let mut w = apply(&basis[j]);
        let a = basis[j].dot(&w);
        alpha.push(a);
        // Two passes of classical Gram-Schmidt keep the basis orthogonal to
        // working precision.
        for _ in 0..2 {
            for v in &basis {
                let c = v.dot(&w);
                w.axpy(-c, v, T::one());
            }
        }
        let b = w.norm();
        let scale = alpha.iter().fold(T::zero(), |acc, &x| acc.max(x.abs())).max(T::one());
        let invariant = b <= breakdown * scale;
        let last = j + 1 == max_iter;

        if invariant || last || (j + 1) % opts.check_every == 0 {
            let (theta, s) = lowest_ritz(&alpha, &beta);
            let est = b * s[s.len() - 1].abs();
            let tol = opts.residual_tol * theta.abs().max(opts.residual_scale);
            let settled =
                prev_theta.map(|p| (theta - p).abs() <= opts.eig_tol * theta.abs().max(T::one())).unwrap_or(false);
            prev_theta = Some(theta);
            last_residual = est;
            if invariant || (settled && est <= tol) || last {
                let mut x = DVector::zeros(n);
                for (v, &c) in basis.iter().zip(s.iter()) {
                    x.axpy(c, v, T::one());
                }
                let xn = x.norm();
                x /= xn;
                let r = (apply(&x) - &x * theta).norm();
                if r <= tol {
                    return Ok(LanczosResult { value: theta, vector: x, iterations: j + 1, residual: r });
                }
                if invariant || last {
                    return Err(Error::NotConverged { iterations: j + 1, residual: r.as_f64() });
                }
                last_residual = r;
            }
        }
        beta.push(b);
        basis.push(w / b);
    }
    Err(Error::NotConverged { iterations: max_iter, residual: last_residual.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    #[test]
    fn sym_eigen_sorts_ascending() {
        let m = DMatrix::<f64>::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 5.0]);
        let (vals, vecs) = sym_eigen(&m);
        assert_eq!(vals.as_slice(), &[-1.0, 2.0, 5.0]);
        assert!((vecs[(1, 0)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_spectrum() {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        // sigma_y has eigenvalues -1, 1
        let m = DMatrix::from_row_slice(2, 2, &[one * 0.0, -i, i, one * 0.0]);
        let v = hermitian_eigenvalues(&m);
        assert!((v[0] + 1.0f64).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
        assert_eq!(hermiticity_error(&m), 0.0);
    }

    #[test]
    fn lanczos_matches_dense_on_path_graph() {
        let n = 300;
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                (i as f64 * 0.37).sin() * 3.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let (vals, _) = sym_eigen(&m);
        let res = lanczos_lowest(&DVector::from_element(n, 1.0), |x| &m * x, &LanczosOptions::default()).unwrap();
        assert!((res.value - vals[0]).abs() < 1e-10);
        assert!(res.residual < 1e-9);
    }

    #[test]
    fn lanczos_stops_on_invariant_subspace() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0, 1.0]));
        let res = lanczos_lowest(&DVector::from_element(4, 1.0), |x| &m * x, &LanczosOptions::default()).unwrap();
        assert!((res.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x: f64| (x - 0.3).powi(2) + 1.0, 0.0, 2.0, 1e-10);
        // x is only resolvable to about sqrt(eps) at a quadratic minimum
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_uniform_spectrum() {
        assert!((spectrum_entropy(&[0.25f64; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(spectrum_entropy(&[1.0f64, 0.0, -1e-18]), 0.0);
    }
}
