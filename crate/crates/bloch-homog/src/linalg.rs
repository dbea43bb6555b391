//! Small dense linear-algebra helpers shared across modules.
//!
//! Everything here is desk scale (matrices up to a few thousand rows), so we
//! use dense factorizations throughout and prefer Hermitian eigendecompositions
//! over SVD wherever the operand is self-adjoint by construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Force exact Hermitian symmetry: (M + M*)/2.
pub fn hermitize(m: &CMat) -> CMat {
    let adj = m.adjoint();
    (m + adj).map(|z| z * 0.5)
}

/// Max absolute deviation from Hermitian symmetry.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending,
/// eigenvectors as orthonormal columns.
pub fn hermitian_eig(m: &CMat) -> (DVector<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), CMat::zeros(0, 0));
    }
    let se = nalgebra::SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vecs.set_column(j, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Generalized Hermitian eigenproblem A x = lambda B x with B Hermitian
/// positive definite, via the Cholesky factor of B. Eigenvalues ascending;
/// eigenvectors B-orthonormal.
pub fn generalized_hermitian_eig(a: &CMat, b: &CMat) -> Option<(DVector<f64>, CMat)> {
    let chol = nalgebra::Cholesky::new(hermitize(b))?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let reduced = &linv * a * linv.adjoint();
    let (vals, y) = hermitian_eig(&reduced);
    let vecs = linv.adjoint() * y;
    Some((vals, vecs))
}

/// Spectral norm (largest singular value) via the Hermitian eigenproblem of M* M.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let (vals, _) = hermitian_eig(&gram);
    vals[vals.len() - 1].max(0.0).sqrt()
}

/// Spectral norm of a real matrix.
pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    spectral_norm(&m.map(|x| Complex64::new(x, 0.0)))
}

/// Hermitian matrix function through the eigendecomposition.
pub fn hermitian_matfun(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eig(m);
    apply_spectral(&vals, &vecs, f)
}

/// Apply a scalar function to a precomputed eigendecomposition.
pub fn apply_spectral(vals: &DVector<f64>, vecs: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let fv = Complex64::new(f(vals[j]), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    scaled * vecs.adjoint()
}

/// Hermitian positive-semidefinite square root with an eigenvalue floor.
pub fn hermitian_sqrt(m: &CMat, floor: f64) -> CMat {
    hermitian_matfun(m, |l| l.max(floor).sqrt())
}

/// Hermitian inverse square root with an eigenvalue floor.
pub fn hermitian_inv_sqrt(m: &CMat, floor: f64) -> CMat {
    hermitian_matfun(m, |l| 1.0 / l.max(floor).sqrt())
}

/// Ordinary least squares for y ~ sum_j c_j basis_j(x); returns coefficients.
pub fn least_squares_fit(xs: &[f64], ys: &[f64], basis: &[&dyn Fn(f64) -> f64]) -> Vec<f64> {
    let n = xs.len();
    let p = basis.len();
    let a = DMatrix::<f64>::from_fn(n, p, |i, j| basis[j](xs[i]));
    let y = DVector::<f64>::from_column_slice(ys);
    let ata = a.transpose() * &a;
    let aty = a.transpose() * y;
    let sol = ata
        .lu()
        .solve(&aty)
        .unwrap_or_else(|| DVector::zeros(p));
    sol.iter().copied().collect()
}

/// Fitted log-log slope of E(eps) with max absolute residual in log space.
/// Returns None when some sample is nonpositive (degenerate curve).
pub fn loglog_slope(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    if samples.len() < 2 || samples.iter().any(|&(_, e)| e <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = samples.iter().map(|&(eps, _)| eps.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, e)| e.ln()).collect();
    let one = |_x: f64| 1.0;
    let id = |x: f64| x;
    let c = least_squares_fit(&xs, &ys, &[&one, &id]);
    let resid = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (y - c[0] - c[1] * x).abs())
        .fold(0.0, f64::max);
    Some((c[1], resid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_eig_recovers_matrix() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let (vals, vecs) = hermitian_eig(&m);
        let rebuilt = apply_spectral(&vals, &vecs, |l| l);
        assert!((rebuilt - m).iter().all(|z| z.norm() < 1e-12));
        assert!(vals[0] <= vals[1]);
    }

    #[test]
    fn generalized_eig_weighted_orthonormality() {
        let a = CMat::from_row_slice(2, 2, &[c(4.0, 0.0), c(1.0, 0.5), c(1.0, -0.5), c(2.0, 0.0)]);
        let b = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.3, 0.0), c(0.3, 0.0), c(1.0, 0.0)]);
        let (vals, vecs) = generalized_hermitian_eig(&a, &b).unwrap();
        // B-orthonormality and the eigen relation itself.
        let gram = vecs.adjoint() * &b * &vecs;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[(i, j)].re, expect, epsilon = 1e-10);
                assert_abs_diff_eq!(gram[(i, j)].im, 0.0, epsilon = 1e-10);
            }
            let lhs = &a * vecs.column(i);
            let rhs = (&b * vecs.column(i)).map(|z| z * vals[i]);
            assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn spectral_norm_matches_known_values() {
        let m = CMat::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-5.0, 0.0)]);
        assert_abs_diff_eq!(spectral_norm(&m), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn loglog_slope_of_power_law() {
        let samples: Vec<(f64, f64)> = (1..6).map(|i| {
            let eps = 2f64.powi(-i);
            (eps, 3.0 * eps.powf(1.5))
        }).collect();
        let (slope, resid) = loglog_slope(&samples).unwrap();
        assert_abs_diff_eq!(slope, 1.5, epsilon = 1e-10);
        assert!(resid < 1e-10);
    }
}
