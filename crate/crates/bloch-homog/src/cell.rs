//! The periodic cell problem for the corrector Lambda, the effective matrix
//! g0, the weighted objects (Q-bar, f0, Lambda_Q) and the spectral window
//! constants.

use crate::coeff::{factor_density, inverse_field, PeriodicMatrixField};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ModeSet};
use crate::linalg::{hermitian_eig, hermitian_inv_sqrt, hermitize, CMat};
use crate::symbol::DiffSymbol;
use serde::Serialize;

/// Nondegeneracy constants of the spectral window around the band bottom.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralWindow {
    /// c_* = alpha0 * ||f^{-1}||^{-2} * ||g^{-1}||^{-1}: A(k) >= c_* |k|^2.
    pub c_star: f64,
    /// delta = c_* r0^2 / 4: radius of the protected spectral interval.
    pub delta: f64,
    /// t0: radius in |k| where the analytic branch machinery applies.
    pub t0: f64,
}

/// Everything derived from one coefficient set: corrector, flux field,
/// effective matrix, weights and window constants.
#[derive(Debug, Clone)]
pub struct EffectiveModel {
    pub lattice: Lattice,
    /// Corrector, n x m, zero mean.
    pub lambda: PeriodicMatrixField,
    /// Q-weighted corrector (mean(Q Lambda_Q) = 0); equals `lambda` when unweighted.
    pub lambda_q: PeriodicMatrixField,
    /// Flux g~(x) = g(x) (b(D)Lambda + 1), m x m.
    pub g_tilde: PeriodicMatrixField,
    /// Effective matrix, m x m Hermitian positive.
    pub g0: CMat,
    /// Mean of Q (identity when unweighted), n x n.
    pub q_bar: CMat,
    /// f0 = Q_bar^{-1/2}.
    pub f0: CMat,
    /// Density factor f with f f* = Q^{-1}; None when unweighted.
    pub f: Option<PeriodicMatrixField>,
    /// Pointwise inverse of f; None when unweighted.
    pub f_inv: Option<PeriodicMatrixField>,
    pub window: SpectralWindow,
    /// Relative weak-form residual of the corrector on the retained modes.
    pub residual: f64,
}

/// Solve b(D)* g (b(D)Lambda_j + e_j) = 0 over the nonzero modes of `modes`
/// (the zero mode is pinned by the zero-mean constraint). Returns Lambda and
/// the relative weak-form residual on the retained test modes.
pub fn solve_cell(
    lattice: &Lattice,
    sym: &DiffSymbol,
    g: &PeriodicMatrixField,
    modes: &ModeSet,
) -> Result<(PeriodicMatrixField, f64)> {
    let n = sym.cols();
    let m = sym.rows();
    if g.rows() != m || g.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "g must be {m}x{m} for this symbol, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    let nz: Vec<&Vec<i64>> = modes
        .modes()
        .iter()
        .filter(|mo| mo.iter().any(|&c| c != 0))
        .collect();
    let nm = nz.len();
    // Symbol matrices per retained mode.
    let bsym: Vec<CMat> = nz
        .iter()
        .map(|mo| sym.eval(lattice.dual_vector(mo).as_slice()))
        .collect();
    let mut a = CMat::zeros(n * nm, n * nm);
    for (r, mr) in nz.iter().enumerate() {
        for (c, mc) in nz.iter().enumerate() {
            let diff: Vec<i64> = mr.iter().zip(mc.iter()).map(|(&x, &y)| x - y).collect();
            if let Some(gc) = g.coeff(&diff) {
                let block = bsym[r].adjoint() * gc * &bsym[c];
                a.view_mut((n * r, n * c), (n, n)).copy_from(&block);
            }
        }
    }
    let mut rhs = CMat::zeros(n * nm, m);
    for (r, mr) in nz.iter().enumerate() {
        if let Some(gc) = g.coeff(mr.as_slice()) {
            let block = (bsym[r].adjoint() * gc).map(|z| -z);
            rhs.view_mut((n * r, 0), (n, m)).copy_from(&block);
        }
    }
    let a = hermitize(&a);
    let rhs_norm = rhs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let sol = match nalgebra::Cholesky::new(a.clone()) {
        Some(chol) => chol.solve(&rhs),
        None => a
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::NonPositive("singular cell Galerkin matrix".into()))?,
    };
    // Relative residual of the linear system (retained test modes).
    let residual = if rhs_norm > 0.0 {
        let r = &a * &sol - &rhs;
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / rhs_norm
    } else {
        0.0
    };
    let mut table = Vec::with_capacity(nm);
    for (r, mo) in nz.iter().enumerate() {
        let block = sol.view((n * r, 0), (n, m)).into_owned();
        table.push(((*mo).clone(), block));
    }
    let lambda = PeriodicMatrixField::from_fourier(lattice.dim(), n, m, table)?;
    Ok((lambda, residual))
}

/// Flux field g~ = g (b(D)Lambda + 1_m) and the effective matrix g0 = mean(g~).
pub fn effective_matrix(
    lattice: &Lattice,
    sym: &DiffSymbol,
    g: &PeriodicMatrixField,
    lambda: &PeriodicMatrixField,
) -> Result<(PeriodicMatrixField, CMat)> {
    let m = sym.rows();
    let grad = lambda
        .apply_symbol_derivative(sym, lattice)?
        .add_constant(&CMat::identity(m, m));
    let g_tilde = g.mul(&grad)?;
    let g0 = hermitize(&g_tilde.mean());
    Ok((g_tilde, g0))
}

/// Q-weighted corrector shift: Lambda_Q = Lambda - Q_bar^{-1} mean(Q Lambda).
pub fn solve_cell_weighted(
    lambda: &PeriodicMatrixField,
    q: &PeriodicMatrixField,
) -> Result<PeriodicMatrixField> {
    let q_bar = q.mean();
    let q_lambda_mean = q.mul(lambda)?.mean();
    let shift = q_bar
        .clone()
        .try_inverse()
        .ok_or(Error::SingularValue)?
        * q_lambda_mean;
    Ok(lambda.add_constant(&shift.map(|z| -z)))
}

/// Voigt-Reuss bracketing report: harmonic_mean(g) <= g0 <= mean(g) in the
/// PSD order, with equality flags.
#[derive(Debug, Clone, Serialize)]
pub struct VoigtReussReport {
    /// lambda_min(g0 - harmonic_mean); >= -slack when the lower bound holds.
    pub lower_margin: f64,
    /// lambda_min(mean - g0); >= -slack when the upper bound holds.
    pub upper_margin: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// g0 = harmonic mean within tolerance (always true for m = n).
    pub equals_harmonic: bool,
    /// g0 = mean within tolerance.
    pub equals_mean: bool,
}

pub fn voigt_reuss_check(
    g: &PeriodicMatrixField,
    g0: &CMat,
    grids: &[usize],
) -> Result<VoigtReussReport> {
    let mean = g.mean();
    let harmonic = g.harmonic_mean(grids)?;
    let slack = 1e-8;
    let min_eig = |m: &CMat| -> f64 {
        let (vals, _) = hermitian_eig(&hermitize(m));
        vals[0]
    };
    let lower = g0 - &harmonic;
    let upper = &mean - g0;
    let lower_margin = min_eig(&lower);
    let upper_margin = min_eig(&upper);
    let norm_tol = |m: &CMat| m.iter().map(|z| z.norm()).fold(0.0, f64::max) <= slack;
    Ok(VoigtReussReport {
        lower_margin,
        upper_margin,
        lower_ok: lower_margin >= -slack,
        upper_ok: upper_margin >= -slack,
        equals_harmonic: norm_tol(&lower),
        equals_mean: norm_tol(&upper),
    })
}

/// Window constants from grid-estimated sup norms.
pub fn spectral_window(
    lattice: &Lattice,
    sym: &DiffSymbol,
    g: &PeriodicMatrixField,
    f: Option<&PeriodicMatrixField>,
) -> Result<SpectralWindow> {
    let grids = positive_grids(g);
    let (g_lo, g_hi) = g.eig_range(&grids)?;
    if g_lo <= 0.0 {
        return Err(Error::NonPositive(format!("g lambda_min = {g_lo:.3e} on the grid")));
    }
    let (f_lo, f_hi) = match f {
        Some(ff) => {
            let fg = positive_grids(ff);
            ff.eig_range(&fg)?
        }
        None => (1.0, 1.0),
    };
    if f_lo <= 0.0 {
        return Err(Error::NonPositive("f is not positive on the grid".into()));
    }
    let f_inv_norm = 1.0 / f_lo;
    let g_inv_norm = 1.0 / g_lo;
    let c_star = sym.alpha0() / (f_inv_norm * f_inv_norm * g_inv_norm);
    let r0 = lattice.r0();
    let delta = 0.25 * c_star * r0 * r0;
    let h_norm = g_hi.sqrt();
    let h_inv_norm = g_inv_norm.sqrt();
    let t0 = (r0 / 2.0) * (sym.alpha0() / sym.alpha1()).sqrt()
        / (h_norm * h_inv_norm * f_hi * f_inv_norm);
    Ok(SpectralWindow {
        c_star,
        delta,
        t0: t0.min(r0 / 2.0),
    })
}

fn positive_grids(g: &PeriodicMatrixField) -> Vec<usize> {
    g.oversampled_grids()
        .iter()
        .map(|&x| x.max(9))
        .collect()
}

impl EffectiveModel {
    /// Full pipeline: corrector, flux, effective matrix, weights, window.
    pub fn compute(
        lattice: &Lattice,
        sym: &DiffSymbol,
        g: &PeriodicMatrixField,
        q: Option<&PeriodicMatrixField>,
        modes: &ModeSet,
    ) -> Result<Self> {
        let n = sym.cols();
        let (lambda, residual) = solve_cell(lattice, sym, g, modes)?;
        let (g_tilde, g0) = effective_matrix(lattice, sym, g, &lambda)?;
        let (q_bar, f0, f, f_inv, lambda_q) = match q {
            None => (
                CMat::identity(n, n),
                CMat::identity(n, n),
                None,
                None,
                lambda.clone(),
            ),
            Some(qf) => {
                if qf.rows() != n {
                    return Err(Error::DimensionMismatch("Q must be n x n".into()));
                }
                let q_bar = hermitize(&qf.mean());
                let f0 = hermitian_inv_sqrt(&q_bar, 1e-12);
                let band = qf.band();
                let cutoffs: Vec<i64> = modes
                    .cutoffs()
                    .iter()
                    .zip(&band)
                    .map(|(&c, &b)| (2 * c).max(2 * b).max(1))
                    .collect();
                let grids: Vec<usize> = cutoffs.iter().map(|&c| (4 * c + 1) as usize).collect();
                let f = factor_density(qf, lattice, &grids, &cutoffs)?;
                let f_inv = inverse_field(&f, lattice, &grids, &cutoffs)?;
                let lambda_q = solve_cell_weighted(&lambda, qf)?;
                (q_bar, f0, Some(f), Some(f_inv), lambda_q)
            }
        };
        let window = spectral_window(lattice, sym, g, f.as_ref())?;
        Ok(EffectiveModel {
            lattice: lattice.clone(),
            lambda,
            lambda_q,
            g_tilde,
            g0,
            q_bar,
            f0,
            f,
            f_inv,
            window,
            residual,
        })
    }

    pub fn is_weighted(&self) -> bool {
        self.f.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::scalar_field_1d;
    use crate::symbol::acoustics_symbol;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn lat1() -> Lattice {
        Lattice::new(DMatrix::from_element(1, 1, 2.0 * PI)).unwrap()
    }

    #[test]
    fn constant_g_gives_zero_corrector() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = PeriodicMatrixField::constant(1, CMat::from_element(1, 1, Complex64::new(3.0, 0.0)));
        let modes = ModeSet::cubic(1, 8);
        let (lambda, residual) = solve_cell(&lat, &sym, &g, &modes).unwrap();
        assert!(lambda.coeffs().is_empty());
        assert!(residual < 1e-12);
        let (_, g0) = effective_matrix(&lat, &sym, &g, &lambda).unwrap();
        assert_abs_diff_eq!(g0[(0, 0)].re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn one_dimensional_effective_is_harmonic_mean() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = scalar_field_1d(&lat, 32, |x| Complex64::new(1.0 / (2.0 + x.sin()), 0.0)).unwrap();
        let modes = ModeSet::cubic(1, 16);
        let (lambda, residual) = solve_cell(&lat, &sym, &g, &modes).unwrap();
        assert!(residual < 1e-9, "residual {residual}");
        assert!(lambda.mean().iter().all(|z| z.norm() < 1e-12));
        let (_, g0) = effective_matrix(&lat, &sym, &g, &lambda).unwrap();
        assert_abs_diff_eq!(g0[(0, 0)].re, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(g0[(0, 0)].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn effective_matrix_stable_under_cutoff_doubling() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = scalar_field_1d(&lat, 4, |x| Complex64::new(2.0 + x.sin() + 0.3 * (2.0 * x).cos(), 0.0)).unwrap();
        let g0_at = |n: usize| {
            let modes = ModeSet::cubic(1, n);
            let (lambda, _) = solve_cell(&lat, &sym, &g, &modes).unwrap();
            effective_matrix(&lat, &sym, &g, &lambda).unwrap().1[(0, 0)].re
        };
        assert_abs_diff_eq!(g0_at(16), g0_at(32), epsilon = 1e-10);
    }

    #[test]
    fn voigt_reuss_flags_m_equals_n() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = scalar_field_1d(&lat, 24, |x| Complex64::new(1.0 / (2.0 + x.sin()), 0.0)).unwrap();
        let modes = ModeSet::cubic(1, 16);
        let (lambda, _) = solve_cell(&lat, &sym, &g, &modes).unwrap();
        let (_, g0) = effective_matrix(&lat, &sym, &g, &lambda).unwrap();
        let report = voigt_reuss_check(&g, &g0, &[129]).unwrap();
        assert!(report.lower_ok && report.upper_ok);
        assert!(report.equals_harmonic);
        assert!(!report.equals_mean);
    }

    #[test]
    fn weighted_corrector_mean_condition() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = scalar_field_1d(&lat, 24, |x| Complex64::new(2.0 + x.sin(), 0.0)).unwrap();
        let q = scalar_field_1d(&lat, 8, |x| Complex64::new(1.0 + 0.5 * x.cos(), 0.0)).unwrap();
        let modes = ModeSet::cubic(1, 16);
        let (lambda, _) = solve_cell(&lat, &sym, &g, &modes).unwrap();
        let lambda_q = solve_cell_weighted(&lambda, &q).unwrap();
        let mean_q_lambda = q.mul(&lambda_q).unwrap().mean();
        assert!(mean_q_lambda.iter().all(|z| z.norm() < 1e-10));
        // Q = I leaves the corrector untouched
        let qi = PeriodicMatrixField::constant(1, CMat::identity(1, 1));
        let same = solve_cell_weighted(&lambda, &qi).unwrap();
        for (mode, mat) in lambda.coeffs() {
            let diff = same.coeff(mode).unwrap() - mat;
            assert!(diff.iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn window_constants_for_identity() {
        let lat = lat1();
        let sym = acoustics_symbol(1).unwrap();
        let g = PeriodicMatrixField::constant(1, CMat::identity(1, 1));
        let w = spectral_window(&lat, &sym, &g, None).unwrap();
        assert_abs_diff_eq!(w.c_star, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.delta, 0.0625, epsilon = 1e-12);
        assert_abs_diff_eq!(w.t0, 0.25, epsilon = 1e-12);
        assert!(w.t0 <= lat.r0() / 2.0);
    }
}
