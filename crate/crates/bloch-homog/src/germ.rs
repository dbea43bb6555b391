//! Spectral germ, threshold operators N(theta) and L(theta), the N0/N*
//! splitting over eigenvalue clusters, and the branch-crossing conditions.

use crate::cell::EffectiveModel;
use crate::error::{Error, Result};
use crate::lattice::unit_fan;
use crate::linalg::{generalized_hermitian_eig, hermitian_eig, hermitize, CMat};
use crate::symbol::DiffSymbol;
use nalgebra::{DMatrix, DVector};

/// Relative tolerance for treating germ eigenvalues as coincident.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Absolute floor for "N vanishes" style decisions.
pub const N_ZERO_TOL: f64 = 1e-8;

/// Germ data at one direction theta.
#[derive(Debug, Clone)]
pub struct GermData {
    pub theta: DVector<f64>,
    /// S_hat(theta) = b(theta)* g0 b(theta), n x n Hermitian.
    pub s_hat: CMat,
    /// Germ eigenvalues, ascending, repeated by multiplicity.
    pub gammas: Vec<f64>,
    /// Q_bar-orthonormal germ eigenvectors (columns), cluster bases fixed by
    /// diagonalizing the compressed threshold operator.
    pub zetas: CMat,
    /// Threshold operator in the germ basis.
    pub n_full: CMat,
    /// Cluster-diagonal part of `n_full`.
    pub n0: CMat,
    /// Off-diagonal remainder.
    pub nstar: CMat,
    /// Cubic branch coefficients mu_l (diagonal of n0), same order as gammas.
    pub mus: Vec<f64>,
    /// Partition of 0..n by gamma coincidence.
    pub clusters: Vec<Vec<usize>>,
    /// Set when the compressed threshold block was not Hermitian to working
    /// precision, i.e. the basis choice inside a cluster is not canonical.
    pub compressed_block_flagged: bool,
}

/// L(theta) = mean(Lambda* b(theta)* g~ + g~* b(theta) Lambda), m x m, via
/// Parseval over the Fourier tables.
pub fn l_matrix(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> CMat {
    l_matrix_with(model, sym, theta, false)
}

fn l_matrix_with(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64], weighted: bool) -> CMat {
    let m = sym.rows();
    let btheta = sym.eval(theta);
    let lambda = if weighted { &model.lambda_q } else { &model.lambda };
    let mut half = CMat::zeros(m, m);
    for (mode, lam) in lambda.coeffs() {
        if let Some(gt) = model.g_tilde.coeff(mode) {
            half += lam.adjoint() * btheta.adjoint() * gt;
        }
    }
    let adj = half.adjoint();
    half + adj
}

/// N(theta) = b(theta)* L(theta) b(theta), n x n Hermitian (plain corrector).
pub fn n_matrix(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> CMat {
    let btheta = sym.eval(theta);
    let l = l_matrix_with(model, sym, theta, false);
    hermitize(&(btheta.adjoint() * l * btheta))
}

/// Weighted threshold operator: the same contraction with Lambda_Q.
pub fn n_weighted(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> CMat {
    let btheta = sym.eval(theta);
    let l = l_matrix_with(model, sym, theta, true);
    hermitize(&(btheta.adjoint() * l * btheta))
}

fn threshold_matrix(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> (CMat, f64) {
    let btheta = sym.eval(theta);
    let l = l_matrix_with(model, sym, theta, model.is_weighted());
    let raw = btheta.adjoint() * l * btheta;
    let defect = crate::linalg::hermitian_defect(&raw);
    (hermitize(&raw), defect)
}

/// Germ eigenproblem S_hat(theta) zeta = gamma Q_bar zeta with the cluster
/// basis fixed by diagonalizing the compressed threshold operator.
pub fn germ_at(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> Result<GermData> {
    if theta.len() != sym.dim() {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} components for a d = {} operator",
            theta.len(),
            sym.dim()
        )));
    }
    let norm: f64 = theta.iter().map(|&t| t * t).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::DimensionMismatch(format!("theta must be a unit vector, |theta| = {norm}")));
    }
    let n = sym.cols();
    let btheta = sym.eval(theta);
    let s_hat = hermitize(&(btheta.adjoint() * &model.g0 * &btheta));
    let (gamma_vec, mut zetas) = generalized_hermitian_eig(&s_hat, &model.q_bar)
        .ok_or_else(|| Error::NonPositive("Q_bar is not positive definite".into()))?;
    let gammas: Vec<f64> = gamma_vec.iter().copied().collect();

    let (n_mat, defect) = threshold_matrix(model, sym, theta);
    let compressed_block_flagged = defect > N_ZERO_TOL;

    // Cluster by coincidence of adjacent gammas.
    let tol = CLUSTER_TOL * gammas.last().copied().unwrap_or(1.0).abs().max(1.0);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for l in 0..n {
        match clusters.last_mut() {
            Some(cl) if gammas[l] - gammas[*cl.last().unwrap()] <= tol => cl.push(l),
            _ => clusters.push(vec![l]),
        }
    }

    // Compress N to the germ basis and rotate inside each cluster so the
    // compressed block is diagonal (fixes the "embryo" basis).
    let mut g_mat = zetas.adjoint() * &n_mat * &zetas;
    for cl in &clusters {
        if cl.len() < 2 {
            continue;
        }
        let s = cl[0];
        let w = cl.len();
        let block = g_mat.view((s, s), (w, w)).into_owned();
        let (_, u) = hermitian_eig(&block);
        let cols = zetas.columns(s, w) * &u;
        zetas.columns_mut(s, w).copy_from(&cols);
        g_mat = zetas.adjoint() * &n_mat * &zetas;
    }

    let mut n0 = CMat::zeros(n, n);
    for cl in &clusters {
        let s = cl[0];
        let w = cl.len();
        n0.view_mut((s, s), (w, w))
            .copy_from(&g_mat.view((s, s), (w, w)).into_owned());
    }
    let nstar = &g_mat - &n0;
    let mus: Vec<f64> = (0..n).map(|l| g_mat[(l, l)].re).collect();

    Ok(GermData {
        theta: DVector::from_column_slice(theta),
        s_hat,
        gammas,
        zetas,
        n_full: g_mat,
        n0,
        nstar,
        mus,
        clusters,
        compressed_block_flagged,
    })
}

/// The N0/N* split of an already-computed germ.
pub fn split_n(germ: &GermData) -> (CMat, CMat, Vec<f64>) {
    (germ.n0.clone(), germ.nstar.clone(), germ.mus.clone())
}

/// Scan report over a fan of directions.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub n_theta: usize,
    /// max over the fan of ||N(theta)|| <= tol.
    pub n_zero: bool,
    /// max over the fan of ||N0(theta)|| <= tol.
    pub n0_zero: bool,
    /// Branch pairs that cross somewhere on the fan, with a crossing theta.
    pub crossing_pairs: Vec<(usize, usize, Vec<f64>)>,
    /// Pairs carrying a nonvanishing off-diagonal threshold block.
    pub k_set: Vec<(usize, usize)>,
    /// min over fan and K-set of min{c_star, |gamma_k - gamma_l| / n}.
    pub c_circ: f64,
    /// True iff no pair in the K-set ever crosses.
    pub condition_a: bool,
}

/// Scan the germ over a deterministic fan (uniform angles for d = 2,
/// a Fibonacci sphere for d = 3, both signs for d = 1), detect crossings and
/// the pairs with nonvanishing off-diagonal threshold blocks.
pub fn condition_scan(
    model: &EffectiveModel,
    sym: &DiffSymbol,
    fan_size: usize,
) -> Result<ConditionReport> {
    let d = sym.dim();
    let n = sym.cols();
    let fan = unit_fan(d, fan_size.max(2 * d));
    let germs: Vec<GermData> = fan
        .iter()
        .map(|theta| germ_at(model, sym, theta.as_slice()))
        .collect::<Result<_>>()?;

    let n_scale = germs
        .iter()
        .flat_map(|g| g.n_full.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let n_zero = n_scale <= N_ZERO_TOL;
    let n0_scale = germs
        .iter()
        .flat_map(|g| g.n0.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let n0_zero = n0_scale <= N_ZERO_TOL;

    let gamma_scale = germs
        .iter()
        .flat_map(|g| g.gammas.iter())
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    let cross_tol = CLUSTER_TOL * gamma_scale;
    let block_tol = N_ZERO_TOL * n_scale.max(1e-30);

    let mut crossing_pairs: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    let mut k_pairs = DMatrix::<bool>::from_element(n, n, false);
    for (gi, germ) in germs.iter().enumerate() {
        for k in 0..n {
            for l in (k + 1)..n {
                let same_cluster = germ
                    .clusters
                    .iter()
                    .any(|cl| cl.contains(&k) && cl.contains(&l));
                if same_cluster && !crossing_pairs.iter().any(|&(a, b, _)| (a, b) == (k, l)) {
                    crossing_pairs.push((k, l, fan[gi].iter().copied().collect()));
                }
                if !same_cluster && germ.n_full[(k, l)].norm() > block_tol {
                    k_pairs[(k, l)] = true;
                }
            }
        }
    }

    // Refine crossings between adjacent fan points for d = 2: branches can
    // cross strictly between samples. Localize minima of |gamma_k - gamma_l|
    // by ternary search on the angle.
    if d == 2 {
        let angles: Vec<f64> = (0..fan.len())
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / fan.len() as f64)
            .collect();
        for k in 0..n {
            for l in (k + 1)..n {
                if crossing_pairs.iter().any(|&(a, b, _)| (a, b) == (k, l)) {
                    continue;
                }
                for j in 0..fan.len() {
                    let a0 = angles[j];
                    let a1 = angles[(j + 1) % fan.len()] + if j + 1 == fan.len() { 2.0 * std::f64::consts::PI } else { 0.0 };
                    let gap = |phi: f64| -> Result<f64> {
                        let theta = [phi.cos(), phi.sin()];
                        let germ = germ_at(model, sym, &theta)?;
                        Ok((germ.gammas[k] - germ.gammas[l]).abs())
                    };
                    let g0 = (germs[j].gammas[k] - germs[j].gammas[l]).abs();
                    let g1 = (germs[(j + 1) % fan.len()].gammas[k] - germs[(j + 1) % fan.len()].gammas[l]).abs();
                    // Only bother when the gap is already small at an endpoint.
                    if g0.min(g1) > 100.0 * cross_tol {
                        continue;
                    }
                    let (mut lo, mut hi) = (a0, a1);
                    for _ in 0..60 {
                        let m1 = lo + (hi - lo) / 3.0;
                        let m2 = hi - (hi - lo) / 3.0;
                        if gap(m1)? <= gap(m2)? {
                            hi = m2;
                        } else {
                            lo = m1;
                        }
                    }
                    let phi = 0.5 * (lo + hi);
                    if gap(phi)? <= cross_tol {
                        crossing_pairs.push((k, l, vec![phi.cos(), phi.sin()]));
                        break;
                    }
                }
            }
        }
    }

    let k_set: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| ((k + 1)..n).map(move |l| (k, l)))
        .filter(|&(k, l)| k_pairs[(k, l)])
        .collect();
    let condition_a = k_set
        .iter()
        .all(|&(k, l)| !crossing_pairs.iter().any(|&(a, b, _)| (a, b) == (k, l)));
    let c_star = model.window.c_star;
    let mut c_circ = f64::INFINITY;
    for germ in &germs {
        for &(k, l) in &k_set {
            c_circ = c_circ.min(c_star.min((germ.gammas[k] - germ.gammas[l]).abs() / n as f64));
        }
    }
    if !c_circ.is_finite() {
        c_circ = c_star;
    }

    Ok(ConditionReport {
        n_theta: fan.len(),
        n_zero,
        n0_zero,
        crossing_pairs,
        k_set,
        c_circ,
        condition_a,
    })
}

/// Convenience: ||N(theta)|| spectral for a preset check.
pub fn n_norm(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> f64 {
    crate::linalg::spectral_norm(&n_matrix(model, sym, theta))
}

/// Scalar N for n = 1 operators (acoustics).
pub fn n_scalar(model: &EffectiveModel, sym: &DiffSymbol, theta: &[f64]) -> f64 {
    let nm = n_matrix(model, sym, theta);
    nm[(0, 0)].re
}
