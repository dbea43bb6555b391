//! Truncated Bloch fibers, matrix trigonometric functions, the smoothed error
//! functionals J1/J2, branch fitting, Brillouin sweeps and the sharpness probe.

use crate::cell::EffectiveModel;
use crate::coeff::PeriodicMatrixField;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ModeSet};
use crate::linalg::{apply_spectral, hermitian_eig, hermitize, least_squares_fit, loglog_slope, spectral_norm, CMat};
use crate::symbol::DiffSymbol;
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// One assembled fiber with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct FiberOperator {
    pub k: DVector<f64>,
    pub modes: ModeSet,
    pub matrix: CMat,
    pub eigvals: DVector<f64>,
    pub eigvecs: CMat,
}

impl FiberOperator {
    fn from_matrix(k: DVector<f64>, modes: ModeSet, matrix: CMat) -> Self {
        let sym = hermitize(&matrix);
        let (eigvals, eigvecs) = hermitian_eig(&sym);
        FiberOperator { k, modes, matrix: sym, eigvals, eigvecs }
    }

    /// Eigenvalues clamped to zero below the relative floor, ascending.
    pub fn clamped_eigvals(&self) -> DVector<f64> {
        let top = self.eigvals[self.eigvals.len() - 1].max(0.0);
        let floor = 1e-12 * top;
        self.eigvals.map(|l| if l < floor { 0.0 } else { l })
    }
}

fn check_band(field: &PeriodicMatrixField, modes: &ModeSet, name: &str) -> Result<()> {
    let band = field.band();
    for (a, (&b, &c)) in band.iter().zip(modes.cutoffs()).enumerate() {
        if b > 2 * c {
            return Err(Error::Aliasing(format!(
                "{name} has band {b} on axis {a}, exceeding twice the cutoff {c}"
            )));
        }
    }
    Ok(())
}

/// Convolution matrix of a p x p field over the mode set: block (b, b') is
/// the coefficient at b - b'.
fn convolution_matrix(field: &PeriodicMatrixField, modes: &ModeSet) -> CMat {
    let p = field.rows();
    let mm = modes.len();
    let mut out = CMat::zeros(p * mm, p * mm);
    for (r, mr) in modes.modes().iter().enumerate() {
        for (c, mc) in modes.modes().iter().enumerate() {
            let diff: Vec<i64> = mr.iter().zip(mc).map(|(&x, &y)| x - y).collect();
            if let Some(mat) = field.coeff(&diff) {
                out.view_mut((p * r, p * c), (p, p)).copy_from(mat);
            }
        }
    }
    out
}

/// Assemble A(k) = [B(k) F]* G [B(k) F] over the truncated mode set; F is the
/// convolution with the density factor (identity when `f` is None).
pub fn assemble_fiber(
    lattice: &Lattice,
    sym: &DiffSymbol,
    g: &PeriodicMatrixField,
    f: Option<&PeriodicMatrixField>,
    k: &DVector<f64>,
    modes: &ModeSet,
) -> Result<FiberOperator> {
    check_band(g, modes, "g")?;
    if let Some(ff) = f {
        check_band(ff, modes, "f")?;
    }
    let n = sym.cols();
    let m = sym.rows();
    let mm = modes.len();
    // B(k): block diagonal, b_sym(dual(b) + k) per mode.
    let mut bf = CMat::zeros(m * mm, n * mm);
    for (j, mode) in modes.modes().iter().enumerate() {
        let xi = lattice.dual_vector(mode) + k;
        let bj = sym.eval(xi.as_slice());
        bf.view_mut((m * j, n * j), (m, n)).copy_from(&bj);
    }
    if let Some(ff) = f {
        let fconv = convolution_matrix(ff, modes);
        bf *= fconv;
    }
    let gconv = convolution_matrix(g, modes);
    let a = bf.adjoint() * gconv * bf;
    Ok(FiberOperator::from_matrix(k.clone(), modes.clone(), a))
}

/// Effective fiber: block diagonal f0 b(dual(b)+k)* g0 b(dual(b)+k) f0.
pub fn effective_fiber(
    lattice: &Lattice,
    sym: &DiffSymbol,
    g0: &CMat,
    f0: Option<&CMat>,
    k: &DVector<f64>,
    modes: &ModeSet,
) -> FiberOperator {
    let n = sym.cols();
    let mm = modes.len();
    let mut a = CMat::zeros(n * mm, n * mm);
    for (j, mode) in modes.modes().iter().enumerate() {
        let xi = lattice.dual_vector(mode) + k;
        let bj = sym.eval(xi.as_slice());
        let mut block = bj.adjoint() * g0 * bj;
        if let Some(f0m) = f0 {
            block = f0m.adjoint() * block * f0m;
        }
        a.view_mut((n * j, n * j), (n, n)).copy_from(&block);
    }
    FiberOperator::from_matrix(k.clone(), modes.clone(), a)
}

/// cos(tau sqrt(A)) through the eigendecomposition.
pub fn matfun_cos(op: &FiberOperator, tau: f64) -> CMat {
    let vals = op.clamped_eigvals();
    apply_spectral(&vals, &op.eigvecs, |l| (tau * l.sqrt()).cos())
}

/// A^{-1/2} sin(tau sqrt(A)) with the continuous extension tau at lambda = 0.
pub fn matfun_sinc(op: &FiberOperator, tau: f64) -> CMat {
    let vals = op.clamped_eigvals();
    apply_spectral(&vals, &op.eigvecs, |l| {
        if l == 0.0 {
            tau
        } else {
            (tau * l.sqrt()).sin() / l.sqrt()
        }
    })
}

/// Diagonal of the smoothing factor R(k, eps)^{s/2}: eps^s (|b+k|^2 + eps^2)^{-s/2}
/// repeated n times per mode.
pub fn smoothing_diag(
    lattice: &Lattice,
    k: &DVector<f64>,
    eps: f64,
    s: f64,
    modes: &ModeSet,
    n: usize,
) -> DVector<f64> {
    let mut diag = DVector::zeros(n * modes.len());
    for (j, mode) in modes.modes().iter().enumerate() {
        let xi = lattice.dual_vector(mode) + k;
        let v = eps.powf(s) * (xi.norm_squared() + eps * eps).powf(-s / 2.0);
        for i in 0..n {
            diag[n * j + i] = v;
        }
    }
    diag
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Functional {
    J1,
    J2,
}

/// The static data of one fiber-error study.
pub struct FiberProblem<'a> {
    pub lattice: &'a Lattice,
    pub sym: &'a DiffSymbol,
    pub g: &'a PeriodicMatrixField,
    pub g0: CMat,
    pub f: Option<&'a PeriodicMatrixField>,
    pub f_inv: Option<&'a PeriodicMatrixField>,
    pub f0: CMat,
    pub modes: ModeSet,
}

impl<'a> FiberProblem<'a> {
    pub fn from_model(
        model: &'a EffectiveModel,
        sym: &'a DiffSymbol,
        g: &'a PeriodicMatrixField,
        modes: ModeSet,
    ) -> Self {
        FiberProblem {
            lattice: &model.lattice,
            sym,
            g,
            g0: model.g0.clone(),
            f: model.f.as_ref(),
            f_inv: model.f_inv.as_ref(),
            f0: model.f0.clone(),
            modes,
        }
    }

    pub fn weighted(&self) -> bool {
        self.f.is_some()
    }

    pub fn pair_at(&self, k: &DVector<f64>) -> Result<FiberPair> {
        let op = assemble_fiber(self.lattice, self.sym, self.g, self.f, k, &self.modes)?;
        let f0_opt = if self.weighted() { Some(&self.f0) } else { None };
        let eff = effective_fiber(self.lattice, self.sym, &self.g0, f0_opt, k, &self.modes);
        let sandwich = if self.weighted() {
            let n = self.sym.cols();
            let fconv = convolution_matrix(self.f.unwrap(), &self.modes);
            let finv_conv = convolution_matrix(
                self.f_inv.expect("weighted problem carries f_inv"),
                &self.modes,
            );
            let mm = self.modes.len();
            let mut f0_blk = CMat::zeros(n * mm, n * mm);
            let mut f0_inv_blk = CMat::zeros(n * mm, n * mm);
            let f0_inv = self
                .f0
                .clone()
                .try_inverse()
                .expect("f0 is positive definite");
            for j in 0..mm {
                f0_blk.view_mut((n * j, n * j), (n, n)).copy_from(&self.f0);
                f0_inv_blk.view_mut((n * j, n * j), (n, n)).copy_from(&f0_inv);
            }
            Some(Sandwich { fconv, finv_conv, f0_blk, f0_inv_blk })
        } else {
            None
        };
        Ok(FiberPair {
            lattice: self.lattice.clone(),
            n: self.sym.cols(),
            op,
            eff,
            sandwich,
        })
    }
}

struct Sandwich {
    fconv: CMat,
    finv_conv: CMat,
    f0_blk: CMat,
    f0_inv_blk: CMat,
}

/// A periodic/effective fiber pair at one quasimomentum, with cached
/// eigendecompositions so several (eps, tau, s) evaluations stay cheap.
pub struct FiberPair {
    lattice: Lattice,
    n: usize,
    pub op: FiberOperator,
    pub eff: FiberOperator,
    sandwich: Option<Sandwich>,
}

impl FiberPair {
    /// Smoothed spectral norm of the chosen functional difference.
    /// J2 carries the extra factor eps that matches the whole-space scaling.
    pub fn error(&self, eps: f64, tau: f64, s: f64, functional: Functional) -> f64 {
        let tau_scaled = tau / eps;
        let mut diff = match functional {
            Functional::J1 => {
                let cp = matfun_cos(&self.op, tau_scaled);
                let ce = matfun_cos(&self.eff, tau_scaled);
                match &self.sandwich {
                    None => cp - ce,
                    Some(sw) => {
                        &sw.fconv * cp * &sw.finv_conv - &sw.f0_blk * ce * &sw.f0_inv_blk
                    }
                }
            }
            Functional::J2 => {
                let sp = matfun_sinc(&self.op, tau_scaled);
                let se = matfun_sinc(&self.eff, tau_scaled);
                match &self.sandwich {
                    None => sp - se,
                    Some(sw) => {
                        &sw.fconv * sp * sw.fconv.adjoint() - &sw.f0_blk * se * &sw.f0_blk
                    }
                }
            }
        };
        let smoothing = smoothing_diag(&self.lattice, &self.op.k, eps, s, &self.op.modes, self.n);
        for j in 0..diff.ncols() {
            let w = Complex64::new(smoothing[j], 0.0);
            for i in 0..diff.nrows() {
                diff[(i, j)] *= w;
            }
        }
        let norm = spectral_norm(&diff);
        match functional {
            Functional::J1 => norm,
            Functional::J2 => eps * norm,
        }
    }
}

/// Standalone single-point evaluation.
#[allow(clippy::too_many_arguments)]
pub fn fiber_error(
    problem: &FiberProblem,
    k: &DVector<f64>,
    eps: f64,
    tau: f64,
    s: f64,
    functional: Functional,
) -> Result<f64> {
    Ok(problem.pair_at(k)?.error(eps, tau, s, functional))
}

/// Result of fitting the lowest n eigenvalue branches lambda_l(t theta).
#[derive(Debug, Clone, Serialize)]
pub struct BranchFit {
    pub gammas: Vec<f64>,
    pub mus: Vec<f64>,
    /// Max over the grid of |lambda(t)/t^2 - gamma - mu t| (two-term model).
    pub residual: f64,
}

/// Track the lowest n branches over a geometric t-grid (using both signs of t
/// to separate the even and odd parts of the expansion) and fit
/// lambda_l(t)/t^2 = gamma_l + mu_l t + O(t^2).
pub fn branch_fit(
    problem: &FiberProblem,
    theta: &[f64],
    t_grid: &[f64],
) -> Result<BranchFit> {
    let n = problem.sym.cols();
    if t_grid.len() < 3 {
        return Err(Error::Config("branch_fit needs at least 3 t values".into()));
    }
    let mut ts: Vec<f64> = t_grid.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let theta_v = DVector::from_column_slice(theta);

    // (t, lambda_plus, lambda_minus) per branch, tracked by eigenvector overlap.
    let mut lam_plus: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut lam_minus: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut refs: Option<Vec<nalgebra::DVector<Complex64>>> = None;
    for &t in &ts {
        let pair_p = problem.pair_at(&(theta_v.clone() * t))?;
        let pair_m = problem.pair_at(&(theta_v.clone() * -t))?;
        let vec_p: Vec<_> = (0..n).map(|j| pair_p.op.eigvecs.column(j).into_owned()).collect();
        let vec_m: Vec<_> = (0..n).map(|j| pair_m.op.eigvecs.column(j).into_owned()).collect();
        let order_p: Vec<usize> = match &refs {
            None => (0..n).collect(),
            Some(r) => match_by_overlap(r, &vec_p).ok_or(Error::BranchTracking { t })?,
        };
        // Match the -t eigenvectors against the +t ones at the same t.
        let new_refs: Vec<_> = order_p.iter().map(|&j| vec_p[j].clone()).collect();
        let order_m = match_by_overlap(&new_refs, &vec_m).ok_or(Error::BranchTracking { t })?;
        for l in 0..n {
            lam_plus[l].push(pair_p.op.eigvals[order_p[l]]);
            lam_minus[l].push(pair_m.op.eigvals[order_m[l]]);
        }
        refs = Some(new_refs);
    }

    let mut gammas = Vec::with_capacity(n);
    let mut mus = Vec::with_capacity(n);
    let one = |_t: f64| 1.0;
    let sq = |t: f64| t * t;
    for l in 0..n {
        let even: Vec<f64> = ts
            .iter()
            .zip(&lam_plus[l])
            .zip(&lam_minus[l])
            .map(|((&t, &lp), &lm)| 0.5 * (lp + lm) / (t * t))
            .collect();
        let odd: Vec<f64> = ts
            .iter()
            .zip(&lam_plus[l])
            .zip(&lam_minus[l])
            .map(|((&t, &lp), &lm)| 0.5 * (lp - lm) / (t * t * t))
            .collect();
        let ce = least_squares_fit(&ts, &even, &[&one, &sq]);
        let co = least_squares_fit(&ts, &odd, &[&one, &sq]);
        gammas.push(ce[0]);
        mus.push(co[0]);
    }

    // Order branches by gamma, breaking near-ties by mu (matches the germ
    // module's cluster convention).
    let mut order: Vec<usize> = (0..n).collect();
    let gmax = gammas.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    order.sort_by(|&a, &b| {
        if (gammas[a] - gammas[b]).abs() <= 1e-6 * gmax {
            mus[a].partial_cmp(&mus[b]).unwrap()
        } else {
            gammas[a].partial_cmp(&gammas[b]).unwrap()
        }
    });
    let gammas: Vec<f64> = order.iter().map(|&l| gammas[l]).collect();
    let mus: Vec<f64> = order.iter().map(|&l| mus[l]).collect();
    let lam_plus: Vec<Vec<f64>> = order.iter().map(|&l| lam_plus[l].clone()).collect();

    // Residual of the contractual two-term model lambda/t^2 ~ gamma + mu t.
    let mut residual: f64 = 0.0;
    for l in 0..n {
        for (i, &t) in ts.iter().enumerate() {
            let model = gammas[l] + mus[l] * t;
            residual = residual.max((lam_plus[l][i] / (t * t) - model).abs());
        }
    }

    Ok(BranchFit { gammas, mus, residual })
}

fn match_by_overlap(
    refs: &[nalgebra::DVector<Complex64>],
    cands: &[nalgebra::DVector<Complex64>],
) -> Option<Vec<usize>> {
    let n = refs.len();
    let mut taken = vec![false; n];
    let mut order = vec![0usize; n];
    for (i, r) in refs.iter().enumerate() {
        let mut best = (0.0f64, usize::MAX);
        for (j, c) in cands.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let ov = r.dotc(c).norm();
            if ov > best.0 {
                best = (ov, j);
            }
        }
        if best.1 == usize::MAX || best.0 < 0.6 {
            return None;
        }
        taken[best.1] = true;
        order[i] = best.1;
    }
    Some(order)
}

/// A (eps, E(eps)) curve with its fitted log-log slope.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorCurve {
    pub s: f64,
    pub tau: f64,
    pub functional: Functional,
    pub samples: Vec<(f64, f64)>,
    /// (slope, max log-residual); None when the curve is degenerate.
    pub slope: Option<(f64, f64)>,
    pub degenerate: bool,
}

/// E(eps) = max over the k-grid of the fiber error, with slope fit.
pub fn sweep(
    problem: &FiberProblem,
    grid: &[DVector<f64>],
    eps_list: &[f64],
    tau: f64,
    s: f64,
    functional: Functional,
) -> Result<ErrorCurve> {
    let per_k: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let pair = problem.pair_at(k)?;
            Ok(eps_list
                .iter()
                .map(|&eps| pair.error(eps, tau, s, functional))
                .collect())
        })
        .collect::<Result<_>>()?;
    let samples: Vec<(f64, f64)> = eps_list
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let e = per_k.iter().map(|v| v[i]).fold(0.0, f64::max);
            (eps, e)
        })
        .collect();
    let degenerate = samples.iter().all(|&(_, e)| e <= 1e-10);
    let slope = if degenerate { None } else { loglog_slope(&samples) };
    Ok(ErrorCurve { s, tau, functional, samples, slope, degenerate })
}

/// One entry of the sharpness probe.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessEntry {
    pub eps: f64,
    pub t: f64,
    pub error: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub s: f64,
    pub tau: f64,
    pub gamma: f64,
    pub mu: f64,
    pub entries: Vec<SharpnessEntry>,
    /// Ratio growth from the largest to the smallest eps.
    pub growth: f64,
    pub monotone: bool,
}

/// Evaluate E_s(eps)/eps at k = t(eps) theta0 along the resonant sequence
/// eps_k = alpha^2 (2 pi k)^{-2}, where t(eps) = c sqrt(eps) keeps the
/// perturbed branch phase at an odd multiple of pi relative to the effective
/// one. Divergence of the ratio for s < 2 exhibits the sharpness of the
/// first-order estimate.
pub fn sharpness_probe(
    problem: &FiberProblem,
    model: &EffectiveModel,
    theta0: &[f64],
    s: f64,
    tau: f64,
    num_points: usize,
) -> Result<SharpnessReport> {
    let germ = crate::germ::germ_at(model, problem.sym, theta0)?;
    let (j, mu) = germ
        .mus
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .expect("germ has at least one branch");
    if mu.abs() <= crate::germ::N_ZERO_TOL {
        return Err(Error::ProbeInapplicable);
    }
    let gamma = germ.gammas[j];
    let c = (2.0 * std::f64::consts::PI * gamma.sqrt() / (mu * tau).abs()).sqrt();
    let alpha = tau.abs() * gamma.sqrt() * c;
    // Keep t(eps) well inside the Brillouin zone.
    let t_cap = 0.4 * problem.lattice.r0();
    let k0 = ((c * alpha / (2.0 * std::f64::consts::PI * t_cap)).ceil() as u64).max(1);
    let theta_v = DVector::from_column_slice(theta0);
    let mut entries = Vec::new();
    for p in 0..num_points.max(2) {
        let kk = k0 << p;
        let eps = (alpha / (2.0 * std::f64::consts::PI * kk as f64)).powi(2);
        let t = c * eps.sqrt();
        let k = theta_v.clone() * t;
        let err = fiber_error(problem, &k, eps, tau, s, Functional::J1)?;
        entries.push(SharpnessEntry { eps, t, error: err, ratio: err / eps });
    }
    // entries are ordered from largest eps to smallest
    let growth = entries.last().unwrap().ratio / entries.first().unwrap().ratio.max(1e-300);
    let monotone = entries.windows(2).all(|w| w[1].ratio >= w[0].ratio * 0.999);
    Ok(SharpnessReport { s, tau, gamma, mu, entries, growth, monotone })
}

/// Truncation-consistency diagnostic: relative change of the fiber error under
/// mode-set doubling, at a single (k, eps).
pub fn truncation_ratio(
    problem: &FiberProblem,
    k: &DVector<f64>,
    eps: f64,
    tau: f64,
    s: f64,
    functional: Functional,
) -> Result<f64> {
    let base = fiber_error(problem, k, eps, tau, s, functional)?;
    let doubled = FiberProblem {
        lattice: problem.lattice,
        sym: problem.sym,
        g: problem.g,
        g0: problem.g0.clone(),
        f: problem.f,
        f_inv: problem.f_inv,
        f0: problem.f0.clone(),
        modes: problem.modes.doubled(),
    };
    let refined = fiber_error(&doubled, k, eps, tau, s, functional)?;
    Ok((refined - base).abs() / base.max(1e-300))
}
