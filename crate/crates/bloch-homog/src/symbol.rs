//! The first-order symbol b(xi) = sum_l b_l xi_l and builders for the
//! acoustics, elasticity and Hill-body operators.

use crate::error::{Error, Result};
use crate::lattice::unit_fan;
use crate::linalg::{hermitian_eig, CMat};
use nalgebra::DVector;
use num_complex::Complex64;

/// Constant matrices b_1..b_d of a first-order symbol, with the ellipticity
/// bounds alpha0 <= lambda(b(theta)* b(theta)) <= alpha1 certified on a fan of
/// unit directions.
#[derive(Debug, Clone)]
pub struct DiffSymbol {
    d: usize,
    m: usize,
    n: usize,
    mats: Vec<CMat>,
    alpha0: f64,
    alpha1: f64,
}

const FAN_SIZE: usize = 512;

impl DiffSymbol {
    pub fn new(mats: Vec<CMat>) -> Result<Self> {
        let d = mats.len();
        if d == 0 {
            return Err(Error::DimensionMismatch("symbol needs at least one matrix".into()));
        }
        let m = mats[0].nrows();
        let n = mats[0].ncols();
        if mats.iter().any(|b| b.nrows() != m || b.ncols() != n) {
            return Err(Error::DimensionMismatch("symbol matrices differ in shape".into()));
        }
        if m < n {
            return Err(Error::DimensionMismatch(format!("symbol needs m >= n, got {m}x{n}")));
        }
        let mut sym = DiffSymbol { d, m, n, mats, alpha0: 0.0, alpha1: 0.0 };
        let (a0, a1) = sym.ellipticity_bounds(FAN_SIZE)?;
        sym.alpha0 = a0;
        sym.alpha1 = a1;
        Ok(sym)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    /// b(xi) = sum_l b_l xi_l.
    pub fn eval(&self, xi: &[f64]) -> CMat {
        assert_eq!(xi.len(), self.d, "xi has wrong length");
        let mut out = CMat::zeros(self.m, self.n);
        for (l, b) in self.mats.iter().enumerate() {
            out += b.map(|z| z * xi[l]);
        }
        out
    }

    /// Min/max eigenvalues of b(theta)* b(theta) over a deterministic fan of
    /// unit directions, with one local refinement pass around the extremizers.
    pub fn ellipticity_bounds(&self, fan_size: usize) -> Result<(f64, f64)> {
        let fan_size = fan_size.max(2 * self.d);
        let fan = unit_fan(self.d, fan_size);
        let mut best_min = (f64::INFINITY, 0usize);
        let mut best_max = (f64::NEG_INFINITY, 0usize);
        let eig_range = |theta: &DVector<f64>| -> (f64, f64) {
            let b = self.eval(theta.as_slice());
            let gram = b.adjoint() * b;
            let (vals, _) = hermitian_eig(&gram);
            (vals[0], vals[vals.len() - 1])
        };
        for (i, theta) in fan.iter().enumerate() {
            let (lo, hi) = eig_range(theta);
            if lo < best_min.0 {
                best_min = (lo, i);
            }
            if hi > best_max.0 {
                best_max = (hi, i);
            }
        }
        if self.d > 1 {
            // Refine once: perturb each extremal direction within one fan step.
            let step = 2.0 * std::f64::consts::PI / fan_size as f64;
            let perturbed = |center: &DVector<f64>| -> Vec<DVector<f64>> {
                let mut out = Vec::new();
                for axis in 0..self.d {
                    for j in -4i32..=4 {
                        if j == 0 {
                            continue;
                        }
                        let mut theta = center.clone();
                        theta[axis] += step * j as f64 / 4.0;
                        let norm = theta.norm();
                        if norm > 1e-12 {
                            out.push(theta / norm);
                        }
                    }
                }
                out
            };
            for theta in perturbed(&fan[best_min.1]) {
                best_min.0 = best_min.0.min(eig_range(&theta).0);
            }
            for theta in perturbed(&fan[best_max.1]) {
                best_max.0 = best_max.0.max(eig_range(&theta).1);
            }
        }
        if best_min.0 <= 1e-12 {
            return Err(Error::RankDeficientSymbol { alpha0: best_min.0 });
        }
        Ok((best_min.0, best_max.0))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// b(D) = D: n = 1, m = d, b_l = e_l.
pub fn acoustics_symbol(d: usize) -> Result<DiffSymbol> {
    if d < 1 {
        return Err(Error::DimensionMismatch("acoustics needs d >= 1".into()));
    }
    let mats = (0..d)
        .map(|l| {
            let mut b = CMat::zeros(d, 1);
            b[(l, 0)] = re(1.0);
            b
        })
        .collect();
    DiffSymbol::new(mats)
}

/// Strain row ordering for the elasticity symbol: diagonal strains interleaved
/// with the shear rows carrying 1/2 weights. Matches the isotropic stiffness
/// presets in `coeff`.
pub fn elasticity_rows(d: usize) -> Vec<(usize, usize)> {
    match d {
        2 => vec![(0, 0), (0, 1), (1, 1)],
        3 => vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (0, 2)],
        _ => panic!("elasticity rows defined for d = 2, 3"),
    }
}

/// Elasticity symbol: m = d(d+1)/2 rows over strain pairs (j,l), n = d.
pub fn elasticity_symbol(d: usize) -> Result<DiffSymbol> {
    if !(2..=3).contains(&d) {
        return Err(Error::DimensionMismatch("elasticity needs d in {2, 3}".into()));
    }
    let rows = elasticity_rows(d);
    let m = rows.len();
    let mats = (0..d)
        .map(|l| {
            let mut b = CMat::zeros(m, d);
            for (r, &(i, j)) in rows.iter().enumerate() {
                if i == j {
                    if l == i {
                        b[(r, i)] = re(1.0);
                    }
                } else {
                    // row xi_j at column i and xi_i at column j, halved
                    if l == j {
                        b[(r, i)] = re(0.5);
                    }
                    if l == i {
                        b[(r, j)] = re(0.5);
                    }
                }
            }
            b
        })
        .collect();
    DiffSymbol::new(mats)
}

/// Hill-body symbol: first row (xi_1..xi_d), then a row per pair j < l with
/// xi_l in column j and -xi_j in column l; m = 1 + d(d-1)/2, n = d.
pub fn hill_symbol(d: usize) -> Result<DiffSymbol> {
    if !(2..=3).contains(&d) {
        return Err(Error::DimensionMismatch("hill symbol needs d in {2, 3}".into()));
    }
    let mut pairs = Vec::new();
    for j in 0..d {
        for l in (j + 1)..d {
            pairs.push((j, l));
        }
    }
    let m = 1 + pairs.len();
    let mats = (0..d)
        .map(|l0| {
            let mut b = CMat::zeros(m, d);
            b[(0, l0)] = re(1.0);
            for (r, &(j, l)) in pairs.iter().enumerate() {
                if l0 == l {
                    b[(r + 1, j)] = re(1.0);
                }
                if l0 == j {
                    b[(r + 1, l)] = re(-1.0);
                }
            }
            b
        })
        .collect();
    DiffSymbol::new(mats)
}
