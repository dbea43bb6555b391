//! Lattices, dual lattices, the Brillouin zone and truncated dual-mode sets.

use crate::error::{Error, Result};
use crate::linalg::spectral_norm_real;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use std::f64::consts::PI;

/// A Bravais lattice together with its dual.
///
/// `basis` holds the primitive vectors a_1..a_d as columns; `dual_basis` the
/// dual vectors b_1..b_d with <b_l, a_j> = 2*pi*delta_jl. `r0` is the inscribed
/// radius of the central Brillouin zone: half the shortest nonzero dual vector.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: DMatrix<f64>,
    dual_basis: DMatrix<f64>,
    cell_volume: f64,
    dual_cell_volume: f64,
    r0: f64,
    /// Nonzero dual vectors within the search bound, used for membership tests.
    near_duals: Vec<DVector<f64>>,
}

impl Lattice {
    /// Build a lattice from primitive vectors given as columns of `basis`.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let d = basis.nrows();
        if d == 0 || basis.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "lattice basis must be square, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let det = basis.determinant();
        let scale = basis.iter().map(|x| x.abs()).fold(0.0, f64::max).powi(d as i32);
        if det.abs() <= 1e-12 * scale.max(1e-300) {
            return Err(Error::DegenerateLattice);
        }
        let inv = basis.clone().try_inverse().ok_or(Error::DegenerateLattice)?;
        let dual_basis = inv.transpose() * (2.0 * PI);
        let cell_volume = det.abs();
        let dual_cell_volume = (2.0 * PI).powi(d as i32) / cell_volume;

        let dual_inv = dual_basis.clone().try_inverse().ok_or(Error::DegenerateLattice)?;
        let bound =
            (2.0 * spectral_norm_real(&dual_basis) * spectral_norm_real(&dual_inv)).ceil() as i64;
        let bound = bound.max(1);
        let mut near_duals = Vec::new();
        let mut shortest = f64::INFINITY;
        for coords in integer_box(d, bound) {
            if coords.iter().all(|&c| c == 0) {
                continue;
            }
            let n = DVector::from_iterator(d, coords.iter().map(|&c| c as f64));
            let b = &dual_basis * n;
            shortest = shortest.min(b.norm());
            near_duals.push(b);
        }
        Ok(Lattice {
            basis,
            dual_basis,
            cell_volume,
            dual_cell_volume,
            r0: shortest / 2.0,
            near_duals,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dual_basis(&self) -> &DMatrix<f64> {
        &self.dual_basis
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn dual_cell_volume(&self) -> f64 {
        self.dual_cell_volume
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Dual-lattice vector for integer coordinates `mode`.
    pub fn dual_vector(&self, mode: &[i64]) -> DVector<f64> {
        let n = DVector::from_iterator(self.dim(), mode.iter().map(|&c| c as f64));
        &self.dual_basis * n
    }

    /// True iff k lies strictly inside the central Brillouin zone:
    /// |k| < |k - b| for every nonzero dual vector within the search bound.
    pub fn in_brillouin(&self, k: &DVector<f64>) -> bool {
        let kn = k.norm();
        self.near_duals.iter().all(|b| kn < (k - b).norm())
    }

    /// Nearest dual-lattice point to `xi` (integer coordinates). Ties round
    /// half-up per coordinate, so every member of one frequency class
    /// xi + dual lattice resolves to the same remainder — rounding half away
    /// from zero would split a class on the Brillouin boundary into two
    /// different remainders depending on the sign of the coordinate.
    pub fn nearest_dual(&self, xi: &DVector<f64>) -> Vec<i64> {
        // Round fractional coordinates, then fix up over the small
        // neighbourhood in case the rounded point is not the closest one
        // (possible for skew lattices).
        let frac = self
            .dual_basis
            .clone()
            .try_inverse()
            .expect("dual basis invertible")
            * xi;
        let base: Vec<i64> = frac.iter().map(|&f| (f + 0.5).floor() as i64).collect();
        let mut best = base.clone();
        let mut best_dist = (xi - self.dual_vector(&base)).norm();
        for offs in integer_box(self.dim(), 1) {
            let cand: Vec<i64> = base.iter().zip(&offs).map(|(&b, &o)| b + o).collect();
            let dist = (xi - self.dual_vector(&cand)).norm();
            if dist < best_dist {
                best_dist = dist;
                best = cand;
            }
        }
        best
    }

    /// Sampling grid over the Brillouin zone: a uniform grid plus a log-radial
    /// fan near k = 0 where homogenization errors concentrate. k = 0 itself is
    /// excluded; every returned point passes `in_brillouin`.
    pub fn brillouin_grid(&self, spec: &SamplingSpec) -> Vec<DVector<f64>> {
        let d = self.dim();
        let mut points = Vec::new();
        let npa = spec.uniform_per_axis.max(1);
        let mut idx = vec![0usize; d];
        loop {
            let frac = DVector::from_iterator(
                d,
                idx.iter().map(|&i| (i as f64 + 0.5) / npa as f64 - 0.5),
            );
            let k = &self.dual_basis * frac;
            if k.norm() > 1e-12 * self.r0 && self.in_brillouin(&k) {
                points.push(k);
            }
            // odometer increment
            let mut axis = 0;
            loop {
                if axis == d {
                    break;
                }
                idx[axis] += 1;
                if idx[axis] < npa {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == d {
                break;
            }
        }
        let min_radius = 1e-6 * self.r0;
        for dir in unit_fan(d, spec.radial_directions.max(1)) {
            for level in 1..=spec.radial_levels {
                let r = (self.r0 * 0.5f64.powi(level as i32)).max(min_radius);
                let k = dir.clone() * r;
                if self.in_brillouin(&k) {
                    points.push(k);
                }
            }
        }
        points
    }
}

/// Sampling spec for `brillouin_grid`.
#[derive(Debug, Clone)]
pub struct SamplingSpec {
    /// Uniform points per axis across the dual cell.
    pub uniform_per_axis: usize,
    /// Number of log-spaced radii r0 * 2^{-j}, j = 1..levels.
    pub radial_levels: usize,
    /// Number of directions in the radial fan.
    pub radial_directions: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            uniform_per_axis: 8,
            radial_levels: 6,
            radial_directions: 4,
        }
    }
}

/// Deterministic fan of unit directions: signs for d=1, uniform angles for
/// d=2, a Fibonacci sphere for d=3.
pub fn unit_fan(d: usize, count: usize) -> Vec<DVector<f64>> {
    match d {
        1 => vec![
            DVector::from_column_slice(&[1.0]),
            DVector::from_column_slice(&[-1.0]),
        ]
        .into_iter()
        .take(count.max(1).min(2).max(1))
        .collect(),
        2 => (0..count)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / count as f64;
                DVector::from_column_slice(&[phi.cos(), phi.sin()])
            })
            .collect(),
        3 => {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            (0..count)
                .map(|j| {
                    let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = 2.0 * PI * j as f64 / golden;
                    DVector::from_column_slice(&[r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => panic!("unit_fan supports d <= 3"),
    }
}

/// All integer vectors in [-bound, bound]^d.
pub fn integer_box(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; d];
    loop {
        out.push(cur.clone());
        let mut axis = 0;
        loop {
            if axis == d {
                return out;
            }
            cur[axis] += 1;
            if cur[axis] <= bound {
                break;
            }
            cur[axis] = -bound;
            axis += 1;
        }
    }
}

/// Truncated set of dual-lattice modes with integer coordinates in a box.
///
/// The symmetric constructor keeps |n_j| <= N on every axis; the anisotropic
/// one allows per-axis cutoffs (useful when coefficients vary along a single
/// axis, making the orthogonal modes decouple exactly).
#[derive(Debug, Clone)]
pub struct ModeSet {
    cutoffs: Vec<i64>,
    modes: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl ModeSet {
    pub fn cubic(d: usize, cutoff: usize) -> Self {
        Self::with_cutoffs(&vec![cutoff as i64; d])
    }

    pub fn with_cutoffs(cutoffs: &[i64]) -> Self {
        let d = cutoffs.len();
        let mut modes = Vec::new();
        let mut cur: Vec<i64> = cutoffs.iter().map(|&c| -c).collect();
        'outer: loop {
            modes.push(cur.clone());
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'outer;
                }
                cur[axis] += 1;
                if cur[axis] <= cutoffs[axis] {
                    break;
                }
                cur[axis] = -cutoffs[axis];
                axis += 1;
            }
        }
        // Deterministic order: lexicographic.
        modes.sort();
        let index = modes
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        ModeSet {
            cutoffs: cutoffs.to_vec(),
            modes,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[i64] {
        &self.cutoffs
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    pub fn position(&self, mode: &[i64]) -> Option<usize> {
        self.index.get(mode).copied()
    }

    pub fn zero_position(&self) -> usize {
        self.position(&vec![0; self.dim()])
            .expect("mode set contains zero")
    }

    /// Doubled cutoff on every axis, for truncation-consistency checks.
    pub fn doubled(&self) -> ModeSet {
        let cut: Vec<i64> = self.cutoffs.iter().map(|&c| (2 * c).max(1)).collect();
        ModeSet::with_cutoffs(&cut)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn square_lattice(d: usize) -> Lattice {
        Lattice::new(DMatrix::identity(d, d) * (2.0 * PI)).unwrap()
    }

    #[test]
    fn square_lattice_duality_and_r0() {
        let lat = square_lattice(2);
        // dual basis = I, r0 = 1/2
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(lat.dual_basis()[(i, j)], expect, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(lat.r0(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn one_dimensional_volumes() {
        let lat = square_lattice(1);
        assert_abs_diff_eq!(lat.cell_volume(), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(lat.dual_cell_volume(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lat.cell_volume() * lat.dual_cell_volume(), 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn skew_lattice_r0_matches_brute_force() {
        let basis = DMatrix::from_row_slice(2, 2, &[2.0 * PI, PI, 0.0, PI]);
        let lat = Lattice::new(basis).unwrap();
        // brute force over |n| <= 10
        let mut shortest = f64::INFINITY;
        for n1 in -10i64..=10 {
            for n2 in -10i64..=10 {
                if n1 == 0 && n2 == 0 {
                    continue;
                }
                shortest = shortest.min(lat.dual_vector(&[n1, n2]).norm());
            }
        }
        assert_abs_diff_eq!(lat.r0(), shortest / 2.0, epsilon = 1e-12);
        // duality invariant
        let prod = lat.dual_basis().transpose() * lat.basis();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 2.0 * PI } else { 0.0 };
                assert_abs_diff_eq!(prod[(i, j)], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn singular_basis_rejected() {
        let basis = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(Lattice::new(basis), Err(Error::DegenerateLattice)));
    }

    #[test]
    fn brillouin_membership() {
        let lat = square_lattice(2);
        assert!(lat.in_brillouin(&DVector::from_column_slice(&[0.3, 0.0])));
        assert!(!lat.in_brillouin(&DVector::from_column_slice(&[0.6, 0.0])));
    }

    #[test]
    fn uniform_grid_d1_has_eight_points() {
        let lat = square_lattice(1);
        let spec = SamplingSpec {
            uniform_per_axis: 8,
            radial_levels: 0,
            radial_directions: 0,
        };
        let grid = lat.brillouin_grid(&spec);
        assert_eq!(grid.len(), 8);
        for k in &grid {
            assert!(k[0].abs() > 0.0 && k[0].abs() < 0.5);
        }
    }

    #[test]
    fn log_radial_fan_counts_and_radii() {
        let lat = square_lattice(2);
        let spec = SamplingSpec {
            uniform_per_axis: 1,
            radial_levels: 5,
            radial_directions: 4,
        };
        let grid = lat.brillouin_grid(&spec);
        let radial: Vec<_> = grid.iter().filter(|k| k.norm() < 0.5).collect();
        assert_eq!(radial.len(), 20);
        for k in &radial {
            let j = (k.norm() / lat.r0()).log2();
            assert_abs_diff_eq!(j - j.round(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_points_stay_in_brillouin_zone() {
        // random-ish family of invertible bases
        let mut seed = 1u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as f64 / (1u64 << 31) as f64 - 1.0
        };
        for _ in 0..25 {
            let mut b = DMatrix::<f64>::zeros(2, 2);
            loop {
                for x in b.iter_mut() {
                    *x = 4.0 * next();
                }
                if b.determinant().abs() > 0.5 {
                    break;
                }
            }
            let lat = Lattice::new(b).unwrap();
            for k in lat.brillouin_grid(&SamplingSpec::default()) {
                assert!(lat.in_brillouin(&k));
                assert!(k.norm() > 0.0);
            }
        }
    }

    #[test]
    fn mode_set_shape() {
        let ms = ModeSet::cubic(2, 2);
        assert_eq!(ms.len(), 25);
        assert!(ms.position(&[0, 0]).is_some());
        // closed under negation
        for m in ms.modes() {
            let neg: Vec<i64> = m.iter().map(|&c| -c).collect();
            assert!(ms.position(&neg).is_some());
        }
    }
}
