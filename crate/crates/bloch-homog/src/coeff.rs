//! Periodic matrix-valued coefficients held as truncated Fourier series.
//!
//! All presets in scope are trigonometric polynomials or smooth fields whose
//! coefficients decay geometrically, so a direct DFT over an oversampled grid
//! (4N+1 points per axis for cutoff N) is both exact enough and cheap at desk
//! scale. Products are computed by exact coefficient convolution, which keeps
//! band-limited algebra alias-free.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{hermitian_eig, hermitian_matfun, CMat};
use crate::symbol::DiffSymbol;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Coefficient table below this magnitude is dropped to keep fields sparse.
const COEFF_DROP: f64 = 1e-15;

/// A Gamma-periodic p x q matrix field as a truncated Fourier series
/// g(x) = sum_b ghat_b e^{i<b, x>}, indexed by integer dual-mode coordinates.
#[derive(Debug, Clone)]
pub struct PeriodicMatrixField {
    d: usize,
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<Vec<i64>, CMat>,
    hermitian: bool,
    positive: bool,
}

impl PeriodicMatrixField {
    pub fn constant(d: usize, value: CMat) -> Self {
        let mut coeffs = BTreeMap::new();
        let rows = value.nrows();
        let cols = value.ncols();
        let hermitian = rows == cols && crate::linalg::hermitian_defect(&value) < 1e-12;
        let positive = hermitian && {
            let (vals, _) = hermitian_eig(&value);
            vals[0] >= 1e-10
        };
        if value.iter().any(|z| z.norm() > 0.0) {
            coeffs.insert(vec![0; d], value);
        }
        PeriodicMatrixField { d, rows, cols, coeffs, hermitian, positive }
    }

    pub fn zero(d: usize, rows: usize, cols: usize) -> Self {
        PeriodicMatrixField { d, rows, cols, coeffs: BTreeMap::new(), hermitian: rows == cols, positive: false }
    }

    /// Build from an explicit Fourier table.
    pub fn from_fourier(
        d: usize,
        rows: usize,
        cols: usize,
        table: impl IntoIterator<Item = (Vec<i64>, CMat)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (mode, mat) in table {
            if mode.len() != d {
                return Err(Error::DimensionMismatch("mode length != d".into()));
            }
            if mat.nrows() != rows || mat.ncols() != cols {
                return Err(Error::DimensionMismatch("coefficient shape mismatch".into()));
            }
            if mat.iter().any(|z| z.norm() > COEFF_DROP) {
                coeffs.insert(mode, mat);
            }
        }
        let mut field = PeriodicMatrixField { d, rows, cols, coeffs, hermitian: false, positive: false };
        field.refresh_flags();
        Ok(field)
    }

    /// Sample a closed-form coefficient on a uniform grid (per-axis sizes,
    /// odd) and keep modes within the per-axis cutoffs. Returns the field and
    /// the relative aliasing energy beyond the cutoff.
    pub fn from_samples(
        lattice: &Lattice,
        rows: usize,
        cols: usize,
        grids: &[usize],
        cutoffs: &[i64],
        sampler: impl Fn(&[f64]) -> CMat,
    ) -> Result<(Self, f64)> {
        let d = lattice.dim();
        if grids.len() != d || cutoffs.len() != d {
            return Err(Error::DimensionMismatch("grids/cutoffs length != d".into()));
        }
        for (&g, &n) in grids.iter().zip(cutoffs) {
            if g % 2 == 0 || (g as i64) < 2 * n + 1 {
                return Err(Error::GridTooCoarse { grid: g, cutoff: n as usize });
            }
        }
        // sample
        let total: usize = grids.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let frac: Vec<f64> = idx.iter().zip(grids).map(|(&i, &g)| i as f64 / g as f64).collect();
            let x = lattice.basis() * nalgebra::DVector::from_column_slice(&frac);
            let v = sampler(x.as_slice());
            if v.nrows() != rows || v.ncols() != cols {
                return Err(Error::DimensionMismatch("sampler returned wrong shape".into()));
            }
            values.push(v);
            increment(&mut idx, grids);
        }
        // full DFT over grid frequencies, then split kept vs aliased energy
        let mut coeffs = BTreeMap::new();
        let mut kept_energy = 0.0;
        let mut alias_energy = 0.0;
        let half: Vec<i64> = grids.iter().map(|&g| (g as i64 - 1) / 2).collect();
        let mut mode_idx = vec![0usize; d];
        let freq_total = total;
        for _ in 0..freq_total {
            let mode: Vec<i64> = mode_idx
                .iter()
                .zip(&half)
                .map(|(&i, &h)| i as i64 - h)
                .collect();
            let mut acc = CMat::zeros(rows, cols);
            let mut jdx = vec![0usize; d];
            for v in &values {
                let phase: f64 = mode
                    .iter()
                    .zip(&jdx)
                    .zip(grids)
                    .map(|((&m, &j), &g)| m as f64 * j as f64 / g as f64)
                    .sum();
                let w = Complex64::from_polar(1.0, -2.0 * PI * phase);
                acc += v.map(|z| z * w);
                increment(&mut jdx, grids);
            }
            acc /= Complex64::new(total as f64, 0.0);
            let energy: f64 = acc.iter().map(|z| z.norm_sqr()).sum();
            if mode.iter().zip(cutoffs).all(|(&m, &n)| m.abs() <= n) {
                kept_energy += energy;
                if acc.iter().any(|z| z.norm() > COEFF_DROP) {
                    coeffs.insert(mode, acc);
                }
            } else {
                alias_energy += energy;
            }
            increment(&mut mode_idx, grids);
        }
        let mut field = PeriodicMatrixField { d, rows, cols, coeffs, hermitian: false, positive: false };
        field.refresh_flags();
        let denom = (kept_energy + alias_energy).max(1e-300);
        Ok((field, alias_energy / denom))
    }

    fn refresh_flags(&mut self) {
        self.hermitian = self.rows == self.cols && self.hermitian_defect() < 1e-12;
        // Positivity is certified lazily on a grid via `eig_range`.
        self.positive = false;
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, CMat> {
        &self.coeffs
    }

    pub fn coeff(&self, mode: &[i64]) -> Option<&CMat> {
        self.coeffs.get(mode)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Max |coefficient(-b) - coefficient(b)*| over the table.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut defect: f64 = 0.0;
        for (mode, mat) in &self.coeffs {
            let neg: Vec<i64> = mode.iter().map(|&c| -c).collect();
            let other = self.coeffs.get(&neg).cloned().unwrap_or_else(|| CMat::zeros(self.rows, self.cols));
            defect = defect.max((other.adjoint() - mat).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        defect
    }

    /// Per-axis band: largest |m_a| with a retained coefficient.
    pub fn band(&self) -> Vec<i64> {
        let mut band = vec![0i64; self.d];
        for mode in self.coeffs.keys() {
            for (a, &m) in mode.iter().enumerate() {
                band[a] = band[a].max(m.abs());
            }
        }
        band
    }

    /// Oversampled per-axis grid sizes: 4*band + 1.
    pub fn oversampled_grids(&self) -> Vec<usize> {
        self.band().iter().map(|&b| (4 * b + 1) as usize).collect()
    }

    /// Mean over the cell: the zero-mode coefficient.
    pub fn mean(&self) -> CMat {
        self.coeffs
            .get(&vec![0; self.d])
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    /// Value at fractional cell coordinates (each in [0, 1)).
    pub fn eval_frac(&self, frac: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.rows, self.cols);
        for (mode, mat) in &self.coeffs {
            let phase: f64 = mode.iter().zip(frac).map(|(&m, &f)| m as f64 * f).sum();
            let w = Complex64::from_polar(1.0, 2.0 * PI * phase);
            out += mat.map(|z| z * w);
        }
        out
    }

    /// Value at a physical point x (cell coordinates of the given lattice).
    pub fn eval(&self, lattice: &Lattice, x: &[f64]) -> CMat {
        let xv = nalgebra::DVector::from_column_slice(x);
        let frac = lattice
            .basis()
            .clone()
            .try_inverse()
            .expect("lattice basis invertible")
            * xv;
        self.eval_frac(frac.as_slice())
    }

    /// Sample on a uniform fractional grid.
    pub fn samples(&self, grids: &[usize]) -> Vec<CMat> {
        let total: usize = grids.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.d];
        for _ in 0..total {
            let frac: Vec<f64> = idx.iter().zip(grids).map(|(&i, &g)| i as f64 / g as f64).collect();
            out.push(self.eval_frac(&frac));
            increment(&mut idx, grids);
        }
        out
    }

    /// (min over grid of lambda_min, max over grid of lambda_max) for a
    /// Hermitian square field.
    pub fn eig_range(&self, grids: &[usize]) -> Result<(f64, f64)> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("eig_range needs a square field".into()));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in self.samples(grids) {
            let (vals, _) = hermitian_eig(&v);
            lo = lo.min(vals[0]);
            hi = hi.max(vals[vals.len() - 1]);
        }
        Ok((lo, hi))
    }

    /// Certify positivity on the oversampled grid.
    pub fn check_positive(&mut self, grids: &[usize]) -> Result<()> {
        if !self.is_hermitian() {
            return Err(Error::NonPositive("field is not Hermitian".into()));
        }
        let (lo, _) = self.eig_range(grids)?;
        if lo < 1e-10 {
            return Err(Error::NonPositive(format!("grid lambda_min = {lo:.3e}")));
        }
        self.positive = true;
        Ok(())
    }

    /// Exact convolution product of two band-limited fields.
    pub fn mul(&self, other: &PeriodicMatrixField) -> Result<PeriodicMatrixField> {
        if self.cols != other.rows || self.d != other.d {
            return Err(Error::DimensionMismatch("field product shape mismatch".into()));
        }
        let mut coeffs: BTreeMap<Vec<i64>, CMat> = BTreeMap::new();
        for (m1, a) in &self.coeffs {
            for (m2, b) in &other.coeffs {
                let mode: Vec<i64> = m1.iter().zip(m2).map(|(&x, &y)| x + y).collect();
                let prod = a * b;
                coeffs
                    .entry(mode)
                    .and_modify(|acc| *acc += &prod)
                    .or_insert(prod);
            }
        }
        coeffs.retain(|_, mat| mat.iter().any(|z| z.norm() > COEFF_DROP));
        let mut field = PeriodicMatrixField {
            d: self.d,
            rows: self.rows,
            cols: other.cols,
            coeffs,
            hermitian: false,
            positive: false,
        };
        field.refresh_flags();
        Ok(field)
    }

    pub fn add(&self, other: &PeriodicMatrixField) -> Result<PeriodicMatrixField> {
        if self.rows != other.rows || self.cols != other.cols || self.d != other.d {
            return Err(Error::DimensionMismatch("field sum shape mismatch".into()));
        }
        let mut coeffs = self.coeffs.clone();
        for (mode, mat) in &other.coeffs {
            coeffs
                .entry(mode.clone())
                .and_modify(|acc| *acc += mat)
                .or_insert_with(|| mat.clone());
        }
        coeffs.retain(|_, mat| mat.iter().any(|z| z.norm() > COEFF_DROP));
        let mut field = PeriodicMatrixField {
            d: self.d,
            rows: self.rows,
            cols: self.cols,
            coeffs,
            hermitian: false,
            positive: false,
        };
        field.refresh_flags();
        Ok(field)
    }

    pub fn scale(&self, z: Complex64) -> PeriodicMatrixField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, mat)| (m.clone(), mat.map(|w| w * z)))
            .collect();
        let mut field = PeriodicMatrixField {
            d: self.d,
            rows: self.rows,
            cols: self.cols,
            coeffs,
            hermitian: false,
            positive: false,
        };
        field.refresh_flags();
        field
    }

    pub fn adjoint_field(&self) -> PeriodicMatrixField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, mat)| (m.iter().map(|&c| -c).collect(), mat.adjoint()))
            .collect();
        let mut field = PeriodicMatrixField {
            d: self.d,
            rows: self.cols,
            cols: self.rows,
            coeffs,
            hermitian: false,
            positive: false,
        };
        field.refresh_flags();
        field
    }

    /// Add a constant to the zero mode.
    pub fn add_constant(&self, c: &CMat) -> PeriodicMatrixField {
        let mut field = self.clone();
        let zero = vec![0; self.d];
        field
            .coeffs
            .entry(zero)
            .and_modify(|acc| *acc += c)
            .or_insert_with(|| c.clone());
        field.refresh_flags();
        field
    }

    /// Apply the first-order operator b(D): coefficient at mode b becomes
    /// b_sym(B b) * F_b, where B b is the dual vector of the mode. The field
    /// must have `sym.cols()` rows.
    pub fn apply_symbol_derivative(
        &self,
        sym: &DiffSymbol,
        lattice: &Lattice,
    ) -> Result<PeriodicMatrixField> {
        if self.rows != sym.cols() {
            return Err(Error::DimensionMismatch("b(D) expects an n-row field".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (mode, mat) in &self.coeffs {
            let bvec = lattice.dual_vector(mode);
            let bm = sym.eval(bvec.as_slice());
            let prod = bm * mat;
            if prod.iter().any(|z| z.norm() > COEFF_DROP) {
                coeffs.insert(mode.clone(), prod);
            }
        }
        let mut field = PeriodicMatrixField {
            d: self.d,
            rows: sym.rows(),
            cols: self.cols,
            coeffs,
            hermitian: false,
            positive: false,
        };
        field.refresh_flags();
        Ok(field)
    }

    /// Pointwise matrix transform on a grid, re-expanded below the cutoff.
    /// Returns the transformed field and the aliasing ratio.
    pub fn pointwise_transform(
        &self,
        lattice: &Lattice,
        grids: &[usize],
        cutoffs: &[i64],
        f: impl Fn(&CMat) -> Result<CMat>,
    ) -> Result<(PeriodicMatrixField, f64)> {
        let sampler_err = std::cell::RefCell::new(None);
        let (field, alias) = PeriodicMatrixField::from_samples(
            lattice,
            self.rows,
            self.cols,
            grids,
            cutoffs,
            |x| match f(&self.eval(lattice, x)) {
                Ok(v) => v,
                Err(e) => {
                    *sampler_err.borrow_mut() = Some(e);
                    CMat::zeros(self.rows, self.cols)
                }
            },
        )?;
        if let Some(e) = sampler_err.into_inner() {
            return Err(e);
        }
        Ok((field, alias))
    }

    /// Harmonic mean: inverse of the grid mean of the pointwise inverse.
    /// Quadrature on a uniform grid is trapezoid-exact for trig polynomials.
    pub fn harmonic_mean(&self, grids: &[usize]) -> Result<CMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("harmonic mean needs a square field".into()));
        }
        let samples = self.samples(grids);
        let mut acc = CMat::zeros(self.rows, self.cols);
        for v in &samples {
            let inv = v.clone().try_inverse().ok_or(Error::SingularValue)?;
            acc += inv;
        }
        acc /= Complex64::new(samples.len() as f64, 0.0);
        acc.try_inverse().ok_or(Error::SingularValue)
    }
}

/// Pointwise Hermitian square root of Q^{-1}: the density factor f with
/// f f* = Q^{-1}.
pub fn factor_density(
    q: &PeriodicMatrixField,
    lattice: &Lattice,
    grids: &[usize],
    cutoffs: &[i64],
) -> Result<PeriodicMatrixField> {
    if !q.is_hermitian() {
        return Err(Error::NonPositive("Q must be Hermitian".into()));
    }
    let (field, _alias) = q.pointwise_transform(lattice, grids, cutoffs, |v| {
        let (vals, _) = hermitian_eig(v);
        if vals[0] <= 0.0 {
            return Err(Error::NonPositive(format!("Q has eigenvalue {:.3e} on the grid", vals[0])));
        }
        Ok(hermitian_matfun(v, |l| 1.0 / l.max(1e-12).sqrt()))
    })?;
    Ok(field)
}

/// Pointwise inverse of a field, re-expanded below the cutoff.
pub fn inverse_field(
    g: &PeriodicMatrixField,
    lattice: &Lattice,
    grids: &[usize],
    cutoffs: &[i64],
) -> Result<PeriodicMatrixField> {
    let (field, _alias) = g.pointwise_transform(lattice, grids, cutoffs, |v| {
        v.clone().try_inverse().ok_or(Error::SingularValue)
    })?;
    Ok(field)
}

fn increment(idx: &mut [usize], grids: &[usize]) {
    for (i, &g) in idx.iter_mut().zip(grids) {
        *i += 1;
        if *i < g {
            return;
        }
        *i = 0;
    }
}

/// Scalar 1D helper: build a field from a closed-form function of x1.
pub fn scalar_field_1d(
    lattice: &Lattice,
    cutoff: i64,
    f: impl Fn(f64) -> Complex64,
) -> Result<PeriodicMatrixField> {
    let grid = (4 * cutoff + 1).max(5) as usize;
    let (field, _alias) = PeriodicMatrixField::from_samples(
        lattice,
        1,
        1,
        &[grid],
        &[cutoff],
        |x| CMat::from_element(1, 1, f(x[0])),
    )?;
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn lat1() -> Lattice {
        Lattice::new(DMatrix::from_element(1, 1, 2.0 * PI)).unwrap()
    }

    #[test]
    fn constant_field_single_coefficient() {
        let c = CMat::from_row_slice(2, 2, &[
            Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0),
        ]);
        let f = PeriodicMatrixField::constant(1, c.clone());
        assert_eq!(f.coeffs().len(), 1);
        assert!((f.mean() - c).iter().all(|z| z.norm() < 1e-15));
        assert!(f.is_hermitian());
    }

    #[test]
    fn two_plus_sine_fourier_table() {
        let lat = lat1();
        let f = scalar_field_1d(&lat, 4, |x| Complex64::new(2.0 + x.sin(), 0.0)).unwrap();
        assert_abs_diff_eq!(f.mean()[(0, 0)].re, 2.0, epsilon = 1e-12);
        // sin x = (e^{ix} - e^{-ix}) / 2i -> coefficient at +1 is -i/2... with
        // 1/(2i) = -i/2 at mode +1 and +i/2 at mode -1.
        let p1 = f.coeff(&[1]).unwrap()[(0, 0)];
        let m1 = f.coeff(&[-1]).unwrap()[(0, 0)];
        assert_abs_diff_eq!(p1.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p1.im, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m1.im, 0.5, epsilon = 1e-12);
        assert!(f.coeff(&[2]).is_none());
        assert!(f.is_hermitian());
    }

    #[test]
    fn round_trip_band_limited() {
        let lat = lat1();
        let f = scalar_field_1d(&lat, 3, |x| Complex64::new(1.0 + 0.3 * (2.0 * x).cos(), 0.2 * x.sin())).unwrap();
        for j in 0..17 {
            let x = 2.0 * PI * j as f64 / 17.0;
            let direct = Complex64::new(1.0 + 0.3 * (2.0 * x).cos(), 0.2 * x.sin());
            let val = f.eval(&lat, &[x])[(0, 0)];
            assert_abs_diff_eq!(val.re, direct.re, epsilon = 1e-12);
            assert_abs_diff_eq!(val.im, direct.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn harmonic_mean_closed_form() {
        let lat = lat1();
        // mean of (1/(2+sin))^{-1} = mean of (2+sin) = 2 -> harmonic mean 1/2
        let g = scalar_field_1d(&lat, 24, |x| Complex64::new(1.0 / (2.0 + x.sin()), 0.0)).unwrap();
        let hm = g.harmonic_mean(&[129]).unwrap();
        assert_abs_diff_eq!(hm[(0, 0)].re, 0.5, epsilon = 1e-12);
        // mean of 1/(2+sin x) = 1/sqrt(3)
        assert_abs_diff_eq!(g.mean()[(0, 0)].re, 1.0 / 3f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn example_g2_harmonic_mean_is_four() {
        let lat = lat1();
        let g2 = scalar_field_1d(&lat, 24, |x| Complex64::new(4.0 / (1.0 + 0.5 * x.sin()), 0.0)).unwrap();
        let hm = g2.harmonic_mean(&[129]).unwrap();
        assert_abs_diff_eq!(hm[(0, 0)].re, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn factor_density_scalar() {
        let lat = lat1();
        let q = scalar_field_1d(&lat, 8, |x| Complex64::new(1.0 + 0.5 * x.cos(), 0.0)).unwrap();
        let f = factor_density(&q, &lat, &[65], &[16]).unwrap();
        // f = (1 + cos/2)^{-1/2} pointwise, and f f* Q = I on a grid
        for j in 0..21 {
            let x = 2.0 * PI * j as f64 / 21.0;
            let expect = 1.0 / (1.0 + 0.5 * x.cos()).sqrt();
            let val = f.eval(&lat, &[x])[(0, 0)];
            assert_abs_diff_eq!(val.re, expect, epsilon = 1e-9);
            let qv = q.eval(&lat, &[x])[(0, 0)];
            assert_abs_diff_eq!((val * val.conj() * qv).re, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn convolution_matches_pointwise_product() {
        let lat = lat1();
        let a = scalar_field_1d(&lat, 2, |x| Complex64::new(1.0 + 0.4 * x.cos(), 0.0)).unwrap();
        let b = scalar_field_1d(&lat, 2, |x| Complex64::new(2.0 - 0.3 * x.sin(), 0.1)).unwrap();
        let prod = a.mul(&b).unwrap();
        for j in 0..13 {
            let x = 2.0 * PI * j as f64 / 13.0;
            let lhs = prod.eval(&lat, &[x])[(0, 0)];
            let rhs = a.eval(&lat, &[x])[(0, 0)] * b.eval(&lat, &[x])[(0, 0)];
            assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-12);
            assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn aliasing_reported_for_undersampled_cutoff() {
        let lat = lat1();
        // band-2 function truncated to band 1 must report aliasing energy
        let (_, alias) = PeriodicMatrixField::from_samples(
            &lat, 1, 1, &[9], &[1],
            |x| CMat::from_element(1, 1, Complex64::new((2.0 * x[0]).cos(), 0.0)),
        ).unwrap();
        assert!(alias > 0.9, "alias ratio {alias}");
    }

    #[test]
    fn grid_too_coarse_rejected() {
        let lat = lat1();
        let res = PeriodicMatrixField::from_samples(
            &lat, 1, 1, &[5], &[4],
            |_| CMat::from_element(1, 1, Complex64::new(1.0, 0.0)),
        );
        assert!(matches!(res, Err(Error::GridTooCoarse { .. })));
    }
}
