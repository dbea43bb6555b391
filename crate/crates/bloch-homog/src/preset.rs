//! Named coefficient presets used by the reproduction harness and the tests.

use crate::cell::EffectiveModel;
use crate::coeff::{scalar_field_1d, PeriodicMatrixField};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ModeSet};
use crate::linalg::CMat;
use crate::symbol::{acoustics_symbol, elasticity_symbol, hill_symbol, DiffSymbol};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A ready-to-run problem: lattice, symbol, coefficients and the mode cutoffs
/// that make the desk-scale truncation accurate for this coefficient family.
pub struct Preset {
    pub id: String,
    pub lattice: Lattice,
    pub sym: DiffSymbol,
    pub g: PeriodicMatrixField,
    pub q: Option<PeriodicMatrixField>,
    pub modes: ModeSet,
    /// Direction used for branch fits and probes.
    pub fit_theta: Vec<f64>,
}

impl Preset {
    pub fn model(&self) -> Result<EffectiveModel> {
        EffectiveModel::compute(&self.lattice, &self.sym, &self.g, self.q.as_ref(), &self.modes)
    }
}

fn cubic_lattice(d: usize) -> Lattice {
    Lattice::new(DMatrix::identity(d, d) * (2.0 * PI)).expect("cubic lattice is nondegenerate")
}

/// A d = 2 field depending on x1 only, held with an anisotropic cutoff (N, 0).
fn field_x1_only(
    lattice: &Lattice,
    rows: usize,
    cutoff: i64,
    f: impl Fn(f64) -> CMat,
) -> Result<PeriodicMatrixField> {
    let grid = (4 * cutoff + 1).max(5) as usize;
    let (field, _alias) = PeriodicMatrixField::from_samples(
        lattice,
        rows,
        rows,
        &[grid, 1],
        &[cutoff, 0],
        |x| f(x[0]),
    )?;
    Ok(field)
}

/// Example 13.2 coefficient: c = strength of the Hermitian off-diagonal part.
pub fn example_13_2_field(lattice: &Lattice, c: f64, cutoff: i64) -> Result<PeriodicMatrixField> {
    field_x1_only(lattice, 2, cutoff, |x1| {
        // beta = c (sin x1 + cos 2 x1); off-diagonal carries i beta'
        let beta_prime = c * (x1.cos() - 2.0 * (2.0 * x1).sin());
        CMat::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, beta_prime),
            Complex64::new(0.0, -beta_prime),
            Complex64::new(1.0, 0.0),
        ])
    })
}

pub fn preset(id: &str) -> Result<Preset> {
    match id {
        "acoustics-1d-real" => {
            let lattice = cubic_lattice(1);
            let sym = acoustics_symbol(1)?;
            let g = scalar_field_1d(&lattice, 32, |x| Complex64::new(1.0 / (2.0 + x.sin()), 0.0))?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::cubic(1, 16),
                fit_theta: vec![1.0],
            })
        }
        "acoustics-1d-rich" => {
            // several corrector harmonics, so Cauchy-error curves average out
            // the per-band phase oscillations
            let lattice = cubic_lattice(1);
            let sym = acoustics_symbol(1)?;
            let g = scalar_field_1d(&lattice, 32, |x| {
                Complex64::new(
                    1.0 / (2.5 + x.sin() + 0.7 * (2.0 * x).sin() + 0.5 * (3.0 * x).cos()),
                    0.0,
                )
            })?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::cubic(1, 16),
                fit_theta: vec![1.0],
            })
        }
        "acoustics-1d-hermitian" => {
            // two-component 1D system with a genuinely complex Hermitian
            // coefficient; its threshold structure makes the general-regime
            // rate curves stable (several incoherent band oscillators)
            let lattice = cubic_lattice(1);
            let sym = DiffSymbol::new(vec![CMat::identity(2, 2)])?;
            let c = 0.3;
            let (g, _alias) = PeriodicMatrixField::from_samples(&lattice, 2, 2, &[129], &[16], |x| {
                let beta_prime = c * (x[0].cos() - 2.0 * (2.0 * x[0]).sin());
                CMat::from_row_slice(2, 2, &[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, beta_prime),
                    Complex64::new(0.0, -beta_prime),
                    Complex64::new(1.0, 0.0),
                ])
            })?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::cubic(1, 16),
                fit_theta: vec![1.0],
            })
        }
        "acoustics-1d-smooth" => {
            let lattice = cubic_lattice(1);
            let sym = acoustics_symbol(1)?;
            let g = scalar_field_1d(&lattice, 1, |x| Complex64::new(2.0 + x.sin(), 0.0))?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::cubic(1, 16),
                fit_theta: vec![1.0],
            })
        }
        "acoustics-1d-weighted" => {
            let lattice = cubic_lattice(1);
            let sym = acoustics_symbol(1)?;
            let g = scalar_field_1d(&lattice, 1, |x| Complex64::new(2.0 + x.sin(), 0.0))?;
            let q = scalar_field_1d(&lattice, 1, |x| Complex64::new(1.0 + 0.5 * x.cos(), 0.0))?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: Some(q),
                modes: ModeSet::cubic(1, 16),
                fit_theta: vec![1.0],
            })
        }
        "ex-8.7" | "example-8.7" => {
            let lattice = cubic_lattice(2);
            let sym = elasticity_symbol(2)?;
            let g = field_x1_only(&lattice, 3, 32, |x1| {
                let g2 = 4.0 / (1.0 + 0.5 * x1.sin());
                let g3 = 1.0 + 0.5 * x1.cos();
                CMat::from_diagonal(&nalgebra::DVector::from_column_slice(&[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(g2, 0.0),
                    Complex64::new(g3, 0.0),
                ]))
            })?;
            Ok(Preset {
                id: "ex-8.7".into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::with_cutoffs(&[16, 0]),
                fit_theta: vec![0.0, 1.0],
            })
        }
        "ex-13.2" | "example-13.2" => {
            let lattice = cubic_lattice(2);
            let sym = acoustics_symbol(2)?;
            let g = example_13_2_field(&lattice, 0.3, 2)?;
            Ok(Preset {
                id: "ex-13.2".into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::with_cutoffs(&[12, 0]),
                fit_theta: vec![0.0, 1.0],
            })
        }
        "hill" => {
            let lattice = cubic_lattice(2);
            let sym = hill_symbol(2)?;
            let mu0 = 1.0;
            let g = field_x1_only(&lattice, 2, 8, |x1| {
                let beta = 1.5 + 0.4 * x1.cos();
                CMat::from_diagonal(&nalgebra::DVector::from_column_slice(&[
                    Complex64::new(beta, 0.0),
                    Complex64::new(mu0 / 2.0, 0.0),
                ]))
            })?;
            Ok(Preset {
                id: id.into(),
                lattice,
                sym,
                g,
                q: None,
                modes: ModeSet::with_cutoffs(&[8, 0]),
                fit_theta: vec![0.0, 1.0],
            })
        }
        other => Err(Error::UnknownPreset(other.into())),
    }
}

/// Preset ids accepted by `preset`, in reproduction order.
pub fn preset_ids() -> &'static [&'static str] {
    &[
        "acoustics-1d-real",
        "acoustics-1d-rich",
        "acoustics-1d-hermitian",
        "acoustics-1d-smooth",
        "acoustics-1d-weighted",
        "ex-8.7",
        "ex-13.2",
        "hill",
    ]
}
