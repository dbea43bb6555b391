//! Run configuration: serializable problem + study parameters, loadable from
//! JSON or TOML (picked by file extension).

use crate::coeff::PeriodicMatrixField;
use crate::error::{Error, Result};
use crate::fiber::Functional;
use crate::lattice::{Lattice, ModeSet, SamplingSpec};
use crate::linalg::CMat;
use crate::preset::{preset, Preset};
use crate::symbol::{acoustics_symbol, elasticity_symbol, hill_symbol, DiffSymbol};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Named preset; when set, `lattice`/`operator`/`coefficients` are ignored.
    pub preset: Option<String>,
    pub lattice: Option<LatticeSpec>,
    pub operator: Option<OperatorSpec>,
    pub coefficients: Option<CoefficientsSpec>,
    /// Per-axis dual-mode cutoffs; a single entry is broadcast to all axes.
    pub cutoff: Option<Vec<i64>>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_eps_list")]
    pub eps_list: Vec<f64>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Smoothing exponent s of R^{s/2}.
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default)]
    pub functional: FunctionalSpec,
    /// Direction for germ/threshold/branch studies.
    pub theta: Option<Vec<f64>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            lattice: None,
            operator: None,
            coefficients: None,
            cutoff: None,
            grid: GridSpec::default(),
            eps_list: default_eps_list(),
            tau: default_tau(),
            s: default_s(),
            functional: FunctionalSpec::default(),
            theta: None,
            seed: default_seed(),
        }
    }
}

fn default_eps_list() -> Vec<f64> {
    (3..=8).map(|j| 0.5f64.powi(j)).collect()
}

fn default_tau() -> f64 {
    1.0
}

fn default_s() -> f64 {
    2.0
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Row-major d x d array of primitive vectors.
    pub basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSpec {
    /// "acoustics" | "elasticity" | "hill" | "custom"
    pub symbol: String,
    /// Custom symbols: d stacked m x n matrices of [re, im] pairs.
    pub matrices: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientsSpec {
    pub g: FieldSpec,
    pub q: Option<FieldSpec>,
}

/// A periodic matrix field given by its Fourier table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub rows: usize,
    pub cols: usize,
    pub modes: Vec<FourierEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierEntry {
    pub mode: Vec<i64>,
    /// Row-major rows x cols matrix of [re, im] pairs.
    pub values: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub uniform_per_axis: usize,
    pub radial_levels: usize,
    pub radial_directions: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        let s = SamplingSpec::default();
        GridSpec {
            uniform_per_axis: s.uniform_per_axis,
            radial_levels: s.radial_levels,
            radial_directions: s.radial_directions,
        }
    }
}

impl GridSpec {
    pub fn sampling(&self) -> SamplingSpec {
        SamplingSpec {
            uniform_per_axis: self.uniform_per_axis,
            radial_levels: self.radial_levels,
            radial_directions: self.radial_directions,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalSpec {
    #[default]
    J1,
    J2,
}

impl From<FunctionalSpec> for Functional {
    fn from(f: FunctionalSpec) -> Functional {
        match f {
            FunctionalSpec::J1 => Functional::J1,
            FunctionalSpec::J2 => Functional::J2,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
            Some("toml") => toml::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
            other => Err(Error::Config(format!(
                "config must be .json or .toml, got {:?}",
                other
            ))),
        }
    }

    /// Resolve into a runnable problem. A preset id wins; otherwise the
    /// lattice/operator/coefficients sections must all be present.
    pub fn resolve(&self) -> Result<Preset> {
        if let Some(id) = &self.preset {
            let mut p = preset(id)?;
            if let Some(cut) = &self.cutoff {
                p.modes = broadcast_cutoffs(cut, p.lattice.dim())?;
            }
            if let Some(theta) = &self.theta {
                p.fit_theta = theta.clone();
            }
            return Ok(p);
        }
        let lat_spec = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::Config("missing [lattice] section".into()))?;
        let d = lat_spec.basis.len();
        if lat_spec.basis.iter().any(|row| row.len() != d) {
            return Err(Error::Config("lattice.basis must be a square row-major array".into()));
        }
        let flat: Vec<f64> = lat_spec.basis.iter().flatten().copied().collect();
        let lattice = Lattice::new(DMatrix::from_row_slice(d, d, &flat))?;

        let op_spec = self
            .operator
            .as_ref()
            .ok_or_else(|| Error::Config("missing [operator] section".into()))?;
        let sym = build_symbol(op_spec, d)?;

        let co = self
            .coefficients
            .as_ref()
            .ok_or_else(|| Error::Config("missing [coefficients] section".into()))?;
        let g = build_field(&co.g, d)?;
        let q = co.q.as_ref().map(|s| build_field(s, d)).transpose()?;

        let cutoff = self
            .cutoff
            .clone()
            .unwrap_or_else(|| vec![8; d]);
        let modes = broadcast_cutoffs(&cutoff, d)?;
        let theta = self.theta.clone().unwrap_or_else(|| {
            let mut t = vec![0.0; d];
            t[d - 1] = 1.0;
            t
        });
        Ok(Preset {
            id: "custom".into(),
            lattice,
            sym,
            g,
            q,
            modes,
            fit_theta: theta,
        })
    }
}

fn broadcast_cutoffs(cut: &[i64], d: usize) -> Result<ModeSet> {
    let cut: Vec<i64> = match cut.len() {
        1 => vec![cut[0]; d],
        n if n == d => cut.to_vec(),
        n => {
            return Err(Error::Config(format!(
                "cutoff has {n} entries for dimension {d}"
            )))
        }
    };
    if cut.iter().any(|&c| c < 0) {
        return Err(Error::Config("cutoffs must be nonnegative".into()));
    }
    Ok(ModeSet::with_cutoffs(&cut))
}

fn build_symbol(spec: &OperatorSpec, d: usize) -> Result<DiffSymbol> {
    match spec.symbol.as_str() {
        "acoustics" => acoustics_symbol(d),
        "elasticity" => elasticity_symbol(d),
        "hill" => hill_symbol(d),
        "custom" => {
            let mats_spec = spec
                .matrices
                .as_ref()
                .ok_or_else(|| Error::Config("custom symbol needs operator.matrices".into()))?;
            if mats_spec.len() != d {
                return Err(Error::Config(format!(
                    "custom symbol needs {d} matrices, got {}",
                    mats_spec.len()
                )));
            }
            let mats = mats_spec
                .iter()
                .map(|rows| parse_matrix(rows))
                .collect::<Result<Vec<_>>>()?;
            DiffSymbol::new(mats)
        }
        other => Err(Error::Config(format!("unknown operator.symbol {other:?}"))),
    }
}

fn parse_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::Config("empty matrix".into()));
    }
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config("ragged matrix rows".into()));
    }
    let mut out = CMat::zeros(m, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

fn build_field(spec: &FieldSpec, d: usize) -> Result<PeriodicMatrixField> {
    let mut table = Vec::with_capacity(spec.modes.len());
    for entry in &spec.modes {
        if entry.mode.len() != d {
            return Err(Error::Config(format!(
                "Fourier mode {:?} has wrong dimension, expected {d}",
                entry.mode
            )));
        }
        if entry.values.len() != spec.rows || entry.values.iter().any(|r| r.len() != spec.cols) {
            return Err(Error::Config(format!(
                "Fourier entry at {:?} is not {}x{}",
                entry.mode, spec.rows, spec.cols
            )));
        }
        table.push((entry.mode.clone(), parse_matrix(&entry.values)?));
    }
    PeriodicMatrixField::from_fourier(d, spec.rows, spec.cols, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_resolves() {
        let text = r#"
cutoff = [6]
tau = 0.5
s = 1.5
functional = "j2"

[lattice]
basis = [[6.283185307179586]]

[operator]
symbol = "acoustics"

[coefficients.g]
rows = 1
cols = 1
modes = [
  { mode = [0], values = [[[2.0, 0.0]]] },
  { mode = [1], values = [[[0.0, -0.5]]] },
  { mode = [-1], values = [[[0.0, 0.5]]] },
]
"#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(Functional::from(cfg.functional), Functional::J2);
        let p = cfg.resolve().unwrap();
        assert_eq!(p.lattice.dim(), 1);
        assert_eq!(p.modes.cutoffs(), &[6]);
        // the table above is 2 + sin x
        let v = p.g.eval_frac(&[0.25])[(0, 0)];
        assert!((v.re - 3.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn json_preset_config() {
        let text = r#"{ "preset": "acoustics-1d-real", "cutoff": [12] }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        let p = cfg.resolve().unwrap();
        assert_eq!(p.id, "acoustics-1d-real");
        assert_eq!(p.modes.cutoffs(), &[12]);
    }

    #[test]
    fn missing_sections_are_reported() {
        let cfg = RunConfig::default();
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }
}
