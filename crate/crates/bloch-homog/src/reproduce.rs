//! Reproduction harness: each id recomputes a published quantity and compares
//! it against the frozen reference within the versioned tolerance table.

use crate::error::Result;
use crate::germ::{germ_at, n_scalar};
use crate::iso15_3;
use crate::lattice::unit_fan;
use crate::linalg::spectral_norm;
use crate::preset::preset;
use crate::tolerances::tolerance;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub quantity: String,
    /// Worst absolute (or relative, per the table) deviation found.
    pub error: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub id: String,
    pub tolerance_table_version: &'static str,
    pub items: Vec<CheckItem>,
    pub passed: bool,
    /// The computed quantities themselves, for the JSON summary.
    pub values: serde_json::Value,
}

fn item(id: &str, quantity: &str, error: f64) -> CheckItem {
    let bound = tolerance(id, quantity)
        .map(|t| t.tol)
        .unwrap_or(f64::NAN);
    CheckItem {
        quantity: quantity.into(),
        error,
        bound,
        ok: error <= bound,
    }
}

fn finish(id: &str, items: Vec<CheckItem>, values: serde_json::Value) -> ReproduceReport {
    let passed = items.iter().all(|it| it.ok);
    ReproduceReport {
        id: id.into(),
        tolerance_table_version: crate::tolerances::TABLE_VERSION,
        items,
        passed,
        values,
    }
}

pub fn reproduce_ids() -> &'static [&'static str] {
    &["acoustics-1d-real", "ex-8.7", "ex-13.2", "iso-15.3", "hill"]
}

pub fn reproduce(id: &str) -> Result<ReproduceReport> {
    match id {
        "acoustics-1d-real" => {
            let p = preset(id)?;
            let model = p.model()?;
            let g0 = model.g0[(0, 0)];
            let err = (g0.re - 0.5).abs().max(g0.im.abs());
            Ok(finish(
                id,
                vec![item(id, "g0", err)],
                json!({ "g0": [g0.re, g0.im], "reference": 0.5 }),
            ))
        }
        "ex-8.7" | "example-8.7" => {
            let id = "ex-8.7";
            let p = preset(id)?;
            let model = p.model()?;
            // effective matrix diag{1, 4, 1}
            let expect = [1.0, 4.0, 1.0];
            let mut g0_err: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { expect[i] } else { 0.0 };
                    let z = model.g0[(i, j)];
                    g0_err = g0_err.max((z.re - want).abs().max(z.im.abs()));
                }
            }
            // germ eigenvalues 1 -/+ theta1 theta2 over a 64-point fan
            let mut germ_err: f64 = 0.0;
            for theta in unit_fan(2, 64) {
                let germ = germ_at(&model, &p.sym, theta.as_slice())?;
                let prod = (theta[0] * theta[1]).abs();
                germ_err = germ_err
                    .max((germ.gammas[0] - (1.0 - prod)).abs())
                    .max((germ.gammas[1] - (1.0 + prod)).abs());
            }
            // N vanishes along (+/-1, 0)
            let mut nvan: f64 = 0.0;
            for theta in [[1.0, 0.0], [-1.0, 0.0]] {
                let germ = germ_at(&model, &p.sym, &theta)?;
                nvan = nvan.max(spectral_norm(&germ.n_full));
            }
            // cubic coefficients +/- 1/8 at (0, 1)
            let germ = germ_at(&model, &p.sym, &[0.0, 1.0])?;
            let mu_got = germ.mus.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let mu_err = (mu_got - 0.125).abs();
            Ok(finish(
                id,
                vec![
                    item(id, "g0", g0_err),
                    item(id, "germ_eigenvalues", germ_err),
                    item(id, "n_vanishing_directions", nvan),
                    item(id, "mu", mu_err),
                ],
                json!({
                    "g0_diag": [model.g0[(0,0)].re, model.g0[(1,1)].re, model.g0[(2,2)].re],
                    "mu": mu_got,
                    "mu_reference": 0.125,
                    "mus_at_(0,1)": germ.mus,
                }),
            ))
        }
        "ex-13.2" | "example-13.2" => {
            let id = "ex-13.2";
            let p = preset(id)?;
            let model = p.model()?;
            // N(theta) = -alpha / pi * theta2^3 with alpha = -(3 pi / 2) c^3
            let c: f64 = 0.3;
            let alpha = -(3.0 * PI / 2.0) * c.powi(3);
            let scale = (alpha / PI).abs();
            let mut rel_err: f64 = 0.0;
            let mut table = Vec::new();
            for theta in unit_fan(2, 32) {
                let got = n_scalar(&model, &p.sym, theta.as_slice());
                let want = -alpha / PI * theta[1].powi(3);
                rel_err = rel_err.max((got - want).abs() / scale);
                table.push(json!([theta[0], theta[1], got, want]));
            }
            Ok(finish(
                id,
                vec![item(id, "n_theta", rel_err)],
                json!({ "alpha": alpha, "fan": table }),
            ))
        }
        "iso-15.3" => {
            let id = "iso-15.3";
            let report = iso15_3::run()?;
            let items = vec![
                item(id, "a", (report.a - 145.6581).abs()),
                item(id, "s", report.s.0.abs().max((report.s.1 - 65.6650).abs())),
                item(id, "t", report.t.0.abs().max((report.t.1 - 76.2833).abs())),
                item(id, "theta1_sq", (report.theta1_sq - 0.5394).abs()),
                item(id, "mu_hat", (report.mu_hat - 0.09850).abs()),
            ];
            let values = serde_json::to_value(&report).unwrap_or_default();
            Ok(finish(id, items, values))
        }
        "hill" => {
            let p = preset(id)?;
            let model = p.model()?;
            // harmonic mean of beta = 1.5 + 0.4 cos x1 is sqrt(1.5^2 - 0.4^2)
            let beta_under = (1.5f64 * 1.5 - 0.4 * 0.4).sqrt();
            let expect = [beta_under, 0.5];
            let mut err: f64 = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { expect[i] } else { 0.0 };
                    let z = model.g0[(i, j)];
                    err = err.max((z.re - want).abs().max(z.im.abs()));
                }
            }
            Ok(finish(
                id,
                vec![item(id, "g0", err)],
                json!({
                    "g0_diag": [model.g0[(0,0)].re, model.g0[(1,1)].re],
                    "reference": expect,
                }),
            ))
        }
        other => Err(crate::error::Error::UnknownPreset(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_passes() {
        for id in reproduce_ids() {
            let report = reproduce(id).unwrap();
            for it in &report.items {
                assert!(
                    it.ok,
                    "{id}/{}: error {:.3e} > bound {:.3e}",
                    it.quantity, it.error, it.bound
                );
            }
        }
    }
}
