//! Versioned tolerance table for the reproduction harness. The acceptance
//! suite and `reproduce` read the same entries, so a tolerance change is a
//! single, reviewable edit here.

pub const TABLE_VERSION: &str = "1";

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Reproduction id the entry belongs to.
    pub id: &'static str,
    /// Quantity label, matching the JSON summary key.
    pub quantity: &'static str,
    pub tol: f64,
    /// Relative (vs absolute) comparison.
    pub relative: bool,
}

pub const TABLE: &[Tolerance] = &[
    Tolerance { id: "acoustics-1d-real", quantity: "g0", tol: 1e-10, relative: false },
    Tolerance { id: "ex-8.7", quantity: "g0", tol: 1e-8, relative: false },
    Tolerance { id: "ex-8.7", quantity: "germ_eigenvalues", tol: 1e-8, relative: false },
    Tolerance { id: "ex-8.7", quantity: "n_vanishing_directions", tol: 1e-8, relative: false },
    Tolerance { id: "ex-8.7", quantity: "mu", tol: 1e-6, relative: false },
    Tolerance { id: "ex-13.2", quantity: "n_theta", tol: 1e-6, relative: true },
    Tolerance { id: "iso-15.3", quantity: "a", tol: 1e-3, relative: false },
    Tolerance { id: "iso-15.3", quantity: "s", tol: 1e-3, relative: false },
    Tolerance { id: "iso-15.3", quantity: "t", tol: 1e-3, relative: false },
    Tolerance { id: "iso-15.3", quantity: "theta1_sq", tol: 1e-3, relative: false },
    Tolerance { id: "iso-15.3", quantity: "mu_hat", tol: 1e-4, relative: false },
    Tolerance { id: "hill", quantity: "g0", tol: 1e-8, relative: false },
];

pub fn tolerance(id: &str, quantity: &str) -> Option<&'static Tolerance> {
    TABLE.iter().find(|t| t.id == id && t.quantity == quantity)
}

/// Check |got - want| against the table entry; the error string carries the
/// offending values.
pub fn check(id: &str, quantity: &str, got: f64, want: f64) -> Result<(), String> {
    let t = tolerance(id, quantity)
        .ok_or_else(|| format!("no tolerance entry for {id}/{quantity}"))?;
    let err = (got - want).abs();
    let bound = if t.relative { t.tol * want.abs().max(1e-300) } else { t.tol };
    if err <= bound {
        Ok(())
    } else {
        Err(format!(
            "{id}/{quantity}: got {got:.10e}, want {want:.10e}, |err| {err:.3e} > {bound:.3e}"
        ))
    }
}
