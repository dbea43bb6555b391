//! Eigenvalue branches lambda_l(t theta) of the Bloch fiber near t = 0 and
//! their two-term fit lambda/t^2 ~ gamma + mu t, cross-checked against the
//! analytic germ quantities.

use bloch_homog::fiber::{branch_fit, FiberProblem};
use bloch_homog::germ::germ_at;
use bloch_homog::preset::{preset, preset_ids};

fn main() -> bloch_homog::Result<()> {
    for id in preset_ids() {
        let p = preset(id)?;
        let model = p.model()?;
        let problem = FiberProblem::from_model(&model, &p.sym, &p.g, p.modes.clone());
        let germ = germ_at(&model, &p.sym, &p.fit_theta)?;

        let t0 = model.window.t0;
        let ts: Vec<f64> = (1..=5).map(|j| t0 * 0.16 * j as f64).collect();
        let fit = branch_fit(&problem, &p.fit_theta, &ts)?;

        println!("{id} at theta = {:?} (t0 = {t0:.4})", p.fit_theta);
        for l in 0..germ.gammas.len() {
            println!(
                "    branch {l}: gamma {:.8} (germ {:.8})  mu {:+.8} (germ {:+.8})",
                fit.gammas[l], germ.gammas[l], fit.mus[l], germ.mus[l]
            );
        }
        println!("    two-term residual {:.3e}", fit.residual);
    }
    Ok(())
}
