//! Sharpness of the s = 2 smoothing threshold: along the resonant sequence
//! eps_k the ratio E_s(eps)/eps diverges for s < 2 and stays flat at s = 2.

use bloch_homog::fiber::{sharpness_probe, FiberProblem};
use bloch_homog::preset::preset;

fn main() -> bloch_homog::Result<()> {
    let p = preset("ex-13.2")?;
    let model = p.model()?;
    let problem = FiberProblem::from_model(&model, &p.sym, &p.g, p.modes.clone());
    let theta = [0.0, 1.0];

    for s in [1.5, 2.0] {
        let probe = sharpness_probe(&problem, &model, &theta, s, 1.0, 6)?;
        println!(
            "s = {s}: gamma {:.6}, mu {:+.6e}",
            probe.gamma, probe.mu
        );
        println!("    eps          t(eps)      E_s(eps)      E_s/eps");
        for e in &probe.entries {
            println!(
                "    {:<12.6e} {:<11.6} {:<13.6e} {:.4}",
                e.eps, e.t, e.error, e.ratio
            );
        }
        println!(
            "    ratio growth {:.2}x{}",
            probe.growth,
            if probe.monotone { " (monotone)" } else { "" }
        );
    }
    Ok(())
}
