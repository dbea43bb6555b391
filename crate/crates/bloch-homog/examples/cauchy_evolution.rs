//! Wave-packet evolution under a rapidly oscillating 1D operator and the
//! homogenization rate ||v_eps - v_0||_{L2} ~ eps.

use bloch_homog::evolve::{cauchy_rate, gaussian_profile, CauchyProblem, WaveData};
use bloch_homog::preset::preset;

fn main() -> bloch_homog::Result<()> {
    let p = preset("acoustics-1d-rich")?;
    let model = p.model()?;
    println!("g0 = {:.6}", model.g0[(0, 0)].re);

    let problem = CauchyProblem {
        model: &model,
        sym: &p.sym,
        g: &p.g,
        modes: p.modes.clone(),
        duhamel_steps: 64,
    };
    let phi = gaussian_profile(0.25, 12, 1.5);
    let psi = WaveData::default();
    let tau = 1.0;

    let v0 = problem.solve(&phi, &psi, None, tau, 0.0)?;
    println!(
        "effective solution at tau = {tau}: |v|_L2 = {:.6} ({} modes)",
        v0.data.l2_norm(),
        v0.data.entries.len()
    );

    let eps_list: Vec<f64> = (3..=7).map(|j| 0.5f64.powi(j)).collect();
    let report = cauchy_rate(&problem, &phi, &psi, tau, &eps_list)?;
    println!("eps        |v_eps - v_0|");
    for (eps, err) in &report.samples {
        println!("{eps:<10.6} {err:.6e}");
    }
    if let Some((slope, resid)) = report.slope {
        println!("fitted slope {slope:.4} (max log residual {resid:.2})");
    }
    Ok(())
}
