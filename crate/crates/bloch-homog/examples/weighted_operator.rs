//! Weighted operator f* b(D)* g b(D) f: the weight enters as f = q^{-1/2},
//! shifts the corrector, and sandwiches the fiber trigonometric functions.

use bloch_homog::fiber::{fiber_error, FiberProblem, Functional};
use bloch_homog::germ::{germ_at, n_weighted};
use bloch_homog::linalg::spectral_norm;
use bloch_homog::preset::preset;
use nalgebra::DVector;

fn main() -> bloch_homog::Result<()> {
    let p = preset("acoustics-1d-weighted")?;
    let model = p.model()?;
    println!(
        "g0 = {:.6}, f0 = Q_bar^(-1/2) = {:.6}",
        model.g0[(0, 0)].re,
        model.f0[(0, 0)].re
    );

    let germ = germ_at(&model, &p.sym, &[1.0])?;
    println!(
        "germ gamma = {:.6}, mu = {:+.6e}, ||N_Q|| = {:.3e}",
        germ.gammas[0],
        germ.mus[0],
        spectral_norm(&n_weighted(&model, &p.sym, &[1.0]))
    );

    // J1 never exceeds the trivial sandwich bound 2 ||f|| ||f^{-1}||
    let f = model.f.as_ref().expect("weighted model");
    let f_inv = model.f_inv.as_ref().expect("weighted model");
    let (_, f_hi) = f.eig_range(&[257])?;
    let (_, fi_hi) = f_inv.eig_range(&[257])?;
    println!("uniform bound 2 ||f|| ||f^-1|| = {:.4}", 2.0 * f_hi * fi_hi);

    let problem = FiberProblem::from_model(&model, &p.sym, &p.g, p.modes.clone());
    for k in [0.05, 0.2, 0.45] {
        for eps in [0.25, 0.05] {
            let err = fiber_error(
                &problem,
                &DVector::from_column_slice(&[k]),
                eps,
                1.0,
                2.0,
                Functional::J1,
            )?;
            println!("    J1 at k = {k:4.2}, eps = {eps:4.2}: {err:.6e}");
        }
    }
    Ok(())
}
