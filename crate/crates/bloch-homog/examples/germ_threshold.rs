//! Spectral germ and third-order threshold operator N(theta) on a fan of
//! directions, plus the crossing/K-set condition scan.

use bloch_homog::germ::{condition_scan, germ_at, n_norm};
use bloch_homog::lattice::unit_fan;
use bloch_homog::preset::preset;

fn main() -> bloch_homog::Result<()> {
    let p = preset("ex-8.7")?;
    let model = p.model()?;

    // germ eigenvalues over a fan: for this coefficient family they are
    // 1 +/- theta1 theta2
    println!("direction        gamma_1    gamma_2    mu_1       mu_2");
    for theta in unit_fan(2, 8) {
        let germ = germ_at(&model, &p.sym, theta.as_slice())?;
        println!(
            "({:6.3},{:6.3})  {:9.6}  {:9.6}  {:9.6}  {:9.6}",
            theta[0], theta[1], germ.gammas[0], germ.gammas[1], germ.mus[0], germ.mus[1]
        );
    }

    // N vanishes along +/-e1 and carries eigenvalues +/-1/8 along +/-e2
    for theta in [[1.0, 0.0], [0.0, 1.0]] {
        println!("||N({:?})|| = {:.3e}", theta, n_norm(&model, &p.sym, &theta));
    }

    let report = condition_scan(&model, &p.sym, 64)?;
    println!(
        "fan {}: crossings {:?}, K-set {:?}, condition (a) {}",
        report.n_theta,
        report.crossing_pairs.len(),
        report.k_set,
        if report.condition_a { "holds" } else { "fails" }
    );
    Ok(())
}
