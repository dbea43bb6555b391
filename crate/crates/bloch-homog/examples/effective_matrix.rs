//! Effective matrices for the bundled presets, with the Voigt-Reuss sanity
//! bracket harmonic_mean(g) <= g0 <= mean(g).

use bloch_homog::cell::voigt_reuss_check;
use bloch_homog::preset::{preset, preset_ids};

fn main() -> bloch_homog::Result<()> {
    for id in preset_ids() {
        let p = preset(id)?;
        let model = p.model()?;
        let m = model.g0.nrows();
        println!("{id} (d = {}, {}x{m} g0)", p.lattice.dim(), m);
        for i in 0..m {
            let row: Vec<String> = (0..m)
                .map(|j| {
                    let z = model.g0[(i, j)];
                    if z.im.abs() < 1e-12 {
                        format!("{:10.6}", z.re)
                    } else {
                        format!("{:.4}{:+.4}i", z.re, z.im)
                    }
                })
                .collect();
            println!("    [{}]", row.join(" "));
        }
        let vr = voigt_reuss_check(&p.g, &model.g0, &[257, 257][..p.lattice.dim().min(2)])?;
        println!(
            "    corrector residual {:.2e}; bracket margins {:.2e} / {:.2e}{}",
            model.residual,
            vr.lower_margin,
            vr.upper_margin,
            if vr.equals_harmonic { "; g0 = harmonic mean" } else { "" }
        );
    }
    Ok(())
}
