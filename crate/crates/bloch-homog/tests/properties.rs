//! Seeded property tests for the structural invariants: lattice duality and
//! frequency-class resolution, coefficient bracketing, smoothing monotonicity,
//! trigonometric operator identities, evolution symmetries, determinism.

use bloch_homog::cell::{voigt_reuss_check, EffectiveModel};
use bloch_homog::coeff::PeriodicMatrixField;
use bloch_homog::evolve::{CauchyProblem, WaveData};
use bloch_homog::fiber::{
    assemble_fiber, fiber_error, matfun_cos, matfun_sinc, smoothing_diag, sweep, FiberProblem,
    Functional,
};
use bloch_homog::germ::n_matrix;
use bloch_homog::lattice::{Lattice, ModeSet, SamplingSpec};
use bloch_homog::linalg::{spectral_norm, CMat, CVec};
use bloch_homog::preset::preset;
use bloch_homog::symbol::DiffSymbol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_lattice(rng: &mut ChaCha8Rng, d: usize) -> Lattice {
    loop {
        let basis = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-2.0..2.0f64));
        if basis.determinant().abs() > 0.3 {
            return Lattice::new(basis).unwrap();
        }
    }
}

#[test]
fn lattice_duality_and_nearest_dual_optimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [2usize, 3] {
        for _ in 0..10 {
            let lattice = random_lattice(&mut rng, d);
            // primal and dual bases pair to 2 pi delta_ij
            let pairing = lattice.basis().transpose() * lattice.dual_basis();
            let dev = (&pairing - DMatrix::identity(d, d) * 2.0 * PI)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(dev <= 1e-10, "duality pairing deviates by {dev:.3e}");

            // the remainder of nearest_dual beats every neighboring dual point
            for _ in 0..20 {
                let xi = DVector::from_fn(d, |_, _| rng.gen_range(-8.0..8.0f64));
                let b = lattice.nearest_dual(&xi);
                let k = &xi - lattice.dual_vector(&b);
                let mut offs = vec![0i64; d];
                loop {
                    let cand: Vec<i64> = b.iter().zip(&offs).map(|(&x, &o)| x + o).collect();
                    let dist = (&xi - lattice.dual_vector(&cand)).norm();
                    assert!(
                        k.norm() <= dist + 1e-9,
                        "nearest_dual missed a closer dual point: {:.6} > {dist:.6}",
                        k.norm()
                    );
                    // next offset in {-1,0,1}^d
                    let mut carry = true;
                    for o in offs.iter_mut() {
                        if !carry {
                            break;
                        }
                        *o += 1;
                        if *o > 1 {
                            *o = -1;
                        } else {
                            carry = false;
                        }
                    }
                    if carry {
                        break;
                    }
                }
            }
        }
    }
    println!("lattice duality and nearest-dual optimality hold on random bases");
}

#[test]
fn nearest_dual_is_translation_equivariant() {
    // every member xi + dual(m) of one frequency class must resolve to the
    // same quasimomentum remainder; the fiber grouping in the evolution
    // solver depends on this even on the Brillouin boundary
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    // exact arithmetic on the integer dual lattice: boundary ties included,
    // strict equality required
    for d in [1usize, 2, 3] {
        let lattice = Lattice::new(DMatrix::identity(d, d) * (2.0 * PI)).unwrap();
        for _ in 0..40 {
            let xi = DVector::from_fn(d, |_, _| {
                if rng.gen_bool(0.5) {
                    rng.gen_range(-5.0..5.0f64)
                } else {
                    rng.gen_range(-3i64..=2) as f64 + 0.5
                }
            });
            let base = lattice.nearest_dual(&xi);
            let m: Vec<i64> = (0..d).map(|_| rng.gen_range(-3i64..=3)).collect();
            let shifted = &xi + lattice.dual_vector(&m);
            let b = lattice.nearest_dual(&shifted);
            let expect: Vec<i64> = base.iter().zip(&m).map(|(&x, &y)| x + y).collect();
            assert_eq!(
                b, expect,
                "class split: nearest_dual(xi + dual({m:?})) disagrees at xi = {xi:?}"
            );
        }
    }
    // generic lattices: ties are not exactly representable, so only demand
    // that any disagreement is a genuine tie (both remainders equally near)
    for d in [2usize, 3] {
        for _ in 0..10 {
            let lattice = random_lattice(&mut rng, d);
            for _ in 0..20 {
                let xi = DVector::from_fn(d, |_, _| rng.gen_range(-5.0..5.0f64));
                let base = lattice.nearest_dual(&xi);
                let m: Vec<i64> = (0..d).map(|_| rng.gen_range(-3i64..=3)).collect();
                let shifted = &xi + lattice.dual_vector(&m);
                let b = lattice.nearest_dual(&shifted);
                let expect: Vec<i64> = base.iter().zip(&m).map(|(&x, &y)| x + y).collect();
                if b != expect {
                    let got = (&shifted - lattice.dual_vector(&b)).norm();
                    let want = (&shifted - lattice.dual_vector(&expect)).norm();
                    assert!(
                        (got - want).abs() <= 1e-9 * (1.0 + shifted.norm()),
                        "class split off a tie at xi = {xi:?}: |k| {got:.9} vs {want:.9}"
                    );
                }
            }
        }
    }
    println!("nearest_dual resolves every frequency class consistently");
}

#[test]
fn effective_matrix_brackets_for_random_matrix_fields() {
    // d = 1, 2 x 2 Hermitian positive trigonometric coefficients with the
    // identity symbol: harmonic mean <= g0 <= mean, with equality below
    let lattice = Lattice::new(DMatrix::identity(1, 1) * (2.0 * PI)).unwrap();
    let sym = DiffSymbol::new(vec![CMat::identity(2, 2)]).unwrap();
    let modes = ModeSet::cubic(1, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..10 {
        let harmonics: Vec<CMat> = (0..2)
            .map(|_| {
                CMat::from_fn(2, 2, |_, _| {
                    Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4))
                })
            })
            .collect();
        let shift = 0.5
            + harmonics
                .iter()
                .map(|a| 2.0 * a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .sum::<f64>();
        let (g, _alias) = PeriodicMatrixField::from_samples(&lattice, 2, 2, &[33], &[4], |x| {
            let mut v = CMat::identity(2, 2) * Complex64::new(shift, 0.0);
            for (m, a) in harmonics.iter().enumerate() {
                let phase = Complex64::from_polar(1.0, (m + 1) as f64 * x[0]);
                v += a * phase + a.adjoint() * phase.conj();
            }
            v
        })
        .unwrap();
        let model = EffectiveModel::compute(&lattice, &sym, &g, None, &modes).unwrap();
        let report = voigt_reuss_check(&g, &model.g0, &[65]).unwrap();
        assert!(
            report.lower_ok && report.upper_ok,
            "case {case}: bracket violated (margins {:.3e}, {:.3e})",
            report.lower_margin,
            report.upper_margin
        );
        // with m = n the effective matrix is exactly the harmonic mean
        assert!(
            report.equals_harmonic,
            "case {case}: g0 differs from the harmonic mean (margin {:.3e})",
            report.lower_margin
        );
    }
    println!("random matrix coefficients: harmonic mean = g0 <= mean");
}

#[test]
fn fiber_error_monotone_in_smoothing_exponent() {
    // the smoothing diagonal lies in (0, 1] and decreases in s, so E_s does too
    let p = preset("acoustics-1d-rich").unwrap();
    let model = p.model().unwrap();
    let problem = FiberProblem::from_model(&model, &p.sym, &p.g, p.modes.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..15 {
        let k = DVector::from_column_slice(&[rng.gen_range(-0.5..0.5f64)]);
        let eps = rng.gen_range(0.01..0.3f64);
        let tau = rng.gen_range(0.3..3.0f64);
        let functional = if rng.gen_bool(0.5) { Functional::J1 } else { Functional::J2 };
        let mut prev = f64::INFINITY;
        for s in [0.5, 1.0, 1.5, 2.0] {
            let err = fiber_error(&problem, &k, eps, tau, s, functional).unwrap();
            assert!(
                err <= prev + 1e-12,
                "E_s not monotone at k = {k:?}, eps = {eps:.3}, s = {s}: {err:.6e} > {prev:.6e}"
            );
            prev = err;
        }
        let diag = smoothing_diag(&problem.lattice, &k, eps, 1.5, &p.modes, p.sym.cols());
        assert!(diag.iter().all(|&v| v > 0.0 && v <= 1.0));
    }
    println!("fiber error is monotone nonincreasing in the smoothing exponent");
}

#[test]
fn trigonometric_identity_on_random_fibers() {
    // cos(tau sqrt(A))^2 + A (A^{-1/2} sin(tau sqrt(A)))^2 = I
    let p = preset("ex-8.7").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let k = DVector::from_column_slice(&[
            rng.gen_range(-0.5..0.5f64),
            rng.gen_range(-0.5..0.5f64),
        ]);
        let tau = rng.gen_range(0.2..2.0f64);
        let op = assemble_fiber(&p.lattice, &p.sym, &p.g, None, &k, &p.modes).unwrap();
        let c = matfun_cos(&op, tau);
        let s = matfun_sinc(&op, tau);
        let dim = c.nrows();
        let dev = spectral_norm(&(&c * &c + &op.matrix * &s * &s - CMat::identity(dim, dim)));
        let scale = 1.0 + spectral_norm(&op.matrix);
        assert!(dev <= 1e-9 * scale, "identity deviates by {dev:.3e} at k = {k:?}");
    }
    println!("cos^2 + A sinc^2 = I on random fibers");
}

#[test]
fn evolution_parity_and_linearity() {
    let p = preset("acoustics-1d-rich").unwrap();
    let model = p.model().unwrap();
    let problem = CauchyProblem {
        model: &model,
        sym: &p.sym,
        g: &p.g,
        modes: p.modes.clone(),
        duhamel_steps: 64,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let random_data = |rng: &mut ChaCha8Rng| {
        let entries = (0..4)
            .map(|_| {
                let xi = DVector::from_column_slice(&[rng.gen_range(-6.0..6.0f64)]);
                let amp = CVec::from_fn(1, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                (xi, amp)
            })
            .collect();
        WaveData { entries }
    };
    for eps in [0.25, 0.0] {
        let phi = random_data(&mut rng);
        let psi = random_data(&mut rng);
        let zero = WaveData { entries: vec![] };
        let tau = 0.7;

        // cos branch is even in time, sinc branch is odd
        let fwd = problem.solve(&phi, &zero, None, tau, eps).unwrap();
        let bwd = problem.solve(&phi, &zero, None, -tau, eps).unwrap();
        assert!(fwd.data.l2_distance(&bwd.data) <= 1e-10 * fwd.data.l2_norm());

        let fwd_psi = problem.solve(&zero, &psi, None, tau, eps).unwrap();
        let bwd_psi = problem.solve(&zero, &psi, None, -tau, eps).unwrap();
        let neg = WaveData {
            entries: bwd_psi.data.entries.iter().map(|(xi, a)| (xi.clone(), -a)).collect(),
        };
        assert!(fwd_psi.data.l2_distance(&neg) <= 1e-10 * fwd_psi.data.l2_norm());

        // doubling the data doubles the solution
        let double = WaveData {
            entries: phi.entries.iter().map(|(xi, a)| (xi.clone(), a.map(|z| z * 2.0))).collect(),
        };
        let twice = problem.solve(&double, &zero, None, tau, eps).unwrap();
        let scaled = WaveData {
            entries: fwd.data.entries.iter().map(|(xi, a)| (xi.clone(), a.map(|z| z * 2.0))).collect(),
        };
        assert!(twice.data.l2_distance(&scaled) <= 1e-10 * twice.data.l2_norm());
    }
    println!("evolution is even/odd in time and linear in the data");
}

#[test]
fn threshold_operator_antisymmetry_random_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for id in ["ex-8.7", "ex-13.2"] {
        let p = preset(id).unwrap();
        let model = p.model().unwrap();
        for _ in 0..15 {
            let mut theta = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0f64)];
            let norm = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            theta.iter_mut().for_each(|t| *t /= norm);
            let plus = n_matrix(&model, &p.sym, &theta);
            let minus = n_matrix(&model, &p.sym, &[-theta[0], -theta[1]]);
            let dev = spectral_norm(&(&plus + &minus));
            assert!(dev <= 1e-10, "{id}: N(-theta) + N(theta) has norm {dev:.3e}");
            let herm = spectral_norm(&(&plus - plus.adjoint()));
            assert!(herm <= 1e-10, "{id}: N(theta) is not Hermitian ({herm:.3e})");
        }
    }
    println!("N is odd in theta and Hermitian at random directions");
}

#[test]
fn sweep_is_bitwise_deterministic() {
    let p = preset("acoustics-1d-real").unwrap();
    let model = p.model().unwrap();
    let problem = FiberProblem::from_model(&model, &p.sym, &p.g, p.modes.clone());
    let spec = SamplingSpec { uniform_per_axis: 8, radial_levels: 4, radial_directions: 2 };
    let grid = p.lattice.brillouin_grid(&spec);
    let eps: Vec<f64> = vec![0.25, 0.125];
    let a = sweep(&problem, &grid, &eps, 1.0, 2.0, Functional::J1).unwrap();
    let b = sweep(&problem, &grid, &eps, 1.0, 2.0, Functional::J1).unwrap();
    assert_eq!(a.samples, b.samples, "repeated sweep produced different bits");
    assert_eq!(a.slope, b.slope);
    println!("repeated sweeps are bitwise identical");
}
