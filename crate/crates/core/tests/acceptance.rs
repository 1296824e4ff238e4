//! End-to-end acceptance checks, one line per criterion.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use metaplectica::metaplectic::{holonomy_loop, lift_system, phase_of, Sign};
use metaplectica::pauli::{recombine, rotor, PauliElement, PauliSpinor};
use metaplectica::symplectic::{ExactMatrix2, ExactRay, OpticalSystem};
use metaplectica::wavefield::{
    fresnel_propagate, fringe_demo, fringe_pattern, fringe_shift, gouy_trace_numeric, FringeDemoConfig, GaussianBeam,
    GouyTrace, GridSpec, Method, WaveGrid,
};
use metaplectica::weyl::rewrite::{all_words, combination_to_element, Explorer};
use metaplectica::weyl::{
    e_dagger_nonhermitian_check, e_v_relation_check, fock_matrix, matrix_unit, normal_order, sp2_structure_check,
    AlgebraElement, FockMatrix, Monomial, Surd,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Outcome {
    check(elapsed < limit, format!("{what} {:.3} s, limit {:.3} s", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

fn relay_is_exact() -> Outcome {
    let start = Instant::now();
    let s = OpticalSystem::focal_relay(1.0).map_err(|e| e.to_string())?.system_matrix_exact().map_err(|e| e.to_string())?;
    let expected = ExactMatrix2::from_ints(0, 1, -1, 0);
    let back = s.pow(2).apply(&ExactRay::from_ints(1, 0));
    let elapsed = start.elapsed();
    check(s == expected, "relay matrix [[0, 1], [-1, 0]]".into())?;
    check(back == ExactRay::from_ints(-1, 0), "two relays send (1, 0) to (-1, 0)".into())?;
    check(s.pow(4).is_identity(), "four relays give I".into())?;
    within(elapsed, Duration::from_millis(1), "exact")
}

fn double_pass_phase(probe: &WaveGrid, expected: f64) -> Outcome {
    let m2 = lift_system(&OpticalSystem::focal_relays(1.0, 2).map_err(|e| e.to_string())?);
    let mut details = Vec::new();
    for (method, limit) in [(Method::Spectral, Duration::from_millis(500)), (Method::Quadrature, Duration::from_secs(5))] {
        let start = Instant::now();
        let phase = phase_of(&m2, probe, method).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let detail = format!("{method:?} phase {phase:.6} in {:.3} s", elapsed.as_secs_f64());
        check((phase - expected).abs() < 1e-3 && elapsed < limit, detail.clone())?;
        details.push(detail);
    }
    Ok(details.join(", "))
}

fn holonomy() -> Outcome {
    let probe = WaveGrid::unit_gaussian(&GridSpec::default()).map_err(|e| e.to_string())?;
    let mut signs = Vec::new();
    for n in [4, 8] {
        let sys = OpticalSystem::focal_relays(1.0, n).map_err(|e| e.to_string())?;
        signs.push(holonomy_loop(&sys, &probe, Method::Spectral).map_err(|e| e.to_string())?);
    }
    check(signs == [Sign::Minus, Sign::Plus], format!("4 relays {}, 8 relays {}", signs[0].as_i32(), signs[1].as_i32()))
}

fn gouy() -> Outcome {
    let start = Instant::now();
    let beam = GaussianBeam::focused(1.0, 0.0).map_err(|e| e.to_string())?;
    let sweep = beam.gouy_phase(f64::INFINITY) - beam.gouy_phase(f64::NEG_INFINITY);
    check(sweep == FRAC_PI_2, format!("analytic sweep {sweep}"))?;
    let spec = GridSpec::new(16384, -1024.0, 1024.0).map_err(|e| e.to_string())?;
    let zs: Vec<f64> = (0..201).map(|i| -50.0 + 0.5 * i as f64).collect();
    let numeric = gouy_trace_numeric(&beam.field(&spec, zs[0]).map_err(|e| e.to_string())?, &zs).map_err(|e| e.to_string())?;
    let diff = numeric.max_abs_diff(&GouyTrace::analytic(&beam, &zs));
    let elapsed = start.elapsed();
    check(diff < 1e-3, format!("numeric vs analytic {diff:.2e} over 201 samples"))?;
    within(elapsed, Duration::from_secs(30), &format!("sweep exact, max diff {diff:.2e},"))
}

fn fringe() -> Outcome {
    let cfg = FringeDemoConfig::default();
    let demo = fringe_demo(&cfg).map_err(|e| e.to_string())?;
    check((demo.shift.abs() - 0.25).abs() < 0.02 * 0.25, format!("numeric shift {:.5} periods", demo.shift))?;
    // same pattern from the closed-form field past the focus
    let beam = GaussianBeam::focused(cfg.b, 0.0).map_err(|e| e.to_string())?;
    let before = beam.field(&cfg.grid, -cfg.distance).map_err(|e| e.to_string())?;
    let after = beam.field(&cfg.grid, cfg.distance).map_err(|e| e.to_string())?;
    let amp = before.samples()[before.origin_index()].norm();
    let reference = cfg.grid.sample(|x| Complex64::from_polar(amp, 2.0 * PI * x / cfg.period)).map_err(|e| e.to_string())?;
    let idx: Vec<usize> = (0..before.len()).filter(|&j| (-cfg.window..cfg.window).contains(&before.x(j))).collect();
    let pick = |v: Vec<f64>| idx.iter().map(|&j| v[j]).collect::<Vec<_>>();
    let xs: Vec<f64> = idx.iter().map(|&j| before.x(j)).collect();
    let i_before = pick(fringe_pattern(&before, &reference).map_err(|e| e.to_string())?);
    let i_after = pick(fringe_pattern(&after, &reference).map_err(|e| e.to_string())?);
    let analytic = fringe_shift(&xs, &i_before, &i_after, cfg.period).map_err(|e| e.to_string())?;
    let numeric_field = fresnel_propagate(&before, -2.0 * cfg.distance, Method::Spectral).map_err(|e| e.to_string())?;
    let field_err = numeric_field.relative_l2(&after).map_err(|e| e.to_string())?;
    check(
        (analytic.abs() - 0.25).abs() < 0.02 * 0.25 && field_err < 1e-6,
        format!("numeric shift {:.5}, closed-form shift {analytic:.5}, field error {field_err:.1e}", demo.shift),
    )
}

fn random_element(rng: &mut ChaCha8Rng) -> AlgebraElement<Complex64> {
    let n = rng.gen_range(1..=4);
    AlgebraElement::from_terms((0..n).map(|_| {
        let m = Monomial::new(rng.gen_range(0..=3), rng.gen_bool(0.3), rng.gen_range(0..=3));
        (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }))
}

fn heisenberg() -> Outcome {
    let start = Instant::now();
    type El = AlgebraElement<Surd>;
    for m in 0..=8 {
        for n in 0..=8 {
            for k in 0..=8 {
                for l in 0..=8 {
                    let prod = matrix_unit::<Surd>(m, n).multiply(&matrix_unit(k, l)).map_err(|e| e.to_string())?;
                    let expected = if n == k { matrix_unit(m, l) } else { El::zero() };
                    check(prod == expected, format!("E^{m}{n} E^{k}{l}"))?;
                }
            }
        }
    }
    let sum = (0..=8u32).fold(El::zero(), |acc, n| &acc + &matrix_unit(n, n));
    let rho = fock_matrix(&sum, 16).map_err(|e| e.to_string())?;
    check(rho.max_abs_diff_block(&FockMatrix::identity(16), 8) == 0.0, "partition of unity".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n_max = 16;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (x, y) = (random_element(&mut rng), random_element(&mut rng));
        let xy = fock_matrix(&x.multiply(&y).map_err(|e| e.to_string())?, n_max).map_err(|e| e.to_string())?;
        let fx = fock_matrix(&x, n_max).map_err(|e| e.to_string())?;
        let fy = fock_matrix(&y, n_max).map_err(|e| e.to_string())?;
        let limit = n_max - y.degree() as usize;
        worst = worst.max(xy.max_abs_diff_block(&fx.matmul(&fy), limit));
    }
    check(worst < 1e-10, format!("Fock homomorphism deviation {worst:.1e}"))?;

    let mut explorer = Explorer::new();
    let mut words = 0;
    for len in 0..=6 {
        for w in all_words(len) {
            let forms = explorer.all_normal_forms(&w);
            let closed: El = normal_order(&w).map_err(|e| e.to_string())?;
            check(forms.len() == 1 && combination_to_element::<Surd>(&forms[0]) == closed, format!("word {w:?}"))?;
            words += 1;
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(60),
        &format!("6561 unit products exact, homomorphism {worst:.1e}, {words} words confluent,"),
    )
}

fn vacuum_projector() -> Outcome {
    let ev = e_v_relation_check(32).map_err(|e| e.to_string())?;
    check(ev.residual < 1e-6, format!("fit residual {:.1e} at n_max 32", ev.residual))?;
    let report = e_dagger_nonhermitian_check(16).map_err(|e| e.to_string())?;
    // a^m u vanishes exactly; at n_max 32 its rounding grows to a few 1e-10
    let wide = e_dagger_nonhermitian_check(32).map_err(|e| e.to_string())?;
    check(
        report.v_dagger_minus_v < 1e-10 && report.e_dagger_minus_e > 0.1,
        format!(
            "fit residual {:.1e} at n_max 32, |V+ - V| {:.1e} and |E+ - E| {:.3} at n_max 16 ({:.1e} and {:.3} at 32)",
            ev.residual, report.v_dagger_minus_v, report.e_dagger_minus_e, wide.v_dagger_minus_v, wide.e_dagger_minus_e
        ),
    )
}

fn sl2() -> Outcome {
    let report = sp2_structure_check(10).map_err(|e| e.to_string())?;
    check(
        report.symbolic_ok() && report.fock_max_diff < 1e-10,
        format!("symbolic {}, Fock deviation {:.1e}", report.symbolic_ok(), report.fock_max_diff),
    )
}

fn spinor_sign() -> Outcome {
    let axis = PauliElement::e2(1, 2);
    let full = rotor(&axis, 2.0 * PI).map_err(|e| e.to_string())?;
    let double = rotor(&axis, 4.0 * PI).map_err(|e| e.to_string())?;
    check(full == PauliElement::scalar(-1.0) && double == PauliElement::ONE, format!("g(2pi) = {full}, g(4pi) = {double}"))?;
    let psi1 = PauliSpinor::new(Complex64::new(0.6, -0.2), Complex64::new(0.1, 0.7)).to_ideal();
    let psi2 = PauliSpinor::new(Complex64::new(-0.3, 0.5), Complex64::new(0.9, 0.4)).to_ideal();
    let out = recombine(&psi1, &psi2, &axis, 2.0 * PI).map_err(|e| e.to_string())?;
    check(out == &psi1 - &psi2, format!("g(2pi) = {full}, g(4pi) = {double}, recombination is psi1 - psi2"))
}

fn main() -> ExitCode {
    let spec = GridSpec::default();
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(relay_is_exact)),
        (2, Box::new(move || double_pass_phase(&WaveGrid::unit_gaussian(&spec).map_err(|e| e.to_string())?, -FRAC_PI_2))),
        (3, Box::new(move || double_pass_phase(&WaveGrid::hermite_gaussian(&spec, 1).map_err(|e| e.to_string())?, FRAC_PI_2))),
        (4, Box::new(holonomy)),
        (5, Box::new(gouy)),
        (6, Box::new(fringe)),
        (7, Box::new(heisenberg)),
        (8, Box::new(vacuum_projector)),
        (9, Box::new(sl2)),
        (10, Box::new(spinor_sign)),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail}; {secs:.3} s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL ({detail}; {secs:.3} s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
