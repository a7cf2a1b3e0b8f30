//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line.

use std::io::Write;

use halfline_cli::presets::barenblatt_error;
use halfline_cli::{run_experiment, ExperimentConfig, Manifest, ProblemConfig, Status};
use halfline_core::odeshoot::shooting::classify;
use halfline_core::odeshoot::{
    find_lambda_minus, find_lambda_plus, flat_blowup_time, flat_ode, integrate_profile, integrate_profile_with,
    linear_profile, profile_residual, Classification, ProfileOptions, ProfileProblem,
};
use halfline_core::pde::{energy, StepOutcome};
use halfline_core::phaseplane::{integrate_from_origin, vector_field};
use halfline_core::rates::{fit_blowup_on, fit_exponential, fit_power, FitWindow};
use halfline_core::{
    detect_regime, run, step, DatumSpec, DomainPolicy, Location, PhaseParams, ProblemSpec, ReactionSupport, Regime,
    Terminal, Trace,
};
use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, RngAlgorithm, TestCaseError, TestRng, TestRunner};

/// Prints the verdict outside the test harness capture, then asserts it.
fn verdict(criterion: u32, ok: bool, detail: &str) {
    let line = format!(
        "criterion {criterion:>2}: {} {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "{}", line.trim_end());
}

fn run_preset(text: &str) -> (Manifest, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(text).unwrap();
    cfg.output_dir = dir.path().to_path_buf();
    let manifest = run_experiment(&cfg).unwrap();
    assert!(manifest.missing().is_empty(), "missing files {:?}", manifest.missing());
    (manifest, dir)
}

fn summary(m: &Manifest) -> String {
    m.checks
        .iter()
        .map(|c| format!("[{} {}: {}]", c.status.label(), c.name, c.observed))
        .collect::<Vec<_>>()
        .join(" ")
}

fn failed(m: &Manifest) -> Vec<String> {
    m.checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.line())
        .collect()
}

#[test]
fn criterion_01_linear_profile_closed_form() {
    let mut worst: f64 = 0.0;
    let mut bracket_ok = true;
    for alpha in [0.5, 0.75] {
        let lin = linear_profile(alpha, -1.0).unwrap();
        let lambda = lin.slope_at_origin();
        let w = (1.0 - alpha).sqrt();

        let right = integrate_profile(&ProfileProblem::psi(1.0, alpha, lambda), 50.0).unwrap();
        for s in &right.samples {
            if s.xi <= lin.x_plus {
                worst = worst.max((s.f - lin.raw(s.xi)).abs());
            }
        }
        let x_plus = right.classification.xi_stop().unwrap_or(f64::NAN);
        worst = worst.max((x_plus - lin.x_plus).abs());
        let lo = std::f64::consts::PI / (2.0 * w);
        let hi = std::f64::consts::PI / w;
        bracket_ok &= x_plus > lo && x_plus < hi;

        // Reaction-free side in the reflected variable s = -x.
        let left = integrate_profile(&ProfileProblem::phi(1.0, alpha, lambda), 50.0).unwrap();
        for s in &left.samples {
            if -s.xi >= lin.x_minus {
                worst = worst.max((s.f - lin.raw(-s.xi)).abs());
            }
        }
    }
    verdict(
        1,
        worst <= 1e-6 && bracket_ok,
        &format!("sup error {worst:.3e} (tol 1e-6), x+ inside (pi/(2w), pi/w): {bracket_ok}"),
    );
}

#[test]
fn criterion_02_barenblatt_propagation() {
    let base = ProblemConfig {
        m: 2.0,
        p: 2.0,
        support: ReactionSupport::None,
        datum: halfline_cli::config::DatumKind::Barenblatt,
        barenblatt_t: 1.0,
        barenblatt_d: 1.0,
        x_min: -6.0,
        x_max: 6.0,
        expand: false,
        max_time: 1.0,
        ..ProblemConfig::default()
    };
    let (e1, _) = barenblatt_error(
        &ProblemConfig {
            dx: 0.01,
            ..base.clone()
        },
        0,
    )
    .unwrap();
    let (e2, _) = barenblatt_error(&ProblemConfig { dx: 0.005, ..base }, 0).unwrap();
    let ratio = e1 / e2;
    verdict(
        2,
        e1 <= 0.02 && ratio >= 3.5,
        &format!(
            "relative error {e1:.3e} at dx=0.01 (tol 2e-2), {e2:.3e} at dx=0.005, reduction {ratio:.3} (need >= 3.5)"
        ),
    );
}

#[test]
fn criterion_03_flat_ode_consistency() {
    let mut worst: f64 = 0.0;
    for (p, t_end) in [(0.5, 1.0), (2.0, 0.9 * flat_blowup_time(1.0, 2.0).unwrap())] {
        let spec = ProblemSpec::new(
            1.0,
            p,
            ReactionSupport::Global,
            DatumSpec::Uniform { height: 1.0 },
            DomainPolicy::fixed(-1.0, 1.0, 0.1),
        )
        .with_max_time(t_end);
        let trace = run(&spec).unwrap();
        for (t, s) in trace.times.iter().zip(&trace.sup_norms) {
            let exact = flat_ode(1.0, p, *t).unwrap();
            worst = worst.max((s - exact).abs() / exact);
        }
    }
    verdict(
        3,
        worst <= 5e-3,
        &format!("worst relative deviation {worst:.3e} (tol 5e-3)"),
    );
}

#[test]
fn criterion_04_regime_map() {
    let (m, _dir) = run_preset("[experiment]\npreset = regime-map\n");
    let bad = failed(&m);
    verdict(
        4,
        m.checks.len() == 30 && bad.is_empty(),
        &format!(
            "{} of {} cells as predicted; mismatches: {:?}",
            m.checks.len() - bad.len(),
            m.checks.len(),
            bad
        ),
    );
}

#[test]
fn criterion_05_blowup_rate() {
    let mut all = Vec::new();
    let mut ok = true;
    for mm in [1.0, 2.0] {
        let (man, _dir) = run_preset(&format!(
            "[experiment]\npreset = buprate\n[problem]\nm = {mm}\np = 3\ndx = 0.05\n"
        ));
        ok &= man.all_pass();
        all.push(format!("m={mm}: {}", summary(&man)));
    }
    verdict(5, ok, &all.join("; "));
}

#[test]
fn criterion_06_growup_rate_p_below_one() {
    let (man, _dir) = run_preset(
        "[experiment]\npreset = guprate\n[problem]\nm = 1\np = 0.5\ncenter = 0\nwidth = 2\nheight = 1\n\
         floor = 0.01\nx_min = -20\nx_max = 20\ndx = 0.1\nmax_time = 100\n",
    );
    verdict(6, man.all_pass(), &summary(&man));
}

#[test]
fn criterion_07_growup_rate_split() {
    let (man, _dir) = run_preset(
        "[experiment]\npreset = guprate\n[problem]\nm = 0.3\np = 0.7\ndatum = power-tail\ngamma = 2.857142857142857\n\
         scale = 1\nx_min = -20\nx_max = 20\ndx = 0.2\nmax_time = 1000\n",
    );
    verdict(7, man.all_pass(), &summary(&man));
}

#[test]
fn criterion_08_exponential_growup() {
    let (a, _d1) = run_preset(
        "[experiment]\npreset = guprate\n[problem]\nm = 1\np = 1\ncenter = 0\nwidth = 2\nheight = 1\nfloor = 0\n\
         x_min = -20\nx_max = 20\ndx = 0.1\nmax_time = 60\nblowup_threshold = 1e250\n",
    );
    let (b, _d2) = run_preset(
        "[experiment]\npreset = guprate\n[problem]\nm = 0.5\np = 1\ndatum = log-tail\nscale = 1\n\
         x_min = -60\nx_max = 60\ndx = 0.2\nmax_time = 100\nblowup_threshold = 1e250\n",
    );
    verdict(
        8,
        a.all_pass() && b.all_pass(),
        &format!("m=1: {}; m=0.5: {}", summary(&a), summary(&b)),
    );
}

#[test]
fn criterion_09_lambda_laws_and_alpha_star() {
    let (laws, _d1) = run_preset("[experiment]\npreset = lambda-laws\n[shoot]\nm = 2\nalpha = 0.1, 0.2, 0.4\n");
    let (star, _d2) = run_preset("[experiment]\npreset = alpha-star\n[shoot]\nm = 2\nscan_points = 20\n");
    verdict(
        9,
        laws.all_pass() && star.all_pass(),
        &format!("{} {}", summary(&laws), summary(&star)),
    );
}

#[test]
fn criterion_10_growup_rate_alpha_star() {
    let (man, _dir) = run_preset(
        "[experiment]\npreset = guprate\n[problem]\nm = 2\np = 1\ncenter = 0\nwidth = 2\nheight = 1\nfloor = 0\n\
         x_min = -20\nx_max = 20\ndx = 0.1\nmax_time = 16\n",
    );
    verdict(10, man.all_pass(), &summary(&man));
}

#[test]
fn criterion_11_blowup_sets() {
    let cases = [
        "m = 1\np = 3\nheight = 4\nwidth = 2\ncenter = 0\ndx = 0.05\n",
        "m = 2\np = 2\nheight = 4\nwidth = 2\ncenter = 0\ndx = 0.05\n",
        "m = 3\np = 2\nheight = 4\nwidth = 2\ncenter = 0\nx_min = -5\nx_max = 5\ndx = 0.1\nblowup_threshold = 1e3\n",
    ];
    let mut ok = true;
    let mut all = Vec::new();
    for c in cases {
        let (man, _dir) = run_preset(&format!("[experiment]\npreset = bupset\n[problem]\n{c}"));
        ok &= man.all_pass();
        all.push(summary(&man));
    }
    verdict(11, ok, &all.join("; "));
}

#[test]
fn criterion_12_negative_energy_blows_up() {
    let spec = ProblemSpec::new(
        2.0,
        3.5,
        ReactionSupport::HalfLine,
        DatumSpec::CompactBump {
            center: 5.0,
            width: 10.0,
            height: 1.0,
            floor: 0.0,
        },
        DomainPolicy::new(-10.0, 10.0, 0.05),
    )
    .with_max_time(60.0);
    let e0 = energy(&spec.initial_field().unwrap(), &spec);
    let regime = detect_regime(&run(&spec).unwrap());
    verdict(
        12,
        e0 < 0.0 && regime == Regime::BlowUp,
        &format!("initial energy {e0:.4}, regime {}", regime.name()),
    );
}

/// Runs `prop` on `cases` inputs drawn from `strategy` with a fixed seed.
fn check_property<S: Strategy>(
    name: &'static str,
    cases: u32,
    strategy: S,
    prop: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> (&'static str, Result<(), String>) {
    let config = ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    (name, runner.run(&strategy, prop).map_err(|e| e.to_string()))
}

fn bump(center: f64, width: f64, height: f64) -> DatumSpec {
    DatumSpec::CompactBump {
        center,
        width,
        height,
        floor: 0.0,
    }
}

fn class_rank_psi(c: &Classification) -> i32 {
    match c {
        Classification::CrossesZeroBadSlope { .. } => 0,
        Classification::CompactSupportClean { .. } => 1,
        Classification::PositiveDecaying { .. } => 2,
        _ => -1,
    }
}

fn class_rank_phi(c: &Classification) -> i32 {
    match c {
        Classification::PositiveUnbounded => 0,
        Classification::CompactSupportClean { .. } => 1,
        Classification::CrossesZeroBadSlope { .. } => 2,
        _ => -1,
    }
}

fn nondecreasing(ranks: &[i32]) -> bool {
    ranks.iter().all(|&r| r >= 0) && ranks.windows(2).all(|w| w[0] <= w[1])
}

fn positivity() -> (&'static str, Result<(), String>) {
    let supports = prop_oneof![
        Just(ReactionSupport::HalfLine),
        Just(ReactionSupport::Global),
        Just(ReactionSupport::None),
        (0.5..3.0f64).prop_map(ReactionSupport::Interval),
    ];
    check_property(
        "positivity",
        12,
        (
            1.0..3.0f64,
            1.1..4.0f64,
            supports,
            -2.0..2.0f64,
            0.5..3.0f64,
            0.1..3.0f64,
        ),
        |(m, p, support, c, w, h)| {
            let spec =
                ProblemSpec::new(m, p, support, bump(c, w, h), DomainPolicy::new(-6.0, 6.0, 0.1)).with_max_time(0.5);
            let trace = run(&spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
            for s in &trace.snapshots {
                prop_assert!(s.values.iter().all(|v| *v >= 0.0 && v.is_finite()));
            }
            let f0 = spec.initial_field().unwrap();
            let dt = 0.9 * f0.grid.dx().powi(2) / (2.0 * m * h.powf(m - 1.0));
            match step(&f0, &spec, dt).map_err(|e| TestCaseError::fail(e.to_string()))? {
                StepOutcome::Advanced(f) => prop_assert!(f.values.iter().all(|v| *v >= 0.0)),
                StepOutcome::Escalated { .. } => {}
            }
            Ok(())
        },
    )
}

fn mass_conservation() -> (&'static str, Result<(), String>) {
    check_property(
        "mass conservation",
        8,
        (1.2..3.0f64, -1.0..1.0f64, 0.5..2.0f64, 0.2..2.0f64),
        |(m, c, w, h)| {
            let spec = ProblemSpec::new(
                m,
                2.0,
                ReactionSupport::None,
                bump(c, w, h),
                DomainPolicy::fixed(-8.0, 8.0, 0.1),
            )
            .with_max_time(0.5);
            let trace = run(&spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let m0 = trace.masses[0];
            for (mass, sup) in trace.masses.iter().zip(trace.sup_norms.windows(2)) {
                prop_assert!((mass - m0).abs() <= 1e-6 * m0, "mass {mass} vs {m0}");
                prop_assert!(sup[1] <= sup[0] * (1.0 + 1e-12));
            }
            Ok(())
        },
    )
}

fn trichotomy() -> (&'static str, Result<(), String>) {
    check_property(
        "trichotomy monotonicity",
        6,
        (prop_oneof![Just(1.5), Just(2.0), Just(3.0)], 0.1..0.9f64),
        |(m, s)| {
            let (lo, hi) = (1.0 / m, 2.0 / (m + 1.0));
            let alpha = lo + (0.1 + 0.8 * s) * (hi - lo);
            let plus = find_lambda_plus(m, alpha).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let minus = find_lambda_minus(m, alpha).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let grid = |c: f64| (1..=12).map(move |k| c * k as f64 / 6.0);
            let psi: Vec<i32> = grid(plus)
                .map(|l| classify(&ProfileProblem::psi(m, alpha, l)).map(|c| class_rank_psi(&c)))
                .collect::<Result<_, _>>()
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let phi: Vec<i32> = grid(minus)
                .map(|l| classify(&ProfileProblem::phi(m, alpha, l)).map(|c| class_rank_phi(&c)))
                .collect::<Result<_, _>>()
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(nondecreasing(&psi), "psi ranks {psi:?}");
            prop_assert!(nondecreasing(&phi), "phi ranks {phi:?}");
            Ok(())
        },
    )
}

fn ode_residuals() -> (&'static str, Result<(), String>) {
    check_property(
        "ODE residuals",
        6,
        (prop_oneof![Just(1.5), Just(2.0), Just(3.0)], 0.1..0.9f64, 0.2..2.0f64),
        |(m, s, lam)| {
            let (lo, hi) = (1.0 / m, 2.0 / (m + 1.0));
            let alpha = lo + s * (hi - lo);
            for problem in [ProfileProblem::psi(m, alpha, lam), ProfileProblem::phi(m, alpha, lam)] {
                let opts = ProfileOptions::default().with_xi_max(20.0).sampled(1e-3);
                let out = integrate_profile_with(&problem, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
                // (f^m)'' is singular where f reaches zero with nonzero flux, which
                // a difference stencil cannot resolve; keep it 0.05 away.
                let end = out.samples.last().map_or(0.0, |s| s.xi);
                let touches_zero = out.samples.last().is_some_and(|s| s.f < 1e-3);
                let samples: Vec<_> = out
                    .samples
                    .iter()
                    .copied()
                    .filter(|s| !touches_zero || s.xi <= end - 0.05)
                    .collect();
                if samples.len() < 5 {
                    continue;
                }
                let r = profile_residual(&problem, &samples, 0.05).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(r <= 1e-6, "residual {r:e} for {problem:?}");
            }
            Ok(())
        },
    )
}

fn phase_strategy() -> impl Strategy<Value = (PhaseParams, f64)> {
    (1.5..3.0f64, 0.1..0.9f64, any::<bool>(), -3.0..1.0f64).prop_map(|(m, s, psi, lk)| {
        let alpha = 1.0 / m + s * (2.0 / (m + 1.0) - 1.0 / m);
        let params = if psi {
            PhaseParams::psi(m, alpha)
        } else {
            PhaseParams::phi(m, alpha)
        };
        (params, 10f64.powf(lk))
    })
}

fn y_nonnegative() -> (&'static str, Result<(), String>) {
    check_property("Y >= 0 invariance", 16, phase_strategy(), |(params, kappa)| {
        let traj = integrate_from_origin(kappa, &params, 40.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(traj.samples.iter().all(|s| s.y >= 0.0));
        prop_assert!(traj.terminal != Terminal::Lambda3 || params.q >= 0.0);
        Ok(())
    })
}

fn dydx_consistency() -> (&'static str, Result<(), String>) {
    check_property("dY/dX consistency", 16, phase_strategy(), |(params, kappa)| {
        let traj = integrate_from_origin(kappa, &params, 40.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let s = &traj.samples;
        let mut checked = 0;
        for i in 1..s.len().saturating_sub(1) {
            let (a, b, c) = (s[i - 1], s[i], s[i + 1]);
            let (h1, h2) = (b.eta - a.eta, c.eta - b.eta);
            if !(h1 > 0.0 && h2 > 0.0) || h1 + h2 > 0.1 {
                continue;
            }
            let (fx, fy) = vector_field(b.x, b.y, &params);
            let speed = fx.hypot(fy);
            // Skip the neighbourhood of critical points.
            if speed < 1e-3 * (1.0 + b.x.abs() + b.y.abs()) || speed > 1e3 {
                continue;
            }
            // Second-order tangent on a nonuniform stencil.
            let d = |ua: f64, ub: f64, uc: f64| {
                -h2 / (h1 * (h1 + h2)) * ua + (h2 - h1) / (h1 * h2) * ub + h1 / (h2 * (h1 + h2)) * uc
            };
            let (tx, ty) = (d(a.x, b.x, c.x), d(a.y, b.y, c.y));
            // Sine of the angle between the sampled tangent and the field.
            let sine = (tx * fy - ty * fx).abs() / (tx.hypot(ty) * speed);
            prop_assert!(
                sine <= 1e-3,
                "at X = {}, Y = {}: tangent slope {}, field slope {}",
                b.x,
                b.y,
                ty / tx,
                fy / fx
            );
            checked += 1;
        }
        prop_assert!(checked > 0 || s.len() < 3);
        Ok(())
    })
}

fn pullback() -> (&'static str, Result<(), String>) {
    check_property("pullback equivalence", 12, phase_strategy(), |(params, kappa)| {
        let traj = integrate_from_origin(kappa, &params, 40.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let m = params.m;
        let alpha = 2.0 * params.beta / (m - 1.0);
        let lambda = kappa / m.sqrt();
        // Orbits launch with g'(0) = lambda; Phi takes f'(0) = -shoot.
        let problem = if params.q < 0.0 {
            ProfileProblem::psi(m, alpha, lambda)
        } else {
            ProfileProblem::phi(m, alpha, -lambda)
        };
        let opts = ProfileOptions::default()
            .with_xi_max(5.0)
            .without_turn_stop()
            .sampled(1e-4);
        let out = integrate_profile_with(&problem, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut checked = 0;
        for (xi, g) in traj.pullback() {
            if !(0.05..=5.0).contains(&xi) {
                continue;
            }
            // f^m stays smooth through a contact where f itself does not, so
            // compare pressures.
            let k = out.samples.partition_point(|s| s.xi < xi);
            if k == 0 || k == out.samples.len() {
                continue;
            }
            let (a, b) = (out.samples[k - 1], out.samples[k]);
            let t = (xi - a.xi) / (b.xi - a.xi);
            let pm = (1.0 - t) * a.f.max(0.0).powf(m) + t * b.f.max(0.0).powf(m);
            let gm = g.powf(m);
            prop_assert!(
                (gm - pm).abs() <= 1e-5 * (1.0 + pm),
                "xi {xi}: pullback {gm}, profile {pm} (as f^m)"
            );
            checked += 1;
        }
        prop_assert!(checked > 0);
        Ok(())
    })
}

fn fit_window_robustness() -> (&'static str, Result<(), String>) {
    check_property(
        "fit-window robustness",
        24,
        (0.3..4.0f64, 0.2..3.0f64, 1.5..4.0f64),
        |(k, r, p)| {
            let times: Vec<f64> = (0..400).map(|i| 1.0 + i as f64 * 0.25).collect();
            let pow: Vec<f64> = times.iter().map(|t| 2.0 * t.powf(k)).collect();
            let exp: Vec<f64> = times.iter().map(|t| 0.5 * (r * t / 10.0).exp()).collect();
            let t_b = 101.0;
            let gamma = 1.0 / (p - 1.0);
            let bu: Vec<f64> = times.iter().map(|t| (t_b - t).powf(-gamma)).collect();
            let (a, b) = (40.0, 80.0);
            let shifted = FitWindow::Range(1.1 * a, 1.1 * b);
            let tp = Trace::from_sup_series(p, &times, &pow);
            let te = Trace::from_sup_series(p, &times, &exp);
            let f1 = fit_power(&tp, Location::SupNorm, FitWindow::Range(a, b))
                .unwrap()
                .fitted;
            let f2 = fit_power(&tp, Location::SupNorm, shifted).unwrap().fitted;
            prop_assert!((f1 - f2).abs() <= 0.1 * k);
            let g1 = fit_exponential(&te, Location::SupNorm, FitWindow::Range(a, b))
                .unwrap()
                .fitted;
            let g2 = fit_exponential(&te, Location::SupNorm, shifted).unwrap().fitted;
            prop_assert!((g1 - g2).abs() <= 0.1 * r / 10.0);
            let tb = Trace::from_sup_series(p, &times, &bu);
            let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= a && times[i] <= b).collect();
            let idx_s: Vec<usize> = (0..times.len())
                .filter(|&i| times[i] >= 1.1 * a && times[i] <= 1.1 * b)
                .collect();
            let h1 = fit_blowup_on(&tb, t_b, &idx).unwrap().fitted;
            let h2 = fit_blowup_on(&tb, t_b, &idx_s).unwrap().fitted;
            prop_assert!((h1 - h2).abs() <= 0.1 * gamma);
            Ok(())
        },
    )
}

fn sweep_determinism() -> (&'static str, Result<(), String>) {
    check_property("sweep determinism", 2, 1usize..4, |jobs| {
        let text =
            "[experiment]\npreset = custom\n[problem]\ndatum = bump\nsupport = halfline\nx_min = -5\nx_max = 5\n\
                    dx = 0.2\nmax_time = 0.5\nexpand = false\n[sweep]\nm = 1, 2\np = 2, 3\n";
        let mut bytes = Vec::new();
        for j in [1, jobs] {
            let dir = tempfile::tempdir().unwrap();
            let mut cfg = ExperimentConfig::parse(text).unwrap();
            cfg.output_dir = dir.path().to_path_buf();
            cfg.jobs = j;
            let man = run_experiment(&cfg).unwrap();
            prop_assert!(man.missing().is_empty());
            bytes.push(std::fs::read(dir.path().join("summary.csv")).unwrap());
        }
        prop_assert_eq!(&bytes[0], &bytes[1]);
        Ok(())
    })
}

#[test]
fn criterion_13_property_suites() {
    let results = [
        positivity(),
        mass_conservation(),
        trichotomy(),
        ode_residuals(),
        y_nonnegative(),
        dydx_consistency(),
        pullback(),
        fit_window_robustness(),
        sweep_determinism(),
    ];
    let bad: Vec<String> = results
        .iter()
        .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
        .collect();
    verdict(
        13,
        bad.is_empty(),
        &format!(
            "{} of {} property suites hold; failures: {:?}",
            results.len() - bad.len(),
            results.len(),
            bad
        ),
    );
}
