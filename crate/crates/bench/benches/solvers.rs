use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use halfline_bench::bump_problem;
use halfline_core::odeshoot::{find_lambda_plus, integrate_profile, ProfileProblem};
use halfline_core::phaseplane::integrate_from_origin;
use halfline_core::rates::{fit_power, FitWindow};
use halfline_core::{run, step, Location, PhaseParams, Trace};

fn pde(c: &mut Criterion) {
    let mut g = c.benchmark_group("pde");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    for dx in [0.1, 0.05] {
        let spec = bump_problem(2.0, 2.0, dx, 0.5);
        g.bench_with_input(BenchmarkId::new("run", dx), &spec, |b, spec| {
            b.iter(|| run(black_box(spec)).unwrap())
        });
    }
    let spec = bump_problem(2.0, 2.0, 0.01, 1.0);
    let field = spec.initial_field().unwrap();
    g.bench_function("step_2001_nodes", |b| {
        b.iter(|| step(black_box(&field), &spec, 1e-5).unwrap())
    });
    g.finish();
}

fn profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("profiles");
    g.sample_size(10);
    let psi = ProfileProblem::psi(2.0, 0.6, 0.3);
    g.bench_function("integrate_psi", |b| {
        b.iter(|| integrate_profile(black_box(&psi), 1e3).unwrap())
    });
    g.bench_function("lambda_plus", |b| {
        b.iter(|| find_lambda_plus(black_box(2.0), 0.6).unwrap())
    });
    let params = PhaseParams::psi(2.0, 0.6);
    g.bench_function("phase_orbit", |b| {
        b.iter(|| integrate_from_origin(black_box(0.5), &params, 40.0).unwrap())
    });
    g.finish();
}

fn rates(c: &mut Criterion) {
    let times: Vec<f64> = (1..=5000).map(|i| i as f64 * 0.1).collect();
    let sup: Vec<f64> = times.iter().map(|t| t.powf(10.0 / 3.0)).collect();
    let trace = Trace::from_sup_series(0.7, &times, &sup);
    c.bench_function("fit_power_auto", |b| {
        b.iter(|| fit_power(black_box(&trace), Location::SupNorm, FitWindow::Auto).unwrap())
    });
}

criterion_group!(benches, pde, profiles, rates);
criterion_main!(benches);
