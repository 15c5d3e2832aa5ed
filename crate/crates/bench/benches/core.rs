//! Benchmarks for the hot paths: coefficient derivation, closed-form
//! evaluation, the verification oracles, and the Monte Carlo engine.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mvjump::closed_form::{
    pre_moments, target_controls, tc_moments, Strategy, StrategyKind, StrategySpec,
};
use mvjump::simulate::{simulate_wealth, SimulationConfig};
use mvjump::verify::{integrate_ansatz, max_hjb_residual};
use mvjump::{JumpDistribution, MarketParams, Scenario};

fn baseline() -> Scenario {
    Scenario::baseline()
}

fn bench_coefficients(c: &mut Criterion) {
    let params = MarketParams::default();
    let jump = JumpDistribution::Constant { gamma: 0.3 };
    c.bench_function("derive_coefficients", |b| {
        b.iter(|| Scenario::new(black_box(params), black_box(jump)).unwrap())
    });
}

fn bench_closed_forms(c: &mut Criterion) {
    let sc = baseline();
    c.bench_function("tc_moments", |b| {
        b.iter(|| tc_moments(&sc, black_box(2.0), 0.0, 1.0, 1.0).unwrap())
    });
    c.bench_function("pre_moments", |b| {
        b.iter(|| pre_moments(&sc, black_box(2.0), 0.0, 1.0).unwrap())
    });
    c.bench_function("target_controls", |b| {
        b.iter(|| target_controls(&sc, black_box(1.1), 0.0, 1.0).unwrap())
    });
}

fn bench_verification(c: &mut Criterion) {
    let sc = baseline();
    c.bench_function("hjb_residual_125_points", |b| {
        b.iter(|| max_hjb_residual(&sc, black_box(2.0), 5, (0.25, 4.0), (0.25, 4.0)))
    });
    c.bench_function("integrate_ansatz_10k_steps", |b| {
        b.iter(|| integrate_ansatz(&sc, black_box(2.0), 10_000).unwrap())
    });
}

fn bench_simulation(c: &mut Criterion) {
    let sc = baseline();
    let config = SimulationConfig {
        n_paths: 1_000,
        steps_per_year: 252,
        seed: 42,
        antithetic: false,
    };
    let mut group = c.benchmark_group("simulate_1k_paths_252_steps");
    group.sample_size(10);
    for (name, kind) in [
        ("tc", StrategyKind::TimeConsistent { theta: 2.0 }),
        ("precommit", StrategyKind::Precommit { theta: 2.0 }),
        ("aux", StrategyKind::AuxQuadratic { xi: 1.2 }),
    ] {
        let strategy = Strategy::new(&sc, StrategySpec { kind, t0: 0.0, x0: 1.0 }).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| simulate_wealth(&sc, &strategy, black_box(&config), 0.0, 1.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_coefficients,
    bench_closed_forms,
    bench_verification,
    bench_simulation
);
criterion_main!(benches);
