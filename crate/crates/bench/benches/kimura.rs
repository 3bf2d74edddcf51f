use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kimura_bench::{delta_ic, parabola_ic, small_wf};
use kimura_core::special::gegenbauer_sequence;
use kimura_core::verify::integral_identity_checks;
use kimura_core::{gauss_legendre, simulate, Interval, MeasureSolution};

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("gegenbauer_sequence");
    for n in [10, 60, 200] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gegenbauer_sequence(1.5, n, black_box(0.37)))
        });
    }
    g.finish();

    c.bench_function("gauss_legendre/64", |b| b.iter(|| gauss_legendre(black_box(64), Interval::UNIT)));
    c.bench_function("integral_identities/alpha=2,n<=20", |b| {
        b.iter(|| integral_identity_checks(black_box(2.0), 20))
    });
}

fn solution(c: &mut Criterion) {
    c.bench_function("project/delta N=60", |b| b.iter(|| MeasureSolution::new(&delta_ic(black_box(0.3)), 60, 0)));
    c.bench_function("project/parabola N=30", |b| b.iter(|| MeasureSolution::new(&parabola_ic(), 30, 18)));

    let sol = MeasureSolution::new(&delta_ic(0.3), 60, 0).unwrap();
    c.bench_function("fixation_probability", |b| b.iter(|| sol.fixation_probability(black_box(0.7))));
    c.bench_function("interior_density", |b| b.iter(|| sol.interior_density(black_box(0.4), 0.7)));
    let times = [0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    c.bench_function("conservation_report/7 times", |b| b.iter(|| sol.conservation_report(&times, 32)));
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("wright_fisher");
    g.sample_size(10);
    g.bench_function("N=50 R=1e4 G=100", |b| b.iter(|| simulate(&small_wf(black_box(1)))));
    g.finish();
}

criterion_group!(benches, special, solution, monte_carlo);
criterion_main!(benches);
