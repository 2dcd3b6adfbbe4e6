use std::hint::black_box;

use advect_core::classic::{ClassicScheme, Stepper};
use advect_core::jet::{init_delta, jet_step};
use advect_core::{l1_plf, make_cfl, make_grid, NamedProfile, PiecewiseLinearFn, Profile, Shift};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const SIZES: [usize; 3] = [100, 1000, 10_000];

fn bump_samples(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| NamedProfile::Bump.value(j as f64 / m as f64))
        .collect()
}

fn jet(c: &mut Criterion) {
    let mut group = c.benchmark_group("jet_step");
    for m in SIZES {
        let grid = make_grid(m).unwrap();
        let cfl = make_cfl(3, 4, 1.0, &grid).unwrap();
        let state = init_delta(|x| NamedProfile::Bump.value(x), &grid, &cfl, None).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &state, |b, s| {
            b.iter(|| jet_step(black_box(s), &grid, &cfl).unwrap())
        });
    }
    group.finish();
}

fn classic(c: &mut Criterion) {
    for scheme in [
        ClassicScheme::Upwind,
        ClassicScheme::LaxWendroff,
        ClassicScheme::SspCentral2,
        ClassicScheme::CnCentral4,
        ClassicScheme::LwVanLeer,
        ClassicScheme::Weno5,
    ] {
        let mut group = c.benchmark_group(scheme.to_string());
        for m in SIZES {
            let stepper = Stepper::new(scheme, 0.8, m).unwrap();
            let u = bump_samples(m);
            group.bench_with_input(BenchmarkId::from_parameter(m), &u, |b, u| {
                b.iter(|| stepper.step(black_box(u)).unwrap())
            });
        }
        group.finish();
    }
}

fn exact_l1(c: &mut Criterion) {
    let mut group = c.benchmark_group("l1_plf");
    for n in [10usize, 100, 1000] {
        let pts = |phase: f64| -> Vec<(f64, f64)> {
            (0..n)
                .map(|k| {
                    let x = (k as f64 + 0.3) / n as f64;
                    (x, (6.0 * x + phase).sin())
                })
                .collect()
        };
        let f = PiecewiseLinearFn::from_points(&pts(0.0)).unwrap();
        let g = PiecewiseLinearFn::from_points(&pts(0.5))
            .unwrap()
            .shifted(Shift::lattice(7, 1000));
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| l1_plf(black_box(&f), black_box(&g)))
        });
    }
    group.finish();
}

criterion_group!(benches, jet, classic, exact_l1);
criterion_main!(benches);
