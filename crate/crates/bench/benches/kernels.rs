use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use oldb_core::dyadic::{besov_norm, BesovSpec, DyadicPartition, Split};
use oldb_core::random;
use oldb_core::solver::{step, State, TermSwitches};
use oldb_core::spectral::ops::{advect_conservative, leray_project};
use oldb_core::spectral::{ConstitutiveParams, Grid, Rank, SpectralField};

fn bench_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform_roundtrip");
    for points in [64usize, 128, 256] {
        let grid = Grid::new(2, points).unwrap();
        let f = random::scalar_field(&grid, 1, grid.dealias_bound(), 1);
        group.bench_with_input(BenchmarkId::from_parameter(points), &f, |b, f| {
            b.iter(|| {
                let (samples, _) = f.to_real();
                let back =
                    SpectralField::from_real(f.grid(), Rank::Scalar, black_box(&samples)).unwrap();
                black_box(back)
            })
        });
    }
    group.finish();
}

fn bench_advection(c: &mut Criterion) {
    let mut group = c.benchmark_group("advect_conservative");
    for points in [64usize, 128] {
        let grid = Grid::new(2, points).unwrap();
        let u = random::divfree_field(&grid, 1, 8, 2);
        let tau = random::symtensor_field(&grid, 1, 8, 3);
        group.bench_with_input(BenchmarkId::from_parameter(points), &(u, tau), |b, (u, tau)| {
            b.iter(|| black_box(advect_conservative(u, tau).unwrap()))
        });
    }
    group.finish();
}

fn bench_besov(c: &mut Criterion) {
    let mut group = c.benchmark_group("besov_norm_p3");
    for points in [64usize, 128] {
        let grid = Grid::new(2, points).unwrap();
        let part = DyadicPartition::new(&grid, 2).unwrap();
        let f = random::scalar_field(&grid, 1, grid.dealias_bound(), 4);
        let spec = BesovSpec::new(-1.0 / 3.0, 3.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(points), &f, |b, f| {
            b.iter(|| black_box(besov_norm(&part, f, spec, Split::Full)))
        });
    }
    group.finish();
}

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("ifrk2_step");
    group.sample_size(20);
    for points in [64usize, 128] {
        let grid = Grid::new(2, points).unwrap();
        let mut u = random::divfree_field(&grid, 1, 8, 5);
        u.scale(1e-2);
        let mut tau = random::symtensor_field(&grid, 1, 8, 6);
        tau.scale(1e-2);
        let state = State::new(0.0, leray_project(&u).unwrap(), tau).unwrap();
        let params = ConstitutiveParams { b: 0.5, ..Default::default() };
        let terms = TermSwitches { nonlinear: true, coupling: true };
        group.bench_with_input(BenchmarkId::from_parameter(points), &state, |b, state| {
            b.iter(|| black_box(step(state, 1e-3, &params, terms, 0.5).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_transform, bench_advection, bench_besov, bench_step);
criterion_main!(benches);
