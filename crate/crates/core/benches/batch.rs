use branchcurve_core::chart::{real_slice, Chart};
use branchcurve_core::curve::{curve_coeffs, oracle_check};
use branchcurve_core::flow::{curve_sequence, BlowupSequence, ModelGeometry};
use branchcurve_core::sampling::random_curvature;
use branchcurve_core::singular::singular_sample;
use branchcurve_core::tensor::curvature_operator_blocks;
use branchcurve_core::ExecMode;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn oracle(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let blocks = curvature_operator_blocks(&random_curvature(&mut rng));
    let coeffs = curve_coeffs(&blocks);
    let mut group = c.benchmark_group("oracle_check");
    for samples in [1_000, 20_000] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &n| {
                b.iter(|| oracle_check(&blocks, &coeffs, n, 1e-10, 7, mode))
            });
        }
    }
    group.finish();
}

fn slice(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let coeffs = curve_coeffs(&curvature_operator_blocks(&random_curvature(&mut rng)));
    let mut group = c.benchmark_group("real_slice");
    for grid in [64, 512] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, grid), &grid, |b, &n| {
                b.iter(|| real_slice(&coeffs, Chart::PP, n, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn singular(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let coeffs = curve_coeffs(&curvature_operator_blocks(&random_curvature(&mut rng)));
    let mut group = c.benchmark_group("singular_sample");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| singular_sample(&coeffs, 12, 1e-10, mode).unwrap()));
    }
    group.finish();
}

fn blowup(c: &mut Criterion) {
    let geom = ModelGeometry::from_name("s3xr", None).unwrap();
    let seq = BlowupSequence::geometric(geom, 0.5, 40, -1.0).unwrap();
    let mut group = c.benchmark_group("curve_sequence");
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| curve_sequence(&seq, 1e-12, mode).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, oracle, slice, singular, blowup);
criterion_main!(benches);
