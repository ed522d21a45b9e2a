use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holorecon::directions::{gen_kappa, gen_sigma_c_sequence, gen_square_net_sequence};
use holorecon::divided_differences::{criterion_matrix, delta_closed_form, delta_recursive};
use holorecon::numerics::{phi_kernel, CatalogFunction};
use holorecon::reconstruction::{CompactSet, Reconstructor};
use holorecon::{CriterionOptions, Precision};

fn divided_differences(c: &mut Criterion) {
    let nodes = gen_square_net_sequence(13, Precision::DEFAULT);
    let h = |z: &_| phi_kernel(z, 3);
    let mut g = c.benchmark_group("delta_p12");
    g.bench_function("recursive", |b| b.iter(|| delta_recursive(h, black_box(nodes.points()), 12).unwrap()));
    g.bench_function("closed_form", |b| b.iter(|| delta_closed_form(h, black_box(nodes.points()), 12).unwrap()));
    g.finish();
}

fn criterion_matrices(c: &mut Criterion) {
    let seq = gen_square_net_sequence(41, Precision::DEFAULT);
    let opts = CriterionOptions::default();
    let mut g = c.benchmark_group("criterion_matrix");
    g.sample_size(10);
    for p in [10usize, 20, 40] {
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| criterion_matrix(black_box(&seq), p, 8, &opts).unwrap())
        });
    }
    g.finish();
}

fn reconstruction(c: &mut Criterion) {
    let f: CatalogFunction = "exp-linear:1,1".parse().unwrap();
    let seq = gen_kappa(32, Precision::DEFAULT);
    let grid = CompactSet::polydisc(0.5).grid(Precision::DEFAULT);
    let (z1, z2) = grid[40].clone();
    let mut g = c.benchmark_group("reconstruction");
    g.sample_size(20);
    for n in [8usize, 16, 32] {
        let m = (2 * n as u32).max(40);
        g.bench_with_input(BenchmarkId::new("setup", n), &n, |b, &n| {
            b.iter(|| Reconstructor::new(&f, &seq, n, m, Precision::DEFAULT).unwrap())
        });
        let op = Reconstructor::new(&f, &seq, n, m, Precision::DEFAULT).unwrap();
        g.bench_with_input(BenchmarkId::new("eval_point", n), &n, |b, _| b.iter(|| op.eval_point(black_box(&z1), black_box(&z2))));
    }
    g.finish();
}

fn annulus_ordering(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma_c");
    g.sample_size(10);
    for n in [256usize, 1024] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gen_sigma_c_sequence(n, Precision::DEFAULT).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, divided_differences, criterion_matrices, reconstruction, annulus_ordering);
criterion_main!(benches);
