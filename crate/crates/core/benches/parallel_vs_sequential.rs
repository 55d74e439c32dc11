use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use submodkit::exec::Exec;
use submodkit::hypercube::{compute_constants_with, edge_counts_with, EdgeStrategy};
use submodkit::inequality_lab::{tk_sequence_with, Claim, ScalarTransform};
use submodkit::oracle::{self, OracleRng};
use submodkit::setfn::SetFunction;

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn submodular_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_submodular");
    for n in [12usize, 16] {
        let f = oracle::random_signed_submodular(&mut OracleRng::seed_from_u64(1), n);
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
                b.iter(|| black_box(f.is_submodular_with(1e-9, exec)))
            });
        }
    }
    group.finish();
}

fn tk_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("tk_sequence");
    let g = ScalarTransform::exp2_scaled(1.0).unwrap();
    for n in [14usize, 18] {
        let f = SetFunction::from_fn(submodkit::setfn::GroundSet::new(n).unwrap(), |t| {
            f64::from(t.count_ones()).sqrt()
        })
        .unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
                b.iter(|| {
                    black_box(
                        tk_sequence_with(
                            f,
                            &g,
                            Claim::Direction(submodkit::inequality_lab::Direction::Decreasing),
                            1e-9,
                            exec,
                        )
                        .unwrap(),
                    )
                })
            });
        }
    }
    group.finish();
}

fn hypercube_scans(c: &mut Criterion) {
    let a = oracle::random_code_set(&mut OracleRng::seed_from_u64(2), 14, 4000);
    let mut group = c.benchmark_group("hypercube");
    for (name, exec) in POLICIES {
        group.bench_function(
            BenchmarkId::new(format!("edge_counts/{name}"), a.len()),
            |b| b.iter(|| black_box(edge_counts_with(&a, 3, EdgeStrategy::Pairs, exec).unwrap())),
        );
        group.bench_function(
            BenchmarkId::new(format!("compute_md/{name}"), a.len()),
            |b| b.iter(|| black_box(compute_constants_with(&a, 3, exec).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(benches, submodular_scan, tk_scan, hypercube_scans);
criterion_main!(benches);
