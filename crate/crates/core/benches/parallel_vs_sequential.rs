use bqp_core::dual_solver::{solve_dual, SolveOptions};
use bqp_core::generator::{generate_instance, GenConfig};
use bqp_core::numerics::spd_factorize_with;
use bqp_core::oracle::brute_force_minimize_with;
use bqp_core::{Execution, SymMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [16, 20] {
        let (inst, _) = generate_instance(&GenConfig::new(n, 1)).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, inst| {
                b.iter(|| brute_force_minimize_with(inst, 25, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn factorize(c: &mut Criterion) {
    let mut group = c.benchmark_group("spd_factorize");
    for n in [200, 500] {
        let (inst, cert) = generate_instance(&GenConfig::new(n, 2)).unwrap();
        let a: SymMatrix = inst.q().add_diagonal(cert.lambda.as_slice()).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &a, |b, a| {
                b.iter(|| spd_factorize_with(a, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_dual");
    group.sample_size(10);
    for n in [100, 300] {
        let (inst, _) = generate_instance(&GenConfig::new(n, 3)).unwrap();
        for (name, exec) in POLICIES {
            let opts = SolveOptions {
                exec,
                ..SolveOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, inst| {
                b.iter(|| solve_dual(inst, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, oracle, factorize, solve);
criterion_main!(benches);
