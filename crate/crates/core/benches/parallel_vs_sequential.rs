use bcnkit::boolfun::BoolExpr;
use bcnkit::network::{compile_truth_table, compile_truth_table_with, NetworkSpec};
use bcnkit::optimal::{max_mean_cycle_with, PayoffTable, PayoffTiming, Rational};
use bcnkit::par::Exec;
use bcnkit::reach::reachable_free_control_with;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

/// A ring of states, each mixing its neighbours with one control and one
/// derivative term.
fn ring(n: usize, m: usize) -> NetworkSpec {
    let x = |i: usize| BoolExpr::state((i + n) % n + 1);
    let f = (0..n)
        .map(|i| {
            let u = BoolExpr::control(i % m + 1);
            let d = BoolExpr::deriv((i + 1) % m + 1);
            BoolExpr::or(
                BoolExpr::and(x(i + 1), u),
                BoolExpr::xor(BoolExpr::not(x(i + n - 1)), BoolExpr::and(d, x(i))),
            )
        })
        .collect();
    let g_update = (0..m)
        .map(|j| BoolExpr::xor(BoolExpr::control(j + 1), BoolExpr::control((j + 1) % m + 1)))
        .collect();
    let g = (1..=m)
        .map(BoolExpr::control)
        .reduce(|a, b| BoolExpr::and(a, BoolExpr::not(b)))
        .unwrap();
    NetworkSpec::new(f, g_update, g).unwrap()
}

fn compile(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile_truth_table");
    for (n, m) in [(8, 2), (10, 3)] {
        let spec = ring(n, m);
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("n{n}m{m}")),
                &spec,
                |b, s| b.iter(|| compile_truth_table_with(s, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn karp(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_mean_cycle");
    group.sample_size(20);
    for (n, m) in [(8, 2), (10, 2)] {
        let net = compile_truth_table(&ring(n, m)).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(n as u64);
        let values = (0..net.control_count() * net.state_count())
            .map(|_| Rational::from_integer(r.gen_range(-50..=50)))
            .collect();
        let p = PayoffTable::new(net.control_count(), net.state_count(), values).unwrap();
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(name, format!("n{n}m{m}")), |b| {
                b.iter(|| max_mean_cycle_with(&net, &p, PayoffTiming::Arrival, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn reach(c: &mut Criterion) {
    let mut group = c.benchmark_group("reachable_free_control");
    for (n, m) in [(10, 2), (12, 3)] {
        let net = compile_truth_table(&ring(n, m)).unwrap();
        let x0 = net.state_vector(1).unwrap();
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(name, format!("n{n}m{m}")), |b| {
                b.iter(|| reachable_free_control_with(&net, &x0, 64, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, compile, karp, reach);
criterion_main!(benches);
