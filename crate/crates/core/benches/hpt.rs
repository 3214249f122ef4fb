use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kuranishi_core::contraction::build_contraction;
use kuranishi_core::corpus;
use kuranishi_core::dgla::Dgla;
use kuranishi_core::exec::Execution;
use kuranishi_core::graded::{ChainComplex, GradedSpace};
use kuranishi_core::hpt::compute_tau_and_d;
use kuranishi_core::kuranishi::Kuranishi;
use kuranishi_core::rational::{int, zero};
use kuranishi_core::report::contraction_for;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau_and_d");
    for (name, n) in [("circle", 14), ("fourterm", 9)] {
        let p = corpus::load(name).unwrap();
        let (k, _) = contraction_for(&p).unwrap();
        for (mode, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(mode, format!("{name}/N={n}")),
                &n,
                |b, &n| b.iter(|| compute_tau_and_d(black_box(&p.dgla), &k, n, exec).unwrap()),
            );
        }
    }
    group.finish();
}

/// Four classes in degree −1, two in degree −2, `d = 0`, and brackets
/// `[e_i, e_j] = (i + j) f_0 + (i − j)² f_1`.
fn wide() -> Dgla {
    let space = GradedSpace::new([
        (-1, (0..4).map(|i| format!("e{i}")).collect::<Vec<_>>()),
        (-2, vec!["f0".into(), "f1".into()]),
    ])
    .unwrap();
    let complex = ChainComplex::zero_differential(space);
    let mut pairs = Vec::new();
    for i in 0..4i64 {
        for j in i..4 {
            let mut v = vec![zero(); 6];
            v[4] = int(i + j);
            v[5] = int((i - j) * (i - j));
            pairs.push((i as usize, j as usize, v));
        }
    }
    Dgla::from_pairs(complex, pairs).unwrap()
}

fn kuranishi(c: &mut Criterion) {
    let mut group = c.benchmark_group("kuranishi_theorem");
    group.sample_size(10);
    let cases = {
        let p = corpus::load("heisenberg").unwrap();
        let (k, _) = contraction_for(&p).unwrap();
        let w = wide();
        let kw = build_contraction(&w.complex).0;
        [("heisenberg/N=8", p.dgla, k, 8), ("wide/N=6", w, kw, 6)]
    };
    for (label, g, k, n) in &cases {
        for (mode, exec) in MODES {
            group.bench_function(BenchmarkId::new(mode, label), |b| {
                b.iter(|| {
                    let kur = Kuranishi::new(g, k, *n, exec).unwrap();
                    let coalg = kur.kuranishi_coalgebra(exec);
                    kur.verify_theorem(&coalg, exec)
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, recursion, kuranishi);
criterion_main!(benches);
