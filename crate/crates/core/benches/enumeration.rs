//! Sequential vs rayon-parallel enumeration and solving.
//!
//! Parallel mode only differs when the crate is built with the `parallel`
//! feature (the default); results are identical either way.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fairdiv_core::enumerate::{enumerate_fpo_graphs_with, EnumerateOptions};
use fairdiv_core::instances::gen_random;
use fairdiv_core::{solve_min_sharing_with, Execution, FairnessSpec, Objective, SolveOptions};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for (n, m) in [(3, 10), (4, 8)] {
        let inst = gen_random(n, m, 17, -1000, 1000).expect("valid range");
        for (name, execution) in MODES {
            let opts = EnumerateOptions {
                execution,
                ..EnumerateOptions::default()
            };
            group.bench_with_input(
                BenchmarkId::new(name, format!("n{n}m{m}")),
                &inst,
                |b, inst| b.iter(|| enumerate_fpo_graphs_with(inst, &opts).expect("within budget")),
            );
        }
    }
    group.finish();
}

fn solving(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_ef_sharings");
    group.sample_size(10);
    let inst = gen_random(3, 10, 23, -1000, 1000).expect("valid range");
    let spec = FairnessSpec::envy_free();
    for (name, execution) in MODES {
        let opts = SolveOptions {
            execution,
            ..SolveOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| {
                solve_min_sharing_with(&inst, &spec, Objective::Sharings, &opts).expect("solvable")
            })
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, solving);
criterion_main!(benches);
