//! Hot-path timings: trajectory generation (tree sampler vs. the full
//! engine), exact sequence probabilities, and the structural sweeps.

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use magicsq_core::contexts::{ks_exhaustive_check, value_table, ContextKind};
use magicsq_core::harness::{sample_distribution, TrajectorySampler};
use magicsq_core::hvmodel::{Microstate, SequentialModel};
use magicsq_core::qcore::{joint_prob, operator_at, QuantumState, Sign};
use std::hint::black_box;

const BATCH: u64 = 10_000;

fn sampling(c: &mut Criterion) {
    let state = QuantumState::singlet();
    let plan = ContextKind::Row3.cells();

    let mut group = c.benchmark_group("sampling");
    group.throughput(Throughput::Elements(BATCH));
    group.bench_function("tree_sampler_row3", |b| {
        b.iter(|| sample_distribution(&state, &plan, BATCH, black_box(42)).unwrap())
    });
    group.finish();

    c.bench_function("sampler_build_len3", |b| {
        b.iter(|| TrajectorySampler::new(&state, black_box(&plan)).unwrap())
    });
}

fn engine(c: &mut Criterion) {
    let state = QuantumState::singlet();
    let plan = ContextKind::Row3.cells();
    let mut model = SequentialModel::new(&state);
    let mut tail_seed = 0u64;
    c.bench_function("engine_run_row3", |b| {
        b.iter(|| {
            tail_seed += 1;
            let u = Microstate::fresh(tail_seed);
            model.run(&u, &plan).unwrap()
        })
    });

    let mut memoized = SequentialModel::new(&state);
    let u = Microstate::fresh(7);
    value_table(&mut memoized, &u).unwrap();
    c.bench_function("counterfactual_table_warm", |b| {
        b.iter(|| value_table(&mut memoized, black_box(&u)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let state = QuantumState::singlet();
    let sequence: Vec<_> = ContextKind::Col3
        .cells()
        .iter()
        .map(|&cell| (operator_at(cell), Sign::Minus))
        .collect();
    c.bench_function("joint_prob_len3", |b| {
        b.iter(|| joint_prob(&state, black_box(&sequence)))
    });

    c.bench_function("ks_sweep_512_tables", |b| b.iter(ks_exhaustive_check));
}

criterion_group!(benches, sampling, engine, oracle);
criterion_main!(benches);
