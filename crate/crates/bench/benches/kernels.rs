use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use partreg_bench::{limits, word_fixture};
use partreg_core::algebra::{generate_family, SubsetAlgebraReport};
use partreg_core::fp::fp_sigma;
use partreg_core::instances::NatPlus;
use partreg_core::search::{compute_bound, find_mono_fp_chain, BoundProblem, Coloring, FpProblem};
use std::hint::black_box;

fn fp_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("fp_sigma");
    for n in [4, 6, 8] {
        let (g, seq) = word_fixture(n);
        let sigma = g.sigmas();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| fp_sigma(&g, black_box(&seq), &sigma).unwrap().len())
        });
    }
    group.finish();
}

fn bound_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("bound");
    group.sample_size(10);
    for (name, problem) in [("schur_k3", BoundProblem::Schur), ("vdw3_k2", BoundProblem::Vdw { len: 3 })] {
        let k = if name == "schur_k3" { 3 } else { 2 };
        group.bench_function(name, |b| {
            b.iter(|| compute_bound(problem, k, 20, &limits(1), true).unwrap())
        });
    }
    group.finish();
}

fn chain_kernel(c: &mut Criterion) {
    let nat = NatPlus::new(100_000);
    let problem = FpProblem::plain(nat, NatPlus::less_than());
    let col = Coloring::rule("bit 2", 2, |a: &u64| Some(((a >> 2) & 1) as u8 + 1)).unwrap();
    let pool: Vec<u64> = (1..=40).collect();
    c.bench_function("mono_fp_chain_len3", |b| {
        b.iter(|| find_mono_fp_chain(&problem, &col, 3, black_box(&pool), &limits(1)).unwrap())
    });
}

fn algebra_kernel(c: &mut Criterion) {
    let family = generate_family(2024, 40, 6);
    c.bench_function("subset_algebra_family", |b| {
        b.iter(|| {
            family
                .iter()
                .map(|m| SubsetAlgebraReport::compute(&m.table).unwrap().idempotents.len())
                .sum::<usize>()
        })
    });
}

criterion_group!(kernels, fp_kernel, bound_kernel, chain_kernel, algebra_kernel);
criterion_main!(kernels);
