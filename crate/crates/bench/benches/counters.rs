use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use partcount_core::model::{self, PartitionInstance};
use partcount_core::reduction::{self, ReductionVariant};
use partcount_core::{estimator, modular, spectral};

fn medium_instance() -> PartitionInstance {
    let numbers: Vec<u64> = (1..=18).map(|k| (k * 37) % 50 + 1).collect();
    PartitionInstance::from_u64s(&numbers).unwrap()
}

fn bench_counters(c: &mut Criterion) {
    let inst = medium_instance();
    let mut group = c.benchmark_group("count_zero");
    group.bench_function("oracle", |b| {
        b.iter(|| model::count_zero_oracle(&inst).unwrap())
    });
    group.bench_function("dp", |b| b.iter(|| model::count_zero_dp(&inst).unwrap()));
    group.bench_function("residue_dp", |b| {
        let modulus = inst.total_u64().unwrap() + 1;
        b.iter(|| model::residue_spectrum_dp(&inst, modulus).unwrap())
    });
    group.bench_function("quadrature", |b| {
        b.iter(|| spectral::count_zero_quadrature(&inst, 1).unwrap())
    });
    group.bench_function("modular", |b| {
        b.iter(|| modular::count_zero_modular(&inst).unwrap())
    });
    group.finish();
}

fn bench_reduction(c: &mut Criterion) {
    let text = "p cnf 4 4\n1 2 3 0\n-1 2 4 0\n-2 -3 4 0\n1 -4 2 0\n";
    let formula = reduction::parse_dimacs(text).unwrap();
    c.bench_function("sat_to_partition", |b| {
        b.iter(|| {
            let ss = reduction::sat_to_subset_sum(&formula, 6, ReductionVariant::Parsimonious)
                .unwrap();
            reduction::subset_sum_to_partition(&ss).unwrap()
        })
    });
    c.bench_function("sieve_family", |b| {
        let family = reduction::multi_radix_family(
            &formula,
            &estimator::DEFAULT_RADICES,
            ReductionVariant::Parsimonious,
        )
        .unwrap();
        let instances: Vec<_> = family.into_iter().map(|m| m.partition).collect();
        b.iter_batched(
            || instances.clone(),
            |family| estimator::sieve(&family, &estimator::DEFAULT_PRIMES).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_big_product(c: &mut Criterion) {
    // A weak-setting instance with a large table: total ~ 4000.
    let numbers: Vec<u64> = (1..=24).map(|k| k * 13 % 300 + 1).collect();
    let inst = PartitionInstance::from_u64s(&numbers).unwrap();
    c.bench_function("encoded_product", |b| {
        b.iter(|| modular::build_encoded_product(&inst).unwrap())
    });
}

criterion_group!(benches, bench_counters, bench_reduction, bench_big_product);
criterion_main!(benches);
