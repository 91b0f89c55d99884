use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pab_core::{
    abelianize_census, abelianize_direct, abelianize_paper, build_group, catalog_family,
    frattini_via_lattice, FiniteGroup, GroupElement, DEFAULT_ENUM_CAP,
};

fn random_pairs(group: &pab_core::ConcreteGroup, count: usize) -> Vec<(GroupElement, GroupElement)> {
    let elements = group.elements().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    (0..count)
        .map(|_| {
            (
                elements[rng.gen_range(0..elements.len())].clone(),
                elements[rng.gen_range(0..elements.len())].clone(),
            )
        })
        .collect()
}

fn bench_collection(c: &mut Criterion) {
    let group = build_group(
        &catalog_family("extraspecial_exp_p", 3, 2).unwrap(),
        DEFAULT_ENUM_CAP,
    )
    .unwrap();
    let pairs = random_pairs(&group, 256);

    c.bench_function("engine/multiply_es_3_5", |b| {
        let mut i = 0;
        b.iter(|| {
            let (x, y) = &pairs[i % pairs.len()];
            i += 1;
            group.multiply(black_box(x), black_box(y))
        })
    });
    c.bench_function("engine/inverse_es_3_5", |b| {
        let mut i = 0;
        b.iter(|| {
            let (x, _) = &pairs[i % pairs.len()];
            i += 1;
            group.inverse(black_box(x))
        })
    });
    c.bench_function("engine/power_p_es_3_5", |b| {
        let mut i = 0;
        b.iter(|| {
            let (x, _) = &pairs[i % pairs.len()];
            i += 1;
            group.power(black_box(x), 3)
        })
    });
}

fn bench_oracles(c: &mut Criterion) {
    let heis = build_group(&catalog_family("heisenberg", 3, 0).unwrap(), DEFAULT_ENUM_CAP).unwrap();
    c.bench_function("engine/frattini_lattice_order_27", |b| {
        b.iter(|| frattini_via_lattice(black_box(&heis), 243).unwrap())
    });

    let m35 = catalog_family("modular", 3, 5).unwrap();
    c.bench_function("pipeline/census_order_243", |b| {
        b.iter(|| abelianize_census(black_box(&m35), DEFAULT_ENUM_CAP, 0).unwrap())
    });
}

fn bench_symbolic(c: &mut Criterion) {
    // Symbolic routes scale with the exponents, not the group order; this
    // group has order 3^61.
    let huge = catalog_family("modular", 3, 61).unwrap();
    c.bench_function("pipeline/paper_order_3_pow_61", |b| {
        b.iter(|| abelianize_paper(black_box(&huge)).unwrap())
    });
    c.bench_function("pipeline/direct_order_3_pow_61", |b| {
        b.iter(|| abelianize_direct(black_box(&huge)).unwrap())
    });
}

criterion_group!(benches, bench_collection, bench_oracles, bench_symbolic);
criterion_main!(benches);
