use criterion::{black_box, criterion_group, criterion_main, Criterion};

use parind_core::chars::{enumerate_characters, CharFilter};
use parind_core::dihecke::{laurent_embed, scan_non_simple, scan_points};
use parind_core::fingrp::{FiniteGroup, GroupSpec, GroupType, ParabolicData, DEFAULT_MAX_ORDER};
use parind_core::finhecke::{quadratic_relation, Pipeline};
use parind_core::{build_field, classify, Case, CharContext, QScalar, Scalar};

fn fields(c: &mut Criterion) {
    c.bench_function("build_field GF(3^6)", |b| b.iter(|| build_field(3, black_box(6)).unwrap()));
    let f = build_field(3, 6).unwrap();
    let g = f.primitive_generator();
    let x = g.pow(500);
    c.bench_function("discrete_log GF(3^6)", |b| b.iter(|| black_box(&x).discrete_log(&g).unwrap()));
}

fn chars(c: &mut Criterion) {
    let ctx = CharContext::new(3, 3, Case::Unramified).unwrap();
    c.bench_function("enumerate regular q=3 n=3", |b| {
        b.iter(|| enumerate_characters(&ctx, CharFilter::RegularAndCondition).unwrap().len())
    });
    c.bench_function("classify q=3 n=1", |b| {
        b.iter(|| classify(3, 1, Case::Unramified, black_box(2), Scalar::Exact(QScalar::from_int(3))).unwrap())
    });
}

fn dihedral(c: &mut Criterion) {
    let gamma = QScalar::sqrt_power(3, 3);
    c.bench_function("X^4 * X^-3", |b| {
        b.iter(|| laurent_embed(&gamma, 4).try_mul(&laurent_embed(&gamma, -3)).unwrap())
    });
    let pts = scan_points(-10.0, 10.0, 1000);
    c.bench_function("scan 2000 points", |b| b.iter(|| scan_non_simple(&gamma, &pts, 1e-6).len()));
}

fn groups(c: &mut Criterion) {
    let spec = GroupSpec::new(GroupType::Gu, 1, 5).unwrap();
    c.bench_function("build GU_2(F_25)", |b| b.iter(|| FiniteGroup::build(spec, DEFAULT_MAX_ORDER).unwrap()));
    let g = FiniteGroup::build(spec, DEFAULT_MAX_ORDER).unwrap();
    c.bench_function("siegel double cosets GU_2(F_25)", |b| b.iter(|| ParabolicData::siegel(&g).unwrap()));
}

fn hecke(c: &mut Criterion) {
    let pipe = Pipeline::build(GroupType::Oj, 2, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
    c.bench_function("relation O_4(F_3)", |b| {
        b.iter(|| {
            let h = pipe.context().unwrap();
            let mut basis = h.basis().unwrap();
            quadratic_relation(&h, &mut basis).unwrap()
        })
    });
}

criterion_group!(benches, fields, chars, dihedral, groups, hecke);
criterion_main!(benches);
