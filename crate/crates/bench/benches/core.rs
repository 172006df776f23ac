use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hecke_core::bqf::enumerate_classes;
use hecke_core::rpf::{build_symmetric, verify};
use hecke_core::{make_field, Budget, FieldElement};

fn field_ops(c: &mut Criterion) {
    let f = make_field(7).unwrap();
    let x = FieldElement::from_int_coeffs(&f, &[3, -5, 2]);
    let y = FieldElement::from_int_coeffs(&f, &[-1, 4, 7]);
    c.bench_function("field mul p=7", |b| {
        b.iter(|| black_box(&x) * black_box(&y))
    });
    c.bench_function("field inv p=7", |b| b.iter(|| black_box(&x).inv()));
    c.bench_function("field sign p=7", |b| b.iter(|| black_box(&y).sign()));
}

fn enumeration(c: &mut Criterion) {
    let f = make_field(4).unwrap();
    let d = FieldElement::from_int(&f, 14);
    c.bench_function("enumerate p=4 D=14", |b| {
        b.iter(|| enumerate_classes(4, black_box(&d)).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let f = make_field(4).unwrap();
    let cs = enumerate_classes(4, &FieldElement::from_int(&f, 14)).unwrap();
    let one = FieldElement::one(&f);
    let q = build_symmetric(
        4,
        3,
        &[(cs[0].clone(), one.clone()), (cs[1].clone(), one)],
        FieldElement::zero(&f),
    )
    .unwrap();
    let budget = Budget::default();
    c.bench_function("verify symmetric p=4 D=14 k=3", |b| {
        b.iter(|| verify(black_box(&q), &budget))
    });
}

criterion_group!(benches, field_ops, enumeration, verification);
criterion_main!(benches);
