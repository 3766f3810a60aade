use std::hint::black_box;

use bispec_core::adcond::{ad_powers, fit_weights, verify_condition, WeightVector};
use bispec_core::ansatz::generate_system;
use bispec_core::diffop::{DiffOp, XRat};
use bispec_core::families::{exceptional_hermite, lookup};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn theta_op(id: &str) -> (DiffOp, DiffOp, WeightVector) {
    let (l, theta, w) = lookup(id).unwrap().scalar_parts().unwrap();
    (
        l.clone(),
        DiffOp::mul_by(XRat::from_poly(theta.clone())),
        w.clone(),
    )
}

fn hermite_ad_powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("exceptional_hermite_ad_powers");
    for k in [1usize, 2, 4] {
        let (l, theta) = exceptional_hermite(k);
        let theta = DiffOp::mul_by(XRat::from_poly(theta));
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| ad_powers(black_box(&l), black_box(&theta), k + 3).unwrap())
        });
    }
    group.finish();
}

fn laguerre_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("laguerre");
    group.sample_size(10);
    let (l, theta, w) = theta_op("laguerre-step:2:corrected");
    group.bench_function("verify_step_2", |b| {
        b.iter(|| verify_condition(&l, &theta, &w).unwrap())
    });
    group.bench_function("fit_weights_step_2", |b| {
        b.iter(|| fit_weights(&l, &theta, &[7, 5, 3, 1]).unwrap())
    });
    group.finish();
}

fn ansatz_systems(c: &mut Criterion) {
    let w = WeightVector::from_ints(&[(4, 1), (2, -40), (0, 144)]);
    c.bench_function("gen_system_A4-40A2+144A0", |b| {
        b.iter(|| generate_system(black_box(&w), true).unwrap())
    });
}

criterion_group!(
    benches,
    hermite_ad_powers,
    laguerre_verification,
    ansatz_systems
);
criterion_main!(benches);
