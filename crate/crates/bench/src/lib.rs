//! Criterion benchmarks of the main kernels.

use borel_wkb::apps::bessel::{self, BesselInstance};
use borel_wkb::apps::oracle::hankel;
use borel_wkb::apps::Method;
use borel_wkb::coeffs::bessel_table;
use borel_wkb::poly::{bessel_table_q, q};
use borel_wkb::transform::compute_xi;
use borel_wkb::{Sign, C64};
use criterion::{black_box, Criterion};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn coefficients(cr: &mut Criterion) {
    cr.bench_function("bessel_polynomials_exact_12", |b| b.iter(|| bessel_table_q(black_box(&q(1, 3)), 12)));
    cr.bench_function("bessel_polynomials_fixed_40", |b| b.iter(|| bessel_table(black_box(c(0.0)), Sign::Minus, 40)));
    let pot = bessel::potential(c(0.0));
    cr.bench_function("compute_xi", |b| b.iter(|| compute_xi(&pot, black_box(C64::new(2.0, 0.5)), None)));
}

pub fn summation(cr: &mut Criterion) {
    let inst = BesselInstance::new(c(20.0), c(0.0), c(2.0)).unwrap();
    for (name, m) in [("eta_asymptotic_8", Method::Asymptotic(8)), ("eta_borel", Method::Borel), ("eta_factorial", Method::Factorial)] {
        cr.bench_function(name, |b| b.iter(|| bessel::eta(black_box(&inst), Sign::Minus, m)));
    }
    cr.bench_function("hankel_reference", |b| b.iter(|| hankel(2, black_box(c(20.0)), black_box(c(40.0)))));
}

pub fn bounds(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("bounds");
    g.sample_size(10);
    g.bench_function("bessel_bound_setup", |b| b.iter(|| bessel::bound_setup(c(0.0), black_box(c(2.0)), Sign::Minus)));
    let setup = bessel::bound_setup(c(0.0), c(2.0), Sign::Minus).unwrap();
    g.bench_function("remainder_report", |b| b.iter(|| setup.report(black_box(c(40.0)), 6, None, None)));
    g.finish();
}
