use criterion::{criterion_group, criterion_main};

criterion_group!(benches, borel_wkb_bench::coefficients, borel_wkb_bench::summation, borel_wkb_bench::bounds);
criterion_main!(benches);
