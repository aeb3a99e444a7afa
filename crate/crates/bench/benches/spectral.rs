use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nilcalc_core::coadjoint::extend_center_covector;
use nilcalc_core::families::heisenberg;
use nilcalc_core::hellip::{check_bve_at, check_bve_sphere, rockland_bruteforce, BvEOperatorSpec, RocklandCheckConfig};
use nilcalc_core::liealg::jordan_holder_basis;
use nilcalc_core::rational::q;
use nilcalc_core::symbolrep::{flat_rep, harmonic_oscillator};

fn oscillator(c: &mut Criterion) {
    let mut group = c.benchmark_group("oscillator");
    for n in [1, 2] {
        let g = heisenberg(n).unwrap();
        let flag = jordan_holder_basis(&g).unwrap();
        let rep = flat_rep(&g, &flag, &extend_center_covector(&g, &flag, &[q(1)])).unwrap();
        group.bench_function(format!("heisenberg-{n}/N=16"), |b| b.iter(|| harmonic_oscillator(black_box(&rep), 16).unwrap()));
    }
    group.finish();
}

fn ellipticity(c: &mut Criterion) {
    let g = heisenberg(2).unwrap();
    let spec = BvEOperatorSpec::scalar(&g, 3.0).unwrap();
    c.bench_function("closed-form/heisenberg-2", |b| b.iter(|| check_bve_at(black_box(&spec), &[q(1)], 1e-9).unwrap()));
    c.bench_function("sphere/heisenberg-2", |b| b.iter(|| check_bve_sphere(black_box(&spec), &RocklandCheckConfig::default()).unwrap()));

    let h1 = heisenberg(1).unwrap();
    let flag = jordan_holder_basis(&h1).unwrap();
    let spec1 = BvEOperatorSpec::scalar(&h1, 2.5).unwrap();
    let symbol = spec1.symbol().unwrap();
    let rep = flat_rep(&h1, &flag, &extend_center_covector(&h1, &flag, &[q(1)])).unwrap();
    let config = RocklandCheckConfig::default();
    c.bench_function("ladder/heisenberg-1/N=24", |b| b.iter(|| rockland_bruteforce(black_box(&rep), &symbol, &config).unwrap()));
}

criterion_group!(benches, oscillator, ellipticity);
criterion_main!(benches);
