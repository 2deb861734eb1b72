use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use perfectoid_core::charp::CharPSeries;
use perfectoid_core::gauss::{spectral_seminorm_with, GaussAlgebra};
use perfectoid_core::par::Exec;
use perfectoid_core::ring::{CharPField, CoeffField, NormedRing, UntiltField};
use perfectoid_core::rings::ProductOfFields;
use perfectoid_core::spectra::{shilov_bruteforce_with, ProductToy, SpectralToy};
use perfectoid_core::tilt::tilt_add_limit_with;
use perfectoid_core::untilt::UntiltCtx;
use perfectoid_core::values::PExponent;

const MODES: [Exec; 2] = [Exec::Sequential, Exec::Parallel];

fn spectral(c: &mut Criterion) {
    let ctx = UntiltCtx::minimal(2, 3).unwrap();
    let alg = GaussAlgebra::new(UntiltField::new(ctx), 1);
    let k = alg.field().clone();
    let f = alg
        .add(&alg.var_pow(0, PExponent::new(2, 1, 1)).unwrap(), &alg.constant(k.uniformizer()))
        .unwrap();
    let mut g = c.benchmark_group("spectral_seminorm");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| spectral_seminorm_with(&alg, &f, 12, e).unwrap())
        });
    }
    g.finish();
}

fn shilov(c: &mut Criterion) {
    let toy = ProductToy::new(ProductOfFields::new(CharPField::exact(2), 6).unwrap());
    let tests = toy.shilov_tests();
    let mut g = c.benchmark_group("shilov_bruteforce");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| shilov_bruteforce_with(&toy, &tests, e).unwrap())
        });
    }
    g.finish();
}

fn add_limit(c: &mut Criterion) {
    let ctx = UntiltCtx::minimal(2, 3).unwrap();
    let f = CharPSeries::t_pow(2, 1, 0);
    let h = CharPSeries::one(2);
    let mut g = c.benchmark_group("tilt_add_limit");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| tilt_add_limit_with(&ctx, &f, &h, 0, 4, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, spectral, shilov, add_limit);
criterion_main!(benches);
