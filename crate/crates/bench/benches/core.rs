use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use divsum_core::identities::evaluate_identity;
use divsum_core::kernels::constraint_kernel_poly;
use divsum_core::mellin::j_closed;
use divsum_core::recovery::{default_context, solve_divisors};
use divsum_core::specfun::{gamma, zeta};
use divsum_core::{BigComplex, KernelSpec, PrecisionContext};

fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    for digits in [50u32, 200] {
        let ctx = PrecisionContext::new(digits).unwrap();
        let s = BigComplex::from_f64(ctx.prec(), 0.5, 14.1);
        g.bench_with_input(BenchmarkId::new("gamma", digits), &s, |b, s| b.iter(|| gamma(black_box(s), &ctx).unwrap()));
        g.bench_with_input(BenchmarkId::new("zeta", digits), &s, |b, s| b.iter(|| zeta(black_box(s), &ctx).unwrap()));
    }
    g.finish();
}

fn kernels_and_sums(c: &mut Criterion) {
    let ctx = PrecisionContext::new(200).unwrap();
    c.bench_function("constraint_kernel_poly a=5 k=20", |b| {
        b.iter(|| constraint_kernel_poly(5, 20, black_box(17), &ctx).unwrap())
    });
    let spec = KernelSpec::cor3(3).unwrap();
    let ctx = PrecisionContext::new(142).unwrap();
    c.bench_function("cor3 a=3 trunc 40", |b| b.iter(|| evaluate_identity(&spec, black_box(40), &ctx).unwrap()));
}

fn mellin(c: &mut Criterion) {
    let ctx = PrecisionContext::new(40).unwrap();
    let s0 = BigComplex::from_f64(ctx.prec(), 0.5, 2.0);
    for a in [1u32, 5] {
        c.bench_function(&format!("j_closed a={a} n=5"), |b| b.iter(|| j_closed(a, black_box(5), &s0, &ctx).unwrap()));
    }
}

fn recovery(c: &mut Criterion) {
    let mut g = c.benchmark_group("recovery");
    g.sample_size(10);
    for n_max in [11u64, 21] {
        let ctx = default_context(n_max).unwrap();
        g.bench_with_input(BenchmarkId::new("solve_divisors a=1", n_max), &n_max, |b, &n| {
            b.iter(|| solve_divisors(1, n, &ctx).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, special_functions, kernels_and_sums, mellin, recovery);
criterion_main!(benches);
