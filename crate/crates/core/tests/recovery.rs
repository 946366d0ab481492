use divsum_core::arith::sigma;
use divsum_core::precision::log10_abs;
use divsum_core::recovery::{
    convergence_study, default_context, exact_det, solve_divisors, solve_divisors_auto,
    solve_divisors_unnormalized, vandermonde_det, vandermonde_matrix,
};
use rug::Float;

fn table(src: &str) -> Vec<(u64, String)> {
    src.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (n, v) = l.split_once(' ').unwrap();
            (n.parse().unwrap(), v.trim().to_owned())
        })
        .collect()
}

/// Matching significant digits between a computed value and a printed one.
fn agreement(x: &Float, printed: &str) -> f64 {
    let p = Float::with_val(x.prec(), Float::parse(printed).unwrap());
    let d = Float::with_val(x.prec(), x - &p);
    if d.is_zero() {
        return f64::INFINITY;
    }
    log10_abs(&p) - log10_abs(&d)
}

fn check_table(a: u32, n_max: u64, src: &str, min_digits: f64) {
    let ctx = default_context(n_max).unwrap();
    let r = solve_divisors(a, n_max, &ctx).unwrap();
    for (n, printed) in table(src) {
        let got = agreement(r.approx_at(n), &printed);
        assert!(got >= min_digits, "a = {a}, n = {n}: {got:.1} digits");
    }
}

#[test]
fn recover_a1_n20_values() {
    check_table(1, 21, include_str!("../../../testdata/recover_a1_n20.txt"), 25.0);
}

#[test]
fn recover_a1_n20_rounding() {
    let r = solve_divisors(1, 21, &default_context(21).unwrap()).unwrap();
    assert!(r.ns().filter(|&n| n <= 20).all(|n| r.matches_at(n)));
    assert!(!r.matches_at(21));
    assert_eq!(r.correct_prefix(), 20);
}

#[test]
fn recover_a1_n50_values_and_rounding() {
    check_table(1, 51, include_str!("../../../testdata/recover_a1_n50.txt"), 25.0);
    let r = solve_divisors(1, 51, &default_context(51).unwrap()).unwrap();
    assert_eq!(r.correct_prefix(), 49);
    assert_eq!(r.oracle[48], 93);
}

#[test]
fn recover_a3_a5_n50() {
    check_table(3, 51, include_str!("../../../testdata/recover_a3_n50.txt"), 25.0);
    check_table(5, 51, include_str!("../../../testdata/recover_a5_n50.txt"), 25.0);
    let r3 = solve_divisors(3, 51, &default_context(51).unwrap()).unwrap();
    assert_eq!(r3.correct_prefix(), 46);
    assert_eq!(r3.rounded[25], 20440);
    let r5 = solve_divisors(5, 51, &default_context(51).unwrap()).unwrap();
    assert_eq!(r5.correct_prefix(), 44);
    assert_eq!(r5.rounded[0], 33);
}

#[test]
fn residual_and_row_scaling() {
    for (a, n_max) in [(1u32, 12u64), (3, 21), (5, 30)] {
        let ctx = default_context(n_max).unwrap();
        let r = solve_divisors(a, n_max, &ctx).unwrap();
        assert!(log10_abs(&r.max_residual) < -(ctx.digits() as f64) / 2.0);
        let u = solve_divisors_unnormalized(a, n_max, &ctx).unwrap();
        for (x, y) in r.approx.iter().zip(&u.approx) {
            let d = Float::with_val(ctx.prec(), x - y).abs();
            assert!(log10_abs(&d) - log10_abs(x) < -(ctx.digits() as f64) / 2.0);
        }
    }
}

#[test]
fn auto_mode_agrees() {
    let ctx = default_context(21).unwrap();
    let r = solve_divisors_auto(1, 21, &ctx).unwrap();
    assert_eq!(r.correct_prefix(), 20);
}

#[test]
fn convergence_in_n() {
    let ctx = default_context(21).unwrap();
    let t = convergence_study(1, 20, &[21, 31, 51], &ctx).unwrap();
    // σ(19): 5.2e-3 at the 20-unknown solve, below 1e-29 at 50
    let e19: Vec<f64> = t.errors.iter().map(|row| log10_abs(&row[17])).collect();
    assert!((e19[0] - f64::log10(5.2e-3)).abs() < 0.02);
    assert!(e19[2] < -29.0);
    for n in 2..=20usize {
        for w in t.errors.windows(2) {
            assert!(w[1][n - 2] <= w[0][n - 2], "n = {n}");
        }
    }
    // σ(6) exact to 30 printed digits already at 20 unknowns
    let r = solve_divisors(1, 21, &ctx).unwrap();
    assert_eq!(sigma(1, 6).unwrap(), 12);
    assert_eq!(r.approx_at(6).to_string_radix(10, Some(30)), "12.0000000000000000000000000000");
    assert!(log10_abs(&t.errors[0][4]) < -28.0);
}

#[test]
fn vandermonde_formula_exact() {
    for n in 2..=8 {
        assert_eq!(vandermonde_det(n).unwrap(), exact_det(&vandermonde_matrix(n)), "N = {n}");
    }
}
