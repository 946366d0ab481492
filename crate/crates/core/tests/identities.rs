use divsum_core::identities::{all_identity_specs, evaluate_identity, partial_sums};
use divsum_core::precision::log10_abs;
use divsum_core::{KernelSpec, PrecisionContext, Variant};
use rug::{Float, Rational};

#[test]
fn every_family_passes_at_forty() {
    let ctx = PrecisionContext::new(100).unwrap();
    for spec in all_identity_specs(6) {
        let r = evaluate_identity(&spec, 40, &ctx).unwrap();
        assert!(r.verdict.is_pass(), "{spec}: error {}", r.abs_error);
    }
}

#[test]
fn cor3_to_eighty_digits() {
    let ctx = PrecisionContext::new(110).unwrap();
    for (a, q) in [(1u32, 24u32), (3, 240), (5, 504)] {
        let r = evaluate_identity(&KernelSpec::cor3(a).unwrap(), 40, &ctx).unwrap();
        assert_eq!(r.target, Rational::from((1, q)));
        assert!(log10_abs(&r.abs_error) < -80.0, "a = {a}");
    }
}

#[test]
fn inhomogeneous_targets() {
    let ctx = PrecisionContext::new(90).unwrap();
    for (a, p, q) in [(7u32, 1u32, 225u32), (9, 4, 693), (11, 11056, 1289925)] {
        let r = evaluate_identity(&KernelSpec::higher_inhomogeneous(a).unwrap(), 40, &ctx).unwrap();
        assert_eq!(r.target, Rational::from((p, q)));
        assert!(log10_abs(&r.abs_error) < -60.0, "a = {a}");
    }
}

#[test]
fn constraint_suite_both_forms() {
    let ctx = PrecisionContext::new(120).unwrap();
    for a in [1u32, 3, 5] {
        for k in 0..=20 {
            for v in [Variant::Constraint, Variant::ConstraintHypergeometric] {
                let spec = KernelSpec::new(a, Some(k), v).unwrap();
                let r = evaluate_identity(&spec, 60, &ctx).unwrap();
                assert!(log10_abs(&r.abs_error) < -60.0, "{spec}");
                assert!(r.verdict.is_pass(), "{spec}");
            }
        }
    }
}

#[test]
fn doubling_truncation_stays_inside_bound() {
    let ctx = PrecisionContext::new(120).unwrap();
    for spec in [KernelSpec::cor3(3).unwrap(), KernelSpec::constraint(1, 5).unwrap()] {
        let r20 = evaluate_identity(&spec, 20, &ctx).unwrap();
        let r40 = evaluate_identity(&spec, 40, &ctx).unwrap();
        let d = Float::with_val(ctx.prec(), &r20.value - &r40.value).abs();
        assert!(d < r20.tail_bound, "{spec}");
    }
}

#[test]
fn bessel_partial_sums_match_table() {
    let ctx = PrecisionContext::new(420).unwrap();
    let cutoffs = [10u64, 40, 70, 100, 130];
    let printed = [(2.0, -23), (1.1, -102), (1.9, -183), (1.3, -264), (5.7, -346)];
    let t = partial_sums(&KernelSpec::bessel_a0(), &cutoffs, &ctx).unwrap();
    for ((n, v), (m, e)) in cutoffs.iter().zip(&t.values).zip(printed) {
        // rounded to the two printed significant figures
        let s = v.to_string_radix(10, Some(2));
        assert_eq!(s, format!("{m:.1}e{e}"), "N = {n}: {}", v.to_string_radix(10, Some(6)));
    }
}

#[test]
fn bessel_partial_sums_decrease() {
    let ctx = PrecisionContext::new(200).unwrap();
    let cutoffs: Vec<u64> = (5..=60).collect();
    let t = partial_sums(&KernelSpec::bessel_a0(), &cutoffs, &ctx).unwrap();
    for w in t.values.windows(2) {
        assert!(Float::with_val(ctx.prec(), w[1].abs_ref()) < Float::with_val(ctx.prec(), w[0].abs_ref()));
    }
}
