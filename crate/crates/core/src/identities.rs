//! Truncated sums Σ_{n≤N} σ_a(n)·kernel(n)·weight(n) with tail bounds and
//! verdicts against exact rational targets.

use std::fmt;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::arith::DivisorOracle;
use crate::error::{Error, Result};
use crate::kernels::{two_pi_n, KernelSpec, Variant};
use crate::precision::{log10_abs, PrecisionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub spec: KernelSpec,
    pub trunc: u64,
    pub digits: u32,
    pub value: Float,
    pub target: Rational,
    pub tail_bound: Float,
    pub abs_error: Float,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct PartialSumTable {
    pub spec: KernelSpec,
    pub cutoffs: Vec<u64>,
    pub values: Vec<Float>,
}

/// ln of the summand majorant C·n^D·e^{-2πn}, with σ_a(n) ≤ n^{a+1} folded into D.
fn ln_term_majorant(ln_c: f64, d: f64, n: f64) -> f64 {
    ln_c + d * n.ln() - 2.0 * std::f64::consts::PI * n
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// ln of a bound on Σ_{n>N} C n^D e^{-2πn}.
fn ln_tail(ln_c: f64, d: f64, n_trunc: u64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    // explicit terms until the ratio bound (1+1/M)^D e^{-2π} drops below 1/2
    let mut acc = f64::NEG_INFINITY;
    let mut m = n_trunc;
    while d * (1.0 / m as f64).ln_1p() - two_pi > -std::f64::consts::LN_2 {
        acc = log_add(acc, ln_term_majorant(ln_c, d, (m + 1) as f64));
        m += 1;
    }
    let ln_r = d * (1.0 / m as f64).ln_1p() - two_pi;
    let closed = ln_term_majorant(ln_c, d, (m + 1) as f64) - (-ln_r.exp()).ln_1p();
    log_add(acc, closed)
}

fn summand_degree(spec: &KernelSpec) -> Result<(f64, f64)> {
    let m = spec.majorant()?;
    Ok((m.ln_coeff, m.degree + spec.a() as f64 + 1.0))
}

/// Upper bound on |Σ_{n>N} σ_a(n)·kernel(n)·weight(n)|.
///
/// Uses σ_a(n) ≤ n^{a+1}, the kernel majorant, and
/// Σ_{n>N} n^D e^{-2πn} ≤ (N+1)^D e^{-2π(N+1)}/(1 − (1+1/N)^D e^{-2π}).
pub fn tail_bound(spec: &KernelSpec, n_trunc: u64, ctx: &PrecisionContext) -> Result<Float> {
    if n_trunc < 2 {
        return Err(Error::Domain(format!("tail bound needs N >= 2, got {n_trunc}")));
    }
    let (ln_c, d) = summand_degree(spec)?;
    let ln_b = ln_tail(ln_c, d, n_trunc) + 1e-9;
    let prec = ctx.prec();
    Ok(Float::with_val(prec, ln_b).exp())
}

/// Decimal digits of the largest summand bound above 1, used as extra precision.
fn magnitude_digits(spec: &KernelSpec, n_max: u64) -> Result<u32> {
    let (ln_c, d) = summand_degree(spec)?;
    let peak = (d / (2.0 * std::f64::consts::PI)).clamp(1.0, n_max.max(1) as f64);
    let best = [peak.floor().max(1.0), peak.ceil(), 1.0]
        .iter()
        .map(|&n| ln_term_majorant(ln_c, d, n))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((best / std::f64::consts::LN_10).max(0.0).ceil() as u32)
}

/// σ_a(n)·kernel(n)·weight(n) for n = 1..=n_max, at `prec` bits.
fn terms(spec: &KernelSpec, n_max: u64, prec: u32) -> Result<Vec<Float>> {
    let sig = DivisorOracle::new(spec.a()).table(n_max)?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let f = spec.term_factor_prec(n, prec)?;
            Ok(f * &sig[(n - 1) as usize])
        })
        .collect()
}

fn work_prec(spec: &KernelSpec, n_max: u64, ctx: &PrecisionContext) -> Result<u32> {
    Ok(ctx.with_extra_digits(magnitude_digits(spec, n_max)?).prec())
}

/// Truncated sum with verdict: pass iff |value − target| ≤ tail_bound + 10^{guard−digits}.
pub fn evaluate_identity(
    spec: &KernelSpec,
    n_trunc: u64,
    ctx: &PrecisionContext,
) -> Result<IdentityReport> {
    let tail = tail_bound(spec, n_trunc, ctx)?;
    let prec = work_prec(spec, n_trunc, ctx)?;
    let mut acc = Float::new(prec);
    for t in terms(spec, n_trunc, prec)? {
        acc += t;
    }
    let value = Float::with_val(ctx.prec(), acc);
    let target = spec.target();
    let abs_error = Float::with_val(ctx.prec(), &value - &target).abs();
    let allowed = Float::with_val(ctx.prec(), &tail + ctx.rounding_floor());
    let verdict = if abs_error <= allowed {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(IdentityReport {
        spec: *spec,
        trunc: n_trunc,
        digits: ctx.digits(),
        value,
        target,
        tail_bound: tail,
        abs_error,
        verdict,
    })
}

/// [`evaluate_identity`] that refuses to run when the tail bound or rounding
/// floor already exceeds `tolerance`.
pub fn evaluate_identity_within(
    spec: &KernelSpec,
    n_trunc: u64,
    ctx: &PrecisionContext,
    tolerance: &Float,
) -> Result<IdentityReport> {
    let tail = tail_bound(spec, n_trunc, ctx)?;
    if tail > *tolerance {
        return Err(Error::PrecisionInsufficient(format!(
            "tail bound {} at N = {n_trunc} exceeds tolerance {}",
            tail.to_string_radix(10, Some(6)),
            tolerance.to_string_radix(10, Some(6))
        )));
    }
    if ctx.rounding_floor() > *tolerance {
        return Err(Error::PrecisionInsufficient(format!(
            "{} digits cannot resolve tolerance {}",
            ctx.digits(),
            tolerance.to_string_radix(10, Some(6))
        )));
    }
    evaluate_identity(spec, n_trunc, ctx)
}

/// Partial sums at ascending cutoffs; each value is Σ_{1≤n≤cutoff}.
pub fn partial_sums(
    spec: &KernelSpec,
    cutoffs: &[u64],
    ctx: &PrecisionContext,
) -> Result<PartialSumTable> {
    if cutoffs.is_empty() {
        return Err(Error::EmptyRange("no cutoffs given".into()));
    }
    if cutoffs[0] == 0 || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("cutoffs must be positive and strictly ascending".into()));
    }
    let n_max = *cutoffs.last().unwrap();
    let prec = work_prec(spec, n_max, ctx)?;
    let ts = terms(spec, n_max, prec)?;
    let mut acc = Float::new(prec);
    let mut largest = f64::NEG_INFINITY;
    let mut values = Vec::with_capacity(cutoffs.len());
    let mut next = cutoffs.iter().peekable();
    for (i, t) in ts.iter().enumerate() {
        largest = largest.max(log10_abs(t));
        acc += t;
        let n = i as u64 + 1;
        if next.peek() == Some(&&n) {
            next.next();
            let depth = largest - log10_abs(&acc);
            if depth > ctx.digits() as f64 {
                return Err(Error::PrecisionInsufficient(format!(
                    "partial sum at N = {n} cancels {depth:.0} digits, more than the {} available",
                    ctx.digits()
                )));
            }
            values.push(Float::with_val(ctx.prec(), &acc));
        }
    }
    Ok(PartialSumTable {
        spec: *spec,
        cutoffs: cutoffs.to_vec(),
        values,
    })
}

/// The two halves of the a=5, k=0 identity: 2π Σσ_5(n)n²e^{-2πn} and
/// 7 Σσ_5(n)n e^{-2πn}. Their difference vanishes; neither does alone.
pub fn a5_split_sums(n_trunc: u64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let prec = ctx.prec() + 32;
    let sig = DivisorOracle::new(5).table(n_trunc)?;
    let mut s2 = Float::new(prec);
    let mut s1 = Float::new(prec);
    for n in 1..=n_trunc {
        let w = Float::with_val(prec, (-two_pi_n(n, prec)).exp_ref()) * &sig[(n - 1) as usize];
        let wn = w * n;
        s2 += Float::with_val(prec, &wn * n);
        s1 += wn;
    }
    let lhs = s2 * two_pi_n(1, prec);
    Ok((Float::with_val(ctx.prec(), lhs), Float::with_val(ctx.prec(), s1 * 7u32)))
}

/// min over q ≤ q_max of |x − round(xq)/q|.
pub fn rational_distance(x: &Float, q_max: u32) -> Float {
    let mut best = Float::with_val(x.prec(), rug::float::Special::Infinity);
    for q in 1..=q_max {
        let xq = Float::with_val(x.prec(), x * q);
        let p = xq.to_integer().unwrap_or_else(Integer::new);
        let d = Float::with_val(x.prec(), x - Rational::from((p, Integer::from(q)))).abs();
        if d < best {
            best = d;
        }
    }
    best
}

/// Every closed-form identity family with its parameter grid.
pub fn all_identity_specs(k_max: u32) -> Vec<KernelSpec> {
    let mut out = Vec::new();
    for a in [1u32, 3, 5] {
        out.push(KernelSpec::new(a, None, Variant::Cor3).unwrap());
    }
    for a in [1u32, 3, 5] {
        for k in 0..=k_max {
            out.push(KernelSpec::constraint(a, k).unwrap());
            out.push(KernelSpec::constraint_1f1(a, k).unwrap());
        }
    }
    for a in [7u32, 9, 11] {
        out.push(KernelSpec::higher_homogeneous(a).unwrap());
        out.push(KernelSpec::higher_inhomogeneous(a).unwrap());
    }
    out.push(KernelSpec::bessel_a0());
    out
}
