use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::quadrature::{integrate_line, LineIntegralSpec, QuadResult};
use super::xi_pair_direct_prec;
use crate::arith::{nth_prime, sigma, smooth_set};
use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::specfun::{expint_e_prec, gg_product_prec, inc_gamma_upper_prec};

fn check_a(a: u32) -> Result<()> {
    if matches!(a, 1 | 3 | 5) {
        Ok(())
    } else {
        Err(Error::Spec(format!("closed-form J exists for a in {{1,3,5}}, got {a}")))
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("J needs n >= 1".into()))
    } else {
        Ok(())
    }
}

/// Closed-form J_a(n, s0) = (1/2πi)∫ g(s)g(s-a) n^{-s}/(s-s0) ds.
pub fn j_closed(a: u32, n: u64, s0: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    j_closed_prec(a, n, s0, ctx.prec())
}

pub(crate) fn j_closed_prec(a: u32, n: u64, s0: &BigComplex, prec: u32) -> Result<BigComplex> {
    check_a(a)?;
    check_n(n)?;
    let w = prec + 32;
    let s0 = s0.with_prec(w);
    let pi = Float::with_val(w, Constant::Pi);
    let x = Float::with_val(w, &pi * 2u32) * n;
    let ex = Float::with_val(w, -&x).exp();
    let v = match a {
        1 => {
            let g1 = inc_gamma_upper_prec(&s0.add_int(1), &x, w)?;
            let g2 = inc_gamma_upper_prec(&s0.add_int(2), &x, w)?;
            let g3 = inc_gamma_upper_prec(&s0.add_int(3), &x, w)?;
            let bracket = &(&g1 - &g2).mul_int(6) + &g3;
            (&BigComplex::real_pow(&x, &-s0.clone()) * &bracket).scale(&pi)
        }
        3 => {
            let e = expint_e_prec(&-s0.clone(), &x, w)?;
            let inner = (&e * &s0.add_int(-4)).add_real(&ex);
            let pre = Float::with_val(w, (&pi).pow(3u32)) * 4u32 * n;
            inner.scale(&pre)
        }
        _ => {
            if s0.as_integer() == Some(3) {
                return Err(Error::Pole("J_5 has a pole at s0 = 3".into()));
            }
            let e = expint_e_prec(&-s0.clone(), &x, w)?;
            let x3 = Float::with_val(w, (&x).pow(3u32));
            let x4 = Float::with_val(w, &x3 * &x);
            let pn = Float::with_val(w, &pi * n);
            // 12πn(πn(2πn+3)+3) + 18
            let poly = Float::with_val(w, &pn * Float::with_val(w, &x + 3u32)) + 3u32;
            let poly = Float::with_val(w, &pn * &poly) * 12u32 + 18u32;
            let num = (&e * &s0.add_int(-6)).scale(&x4).add_real(&(poly * &ex));
            let den = s0.add_int(-3).scale(&x3);
            let pre = Float::with_val(w, (&pi).pow(3u32)) * 4u32;
            num.div(&den).scale(&pre)
        }
    };
    Ok(v.with_prec(prec))
}

/// J_a(n, s0) by vertical-line quadrature of its defining integral.
pub fn j_quadrature(
    a: u32,
    n: u64,
    s0: &BigComplex,
    spec: &LineIntegralSpec,
    ctx: &PrecisionContext,
) -> Result<QuadResult> {
    check_a(a)?;
    check_n(n)?;
    let re0 = s0.re.to_f64();
    let pole = if a >= 5 { a as f64 - 2.0 } else { -1.0 };
    let lower = re0.max(pole);
    let mut sigma = spec.resolve_sigma(lower)?;
    if spec.lift {
        sigma = sigma.max(2.0 * std::f64::consts::PI * n as f64);
    }
    let prec = ctx.prec() + 32;
    let s0 = s0.with_prec(prec);
    let base = Float::with_val(prec, n);
    let f = |s: &BigComplex| -> Result<BigComplex> {
        let g = gg_product_prec(a, s, prec)?;
        let v = &g * &BigComplex::real_pow(&base, &-s.clone());
        Ok(v.div(&(s - &s0)))
    };
    let gap = (sigma - re0).min(sigma - pole);
    let mut r = integrate_line(f, sigma, gap, spec, prec)?;
    r.value = r.value.with_prec(ctx.prec());
    Ok(r)
}

/// Leading factor of J_a for large n: πx²e^{-x}, 2π²x e^{-x}, 4π³e^{-x} with x = 2πn.
fn leading(a: u32, n: u64, prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    let x = Float::with_val(prec, &pi * 2u32) * n;
    let ex = Float::with_val(prec, -&x).exp();
    match a {
        1 => Float::with_val(prec, (&x).pow(2u32)) * &pi * ex,
        3 => Float::with_val(prec, (&pi).pow(2u32)) * 2u32 * &x * ex,
        _ => Float::with_val(prec, (&pi).pow(3u32)) * 4u32 * ex,
    }
}

/// |J_a/leading − (1 + c1/x + c2/x²)| with the second-order asymptotic bracket.
pub fn j_asymptotic_residual(a: u32, n: u64, s0: &BigComplex, ctx: &PrecisionContext) -> Result<f64> {
    let p = ctx.prec();
    let j = j_closed_prec(a, n, s0, p)?;
    let x = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32) * n;
    let ratio = j.scale(&leading(a, n, p).recip());
    let (c1, c2) = match a {
        1 => (s0.add_int(-4), &s0.add_int(-1) * &s0.add_int(-2)),
        3 => (s0.add_int(-4), s0 * &s0.add_int(-4)),
        _ => (s0.add_int(-3), (s0 * &s0.add_int(-4)).add_int(-6)),
    };
    let inv = Float::with_val(p, x.recip_ref());
    let inv2 = Float::with_val(p, &inv * &inv);
    let bracket = (&c1.scale(&inv) + &c2.scale(&inv2)).add_int(1);
    Ok((&ratio - &bracket).abs().to_f64())
}

/// Residual scaled as C = residual·n³/(1+|s0|)³.
pub fn j_asymptotic_constant(a: u32, n: u64, s0: &BigComplex, ctx: &PrecisionContext) -> Result<f64> {
    let r = j_asymptotic_residual(a, n, s0, ctx)?;
    let m = 1.0 + s0.abs().to_f64();
    Ok(r * (n as f64).powi(3) / m.powi(3))
}

/// Ξ_{N,a}(s0) from the direct product minus its J-tail.
#[derive(Clone, Debug)]
pub struct XiTail {
    pub n_primes: usize,
    pub a: u32,
    /// p_{N+1}
    pub first_prime: u64,
    pub n_max: u64,
    /// ξ(s0)ξ(s0-a)
    pub direct: BigComplex,
    /// Σ σ_a(n)[J_a(n,s0) + J_a(n,a+1-s0)] over non-smooth n ≤ n_max
    pub tail: BigComplex,
    /// direct − tail
    pub value: BigComplex,
}

/// Default tail cutoff: p_{N+1} plus enough terms for e^{-2πn} to clear the working precision.
pub fn default_tail_cutoff(n_primes: usize, ctx: &PrecisionContext) -> Result<u64> {
    let p = nth_prime(n_primes + 1)?;
    let extra = (ctx.working_digits() as f64 * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI)).ceil() as u64;
    Ok(p + extra + 5)
}

/// Ξ_{N,a}(s0) via its tail representation.
pub fn xi_approx_via_tail(
    n_primes: usize,
    a: u32,
    s0: &BigComplex,
    n_max: Option<u64>,
    ctx: &PrecisionContext,
) -> Result<XiTail> {
    check_a(a)?;
    if n_primes == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let first = nth_prime(n_primes + 1)?;
    let n_max = match n_max {
        Some(m) if m < first => {
            return Err(Error::Domain(format!("n_max {m} is below p_(N+1) = {first}")));
        }
        Some(m) => m,
        None => default_tail_cutoff(n_primes, ctx)?,
    };
    let p = ctx.prec();
    let w = p + 16;
    let smooth = smooth_set(nth_prime(n_primes)?, n_max)?;
    let s1 = (&BigComplex::from_int(w, a as i64 + 1) - &s0.with_prec(w)).with_prec(w);
    let mut tail = BigComplex::zero(w);
    for n in first..=n_max {
        if smooth.contains(n) {
            continue;
        }
        let j = &j_closed_prec(a, n, s0, w)? + &j_closed_prec(a, n, &s1, w)?;
        let c = Float::with_val(w, sigma(a, n)?);
        tail = &tail + &j.scale(&c);
    }
    let direct = xi_pair_direct_prec(&BigComplex::from_int(w, a as i64), s0, w)?;
    let value = &direct - &tail;
    Ok(XiTail {
        n_primes,
        a,
        first_prime: first,
        n_max,
        direct: direct.with_prec(p),
        tail: tail.with_prec(p),
        value: value.with_prec(p),
    })
}

/// |Ξ_{N,a}(s0) − Ξ_{N,a}(a+1−s0)| / max(1, |Ξ_{N,a}(s0)|).
pub fn xi_defect(n_primes: usize, a: u32, s0: &BigComplex, ctx: &PrecisionContext) -> Result<f64> {
    let s1 = &BigComplex::from_int(ctx.prec(), a as i64 + 1) - s0;
    let x0 = xi_approx_via_tail(n_primes, a, s0, None, ctx)?;
    let x1 = xi_approx_via_tail(n_primes, a, &s1, None, ctx)?;
    let scale = x0.value.abs().to_f64().max(1.0);
    Ok((&x0.value - &x1.value).abs().to_f64() / scale)
}

/// (ξξ − Ξ_{N,a}) divided by the leading p_{N+1} term: (2πp)³e^{-2πp}, (2π)³p⁴e^{-2πp}, (2π)³p⁵e^{-2πp}.
pub fn leading_tail_ratio(n_primes: usize, a: u32, s0: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let t = xi_approx_via_tail(n_primes, a, s0, None, ctx)?;
    let p = ctx.prec();
    let two_pi = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32);
    let q = t.first_prime;
    let lead = Float::with_val(p, (&two_pi).pow(3u32)) * Float::with_val(p, q).pow(a + 2)
        * Float::with_val(p, -(two_pi * q)).exp();
    Ok(t.tail.scale(&lead.recip()))
}

/// (ξξ − Ξ_{N,a}) divided by Σ_tail 2σ_a(n)·(leading J factor).
pub fn tail_leading_sum_ratio(n_primes: usize, a: u32, s0: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let t = xi_approx_via_tail(n_primes, a, s0, None, ctx)?;
    let p = ctx.prec();
    let smooth = smooth_set(nth_prime(n_primes)?, t.n_max)?;
    let mut lead = Float::new(p);
    for n in t.first_prime..=t.n_max {
        if !smooth.contains(n) {
            lead += Float::with_val(p, sigma(a, n)?) * leading(a, n, p) * 2u32;
        }
    }
    Ok(t.tail.scale(&lead.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(ctx().prec(), re, im)
    }

    #[test]
    fn j1_at_origin_is_elementary() {
        let p = ctx().prec();
        let pi = Float::with_val(p, Constant::Pi);
        let poly = Float::with_val(p, &pi * &pi) * 4u32 - Float::with_val(p, &pi * 8u32) + 2u32;
        let e = Float::with_val(p, Float::with_val(p, &pi * -2i32).exp());
        let want = poly * e * &pi;
        let got = j_closed(1, 1, &c(0.0, 0.0), &ctx()).unwrap();
        assert!((&got - &BigComplex::real(want)).abs().to_f64() < 1e-38);
    }

    #[test]
    fn j5_pole() {
        assert!(matches!(j_closed(5, 2, &c(3.0, 0.0), &ctx()), Err(Error::Pole(_))));
        assert!(matches!(j_closed(2, 2, &c(0.0, 0.0), &ctx()), Err(Error::Spec(_))));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (a, n, s0) in [(3u32, 2u64, c(1.0, 1.0)), (5, 2, c(-1.0, 0.0)), (1, 1, c(0.5, 2.0))] {
            let q = j_quadrature(a, n, &s0, &LineIntegralSpec::default(), &ctx()).unwrap();
            let j = j_closed(a, n, &s0, &ctx()).unwrap();
            let rel = (&q.value - &j).abs().to_f64() / j.abs().to_f64();
            assert!(rel < 1e-20, "a = {a}, n = {n}: {rel:e}");
        }
    }

    #[test]
    fn leading_asymptotics() {
        let one = j_asymptotic_residual(1, 400, &c(0.5, 0.0), &ctx()).unwrap();
        assert!(one < 1e-7);
        for a in [1, 3, 5] {
            let r = j_asymptotic_constant(a, 40, &c(1.0, 1.0), &ctx()).unwrap();
            assert!(r < 10.0, "a = {a}: {r}");
        }
    }

    #[test]
    fn tail_cutoff_validation() {
        assert!(matches!(xi_approx_via_tail(0, 1, &c(0.3, 0.0), None, &ctx()), Err(Error::Domain(_))));
        assert!(matches!(xi_approx_via_tail(2, 1, &c(0.3, 0.0), Some(4), &ctx()), Err(Error::Domain(_))));
    }
}
