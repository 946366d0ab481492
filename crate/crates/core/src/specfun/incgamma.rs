use rug::float::Constant;
use rug::Float;

use super::eps_bits;
use super::gamma::gamma_prec;
use crate::complex::BigComplex;
use crate::error::{Error, Result};

const MAX_ITER: usize = 200_000;

/// Modified Lentz evaluation of b0 + a1/(b1 + a2/(b2 + ...)).
fn lentz(
    b0: BigComplex,
    prec: u32,
    mut coeff: impl FnMut(usize) -> (BigComplex, BigComplex),
) -> Result<BigComplex> {
    let tiny = BigComplex::real(Float::with_val(prec, Float::parse("1e-300000").unwrap()));
    let tol = eps_bits(prec);
    let mut f = if b0.is_zero() { tiny.clone() } else { b0 };
    let mut c = f.clone();
    let mut d = BigComplex::zero(prec);
    for n in 1..MAX_ITER {
        let (an, bn) = coeff(n);
        d = &bn + &(&an * &d);
        if d.is_zero() {
            d = tiny.clone();
        }
        d = d.recip();
        c = &bn + &an.div(&c);
        if c.is_zero() {
            c = tiny.clone();
        }
        let delta = &c * &d;
        f = &f * &delta;
        if (&delta - &BigComplex::one(prec)).abs() < tol {
            return Ok(f);
        }
    }
    Err(Error::PrecisionInsufficient("continued fraction did not converge".into()))
}

fn check_x(x: &Float) -> Result<()> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!("argument must be positive, got {}", x.to_f64())));
    }
    Ok(())
}

/// Γ(s,x) = ∫_x^∞ t^{s-1} e^{-t} dt for complex s and real x > 0.
pub(crate) fn inc_gamma_upper_prec(s: &BigComplex, x: &Float, prec: u32) -> Result<BigComplex> {
    check_x(x)?;
    let work = prec + 24;
    let x = Float::with_val(work, x);
    let s = s.with_prec(work);
    let out = if let Some(m) = s.as_integer() {
        integer_order(m, &x, work)?
    } else if x.to_f64() >= s.abs().to_f64() + 1.0 {
        legendre_cf(&s, &x, work)?
    } else {
        series_with_retry(&s, &x, work)?
    };
    Ok(out.with_prec(prec))
}

/// x^s e^{-x}
fn power_exp(s: &BigComplex, x: &Float) -> BigComplex {
    let p = s.prec().max(x.prec());
    let ln_x = Float::with_val(p, x.ln_ref());
    let w = s.scale(&ln_x).add_real(&Float::with_val(p, -x));
    w.exp()
}

fn legendre_cf(s: &BigComplex, x: &Float, prec: u32) -> Result<BigComplex> {
    // Γ(s,x) = x^s e^{-x} / (x+1-s - 1(1-s)/(x+3-s - 2(2-s)/(x+5-s - ...)))
    let one_minus_s = s.add_int(-1).mul_int(-1);
    let b0 = one_minus_s.add_real(x);
    let f = lentz(b0, prec, |n| {
        let n = n as i64;
        let an = s.add_int(-n).mul_int(n);
        let bn = one_minus_s.add_real(x).add_int(2 * n);
        (an, bn)
    })?;
    Ok(power_exp(s, x).div(&f))
}

/// γ(s,x) = x^s e^{-x} Σ_k x^k / (s(s+1)...(s+k)), together with the largest
/// partial-term magnitude seen.
fn lower_series(s: &BigComplex, x: &Float, prec: u32) -> (BigComplex, f64) {
    let tol = eps_bits(prec);
    let mut term = s.recip();
    let mut sum = term.clone();
    let mut peak = term.abs().to_f64();
    let stop_after = s.abs().to_f64() + x.to_f64();
    for k in 1..MAX_ITER {
        term = term.scale(x).div(&s.add_int(k as i64));
        sum = &sum + &term;
        let t = term.abs();
        peak = peak.max(t.to_f64());
        if k as f64 > stop_after && t < Float::with_val(prec, &tol * sum.abs()) {
            break;
        }
    }
    let pe = power_exp(s, x);
    let scale = pe.abs().to_f64();
    (&pe * &sum, peak * scale)
}

fn series_with_retry(s: &BigComplex, x: &Float, prec: u32) -> Result<BigComplex> {
    let mut guard = 32u32;
    loop {
        let work = prec + guard;
        let s_w = s.with_prec(work);
        let x_w = Float::with_val(work, x);
        let g = gamma_prec(&s_w, work)?;
        let (lower, peak) = lower_series(&s_w, &x_w, work);
        let out = &g - &lower;
        let big = peak.max(g.abs().to_f64()).max(f64::MIN_POSITIVE);
        let lost = (big / out.abs().to_f64().max(f64::MIN_POSITIVE)).log2().max(0.0);
        if (lost as u32) + 16 <= guard {
            return Ok(out.with_prec(prec));
        }
        if guard > 8 * prec {
            return Err(Error::PrecisionInsufficient(
                "incomplete gamma series cancels beyond recovery".into(),
            ));
        }
        guard = (lost as u32) + 48;
    }
}

/// E_1(x) = -γ - ln x - Σ_{k≥1} (-x)^k/(k k!) for x < 1, continued fraction otherwise.
fn e1(x: &Float, prec: u32) -> Result<BigComplex> {
    if *x >= 1 {
        return legendre_cf(&BigComplex::zero(prec), x, prec);
    }
    let tol = eps_bits(prec);
    let mut sum = Float::new(prec);
    let mut pw = Float::with_val(prec, 1);
    for k in 1..MAX_ITER {
        pw *= x;
        pw /= k as u32;
        pw = -pw;
        let term = Float::with_val(prec, &pw / k as u32);
        sum += &term;
        if term.abs() < tol {
            break;
        }
    }
    let euler = Float::with_val(prec, Constant::Euler);
    let v = -(euler + Float::with_val(prec, x.ln_ref()) + sum);
    Ok(BigComplex::real(v))
}

fn integer_order(m: i64, x: &Float, prec: u32) -> Result<BigComplex> {
    if m >= 1 {
        // Γ(m,x) = (m-1)! e^{-x} Σ_{k<m} x^k/k!
        let mut term = Float::with_val(prec, 1);
        let mut sum = term.clone();
        for k in 1..m {
            term *= x;
            term /= k as u32;
            sum += &term;
        }
        let fact = Float::with_val(prec, rug::Integer::from(rug::Integer::factorial((m - 1) as u32)));
        let v = sum * fact * Float::with_val(prec, (-x.clone()).exp_ref());
        return Ok(BigComplex::real(v));
    }
    // downward from Γ(0,x) = E_1(x): Γ(j-1,x) = (Γ(j,x) - x^{j-1} e^{-x})/(j-1);
    // each step cancels about log2(x) bits
    let out_prec = prec;
    let prec = prec + ((-m) as f64 * (x.to_f64().log2().max(0.0) + 2.0)).ceil() as u32;
    let x = &Float::with_val(prec, x);
    let mut v = e1(x, prec)?.re;
    let ex = Float::with_val(prec, (-x.clone()).exp_ref());
    let inv_x = Float::with_val(prec, 1) / x;
    let mut xp = Float::with_val(prec, 1);
    for j in (m + 1..=0).rev() {
        xp *= &inv_x;
        let t = Float::with_val(prec, &xp * &ex);
        v = (v - t) / (j - 1);
    }
    Ok(BigComplex::real(Float::with_val(out_prec, v)))
}

/// E_ν(z) = ∫_1^∞ e^{-zt} t^{-ν} dt for complex ν and real z > 0.
pub(crate) fn expint_e_prec(nu: &BigComplex, z: &Float, prec: u32) -> Result<BigComplex> {
    check_x(z)?;
    let work = prec + 24;
    let z = Float::with_val(work, z);
    let nu = nu.with_prec(work);
    if z >= 1 {
        // E_ν(z) = e^{-z} / (z+ν - 1·ν/(z+ν+2 - 2(ν+1)/(z+ν+4 - ...)))
        let b0 = nu.add_real(&z);
        let cf = lentz(b0, work, |i| {
            let i = i as i64;
            let ai = nu.add_int(i - 1).mul_int(-i);
            let bi = nu.add_real(&z).add_int(2 * i);
            (ai, bi)
        });
        if let Ok(f) = cf {
            let ez = BigComplex::real(Float::with_val(work, (-z.clone()).exp_ref()));
            return Ok(ez.div(&f).with_prec(prec));
        }
    }
    // z^{ν-1} Γ(1-ν, z)
    let one_minus_nu = &BigComplex::one(work) - &nu;
    let g = inc_gamma_upper_prec(&one_minus_nu, &z, work)?;
    let zp = BigComplex::real_pow(&z, &nu.add_int(-1));
    Ok((&zp * &g).with_prec(prec))
}
