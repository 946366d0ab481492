use rug::float::Constant;
use rug::Float;

use super::{bits_to_digits, eps_bits};
use crate::error::{Error, Result};

/// K_ν(x) for ν ∈ {0, 1} and real x > 0.
pub(crate) fn bessel_k_prec(order: u32, x: &Float, prec: u32) -> Result<Float> {
    if order > 1 {
        return Err(Error::Domain(format!("only K_0 and K_1 are provided, got order {order}")));
    }
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!("K_nu needs x > 0, got {}", x.to_f64())));
    }
    let digits = bits_to_digits(prec) as f64;
    let xf = x.to_f64();
    if 2.0 * xf > (digits + 2.0) * std::f64::consts::LN_10 {
        if let Some(v) = asymptotic(order, x, prec) {
            return Ok(v);
        }
    }
    Ok(ascending(order, x, prec))
}

/// √(π/2x) e^{-x} Σ a_k(ν)/x^k; `None` when the terms turn before reaching ε.
fn asymptotic(order: u32, x: &Float, prec: u32) -> Option<Float> {
    let work = prec + 16;
    let x = Float::with_val(work, x);
    let mu = 4 * order * order;
    let tol = eps_bits(work);
    let mut term = Float::with_val(work, 1);
    let mut sum = term.clone();
    let mut last = Float::with_val(work, 1);
    for k in 1u32..100_000 {
        let odd = (2 * k - 1) as i64;
        term *= mu as i64 - odd * odd;
        term /= Float::with_val(work, &x * (8 * k));
        let mag = Float::with_val(work, term.abs_ref());
        if mag > last {
            return None;
        }
        sum += &term;
        if mag < tol {
            let pi = Float::with_val(work, Constant::Pi);
            let pre = (pi / Float::with_val(work, &x * 2u32)).sqrt();
            let ex = Float::with_val(work, (-x.clone()).exp_ref());
            return Some(Float::with_val(prec, pre * ex * sum));
        }
        last = mag;
    }
    None
}

/// Ascending series; cancellation of ~2x/ln 10 digits is paid for up front.
fn ascending(order: u32, x: &Float, prec: u32) -> Float {
    let extra = (2.0 * x.to_f64() / std::f64::consts::LN_2).ceil() as u32 + 32;
    let work = prec + extra;
    let x = Float::with_val(work, x);
    let q = Float::with_val(work, x.square_ref()) / 4u32;
    let euler = Float::with_val(work, Constant::Euler);
    let ln_half_x = Float::with_val(work, Float::with_val(work, &x / 2u32).ln_ref());
    let tol = eps_bits(work);

    // t_k = q^k/(k!)^2, H_k harmonic numbers
    let mut t = Float::with_val(work, 1);
    let mut h = Float::new(work);
    let out = if order == 0 {
        let mut i0 = Float::new(work);
        let mut s = Float::new(work);
        let mut k = 0u32;
        loop {
            i0 += &t;
            s += Float::with_val(work, &h * &t);
            k += 1;
            t *= &q;
            t /= k * k;
            h += Float::with_val(work, 1) / k;
            if k as f64 > x.to_f64() && t < Float::with_val(work, &tol * &i0) {
                break;
            }
        }
        s - (ln_half_x + euler) * i0
    } else {
        // u_k = t_k/(k+1) gives I_1 = (x/2) Σ u_k
        let mut i1 = Float::new(work);
        let mut s = Float::new(work);
        let two_gamma = Float::with_val(work, &euler * 2u32);
        let mut k = 0u32;
        loop {
            let u = Float::with_val(work, &t / (k + 1));
            let h1 = Float::with_val(work, &h + Float::with_val(work, 1) / (k + 1));
            let w = Float::with_val(work, &h + &h1) - &two_gamma;
            s += w * &u;
            i1 += &u;
            k += 1;
            t *= &q;
            t /= k * k;
            h = h1;
            if k as f64 > x.to_f64() && t < Float::with_val(work, &tol * &i1) {
                break;
            }
        }
        let half_x = Float::with_val(work, &x / 2u32);
        let i1 = i1 * &half_x;
        let inv_x = Float::with_val(work, 1) / &x;
        inv_x + ln_half_x * i1 - s * half_x / 2u32
    };
    Float::with_val(prec, out)
}
