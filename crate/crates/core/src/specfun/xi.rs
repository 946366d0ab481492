use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::gamma::gamma_prec;
use super::zeta::zeta_times_s_minus_1_prec;
use crate::complex::BigComplex;
use crate::error::{Error, Result};

fn pi_pow(w: &BigComplex, prec: u32) -> BigComplex {
    BigComplex::real_pow(&Float::with_val(prec, Constant::Pi), w)
}

/// π^{-s/2} Γ(s/2 + 1).
fn gamma_factor(s: &BigComplex, prec: u32) -> Result<BigComplex> {
    let half = Float::with_val(prec, 0.5);
    let hs = s.scale(&half);
    let g = gamma_prec(&hs.add_int(1), prec)?;
    Ok(&pi_pow(&-hs, prec) * &g)
}

/// g(s) = π^{-s/2}(s-1)Γ(s/2+1).
pub(crate) fn g_prec(s: &BigComplex, prec: u32) -> Result<BigComplex> {
    let work = prec + 16;
    let s = s.with_prec(work);
    let f = gamma_factor(&s, work).map_err(|_| {
        Error::Pole(format!("g(s) has a pole at s = {}", s.re.to_f64()))
    })?;
    Ok((&f * &s.add_int(-1)).with_prec(prec))
}

/// ξ(s) = g(s)ζ(s), evaluated as π^{-s/2}Γ(s/2+1)·[(s-1)ζ(s)].
pub(crate) fn xi_prec(s: &BigComplex, prec: u32) -> Result<BigComplex> {
    let work = prec + 16;
    let s = s.with_prec(work);
    let hs1 = s.scale(&Float::with_val(work, 0.5)).add_int(1);
    if matches!(hs1.as_integer(), Some(k) if k <= 0) {
        // trivial zero of ζ against a Γ pole: use the reflected point
        let r = &BigComplex::one(work) - &s;
        return xi_prec(&r, prec);
    }
    let f = gamma_factor(&s, work)?;
    let z = zeta_times_s_minus_1_prec(&s, work)?;
    Ok((&f * &z).with_prec(prec))
}

/// g(s)·g(s-a) by direct multiplication; any complex `a`.
pub(crate) fn g_pair_prec(a: &BigComplex, s: &BigComplex, prec: u32) -> Result<BigComplex> {
    let g1 = g_prec(s, prec + 8)?;
    let g2 = g_prec(&(s - a), prec + 8)?;
    Ok((&g1 * &g2).with_prec(prec))
}

/// Poles of g(s)g(s-a) for odd a: negative integers and odd l with 3 <= l <= a-2.
pub(crate) fn gg_pole(a: u32, s: &BigComplex) -> Option<i64> {
    let k = s.as_integer()?;
    if k < 0 || (k % 2 == 1 && k >= 3 && k <= a as i64 - 2) {
        Some(k)
    } else {
        None
    }
}

/// g(s)g(s-a) for odd a through the duplication formula:
/// 2^{(a-1)/2-s} π^{(a+1)/2-s} (s-a)(s-a-1) Γ(s+1) / Π_{j=1}^{(a-1)/2} (s-2j-1).
pub(crate) fn gg_product_prec(a: u32, s: &BigComplex, prec: u32) -> Result<BigComplex> {
    if a % 2 == 0 {
        return Err(Error::Spec(format!("duplication form needs odd a, got {a}")));
    }
    if let Some(k) = gg_pole(a, s) {
        return Err(Error::Pole(format!("g(s)g(s-{a}) has a pole at s = {k}")));
    }
    let work = prec + 16;
    let s = s.with_prec(work);
    let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
    let pi = Float::with_val(work, Constant::Pi);
    let pre = Float::with_val(work, 1u32 << ((a - 1) / 2)) * pi.pow((a + 1) / 2);
    let mut v = BigComplex::real_pow(&two_pi, &-s.clone()).scale(&pre);
    v = &v * &gamma_prec(&s.add_int(1), work)?;
    v = &v * &s.add_int(-(a as i64) - 1);
    if a == 1 {
        v = &v * &s.add_int(-1);
    }
    // (s-a) cancels the j = (a-1)/2 factor
    for j in 1..(a as i64 - 1) / 2 {
        v = v.div(&s.add_int(-2 * j - 1));
    }
    Ok(v.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 260;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1.0)
    }

    #[test]
    fn g_values() {
        assert!(g_prec(&c(1.0, 0.0), P).unwrap().is_zero());
        let g0 = g_prec(&c(0.0, 0.0), P).unwrap();
        assert!(close(&g0, &c(-1.0, 0.0), 1e-70));
        let g2 = g_prec(&c(2.0, 0.0), P).unwrap();
        let inv_pi = Float::with_val(P, 1) / BigComplex::pi(P);
        assert!(close(&g2, &BigComplex::real(inv_pi), 1e-70));
        assert!(matches!(g_prec(&c(-4.0, 0.0), P), Err(Error::Pole(_))));
    }

    #[test]
    fn xi_values() {
        let half = BigComplex::real(Float::with_val(P, 0.5));
        assert!(close(&xi_prec(&c(0.0, 0.0), P).unwrap(), &half, 1e-70));
        assert!(close(&xi_prec(&c(1.0, 0.0), P).unwrap(), &half, 1e-70));
        let pi6 = BigComplex::real(BigComplex::pi(P) / 6u32);
        assert!(close(&xi_prec(&c(2.0, 0.0), P).unwrap(), &pi6, 1e-70));
        // trivial-zero points stay finite
        let v = xi_prec(&c(-4.0, 0.0), P).unwrap();
        assert!(close(&v, &xi_prec(&c(5.0, 0.0), P).unwrap(), 1e-70));
    }

    #[test]
    fn xi_symmetry() {
        let s = c(0.3, 4.0);
        let r = &BigComplex::one(P) - &s;
        assert!(close(&xi_prec(&s, P).unwrap(), &xi_prec(&r, P).unwrap(), 1e-60));
    }

    #[test]
    fn duplication_matches_direct() {
        for a in [1u32, 3, 5, 7, 9] {
            let s = c(2.0, 1.0);
            let a_c = BigComplex::from_int(P, a as i64);
            let direct = g_pair_prec(&a_c, &s, P).unwrap();
            let dup = gg_product_prec(a, &s, P).unwrap();
            assert!(close(&dup, &direct, 1e-70), "a = {a}");
        }
    }

    #[test]
    fn duplication_poles_and_zeros() {
        assert!(matches!(gg_product_prec(5, &c(3.0, 0.0), P), Err(Error::Pole(_))));
        assert!(matches!(gg_product_prec(1, &c(-2.0, 0.0), P), Err(Error::Pole(_))));
        assert!(gg_product_prec(1, &c(2.0, 0.0), P).unwrap().is_zero());
        assert!(gg_product_prec(5, &c(5.0, 0.0), P).is_ok());
    }
}
