use rug::Float;

use super::bernoulli::em_coeffs;
use super::{bits_to_digits, eps_bits};
use crate::complex::BigComplex;
use crate::error::{Error, Result};

/// Default Euler–Maclaurin cutoff for `s` at `prec` bits.
pub(crate) fn default_terms(s: &BigComplex, prec: u32) -> u64 {
    s.abs().to_f64().ceil() as u64 + bits_to_digits(prec) as u64 + 10
}

/// Pieces of Euler–Maclaurin with cutoff `n`:
/// ζ(s) = head + n^{1-s}/(s-1), where head = Σ_{k<n} k^{-s} + n^{-s}/2 + R.
fn em_parts(s: &BigComplex, n: u64, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let sigma = s.re.to_f64();
    let ln_n = (n as f64).log2();
    let guard = 24 + ln_n.ceil() as u32 + if sigma < 1.0 { ((1.0 - sigma) * ln_n).ceil() as u32 } else { 0 };
    let work = prec + guard;
    let s = s.with_prec(work);
    let neg_s = -s.clone();

    let mut head = BigComplex::zero(work);
    for k in 1..n {
        let term = BigComplex::real_pow(&Float::with_val(work, k), &neg_s);
        head = &head + &term;
    }
    let nf = Float::with_val(work, n);
    let n_neg_s = BigComplex::real_pow(&nf, &neg_s);
    head = &head + &n_neg_s.scale(&Float::with_val(work, 0.5));
    let n_one_minus_s = n_neg_s.scale(&nf);

    // R = Σ_k B_{2k}/(2k)! (s)_{2k-1} n^{-s-2k+1}
    let inv_n2 = Float::with_val(work, 1) / Float::with_val(work, nf.square_ref());
    let mut rising = s.clone();
    let mut pow = n_neg_s.scale(&Float::with_val(work, 1u32 / &nf));
    let digits = bits_to_digits(work) as usize;
    let coeffs = em_coeffs(work, digits + 20);
    let tol = eps_bits(work);
    let mut last = f64::INFINITY;
    let mut converged = false;
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let term = (&rising * &pow).scale(c);
        let size = term.abs().to_f64();
        if size > last {
            break;
        }
        head = &head + &term;
        last = size;
        if term.abs() < Float::with_val(work, &tol * head.abs().max(&Float::with_val(work, 1))) {
            converged = true;
            break;
        }
        let k2 = 2 * k as i64;
        rising = &(&rising * &s.add_int(k2 - 1)) * &s.add_int(k2);
        pow = pow.scale(&inv_n2);
    }
    if !converged {
        return Err(Error::PrecisionInsufficient(format!(
            "Euler-Maclaurin with {n} terms does not reach {prec} bits"
        )));
    }
    Ok((head, n_one_minus_s))
}

pub(crate) fn zeta_prec(s: &BigComplex, prec: u32) -> Result<BigComplex> {
    if s.is_real() {
        if s.re == 1 {
            return Err(Error::Pole("zeta has a pole at s = 1".into()));
        }
        return Ok(BigComplex::real(Float::with_val(prec, s.re.zeta_ref())));
    }
    zeta_with_terms_prec(s, default_terms(s, prec), prec)
}

/// ζ(s) with an explicit Euler–Maclaurin cutoff.
pub(crate) fn zeta_with_terms_prec(s: &BigComplex, n: u64, prec: u32) -> Result<BigComplex> {
    if s.is_real() && s.re == 1 {
        return Err(Error::Pole("zeta has a pole at s = 1".into()));
    }
    let (head, tail) = em_parts(s, n.max(2), prec)?;
    let sm1 = s.with_prec(head.prec()).add_int(-1);
    Ok((&head + &tail.div(&sm1)).with_prec(prec))
}

/// (s-1)ζ(s), entire, equal to 1 at s = 1.
pub(crate) fn zeta_times_s_minus_1_prec(s: &BigComplex, prec: u32) -> Result<BigComplex> {
    if s.is_real() {
        if s.re == 1 {
            return Ok(BigComplex::one(prec));
        }
        let z = Float::with_val(prec + 16, s.re.zeta_ref());
        let sm1 = Float::with_val(prec + 16, &s.re - 1u32);
        return Ok(BigComplex::real(Float::with_val(prec, z * sm1)));
    }
    let (head, tail) = em_parts(s, default_terms(s, prec), prec)?;
    let sm1 = s.with_prec(head.prec()).add_int(-1);
    Ok((&(&head * &sm1) + &tail).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    const P: u32 = 260;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        ((a - b).abs() / b.abs()).to_f64()
    }

    #[test]
    fn special_values() {
        let z2 = zeta_prec(&c(2.0, 0.0), P).unwrap();
        let pi = Float::with_val(P, Constant::Pi);
        let want = Float::with_val(P, pi.square_ref()) / 6u32;
        assert!(rel(&z2, &BigComplex::real(want)) < 1e-75);
        let zm1 = zeta_prec(&c(-1.0, 0.0), P).unwrap();
        let want = Float::with_val(P, -1) / 12u32;
        assert!(rel(&zm1, &BigComplex::real(want)) < 1e-75);
        assert!(matches!(zeta_prec(&c(1.0, 0.0), P), Err(Error::Pole(_))));
    }

    #[test]
    fn complex_path_matches_real_path() {
        // force the Euler–Maclaurin path at a real point
        let s = c(2.0, 0.0);
        let em = zeta_with_terms_prec(&s, 90, P).unwrap();
        let direct = zeta_prec(&s, P).unwrap();
        assert!(rel(&em, &direct) < 1e-70);
        let s = c(-3.5, 0.0);
        let em = zeta_with_terms_prec(&s, 90, P).unwrap();
        assert!(rel(&em, &zeta_prec(&s, P).unwrap()) < 1e-70);
    }

    #[test]
    fn two_resolution_agreement() {
        let s = c(3.0, 2.0);
        let n = default_terms(&s, P);
        let a = zeta_with_terms_prec(&s, n, P).unwrap();
        let b = zeta_with_terms_prec(&s, 2 * n, P).unwrap();
        assert!(rel(&a, &b) < 1e-75);
    }

    #[test]
    fn first_nontrivial_zero() {
        let rho = BigComplex::new(
            Float::with_val(P, 0.5),
            Float::with_val(P, Float::parse("14.134725141734693790457251983562470270784257115699").unwrap()),
        );
        assert!(zeta_prec(&rho, P).unwrap().abs() < 1e-45);
    }

    #[test]
    fn times_s_minus_one_near_pole() {
        let one = zeta_times_s_minus_1_prec(&c(1.0, 0.0), P).unwrap();
        assert_eq!(one.re, 1);
        // (s-1)ζ(s) = 1 + γ(s-1) + O((s-1)^2)
        let h = Float::with_val(P, 1e-20);
        let s = BigComplex::new(Float::with_val(P, 1), h.clone());
        let v = zeta_times_s_minus_1_prec(&s, P).unwrap();
        let gamma = Float::with_val(P, Constant::Euler);
        let want = BigComplex::new(Float::with_val(P, 1), gamma * &h);
        assert!((&v - &want).abs() < 1e-38);
    }
}
