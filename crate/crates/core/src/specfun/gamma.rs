use rug::float::Constant;
use rug::Float;

use super::bernoulli::stirling_coeffs;
use super::{bits_to_digits, eps_bits};
use crate::complex::BigComplex;
use crate::error::{Error, Result};

/// Γ(z) at `prec` bits.
pub(crate) fn gamma_prec(z: &BigComplex, prec: u32) -> Result<BigComplex> {
    if let Some(k) = z.as_integer() {
        if k <= 0 {
            return Err(Error::Pole(format!("Gamma has a pole at {k}")));
        }
    }
    if z.is_real() {
        let v = Float::with_val(prec, z.re.gamma_ref());
        return Ok(BigComplex::real(v));
    }

    let digits = bits_to_digits(prec);
    let x0 = 0.4 * digits as f64 + 5.0;
    let mag = z.abs().to_f64() + x0;
    let work = prec + 32 + (2.0 * mag.log2()).ceil() as u32;
    let z = z.with_prec(work);

    let mut w = z.clone();
    let mut shift = 0u32;
    while w.re < 0.5 || w.abs().to_f64() < x0 {
        w = w.add_int(1);
        shift += 1;
    }

    let ln_g = ln_gamma_stirling(&w, work, digits);
    let mut g = ln_g.exp();
    if shift > 0 {
        let mut prod = z.clone();
        for j in 1..shift {
            prod = &prod * &z.add_int(j as i64);
        }
        g = g.div(&prod);
    }
    Ok(g.with_prec(prec))
}

/// Stirling series for ln Γ(w); `w` must be large with Re w > 0.
fn ln_gamma_stirling(w: &BigComplex, work: u32, digits: u32) -> BigComplex {
    let half = Float::with_val(work, 0.5);
    let ln_w = w.ln();
    let ln_2pi = Float::with_val(work, Float::with_val(work, Constant::Pi) * 2u32).ln();
    let mut acc = &(w.add_real(&-half.clone())) * &ln_w;
    acc = &acc - w;
    acc = acc.add_real(&(ln_2pi * &half));

    let coeffs = stirling_coeffs(work, (1.4 * digits as f64) as usize + 40);
    let inv = w.recip();
    let inv2 = &inv * &inv;
    let mut p = inv;
    let tol = eps_bits(work);
    for c in coeffs.iter().skip(1) {
        let term = p.scale(c);
        let small = term.abs() < tol;
        acc = &acc + &term;
        if small {
            break;
        }
        p = &p * &inv2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 300;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        ((a - b).abs() / b.abs()).to_f64()
    }

    #[test]
    fn real_values() {
        let g = gamma_prec(&c(1.0, 0.0), P).unwrap();
        assert_eq!(g.re, 1);
        let half = gamma_prec(&c(0.5, 0.0), P).unwrap();
        let sqrt_pi = Float::with_val(P, Constant::Pi).sqrt();
        assert!(rel(&half, &BigComplex::real(sqrt_pi)) < 1e-85);
    }

    #[test]
    fn poles() {
        assert!(matches!(gamma_prec(&c(0.0, 0.0), P), Err(Error::Pole(_))));
        assert!(matches!(gamma_prec(&c(-7.0, 0.0), P), Err(Error::Pole(_))));
    }

    #[test]
    fn recurrence_at_2_plus_3i() {
        let s = c(2.0, 3.0);
        let g = gamma_prec(&s, P).unwrap();
        let g1 = gamma_prec(&s.add_int(1), P).unwrap();
        assert!(rel(&g1, &(&s * &g)) < 1e-85);
    }

    #[test]
    fn complex_matches_reference() {
        // Γ(1+i) = 0.498015668118356042713691117462... - 0.154949828301810685124955130484...i
        let g = gamma_prec(&c(1.0, 1.0), P).unwrap();
        let want = BigComplex::new(
            Float::with_val(P, Float::parse("0.498015668118356042713691117462").unwrap()),
            Float::with_val(P, Float::parse("-0.154949828301810685124955130484").unwrap()),
        );
        assert!(rel(&g, &want) < 1e-29);
    }

    #[test]
    fn reflection_formula() {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let z = c(-3.3, 0.7);
        let one_minus = &BigComplex::one(P) - &z;
        let lhs = &gamma_prec(&z, P).unwrap() * &gamma_prec(&one_minus, P).unwrap();
        let pi = BigComplex::pi(P);
        let rhs = BigComplex::real(pi.clone()).div(&z.scale(&pi).sin());
        assert!(rel(&lhs, &rhs) < 1e-80);
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(0.25, -6.5);
        let a = gamma_prec(&z, P).unwrap();
        let b = gamma_prec(&z.conj(), P).unwrap();
        assert!(rel(&a.conj(), &b) < 1e-85);
    }
}
