//! Summation kernels multiplying σ_a(n) in the exponential-sum identities.
//!
//! Constraint kernels P_k^{(a)}(x), x = 2πn, are kept as exact rational
//! coefficient vectors and evaluated by Horner with a cancellation guard.
//! The remaining families are fixed polynomials in πn divided by powers of
//! n and π.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::specfun::{bessel_k_prec, hyp1f1_coeffs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Polynomial form of the constraint family (target 0).
    Constraint,
    /// The same family written with terminating ₁F₁ functions.
    ConstraintHypergeometric,
    /// Positive kernels with targets 1/24, 1/240, 1/504.
    Cor3,
    HigherHomogeneous,
    HigherInhomogeneous,
    /// Weight-1 Bessel kernel for σ_0.
    BesselA0,
    /// P_k(2πn)/(P_k(2π)e^{-2π}), the recovery-matrix entries.
    NormalizedQ,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Constraint => "constraint",
            Variant::ConstraintHypergeometric => "constraint-1f1",
            Variant::Cor3 => "cor3",
            Variant::HigherHomogeneous => "higher-homogeneous",
            Variant::HigherInhomogeneous => "higher-inhomogeneous",
            Variant::BesselA0 => "bessel0",
            Variant::NormalizedQ => "normalized-q",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "constraint" | "poly" => Variant::Constraint,
            "constraint-1f1" | "1f1" | "hypergeometric" => Variant::ConstraintHypergeometric,
            "cor3" => Variant::Cor3,
            "higher-homogeneous" | "homogeneous" => Variant::HigherHomogeneous,
            "higher-inhomogeneous" | "inhomogeneous" => Variant::HigherInhomogeneous,
            "bessel0" | "bessel" => Variant::BesselA0,
            "normalized-q" | "q" => Variant::NormalizedQ,
            _ => return None,
        })
    }

    fn needs_k(self) -> bool {
        matches!(
            self,
            Variant::Constraint | Variant::ConstraintHypergeometric | Variant::NormalizedQ
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One summation kernel: exponent `a`, optional constraint index `k`, family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    a: u32,
    k: Option<u32>,
    variant: Variant,
}

impl KernelSpec {
    pub fn new(a: u32, k: Option<u32>, variant: Variant) -> Result<Self> {
        let a_ok = match variant {
            Variant::Constraint
            | Variant::ConstraintHypergeometric
            | Variant::Cor3
            | Variant::NormalizedQ => matches!(a, 1 | 3 | 5),
            Variant::HigherHomogeneous | Variant::HigherInhomogeneous => matches!(a, 7 | 9 | 11),
            Variant::BesselA0 => a == 0,
        };
        if !a_ok {
            return Err(Error::Spec(format!("{variant} kernel is not defined for a = {a}")));
        }
        match (variant.needs_k(), k) {
            (true, None) => Err(Error::Spec(format!("{variant} kernel needs an index k"))),
            (false, Some(_)) => Err(Error::Spec(format!("{variant} kernel takes no index k"))),
            _ => Ok(Self { a, k, variant }),
        }
    }

    pub fn constraint(a: u32, k: u32) -> Result<Self> {
        Self::new(a, Some(k), Variant::Constraint)
    }

    pub fn constraint_1f1(a: u32, k: u32) -> Result<Self> {
        Self::new(a, Some(k), Variant::ConstraintHypergeometric)
    }

    pub fn cor3(a: u32) -> Result<Self> {
        Self::new(a, None, Variant::Cor3)
    }

    pub fn higher_homogeneous(a: u32) -> Result<Self> {
        Self::new(a, None, Variant::HigherHomogeneous)
    }

    pub fn higher_inhomogeneous(a: u32) -> Result<Self> {
        Self::new(a, None, Variant::HigherInhomogeneous)
    }

    pub fn bessel_a0() -> Self {
        Self {
            a: 0,
            k: None,
            variant: Variant::BesselA0,
        }
    }

    pub fn normalized_q(a: u32, k: u32) -> Result<Self> {
        Self::new(a, Some(k), Variant::NormalizedQ)
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Stable identifier, e.g. `constraint/a=3/k=2`.
    pub fn id(&self) -> String {
        match self.k {
            Some(k) => format!("{}/a={}/k={}", self.variant, self.a, k),
            None => format!("{}/a={}", self.variant, self.a),
        }
    }

    /// Exact value of the infinite sum Σ_{n≥1} σ_a(n)·kernel(n)·weight(n).
    pub fn target(&self) -> Rational {
        match (self.variant, self.a) {
            (Variant::Cor3, 1) => Rational::from((1, 24)),
            (Variant::Cor3, 3) => Rational::from((1, 240)),
            (Variant::Cor3, 5) => Rational::from((1, 504)),
            (Variant::HigherInhomogeneous, 7) => Rational::from((1, 225)),
            (Variant::HigherInhomogeneous, 9) => Rational::from((4, 693)),
            (Variant::HigherInhomogeneous, 11) => Rational::from((11056, 1289925)),
            _ => Rational::new(),
        }
    }

    /// Whether the summand carries an explicit e^{-2πn} weight.
    pub fn has_exp_weight(&self) -> bool {
        self.variant != Variant::BesselA0
    }

    /// kernel(n) without the weight.
    pub fn kernel(&self, n: u64, ctx: &PrecisionContext) -> Result<Float> {
        self.kernel_prec(n, ctx.prec())
    }

    pub(crate) fn kernel_prec(&self, n: u64, prec: u32) -> Result<Float> {
        if n == 0 {
            return Err(Error::Domain("kernels are indexed from n = 1".into()));
        }
        let x = two_pi_n(n, prec + 32);
        let k = self.k.unwrap_or(0);
        let v = match self.variant {
            Variant::Constraint => poly_at(&constraint_coeffs(self.a, k)?, &x, prec),
            Variant::ConstraintHypergeometric => hypergeometric_form(self.a, k, &x, prec)?,
            Variant::NormalizedQ => {
                let p = poly_at(&constraint_coeffs(self.a, k)?, &x, prec + 16);
                let p1 = poly_at(&constraint_coeffs(self.a, k)?, &two_pi_n(1, prec + 32), prec + 16);
                p / p1 * two_pi_n(1, prec + 16).exp()
            }
            Variant::Cor3 | Variant::HigherHomogeneous | Variant::HigherInhomogeneous => {
                rational_family(self.a, self.variant).eval(n, prec)
            }
            Variant::BesselA0 => bessel_a0_prec(n, prec)?,
        };
        Ok(Float::with_val(prec, v))
    }

    /// kernel(n)·weight(n): the factor multiplying σ_a(n).
    pub(crate) fn term_factor_prec(&self, n: u64, prec: u32) -> Result<Float> {
        let k = self.kernel_prec(n, prec + 8)?;
        let v = if self.has_exp_weight() {
            let w = Float::with_val(prec + 8, (-two_pi_n(n, prec + 8)).exp_ref());
            k * w
        } else {
            k
        };
        Ok(Float::with_val(prec, v))
    }

    /// |kernel(n)| ≤ coeff · n^degree for every n ≥ 1.
    pub fn majorant(&self) -> Result<Majorant> {
        let k = self.k.unwrap_or(0);
        Ok(match self.variant {
            Variant::Constraint => poly_majorant(&constraint_coeffs(self.a, k)?),
            Variant::ConstraintHypergeometric => {
                let m = poly_majorant(&constraint_coeffs(self.a, k)?);
                let r = normalization(self.a, k)?;
                Majorant {
                    ln_coeff: m.ln_coeff + Float::with_val(64, &r).abs().ln().to_f64(),
                    degree: m.degree,
                }
            }
            Variant::NormalizedQ => {
                // coefficients divided by P_k(2π)e^{-2π}; the e^{2π} goes into the coefficient
                let c = constraint_coeffs(self.a, k)?;
                let m = poly_majorant(&c);
                let p1 = poly_at(&c, &two_pi_n(1, 256), 256).abs();
                let ln_p1 = p1.ln().to_f64();
                Majorant {
                    ln_coeff: m.ln_coeff - ln_p1 + 2.0 * std::f64::consts::PI,
                    degree: m.degree,
                }
            }
            Variant::Cor3 | Variant::HigherHomogeneous | Variant::HigherInhomogeneous => {
                rational_family(self.a, self.variant).majorant()
            }
            Variant::BesselA0 => {
                // K_0(x) ≤ √(π/2x)e^{-x}, K_1(x) ≤ √(π/2x)e^{-x}(1+1/x), x = 2πn:
                // |kernel| ≤ ½[(84π²+45) + 16π(π²+6)(1+1/2π)] n^{9/2} e^{-2πn}
                let pi = std::f64::consts::PI;
                let c = 0.5 * ((84.0 * pi * pi + 45.0) + 16.0 * pi * (pi * pi + 6.0) * (1.0 + 0.5 / pi));
                Majorant {
                    ln_coeff: c.ln(),
                    degree: 4.5,
                }
            }
        })
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Kernel size bound |kernel(n)| ≤ e^{ln_coeff} n^{degree}, decay factor excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant {
    pub ln_coeff: f64,
    pub degree: f64,
}

pub(crate) fn two_pi_n(n: u64, prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi) * 2u32 * n
}

type CoeffMap = Mutex<HashMap<(u32, u32), Arc<Vec<Rational>>>>;

fn coeff_cache() -> &'static CoeffMap {
    static C: OnceLock<CoeffMap> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Coefficients of P_k^{(a)}(x) by power of x (index 0 = constant term).
pub fn constraint_coeffs(a: u32, k: u32) -> Result<Arc<Vec<Rational>>> {
    if !matches!(a, 1 | 3 | 5) {
        return Err(Error::Spec(format!("constraint kernels need a in {{1,3,5}}, got {a}")));
    }
    if let Some(c) = coeff_cache().lock().unwrap().get(&(a, k)) {
        return Ok(c.clone());
    }
    // terms (-1)^j w_j x^{k+j+1} / (j! (k-j+s)! (k+j+t)!) for j = 0..=k+s
    let (s, t) = match a {
        1 => (3, 1),
        3 => (2, 4),
        _ => (1, 6),
    };
    let top = k + s;
    let mut c = vec![Rational::new(); (k + top + 2) as usize];
    for j in 0..=top {
        let w = match a {
            1 => k + j + 3,
            3 => k + j + 2,
            _ => 1,
        };
        let den = factorial(j) * factorial(k + s - j) * factorial(k + j + t);
        let mut r = Rational::from((Integer::from(w), den));
        if j % 2 == 1 {
            r = -r;
        }
        c[(k + j + 1) as usize] = r;
    }
    let c = Arc::new(c);
    coeff_cache().lock().unwrap().insert((a, k), c.clone());
    Ok(c)
}

/// Exact coefficients of the ₁F₁ form of the constraint kernel.
pub fn hypergeometric_coeffs(a: u32, k: u32) -> Result<Vec<Rational>> {
    let (m1, b1, m2, b2, div) = match a {
        1 => (k + 3, k + 2, Some(k + 2), k + 3, k + 2),
        3 => (k + 2, k + 5, Some(k + 1), k + 6, k + 5),
        5 => (k + 1, k + 7, None, 0, 1),
        _ => return Err(Error::Spec(format!("constraint kernels need a in {{1,3,5}}, got {a}"))),
    };
    let f1 = hyp1f1_coeffs(m1, b1)?;
    let mut out = vec![Rational::new(); (2 * k + 6) as usize];
    for (j, c) in f1.iter().enumerate() {
        out[j + k as usize + 1] += c;
    }
    if let Some(m2) = m2 {
        for (j, c) in hyp1f1_coeffs(m2, b2)?.iter().enumerate() {
            out[j + k as usize + 2] -= Rational::from(c / Integer::from(div));
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| *c == 0) {
        out.pop();
    }
    Ok(out)
}

/// The constant r with ₁F₁-form = r · P_k^{(a)}, from exact coefficient
/// comparison. Non-proportional forms are reported as [`Error::Errata`].
pub fn normalization(a: u32, k: u32) -> Result<Rational> {
    let p = constraint_coeffs(a, k)?;
    let h = hypergeometric_coeffs(a, k)?;
    let mut ratio: Option<Rational> = None;
    for i in 0..p.len().max(h.len()) {
        let pc = p.get(i).cloned().unwrap_or_default();
        let hc = h.get(i).cloned().unwrap_or_default();
        match (pc == 0, hc == 0) {
            (true, true) => continue,
            (true, false) | (false, true) => {
                return Err(Error::Errata(format!(
                    "a = {a}, k = {k}: forms differ in support at x^{i}"
                )))
            }
            _ => {}
        }
        let r = Rational::from(&hc / &pc);
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev != r => {
                return Err(Error::Errata(format!(
                    "a = {a}, k = {k}: coefficient ratio {r} at x^{i} differs from {prev}"
                )))
            }
            _ => {}
        }
    }
    ratio.ok_or_else(|| Error::Errata(format!("a = {a}, k = {k}: empty kernel")))
}

/// Horner with a retry when the alternating sum cancels more than the guard.
pub(crate) fn poly_at(coeffs: &[Rational], x: &Float, prec: u32) -> Float {
    let abs_sum = {
        let xa = Float::with_val(64, x.abs_ref());
        let mut acc = Float::new(64);
        for c in coeffs.iter().rev() {
            acc *= &xa;
            acc += Float::with_val(64, c).abs();
        }
        acc
    };
    let mut guard = 32u32;
    loop {
        let work = prec + guard;
        let xw = Float::with_val(work, x);
        let mut acc = Float::new(work);
        for c in coeffs.iter().rev() {
            acc *= &xw;
            acc += Float::with_val(work, c);
        }
        if acc.is_zero() {
            if guard > 4 * prec {
                return Float::with_val(prec, acc);
            }
            guard *= 2;
            continue;
        }
        let lost = (crate::precision::log10_abs(&abs_sum) - crate::precision::log10_abs(&acc))
            * std::f64::consts::LOG2_10;
        if lost < (guard as f64) - 16.0 {
            return Float::with_val(prec, acc);
        }
        guard = lost.ceil() as u32 + 48;
    }
}

fn poly_majorant(coeffs: &[Rational]) -> Majorant {
    // Σ|c_i|(2π)^i n^i ≤ (Σ|c_i|(2π)^i) n^deg for n ≥ 1
    let x = two_pi_n(1, 128);
    let mut acc = Float::new(128);
    for c in coeffs.iter().rev() {
        acc *= &x;
        acc += Float::with_val(128, c).abs();
    }
    let deg = coeffs.iter().rposition(|c| *c != 0).unwrap_or(0);
    Majorant {
        ln_coeff: acc.ln().to_f64() * (1.0 + 1e-12),
        degree: deg as f64,
    }
}

fn hypergeometric_form(a: u32, k: u32, x: &Float, prec: u32) -> Result<Float> {
    let work = prec + 16;
    let pk1 = Float::with_val(work, x.pow(k + 1));
    let v = match a {
        1 => {
            let f1 = poly_at(&hyp1f1_coeffs(k + 3, k + 2)?, x, work);
            let f2 = poly_at(&hyp1f1_coeffs(k + 2, k + 3)?, x, work);
            let t2 = Float::with_val(work, &pk1 * x) * f2 / (k + 2);
            pk1 * f1 - t2
        }
        3 => {
            let f1 = poly_at(&hyp1f1_coeffs(k + 2, k + 5)?, x, work);
            let f2 = poly_at(&hyp1f1_coeffs(k + 1, k + 6)?, x, work);
            let t2 = Float::with_val(work, &pk1 * x) * f2 / (k + 5);
            pk1 * f1 - t2
        }
        5 => pk1 * poly_at(&hyp1f1_coeffs(k + 1, k + 7)?, x, work),
        _ => return Err(Error::Spec(format!("constraint kernels need a in {{1,3,5}}, got {a}"))),
    };
    Ok(Float::with_val(prec, v))
}

/// Σ_i c_i (πn)^i / (n^p π^q).
#[derive(Debug, Clone, Copy)]
struct RationalFamily {
    /// coefficients by ascending power of πn
    coeffs: &'static [i64],
    n_div: u32,
    pi_div: u32,
}

impl RationalFamily {
    fn eval(&self, n: u64, prec: u32) -> Float {
        let work = prec + 32;
        let pi = Float::with_val(work, Constant::Pi);
        let y = Float::with_val(work, &pi * n);
        let mut acc = Float::new(work);
        for &c in self.coeffs.iter().rev() {
            acc *= &y;
            acc += c;
        }
        let nd = Float::with_val(work, n).pow(self.n_div);
        let pd = pi.pow(self.pi_div);
        Float::with_val(prec, acc / nd / pd)
    }

    fn majorant(&self) -> Majorant {
        let pi = std::f64::consts::PI;
        let top = self.coeffs.len() - 1;
        let c: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (c.unsigned_abs() as f64) * pi.powi(i as i32 - self.pi_div as i32))
            .sum();
        Majorant {
            ln_coeff: c.ln() * (1.0 + 1e-12) + 1e-12,
            degree: top as f64 - self.n_div as f64,
        }
    }
}

fn rational_family(a: u32, variant: Variant) -> RationalFamily {
    const COR3_1: [i64; 3] = [1, -6, 4];
    const COR3_3: [i64; 2] = [-1, 1];
    const COR3_5: [i64; 1] = [1];
    const HOM_7: [i64; 7] = [-45, -90, -105, -90, -60, -32, 16];
    const HOM_9: [i64; 8] = [-945, -1890, -1890, -1260, -588, -168, 0, 32];
    const HOM_11: [i64; 9] = [-17010, -34020, -32445, -19530, -7980, -2016, -96, 160, 64];
    const INH_7: [i64; 5] = [3, 6, 7, 6, 4];
    const INH_9: [i64; 6] = [45, 90, 90, 60, 28, 8];
    const INH_11: [i64; 7] = [630, 1260, 1215, 750, 324, 96, 16];
    let (coeffs, n_div, pi_div): (&'static [i64], u32, u32) = match (variant, a) {
        (Variant::Cor3, 1) => (&COR3_1, 0, 0),
        (Variant::Cor3, 3) => (&COR3_3, 0, 0),
        (Variant::Cor3, _) => (&COR3_5, 0, 0),
        (Variant::HigherHomogeneous, 7) => (&HOM_7, 5, 0),
        (Variant::HigherHomogeneous, 9) => (&HOM_9, 7, 0),
        (Variant::HigherHomogeneous, _) => (&HOM_11, 9, 0),
        (Variant::HigherInhomogeneous, 7) => (&INH_7, 5, 5),
        (Variant::HigherInhomogeneous, 9) => (&INH_9, 7, 7),
        _ => (&INH_11, 9, 9),
    };
    RationalFamily {
        coeffs,
        n_div,
        pi_div,
    }
}

fn bessel_a0_prec(n: u64, prec: u32) -> Result<Float> {
    let work = prec + 32;
    let x = two_pi_n(n, work);
    let pi = Float::with_val(work, Constant::Pi);
    let pn = Float::with_val(work, &pi * n);
    let pn2 = Float::with_val(work, pn.square_ref());
    let k0 = bessel_k_prec(0, &x, work)?;
    let k1 = bessel_k_prec(1, &x, work)?;
    let a = (Float::with_val(work, &pn2 * 84u32) + 45u32) * k0;
    let b = pn * 16u32 * (pn2 + 6u32) * k1;
    let n2 = Float::with_val(work, n) * n;
    Ok(Float::with_val(prec, (a - b) * n2))
}

/// P_k^{(a)}(2πn), polynomial form, without the e^{-2πn} factor.
pub fn constraint_kernel_poly(a: u32, k: u32, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    KernelSpec::constraint(a, k)?.kernel(n, ctx)
}

/// P_k^{(a)} at an arbitrary real point, for plotting.
pub fn constraint_poly_at(a: u32, k: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    Ok(poly_at(&constraint_coeffs(a, k)?, x, ctx.prec()))
}

/// The ₁F₁ combination of the constraint family at x = 2πn.
pub fn constraint_kernel_1f1(a: u32, k: u32, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    KernelSpec::constraint_1f1(a, k)?.kernel(n, ctx)
}

pub fn cor3_kernel(a: u32, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    KernelSpec::cor3(a)?.kernel(n, ctx)
}

pub fn higher_a_kernel(a: u32, variant: Variant, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    if !matches!(variant, Variant::HigherHomogeneous | Variant::HigherInhomogeneous) {
        return Err(Error::Spec(format!("{variant} is not a higher-a family")));
    }
    KernelSpec::new(a, None, variant)?.kernel(n, ctx)
}

/// n²[(84π²n²+45)K_0(2πn) − 16πn(π²n²+6)K_1(2πn)].
pub fn bessel_kernel_a0(n: u64, ctx: &PrecisionContext) -> Result<Float> {
    KernelSpec::bessel_a0().kernel(n, ctx)
}

/// Q_k(2πn)e^{-2πn} = P_k(2πn)e^{-2πn}/(P_k(2π)e^{-2π}), weight included.
#[allow(non_snake_case)]
pub fn normalized_Q(a: u32, k: u32, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    KernelSpec::normalized_q(a, k)?.term_factor_prec(n, ctx.prec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs().to_f64();
        d <= tol * b.to_f64().abs().max(1e-300)
    }

    #[test]
    fn spec_validation() {
        assert!(KernelSpec::constraint(2, 0).is_err());
        assert!(KernelSpec::new(1, None, Variant::Constraint).is_err());
        assert!(KernelSpec::new(5, Some(1), Variant::Cor3).is_err());
        assert!(KernelSpec::higher_homogeneous(5).is_err());
        assert!(KernelSpec::new(1, None, Variant::BesselA0).is_err());
        assert!(KernelSpec::normalized_q(3, 4).is_ok());
        assert_eq!(KernelSpec::constraint(3, 2).unwrap().id(), "constraint/a=3/k=2");
    }

    #[test]
    fn a5_k0_is_x_times_7_minus_x() {
        let c = constraint_coeffs(5, 0).unwrap();
        assert_eq!(
            c.as_slice(),
            &[Rational::new(), Rational::from((1, 720)), Rational::from((-1, 5040))]
        );
    }

    #[test]
    fn k0_reductions() {
        // a=1: P_0 = -(π/3) n (2π³n³ − 10π²n² + 12πn − 3)
        // a=3: P_0 = (π/180) n (4π²n² − 18πn + 15)
        let ctx = ctx();
        let pi = ctx.pi();
        for n in 1..6u64 {
            let pn = Float::with_val(ctx.prec(), &pi * n);
            let p1 = constraint_kernel_poly(1, 0, n, &ctx).unwrap();
            let cubic = Float::with_val(ctx.prec(), (&pn).pow(3)) * 2u32
                - Float::with_val(ctx.prec(), pn.square_ref()) * 10u32
                + Float::with_val(ctx.prec(), &pn * 12u32)
                - 3u32;
            let want = -Float::with_val(ctx.prec(), &pi / 3u32) * n * cubic;
            assert!(close(&p1, &want, 1e-55), "a=1 n={n}");
            let p3 = constraint_kernel_poly(3, 0, n, &ctx).unwrap();
            let quad = Float::with_val(ctx.prec(), pn.square_ref()) * 4u32
                - Float::with_val(ctx.prec(), &pn * 18u32)
                + 15u32;
            let want = Float::with_val(ctx.prec(), &pi / 180u32) * n * quad;
            assert!(close(&p3, &want, 1e-55), "a=3 n={n}");
        }
    }

    #[test]
    fn normalization_is_factorial_product() {
        let f = |n: u32| Integer::from(Integer::factorial(n));
        for k in 0..15u32 {
            assert_eq!(normalization(1, k).unwrap(), f(k + 1) * f(k + 2));
            assert_eq!(normalization(3, k).unwrap(), f(k + 1) * f(k + 4));
            assert_eq!(normalization(5, k).unwrap(), f(k + 1) * f(k + 6));
        }
    }

    #[test]
    fn hypergeometric_matches_scaled_poly() {
        let ctx = ctx();
        for (a, k, n) in [(5u32, 0u32, 1u64), (1, 2, 3), (3, 1, 2), (1, 12, 20), (5, 9, 7)] {
            let h = constraint_kernel_1f1(a, k, n, &ctx).unwrap();
            let p = constraint_kernel_poly(a, k, n, &ctx).unwrap();
            let r = Float::with_val(ctx.prec(), &normalization(a, k).unwrap());
            assert!(close(&h, &(p * r), 1e-55), "a={a} k={k} n={n}");
        }
        // a=5, k=0, n=1: 2π(7 − 2π)/7
        let h = constraint_kernel_1f1(5, 0, 1, &ctx).unwrap();
        let x = two_pi_n(1, ctx.prec());
        let want = Float::with_val(ctx.prec(), &x * (7u32 - x.clone())) / 7u32;
        assert!(close(&h, &want, 1e-55));
    }

    #[test]
    fn degrees_and_lowest_monomial() {
        for k in 0..10u32 {
            for (a, deg) in [(1u32, 2 * k + 4), (3, 2 * k + 3), (5, 2 * k + 2)] {
                let c = constraint_coeffs(a, k).unwrap();
                let top = c.iter().rposition(|v| *v != 0).unwrap() as u32;
                let low = c.iter().position(|v| *v != 0).unwrap() as u32;
                assert_eq!(top, deg);
                assert_eq!(low, k + 1);
            }
        }
    }

    #[test]
    fn cor3_values() {
        let ctx = ctx();
        let pi = ctx.pi();
        assert_eq!(cor3_kernel(5, 17, &ctx).unwrap(), 1);
        let v = cor3_kernel(3, 1, &ctx).unwrap();
        assert!(close(&v, &Float::with_val(ctx.prec(), &pi - 1u32), 1e-55));
        let v = cor3_kernel(1, 1, &ctx).unwrap();
        let want = Float::with_val(ctx.prec(), pi.square_ref()) * 4u32 - Float::with_val(ctx.prec(), &pi * 6u32) + 1u32;
        assert!(close(&v, &want, 1e-55));
    }

    #[test]
    fn higher_kernels() {
        let ctx = ctx();
        let pi = ctx.pi();
        let p2 = Float::with_val(ctx.prec(), pi.square_ref());
        let v = higher_a_kernel(7, Variant::HigherInhomogeneous, 1, &ctx).unwrap();
        let want = Float::with_val(ctx.prec(), &p2 + 1u32)
            * (Float::with_val(ctx.prec(), &p2 * 4u32) + Float::with_val(ctx.prec(), &pi * 6u32) + 3u32)
            / Float::with_val(ctx.prec(), (&pi).pow(5));
        assert!(close(&v, &want, 1e-55));
        // leading coefficient of a=9 homogeneous
        let big = higher_a_kernel(9, Variant::HigherHomogeneous, 1_000_000, &ctx).unwrap();
        let lead = Float::with_val(ctx.prec(), (&pi).pow(7)) * 32u32;
        assert!(close(&big, &lead, 1e-5));
        assert!(higher_a_kernel(7, Variant::Cor3, 1, &ctx).is_err());
    }

    #[test]
    fn higher_kernel_two_precisions() {
        let lo = higher_a_kernel(11, Variant::HigherInhomogeneous, 2, &ctx()).unwrap();
        let hi = higher_a_kernel(11, Variant::HigherInhomogeneous, 2, &PrecisionContext::new(120).unwrap()).unwrap();
        assert!(close(&lo, &hi, 1e-58));
    }

    #[test]
    fn bessel_kernel_sign_and_size() {
        let ctx = ctx();
        let m = KernelSpec::bessel_a0().majorant().unwrap();
        for n in 5..40u64 {
            let v = bessel_kernel_a0(n, &ctx).unwrap().abs().to_f64();
            let bound = (m.ln_coeff + m.degree * (n as f64).ln() - 2.0 * std::f64::consts::PI * n as f64).exp();
            assert!(v <= bound, "n = {n}");
        }
        let lo = bessel_kernel_a0(10, &ctx).unwrap();
        let hi = bessel_kernel_a0(10, &PrecisionContext::new(100).unwrap()).unwrap();
        assert!(close(&lo, &hi, 1e-55));
    }

    #[test]
    fn normalized_q_first_column_is_one() {
        let ctx = ctx();
        for k in [0u32, 3, 11] {
            let q = normalized_Q(1, k, 1, &ctx).unwrap();
            assert!(close(&q, &Float::with_val(ctx.prec(), 1), 1e-55));
        }
        // a=1, k=0, n=2: P_0(4π)e^{-4π}/(P_0(2π)e^{-2π})
        let p2 = constraint_kernel_poly(1, 0, 2, &ctx).unwrap();
        let p1 = constraint_kernel_poly(1, 0, 1, &ctx).unwrap();
        let e = Float::with_val(ctx.prec(), (-two_pi_n(1, ctx.prec())).exp_ref());
        let want = p2 / p1 * e;
        assert!(close(&normalized_Q(1, 0, 2, &ctx).unwrap(), &want, 1e-55));
    }

    #[test]
    fn majorants_dominate() {
        let ctx = ctx();
        let specs = [
            KernelSpec::constraint(1, 4).unwrap(),
            KernelSpec::constraint_1f1(3, 2).unwrap(),
            KernelSpec::cor3(1).unwrap(),
            KernelSpec::higher_homogeneous(11).unwrap(),
            KernelSpec::higher_inhomogeneous(9).unwrap(),
            KernelSpec::normalized_q(5, 3).unwrap(),
        ];
        for spec in specs {
            let m = spec.majorant().unwrap();
            for n in 1..30u64 {
                let v = spec.kernel(n, &ctx).unwrap().abs().to_f64();
                let bound = (m.ln_coeff + m.degree * (n as f64).ln()).exp();
                assert!(v <= bound * (1.0 + 1e-9), "{spec} n = {n}");
            }
        }
    }
}
