//! Inverse Mellin transforms J_a, vertical-line quadrature, the tail form of
//! Ξ_{N,a}, and integral representations of ξ(s0)ξ(s0−a).

mod jfun;
mod quadrature;

use rug::ops::Pow;
use rug::Float;

pub use jfun::{
    default_tail_cutoff, j_asymptotic_constant, j_asymptotic_residual, j_closed, j_quadrature,
    leading_tail_ratio, tail_leading_sum_ratio, xi_approx_via_tail, xi_defect, XiTail,
};
pub use quadrature::{integrate_line, LineIntegralSpec, QuadResult};

use crate::arith::{factorize, sigma};
use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::specfun::{g_pair_prec, g_prec, gg_product_prec, xi_prec};

/// ξ(s0)·ξ(s0−a).
pub fn xi_pair_direct(a: &BigComplex, s0: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    Ok(xi_pair_direct_prec(a, s0, ctx.prec())?.with_prec(ctx.prec()))
}

pub(crate) fn xi_pair_direct_prec(a: &BigComplex, s0: &BigComplex, prec: u32) -> Result<BigComplex> {
    let w = prec + 16;
    let s0 = s0.with_prec(w);
    Ok(&xi_prec(&s0, w)? * &xi_prec(&(&s0 - &a.with_prec(w)), w)?)
}

/// Line integral of a finite Dirichlet sum, with the first omitted term's size.
#[derive(Clone, Debug)]
pub struct SeriesIntegral {
    pub value: BigComplex,
    pub quad: QuadResult,
    pub n_trunc: u64,
    /// Estimated size of the n > n_trunc remainder.
    pub truncation: f64,
}

impl SeriesIntegral {
    /// Quadrature error plus truncation estimate.
    pub fn error(&self) -> f64 {
        self.quad.error + self.truncation
    }
}

/// n^{-s} for n = 1..=n_max, built multiplicatively from prime powers.
fn dirichlet_powers(n_max: u64, s: &BigComplex, logs: &[Float], spf: &[u64]) -> Vec<BigComplex> {
    let p = s.prec();
    let mut out: Vec<BigComplex> = Vec::with_capacity(n_max as usize);
    out.push(BigComplex::one(p));
    let neg = -s.clone();
    for n in 2..=n_max {
        let q = spf[n as usize];
        let v = if q == n {
            neg.scale(&logs[n as usize]).exp()
        } else {
            &out[(q - 1) as usize] * &out[(n / q - 1) as usize]
        };
        out.push(v);
    }
    out
}

struct Series {
    n_max: u64,
    logs: Vec<Float>,
    spf: Vec<u64>,
}

impl Series {
    fn new(n_max: u64, prec: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("n_trunc must be at least 1".into()));
        }
        let mut spf = vec![0u64; n_max as usize + 1];
        let mut logs = vec![Float::new(prec); n_max as usize + 1];
        for n in 2..=n_max {
            spf[n as usize] = factorize(n)?[0].0;
            logs[n as usize] = Float::with_val(prec, n).ln();
        }
        Ok(Series { n_max, logs, spf })
    }

    /// Σ c_n n^{-s} for each coefficient vector.
    fn sums(&self, s: &BigComplex, coeffs: &[&[BigComplex]]) -> Vec<BigComplex> {
        let pw = dirichlet_powers(self.n_max, s, &self.logs, &self.spf);
        coeffs
            .iter()
            .map(|c| {
                let mut acc = BigComplex::zero(s.prec());
                for (x, y) in c.iter().zip(&pw) {
                    acc = &acc + &(x * y);
                }
                acc
            })
            .collect()
    }
}

/// σ_a(n) = Σ_{d|n} d^a for complex `a`.
pub fn sigma_complex(a: &BigComplex, n: u64, prec: u32) -> Result<BigComplex> {
    if n == 0 {
        return Err(Error::Domain("σ_a(0) is undefined".into()));
    }
    let mut divisors = vec![1u64];
    for (p, e) in factorize(n)? {
        let mut next = Vec::new();
        for &d in &divisors {
            let mut q = d;
            for _ in 0..e {
                q *= p;
                next.push(q);
            }
        }
        divisors.extend(next);
    }
    let mut acc = BigComplex::zero(prec);
    for d in divisors {
        let ln_d = Float::with_val(prec, d).ln();
        acc = &acc + &a.with_prec(prec).scale(&ln_d).exp();
    }
    Ok(acc)
}

fn odd_positive(a: &BigComplex) -> Option<u32> {
    a.as_integer().filter(|&k| k > 0 && k % 2 == 1).map(|k| k as u32)
}

/// Crude size of the n-th Dirichlet term's contribution: |σ_a(n)|·(2πn)^{|Re a|+2}·8π³e^{-2πn}.
fn truncation_estimate(a_re: f64, n_trunc: u64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut total = 0.0;
    for n in n_trunc + 1..=n_trunc + 4 {
        let x = tau * n as f64;
        let log = (a_re.max(0.0) + 1.0) * (n as f64).ln() + (a_re.abs() + 2.0) * x.ln() + (8.0 * 31.0f64).ln() - x;
        total += log.exp();
    }
    total
}

/// Σ_{n ≤ n_trunc} (1/2πi)∫ σ_a(n)[g(s)g(s−a)n^{-s}/(s−s0) + g(s)g(s+a)n^{-s-a}/(s−1+s0)] ds.
///
/// Approximates ξ(s0)ξ(s0−a); complex `a` is accepted.
pub fn xi_pair_integral(
    a: &BigComplex,
    s0: &BigComplex,
    spec: &LineIntegralSpec,
    n_trunc: u64,
    ctx: &PrecisionContext,
) -> Result<SeriesIntegral> {
    let re0 = s0.re.to_f64();
    let ra = a.re.to_f64();
    let mut lower = re0.max(1.0 - re0).max(ra + 1.0).max(ra.abs() - 2.0);
    if odd_positive(a) == Some(5) {
        lower = lower.max(3.0);
    }
    let sigma_line = spec.resolve_sigma(lower)?;
    let prec = ctx.prec() + 32;
    let series = Series::new(n_trunc, prec)?;
    let a = a.with_prec(prec);
    let s0 = s0.with_prec(prec);
    let mut c1 = Vec::with_capacity(n_trunc as usize);
    let mut c2 = Vec::with_capacity(n_trunc as usize);
    for n in 1..=n_trunc {
        let s = match odd_positive(&a) {
            Some(k) => BigComplex::real(Float::with_val(prec, sigma(k, n)?)),
            None => sigma_complex(&a, n, prec)?,
        };
        let ln_n = Float::with_val(prec, n).ln();
        let damp = (-a.clone()).scale(&ln_n).exp();
        c2.push(&s * &damp);
        c1.push(s);
    }
    let odd = odd_positive(&a);
    let f = |s: &BigComplex| -> Result<BigComplex> {
        let (g1, g2) = match odd {
            Some(k) => (gg_product_prec(k, s, prec)?, gg_product_prec(k, &(s + &a), prec)?),
            None => (g_pair_prec(&a, s, prec)?, g_pair_prec(&-a.clone(), s, prec)?),
        };
        let d = series.sums(s, &[&c1, &c2]);
        let t1 = (&g1 * &d[0]).div(&(s - &s0));
        let t2 = (&g2 * &d[1]).div(&(s + &s0).add_int(-1));
        Ok(&t1 + &t2)
    };
    let gap = (sigma_line - lower).max(0.25);
    let quad = integrate_line(f, sigma_line, gap, spec, prec)?;
    Ok(SeriesIntegral {
        value: quad.value.with_prec(ctx.prec()),
        truncation: truncation_estimate(ra, n_trunc),
        quad,
        n_trunc,
    })
}

/// Σ_{n ≤ n_trunc} (1/2πi)∫ g(s)n^{-s}[1/(s−s0) + 1/(s−1+s0)] ds, approximating ξ(s0).
pub fn xi_single_integral(
    s0: &BigComplex,
    spec: &LineIntegralSpec,
    n_trunc: u64,
    ctx: &PrecisionContext,
) -> Result<SeriesIntegral> {
    let re0 = s0.re.to_f64();
    let lower = re0.max(1.0 - re0);
    let sigma_line = spec.resolve_sigma(lower)?;
    let prec = ctx.prec() + 32;
    let series = Series::new(n_trunc, prec)?;
    let s0 = s0.with_prec(prec);
    let ones = vec![BigComplex::one(prec); n_trunc as usize];
    let f = |s: &BigComplex| -> Result<BigComplex> {
        let g = g_prec(s, prec)?;
        let d = series.sums(s, &[&ones]);
        let poles = &(s - &s0).recip() + &(s + &s0).add_int(-1).recip();
        Ok(&(&g * &d[0]) * &poles)
    };
    let gap = (sigma_line - lower).max(0.25);
    let quad = integrate_line(f, sigma_line, gap, spec, prec)?;
    // n-th term decays like e^{-πn²}
    let n1 = (n_trunc + 1) as f64;
    let truncation = (-std::f64::consts::PI * n1 * n1 + 2.0 * n1.ln()).exp();
    Ok(SeriesIntegral { value: quad.value.with_prec(ctx.prec()), quad, n_trunc, truncation })
}

/// Σ_{n ≤ n_trunc} σ_a(n)(1/2πi)∫[−g(s)g(s−a)n^{-s}(−s)^k + g(s)g(s+a)n^{-s-a}(s−1)^k] ds.
///
/// Vanishes up to truncation when the constraint generator holds for (a, k).
pub fn constraint_quadrature(
    a: u32,
    k: u32,
    spec: &LineIntegralSpec,
    n_trunc: u64,
    ctx: &PrecisionContext,
) -> Result<SeriesIntegral> {
    if a % 2 == 0 {
        return Err(Error::Spec(format!("constraint generator needs odd a, got {a}")));
    }
    let lower = a as f64 + 1.0;
    let sigma_line = spec.resolve_sigma(lower)?;
    let prec = ctx.prec() + 32;
    let series = Series::new(n_trunc, prec)?;
    let mut c1 = Vec::with_capacity(n_trunc as usize);
    let mut c2 = Vec::with_capacity(n_trunc as usize);
    for n in 1..=n_trunc {
        let s = Float::with_val(prec, sigma(a, n)?);
        let n_a = Float::with_val(prec, rug::Integer::from(n).pow(a));
        c2.push(BigComplex::real(Float::with_val(prec, &s / &n_a)));
        c1.push(BigComplex::real(s));
    }
    let a_c = BigComplex::from_int(prec, a as i64);
    let f = |s: &BigComplex| -> Result<BigComplex> {
        let d = series.sums(s, &[&c1, &c2]);
        let left = &(&gg_product_prec(a, s, prec)? * &(-s.clone()).powi(k)) * &d[0];
        let right = &(&gg_product_prec(a, &(s + &a_c), prec)? * &s.add_int(-1).powi(k)) * &d[1];
        Ok(&right - &left)
    };
    let gap = sigma_line - (a as f64 - 2.0).max(0.0);
    let quad = integrate_line(f, sigma_line, gap, spec, prec)?;
    Ok(SeriesIntegral {
        value: quad.value.with_prec(ctx.prec()),
        truncation: truncation_estimate(a as f64 + k as f64, n_trunc),
        quad,
        n_trunc,
    })
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
    fn direct_pair_values() {
        let v = xi_pair_direct(&c(1.0, 0.0), &c(2.0, 0.0), &ctx()).unwrap();
        let pi = BigComplex::pi(ctx().prec());
        let want = BigComplex::real(pi / 12u32);
        assert!((&v - &want).abs().to_f64() < 1e-38);
        assert!(xi_pair_direct(&c(5.0, 0.0), &c(3.0, 0.0), &ctx()).unwrap().is_finite());
        // ξ(s)ξ(s−a) = ξ(1−s)ξ(1+a−s)
        let a = c(3.0, 0.0);
        let s = c(0.2, 1.1);
        let r = &c(1.0, 0.0) - &s;
        let lhs = xi_pair_direct(&a, &s, &ctx()).unwrap();
        let rhs = xi_pair_direct(&-a.clone(), &r, &ctx()).unwrap();
        assert!((&lhs - &rhs).abs().to_f64() < 1e-36);
    }

    #[test]
    fn complex_sigma_matches_integer() {
        let p = ctx().prec();
        for n in [1u64, 12, 36, 97] {
            let z = sigma_complex(&c(3.0, 0.0), n, p).unwrap();
            let e = Float::with_val(p, sigma(3, n).unwrap());
            assert!((&z - &BigComplex::real(e.clone())).abs().to_f64() < 1e-30 * e.to_f64());
        }
    }

    #[test]
    fn pair_integral_a1() {
        let spec = LineIntegralSpec::with_sigma(3.5).with_tol(1e-22);
        let s0 = c(0.5, 2.0);
        let a = c(1.0, 0.0);
        let r = xi_pair_integral(&a, &s0, &spec, 60, &ctx()).unwrap();
        let d = xi_pair_direct(&a, &s0, &ctx()).unwrap();
        assert!((&r.value - &d).abs().to_f64() < 1e-15);
        assert!(r.error() < 1e-15);
    }

    #[test]
    fn abscissa_constraints() {
        let s0 = c(0.5, 0.0);
        let bad = LineIntegralSpec::with_sigma(2.5);
        assert!(matches!(xi_pair_integral(&c(5.0, 0.0), &s0, &bad, 10, &ctx()), Err(Error::Spec(_))));
        let bad = LineIntegralSpec::with_sigma(0.6);
        assert!(matches!(xi_single_integral(&c(0.3, 0.0), &bad, 10, &ctx()), Err(Error::Spec(_))));
        assert!(matches!(constraint_quadrature(2, 0, &LineIntegralSpec::default(), 10, &ctx()), Err(Error::Spec(_))));
    }

    #[test]
    fn single_xi_at_half() {
        let spec = LineIntegralSpec::with_sigma(2.0).with_tol(1e-22);
        let r = xi_single_integral(&c(0.5, 0.0), &spec, 60, &ctx()).unwrap();
        let want = crate::specfun::xi(&c(0.5, 0.0), &ctx()).unwrap();
        assert!((&r.value - &want).abs().to_f64() < 1e-15);
    }

    #[test]
    fn constraint_generator_a1_k0() {
        let r = constraint_quadrature(1, 0, &LineIntegralSpec::default().with_tol(1e-22), 40, &ctx()).unwrap();
        let slack = 10.0 * (r.error() + 1e-22 * r.quad.l1);
        assert!(r.value.abs().to_f64() < slack, "{}", r.value);
    }
}
