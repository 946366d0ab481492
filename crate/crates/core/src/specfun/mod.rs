//! Special functions over MPFR reals and [`BigComplex`]: Γ, ζ, g, ξ, the
//! duplication-form product g(s)g(s−a), upper incomplete Γ, E_ν, K_0/K_1 and
//! terminating ₁F₁.
//!
//! Public entry points take a [`PrecisionContext`] and return values rounded
//! to its working precision. The `*_prec` variants used inside the crate take
//! a raw bit count instead.

mod bernoulli;
mod bessel;
mod gamma;
mod hyp1f1;
mod incgamma;
mod xi;
mod zeta;

use rug::Float;

use crate::complex::BigComplex;
use crate::error::Result;
use crate::precision::PrecisionContext;

pub use bernoulli::bernoulli_even;
pub use hyp1f1::hyp1f1_coeffs;

pub(crate) use bessel::bessel_k_prec;
pub(crate) use gamma::gamma_prec;
pub(crate) use hyp1f1::horner;
pub(crate) use incgamma::{expint_e_prec, inc_gamma_upper_prec};
pub(crate) use xi::{g_pair_prec, g_prec, gg_product_prec, xi_prec};
pub(crate) use zeta::{zeta_prec, zeta_times_s_minus_1_prec};

pub(crate) fn bits_to_digits(prec: u32) -> u32 {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as u32
}

/// 2^{-prec}
pub(crate) fn eps_bits(prec: u32) -> Float {
    Float::with_val(prec, 1) >> prec
}

pub fn gamma(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    gamma_prec(s, ctx.prec())
}

pub fn zeta(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    zeta_prec(s, ctx.prec())
}

/// ζ(s) with an explicit Euler–Maclaurin cutoff, for resolution studies.
pub fn zeta_with_terms(s: &BigComplex, terms: u64, ctx: &PrecisionContext) -> Result<BigComplex> {
    zeta::zeta_with_terms_prec(s, terms, ctx.prec())
}

/// (s−1)ζ(s), entire with value 1 at s = 1.
pub fn zeta_times_s_minus_1(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    zeta_times_s_minus_1_prec(s, ctx.prec())
}

/// g(s) = π^{−s/2}(s−1)Γ(s/2+1).
pub fn g_func(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    g_prec(s, ctx.prec())
}

/// Completed zeta ξ(s) = g(s)ζ(s); entire.
pub fn xi(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    xi_prec(s, ctx.prec())
}

/// g(s)·g(s−a) for odd positive `a`, via the duplication formula.
pub fn gg_product(a: u32, s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    gg_product_prec(a, s, ctx.prec())
}

/// Γ(s, x) = ∫_x^∞ t^{s−1} e^{−t} dt.
pub fn inc_gamma_upper(s: &BigComplex, x: &Float, ctx: &PrecisionContext) -> Result<BigComplex> {
    inc_gamma_upper_prec(s, x, ctx.prec())
}

/// E_ν(z) = ∫_1^∞ e^{−zt} t^{−ν} dt.
pub fn expint_e(nu: &BigComplex, z: &Float, ctx: &PrecisionContext) -> Result<BigComplex> {
    expint_e_prec(nu, z, ctx.prec())
}

/// Modified Bessel function of the second kind, orders 0 and 1.
pub fn bessel_k(order: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    bessel_k_prec(order, x, ctx.prec())
}

/// ₁F₁(−m; b; x), terminating.
pub fn hyp1f1_term(m: u32, b: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let c = hyp1f1_coeffs(m, b)?;
    Ok(horner(&c, x, ctx.prec()))
}
