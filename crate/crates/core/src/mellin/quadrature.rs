use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::specfun::bits_to_digits;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 14;
const MAX_CUTOFF: f64 = 5000.0;

/// Abscissa, cutoff and tolerance for a vertical-line integral.
#[derive(Clone, Debug, PartialEq)]
pub struct LineIntegralSpec {
    /// Re s on the line. `None` picks one unit right of the required bound.
    pub sigma: Option<f64>,
    /// Half-height T of the segment. `None` picks it from the integrand decay.
    pub im_cutoff: Option<f64>,
    /// Tolerance relative to (1/2π)∫|F| dt.
    pub tol: f64,
    /// Initial panel width. `None` derives it from σ and the nearest pole.
    pub panel: Option<f64>,
    /// Move the abscissa of a single-n J integral up to its saddle point.
    pub lift: bool,
}

impl Default for LineIntegralSpec {
    fn default() -> Self {
        LineIntegralSpec { sigma: None, im_cutoff: None, tol: 1e-24, panel: None, lift: true }
    }
}

impl LineIntegralSpec {
    pub fn with_sigma(sigma: f64) -> Self {
        LineIntegralSpec { sigma: Some(sigma), ..Self::default() }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_panel(mut self, panel: f64) -> Self {
        self.panel = Some(panel);
        self
    }

    /// Abscissa given the strict lower bound `lower`.
    pub fn resolve_sigma(&self, lower: f64) -> Result<f64> {
        match self.sigma {
            Some(s) if !(s > lower) || !s.is_finite() => Err(Error::Spec(format!(
                "abscissa {s} must lie strictly right of {lower}"
            ))),
            Some(s) => Ok(s),
            None => Ok(lower + 1.0),
        }
    }

    pub(crate) fn validate(&self, prec: u32) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("quadrature tolerance {} out of range", self.tol)));
        }
        if let Some(t) = self.im_cutoff {
            if !(t > 0.0) {
                return Err(Error::Config(format!("im_cutoff {t} must be positive")));
            }
        }
        if let Some(h) = self.panel {
            if !(h > 0.0) {
                return Err(Error::Config(format!("panel width {h} must be positive")));
            }
        }
        let digits = bits_to_digits(prec) as f64;
        if self.tol.log10() < -(digits - 6.0) {
            return Err(Error::PrecisionInsufficient(format!(
                "tolerance {:e} needs more than {digits} working digits",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Value of (1/2πi)∫ F(s) ds along Re s = σ with its error budget.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: BigComplex,
    /// Panel-refinement differences plus the discarded-tail estimate.
    pub error: f64,
    /// (1/2π)∫|F| dt, the scale the tolerance refers to.
    pub l1: f64,
    pub sigma: f64,
    pub im_cutoff: f64,
    pub panels: usize,
}

type Nodes = Arc<Vec<(Float, Float)>>;

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gl_nodes(prec: u32) -> Nodes {
    static CACHE: OnceLock<Mutex<HashMap<u32, Nodes>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(n) = cache.lock().unwrap().get(&prec) {
        return n.clone();
    }
    let work = prec + 32;
    let eps = Float::with_val(work, Float::i_exp(1, -(prec as i32) - 8));
    let m = ORDER;
    let mut out = Vec::with_capacity(m);
    for i in 1..=m {
        let guess = ((i as f64 - 0.25) / (m as f64 + 0.5) * std::f64::consts::PI).cos();
        let mut x = Float::with_val(work, guess);
        for _ in 0..100 {
            let (p, dp) = legendre(m, &x, work);
            let dx = Float::with_val(work, &p / &dp);
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, dp) = legendre(m, &x, work);
        let one_minus = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let w = Float::with_val(work, 2) / (one_minus * Float::with_val(work, &dp * &dp));
        out.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    let nodes = Arc::new(out);
    cache.lock().unwrap().insert(prec, nodes.clone());
    nodes
}

/// P_m(x) and P_m'(x) by the three-term recurrence.
fn legendre(m: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for j in 2..=m {
        let jf = j as u32;
        let t = Float::with_val(prec, x * &p1) * (2 * jf - 1);
        let p2 = (t - Float::with_val(prec, &p0 * (jf - 1))) / jf;
        p0 = p1;
        p1 = p2;
    }
    let x2 = Float::with_val(prec, x * x);
    let num = Float::with_val(prec, &p0 - Float::with_val(prec, x * &p1)) * m as u32;
    let d = num / (Float::with_val(prec, 1) - x2);
    (p1, d)
}

struct Line<'a, F> {
    f: &'a F,
    sigma: Float,
    nodes: Nodes,
    prec: u32,
}

impl<F> Line<'_, F>
where
    F: Fn(&BigComplex) -> Result<BigComplex> + Sync,
{
    fn at(&self, t: &Float) -> Result<BigComplex> {
        (self.f)(&BigComplex::new(self.sigma.clone(), t.clone()))
    }

    /// Σ w_i F(σ + i t_i) over [lo, hi] and the matching Σ w_i |F|.
    fn panel(&self, lo: &Float, hi: &Float) -> Result<(BigComplex, Float)> {
        let p = self.prec;
        let half = Float::with_val(p, hi - lo) / 2u32;
        let mid = Float::with_val(p, hi + lo) / 2u32;
        let mut acc = BigComplex::zero(p);
        let mut abs = Float::new(p);
        for (x, w) in self.nodes.iter() {
            let t = Float::with_val(p, &mid + Float::with_val(p, &half * x));
            let v = self.at(&t)?;
            abs += Float::with_val(p, w * v.abs());
            acc = &acc + &v.scale(w);
        }
        Ok((acc.scale(&half), abs * half))
    }

    fn adapt(&self, lo: &Float, hi: &Float, coarse: BigComplex, tol: f64, depth: u32) -> Result<(BigComplex, f64)> {
        let mid = Float::with_val(self.prec, hi + lo) / 2u32;
        let (l, _) = self.panel(lo, &mid)?;
        let (r, _) = self.panel(&mid, hi)?;
        let fine = &l + &r;
        let diff = (&fine - &coarse).abs().to_f64();
        if diff <= tol {
            return Ok((fine, diff));
        }
        if depth >= MAX_DEPTH {
            return Err(Error::PrecisionInsufficient(format!(
                "quadrature panel [{}, {}] did not converge",
                lo.to_f64(),
                hi.to_f64()
            )));
        }
        let (a, ea) = self.adapt(lo, &mid, l, tol / 2.0, depth + 1)?;
        let (b, eb) = self.adapt(&mid, hi, r, tol / 2.0, depth + 1)?;
        Ok((&a + &b, ea + eb))
    }
}

fn magnitude(v: &BigComplex) -> f64 {
    let a = v.abs();
    if a.is_zero() {
        f64::NEG_INFINITY
    } else {
        crate::precision::log10_abs(&a)
    }
}

/// Smallest T at which F has decayed below `tol`·1e-3 of its running maximum on both sides.
fn find_cutoff<F>(line: &Line<'_, F>, step: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(&BigComplex) -> Result<BigComplex> + Sync,
{
    let p = line.prec;
    let drop = tol.log10() - 3.0;
    let mut peak = magnitude(&line.at(&Float::new(p))?);
    let mut quiet = 0;
    let mut t = 0.0;
    loop {
        t += step;
        if t > MAX_CUTOFF {
            return Err(Error::PrecisionInsufficient(format!(
                "integrand has not decayed by Im s = {MAX_CUTOFF}"
            )));
        }
        let up = magnitude(&line.at(&Float::with_val(p, t))?);
        let down = magnitude(&line.at(&Float::with_val(p, -t))?);
        let m = up.max(down);
        if m > peak {
            peak = m;
        }
        if m - peak < drop {
            quiet += 1;
            if quiet >= 2 {
                return Ok((t, 10f64.powf(m)));
            }
        } else {
            quiet = 0;
        }
    }
}

/// (1/2πi)∫_{σ-i∞}^{σ+i∞} F(s) ds with F given pointwise.
///
/// `pole_gap` is the distance from the line to the nearest singularity.
pub fn integrate_line<F>(f: F, sigma: f64, pole_gap: f64, spec: &LineIntegralSpec, prec: u32) -> Result<QuadResult>
where
    F: Fn(&BigComplex) -> Result<BigComplex> + Sync,
{
    spec.validate(prec)?;
    let work = prec + 16;
    let line = Line { f: &f, sigma: Float::with_val(work, sigma), nodes: gl_nodes(work), prec: work };
    let root = sigma.abs().max(1.0).sqrt();
    let h = spec.panel.unwrap_or_else(|| pole_gap.min(root).clamp(0.25, 4.0));

    let (cutoff, edge) = match spec.im_cutoff {
        Some(t) => {
            let e = magnitude(&line.at(&Float::with_val(work, t))?)
                .max(magnitude(&line.at(&Float::with_val(work, -t))?));
            (t, 10f64.powf(e))
        }
        None => find_cutoff(&line, root.max(2.0), spec.tol)?,
    };

    let count = ((2.0 * cutoff / h).ceil() as usize).max(1);
    let top = Float::with_val(work, cutoff);
    let width = Float::with_val(work, &top * 2u32) / count as u32;
    let edges: Vec<Float> = (0..=count)
        .map(|i| Float::with_val(work, &width * i as u32) - &top)
        .collect();
    let bounds: Vec<(Float, Float)> = edges.windows(2).map(|e| (e[0].clone(), e[1].clone())).collect();

    let coarse: Vec<(BigComplex, Float)> = bounds
        .par_iter()
        .map(|(lo, hi)| line.panel(lo, hi))
        .collect::<Result<_>>()?;
    let mut l1 = Float::new(work);
    for (_, a) in &coarse {
        l1 += a;
    }
    let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
    let l1 = (l1 / &two_pi).to_f64();
    let budget = spec.tol * l1.max(f64::MIN_POSITIVE) * two_pi.to_f64() / count as f64;

    let refined: Vec<(BigComplex, f64)> = bounds
        .par_iter()
        .zip(coarse.into_par_iter())
        .map(|((lo, hi), (c, _))| line.adapt(lo, hi, c, budget, 0))
        .collect::<Result<_>>()?;

    let mut total = BigComplex::zero(work);
    let mut err = 0.0;
    for (v, e) in refined {
        total = &total + &v;
        err += e;
    }
    // both tails decay at least like e^{-π|t|/4}
    let tail = 2.0 * edge * 4.0 / std::f64::consts::PI;
    let two_pi_f = two_pi.to_f64();
    Ok(QuadResult {
        value: total.scale(&Float::with_val(work, two_pi.recip_ref())).with_prec(prec),
        error: (err + tail) / two_pi_f,
        l1,
        sigma,
        im_cutoff: cutoff,
        panels: count,
    })
}
