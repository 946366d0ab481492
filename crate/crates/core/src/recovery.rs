//! Recovery of σ_a(n), 2 ≤ n ≤ n_max, from the normalized kernel matrix.
//!
//! Row k (0 ≤ k ≤ n_max−2) holds Q_k(2πn)e^{-2πn} for n = 2..=n_max. The
//! identities Σ_{n≥1} σ_a(n)Q_k(2πn)e^{-2πn} = 0 with the n = 1 entry equal
//! to 1 give Q·σ ≈ −1 once the tail beyond n_max is dropped.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::arith::DivisorOracle;
use crate::error::{Error, Result};
use crate::kernels::{constraint_coeffs, poly_at, two_pi_n};
use crate::precision::{log10_abs, PrecisionContext};

/// Square kernel matrix, rows k = 0..=n_max−2, columns n = 2..=n_max.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub a: u32,
    pub n_max: u64,
    pub digits: u32,
    pub entries: Vec<Vec<Float>>,
}

impl QMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry for row `k` and column `n` (2 ≤ n ≤ n_max).
    pub fn get(&self, k: usize, n: u64) -> &Float {
        &self.entries[k][(n - 2) as usize]
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub a: u32,
    pub n_max: u64,
    pub digits: u32,
    /// approx[i] is the solution for n = i + 2
    pub approx: Vec<Float>,
    pub rounded: Vec<Integer>,
    /// fractional part exactly one half: rounding is ambiguous
    pub ties: Vec<bool>,
    pub oracle: Vec<Integer>,
    pub matches: Vec<bool>,
    pub max_residual: Float,
}

impl RecoveryResult {
    pub fn ns(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.approx.len()).map(|i| i as u64 + 2)
    }

    pub fn approx_at(&self, n: u64) -> &Float {
        &self.approx[(n - 2) as usize]
    }

    pub fn matches_at(&self, n: u64) -> bool {
        self.matches[(n - 2) as usize]
    }

    /// Largest m such that every n in 2..=m rounds to σ_a(n).
    pub fn correct_prefix(&self) -> u64 {
        let first_bad = self.matches.iter().position(|m| !m);
        match first_bad {
            Some(i) => i as u64 + 1,
            None => self.n_max,
        }
    }
}

/// (minimum, default) working digits for a matrix with columns up to n_max.
pub fn precision_policy(n_max: u64) -> (u32, u32) {
    let base = (2.0 * std::f64::consts::PI * n_max as f64 / std::f64::consts::LN_10).ceil() as u32;
    (base + 40, base + 120)
}

pub fn default_context(n_max: u64) -> Result<PrecisionContext> {
    PrecisionContext::new(precision_policy(n_max).1)
}

fn check(a: u32, n_max: u64, ctx: &PrecisionContext) -> Result<()> {
    if !matches!(a, 1 | 3 | 5) {
        return Err(Error::Spec(format!("recovery is defined for a in {{1,3,5}}, got {a}")));
    }
    if n_max < 3 {
        return Err(Error::Domain(format!("recovery needs n_max >= 3, got {n_max}")));
    }
    let (min, _) = precision_policy(n_max);
    if ctx.digits() < min {
        return Err(Error::Config(format!(
            "n_max = {n_max} needs at least {min} digits, got {}",
            ctx.digits()
        )));
    }
    Ok(())
}

/// Rows P_k(2πn)e^{-2πn} for n = 1..=n_max, unnormalized.
fn raw_rows(a: u32, n_max: u64, prec: u32) -> Result<Vec<Vec<Float>>> {
    let work = prec + 32;
    let weights: Vec<Float> = (1..=n_max)
        .map(|n| Float::with_val(work, (-two_pi_n(n, work)).exp_ref()))
        .collect();
    (0..(n_max - 1) as u32)
        .into_par_iter()
        .map(|k| {
            let c = constraint_coeffs(a, k)?;
            Ok((1..=n_max)
                .map(|n| poly_at(&c, &two_pi_n(n, work + 32), work) * &weights[(n - 1) as usize])
                .collect())
        })
        .collect()
}

pub fn build_q_matrix(a: u32, n_max: u64, ctx: &PrecisionContext) -> Result<QMatrix> {
    check(a, n_max, ctx)?;
    let prec = ctx.prec();
    let entries = raw_rows(a, n_max, prec)?
        .into_iter()
        .map(|row| {
            let lead = row[0].clone();
            row[1..]
                .iter()
                .map(|v| Float::with_val(prec, v / &lead))
                .collect()
        })
        .collect();
    Ok(QMatrix {
        a,
        n_max,
        digits: ctx.digits(),
        entries,
    })
}

/// Gaussian elimination with partial pivoting; `m` is consumed.
pub fn solve_linear(mut m: Vec<Vec<Float>>, mut b: Vec<Float>, prec: u32) -> Result<Vec<Float>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Domain("linear system is not square".into()));
    }
    let scale: Vec<f64> = m
        .iter()
        .map(|r| r.iter().map(log10_abs).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let digits = prec as f64 / std::f64::consts::LOG2_10;
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| {
                let ai = Float::with_val(64, m[i][col].abs_ref());
                let aj = Float::with_val(64, m[j][col].abs_ref());
                ai.partial_cmp(&aj).unwrap()
            })
            .unwrap();
        if m[p][col].is_zero() || log10_abs(&m[p][col]) - scale[p] < -(digits - 8.0) {
            return Err(Error::PrecisionInsufficient(format!(
                "matrix is singular to working precision at column {col}"
            )));
        }
        m.swap(col, p);
        b.swap(col, p);
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        let (b_top, b_rest) = b.split_at_mut(col + 1);
        for (row, bi) in rest.iter_mut().zip(b_rest.iter_mut()) {
            let f = Float::with_val(prec, &row[col] / &pivot_row[col]);
            if f.is_zero() {
                continue;
            }
            for j in col + 1..n {
                let t = Float::with_val(prec, &f * &pivot_row[j]);
                row[j] -= t;
            }
            row[col] = Float::new(prec);
            *bi -= Float::with_val(prec, &f * &b_top[col]);
        }
    }
    let mut x = vec![Float::new(prec); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc -= Float::with_val(prec, &m[i][j] * &x[j]);
        }
        x[i] = acc / &m[i][i];
    }
    Ok(x)
}

fn residual(m: &[Vec<Float>], x: &[Float], b: &[Float], prec: u32) -> Float {
    let mut worst = Float::new(prec);
    for (row, bi) in m.iter().zip(b) {
        let mut acc = Float::with_val(prec, -bi);
        for (mij, xj) in row.iter().zip(x) {
            acc += Float::with_val(prec, mij * xj);
        }
        let r = acc.abs();
        if r > worst {
            worst = r;
        }
    }
    worst
}

fn nearest(x: &Float) -> (Integer, bool) {
    let fl = Float::with_val(x.prec(), x.floor_ref());
    let frac = Float::with_val(x.prec(), x - &fl);
    let tie = frac == 0.5;
    let r = Float::with_val(x.prec(), x.round_ref());
    (r.to_integer().unwrap_or_default(), tie)
}

fn finish(a: u32, n_max: u64, ctx: &PrecisionContext, approx: Vec<Float>, max_residual: Float) -> Result<RecoveryResult> {
    let sig = DivisorOracle::new(a).table(n_max)?;
    let mut rounded = Vec::with_capacity(approx.len());
    let mut ties = Vec::with_capacity(approx.len());
    let mut matches = Vec::with_capacity(approx.len());
    let mut oracle = Vec::with_capacity(approx.len());
    for (i, x) in approx.iter().enumerate() {
        let (r, tie) = nearest(x);
        let o = sig[i + 1].clone();
        matches.push(!tie && r == o);
        rounded.push(r);
        ties.push(tie);
        oracle.push(o);
    }
    Ok(RecoveryResult {
        a,
        n_max,
        digits: ctx.digits(),
        approx,
        rounded,
        ties,
        oracle,
        matches,
        max_residual,
    })
}

/// Solve Q·x = −1 and compare the rounded solution with σ_a(n).
pub fn solve_divisors(a: u32, n_max: u64, ctx: &PrecisionContext) -> Result<RecoveryResult> {
    let q = build_q_matrix(a, n_max, ctx)?;
    let prec = ctx.prec();
    let rhs = vec![Float::with_val(prec, -1); q.size()];
    let x = solve_linear(q.entries.clone(), rhs.clone(), prec)?;
    let res = residual(&q.entries, &x, &rhs, prec);
    let half = crate::precision::pow10(prec, -((ctx.digits() / 2) as i64));
    if res >= half {
        return Err(Error::PrecisionInsufficient(format!(
            "residual {} exceeds 1e-{}",
            res.to_string_radix(10, Some(4)),
            ctx.digits() / 2
        )));
    }
    finish(a, n_max, ctx, x, res)
}

/// Solve at `ctx` and at 1.5× digits; the two must agree to 30 significant digits.
pub fn solve_divisors_auto(a: u32, n_max: u64, ctx: &PrecisionContext) -> Result<RecoveryResult> {
    let lo = solve_divisors(a, n_max, ctx)?;
    let hi = solve_divisors(a, n_max, &ctx.scaled(1.5))?;
    for (n, (x, y)) in lo.ns().zip(lo.approx.iter().zip(&hi.approx)) {
        let d = Float::with_val(y.prec(), x - y).abs();
        if !d.is_zero() && log10_abs(&d) - log10_abs(y) > -30.0 {
            return Err(Error::PrecisionInsufficient(format!(
                "solutions at {} and {} digits disagree at n = {n}",
                lo.digits, hi.digits
            )));
        }
    }
    Ok(lo)
}

/// Same solution from unnormalized rows P_k(2πn)e^{-2πn} against −P_k(2π)e^{-2π}.
pub fn solve_divisors_unnormalized(a: u32, n_max: u64, ctx: &PrecisionContext) -> Result<RecoveryResult> {
    check(a, n_max, ctx)?;
    let prec = ctx.prec();
    let rows = raw_rows(a, n_max, prec)?;
    let rhs: Vec<Float> = rows.iter().map(|r| Float::with_val(prec, -&r[0])).collect();
    let m: Vec<Vec<Float>> = rows
        .into_iter()
        .map(|r| r[1..].iter().map(|v| Float::with_val(prec, v)).collect())
        .collect();
    let x = solve_linear(m.clone(), rhs.clone(), prec)?;
    let res = residual(&m, &x, &rhs, prec);
    finish(a, n_max, ctx, x, res)
}

/// |approx_N[n] − σ_a(n)| for 2 ≤ n ≤ m at each n_max in `n_list`.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub a: u32,
    pub m: u64,
    pub n_list: Vec<u64>,
    /// errors[i][n − 2] for n_list[i]
    pub errors: Vec<Vec<Float>>,
}

pub fn convergence_study(a: u32, m: u64, n_list: &[u64], ctx: &PrecisionContext) -> Result<ConvergenceTable> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("n_max list must be non-empty and ascending".into()));
    }
    if m < 2 || n_list[0] < m {
        return Err(Error::Domain(format!("every n_max must be at least m = {m}")));
    }
    let mut errors = Vec::with_capacity(n_list.len());
    for &n_max in n_list {
        let digits = ctx.digits().max(precision_policy(n_max).1);
        let c = PrecisionContext::with_guard(digits, ctx.guard_digits())?;
        let r = solve_divisors(a, n_max, &c)?;
        errors.push(
            (2..=m)
                .map(|n| {
                    let i = (n - 2) as usize;
                    Float::with_val(ctx.prec(), &r.approx[i] - &r.oracle[i]).abs()
                })
                .collect(),
        );
    }
    Ok(ConvergenceTable {
        a,
        m,
        n_list: n_list.to_vec(),
        errors,
    })
}

/// det of V with V[k][n] = n^{k+1}, 0 ≤ k ≤ N−2, 2 ≤ n ≤ N: N!·∏_{k=1}^{N−2} k!.
pub fn vandermonde_det(n: u64) -> Result<Integer> {
    if n < 2 {
        return Err(Error::Domain(format!("Vandermonde size needs N >= 2, got {n}")));
    }
    let n = n as u32;
    let mut d = Integer::from(Integer::factorial(n));
    for k in 1..=n - 2 {
        d *= Integer::from(Integer::factorial(k));
    }
    Ok(d)
}

/// The integer matrix n^{k+1} whose determinant [`vandermonde_det`] gives.
pub fn vandermonde_matrix(n: u64) -> Vec<Vec<Integer>> {
    (0..n - 1)
        .map(|k| (2..=n).map(|c| Integer::from(c).pow(k as u32 + 1)).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn exact_det(m: &[Vec<Integer>]) -> Integer {
    let n = m.len();
    let mut a: Vec<Vec<Integer>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Integer::from(1);
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::normalized_Q;

    #[test]
    fn shape_and_first_entry() {
        let ctx = PrecisionContext::new(80).unwrap();
        let q = build_q_matrix(1, 3, &ctx).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.entries[0].len(), 2);
        let want = normalized_Q(1, 0, 2, &ctx).unwrap();
        let d = Float::with_val(ctx.prec(), q.get(0, 2) - &want).abs();
        assert!(d < 1e-75);
        assert!(q.entries.iter().flatten().all(|v| v.is_finite() && !v.is_zero()));
    }

    #[test]
    fn policy_is_enforced() {
        let (min, def) = precision_policy(51);
        assert_eq!(def, min + 80);
        let low = PrecisionContext::new(min - 1).unwrap();
        assert!(matches!(build_q_matrix(1, 51, &low), Err(Error::Config(_))));
        assert!(build_q_matrix(2, 5, &PrecisionContext::new(80).unwrap()).is_err());
    }

    #[test]
    fn small_sizes_match_triple_precision() {
        for n_max in 3..=6u64 {
            let ctx = default_context(n_max).unwrap();
            let r = solve_divisors(1, n_max, &ctx).unwrap();
            let hi = solve_divisors(1, n_max, &ctx.scaled(3.0)).unwrap();
            for (x, y) in r.approx.iter().zip(&hi.approx) {
                let d = Float::with_val(ctx.prec(), x - y).abs();
                assert!(log10_abs(&d) - log10_abs(y) < -(ctx.digits() as f64) + 2.0);
            }
        }
    }

    #[test]
    fn solver_on_known_system() {
        let p = 128;
        let f = |v: i32| Float::with_val(p, v);
        // [[0,2],[3,1]] x = [4,5] → x = [1,2]; needs a pivot swap
        let m = vec![vec![f(0), f(2)], vec![f(3), f(1)]];
        let x = solve_linear(m, vec![f(4), f(5)], p).unwrap();
        assert_eq!(x[0], 1);
        assert_eq!(x[1], 2);
        let sing = vec![vec![f(1), f(2)], vec![f(2), f(4)]];
        assert!(matches!(
            solve_linear(sing, vec![f(1), f(1)], p),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn vandermonde_small() {
        assert_eq!(vandermonde_det(3).unwrap(), 6);
        assert_eq!(vandermonde_det(4).unwrap(), 48);
        assert_eq!(exact_det(&vandermonde_matrix(3)), 6);
        assert_eq!(exact_det(&vandermonde_matrix(4)), 48);
        assert_eq!(vandermonde_det(2).unwrap(), 2);
        assert_eq!(exact_det(&vandermonde_matrix(2)), 2);
        assert!(vandermonde_det(1).is_err());
    }

    #[test]
    fn bareiss_with_swap() {
        let m: Vec<Vec<Integer>> = [[0, 1, 2], [3, 4, 5], [6, 7, 9]]
            .iter()
            .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
            .collect();
        // 0(36-35) - 1(27-30) + 2(21-24) = -3
        assert_eq!(exact_det(&m), -3);
    }

    #[test]
    fn tie_detection() {
        let (r, tie) = nearest(&Float::with_val(64, 2.5));
        assert!(tie);
        assert!(r == 2 || r == 3);
        let (r, tie) = nearest(&Float::with_val(64, 6.9999));
        assert!(!tie);
        assert_eq!(r, 7);
    }
}
