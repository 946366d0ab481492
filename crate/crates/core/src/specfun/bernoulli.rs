//! Even-index Bernoulli numbers via tangent numbers, cached.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer, Rational};

fn table() -> &'static Mutex<Vec<Rational>> {
    static T: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(Vec::new()))
}

/// Tangent numbers T_1..T_n (T_1 = 1, T_2 = 2, T_3 = 16, ...).
fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        let prev = t[k - 1].clone();
        t[k] = prev * (k as u32 - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j as u32 - k as u32));
            let b = Integer::from(&t[j] * (j as u32 - k as u32 + 2));
            t[j] = a + b;
        }
    }
    t
}

/// B_{2k} for k = 0..count as exact rationals (B_0 = 1).
pub fn bernoulli_even(count: usize) -> Vec<Rational> {
    let mut guard = table().lock().unwrap();
    if guard.len() < count {
        let n = count.max(2 * guard.len()).max(16);
        let t = tangent_numbers(n);
        let mut out = Vec::with_capacity(n);
        out.push(Rational::from(1));
        for k in 1..n {
            // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&four_k - 1u32) * four_k;
            let mut b = Rational::from((Integer::from(&t[k] * (2 * k as u32)), den));
            if k % 2 == 0 {
                b = -b;
            }
            out.push(b);
        }
        *guard = out;
    }
    guard[..count].to_vec()
}

type CoeffCache = Mutex<HashMap<(u8, u32), Arc<Vec<Float>>>>;

fn coeff_cache() -> &'static CoeffCache {
    static C: OnceLock<CoeffCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: u8, prec: u32, count: usize, make: impl Fn(usize, &Rational) -> Rational) -> Arc<Vec<Float>> {
    if let Some(v) = coeff_cache().lock().unwrap().get(&(kind, prec)) {
        if v.len() >= count {
            return v.clone();
        }
    }
    let n = count.max(32);
    let b = bernoulli_even(n + 1);
    let v: Vec<Float> = (0..=n)
        .map(|k| {
            if k == 0 {
                Float::new(prec)
            } else {
                Float::with_val(prec, &make(k, &b[k]))
            }
        })
        .collect();
    let v = Arc::new(v);
    coeff_cache().lock().unwrap().insert((kind, prec), v.clone());
    v
}

/// B_{2k}/(2k(2k-1)) for the Stirling series, index k (entry 0 unused).
pub(crate) fn stirling_coeffs(prec: u32, count: usize) -> Arc<Vec<Float>> {
    cached(0, prec, count, |k, b| {
        let d = (2 * k as u64) * (2 * k as u64 - 1);
        Rational::from(b / Integer::from(d))
    })
}

/// B_{2k}/(2k)! for Euler–Maclaurin, index k (entry 0 unused).
pub(crate) fn em_coeffs(prec: u32, count: usize) -> Arc<Vec<Float>> {
    cached(1, prec, count, |k, b| {
        let f = Integer::from(Integer::factorial(2 * k as u32));
        Rational::from(b / f)
    })
}
