//! Exact integer arithmetic: primes, factorization, divisor functions and
//! smooth-number sets. Everything else in the crate is checked against this.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::Integer;

use crate::error::{Error, Result};

/// Ascending primes up to an inclusive limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeList {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeList {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// 1-based prime index: `nth(1) == 2`.
    pub fn nth(&self, index: usize) -> Option<u64> {
        index.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }
}

/// Sieve of Eratosthenes over `[2, limit]`.
pub fn primes_up_to(limit: u64) -> Result<PrimeList> {
    if limit < 2 {
        return Err(Error::EmptyRange(format!("no primes up to {limit}")));
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(PrimeList { limit, primes })
}

/// The `index`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(index: usize) -> Result<u64> {
    if index == 0 {
        return Err(Error::Domain("prime index is 1-based".into()));
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = index as f64;
    let bound = if index < 6 {
        15
    } else {
        (k * (k.ln() + k.ln().ln())).ceil() as u64 + 1
    };
    primes_up_to(bound)?
        .nth(index)
        .ok_or_else(|| Error::Domain(format!("prime #{index} beyond sieve")))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    // covers trial division for every n <= 10^12
    PRIMES.get_or_init(|| primes_up_to(1_000_000).expect("limit >= 2").primes)
}

/// Prime factorization by trial division against a precomputed sieve.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut out = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut m = 0;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            out.push((p, m));
        }
    }
    if rest > 1 {
        // either prime, or n exceeds the sieve's reach
        let limit = *small_primes().last().unwrap();
        if rest > limit.saturating_mul(limit) {
            return Err(Error::Domain(format!(
                "{n} is beyond the trial-division range"
            )));
        }
        out.push((rest, 1));
    }
    Ok(out)
}

fn sigma_cache() -> &'static Mutex<HashMap<(u32, u64), Integer>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u64), Integer>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// σ_a(n) = Σ_{d|n} d^a, exactly, via Π (p^{a(m+1)} − 1)/(p^a − 1).
pub fn sigma(a: u32, n: u64) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Domain("sigma_a(0) is undefined".into()));
    }
    if let Some(v) = sigma_cache().lock().unwrap().get(&(a, n)) {
        return Ok(v.clone());
    }
    let mut acc = Integer::from(1);
    for (p, m) in factorize(n)? {
        if a == 0 {
            acc *= m + 1;
            continue;
        }
        let pa = Integer::from(p).pow(a);
        let num = pa.clone().pow(m + 1) - 1u32;
        acc *= num / (pa - 1u32);
    }
    sigma_cache().lock().unwrap().insert((a, n), acc.clone());
    Ok(acc)
}

/// Per-exponent divisor-function table, σ_a cached by n.
#[derive(Debug, Clone)]
pub struct DivisorOracle {
    a: u32,
    cache: HashMap<u64, Integer>,
}

impl DivisorOracle {
    pub fn new(a: u32) -> Self {
        Self {
            a,
            cache: HashMap::new(),
        }
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn get(&mut self, n: u64) -> Result<Integer> {
        if let Some(v) = self.cache.get(&n) {
            return Ok(v.clone());
        }
        let v = sigma(self.a, n)?;
        self.cache.insert(n, v.clone());
        Ok(v)
    }

    /// σ_a(1..=n_max) as a vector indexed from n = 1.
    pub fn table(&mut self, n_max: u64) -> Result<Vec<Integer>> {
        (1..=n_max).map(|n| self.get(n)).collect()
    }
}

/// Integers in `[1, bound]` whose prime factors are all `<= p_limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothSet {
    p_limit: u64,
    bound: u64,
    members: Vec<u64>,
}

impl SmoothSet {
    pub fn p_limit(&self) -> u64 {
        self.p_limit
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

/// Enumerate `p_limit`-smooth numbers up to `bound` by multiplying out
/// prime powers, never by factoring candidates.
pub fn smooth_set(p_limit: u64, bound: u64) -> Result<SmoothSet> {
    if !is_prime(p_limit) {
        return Err(Error::Domain(format!("{p_limit} is not prime")));
    }
    if bound == 0 {
        return Err(Error::EmptyRange("smooth-set bound must be positive".into()));
    }
    let mut members = vec![1u64];
    for &p in primes_up_to(p_limit)?.primes() {
        let mut next = Vec::new();
        for &m in &members {
            let mut v = m;
            while let Some(w) = v.checked_mul(p).filter(|&w| w <= bound) {
                next.push(w);
                v = w;
            }
        }
        members.extend(next);
    }
    members.sort_unstable();
    Ok(SmoothSet {
        p_limit,
        bound,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sigma(a: u32, n: u64) -> Integer {
        (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| Integer::from(d).pow(a))
            .sum()
    }

    fn trial_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_sieves() {
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
        let p30 = primes_up_to(30).unwrap();
        assert_eq!(p30.primes(), trial_primes(30).as_slice());
        assert_eq!(p30.len(), 10);
        assert_eq!(p30.primes().last(), Some(&29));
        assert!(matches!(primes_up_to(1), Err(Error::EmptyRange(_))));
    }

    #[test]
    fn prime_indexing_is_one_based() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(3).unwrap(), 5);
        assert_eq!(nth_prime(7).unwrap(), 17);
        assert_eq!(nth_prime(100).unwrap(), 541);
    }

    #[test]
    fn table_values() {
        assert_eq!(sigma(1, 12).unwrap(), 28);
        assert_eq!(sigma(5, 2).unwrap(), 33);
        assert_eq!(sigma(3, 27).unwrap(), 20440);
        assert_eq!(sigma(1, 50).unwrap(), 93);
        assert_eq!(sigma(1, 51).unwrap(), 72);
        assert_eq!(sigma(0, 12).unwrap(), 6);
        assert_eq!(sigma(7, 1).unwrap(), 1);
        assert!(matches!(sigma(1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn sigma_eleven_exceeds_u64() {
        let v = sigma(11, 1000).unwrap();
        assert!(v > u64::MAX);
        assert_eq!(v, brute_sigma(11, 1000));
    }

    #[test]
    fn factorizations() {
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(97).unwrap(), vec![(97, 1)]);
        assert_eq!(
            factorize(2 * 2 * 3 * 999_983).unwrap(),
            vec![(2, 2), (3, 1), (999_983, 1)]
        );
        assert!(factorize(0).is_err());
    }

    #[test]
    fn smooth_sets() {
        assert_eq!(smooth_set(2, 10).unwrap().members(), &[1, 2, 4, 8]);
        assert_eq!(
            smooth_set(3, 10).unwrap().members(),
            &[1, 2, 3, 4, 6, 8, 9]
        );
        assert_eq!(smooth_set(2, 1).unwrap().members(), &[1]);
        assert!(matches!(smooth_set(4, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn smooth_complement_has_large_factor() {
        let s = smooth_set(3, 100).unwrap();
        for n in 1..=100u64 {
            let big_factor = factorize(n).unwrap().iter().any(|&(p, _)| p >= 5);
            assert_eq!(s.contains(n), !big_factor, "n = {n}");
        }
    }

    #[test]
    fn oracle_table_matches_direct() {
        let mut o = DivisorOracle::new(3);
        let t = o.table(30).unwrap();
        for (i, v) in t.iter().enumerate() {
            assert_eq!(*v, brute_sigma(3, i as u64 + 1));
        }
    }
}
