use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Coefficients of ₁F₁(−m; b; x) = Σ_{j≤m} (−m)_j/((b)_j j!) x^j.
pub fn hyp1f1_coeffs(m: u32, b: u32) -> Result<Vec<Rational>> {
    if b == 0 {
        return Err(Error::Domain("1F1 lower parameter must be positive".into()));
    }
    let mut c = Rational::from(1);
    let mut out = vec![c.clone()];
    for j in 0..m {
        // c_{j+1} = c_j (j - m) / ((b + j)(j + 1))
        c *= Rational::from((j as i64 - m as i64, (b as i64 + j as i64) * (j as i64 + 1)));
        out.push(c.clone());
    }
    Ok(out)
}

/// Horner evaluation of exact rational coefficients at `x`.
pub(crate) fn horner(coeffs: &[Rational], x: &Float, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += Float::with_val(prec, c);
    }
    acc
}
