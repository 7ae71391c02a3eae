use crate::error::{Error, Result};
use crate::math;

/// Generalized Laguerre polynomial `L_n^a(x)` by the three-term recurrence.
///
/// `n` must be a nonnegative integer; fractional degrees are rejected.
pub fn generalized_laguerre(n: f64, a: f64, x: f64) -> Result<f64> {
    let degree = check_degree(n)?;
    check_args(a, x)?;
    Ok(laguerre(degree, a, x))
}

/// `d/dx L_n^a(x) = -L_{n-1}^{a+1}(x)`.
pub fn generalized_laguerre_deriv(n: f64, a: f64, x: f64) -> Result<f64> {
    let degree = check_degree(n)?;
    check_args(a, x)?;
    Ok(laguerre_deriv(degree, a, x))
}

fn check_degree(n: f64) -> Result<u32> {
    if !n.is_finite() || n < 0.0 || math::round(n) != n || n > f64::from(u32::MAX) {
        return Err(Error::UnsupportedIndex { index: n });
    }
    Ok(n as u32)
}

fn check_args(a: f64, x: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::Domain { what: "Laguerre parameter must be finite", value: a });
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain { what: "Laguerre argument must be finite and >= 0", value: x });
    }
    Ok(())
}

pub(crate) fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub(crate) fn laguerre_deriv(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre(n - 1, a + 1.0, x)
    }
}
