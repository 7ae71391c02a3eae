use crate::error::{Error, Result};
use crate::math;

const SERIES_MAX_TERMS: usize = 200;

/// Spherical Bessel function of the first kind `j_ell(x)`.
///
/// Uses the power series for `|x| < (ell + 1) / 2`, upward recurrence from
/// `j_0, j_1` once `|x| >= ell`, and Miller's downward recurrence in between.
pub fn spherical_bessel_j(ell: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain { what: "spherical Bessel argument must be finite", value: x });
    }
    let value = j_nonneg(ell, x.abs());
    Ok(if x < 0.0 && ell % 2 == 1 { -value } else { value })
}

/// Derivative `d j_ell / dx`.
pub fn spherical_bessel_j_deriv(ell: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain { what: "spherical Bessel argument must be finite", value: x });
    }
    let ax = x.abs();
    let value = if ax < series_threshold(ell) {
        series_deriv(ell, ax)
    } else if ell == 0 {
        -j_nonneg(1, ax)
    } else {
        j_nonneg(ell - 1, ax) - f64::from(ell + 1) / ax * j_nonneg(ell, ax)
    };
    // j_ell has parity (-1)^ell, so its derivative has parity (-1)^(ell+1).
    Ok(if x < 0.0 && ell % 2 == 0 { -value } else { value })
}

/// The `n`-th positive zero of `j_ell` (`n >= 1`).
pub fn spherical_bessel_zero(ell: u32, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter { name: "zero index", reason: "Bessel zeros are counted from 1" });
    }
    // No zeros below x = ell; zeros are spaced by roughly pi, so a 0.1 scan
    // step cannot skip one.
    let step = 0.1;
    let mut a = f64::from(ell).max(step);
    let mut fa = j_nonneg(ell, a);
    let mut found = 0;
    loop {
        let b = a + step;
        let fb = j_nonneg(ell, b);
        if fb == 0.0 {
            found += 1;
            if found == n {
                return Ok(b);
            }
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            found += 1;
            if found == n {
                return Ok(bisect(ell, a, b, fa));
            }
        }
        a = b;
        fa = fb;
        if a > 1.0e6 {
            return Err(Error::NoBracket { what: "spherical Bessel zero" });
        }
    }
}

fn bisect(ell: u32, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = j_nonneg(ell, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint with the smaller residual
    if j_nonneg(ell, lo).abs() <= j_nonneg(ell, hi).abs() {
        lo
    } else {
        hi
    }
}

fn series_threshold(ell: u32) -> f64 {
    0.5 * f64::from(ell + 1)
}

fn j_nonneg(ell: u32, x: f64) -> f64 {
    if x < series_threshold(ell) {
        series(ell, x)
    } else if x >= f64::from(ell) {
        upward(ell, x)
    } else {
        downward(ell, x)
    }
}

/// `x^ell / (2 ell + 1)!! * sum_k (-x^2/2)^k / (k! (2ell+3)(2ell+5)...(2ell+2k+1))`.
fn series(ell: u32, x: f64) -> f64 {
    let mut term = 1.0;
    for k in 1..=ell {
        term *= x / f64::from(2 * k + 1);
    }
    let half_x2 = 0.5 * x * x;
    let mut sum = term;
    let l = f64::from(ell);
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= -half_x2 / ((kf + 1.0) * (2.0 * l + 2.0 * kf + 3.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn series_deriv(ell: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if ell == 1 { 1.0 / 3.0 } else { 0.0 };
    }
    let l = f64::from(ell);
    let half_x2 = 0.5 * x * x;
    // d_k = a_k x^(ell + 2k - 1), derivative term is (ell + 2k) d_k
    let (mut d, k0) = if ell == 0 {
        (-x / 6.0, 1usize)
    } else {
        let mut d = 1.0 / x;
        for k in 1..=ell {
            d *= x / f64::from(2 * k + 1);
        }
        (d, 0usize)
    };
    let mut sum = (l + 2.0 * k0 as f64) * d;
    for k in k0..SERIES_MAX_TERMS {
        let kf = k as f64;
        d *= -half_x2 / ((kf + 1.0) * (2.0 * l + 2.0 * kf + 3.0));
        let term = (l + 2.0 * (kf + 1.0)) * d;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn j0_j1(x: f64) -> (f64, f64) {
    let (s, c) = (math::sin(x), math::cos(x));
    let j0 = s / x;
    (j0, (j0 - c) / x)
}

fn upward(ell: u32, x: f64) -> f64 {
    let (j0, j1) = j0_j1(x);
    if ell == 0 {
        return j0;
    }
    let (mut prev, mut cur) = (j0, j1);
    for k in 1..ell {
        let next = f64::from(2 * k + 1) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Miller's algorithm, normalised against whichever of `j_0`, `j_1` is larger.
fn downward(ell: u32, x: f64) -> f64 {
    let start = ell + 30;
    let mut above = 0.0_f64;
    let mut cur = 1.0e-30_f64;
    let mut at_ell = 0.0;
    let mut f1 = 0.0;
    for k in (1..=start).rev() {
        // f_{k-1} = (2k+1)/x f_k - f_{k+1}
        let below = f64::from(2 * k + 1) / x * cur - above;
        above = cur;
        cur = below;
        if k == ell + 1 {
            at_ell = cur;
        }
        if k == 2 {
            f1 = cur;
        }
        if cur.abs() > 1.0e200 {
            above *= 1.0e-200;
            cur *= 1.0e-200;
            at_ell *= 1.0e-200;
            f1 *= 1.0e-200;
        }
    }
    let f0 = cur;
    if ell == 0 {
        at_ell = f0;
    }
    if ell == 1 {
        at_ell = f1;
    }
    let (j0, j1) = j0_j1(x);
    if j0.abs() >= j1.abs() {
        at_ell * (j0 / f0)
    } else {
        at_ell * (j1 / f1)
    }
}
