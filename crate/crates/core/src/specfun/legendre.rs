use super::AngularIndex;
use crate::error::{Error, Result};
use crate::math;

/// Associated Legendre function `P_ell^{|m|}(u)` without the Condon-Shortley phase.
pub fn assoc_legendre(idx: AngularIndex, u: f64) -> Result<f64> {
    assoc_legendre_with_deriv(idx, u).map(|(p, _)| p)
}

/// `(P_ell^{|m|}(u), (1 - u^2) dP/du)`.
///
/// The second component is finite at `u = +-1`; `dP/dtheta` follows as
/// `-(1 - u^2) P' / sin(theta)` away from the poles.
pub fn assoc_legendre_with_deriv(idx: AngularIndex, u: f64) -> Result<(f64, f64)> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::Domain { what: "Legendre argument must satisfy |u| <= 1", value: u });
    }
    let l = idx.ell();
    let m = idx.abs_m();
    let (p_l, p_lm1) = pair(l, m, u);
    // (1-u^2) P_l^m' = (l+m) P_{l-1}^m - l u P_l^m
    let lf = f64::from(l);
    let dp = f64::from(l + m) * p_lm1 - lf * u * p_l;
    Ok((p_l, dp))
}

/// Returns `(P_l^m(u), P_{l-1}^m(u))` with `P_{m-1}^m = 0`.
fn pair(l: u32, m: u32, u: f64) -> (f64, f64) {
    let somx2 = math::sqrt((1.0 - u) * (1.0 + u));
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return (pmm, 0.0);
    }
    let mut prev = pmm;
    let mut cur = u * f64::from(2 * m + 1) * pmm;
    for k in (m + 2)..=l {
        let next = (u * f64::from(2 * k - 1) * cur - f64::from(k + m - 1) * prev) / f64::from(k - m);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}
