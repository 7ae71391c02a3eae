//! Special functions in the conventions the closed-form modes are written in.
//!
//! The associated Legendre functions carry no Condon-Shortley phase. The sign
//! `epsilon = (-1)^m` for `m >= 0` (and `1` for `m < 0`) is applied once, in
//! [`spherical_harmonic`], together with the normalisation prefactor.

mod bessel;
mod laguerre;
mod legendre;

pub use bessel::{spherical_bessel_j, spherical_bessel_j_deriv, spherical_bessel_zero};
pub use laguerre::{generalized_laguerre, generalized_laguerre_deriv};
pub use legendre::{assoc_legendre, assoc_legendre_with_deriv};

pub(crate) use laguerre::{laguerre, laguerre_deriv};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{self, PI};

/// Orbital and azimuthal quantum numbers `(ell, m)` with `|m| <= ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawAngularIndex"))]
pub struct AngularIndex {
    ell: u32,
    m: i32,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawAngularIndex {
    ell: u32,
    m: i32,
}

#[cfg(feature = "serde")]
impl TryFrom<RawAngularIndex> for AngularIndex {
    type Error = Error;

    fn try_from(raw: RawAngularIndex) -> Result<Self> {
        AngularIndex::new(raw.ell, raw.m)
    }
}

impl AngularIndex {
    pub fn new(ell: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > ell {
            return Err(Error::AngularIndex { ell, m });
        }
        Ok(Self { ell, m })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    /// `ell (ell + 1)`.
    pub fn casimir(&self) -> f64 {
        let l = f64::from(self.ell);
        l * (l + 1.0)
    }

    /// The `epsilon` sign: `(-1)^m` for `m >= 0`, `1` for `m < 0`.
    pub fn epsilon(&self) -> f64 {
        if self.m >= 0 && self.m % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// `epsilon * sqrt((2l+1)/(4 pi) * (l-|m|)!/(l+|m|)!)`.
pub fn harmonic_prefactor(idx: AngularIndex) -> f64 {
    let l = idx.ell();
    let am = idx.abs_m();
    // (l-|m|)!/(l+|m|)! = 1 / prod_{k=l-|m|+1}^{l+|m|} k
    let mut ratio = 1.0;
    for k in (l - am + 1)..=(l + am) {
        ratio /= f64::from(k);
    }
    idx.epsilon() * math::sqrt((2.0 * f64::from(l) + 1.0) / (4.0 * PI) * ratio)
}

/// The angular factor `Theta(theta) Phi(phi)` of a separable mode.
pub fn spherical_harmonic(idx: AngularIndex, theta: f64, phi: f64) -> Result<Complex64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain { what: "theta must lie in [0, pi]", value: theta });
    }
    if !phi.is_finite() {
        return Err(Error::Domain { what: "phi must be finite", value: phi });
    }
    let p = assoc_legendre(idx, math::cos(theta))?;
    Ok(math::cis(f64::from(idx.m()) * phi) * (harmonic_prefactor(idx) * p))
}

/// `(Y, dY/dtheta)` for `theta` strictly between the poles.
pub fn spherical_harmonic_with_deriv(idx: AngularIndex, theta: f64, phi: f64) -> Result<(Complex64, Complex64)> {
    let s = math::sin(theta);
    if !(theta > 0.0 && theta < PI) || s == 0.0 {
        return Err(Error::CoordinateSingularity { r: f64::NAN, theta });
    }
    if !phi.is_finite() {
        return Err(Error::Domain { what: "phi must be finite", value: phi });
    }
    let (p, dp) = assoc_legendre_with_deriv(idx, math::cos(theta))?;
    let phase = math::cis(f64::from(idx.m()) * phi) * harmonic_prefactor(idx);
    Ok((phase * p, phase * (-dp / s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_index_rejects_large_m() {
        assert_eq!(AngularIndex::new(1, 2), Err(Error::AngularIndex { ell: 1, m: 2 }));
        assert_eq!(AngularIndex::new(1, -2), Err(Error::AngularIndex { ell: 1, m: -2 }));
        assert!(AngularIndex::new(0, 0).is_ok());
    }

    #[test]
    fn constant_harmonic() {
        let idx = AngularIndex::new(0, 0).unwrap();
        for &(t, p) in &[(0.1, 0.2), (1.5, 4.0), (3.0, 6.0)] {
            let y = spherical_harmonic(idx, t, p).unwrap();
            assert!((y.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
            assert_eq!(y.im, 0.0);
        }
    }

    #[test]
    fn epsilon_convention_flips_sign_between_plus_and_minus_m() {
        let plus = spherical_harmonic(AngularIndex::new(1, 1).unwrap(), PI / 2.0, 0.0).unwrap();
        let minus = spherical_harmonic(AngularIndex::new(1, -1).unwrap(), PI / 2.0, 0.0).unwrap();
        assert!((plus.re + minus.re).abs() < 1e-15);
        assert!(plus.re < 0.0);
        assert!((plus.norm() - (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn theta_outside_range_is_rejected() {
        let idx = AngularIndex::new(2, 1).unwrap();
        assert!(spherical_harmonic(idx, -0.1, 0.0).is_err());
        assert!(spherical_harmonic(idx, 3.2, 0.0).is_err());
    }
}
