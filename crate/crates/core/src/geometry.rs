//! Diagonal 3+1 metrics in spherical coordinates `(tau, r, theta, phi)`, `tau = c t`.

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MetricKind {
    MinkowskiSpherical,
    Schwarzschild,
}

/// A static, spherically symmetric, diagonal metric.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricSpec {
    kind: MetricKind,
    r_s: f64,
    c: f64,
}

/// One point `(tau, r, theta, phi)` of space-time.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoordPoint {
    pub tau: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl CoordPoint {
    pub fn new(tau: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self { tau, r, theta, phi }
    }

    /// A point on the `tau = 0` slice.
    pub fn spatial(r: f64, theta: f64, phi: f64) -> Self {
        Self { tau: 0.0, r, theta, phi }
    }
}

impl Default for MetricSpec {
    fn default() -> Self {
        Self::minkowski()
    }
}

impl MetricSpec {
    /// Flat space in spherical coordinates, `c = 1`.
    pub fn minkowski() -> Self {
        Self { kind: MetricKind::MinkowskiSpherical, r_s: 0.0, c: 1.0 }
    }

    /// Schwarzschild exterior with radius `r_s > 0`, `c = 1`.
    pub fn schwarzschild(r_s: f64) -> Result<Self> {
        if !(r_s.is_finite() && r_s > 0.0) {
            return Err(Error::InvalidParameter { name: "r_s", reason: "Schwarzschild radius must be finite and > 0" });
        }
        Ok(Self { kind: MetricKind::Schwarzschild, r_s, c: 1.0 })
    }

    /// `r_s = 0` gives Minkowski, anything positive Schwarzschild.
    pub fn from_radius(r_s: f64) -> Result<Self> {
        if r_s == 0.0 {
            Ok(Self::minkowski())
        } else {
            Self::schwarzschild(r_s)
        }
    }

    pub fn with_speed_of_light(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter { name: "c", reason: "must be finite and > 0" });
        }
        self.c = c;
        Ok(self)
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn r_s(&self) -> f64 {
        self.r_s
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Lapse squared `1 - r_s / r`, after checking `r > r_s`.
    pub fn lapse_sq(&self, r: f64) -> Result<f64> {
        if !(r > self.r_s) || !r.is_finite() {
            return Err(Error::Horizon { r, r_s: self.r_s });
        }
        Ok(1.0 - self.r_s / r)
    }
}

/// `(g_tautau, g_rr, g_thetatheta, g_phiphi)`.
pub fn metric_diag(spec: &MetricSpec, p: &CoordPoint) -> Result<[f64; 4]> {
    let x = spec.lapse_sq(p.r)?;
    let r2 = p.r * p.r;
    let s = math::sin(p.theta);
    Ok([-x, 1.0 / x, r2, r2 * s * s])
}

/// `sqrt(-det g) = r^2 sin(theta)`; the lapse and radial factors cancel.
pub fn volume_weight(spec: &MetricSpec, p: &CoordPoint) -> Result<f64> {
    spec.lapse_sq(p.r)?;
    Ok(p.r * p.r * math::sin(p.theta))
}

/// Factors turning `d Psi / d x^mu` into the orthonormal-frame gradient component:
/// `(x^{-1/2}, x^{1/2}, 1/r, 1/(r sin theta))` with `x = 1 - r_s/r`.
pub fn gradient_weights(spec: &MetricSpec, p: &CoordPoint) -> Result<[f64; 4]> {
    let x = spec.lapse_sq(p.r)?;
    let s = math::sin(p.theta);
    if s == 0.0 || p.r == 0.0 {
        return Err(Error::CoordinateSingularity { r: p.r, theta: p.theta });
    }
    let sx = math::sqrt(x);
    Ok([1.0 / sx, sx, 1.0 / p.r, 1.0 / (p.r * s)])
}

/// Energy measured by a static observer at `r`: `(1 - r_s/r) E^2`.
pub fn local_energy_sq(spec: &MetricSpec, r: f64, energy: f64) -> Result<f64> {
    Ok(spec.lapse_sq(r)? * energy * energy)
}
