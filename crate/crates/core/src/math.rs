//! Thin wrappers over `libm` so the crate builds without `std`.

pub(crate) use core::f64::consts::PI;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, f64::from(n))
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Largest power of two not above `x > 0`; offsets by it stay exact near `x / h`-sized abscissae.
#[inline]
pub(crate) fn pow2_floor(x: f64) -> f64 {
    libm::exp2(libm::floor(libm::log2(x)))
}

/// `e^{i angle}`.
#[inline]
pub(crate) fn cis(angle: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(cos(angle), sin(angle))
}
