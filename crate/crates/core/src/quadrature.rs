//! Tensor-product quadrature over a truncated `(r, theta, phi)` domain.
//!
//! Radial and polar directions use Gauss-Legendre nodes (the polar rule in
//! `u = cos theta`, which absorbs the `sin theta` of the volume element); the
//! azimuth uses the uniform midpoint rule. No node sits on an endpoint, so
//! `r = 0` and the poles are never sampled. Sums run in a fixed order.

use alloc::vec::Vec;
use core::ops::{AddAssign, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CoordPoint, MetricKind, MetricSpec};
use crate::math::{self, PI};

/// Smallest node count accepted in any direction.
pub const MIN_NODES: usize = 8;
/// Refinements attempted by [`converged_integrate`] before giving up.
pub const MAX_REFINEMENTS: u32 = 4;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = math::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            for _ in 0..100 {
                let (p, d) = legendre_and_deriv(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_deriv(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs mapped onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// One-dimensional `int_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Truncated integration region `[r_min, r_max] x S^2` and its node counts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Domain {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Domain {
    pub fn new(r_min: f64, r_max: f64, n_r: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        let dom = Self { r_min, r_max, n_r, n_theta, n_phi };
        dom.validate()?;
        Ok(dom)
    }

    /// The ball `r <= r_max` with the given node counts.
    pub fn ball(r_max: f64, n_r: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        Self::new(0.0, r_max, n_r, n_theta, n_phi)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min.is_finite() && self.r_max.is_finite()) || self.r_min < 0.0 {
            return Err(Error::InvalidParameter {
                name: "domain",
                reason: "radial bounds must be finite with r_min >= 0",
            });
        }
        if !(self.r_min < self.r_max) {
            return Err(Error::InvalidParameter { name: "domain", reason: "r_min must be < r_max" });
        }
        if self.n_r < MIN_NODES || self.n_theta < MIN_NODES || self.n_phi < MIN_NODES {
            return Err(Error::InvalidParameter { name: "domain", reason: "every node count must be at least 8" });
        }
        Ok(())
    }

    /// Checks the domain against a metric: Schwarzschild needs `r_min > r_s`.
    pub fn validate_for(&self, spec: &MetricSpec) -> Result<()> {
        self.validate()?;
        if spec.kind() == MetricKind::Schwarzschild && !(self.r_min > spec.r_s()) {
            return Err(Error::Horizon { r: self.r_min, r_s: spec.r_s() });
        }
        Ok(())
    }

    /// The same region with every node count doubled.
    pub fn refined(&self) -> Self {
        Self { n_r: 2 * self.n_r, n_theta: 2 * self.n_theta, n_phi: 2 * self.n_phi, ..*self }
    }

    pub fn node_count(&self) -> usize {
        self.n_r * self.n_theta * self.n_phi
    }
}

/// Values that can be accumulated by the quadrature rule.
pub trait Accumulate: Copy + AddAssign + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn is_finite(&self) -> bool;
}

impl Accumulate for f64 {
    fn zero() -> Self {
        0.0
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Accumulate for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// A fixed-size bundle of real integrals computed in one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sums<const N: usize>(pub [f64; N]);

impl<const N: usize> AddAssign for Sums<N> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl<const N: usize> Mul<f64> for Sums<N> {
    type Output = Self;

    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> Accumulate for Sums<N> {
    fn zero() -> Self {
        Sums([0.0; N])
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// `int f sqrt(-g) dr dtheta dphi` over the domain (the `tau` direction is left to the caller).
pub fn integrate<T, F>(spec: &MetricSpec, dom: &Domain, f: F) -> Result<T>
where
    T: Accumulate,
    F: FnMut(&CoordPoint) -> T,
{
    dom.validate_for(spec)?;
    Rule::new(dom).integrate(f)
}

/// Precomputed nodes for a domain; reuse it when integrating several fields.
#[derive(Debug, Clone)]
pub struct Rule {
    radial: Vec<(f64, f64)>,
    polar: Vec<(f64, f64, f64)>,
    azimuth: Vec<f64>,
    azimuth_weight: f64,
}

impl Rule {
    pub fn new(dom: &Domain) -> Self {
        let radial = GaussLegendre::new(dom.n_r)
            .on_interval(dom.r_min, dom.r_max)
            // sqrt(-g) = r^2 sin(theta); sin(theta) dtheta = du is absorbed by the polar rule.
            .map(|(r, w)| (r, w * r * r))
            .collect();
        let polar = GaussLegendre::new(dom.n_theta)
            .on_interval(-1.0, 1.0)
            .map(|(u, w)| {
                let theta = libm::acos(u);
                (theta, u, w)
            })
            .collect();
        let h = 2.0 * PI / dom.n_phi as f64;
        let azimuth = (0..dom.n_phi).map(|j| (j as f64 + 0.5) * h).collect();
        Self { radial, polar, azimuth, azimuth_weight: h }
    }

    pub fn integrate<T, F>(&self, mut f: F) -> Result<T>
    where
        T: Accumulate,
        F: FnMut(&CoordPoint) -> T,
    {
        let mut total = T::zero();
        for &(r, wr) in &self.radial {
            let mut shell = T::zero();
            for &(theta, _, wu) in &self.polar {
                let mut ring = T::zero();
                for &phi in &self.azimuth {
                    let p = CoordPoint::spatial(r, theta, phi);
                    let v = f(&p);
                    if !v.is_finite() {
                        return Err(Error::NonFiniteIntegrand { r, theta, phi });
                    }
                    ring += v;
                }
                shell += ring * (wu * self.azimuth_weight);
            }
            total += shell * wr;
        }
        Ok(total)
    }
}

/// Result of [`converged_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: f64,
    /// `|I_k - I_{k-1}| / |I_k|` at the last refinement (0 when both vanish).
    pub achieved: f64,
    pub refinements: u32,
    pub domain: Domain,
}

/// Doubles every node count until successive estimates agree to `rel_tol`.
pub fn converged_integrate<F>(spec: &MetricSpec, dom: &Domain, mut f: F, rel_tol: f64) -> Result<Converged>
where
    F: FnMut(&CoordPoint) -> f64,
{
    // Tolerances below what f64 can deliver are accepted and surface as
    // convergence failures.
    if !(rel_tol.is_finite() && rel_tol > 0.0 && rel_tol <= 1e-3) {
        return Err(Error::InvalidParameter { name: "rel_tol", reason: "must lie in (0, 1e-3]" });
    }
    let mut current = *dom;
    let mut previous = integrate(spec, &current, &mut f)?;
    for k in 1..=MAX_REFINEMENTS {
        current = current.refined();
        let value = integrate(spec, &current, &mut f)?;
        let diff = (value - previous).abs();
        let achieved = if diff == 0.0 { 0.0 } else { diff / value.abs() };
        if achieved < rel_tol || diff == 0.0 {
            return Ok(Converged { value, achieved, refinements: k, domain: current });
        }
        if k == MAX_REFINEMENTS {
            return Err(Error::Convergence { previous, last: value, rel_tol });
        }
        previous = value;
    }
    unreachable!("loop returns on the last refinement")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_rules() {
        let g = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((g.nodes()[0] + x).abs() < 1e-15 && (g.nodes()[1] - x).abs() < 1e-15);
        assert!((g.weights()[0] - 1.0).abs() < 1e-15);
        let g = GaussLegendre::new(9);
        assert!((g.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert_eq!(g.nodes()[4], 0.0);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(10);
        for deg in 0..20 {
            let got = g.integrate(-1.0, 1.0, |x| x.powi(deg));
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / f64::from(deg + 1) };
            assert!((got - exact).abs() < 1e-14, "deg {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn ball_volume() {
        let dom = Domain::ball(1.0, 8, 8, 8).unwrap();
        let v: f64 = integrate(&MetricSpec::minkowski(), &dom, |_| 1.0).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn domain_validation() {
        assert!(Domain::new(1.0, 1.0, 8, 8, 8).is_err());
        assert!(Domain::new(0.0, 1.0, 7, 8, 8).is_err());
        assert!(Domain::new(-1.0, 1.0, 8, 8, 8).is_err());
        let dom = Domain::new(0.5, 2.0, 8, 8, 8).unwrap();
        let s = MetricSpec::schwarzschild(1.0).unwrap();
        assert!(matches!(integrate::<f64, _>(&s, &dom, |_| 1.0), Err(Error::Horizon { .. })));
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let dom = Domain::ball(1.0, 8, 8, 8).unwrap();
        let err = integrate::<f64, _>(&MetricSpec::minkowski(), &dom, |p| if p.r > 0.5 { f64::NAN } else { 1.0 })
            .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { r, .. } => assert!(r > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let dom = Domain::ball(1.0, 8, 8, 8).unwrap();
        let c = converged_integrate(&MetricSpec::minkowski(), &dom, |_| 0.0, 1e-20).unwrap();
        assert_eq!(c.value, 0.0);
        assert_eq!(c.refinements, 1);
    }
}
