//! Separable modes `Psi(tau, r, theta, phi) = e^{-i eta tau} R(r) Y_l^m(theta, phi)`.
//!
//! Three closed-form radial families live here: Dirichlet-quantized
//! spherical Bessel functions on a ball, harmonically localized
//! Laguerre-Gaussian functions, and hydrogenic radial functions. Numerically
//! solved Schwarzschild shell modes plug into the same [`ModeFunction`].

use alloc::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CoordPoint, MetricKind, MetricSpec};
use crate::hydrogen;
use crate::math::{self, PI};
use crate::quadrature::{Domain, GaussLegendre};
use crate::schwarzschild::{self, RadialSolution};
use crate::specfun::{self, AngularIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    Free,
    Localized,
    Hydrogen,
    Shell,
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Free => "free",
            Family::Localized => "localized",
            Family::Hydrogen => "hydrogen",
            Family::Shell => "shell",
            Family::Custom => "custom",
        }
    }
}

/// Parameters of a separable mode.
///
/// `alpha_sq` is the multiplier sum. For the localized family it is fixed by
/// `alpha_sq + eta^2 = beta (4 n + 2 l + 3)`. `norm` is the radial amplitude
/// and is filled in by the constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeSpec {
    pub eta: f64,
    pub idx: AngularIndex,
    pub alpha_sq: f64,
    pub beta: f64,
    pub n_radial: u32,
    pub norm: f64,
}

impl ModeSpec {
    /// A free-mode request. `alpha_sq` is replaced by the box-quantized value on construction.
    pub fn free(eta: f64, idx: AngularIndex, alpha_sq: f64, n_radial: u32) -> Self {
        Self { eta, idx, alpha_sq, beta: 0.0, n_radial, norm: 1.0 }
    }

    /// A localized mode with `alpha_sq` set from the quantization condition.
    pub fn localized(eta: f64, idx: AngularIndex, beta: f64, n_radial: u32) -> Self {
        let alpha_sq = oscillator_eigenvalue(beta, n_radial, idx.ell()) - eta * eta;
        Self { eta, idx, alpha_sq, beta, n_radial, norm: 1.0 }
    }
}

/// `beta (4 n + 2 l + 3)`.
pub fn oscillator_eigenvalue(beta: f64, n_radial: u32, ell: u32) -> f64 {
    beta * (4.0 * f64::from(n_radial) + 2.0 * f64::from(ell) + 3.0)
}

/// A radial spread `sigma_r` about the origin, `<r^2> = sigma_r^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalizationConstraint {
    sigma_r: f64,
}

impl LocalizationConstraint {
    pub fn new(sigma_r: f64) -> Result<Self> {
        if !(sigma_r > 0.0 && sigma_r.is_finite()) {
            return Err(Error::Domain { what: "sigma_r must be positive and finite", value: sigma_r });
        }
        Ok(Self { sigma_r })
    }

    pub fn sigma_r(&self) -> f64 {
        self.sigma_r
    }

    /// `<r^2> / sigma_r^2` for `mode`; equals one when the mode meets the constraint.
    pub fn ratio(&self, mode: &ModeFunction) -> Result<f64> {
        Ok(mean_r_sq(mode)? / (self.sigma_r * self.sigma_r))
    }
}

/// The `beta` whose localized `(n_radial, ell)` mode has `<r^2> = sigma_r^2`.
///
/// `<r^2>` scales as `1/beta`, so one quadrature at `beta = 1` fixes it.
pub fn beta_for_sigma(sigma_r: f64, ell: u32, n_radial: u32) -> Result<f64> {
    let c = LocalizationConstraint::new(sigma_r)?;
    let unit = LocalizationConstraint::new(1.0)?;
    let idx = AngularIndex::new(ell, 0)?;
    let mode = make_localized_mode(ModeSpec::localized(0.0, idx, 1.0, n_radial), unit)?;
    Ok(mean_r_sq(&mode)? / (c.sigma_r * c.sigma_r))
}

/// The radial factor of a mode, before normalization.
#[derive(Debug, Clone)]
pub enum RadialPart {
    /// `j_l(k r)`.
    Bessel { k: f64 },
    /// `r^l e^{-beta r^2 / 2} L_n^{l+1/2}(beta r^2)`.
    Oscillator { beta: f64 },
    /// `rho^l e^{-rho/2} L_{n-l-1}^{2l+1}(rho)`, `rho = 2 r / (n a)`.
    Hydrogen { n: u32, a: f64 },
    /// A numerical solution, zero outside its interval.
    Shell(Arc<RadialSolution>),
    /// Any `r -> (R, R')`.
    Custom(fn(f64) -> (f64, f64)),
}

impl RadialPart {
    fn eval(&self, ell: u32, n_radial: u32, r: f64) -> (f64, f64) {
        match self {
            RadialPart::Bessel { k } => {
                // Arguments are finite and nonnegative here.
                let v = specfun::spherical_bessel_j(ell, k * r).unwrap_or(f64::NAN);
                let d = specfun::spherical_bessel_j_deriv(ell, k * r).unwrap_or(f64::NAN);
                (v, k * d)
            }
            RadialPart::Oscillator { beta } => oscillator(*beta, n_radial, ell, r),
            RadialPart::Hydrogen { n, a } => hydrogen::radial_shape(*n, ell, *a, r),
            RadialPart::Shell(sol) => {
                if r < sol.r_start() || r > sol.r_end() {
                    (0.0, 0.0)
                } else {
                    sol.eval(r)
                }
            }
            RadialPart::Custom(f) => f(r),
        }
    }

    /// Interval on which the radial function is defined.
    fn support(&self) -> (f64, f64) {
        match self {
            RadialPart::Shell(sol) => (sol.r_start(), sol.r_end()),
            _ => (0.0, f64::INFINITY),
        }
    }
}

fn oscillator(beta: f64, n: u32, ell: u32, r: f64) -> (f64, f64) {
    let a = f64::from(ell) + 0.5;
    let x = beta * r * r;
    let g = math::exp(-0.5 * x);
    let l = specfun::laguerre(n, a, x);
    let dl = specfun::laguerre_deriv(n, a, x);
    if ell == 0 {
        (g * l, g * beta * r * (2.0 * dl - l))
    } else {
        let rl1 = math::powi(r, ell as i32 - 1);
        let lf = f64::from(ell);
        (rl1 * r * g * l, rl1 * g * ((lf - x) * l + 2.0 * x * dl))
    }
}

/// An immutable, normalized separable mode.
#[derive(Debug, Clone)]
pub struct ModeFunction {
    spec: ModeSpec,
    metric: MetricSpec,
    family: Family,
    radial: RadialPart,
    domain: Domain,
}

impl ModeFunction {
    /// Wraps an arbitrary radial factor and normalizes it on `[dom.r_min, dom.r_max]`.
    pub fn from_radial(mut spec: ModeSpec, metric: MetricSpec, radial: RadialPart, dom: Domain) -> Result<Self> {
        dom.validate_for(&metric)?;
        let norm_sq = radial_integral(&radial, &spec, dom.r_min, dom.r_max, |r, v, _| v * v * r * r);
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::NotNormalized { norm: norm_sq });
        }
        spec.norm = 1.0 / math::sqrt(norm_sq);
        Ok(Self { spec, metric, family: Family::Custom, radial, domain: dom })
    }

    fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The region the mode was normalized on, with node counts that resolve it.
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn radial_part(&self) -> &RadialPart {
        &self.radial
    }

    /// Normalized `(R(r), R'(r))`.
    pub fn radial(&self, r: f64) -> Result<(f64, f64)> {
        self.check_r(r)?;
        let (v, d) = self.radial.eval(self.spec.idx.ell(), self.spec.n_radial, r);
        Ok((self.spec.norm * v, self.spec.norm * d))
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain { what: "r must be finite and >= 0", value: r });
        }
        if self.metric.kind() == MetricKind::Schwarzschild {
            self.metric.lapse_sq(r)?;
        }
        Ok(())
    }

    fn temporal(&self, tau: f64) -> Complex64 {
        math::cis(-self.spec.eta * tau)
    }

    pub fn value(&self, p: &CoordPoint) -> Result<Complex64> {
        let (r, _) = self.radial(p.r)?;
        let y = specfun::spherical_harmonic(self.spec.idx, p.theta, p.phi)?;
        Ok(self.temporal(p.tau) * y * r)
    }

    /// `(Psi, [d_tau, d_r, d_theta, d_phi] Psi)` at a point off the polar axis.
    pub fn value_and_partials(&self, p: &CoordPoint) -> Result<(Complex64, [Complex64; 4])> {
        let (r, dr) = self.radial(p.r)?;
        let (y, dy) = specfun::spherical_harmonic_with_deriv(self.spec.idx, p.theta, p.phi).map_err(|e| match e {
            Error::CoordinateSingularity { theta, .. } => Error::CoordinateSingularity { r: p.r, theta },
            other => other,
        })?;
        let t = self.temporal(p.tau);
        let psi = t * y * r;
        let i = Complex64::new(0.0, 1.0);
        let m = f64::from(self.spec.idx.m());
        Ok((psi, [-i * self.spec.eta * psi, t * y * dr, t * dy * r, i * m * psi]))
    }

    pub fn partials(&self, p: &CoordPoint) -> Result<[Complex64; 4]> {
        self.value_and_partials(p).map(|(_, d)| d)
    }

    /// `alpha^2(r)`, including the Coulomb term for hydrogenic modes.
    pub fn alpha_sq_at(&self, r: f64) -> f64 {
        match self.radial {
            RadialPart::Hydrogen { a, .. } => self.spec.alpha_sq + 2.0 / (a * r),
            _ => self.spec.alpha_sq,
        }
    }

    /// Multiplier fields `[kappa_0^2, kappa_1^2, kappa_2^2, kappa_3^2]` on this mode's metric.
    ///
    /// With `x = 1 - r_s/r`: `kappa_0^2 = -eta^2/x`,
    /// `kappa_1^2 = alpha^2(r) + eta^2/x - beta^2 r^2 - l(l+1)/r^2`, and the
    /// angular fields as in [`multiplier_fields`].
    pub fn multiplier_fields(&self, p: &CoordPoint) -> Result<[f64; 4]> {
        let x = self.metric.lapse_sq(p.r)?;
        let (_, k2, k3) = angular_fields(self.spec.idx, p)?;
        let s = &self.spec;
        let eta_sq = s.eta * s.eta;
        let r2 = p.r * p.r;
        let k1 = self.alpha_sq_at(p.r) + eta_sq / x - s.beta * s.beta * r2 - s.idx.casimir() / r2;
        Ok([-eta_sq / x, k1, k2, k3])
    }

    /// `|k|^2 = alpha^2 + eta^2` for a free mode.
    pub fn wavenumber_sq(&self) -> Option<f64> {
        match self.radial {
            RadialPart::Bessel { k } => Some(k * k),
            _ => None,
        }
    }
}

fn angular_fields(idx: AngularIndex, p: &CoordPoint) -> Result<(f64, f64, f64)> {
    let s = math::sin(p.theta);
    if !(p.r > 0.0) || !(p.theta > 0.0 && p.theta < PI) || s == 0.0 {
        return Err(Error::CoordinateSingularity { r: p.r, theta: p.theta });
    }
    let r2 = p.r * p.r;
    let m2 = f64::from(idx.m()) * f64::from(idx.m());
    let k3 = m2 / (r2 * s * s);
    Ok((r2, idx.casimir() / r2 - k3, k3))
}

/// `(kappa_1^2, kappa_2^2, kappa_3^2)` for the flat-space modes:
/// `kappa_1^2 = alpha^2 + eta^2 - beta^2 r^2 - l(l+1)/r^2`,
/// `kappa_2^2 = [l(l+1) - m^2/sin^2 theta] / r^2`, `kappa_3^2 = m^2 / (r^2 sin^2 theta)`.
pub fn multiplier_fields(spec: &ModeSpec, p: &CoordPoint) -> Result<(f64, f64, f64)> {
    let (r2, k2, k3) = angular_fields(spec.idx, p)?;
    let k1 = spec.alpha_sq + spec.eta * spec.eta - spec.beta * spec.beta * r2 - spec.idx.casimir() / r2;
    Ok((k1, k2, k3))
}

/// `alpha^2 = -mu^2 c^2 / hbar^2`.
pub fn kg_alpha_sq(mu: f64, hbar: f64, c: f64) -> f64 {
    -(mu * c / hbar) * (mu * c / hbar)
}

/// Composite Gauss-Legendre over `[a, b]` of `f(r, R, R')` using the raw radial part.
fn radial_integral<F>(radial: &RadialPart, spec: &ModeSpec, a: f64, b: f64, mut f: F) -> f64
where
    F: FnMut(f64, f64, f64) -> f64,
{
    let panels = radial_panels(radial, spec, b - a);
    let rule = GaussLegendre::new(32);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let lo = a + h * j as f64;
        total += rule.integrate(lo, lo + h, |r| {
            let (v, d) = radial.eval(spec.idx.ell(), spec.n_radial, r);
            f(r, v, d)
        });
    }
    total
}

fn radial_panels(radial: &RadialPart, spec: &ModeSpec, width: f64) -> usize {
    let n = (spec.n_radial + spec.idx.ell()) as usize;
    let scale = match radial {
        RadialPart::Oscillator { beta } => width * math::sqrt(*beta),
        RadialPart::Hydrogen { n: principal, a } => width / (f64::from(*principal) * a),
        RadialPart::Bessel { k } => width * k / PI,
        _ => 16.0,
    };
    (4 + n + math::round(scale) as usize).min(4096)
}

/// `<r^2> = int R^2 r^4 dr` for a normalized mode.
pub fn mean_r_sq(mode: &ModeFunction) -> Result<f64> {
    let d = mode.domain;
    let n2 = mode.spec.norm * mode.spec.norm;
    let v = radial_integral(&mode.radial, &mode.spec, d.r_min, d.r_max, |r, v, _| v * v * r * r * r * r);
    Ok(n2 * v)
}

fn angular_nodes(idx: AngularIndex) -> (usize, usize) {
    ((idx.ell() as usize + 8).max(16), (2 * idx.abs_m() as usize + 8).max(8))
}

/// Free mode `A j_l(k r)` on the ball `r <= box.r_max` with `j_l(k r_max) = 0`.
///
/// `k` is the `n_radial`-th Bessel zero over `r_max`; `alpha_sq` is reset to
/// `k^2 - eta^2`. The node counts of `box` are kept for later quadratures.
pub fn make_free_mode(spec: ModeSpec, r#box: Domain) -> Result<ModeFunction> {
    if spec.beta != 0.0 {
        return Err(Error::InvalidParameter { name: "beta", reason: "free modes need beta = 0" });
    }
    let k_sq = spec.alpha_sq + spec.eta * spec.eta;
    if !k_sq.is_finite() {
        return Err(Error::InvalidParameter { name: "alpha_sq", reason: "must be finite" });
    }
    if !(k_sq > 0.0) {
        return Err(Error::Evanescent { k_sq });
    }
    free_mode_with_eta(spec, r#box)
}

fn free_mode_with_eta(mut spec: ModeSpec, r#box: Domain) -> Result<ModeFunction> {
    r#box.validate()?;
    if r#box.r_min != 0.0 {
        return Err(Error::InvalidParameter { name: "box", reason: "free modes live on a ball with r_min = 0" });
    }
    if spec.n_radial == 0 {
        return Err(Error::InvalidParameter { name: "n_radial", reason: "box modes count from 1" });
    }
    let z = specfun::spherical_bessel_zero(spec.idx.ell(), spec.n_radial)?;
    let k = z / r#box.r_max;
    spec.alpha_sq = k * k - spec.eta * spec.eta;
    let mode = ModeFunction::from_radial(spec, MetricSpec::minkowski(), RadialPart::Bessel { k }, r#box)?;
    Ok(mode.with_family(Family::Free))
}

/// The ball of radius `r_box` with node counts that resolve the `(idx, n_radial)` free mode.
pub fn default_ball(idx: AngularIndex, n_radial: u32, r_box: f64) -> Result<Domain> {
    let (nt, np) = angular_nodes(idx);
    let n_r = 48 + 12 * (n_radial + idx.ell()) as usize;
    Domain::ball(r_box, n_r, nt, np)
}

/// Free mode on a ball with default node counts.
pub fn make_free_mode_in_ball(spec: ModeSpec, r_box: f64) -> Result<ModeFunction> {
    make_free_mode(spec, default_ball(spec.idx, spec.n_radial, r_box)?)
}

/// Free mode whose temporal frequency satisfies the mass shell
/// `eta^2 - k^2 = -alpha_sq`, for `alpha_sq` from [`kg_alpha_sq`].
pub fn make_kg_mode(idx: AngularIndex, n_radial: u32, alpha_sq: f64, r#box: Domain) -> Result<ModeFunction> {
    if !(alpha_sq <= 0.0) {
        return Err(Error::Domain { what: "Klein-Gordon alpha^2 must be <= 0", value: alpha_sq });
    }
    let z = specfun::spherical_bessel_zero(idx.ell(), n_radial.max(1))?;
    let k = z / r#box.r_max;
    let eta = math::sqrt(k * k - alpha_sq);
    let mut mode = free_mode_with_eta(ModeSpec::free(eta, idx, alpha_sq, n_radial), r#box)?;
    // Keep the requested multiplier exactly; the snapped one differs by rounding.
    mode.spec.alpha_sq = alpha_sq;
    debug_assert!((eta * eta - k * k + alpha_sq).abs() <= 8.0 * f64::EPSILON * (eta * eta), "mass-shell identity");
    Ok(mode)
}

/// Localized Laguerre-Gaussian mode, normalized on `[0, max(10/sqrt(beta), 8 sigma_r)]`.
pub fn make_localized_mode(spec: ModeSpec, constraint: LocalizationConstraint) -> Result<ModeFunction> {
    if !(spec.beta > 0.0 && spec.beta.is_finite()) {
        return Err(Error::InvalidParameter { name: "beta", reason: "localized modes need beta > 0" });
    }
    let ell = f64::from(spec.idx.ell());
    let n = ((spec.alpha_sq + spec.eta * spec.eta) / spec.beta - 2.0 * ell - 3.0) / 4.0;
    let nearest = math::round(n);
    if !n.is_finite() || nearest < 0.0 || (n - nearest).abs() > 1e-9 * nearest.max(1.0) {
        return Err(Error::UnsupportedIndex { index: n });
    }
    if nearest != f64::from(spec.n_radial) {
        return Err(Error::InvalidParameter {
            name: "n_radial",
            reason: "disagrees with the quantization of alpha_sq",
        });
    }
    let r_cut = (10.0 / math::sqrt(spec.beta)).max(8.0 * constraint.sigma_r());
    let (nt, np) = angular_nodes(spec.idx);
    let widths = math::round(r_cut * math::sqrt(spec.beta) / 12.0).max(1.0) as usize;
    let n_r = ((64 + 12 * (spec.n_radial + spec.idx.ell()) as usize) * widths).min(1024);
    let dom = Domain::ball(r_cut, n_r, nt, np)?;
    let radial = RadialPart::Oscillator { beta: spec.beta };
    let mode = ModeFunction::from_radial(spec, MetricSpec::minkowski(), radial, dom)?;
    Ok(mode.with_family(Family::Localized))
}

/// Hydrogenic mode wrapper used by the hydrogen module.
/// The amplitude is set to `norm` instead of the quadrature value.
pub(crate) fn make_hydrogen_mode(spec: ModeSpec, n: u32, a: f64, norm: f64, dom: Domain) -> Result<ModeFunction> {
    let mut mode = ModeFunction::from_radial(spec, MetricSpec::minkowski(), RadialPart::Hydrogen { n, a }, dom)?;
    mode.spec.norm = norm;
    Ok(mode.with_family(Family::Hydrogen))
}

/// Schwarzschild mode on the shell `[r_in, r_out]` with Dirichlet walls,
/// the `n_radial`-th (from 1) eigenvalue `alpha'^2` found by shooting.
pub fn make_shell_mode(
    metric: MetricSpec,
    eta: f64,
    idx: AngularIndex,
    r_in: f64,
    r_out: f64,
    n_radial: u32,
    rel_tol: f64,
) -> Result<ModeFunction> {
    let shell = schwarzschild::dirichlet_shell(metric, eta, idx.ell(), r_in, r_out, n_radial, rel_tol)?;
    let spec = ModeSpec { eta, idx, alpha_sq: shell.alpha_prime_sq, beta: 0.0, n_radial, norm: 1.0 };
    let (nt, np) = angular_nodes(idx);
    let n_r = (64 + 16 * (n_radial + idx.ell()) as usize).min(1024);
    let dom = Domain::new(r_in, r_out, n_r, nt, np)?;
    let mode = ModeFunction::from_radial(spec, metric, RadialPart::Shell(Arc::new(shell.solution)), dom)?;
    Ok(mode.with_family(Family::Shell))
}

/// Six-point central difference.
fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) + f(x + 3.0 * h))
        / (60.0 * h)
}

/// Normalized residual of the mode's field equation at `p`:
///
/// ```text
/// (1/x) d_tau^2 Psi - (1/r^2) d_r(r^2 x d_r Psi) - (angular Laplacian / r^2) Psi
///     + beta^2 r^2 Psi - alpha^2(r) Psi
/// ```
///
/// with `x = 1 - r_s/r` (`x = 1` in flat space). The time derivative is
/// analytic; the `r` and `theta` second derivatives are central differences of
/// the analytic first derivatives. The magnitude is divided by the largest of
/// the individual terms.
pub fn pde_residual(mode: &ModeFunction, p: &CoordPoint) -> Result<f64> {
    let s = math::sin(p.theta);
    if !(p.theta > 0.0 && p.theta < PI) || s == 0.0 || !(p.r > 0.0) {
        return Err(Error::CoordinateSingularity { r: p.r, theta: p.theta });
    }
    let x = mode.metric.lapse_sq(p.r)?;
    let spec = &mode.spec;
    let (lo, hi) = mode.radial.support();
    if !(p.r > lo && p.r < hi) {
        return Err(Error::Domain { what: "r must lie inside the radial support", value: p.r });
    }
    let r_s = mode.metric.r_s();
    let ell = spec.idx.ell();

    let psi = mode.value(p)?;
    let (rv, _) = mode.radial.eval(ell, spec.n_radial, p.r);
    let t = mode.temporal(p.tau) * spec.norm;
    let y = specfun::spherical_harmonic(spec.idx, p.theta, p.phi)?;

    let h_r = math::pow2_floor(1e-3 * (p.r - lo.max(r_s)).min(hi - p.r).min(1.0));
    let flux = |r: f64| {
        let (_, d) = mode.radial.eval(ell, spec.n_radial, r);
        r * (r - r_s) * d
    };
    let radial_term = t * y * (central_diff(flux, p.r, h_r) / (p.r * p.r));

    // Y = Theta(theta) e^{i m phi} with Theta real.
    let idx = spec.idx;
    let h_t = math::pow2_floor(1e-3 * p.theta.min(PI - p.theta).min(1.0));
    let polar = |th: f64| {
        let (_, dy) = specfun::spherical_harmonic_with_deriv(idx, th, 0.0).unwrap_or_default();
        math::sin(th) * dy.re
    };
    let m = f64::from(idx.m());
    let theta_val = specfun::spherical_harmonic(idx, p.theta, 0.0)?.re;
    let ang = central_diff(polar, p.theta, h_t) / s - m * m / (s * s) * theta_val;
    let angular_term = t * math::cis(m * p.phi) * (rv * ang / (p.r * p.r));

    let time_term = psi * (-spec.eta * spec.eta / x);
    let trap = psi * (spec.beta * spec.beta * p.r * p.r);
    let mass = psi * mode.alpha_sq_at(p.r);

    let total = time_term - radial_term - angular_term + trap - mass;
    let scale = [time_term, radial_term, angular_term, trap, mass].iter().fold(1e-30f64, |acc, t| acc.max(t.norm()));
    Ok(total.norm() / scale)
}
