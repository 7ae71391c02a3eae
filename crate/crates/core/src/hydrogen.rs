//! Bound hydrogenic states `R_nl(r) Y_l^m(theta, phi)` in units where the
//! radial equation reads `R'' + 2R'/r + (2/(a r) - 1/(n a)^2 - l(l+1)/r^2) R = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CoordPoint, MetricSpec};
use crate::math;
use crate::modes::{self, ModeFunction, ModeSpec};
use crate::quadrature::{Domain, Rule, Sums};
use crate::specfun::{self, AngularIndex};

/// Radial truncation in units of `n a`.
pub const RADIAL_EXTENT: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HydrogenState {
    n: u32,
    idx: AngularIndex,
    a: f64,
}

impl HydrogenState {
    pub fn new(n: u32, idx: AngularIndex, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter { name: "n", reason: "principal number starts at 1" });
        }
        if idx.ell() >= n {
            return Err(Error::InvalidParameter { name: "ell", reason: "must satisfy ell <= n - 1" });
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain { what: "Bohr radius must be positive", value: a });
        }
        Ok(Self { n, idx, a })
    }

    /// `(n, l, m)` with `a = 1`.
    pub fn from_quantum_numbers(n: u32, ell: u32, m: i32) -> Result<Self> {
        Self::new(n, AngularIndex::new(ell, m)?, 1.0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn idx(&self) -> AngularIndex {
        self.idx
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The ball `r <= 60 a n` with enough nodes to resolve the state.
    pub fn default_domain(&self) -> Result<Domain> {
        let (l, am) = (self.idx.ell() as usize, self.idx.abs_m() as usize);
        Domain::ball(RADIAL_EXTENT * self.a * f64::from(self.n), 128, (l + 8).max(16), (2 * am + 8).max(8))
    }

    /// `sqrt((2/(n a))^3 (n-l-1)! / (2n (n+l)!))`.
    pub fn radial_norm(&self) -> f64 {
        let n = self.n;
        let l = self.idx.ell();
        let mut ratio = 1.0;
        // (n-l-1)!/(n+l)! = 1 / prod_{k=n-l}^{n+l} k
        for k in (n - l)..=(n + l) {
            ratio /= f64::from(k);
        }
        let s = 2.0 / (f64::from(n) * self.a);
        math::sqrt(s * s * s * ratio / (2.0 * f64::from(n)))
    }

    fn spec(&self) -> ModeSpec {
        let na = f64::from(self.n) * self.a;
        ModeSpec {
            eta: 0.0,
            idx: self.idx,
            alpha_sq: -1.0 / (na * na),
            beta: 0.0,
            n_radial: self.n - self.idx.ell() - 1,
            norm: self.radial_norm(),
        }
    }

    pub fn mode(&self) -> Result<ModeFunction> {
        self.mode_on(self.default_domain()?)
    }

    pub fn mode_on(&self, dom: Domain) -> Result<ModeFunction> {
        modes::make_hydrogen_mode(self.spec(), self.n, self.a, self.radial_norm(), dom)
    }
}

/// `rho^l e^{-rho/2} L_{n-l-1}^{2l+1}(rho)` and its `r`-derivative, `rho = 2r/(n a)`.
pub(crate) fn radial_shape(n: u32, ell: u32, a: f64, r: f64) -> (f64, f64) {
    let s = 2.0 / (f64::from(n) * a);
    let rho = s * r;
    let deg = n - ell - 1;
    let alpha = f64::from(2 * ell + 1);
    let l = specfun::laguerre(deg, alpha, rho);
    let dl = specfun::laguerre_deriv(deg, alpha, rho);
    let g = math::exp(-0.5 * rho);
    if ell == 0 {
        (g * l, s * g * (dl - 0.5 * l))
    } else {
        let p = math::powi(rho, ell as i32 - 1);
        let lf = f64::from(ell);
        (p * rho * g * l, s * g * p * ((lf - 0.5 * rho) * l + rho * dl))
    }
}

/// `Psi_nlm` at `p` with the standard normalization.
pub fn hydrogen_psi(state: &HydrogenState, p: &CoordPoint) -> Result<Complex64> {
    if !(p.r >= 0.0 && p.r.is_finite()) {
        return Err(Error::Domain { what: "r must be finite and >= 0", value: p.r });
    }
    let (shape, _) = radial_shape(state.n, state.idx.ell(), state.a, p.r);
    let y = specfun::spherical_harmonic(state.idx, p.theta, p.phi)?;
    Ok(y * (state.radial_norm() * shape))
}

/// The three spatial Fisher integrals of a hydrogenic state and their multiplier-field right sides.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AppendixCheck {
    pub state: HydrogenState,
    pub norm: f64,
    /// `int |d_r Psi|^2`, `int |d_theta Psi|^2`, `int |d_phi Psi|^2`.
    pub lhs: [f64; 3],
    /// `<kappa_1^2>`, `<r^2 kappa_2^2>`, `<r^2 sin^2(theta) kappa_3^2>`.
    pub rhs: [f64; 3],
    /// `|lhs - rhs| / |rhs|` per coordinate.
    pub residuals: [f64; 3],
    /// `(1/(45 a^2), 1, 4)` for the `(3, 2, 2)` state.
    pub reference: Option<[f64; 3]>,
    pub reference_residuals: Option<[f64; 3]>,
    /// Mean of `reference / lhs`: one when the integrals equal the metric
    /// components themselves, a quarter when they equal a quarter of them.
    pub metric_factor: Option<f64>,
}

impl AppendixCheck {
    pub fn pass(&self, tol: f64) -> bool {
        let own = self.residuals.iter().all(|r| *r <= tol);
        let reference = self.reference_residuals.map_or(true, |rr| rr.iter().all(|r| *r <= tol));
        own && reference
    }
}

/// The Fisher integrals printed for `Psi_322`.
pub fn reference_values(state: &HydrogenState) -> Option<[f64; 3]> {
    let idx = state.idx;
    (state.n == 3 && idx.ell() == 2 && idx.m() == 2).then(|| [1.0 / (45.0 * state.a * state.a), 1.0, 4.0])
}

fn sweep(mode: &ModeFunction, dom: &Domain) -> Result<Sums<7>> {
    Rule::new(dom).integrate(|p| {
        let (psi, d) = match mode.value_and_partials(p) {
            Ok(v) => v,
            Err(_) => return Sums([f64::NAN; 7]),
        };
        let rho = psi.norm_sqr();
        let r2 = p.r * p.r;
        let s = math::sin(p.theta);
        let m = f64::from(mode.spec().idx.m());
        let k1 = mode.alpha_sq_at(p.r) - mode.spec().idx.casimir() / r2;
        let k2r2 = mode.spec().idx.casimir() - m * m / (s * s);
        Sums([rho, d[1].norm_sqr(), d[2].norm_sqr(), d[3].norm_sqr(), k1 * rho, k2r2 * rho, m * m * rho])
    })
}

/// Relative agreement required between a domain and its refinement.
const REFINEMENT_TOL: f64 = 1e-9;

/// Computes the three spatial Fisher integrals of `state` on `dom`, checks
/// them against the multiplier-field right sides and, for `(3, 2, 2)`, against
/// the printed values.
pub fn appendix_fisher_check(state: &HydrogenState, dom: &Domain) -> Result<AppendixCheck> {
    dom.validate_for(&MetricSpec::minkowski())?;
    let mode = state.mode_on(*dom)?;
    let coarse = sweep(&mode, dom)?;
    let fine = sweep(&mode, &dom.refined())?;
    for (c, f) in coarse.0.iter().zip(&fine.0) {
        if (c - f).abs() > REFINEMENT_TOL * f.abs().max(1e-3) {
            return Err(Error::Convergence { previous: *c, last: *f, rel_tol: REFINEMENT_TOL });
        }
    }
    let v = fine.0;
    let lhs = [v[1], v[2], v[3]];
    let rhs = [v[4], v[5], v[6]];
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / b.abs().max(a.abs()) };
    let residuals = [rel(lhs[0], rhs[0]), rel(lhs[1], rhs[1]), rel(lhs[2], rhs[2])];
    let reference = reference_values(state);
    let reference_residuals = reference.map(|r| [rel(lhs[0], r[0]), rel(lhs[1], r[1]), rel(lhs[2], r[2])]);
    let metric_factor = reference.map(|r| (r[0] / lhs[0] + r[1] / lhs[1] + r[2] / lhs[2]) / 3.0);
    Ok(AppendixCheck { state: *state, norm: v[0], lhs, rhs, residuals, reference, reference_residuals, metric_factor })
}
