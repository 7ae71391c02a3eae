//! The Schwarzschild radial equation
//!
//! ```text
//! (1/r^2) d/dr [ r^2 (1 - r_s/r) R' ] + ( a^2 + eta^2 / (1 - r_s/r) - l(l+1)/r^2 ) R = 0
//! ```
//!
//! solved as an initial-value problem in the flux variables `(R, Q)` with
//! `Q = r^2 (1 - r_s/r) R'`, which stay bounded at the regular singular
//! point `r = r_s`. Boundary or eigenvalue problems are built on top
//! (see [`dirichlet_shell`]).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{MetricKind, MetricSpec};
use crate::math;
use crate::ode::{self, Failure, Options, Trajectory};

/// Minimum number of samples in a returned grid.
pub const MIN_GRID_POINTS: usize = 200;
/// Accepted range of the integrator's relative tolerance.
pub const REL_TOL_RANGE: (f64, f64) = (1e-12, 1e-4);
/// Largest normalized residual a returned solution may carry, unless the
/// tightest tolerance cannot reach it.
pub const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialProblem {
    pub metric: MetricSpec,
    pub eta_prime: f64,
    pub ell: u32,
    pub alpha_prime_sq: f64,
    pub r_start: f64,
    pub r_end: f64,
    pub init_value: f64,
    pub init_slope: f64,
}

impl RadialProblem {
    pub fn validate(&self) -> Result<()> {
        let r_s = self.metric.r_s();
        if !(self.r_start > r_s) || !self.r_start.is_finite() {
            return Err(Error::Horizon { r: self.r_start, r_s });
        }
        if self.metric.kind() == MetricKind::MinkowskiSpherical && !(self.r_start > 0.0) {
            return Err(Error::CoordinateSingularity { r: self.r_start, theta: f64::NAN });
        }
        if !(self.r_end > self.r_start) || !self.r_end.is_finite() {
            return Err(Error::InvalidParameter { name: "r_end", reason: "must be finite and > r_start" });
        }
        let finite = [self.eta_prime, self.alpha_prime_sq, self.init_value, self.init_slope];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "radial problem",
                reason: "eta', alpha'^2 and initial data must be finite",
            });
        }
        Ok(())
    }

    /// Lapse squared `x = 1 - r_s/r`.
    fn lapse_sq(&self, r: f64) -> f64 {
        (r - self.metric.r_s()) / r
    }

    /// The bracket `alpha'^2 + eta'^2/x - l(l+1)/r^2` multiplying `R`.
    pub fn coefficient(&self, r: f64) -> f64 {
        let l = f64::from(self.ell);
        self.alpha_prime_sq + self.eta_prime * self.eta_prime / self.lapse_sq(r) - l * (l + 1.0) / (r * r)
    }

    /// `r^2 x`, the weight in front of `R'`.
    fn flux_weight(&self, r: f64) -> f64 {
        // r^2 (1 - r_s/r) = r (r - r_s): no cancellation near the horizon.
        r * (r - self.metric.r_s())
    }

    fn rhs(&self, r: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1] / self.flux_weight(r), -r * r * self.coefficient(r) * y[0]]
    }

    /// Same problem with the start moved to `r_s (1 + delta)` and Frobenius initial data.
    pub fn starting_near_horizon(mut self, delta: f64) -> Result<Self> {
        let (v, s) = near_horizon_start(&self, delta)?;
        self.r_start = self.metric.r_s() * (1.0 + delta);
        self.init_value = v;
        self.init_slope = s;
        Ok(self)
    }

    pub fn with_metric(mut self, metric: MetricSpec) -> Self {
        self.metric = metric;
        self
    }
}

/// A solved radial problem on a grid, with a continuous interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub problem: RadialProblem,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    /// Finite-difference residual of the second-order equation at each grid point.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Tolerance of the accepted integration; tighter than requested when the
    /// requested one left a residual above [`RESIDUAL_TOL`].
    pub rel_tol: f64,
    trajectory: Trajectory<2>,
}

impl RadialSolution {
    /// `(R(r), R'(r))` from the dense output.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let [v, q] = self.trajectory.eval(r);
        (v, q / self.problem.flux_weight(r))
    }

    /// `(R, Q)` with `Q = r^2 (1 - r_s/r) R'`.
    pub fn eval_flux(&self, r: f64) -> [f64; 2] {
        self.trajectory.eval(r)
    }

    pub fn r_start(&self) -> f64 {
        self.problem.r_start
    }

    pub fn r_end(&self) -> f64 {
        self.problem.r_end
    }

    pub fn step_count(&self) -> usize {
        self.trajectory.steps().len()
    }
}

/// `r^2 (1 - r_s/r) (R_a R_b' - R_b R_a')`, constant for two solutions of one problem.
pub fn wronskian(a: &RadialSolution, b: &RadialSolution, r: f64) -> f64 {
    let [ra, qa] = a.eval_flux(r);
    let [rb, qb] = b.eval_flux(r);
    ra * qb - rb * qa
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if !(REL_TOL_RANGE.0..=REL_TOL_RANGE.1).contains(&rel_tol) {
        return Err(Error::InvalidParameter { name: "rel_tol", reason: "must lie in [1e-12, 1e-4]" });
    }
    Ok(())
}

fn map_failure(prob: &RadialProblem, failure: Failure) -> Error {
    let r_s = prob.metric.r_s();
    let near = |r: f64| r_s > 0.0 && r - r_s <= 10.0 * (prob.r_start - r_s);
    match failure {
        Failure::StepUnderflow { t } | Failure::TooManySteps { t } if near(t) => Error::NearHorizon { r: t, r_s },
        Failure::StepUnderflow { t } | Failure::TooManySteps { t } => Error::StepUnderflow { r: t },
        Failure::NonFinite { last_t } => Error::BlowUp { last_r: last_t },
    }
}

fn integrate_problem(prob: &RadialProblem, rel_tol: f64) -> Result<Trajectory<2>> {
    let y0 = [prob.init_value, prob.init_slope * prob.flux_weight(prob.r_start)];
    let span = prob.r_end - prob.r_start;
    let mut opts = Options::new(rel_tol);
    // Near the horizon the solution varies on the scale r - r_s.
    let gap = prob.r_start - prob.metric.r_s();
    let h0 = if prob.metric.r_s() > 0.0 { (1e-3 * gap).min(1e-3 * span) } else { 1e-3 * span };
    opts.initial_step = Some(h0);
    ode::integrate(|r, y| prob.rhs(r, y), prob.r_start, y0, prob.r_end, &opts).map_err(|f| map_failure(prob, f))
}

/// Integrates the radial equation from `r_start` to `r_end`.
///
/// Local error per step is held below `rel_tol` relative to the solution
/// scale. The returned residual is computed independently of the stepper by
/// finite differences of the interpolated flux; while it exceeds
/// [`RESIDUAL_TOL`] the integration is repeated with half the tolerance.
pub fn solve_radial(prob: &RadialProblem, rel_tol: f64) -> Result<RadialSolution> {
    prob.validate()?;
    check_rel_tol(rel_tol)?;
    let mut tol = rel_tol;
    loop {
        let sol = build_solution(*prob, integrate_problem(prob, tol)?, tol);
        if sol.max_residual <= RESIDUAL_TOL || tol <= REL_TOL_RANGE.0 {
            return Ok(sol);
        }
        // Halving keeps requests that differ by powers of two on one ladder.
        tol = (tol / 2.0).max(REL_TOL_RANGE.0);
    }
}

fn build_solution(problem: RadialProblem, trajectory: Trajectory<2>, rel_tol: f64) -> RadialSolution {
    let (a, b) = (problem.r_start, problem.r_end);
    let mut grid: Vec<f64> = trajectory.knots().map(|(r, _)| r).collect();
    let n_uniform = MIN_GRID_POINTS + 1;
    for i in 0..n_uniform {
        grid.push(a + (b - a) * i as f64 / (n_uniform - 1) as f64);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut values = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    for &r in &grid {
        let [v, q] = trajectory.eval(r);
        values.push(v);
        slopes.push(q / problem.flux_weight(r));
    }

    // Residual |Q'/r^2 + c R| with Q' from a five-point stencil on the dense output.
    let mut raw = Vec::with_capacity(grid.len());
    let mut scale = 0.0f64;
    let gap = a - problem.metric.r_s();
    for &r in &grid {
        let local = if problem.metric.r_s() > 0.0 { r - problem.metric.r_s() } else { r };
        let d = math::pow2_floor(1e-4 * local.min(b - a).min(gap.max(1e-300) * 1e3));
        let c = r.clamp(a + 2.0 * d, b - 2.0 * d);
        let q = |x: f64| trajectory.eval(x)[1];
        let dq = (q(c - 2.0 * d) - 8.0 * q(c - d) + 8.0 * q(c + d) - q(c + 2.0 * d)) / (12.0 * d);
        let lhs = dq / (c * c);
        let term = problem.coefficient(c) * trajectory.eval(c)[0];
        scale = scale.max(term.abs()).max(lhs.abs());
        raw.push((lhs + term).abs());
    }
    let residuals: Vec<f64> = if scale > 0.0 { raw.iter().map(|v| v / scale).collect() } else { raw };
    let max_residual = residuals.iter().fold(0.0f64, |m, &v| m.max(v));
    RadialSolution { problem, grid, values, slopes, residuals, max_residual, rel_tol, trajectory }
}

/// Sup-norm deviation between the Schwarzschild solution of `prob` and the
/// flat-space solution carrying the same value and slope at `r_start`,
/// relative to the flat solution's sup-norm on `[r_start, r_end]`.
pub fn flat_limit_deviation(prob: &RadialProblem, rel_tol: f64) -> Result<f64> {
    prob.validate()?;
    if prob.r_start < 100.0 * prob.metric.r_s() {
        return Err(Error::InvalidParameter { name: "far-field window", reason: "r_start must be at least 100 r_s" });
    }
    let curved = solve_radial(prob, rel_tol)?;
    let flat = solve_radial(&prob.with_metric(MetricSpec::minkowski()), rel_tol)?;
    if prob.metric.kind() == MetricKind::MinkowskiSpherical {
        return Ok(0.0);
    }
    Ok(sup_relative(&curved, &flat))
}

fn sup_relative(a: &RadialSolution, b: &RadialSolution) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for r in a.grid.iter().chain(&b.grid) {
        let va = a.eval(*r).0;
        let vb = b.eval(*r).0;
        num = num.max((va - vb).abs());
        den = den.max(vb.abs());
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Leading Frobenius data at `r = r_s (1 + delta)`.
///
/// For `eta' != 0` the exponents at the horizon are `+-i eta' r_s`; the
/// returned `(R, R')` is the real part of the `s^{+i eta' r_s}` branch,
/// `s = r - r_s`, including the first correction term. For `eta' = 0` it is
/// the analytic branch `1 + a_1 s`.
pub fn near_horizon_start(prob: &RadialProblem, delta: f64) -> Result<(f64, f64)> {
    let (v, s) = frobenius_branch(prob, delta)?;
    Ok((v.re, s.re))
}

/// The complex `s^{+i eta' r_s} (1 + a_1 s)` branch and its `r`-derivative.
pub fn frobenius_branch(prob: &RadialProblem, delta: f64) -> Result<(Complex64, Complex64)> {
    if !(1e-8..=1e-2).contains(&delta) {
        return Err(Error::InvalidParameter { name: "delta", reason: "must lie in [1e-8, 1e-2]" });
    }
    let r_s = prob.metric.r_s();
    if !(r_s > 0.0) {
        return Err(Error::InvalidParameter {
            name: "metric",
            reason: "near-horizon data needs a Schwarzschild metric",
        });
    }
    // The offset actually represented by r_start, not r_s * delta.
    let s = r_s * (1.0 + delta) - r_s;
    let nu = prob.eta_prime * r_s;
    let lambda = Complex64::new(0.0, nu);
    let l = f64::from(prob.ell);
    // r_s (1 + 2 lambda) a_1 = -(lambda + 2 eta'^2 r_s^2 + alpha'^2 r_s^2 - l(l+1))
    let num = -(lambda + 2.0 * nu * nu + prob.alpha_prime_sq * r_s * r_s - l * (l + 1.0));
    let a1 = num / ((Complex64::new(1.0, 0.0) + 2.0 * lambda) * r_s);
    // s^lambda = exp(i nu ln s)
    let s_pow = math::cis(nu * math::ln(s));
    let value = s_pow * (a1 * s + 1.0);
    let slope = s_pow * (lambda / s + (lambda + 1.0) * a1);
    Ok((value, slope))
}

/// A Dirichlet eigenmode of the radial equation on the shell `[r_in, r_out]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellMode {
    pub alpha_prime_sq: f64,
    pub n_radial: u32,
    pub solution: RadialSolution,
}

/// Finds the `n_radial`-th (`>= 1`) value of `alpha'^2` for which the solution
/// with `R(r_in) = 0` also vanishes at `r_out`, by bisection on the node count.
pub fn dirichlet_shell(
    metric: MetricSpec,
    eta_prime: f64,
    ell: u32,
    r_in: f64,
    r_out: f64,
    n_radial: u32,
    rel_tol: f64,
) -> Result<ShellMode> {
    if n_radial == 0 {
        return Err(Error::InvalidParameter { name: "n_radial", reason: "shell modes count from 1" });
    }
    let base = RadialProblem {
        metric,
        eta_prime,
        ell,
        alpha_prime_sq: 0.0,
        r_start: r_in,
        r_end: r_out,
        init_value: 0.0,
        init_slope: 1.0,
    };
    base.validate()?;
    check_rel_tol(rel_tol)?;
    let with = |a: f64| RadialProblem { alpha_prime_sq: a, ..base };
    let zeros = |a: f64| -> Result<u32> {
        let traj = integrate_problem(&with(a), rel_tol)?;
        let mut count = 0;
        let mut prev = 0.0f64;
        for (_, y) in traj.knots().skip(1) {
            if prev != 0.0 && (y[0] < 0.0) != (prev < 0.0) {
                count += 1;
            }
            if y[0] != 0.0 {
                prev = y[0];
            }
        }
        Ok(count)
    };

    let x_in = 1.0 - metric.r_s() / r_in;
    let l = f64::from(ell);
    let mut lo = -eta_prime * eta_prime / x_in - 1.0;
    while zeros(lo)? >= n_radial {
        lo = 2.0 * lo - 1.0;
        if lo < -1e12 {
            return Err(Error::NoBracket { what: "shell eigenvalue (lower)" });
        }
    }
    let width = r_out - r_in;
    let k = f64::from(n_radial) * math::PI / width;
    let mut hi = 4.0 * k * k / x_in + l * (l + 1.0) / (r_in * r_in) + 1.0;
    while zeros(hi)? < n_radial {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoBracket { what: "shell eigenvalue (upper)" });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
        if zeros(mid)? >= n_radial {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // lo and hi straddle the eigenvalue; take the end with the smaller |R(r_out)|.
    let end = |a: f64| -> Result<f64> { Ok(integrate_problem(&with(a), rel_tol)?.y_end()[0].abs()) };
    let alpha = if end(lo)? <= end(hi)? { lo } else { hi };
    let solution = solve_radial(&with(alpha), rel_tol)?;
    Ok(ShellMode { alpha_prime_sq: alpha, n_radial, solution })
}
