//! Fisher-information-metric integrals of a mode and the constraint checks built on them.
//!
//! For a normalized mode `Psi` the report holds, for every pair of coordinates,
//!
//! * `entries`: `Re int (d_mu Psi)^* (d_nu Psi) dV`, the raw coordinate partials;
//! * `weighted`: the same with orthonormal-frame gradients `w_mu d_mu Psi`;
//! * `expected`: on the diagonal, the multiplier-field averages the weighted
//!   integrals must equal (`eta^2 <1/x>`, `<kappa_1^2>`, `<kappa_2^2>`, `<kappa_3^2>`).
//!
//! The `tau` partial is `-i eta Psi` and enters analytically; only the
//! spatial integral is done by quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, MetricSpec};
use crate::math;
use crate::modes::{Family, ModeFunction, ModeSpec};
use crate::quadrature::{Domain, Rule, Sums};

/// Default pass threshold for the relative constraint residuals.
pub const CONSTRAINT_TOL: f64 = 1e-6;
/// Allowed deviation of `int |Psi|^2` from one.
pub const NORMALIZATION_TOL: f64 = 1e-6;
/// Agreement required between a quadrature and its refinement, relative to `max(|v|, 1)`.
pub const REFINEMENT_TOL: f64 = 1e-9;

const PAIRS: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];
const SLOTS: usize = 1 + 4 * PAIRS.len() + 4;

pub type Matrix4 = [[f64; 4]; 4];

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FisherReport {
    pub mode: ModeSpec,
    pub family: Family,
    pub domain: Domain,
    /// `int |Psi|^2` on the domain.
    pub norm: f64,
    pub entries: Matrix4,
    pub weighted: Matrix4,
    pub expected: Matrix4,
    /// Diagonal: `|weighted - expected|` relative to their size.
    /// Off-diagonal: `|entries|`, whose expected value is zero.
    pub residuals: Matrix4,
    /// Imaginary parts of the raw integrals; antisymmetric.
    pub imag_parts: Matrix4,
    pub tol: f64,
}

impl FisherReport {
    /// All four diagonal constraint residuals within `tol`.
    pub fn pass(&self) -> bool {
        (0..4).all(|i| self.residuals[i][i] <= self.tol)
    }

    /// Largest off-diagonal `|Re entries|`.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m = m.max(self.entries[i][j].abs());
                }
            }
        }
        m
    }

    /// `weighted[mu][mu] / expected[mu][mu]`, one where both vanish.
    pub fn diagonal_ratios(&self) -> [f64; 4] {
        let mut out = [1.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let (w, e) = (self.weighted[i][i], self.expected[i][i]);
            if !(w == 0.0 && e == 0.0) {
                *o = w / e;
            }
        }
        out
    }

    /// The raw entries scaled by one quarter.
    pub fn quarter_entries(&self) -> Matrix4 {
        self.entries.map(|row| row.map(|v| 0.25 * v))
    }
}

fn sweep(mode: &ModeFunction, dom: &Domain) -> Result<Sums<SLOTS>> {
    let metric = *mode.metric();
    let mut failure = None;
    let sums = Rule::new(dom).integrate(|p| {
        let evaluated = mode.value_and_partials(p).and_then(|(psi, d)| {
            let w = geometry::gradient_weights(&metric, p)?;
            let k = mode.multiplier_fields(p)?;
            Ok((psi, d, w, k))
        });
        let (psi, d, w, k) = match evaluated {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                return Sums([f64::NAN; SLOTS]);
            }
        };
        let rho = psi.norm_sqr();
        let g: [Complex64; 4] = core::array::from_fn(|i| d[i] * w[i]);
        let mut out = [0.0; SLOTS];
        out[0] = rho;
        for (n, &(i, j)) in PAIRS.iter().enumerate() {
            let raw = d[i].conj() * d[j];
            let wt = g[i].conj() * g[j];
            out[1 + n] = raw.re;
            out[11 + n] = raw.im;
            out[21 + n] = wt.re;
            out[31 + n] = wt.im;
        }
        out[41] = -k[0] * rho;
        out[42] = k[1] * rho;
        out[43] = k[2] * rho;
        out[44] = k[3] * rho;
        Sums(out)
    });
    match (sums, failure) {
        (_, Some(e)) => Err(e),
        (s, None) => s,
    }
}

/// Fine-domain sums and `|coarse - fine|` per slot.
fn converged_sweep(mode: &ModeFunction, dom: &Domain) -> Result<([f64; SLOTS], [f64; SLOTS])> {
    dom.validate_for(mode.metric())?;
    let coarse = sweep(mode, dom)?;
    let norm = coarse.0[0];
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let fine = sweep(mode, &dom.refined())?;
    // Weighted off-diagonals carry 1/sin(theta) factors and converge only
    // algebraically; they are reported but not gated.
    let gated = |slot: usize| !(21..41).contains(&slot) || PAIRS[(slot - 21) % 10].0 == PAIRS[(slot - 21) % 10].1;
    for (slot, (c, f)) in coarse.0.iter().zip(&fine.0).enumerate() {
        if gated(slot) && (c - f).abs() > REFINEMENT_TOL * f.abs().max(1.0) {
            return Err(Error::Convergence { previous: *c, last: *f, rel_tol: REFINEMENT_TOL });
        }
    }
    let spread = core::array::from_fn(|i| (coarse.0[i] - fine.0[i]).abs());
    Ok((fine.0, spread))
}

fn symmetric(values: &[f64], sign: f64) -> Matrix4 {
    let mut m = [[0.0; 4]; 4];
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        m[i][j] = values[n];
        if i != j {
            m[j][i] = sign * values[n];
        }
    }
    m
}

/// Relative deviation with a floor of `floor` on the scale.
fn relative(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Builds the report on `dom` using the default tolerance.
pub fn fisher_matrix(mode: &ModeFunction, dom: &Domain) -> Result<FisherReport> {
    fisher_matrix_with_tol(mode, dom, CONSTRAINT_TOL)
}

pub fn fisher_matrix_with_tol(mode: &ModeFunction, dom: &Domain, tol: f64) -> Result<FisherReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", reason: "must be positive" });
    }
    let (v, spread) = converged_sweep(mode, dom)?;
    let entries = symmetric(&v[1..11], 1.0);
    let imag_parts = symmetric(&v[11..21], -1.0);
    let weighted = symmetric(&v[21..31], 1.0);
    let mut expected = [[0.0; 4]; 4];
    for i in 0..4 {
        expected[i][i] = v[41 + i];
    }
    let total: f64 = (0..4).map(|i| expected[i][i].abs()).sum();
    let mut residuals = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            residuals[i][j] = if i == j {
                // The refinement spread is added: no residual is reported below
                // the accuracy the quadrature demonstrated.
                let diag = PAIRS.iter().position(|&(a, b)| a == i && b == i).unwrap_or(0);
                let slack = spread[21 + diag] + spread[41 + i];
                relative(weighted[i][i], expected[i][i], 1e-14 * total)
                    + slack / weighted[i][i].abs().max(expected[i][i].abs()).max(1e-14 * total).max(f64::MIN_POSITIVE)
            } else {
                entries[i][j].abs()
            };
        }
    }
    Ok(FisherReport {
        mode: *mode.spec(),
        family: mode.family(),
        domain: *dom,
        norm: v[0],
        entries,
        weighted,
        expected,
        residuals,
        imag_parts,
        tol,
    })
}

/// One coordinate's constraint: `int |grad_mu Psi|^2` against `<kappa_mu^2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoordinateCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstraintCheck {
    /// Ordered `tau, r, theta, phi`.
    pub coords: [CoordinateCheck; 4],
    pub tol: f64,
}

impl ConstraintCheck {
    pub fn pass(&self) -> bool {
        self.coords.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.residual))
    }
}

pub fn constraint_check(mode: &ModeFunction, metric: &MetricSpec, dom: &Domain) -> Result<ConstraintCheck> {
    constraint_check_with_tol(mode, metric, dom, CONSTRAINT_TOL)
}

/// Checks the four per-coordinate constraints of `mode` on `metric`.
pub fn constraint_check_with_tol(
    mode: &ModeFunction,
    metric: &MetricSpec,
    dom: &Domain,
    tol: f64,
) -> Result<ConstraintCheck> {
    if mode.metric() != metric {
        return Err(Error::MetricMismatch);
    }
    let report = fisher_matrix_with_tol(mode, dom, tol)?;
    let coords = core::array::from_fn(|i| {
        let residual = report.residuals[i][i];
        CoordinateCheck { lhs: report.weighted[i][i], rhs: report.expected[i][i], residual, pass: residual <= tol }
    });
    Ok(ConstraintCheck { coords, tol })
}

/// Geodesic distance `2 arccos(sum sqrt(a_j b_j))` between two discrete distributions.
///
/// Evaluated as `4 asin(|sqrt(a) - sqrt(b)| / 2)`, which is exact at `a = b`.
pub fn statistical_distance(rho_a: &[f64], rho_b: &[f64]) -> Result<f64> {
    if rho_a.len() != rho_b.len() {
        return Err(Error::Shape { left: rho_a.len(), right: rho_b.len() });
    }
    if rho_a.is_empty() {
        return Err(Error::InvalidParameter { name: "distribution", reason: "must have at least one cell" });
    }
    let unit = |rho: &[f64]| -> Result<f64> {
        let mut sum = 0.0;
        for &v in rho {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain { what: "probability cells must be positive", value: v });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Domain { what: "distribution must sum to one", value: sum });
        }
        Ok(sum)
    };
    let sa = unit(rho_a)?;
    let sb = unit(rho_b)?;
    let mut chord_sq = 0.0;
    for (a, b) in rho_a.iter().zip(rho_b) {
        let d = math::sqrt(a / sa) - math::sqrt(b / sb);
        chord_sq += d * d;
    }
    let half_chord = (0.5 * math::sqrt(chord_sq)).min(1.0);
    Ok(4.0 * math::asin(half_chord))
}
