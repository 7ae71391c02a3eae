//! Dormand-Prince 5(4) with the fourth-order continuous extension.

use alloc::vec::Vec;

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// b - b*
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub rel_tol: f64,
    pub initial_step: Option<f64>,
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Options {
    pub fn new(rel_tol: f64) -> Self {
        Self { rel_tol, initial_step: None, max_step: None, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Failure {
    StepUnderflow { t: f64 },
    NonFinite { last_t: f64 },
    TooManySteps { t: f64 },
}

/// One accepted step and its interpolation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; N] {
        self.rc[0]
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; N];
        for (i, out) in y.iter_mut().enumerate() {
            let rc = &self.rc;
            *out = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
        }
        y
    }
}

/// Accepted steps of one integration, usable as a continuous solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    steps: Vec<DenseStep<N>>,
    t_end: f64,
    y_end: [f64; N],
}

impl<const N: usize> Trajectory<N> {
    pub fn steps(&self) -> &[DenseStep<N>] {
        &self.steps
    }

    pub fn t_start(&self) -> f64 {
        self.steps.first().map_or(self.t_end, |s| s.t0)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> [f64; N] {
        self.y_end
    }

    /// Accepted step boundaries `(t, y)`, including both ends.
    pub fn knots(&self) -> impl Iterator<Item = (f64, [f64; N])> + '_ {
        self.steps.iter().map(|s| (s.t0, s.start())).chain(core::iter::once((self.t_end, self.y_end)))
    }

    /// Dense output at `t`, clamped to the integrated interval.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t >= self.t_end {
            return self.y_end;
        }
        let idx = self.steps.partition_point(|s| s.t0 <= t);
        let step = &self.steps[idx.saturating_sub(1)];
        if t == step.t0 {
            return step.start();
        }
        step.eval(t)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &Options,
) -> Result<Trajectory<N>, Failure>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    debug_assert!(t1 > t0);
    let span = t1 - t0;
    let max_step = opts.max_step.unwrap_or(span);
    let mut h = opts.initial_step.unwrap_or(1e-3 * span).min(max_step);
    let mut t = t0;
    let mut y = y0;
    let mut scale = [0.0f64; N];
    for (s, v) in scale.iter_mut().zip(&y) {
        *s = v.abs();
    }
    let mut k1 = f(t, &y);
    if !finite(&k1) || !finite(&y) {
        return Err(Failure::NonFinite { last_t: t });
    }
    let mut steps = Vec::new();
    let mut rejected_last = false;

    while t < t1 {
        if steps.len() >= opts.max_steps {
            return Err(Failure::TooManySteps { t });
        }
        let last = t + h >= t1;
        // The step is the representable difference, so consecutive
        // interpolants meet exactly at the knots.
        h = if last { t1 - t } else { (t + h) - t };
        if h <= 1e-14 * t.abs().max(span) {
            return Err(Failure::StepUnderflow { t });
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let t_next = if last { t1 } else { t + h };
        let k6 = f(t_next, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t_next, &y1);

        if !finite(&y1) || !finite(&k7) {
            // Retry smaller; a genuine blow-up ends in underflow or here again.
            if h <= 1e-10 * span {
                return Err(Failure::NonFinite { last_t: t });
            }
            h *= FAC_MIN;
            rejected_last = true;
            continue;
        }

        let global = scale.iter().fold(0.0f64, |a, &b| a.max(b));
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.rel_tol * scale[i].max(y[i].abs()).max(y1[i].abs()).max(1e-30 * global).max(1e-300);
            err_sq += (e / sc) * (e / sc);
        }
        let err = libm::sqrt(err_sq / N as f64);

        if err <= 1.0 {
            let mut rc = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rc[0][i] = y[i];
                rc[1][i] = ydiff;
                rc[2][i] = bspl;
                rc[3][i] = ydiff - h * k7[i] - bspl;
                rc[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            steps.push(DenseStep { t0: t, h, rc });
            t = t_next;
            y = y1;
            k1 = k7;
            for (s, v) in scale.iter_mut().zip(&y) {
                *s = s.max(v.abs());
            }
            let fac = if err == 0.0 { FAC_MAX } else { SAFETY * libm::pow(err, -0.2) };
            let fac = if rejected_last { fac.min(1.0) } else { fac };
            h = (h * fac.clamp(FAC_MIN, FAC_MAX)).min(max_step);
            rejected_last = false;
        } else {
            let fac = (SAFETY * libm::pow(err, -0.2)).clamp(FAC_MIN, 1.0);
            h *= fac;
            rejected_last = true;
        }
    }
    Ok(Trajectory { steps, t_end: t1, y_end: y })
}
