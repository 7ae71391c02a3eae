use core::fmt;

/// Everything that can go wrong while building or checking a mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    Domain { what: &'static str, value: f64 },
    /// `ell`/`m` violate `|m| <= ell`.
    AngularIndex { ell: u32, m: i32 },
    /// A polynomial index that is not a nonnegative integer.
    UnsupportedIndex { index: f64 },
    /// Evaluation at or inside the horizon `r <= r_s`.
    Horizon { r: f64, r_s: f64 },
    /// Point evaluation at a coordinate singularity (`theta` at a pole or `r = 0`).
    CoordinateSingularity { r: f64, theta: f64 },
    /// A parameter failed validation before any computation started.
    InvalidParameter { name: &'static str, reason: &'static str },
    /// The integrand produced a non-finite sample at the given node.
    NonFiniteIntegrand { r: f64, theta: f64, phi: f64 },
    /// Successive quadrature refinements never agreed to the requested tolerance.
    Convergence { previous: f64, last: f64, rel_tol: f64 },
    /// `alpha^2 + eta^2 <= 0`: no oscillatory radial solution exists.
    Evanescent { k_sq: f64 },
    /// The probability density does not integrate to one on the domain.
    NotNormalized { norm: f64 },
    /// The adaptive step collapsed close to the horizon.
    NearHorizon { r: f64, r_s: f64 },
    /// The adaptive step collapsed away from the horizon.
    StepUnderflow { r: f64 },
    /// The radial state became non-finite; `last_r` is the last good abscissa.
    BlowUp { last_r: f64 },
    /// Two distributions over different supports.
    Shape { left: usize, right: usize },
    /// A mode was checked against a metric other than the one it was built on.
    MetricMismatch,
    /// A root or eigenvalue search failed to bracket a solution.
    NoBracket { what: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::AngularIndex { ell, m } => {
                write!(f, "invalid angular index: |m| <= ell violated (ell={ell}, m={m})")
            }
            Error::UnsupportedIndex { index } => {
                write!(f, "unsupported index {index}: only nonnegative integers are supported")
            }
            Error::Horizon { r, r_s } => {
                write!(f, "horizon-domain error: r={r} must exceed r_s={r_s}")
            }
            Error::CoordinateSingularity { r, theta } => {
                write!(f, "coordinate singularity at r={r}, theta={theta}")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::NonFiniteIntegrand { r, theta, phi } => {
                write!(f, "non-finite integrand at node r={r}, theta={theta}, phi={phi}")
            }
            Error::Convergence { previous, last, rel_tol } => {
                write!(f, "quadrature did not converge to {rel_tol:e}: last estimates {previous} and {last}")
            }
            Error::Evanescent { k_sq } => {
                write!(f, "evanescent mode: alpha^2 + eta^2 = {k_sq} <= 0 has no oscillatory solution")
            }
            Error::NotNormalized { norm } => {
                write!(f, "mode is not normalized on the domain: integral of |psi|^2 = {norm}")
            }
            Error::NearHorizon { r, r_s } => {
                write!(f, "near-horizon failure at r={r} (r_s={r_s}): step size underflow, use a larger r_start")
            }
            Error::StepUnderflow { r } => write!(f, "step size underflow at r={r}"),
            Error::BlowUp { last_r } => {
                write!(f, "radial solution blew up; last good r={last_r}")
            }
            Error::Shape { left, right } => {
                write!(f, "distributions have different supports ({left} vs {right} cells)")
            }
            Error::MetricMismatch => write!(f, "mode and metric disagree"),
            Error::NoBracket { what } => write!(f, "could not bracket {what}"),
        }
    }
}

impl core::error::Error for Error {}
