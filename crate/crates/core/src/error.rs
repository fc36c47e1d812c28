use core::fmt;

/// Failure modes shared by every module of the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    Domain { what: &'static str, value: f64 },
    /// A physical parameter combination is invalid (e.g. `beta * omega >= 1`, `m <= 0`).
    Parameter(&'static str),
    /// The point lies outside the light-cone-admissible region of the rotating frame.
    Region { r: f64, bound: f64 },
    /// A formula that only holds at `k_z = 0` was asked for `k_z != 0`.
    Unsupported(&'static str),
    /// An iterative refinement did not reach its tolerance.
    Convergence { routine: &'static str, iterations: usize },
    /// The adaptive integrator could not meet its tolerance.
    StepControl { x: f64, step: f64 },
    /// No sign change was found in the scanned eigenvalue range.
    BracketNotFound { found: usize, wanted: usize, scan_end: f64 },
    /// A quadrature error estimate exceeded its tolerance.
    Quadrature { estimate: f64, tolerance: f64 },
    /// An energy level handed to profile generation is not an exact eigenvalue.
    NotEigenvalue { wall_value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Region { r, bound } => {
                write!(f, "region error: r = {r} is outside the physical region r < {bound}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported parameter: {msg}"),
            Error::Convergence { routine, iterations } => {
                write!(f, "{routine} did not converge after {iterations} iterations")
            }
            Error::StepControl { x, step } => {
                write!(f, "step size underflow at x = {x} (step {step})")
            }
            Error::BracketNotFound { found, wanted, scan_end } => write!(
                f,
                "only {found} of {wanted} sign changes found before x = {scan_end}"
            ),
            Error::Quadrature { estimate, tolerance } => write!(
                f,
                "quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}"
            ),
            Error::NotEigenvalue { wall_value } => write!(
                f,
                "energy is not an exact eigenvalue: |f(wall)| = {wall_value:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
