//! Independent checks of the radial problem.
//!
//! * Residuals: the closed-form candidate `f(r) = J_|zeta|(tau sqrt(r^2 + beta^2))`
//!   and its phase-dressed form `u(r) = exp(i zeta atan(r/beta)) f(r)` are
//!   substituted, with analytic derivatives, into the radial equations.
//! * Shooting: the Bessel equation is integrated from a series start and the
//!   hard-wall eigenvalue is located by bisection on `tau`. This path never
//!   calls the library zero finder or the library Bessel evaluator.
//!
//! The Bessel form is taken as `f'' + f'/x - (nu^2/x^2) f + f = 0`. The
//! variant with `f/4` in place of `f` has solutions `J_nu(x/2)`, whose zeros
//! sit at twice the standard ones, which is incompatible with the McMahon
//! bracket `n + |zeta|/2 + 3/4` of the energy levels. It is still available
//! through [`BesselConvention::QuarterCoefficient`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::ode::{integrate, State, StepControl, Trajectory};
use crate::specfun::{bessel_j, bessel_j_prime, BesselOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationTag {
    /// Complex radial equation in the static frame.
    Eq1_18,
    /// Real equation for the envelope `f`.
    Eq1_21,
    /// Complex radial equation in the rotating frame (`tau -> theta`).
    Eq2_5,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub sample_points: Vec<f64>,
    pub equation_tag: EquationTag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub tau: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn check_radii(radii: &[f64]) -> Result<()> {
    for &r in radii {
        check_finite("radius must be finite", r)?;
        if r <= 0.0 {
            return Err(Error::Domain { what: "radii must be > 0", value: r });
        }
    }
    Ok(())
}

fn check_kappa(kappa: f64, beta: f64) -> Result<()> {
    check_finite("eigenvalue must be finite", kappa)?;
    check_finite("beta must be finite", beta)?;
    if kappa <= 0.0 {
        return Err(Error::Domain { what: "tau must be > 0", value: kappa });
    }
    if beta < 0.0 {
        return Err(Error::Domain { what: "beta must be >= 0", value: beta });
    }
    Ok(())
}

/// `f`, `f'`, `f''` in `r` for `f(r) = J_nu(kappa rho)`, `rho = sqrt(r^2 + beta^2)`.
fn envelope_derivatives(nu: f64, kappa: f64, beta: f64, r: f64) -> Result<[f64; 3]> {
    let order = BesselOrder::new(nu)?;
    let rho = r.hypot(beta);
    let x = kappa * rho;
    let j = bessel_j(order, x)?;
    let dj = bessel_j_prime(order, x)?;
    let ddj = -dj / x - (1.0 - nu * nu / (x * x)) * j;
    let dx_dr = kappa * r / rho;
    let d2x_dr2 = kappa * beta * beta / (rho * rho * rho);
    Ok([j, dj * dx_dr, ddj * dx_dr * dx_dr + dj * d2x_dr2])
}

fn residual_1_21_at(zeta: i32, kappa: f64, beta: f64, r: f64) -> Result<f64> {
    let nu = f64::from(zeta.unsigned_abs());
    let [f, df, ddf] = envelope_derivatives(nu, kappa, beta, r)?;
    let (b2, r2) = (beta * beta, r * r);
    let zeta_sq = f64::from(zeta) * f64::from(zeta);
    Ok((1.0 + b2 / r2) * ddf + (1.0 / r - b2 / (r2 * r)) * df - zeta_sq / (r2 + b2) * f
        + kappa * kappa * f)
}

/// Residual of `(1 + b^2/r^2) f'' + (1/r - b^2/r^3) f' - zeta^2/(r^2 + b^2) f + tau^2 f`
/// for `f(r) = J_|zeta|(tau sqrt(r^2 + beta^2))`.
pub fn residual_eq_1_21(zeta: i32, tau: f64, beta: f64, radii: &[f64]) -> Result<ResidualReport> {
    check_kappa(tau, beta)?;
    check_radii(radii)?;
    let mut worst: f64 = 0.0;
    for &r in radii {
        worst = worst.max(residual_1_21_at(zeta, tau, beta, r)?.abs());
    }
    Ok(ResidualReport {
        max_abs_residual: worst,
        sample_points: radii.to_vec(),
        equation_tag: EquationTag::Eq1_21,
    })
}

/// Phase `atan(r/beta)`; `pi/2` at `beta = 0`.
pub fn phase_angle(r: f64, beta: f64) -> f64 {
    r.atan2(beta)
}

/// Left-hand side of the complex radial equation for the trial `u` built
/// from `f`, optionally dressed with `exp(i zeta atan(r/beta))`.
fn residual_1_18_at(zeta: i32, kappa: f64, beta: f64, r: f64, with_phase: bool) -> Result<f64> {
    let nu = f64::from(zeta.unsigned_abs());
    let [f, df, ddf] = envelope_derivatives(nu, kappa, beta, r)?;
    let z = f64::from(zeta);
    let i = Complex64::i();
    let (u, du, ddu) = if with_phase {
        let rho_sq = r * r + beta * beta;
        let alpha_1 = beta / rho_sq;
        let alpha_2 = -2.0 * beta * r / (rho_sq * rho_sq);
        let phase = Complex64::from_polar(1.0, z * phase_angle(r, beta));
        let u = phase * f;
        let du = phase * (df + i * z * alpha_1 * f);
        let ddu = phase
            * (Complex64::new(ddf - z * z * alpha_1 * alpha_1 * f, 0.0)
                + i * (2.0 * z * alpha_1 * df + z * alpha_2 * f));
        (u, du, ddu)
    } else {
        (Complex64::new(f, 0.0), Complex64::new(df, 0.0), Complex64::new(ddf, 0.0))
    };
    let (b2, r2) = (beta * beta, r * r);
    let first = Complex64::new(1.0 / r - b2 / (r2 * r), -2.0 * beta * z / r2);
    let zeroth = Complex64::new(-z * z / r2 + kappa * kappa, beta * z / (r2 * r));
    let lhs = ddu * (1.0 + b2 / r2) + first * du + zeroth * u;
    Ok(lhs.norm())
}

fn residual_1_18_report(
    zeta: i32,
    kappa: f64,
    beta: f64,
    radii: &[f64],
    with_phase: bool,
    tag: EquationTag,
) -> Result<ResidualReport> {
    check_kappa(kappa, beta)?;
    check_radii(radii)?;
    let mut worst: f64 = 0.0;
    for &r in radii {
        worst = worst.max(residual_1_18_at(zeta, kappa, beta, r, with_phase)?);
    }
    Ok(ResidualReport { max_abs_residual: worst, sample_points: radii.to_vec(), equation_tag: tag })
}

/// Modulus of the complex residual of
/// `(1 + b^2/r^2) u'' + (1/r - b^2/r^3 - 2 i b zeta/r^2) u' - zeta^2/r^2 u + i b zeta/r^3 u + tau^2 u`
/// for `u(r) = exp(i zeta atan(r/beta)) J_|zeta|(tau sqrt(r^2 + beta^2))`.
pub fn residual_eq_1_18(zeta: i32, tau: f64, beta: f64, radii: &[f64]) -> Result<ResidualReport> {
    residual_1_18_report(zeta, tau, beta, radii, true, EquationTag::Eq1_18)
}

/// Same equation with the phase factor dropped (`u = f`); nonzero whenever
/// `beta zeta != 0`.
pub fn residual_eq_1_18_unphased(
    zeta: i32,
    tau: f64,
    beta: f64,
    radii: &[f64],
) -> Result<ResidualReport> {
    residual_1_18_report(zeta, tau, beta, radii, false, EquationTag::Eq1_18)
}

/// The rotating-frame radial equation: identical in form with `tau -> theta`.
pub fn residual_eq_2_5(zeta: i32, theta: f64, beta: f64, radii: &[f64]) -> Result<ResidualReport> {
    residual_1_18_report(zeta, theta, beta, radii, true, EquationTag::Eq2_5)
}

/// Coefficient of the undifferentiated `f` term in the integrated Bessel form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BesselConvention {
    /// `f'' + f'/x - (nu^2/x^2) f + f = 0`, solved by `J_nu(x)`.
    #[default]
    Standard,
    /// `f'' + f'/x - (nu^2/x^2) f + f/4 = 0`, solved by `J_nu(x/2)`.
    QuarterCoefficient,
}

impl BesselConvention {
    fn coefficient(self) -> f64 {
        match self {
            BesselConvention::Standard => 1.0,
            BesselConvention::QuarterCoefficient => 0.25,
        }
    }
}

/// Samples of the integrated regular solution: `values[i] = f(xs[i])`.
#[derive(Debug, Clone)]
pub struct SampledSolution {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

impl SampledSolution {
    fn from_trajectory(t: Trajectory) -> Self {
        let values = t.states.iter().map(|s| s[0]).collect();
        let derivatives = t.states.iter().map(|s| s[1]).collect();
        Self { xs: t.xs, values, derivatives }
    }
}

/// Ascending series of `J_nu(y)` and `dJ_nu/dy`, used only for the start
/// values of the integration.
fn series_start(nu: f64, y: f64) -> (f64, f64) {
    let half = 0.5 * y;
    let lead = if nu == 0.0 { 1.0 } else { half.powf(nu) / libm::tgamma(nu + 1.0) };
    let q = -half * half;
    let mut term = 1.0;
    let mut value = 1.0;
    let mut slope = nu;
    let mut k = 1.0;
    while term.abs() > 1e-18 && k < 200.0 {
        term *= q / (k * (k + nu));
        value += term;
        slope += (2.0 * k + nu) * term;
        k += 1.0;
    }
    (lead * value, lead * slope / y)
}

fn bessel_rhs(nu: f64, c: f64) -> impl Fn(f64, &State) -> State {
    move |x, y| [y[1], -y[1] / x + (nu * nu / (x * x) - c) * y[0]]
}

fn start_state(nu: f64, x_start: f64, convention: BesselConvention) -> State {
    let s = convention.coefficient().sqrt();
    let (f, df) = series_start(nu, s * x_start);
    [f, s * df]
}

/// Integrates `f'' + f'/x - (nu^2/x^2) f + f = 0` from `x_start` to `x_end`,
/// starting from the ascending series of the regular solution.
pub fn integrate_bessel_ode(
    nu: f64,
    x_start: f64,
    x_end: f64,
    tolerance: f64,
) -> Result<SampledSolution> {
    integrate_bessel_ode_with(nu, x_start, x_end, tolerance, BesselConvention::Standard, f64::INFINITY)
}

pub fn integrate_bessel_ode_with(
    nu: f64,
    x_start: f64,
    x_end: f64,
    tolerance: f64,
    convention: BesselConvention,
    max_step: f64,
) -> Result<SampledSolution> {
    check_finite("order must be finite", nu)?;
    if nu < 0.0 {
        return Err(Error::Domain { what: "order must be >= 0", value: nu });
    }
    if !(x_start > 0.0) || !(x_end > x_start) {
        return Err(Error::Domain { what: "need 0 < x_start < x_end", value: x_start });
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain { what: "tolerance must be > 0", value: tolerance });
    }
    let control = StepControl::new(tolerance).with_max_step(max_step);
    let rhs = bessel_rhs(nu, convention.coefficient());
    let traj = integrate(rhs, x_start, start_state(nu, x_start, convention), x_end, &control)?;
    Ok(SampledSolution::from_trajectory(traj))
}

#[derive(Debug, Clone, Copy)]
pub struct ShootingConfig {
    pub tolerance: f64,
    pub x_start: f64,
    /// The scan runs to this multiple of the McMahon estimate of the zero.
    pub scan_multiple: f64,
    /// Largest integration step during the scan; keeps sign changes resolvable.
    pub scan_step: f64,
    pub bracket_width: f64,
    pub max_bisections: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-13,
            x_start: 1e-3,
            scan_multiple: 2.0,
            scan_step: 0.25,
            bracket_width: 1e-10,
            max_bisections: 200,
        }
    }
}

/// Finds the `(n + 1)`-th `tau > 0` with `f(tau sqrt(r0^2 + beta^2)) = 0`.
pub fn shoot_eigenvalue(zeta: i32, beta: f64, r0: f64, n: u32) -> Result<ShootingResult> {
    shoot_eigenvalue_with(zeta, beta, r0, n, &ShootingConfig::default())
}

pub fn shoot_eigenvalue_with(
    zeta: i32,
    beta: f64,
    r0: f64,
    n: u32,
    config: &ShootingConfig,
) -> Result<ShootingResult> {
    check_finite("beta must be finite", beta)?;
    check_finite("r0 must be finite", r0)?;
    if beta < 0.0 {
        return Err(Error::Domain { what: "beta must be >= 0", value: beta });
    }
    if r0 <= 0.0 {
        return Err(Error::Domain { what: "r0 must be > 0", value: r0 });
    }
    let nu = f64::from(zeta.unsigned_abs());
    let rho0 = r0.hypot(beta);
    let estimate = PI * (f64::from(n) + 0.5 * nu + 0.75);
    let scan_end = config.scan_multiple * estimate;

    let control = StepControl::new(config.tolerance).with_max_step(config.scan_step);
    let rhs = bessel_rhs(nu, 1.0);
    let start = start_state(nu, config.x_start, BesselConvention::Standard);
    let scan = integrate(&rhs, config.x_start, start, scan_end, &control)?;

    let wanted = n as usize + 1;
    let mut found = 0usize;
    let mut bracket_index = None;
    for k in 0..scan.xs.len() - 1 {
        let (a, b) = (scan.states[k][0], scan.states[k + 1][0]);
        if a * b < 0.0 || (b == 0.0 && a != 0.0) {
            found += 1;
            if found == wanted {
                bracket_index = Some(k);
                break;
            }
        }
    }
    let k = bracket_index.ok_or(Error::BracketNotFound { found, wanted, scan_end })?;

    // bisection on tau; each probe resumes from the accepted scan point left of the bracket
    let (x_anchor, state_anchor) = (scan.xs[k], scan.states[k]);
    let sign_left = state_anchor[0].signum();
    let mut lo = scan.xs[k] / rho0;
    let mut hi = scan.xs[k + 1] / rho0;
    let mut iterations = 0usize;
    while hi - lo > config.bracket_width {
        if iterations >= config.max_bisections {
            return Err(Error::Convergence { routine: "shooting bisection", iterations });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let x_mid = mid * rho0;
        let value = if x_mid <= x_anchor {
            state_anchor[0]
        } else {
            integrate(&rhs, x_anchor, state_anchor, x_mid, &StepControl::new(config.tolerance))?
                .last()
                .1[0]
        };
        if value == 0.0 {
            lo = mid;
            hi = mid;
        } else if value.signum() == sign_left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ShootingResult { tau: 0.5 * (lo + hi), iterations, bracket: (lo, hi) })
}
