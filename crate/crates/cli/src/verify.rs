//! Self-checks of the geometry, the radial reductions and the zero finder.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spiral_dirac_core::geometry::{
    radial_bound, structure_equation_residual, verify_tetrad_relation, DefectFrame, SpacetimePoint,
};
use spiral_dirac_core::radial_oracle::{
    log_grid, residual_eq_1_18, residual_eq_1_18_unphased, residual_eq_1_21, residual_eq_2_5,
    shoot_eigenvalue, ResidualReport,
};
use spiral_dirac_core::specfun::{bessel_zero, BesselOrder, ZeroIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "quick" => Some(Level::Quick),
            "full" => Some(Level::Full),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub level: Level,
    /// Relative offset applied to every library zero before comparison.
    /// Non-zero only to prove that the comparison can fail.
    pub zero_perturbation: f64,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(level: Level) -> Self {
        Self { level, zero_perturbation: 0.0, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    AtMost,
    /// Non-vacuity: the measured value must exceed the threshold.
    Exceeds,
    Within(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub relation: Relation,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self { name: name.into(), measured, threshold, relation: Relation::AtMost }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.threshold,
            Relation::Exceeds => self.measured > self.threshold,
            Relation::Within(lo, hi) => (lo..=hi).contains(&self.measured),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::AtMost => {
                write!(f, "{verdict} {}: {:.3e} <= {:.1e}", self.name, self.measured, self.threshold)
            }
            Relation::Exceeds => {
                write!(f, "{verdict} {}: {:.3e} > {:.1e}", self.name, self.measured, self.threshold)
            }
            Relation::Within(lo, hi) => {
                write!(f, "{verdict} {}: {:.4} in [{lo}, {hi}]", self.name, self.measured)
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// A computation that errored counts as a failed check.
    fn push_result(&mut self, name: impl Into<String>, threshold: f64, value: Result<f64, String>) {
        let name = name.into();
        match value {
            Ok(v) => self.push(Check::at_most(name, v, threshold)),
            Err(e) => {
                self.notes.push(format!("{name}: {e}"));
                self.push(Check::at_most(name, f64::INFINITY, threshold));
            }
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        let failed = self.failures();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub const TETRAD_TOL: f64 = 1e-12;
pub const STRUCTURE_TOL: f64 = 1e-5;
pub const ORACLE_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Static `beta` values and rotating `(beta, omega)` pairs.
pub const STATIC_BETAS: [f64; 3] = [0.0, 0.5, 2.0];
pub const ROTATING_FRAMES: [(f64, f64); 3] = [(0.0, 0.2), (0.5, 0.3), (2.0, 0.4)];

/// Largest tetrad residual over `count` random points of `frame`.
pub fn random_tetrad_residual(frame: &DefectFrame, count: usize, rng: &mut StdRng) -> Result<f64, String> {
    let r_max = radial_bound(frame).map_err(|e| e.to_string())?.unwrap_or(20.0);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let p = SpacetimePoint::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(1e-3..0.999 * r_max),
            rng.gen_range(-20.0..20.0),
            rng.gen_range(-10.0..10.0),
        );
        worst = worst.max(verify_tetrad_relation(&p, frame).map_err(|e| e.to_string())?);
    }
    Ok(worst)
}

pub fn shoot_vs_zero(zeta: i32, beta: f64, r0: f64, n: u32, perturbation: f64) -> Result<f64, String> {
    let shot = shoot_eigenvalue(zeta, beta, r0, n).map_err(|e| e.to_string())?;
    let zero = bessel_zero(BesselOrder::from_zeta(zeta), ZeroIndex(n)).map_err(|e| e.to_string())?;
    Ok((shot.tau - zero * (1.0 + perturbation) / r0.hypot(beta)).abs())
}

pub const SHOOT_ZETAS: [i32; 4] = [0, 1, 2, 3];
pub const SHOOT_GEOMETRIES: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 1.0), (1.0, 2.0), (3.0, 4.0)];

fn frame(beta: f64, omega: f64) -> DefectFrame {
    DefectFrame::new(beta, omega).expect("built-in frames satisfy beta omega < 1")
}

pub fn run_verify(options: &VerifyOptions) -> VerifyReport {
    let full = options.level == Level::Full;
    let mut report = VerifyReport::default();
    let mut rng = StdRng::seed_from_u64(options.seed);
    let points = if full { 1000 } else { 100 };

    for beta in STATIC_BETAS {
        let value = random_tetrad_residual(&frame(beta, 0.0), points, &mut rng);
        report.push_result(format!("tetrad relation, beta={beta} ({points} points)"), TETRAD_TOL, value);
    }
    for (beta, omega) in ROTATING_FRAMES {
        let value = random_tetrad_residual(&frame(beta, omega), points, &mut rng);
        report.push_result(
            format!("tetrad relation, beta={beta} omega={omega} ({points} points)"),
            TETRAD_TOL,
            value,
        );
    }

    let structure_points: &[(f64, f64, f64)] = if full {
        &[(1.0, 0.0, 0.0), (1.0, 0.5, 0.0), (2.0, 2.0, 0.0), (1.0, 0.5, 0.3), (2.0, 0.0, 0.2)]
    } else {
        &[(1.0, 0.5, 0.0), (1.0, 0.5, 0.3)]
    };
    for &(r, beta, omega) in structure_points {
        let value = structure_equation_residual(&SpacetimePoint::at_radius(r), &frame(beta, omega), 1e-3)
            .map_err(|e| e.to_string());
        report.push_result(
            format!("structure equation, r={r} beta={beta} omega={omega} h=1e-3"),
            STRUCTURE_TOL,
            value,
        );
    }
    if full {
        for &(r, beta, omega) in &structure_points[3..] {
            let f = frame(beta, omega);
            let p = SpacetimePoint::at_radius(r);
            let coarse = structure_equation_residual(&p, &f, 2e-3);
            let fine = structure_equation_residual(&p, &f, 1e-3);
            let order = match (coarse, fine) {
                (Ok(c), Ok(f)) => (c / f).log2(),
                _ => f64::NAN,
            };
            report.notes.push(format!(
                "convergence order of structure equation at r={r} beta={beta} omega={omega}: {order:.4}"
            ));
            report.push(Check {
                name: format!("structure equation convergence order, r={r} beta={beta} omega={omega}"),
                measured: order,
                threshold: 2.0,
                relation: Relation::Within(1.8, 2.2),
            });
        }
    }

    for omega in [0.05, 0.2, 0.5] {
        let bound = radial_bound(&frame(0.0, omega)).ok().flatten().unwrap_or(f64::NAN);
        let name = format!("light-cone radius at beta=0, omega={omega}");
        report.push(Check::at_most(name, (bound - 1.0 / omega).abs(), 0.0));
    }
    for (beta, omega) in [(2.0, 0.5), (5.0, 0.3)] {
        let rejected = DefectFrame::new(beta, omega).is_err();
        report.push(Check::at_most(
            format!("beta*omega={} rejected", beta * omega),
            if rejected { 0.0 } else { 1.0 },
            0.0,
        ));
    }

    let modes: &[u32] = if full { &[0, 1, 2, 3] } else { &[0] };
    for zeta in [0, 1, 2] {
        for beta in [0.25, 1.0] {
            for &n in modes {
                residual_checks(&mut report, zeta, beta, n);
            }
        }
    }
    for (beta, omega) in [(0.0, 0.2), (1.0, 0.5)] {
        for zeta in [0, 1, 2] {
            let f = frame(beta, omega);
            let Ok(Some(bound)) = radial_bound(&f) else { continue };
            let zero = bessel_zero(BesselOrder::from_zeta(zeta), ZeroIndex(0)).unwrap_or(f64::NAN);
            let theta = omega * zero;
            let radii = log_grid(1e-2 * bound, bound, 50);
            let value = residual_eq_2_5(zeta, theta, beta, &radii)
                .map(|r| r.max_abs_residual)
                .map_err(|e| e.to_string());
            report.push_result(
                format!("rotating radial equation, zeta={zeta} beta={beta} omega={omega}"),
                RESIDUAL_TOL * theta.powi(2).max(1.0),
                value,
            );
        }
    }

    let (zetas, geometries, ns): (&[i32], &[(f64, f64)], &[u32]) = if full {
        (&SHOOT_ZETAS, &SHOOT_GEOMETRIES, &[0, 1, 2, 3])
    } else {
        (&[0, 2], &[(0.0, 1.0), (1.0, 2.0)], &[0, 1])
    };
    for &zeta in zetas {
        for &(beta, r0) in geometries {
            for &n in ns {
                report.push_result(
                    format!("shooting vs zero, zeta={zeta} n={n} beta={beta} r0={r0}"),
                    ORACLE_TOL,
                    shoot_vs_zero(zeta, beta, r0, n, options.zero_perturbation),
                );
            }
        }
    }
    report
}

type Equation = fn(i32, f64, f64, &[f64]) -> spiral_dirac_core::error::Result<ResidualReport>;

fn residual_checks(report: &mut VerifyReport, zeta: i32, beta: f64, n: u32) {
    let r0: f64 = 1.0;
    let zero = match bessel_zero(BesselOrder::from_zeta(zeta), ZeroIndex(n)) {
        Ok(z) => z,
        Err(e) => {
            report.push_result(format!("zero for zeta={zeta} n={n}"), 0.0, Err(e.to_string()));
            return;
        }
    };
    let tau = zero / r0.hypot(beta);
    let threshold = RESIDUAL_TOL * tau.powi(2).max(1.0);
    let radii = log_grid(1e-2 * r0, r0, 50);
    let label = format!("zeta={zeta} beta={beta} n={n}");
    let residual = |f: Equation| {
        f(zeta, tau, beta, &radii).map(|r| r.max_abs_residual).map_err(|e| e.to_string())
    };
    report.push_result(format!("complex radial equation, {label}"), threshold, residual(residual_eq_1_18));
    report.push_result(format!("envelope equation, {label}"), threshold, residual(residual_eq_1_21));
    if zeta != 0 {
        // without the phase factor the same harness must fail
        if let Ok(v) = residual(residual_eq_1_18_unphased) {
            report.push(Check {
                name: format!("complex radial equation without phase fails, {label}"),
                measured: v,
                threshold,
                relation: Relation::Exceeds,
            });
        }
    }
}
