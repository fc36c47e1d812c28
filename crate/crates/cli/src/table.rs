//! Spectrum sweeps.

use rayon::prelude::*;

use spiral_dirac_core::geometry::{radial_bound, DefectFrame};
use spiral_dirac_core::spectrum::{
    effective_radius, energy_rotating_asymptotic, energy_rotating_exact, energy_rotating_nonrel,
    energy_static_asymptotic, energy_static_exact, energy_static_nonrel, Branch, EnergyLevel,
    Method, ParticleConfig, QuantumNumbers,
};

use crate::config::{Mode, RunConfig};
use crate::error::CliError;

/// Zeros below this are flagged; the McMahon estimate is poor there.
pub const SMALL_ZERO: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Level { zero_used: f64, energy: f64, small_x0: bool },
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: u32,
    pub l: i32,
    pub s: i32,
    pub zeta: i32,
    pub beta: f64,
    pub omega: f64,
    /// Wall radius: `r0` when static, the light-cone radius when rotating.
    pub r0_eff: Option<f64>,
    pub rho0: Option<f64>,
    pub method: Method,
    pub branch: i32,
    pub outcome: Outcome,
}

impl Row {
    pub fn energy(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Level { energy, .. } => Some(energy),
            Outcome::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumTable {
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    method: Method,
    q: QuantumNumbers,
    beta_index: usize,
    omega_index: usize,
    branch: Branch,
}

impl Point {
    fn key(&self) -> (usize, u32, i32, i32, usize, usize, i32) {
        let method = Method::ALL.iter().position(|m| *m == self.method).unwrap_or(usize::MAX);
        (
            method,
            self.q.n,
            self.q.l,
            self.q.s.value(),
            self.beta_index,
            self.omega_index,
            -self.branch.value(),
        )
    }
}

fn points(config: &RunConfig) -> Vec<Point> {
    let omega_count = config.omega.len().max(1);
    let mut out = Vec::new();
    for &method in &config.methods {
        for &n in &config.n {
            for &l in &config.l {
                for &s in &config.s {
                    for beta_index in 0..config.beta.len() {
                        for omega_index in 0..omega_count {
                            for &branch in &config.branches {
                                // the non-relativistic limit has only the particle branch
                                if method == Method::NonRelativistic && branch != Branch::Particle {
                                    continue;
                                }
                                let q = QuantumNumbers::new(n, l, s);
                                out.push(Point { method, q, beta_index, omega_index, branch });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn evaluate(config: &RunConfig, point: &Point) -> Row {
    let beta = config.beta[point.beta_index];
    let omega = config.omega.get(point.omega_index).copied().unwrap_or(0.0);
    let q = &point.q;
    let (r0_eff, rho0, level) = match config.mode {
        Mode::Static => {
            let r0 = config.r0.unwrap_or(f64::NAN);
            let p = ParticleConfig::new(config.m, r0).with_k_z(config.k_z);
            let level = match point.method {
                Method::Exact => energy_static_exact(q, &p, beta, point.branch),
                Method::Asymptotic => energy_static_asymptotic(q, &p, beta, point.branch),
                Method::NonRelativistic => energy_static_nonrel(q, &p, beta),
            };
            let geometry_ok = beta >= 0.0 && r0 > 0.0;
            (geometry_ok.then_some(r0), geometry_ok.then(|| effective_radius(r0, beta)), level)
        }
        Mode::Rotating => match DefectFrame::new(beta, omega).and_then(|f| rotating(config.m, q, &f, point)) {
            Ok((bound, level)) => (Some(bound), Some(1.0 / omega), Ok(level)),
            Err(e) => (None, None, Err(e)),
        },
    };
    let outcome = match level {
        Ok(EnergyLevel { value, zero_used, .. }) => {
            Outcome::Level { zero_used, energy: value, small_x0: zero_used < SMALL_ZERO }
        }
        Err(e) => Outcome::Error(e.to_string()),
    };
    Row {
        n: q.n,
        l: q.l,
        s: q.s.value(),
        zeta: q.zeta(),
        beta,
        omega,
        r0_eff,
        rho0,
        method: point.method,
        branch: point.branch.value(),
        outcome,
    }
}

fn rotating(
    m: f64,
    q: &QuantumNumbers,
    frame: &DefectFrame,
    point: &Point,
) -> spiral_dirac_core::error::Result<(f64, EnergyLevel)> {
    let level = match point.method {
        Method::Exact => energy_rotating_exact(q, m, frame, point.branch),
        Method::Asymptotic => energy_rotating_asymptotic(q, m, frame, point.branch),
        Method::NonRelativistic => energy_rotating_nonrel(q, m, frame),
    }?;
    let bound = radial_bound(frame)?.unwrap_or(f64::INFINITY);
    Ok((bound, level))
}

/// Evaluates the Cartesian sweep. Points that fail become error rows.
pub fn run_spectrum(config: &RunConfig) -> Result<SpectrumTable, CliError> {
    let mut tasks = points(config);
    tasks.sort_by_key(Point::key);
    let evaluate_all = || tasks.par_iter().map(|p| evaluate(config, p)).collect::<Vec<_>>();
    let rows = match config.workers {
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?
            .install(evaluate_all),
        None => evaluate_all(),
    };
    Ok(SpectrumTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RawConfig;

    fn config(mode: Mode, text: &str) -> RunConfig {
        RunConfig::from_raw(mode, &RawConfig::from_toml_str(text).unwrap()).unwrap()
    }

    #[test]
    fn twelve_row_example() {
        let cfg = config(
            Mode::Static,
            "m = 0\nr0 = 1\nbeta = [0, 1]\nn = \"0..2\"\nl = 0\ns = 1\nmethods = \"exact,asymptotic\"",
        );
        let table = run_spectrum(&cfg).unwrap();
        assert_eq!(table.rows.len(), 12);
        assert!(table.rows[..6].iter().all(|r| r.method == Method::Exact));
        assert!(table.rows.iter().all(|r| r.energy().is_some()));
        assert_eq!(table.rows[1].rho0, Some(2.0f64.sqrt()));
    }

    #[test]
    fn rotating_bad_points_become_error_rows() {
        let cfg = config(Mode::Rotating, "m = 1\nomega = 0.5\nbeta = [0, 1, 2, 3]\nn = 1");
        let table = run_spectrum(&cfg).unwrap();
        assert_eq!(table.rows.len(), 4);
        assert!(table.rows[0].energy().is_some() && table.rows[1].energy().is_some());
        for row in &table.rows[2..] {
            assert!(matches!(&row.outcome, Outcome::Error(m) if m.contains("parameter error")));
            assert_eq!(row.r0_eff, None);
        }
        let expected = (1.0f64 - 0.25).sqrt() / 0.5;
        assert!((table.rows[1].r0_eff.unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn rotating_exact_is_beta_invariant() {
        let cfg = config(Mode::Rotating, "m = 1\nomega = 0.1\nbeta = [0, 1, 5]\nn = \"0..3\"\nl = \"-1..1\"");
        let table = run_spectrum(&cfg).unwrap();
        for chunk in table.rows.chunks(3) {
            assert_eq!(chunk[0].energy(), chunk[1].energy());
            assert_eq!(chunk[0].energy(), chunk[2].energy());
        }
    }

    #[test]
    fn massless_nonrel_gives_error_rows() {
        let cfg = config(Mode::Static, "m = 0\nr0 = 1\nn = \"0..1\"\nmethods = \"nonrelativistic\"\nbranches = [1, -1]");
        let table = run_spectrum(&cfg).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert!(matches!(&row.outcome, Outcome::Error(m) if m.contains("mass required")));
        }
    }

    #[test]
    fn worker_count_does_not_change_rows() {
        let text = "m = 0.5\nr0 = 1\nbeta = \"0:2:5\"\nn = \"0..4\"\nl = \"-2..2\"\ns = [1, -1]\nbranches = [1, -1]\nmethods = \"exact,asymptotic,nonrelativistic\"";
        let mut cfg = config(Mode::Static, text);
        cfg.workers = Some(1);
        let serial = run_spectrum(&cfg).unwrap();
        cfg.workers = Some(4);
        assert_eq!(serial, run_spectrum(&cfg).unwrap());
    }
}
