//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p spiral-dirac --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use spiral_dirac::command::{profile_for, run, WavefunctionArgs};
use spiral_dirac::config::{Mode, RawConfig, RunConfig};
use spiral_dirac::export::{read_csv, read_json_lines, to_csv_string, write_json_lines};
use spiral_dirac::table::run_spectrum;
use spiral_dirac::verify::{
    random_tetrad_residual, shoot_vs_zero, ROTATING_FRAMES, SHOOT_GEOMETRIES, SHOOT_ZETAS,
    STATIC_BETAS,
};
use spiral_dirac_core::geometry::{radial_bound, structure_equation_residual, DefectFrame, SpacetimePoint};
use spiral_dirac_core::radial_oracle::{log_grid, residual_eq_1_18, residual_eq_1_18_unphased};
use spiral_dirac_core::specfun::{bessel_zero, BesselOrder, ZeroIndex};
use spiral_dirac_core::spectrum::{
    energy_rotating_exact, energy_static_asymptotic, energy_static_exact,
    energy_rotating_nonrel_exact, energy_static_nonrel_exact, Branch, ParticleConfig,
    QuantumNumbers, Spin,
};
use spiral_dirac_core::wavefunction::{expected_node_count, node_count, normalization_integral};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// The 20-mode grid: n in 0..5 against four (l, s) pairs.
fn modes() -> Vec<QuantumNumbers> {
    let pairs = [(0, Spin::Up), (0, Spin::Down), (2, Spin::Up), (-3, Spin::Down)];
    (0..5).flat_map(|n| pairs.map(|(l, s)| QuantumNumbers::new(n, l, s))).collect()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for zeta in SHOOT_ZETAS {
        for (beta, r0) in SHOOT_GEOMETRIES {
            for n in 0..4 {
                match shoot_vs_zero(zeta, beta, r0, n, 0.0) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => errors.push(format!("zeta={zeta} n={n} beta={beta} r0={r0}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        errors.is_empty() && worst <= 1e-8 && elapsed < Duration::from_secs(10),
        format!("max |tau_shoot - j/rho0| = {worst:.2e} (tol 1e-8) over 64 modes in {elapsed:.2?} {errors:?}"),
    )
}

fn transformation() -> Outcome {
    let start = Instant::now();
    let mut worst_ratio: f64 = 0.0;
    let mut weakest_unphased = f64::INFINITY;
    for zeta in [0, 1, 2] {
        for beta in [0.25, 1.0] {
            for n in 0..4 {
                let tau = bessel_zero(BesselOrder::from_zeta(zeta), ZeroIndex(n)).unwrap() / 1f64.hypot(beta);
                let threshold = 1e-8 * tau.powi(2).max(1.0);
                let radii = log_grid(1e-2, 1.0, 50);
                let phased = residual_eq_1_18(zeta, tau, beta, &radii).unwrap().max_abs_residual;
                worst_ratio = worst_ratio.max(phased / threshold);
                if zeta != 0 {
                    let plain = residual_eq_1_18_unphased(zeta, tau, beta, &radii).unwrap().max_abs_residual;
                    weakest_unphased = weakest_unphased.min(plain / threshold);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_ratio <= 1.0 && weakest_unphased > 1.0 && elapsed < Duration::from_secs(5),
        format!(
            "phased residual/threshold <= {worst_ratio:.2e}; unphased residual/threshold >= {weakest_unphased:.2e} (zeta != 0) in {elapsed:.2?}"
        ),
    )
}

fn asymptotic_spectrum() -> Outcome {
    let start = Instant::now();
    let p = ParticleConfig::new(0.0, 1.0);
    let mut monotone = true;
    let mut worst_final: f64 = 0.0;
    for zeta in 0..=5 {
        let mut previous = f64::INFINITY;
        for n in 1..=50 {
            let q = QuantumNumbers::new(n, zeta, Spin::Up);
            let exact = energy_static_exact(&q, &p, 0.0, Branch::Particle).unwrap().value;
            let approx = energy_static_asymptotic(&q, &p, 0.0, Branch::Particle).unwrap().value;
            let rel = ((exact - approx) / exact).abs();
            monotone &= rel <= previous;
            previous = rel;
        }
        worst_final = worst_final.max(previous);
    }
    let elapsed = start.elapsed();
    outcome(
        monotone && worst_final <= 1e-3 && elapsed < Duration::from_secs(5),
        format!("monotone = {monotone}; max relative gap at n=50 = {worst_final:.2e} (tol 1e-3) in {elapsed:.2?}"),
    )
}

fn effective_radius_law() -> Outcome {
    let mut worst: f64 = 0.0;
    for q in modes() {
        let a = energy_static_exact(&q, &ParticleConfig::new(1.0, 3.0), 4.0, Branch::Particle).unwrap();
        let b = energy_static_exact(&q, &ParticleConfig::new(1.0, 5.0), 0.0, Branch::Particle).unwrap();
        worst = worst.max((a.value - b.value).abs());
    }
    outcome(worst <= 1e-12, format!("max |E(3,4) - E(5,0)| = {worst:.2e} over 20 modes (tol 1e-12)"))
}

fn rotating_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut sagnac: f64 = 0.0;
    for omega in [0.05, 0.2] {
        let mut shifted: Vec<(i32, u32, f64)> = Vec::new();
        for q in modes() {
            let energies: Vec<f64> = [0.0, 1.0, 0.99 / omega]
                .iter()
                .map(|&beta| {
                    let frame = DefectFrame::new(beta, omega).unwrap();
                    energy_rotating_exact(&q, 1.0, &frame, Branch::Particle).unwrap().value
                })
                .collect();
            for e in &energies[1..] {
                worst = worst.max((e - energies[0]).abs());
            }
            shifted.push((q.zeta().abs(), q.n, energies[0] + omega * q.total_angular()));
        }
        for a in &shifted {
            for b in &shifted {
                if a.0 == b.0 && a.1 == b.1 {
                    sagnac = sagnac.max((a.2 - b.2).abs());
                }
            }
        }
    }
    outcome(
        worst <= 1e-12 && sagnac <= 1e-12,
        format!("max beta spread = {worst:.2e}; max spread of E + omega(l+1/2) at fixed |zeta| = {sagnac:.2e} (tol 1e-12)"),
    )
}

fn nonrelativistic_limits() -> Outcome {
    let mut ratios = Vec::new();
    let static_p = |m: f64| ParticleConfig::new(m, 1.0);
    let frame = DefectFrame::new(1.0, 0.2).unwrap();
    for q in [QuantumNumbers::new(0, 0, Spin::Up), QuantumNumbers::new(2, 1, Spin::Down)] {
        let tau = bessel_zero(q.order(), q.index()).unwrap() / 1f64.hypot(0.5);
        let theta = bessel_zero(q.order(), q.index()).unwrap() * 0.2;
        let static_gap = |m: f64| {
            let e = energy_static_exact(&q, &static_p(m), 0.5, Branch::Particle).unwrap().value;
            let nr = energy_static_nonrel_exact(&q, &static_p(m), 0.5).unwrap().value;
            ((e - m) - nr).abs()
        };
        let rotating_gap = |m: f64| {
            let e = energy_rotating_exact(&q, m, &frame, Branch::Particle).unwrap().value;
            let nr = energy_rotating_nonrel_exact(&q, m, &frame).unwrap().value;
            ((e - m) - nr).abs()
        };
        for (scale, gap) in [(tau, &static_gap as &dyn Fn(f64) -> f64), (theta, &rotating_gap)] {
            let g: Vec<f64> = [5.0, 10.0, 20.0].iter().map(|k| gap(k * scale)).collect();
            ratios.push(g[0] / g[1]);
            ratios.push(g[1] / g[2]);
        }
    }
    let ok = ratios.iter().all(|r| (7.0..=9.0).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    outcome(ok, format!("gap ratios on doubling m: [{}] (band [7, 9])", shown.join(", ")))
}

fn geometry_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20261014);
    let mut tetrad: f64 = 0.0;
    let frames = STATIC_BETAS.iter().map(|&b| (b, 0.0)).chain(ROTATING_FRAMES);
    for (beta, omega) in frames {
        let frame = DefectFrame::new(beta, omega).unwrap();
        tetrad = tetrad.max(random_tetrad_residual(&frame, 1000, &mut rng).unwrap());
    }
    let mut structure: f64 = 0.0;
    let mut orders = Vec::new();
    for (r, beta, omega) in [(1.0, 0.5, 0.0), (2.0, 2.0, 0.0), (1.0, 0.5, 0.3), (2.0, 0.0, 0.2)] {
        let frame = DefectFrame::new(beta, omega).unwrap();
        let p = SpacetimePoint::at_radius(r);
        let fine = structure_equation_residual(&p, &frame, 1e-3).unwrap();
        let coarse = structure_equation_residual(&p, &frame, 2e-3).unwrap();
        structure = structure.max(fine);
        orders.push((coarse / fine).log2());
    }
    let bound_exact = [0.05, 0.2, 0.5, 0.3]
        .iter()
        .all(|&w| radial_bound(&DefectFrame::new(0.0, w).unwrap()).unwrap() == Some(1.0 / w));
    let rejects = DefectFrame::new(2.0, 0.5).is_err() && DefectFrame::new(10.0, 0.2).is_err();
    let orders_ok = orders.iter().all(|o| (1.8..=2.2).contains(o));
    let shown: Vec<String> = orders.iter().map(|o| format!("{o:.3}")).collect();
    outcome(
        tetrad <= 1e-12 && structure <= 1e-5 && orders_ok && bound_exact && rejects,
        format!(
            "tetrad {tetrad:.2e} (tol 1e-12, 6 frames x 1000 points); structure {structure:.2e} at h=1e-3 (tol 1e-5); orders [{}]; radial_bound(0, w) = 1/w: {bound_exact}; beta*omega >= 1 rejected: {rejects}",
            shown.join(", ")
        ),
    )
}

fn wavefunction_contract() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_wall: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut worst_doubling: f64 = 0.0;
    let mut count = 0;
    for (i, q) in modes().into_iter().enumerate() {
        // beta = 0.1 keeps kappa beta below the first zero, so every zero is a node
        let beta = if i % 2 == 0 { 0.0 } else { 0.1 };
        let rotating = i % 5 == 4;
        let args = |samples| WavefunctionArgs {
            n: q.n,
            l: q.l,
            s: q.s.value(),
            beta,
            m: 1.0,
            omega: rotating.then_some(0.25),
            r0: (!rotating).then_some(1.0),
            samples,
            out: None,
        };
        let (mode, coarse) = match profile_for(&args(4000)) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{q:?}: {e}"));
                continue;
            }
        };
        let (_, fine) = profile_for(&args(8000)).unwrap();
        count += 1;
        let nodes = node_count(&coarse);
        if nodes != q.n as usize || expected_node_count(&mode).unwrap() != q.n as usize {
            failures.push(format!("{q:?} beta={beta}: {nodes} nodes"));
        }
        worst_wall = worst_wall.max(coarse.wall_ratio());
        let (integral, _) = normalization_integral(&coarse, mode.wall_radius).unwrap();
        worst_norm = worst_norm.max((integral - 1.0).abs());
        worst_doubling = worst_doubling.max((fine.norm_constant / coarse.norm_constant - 1.0).abs());
    }
    outcome(
        failures.is_empty() && count == 20 && worst_wall <= 1e-9 && worst_norm <= 1e-8 && worst_doubling <= 1e-8,
        format!(
            "{count} modes; wall/max {worst_wall:.2e} (tol 1e-9); |norm - 1| {worst_norm:.2e} (tol 1e-8); grid doubling {worst_doubling:.2e} (tol 1e-8) {failures:?}"
        ),
    )
}

fn determinism_and_io() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    std::fs::write(
        &config,
        "m = 0.5\nr0 = 1.5\nbeta = \"0:3:7\"\nn = \"0..6\"\nl = \"-3..3\"\ns = [1, -1]\nbranches = [1, -1]\nmethods = \"exact,asymptotic,nonrelativistic\"\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "8"].iter().enumerate() {
        let out = dir.path().join(format!("table{i}.csv"));
        let args = [
            "spiral-dirac",
            "spectrum-static",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            workers,
        ];
        run(args, &mut std::io::sink()).unwrap();
        outputs.push(std::fs::read(&out).unwrap());
    }
    let identical = outputs[0] == outputs[1] && !outputs[0].is_empty();

    let rotating = RunConfig::from_raw(
        Mode::Rotating,
        &RawConfig::from_toml_str(
            "m = 1\nomega = [0.05, 0.3]\nbeta = [0, 2.5, 4]\nn = \"0..3\"\nl = \"-1..1\"\ns = [1, -1]\nbranches = [1, -1]\nmethods = \"exact,asymptotic,nonrelativistic\"",
        )
        .unwrap(),
    )
    .unwrap();
    let table = run_spectrum(&rotating).unwrap();
    let csv_exact = read_csv(to_csv_string(&table).as_bytes()).map(|t| bitwise_equal(&t, &table)).unwrap_or(false);
    let mut json = Vec::new();
    write_json_lines(&table, &mut json).unwrap();
    let json_exact = read_json_lines(json.as_slice()).map(|t| bitwise_equal(&t, &table)).unwrap_or(false);
    let static_back = read_csv(outputs[0].as_slice()).unwrap();
    let static_exact = to_csv_string(&static_back).into_bytes() == outputs[0];
    outcome(
        identical && csv_exact && json_exact && static_exact,
        format!(
            "byte-identical CSV across runs and worker counts: {identical}; CSV round-trip exact: {}; JSON-lines round-trip exact: {json_exact} ({} rows)",
            csv_exact && static_exact,
            table.rows.len() + static_back.rows.len()
        ),
    )
}

fn bitwise_equal(a: &spiral_dirac::table::SpectrumTable, b: &spiral_dirac::table::SpectrumTable) -> bool {
    use spiral_dirac::table::Outcome as Cell;
    let bits = |x: Option<f64>| x.map(f64::to_bits);
    a.rows.len() == b.rows.len()
        && a.rows.iter().zip(&b.rows).all(|(x, y)| {
            let cells = match (&x.outcome, &y.outcome) {
                (
                    Cell::Level { zero_used: za, energy: ea, small_x0: sa },
                    Cell::Level { zero_used: zb, energy: eb, small_x0: sb },
                ) => za.to_bits() == zb.to_bits() && ea.to_bits() == eb.to_bits() && sa == sb,
                (Cell::Error(ma), Cell::Error(mb)) => ma == mb,
                _ => false,
            };
            cells
                && (x.n, x.l, x.s, x.zeta, x.method, x.branch) == (y.n, y.l, y.s, y.zeta, y.method, y.branch)
                && x.beta.to_bits() == y.beta.to_bits()
                && x.omega.to_bits() == y.omega.to_bits()
                && bits(x.r0_eff) == bits(y.r0_eff)
                && bits(x.rho0) == bits(y.rho0)
        })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("transformation verification", transformation),
        ("asymptotic spectrum", asymptotic_spectrum),
        ("effective-radius law", effective_radius_law),
        ("rotating beta-invariance", rotating_invariance),
        ("non-relativistic limits", nonrelativistic_limits),
        ("geometry identities", geometry_identities),
        ("wavefunction contract", wavefunction_contract),
        ("determinism and I/O", determinism_and_io),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        if !result.passed {
            failed += 1;
        }
        println!("{verdict} {}. {name}: {}", i + 1, result.detail);
    }
    println!("acceptance: {} of 9 criteria passed in {:.2?}", 9 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
