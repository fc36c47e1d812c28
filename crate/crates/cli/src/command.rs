//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use spiral_dirac_core::geometry::DefectFrame;
use spiral_dirac_core::specfun::{asymptotic_zero, bessel_zero, BesselOrder, ZeroIndex};
use spiral_dirac_core::spectrum::{ParticleConfig, QuantumNumbers, Spin};
use spiral_dirac_core::wavefunction::{normalize, radial_profile, ModeSpec, RadialProfile};

use crate::config::{Mode, RawConfig, RunConfig};
use crate::error::CliError;
use crate::export::{format_real, write_table};
use crate::table::run_spectrum;
use crate::verify::{run_verify, Level, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "spiral-dirac", version, about = "Dirac bound states in a spiral-dislocation spacetime")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table in the static frame.
    SpectrumStatic(SweepArgs),
    /// Energy table in the uniformly rotating frame.
    SpectrumRotating(SweepArgs),
    /// Run the built-in consistency checks.
    Verify(VerifyArgs),
    /// Sample a normalised radial profile.
    Wavefunction(WavefunctionArgs),
    /// List Bessel zeros.
    Zeros(ZerosArgs),
}

/// Sweep flags. Each one overrides the config key of the same name.
#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// TOML file with any of the keys below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<String>,
    /// Wall radius (static only).
    #[arg(long)]
    pub r0: Option<String>,
    /// Angular velocity sweep (rotating only).
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Dislocation parameter: `a,b,c` or `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Axial momentum (static, exact method only).
    #[arg(long, allow_hyphen_values = true)]
    pub kz: Option<String>,
    /// Radial quantum numbers, e.g. `0..5`.
    #[arg(long)]
    pub n: Option<String>,
    /// Orbital numbers, e.g. `-2..2`.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Spin signs, e.g. `+1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Energy branches, e.g. `+1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub branches: Option<String>,
    /// Any of exact, asymptotic, nonrelativistic.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json-lines.
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<String>,
}

impl SweepArgs {
    fn overrides(&self) -> RawConfig {
        let mut raw = RawConfig::default();
        let pairs = [
            ("m", &self.m),
            ("r0", &self.r0),
            ("omega", &self.omega),
            ("beta", &self.beta),
            ("kz", &self.kz),
            ("n", &self.n),
            ("l", &self.l),
            ("s", &self.s),
            ("branches", &self.branches),
            ("methods", &self.methods),
            ("out", &self.out),
            ("format", &self.format),
            ("workers", &self.workers),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v.clone());
            }
        }
        raw
    }

    pub fn resolve(&self, mode: Mode) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        RunConfig::from_raw(mode, &base.merged(&self.overrides()))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "quick", value_parser = ["quick", "full"])]
    pub level: String,
    /// Test hook: relative offset applied to library zeros.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb_zeros: f64,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l: i32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub s: i32,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, conflicts_with = "r0", required_unless_present = "r0")]
    pub omega: Option<f64>,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    /// Bessel order, >= 0.
    #[arg(long)]
    pub nu: f64,
    #[arg(long, default_value_t = 10)]
    pub count: u32,
}

/// Parses `args` (program name first) and runs the command. Tables and
/// profiles without `--out` go to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return write!(stdout, "{}", e.render()).map_err(|err| CliError::io("<stdout>", err));
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message.trim_end().trim_start_matches("error: ");
            return Err(CliError::Config(message.to_string()));
        }
    };
    match cli.command {
        Command::SpectrumStatic(args) => spectrum(&args, Mode::Static, stdout),
        Command::SpectrumRotating(args) => spectrum(&args, Mode::Rotating, stdout),
        Command::Verify(args) => verify(&args, stdout),
        Command::Wavefunction(args) => wavefunction(&args, stdout),
        Command::Zeros(args) => zeros(&args, stdout),
    }
}

fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut out = BufWriter::new(file);
            body(&mut out).map_err(|e| match e {
                CliError::Format { message, .. } => CliError::io(path, std::io::Error::other(message)),
                other => other,
            })?;
            out.flush().map_err(|e| CliError::io(path, e))
        }
        None => body(stdout),
    }
}

fn spectrum(args: &SweepArgs, mode: Mode, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = args.resolve(mode)?;
    let table = run_spectrum(&config)?;
    with_output(config.out.as_deref(), stdout, |out| write_table(&table, config.format, out))
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let level = Level::parse(&args.level).unwrap_or(Level::Quick);
    let options = VerifyOptions { zero_perturbation: args.perturb_zeros, ..VerifyOptions::new(level) };
    let report = run_verify(&options);
    write!(stdout, "{report}").map_err(|e| CliError::io("<stdout>", e))?;
    match report.failures() {
        0 => Ok(()),
        n => Err(CliError::Verify(n)),
    }
}

/// Normalised profile for the requested mode; the hard wall sits at `r0`
/// (static) or the light-cone radius (rotating).
pub fn profile_for(args: &WavefunctionArgs) -> Result<(ModeSpec, RadialProfile), CliError> {
    let s = Spin::from_sign(args.s).map_err(|_| CliError::field("s", "expected +1 or -1"))?;
    let q = QuantumNumbers::new(args.n, args.l, s);
    let mode = match (args.omega, args.r0) {
        (Some(omega), None) => ModeSpec::rotating_mode(q, args.m, &DefectFrame::new(args.beta, omega)?)?,
        (None, Some(r0)) => ModeSpec::static_mode(q, &ParticleConfig::new(args.m, r0), args.beta)?,
        _ => return Err(CliError::Config("give exactly one of --omega or --r0".into())),
    };
    let profile = normalize(radial_profile(&mode, args.samples)?, mode.wall_radius)?;
    Ok((mode, profile))
}

fn wavefunction(args: &WavefunctionArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (_, profile) = profile_for(args)?;
    with_output(args.out.as_deref(), stdout, |out| {
        let io = |e: std::io::Error| CliError::Format { context: "wavefunction".into(), message: e.to_string() };
        writeln!(out, "r,re_u,im_u,abs_u").map_err(io)?;
        for (r, u) in profile.radii.iter().zip(&profile.u_values) {
            writeln!(
                out,
                "{},{},{},{}",
                format_real(*r),
                format_real(u.re),
                format_real(u.im),
                format_real(u.norm())
            )
            .map_err(io)?;
        }
        Ok(())
    })
}

fn zeros(args: &ZerosArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let order = BesselOrder::new(args.nu)?;
    let io = |e: std::io::Error| CliError::io("<stdout>", e);
    writeln!(stdout, "k,zero,mcmahon").map_err(io)?;
    for k in 0..args.count {
        let zero = bessel_zero(order, ZeroIndex(k))?;
        let estimate = asymptotic_zero(order, ZeroIndex(k));
        writeln!(stdout, "{},{},{}", k + 1, format_real(zero), format_real(estimate)).map_err(io)?;
    }
    Ok(())
}
