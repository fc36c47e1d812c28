//! Hard-wall bound-state energies, static and rotating.
//!
//! Three kinds of level are produced for each frame:
//!
//! * `Exact`: from the true Bessel zero `j_{|zeta|, n+1}`;
//! * `Asymptotic`: from the large-argument cosine form of `J`, which replaces
//!   the zero by `pi (n + |zeta|/2 + 3/4)`;
//! * `NonRelativistic`: the first-order expansion of the asymptotic level in
//!   `1/m`, rest energy removed.
//!
//! In the static frame the dislocation enters only through the effective
//! radius `rho0 = sqrt(r0^2 + beta^2)`. In the rotating frame the wall sits at
//! the light-cone radius, `r0^2 + beta^2 = 1/omega^2`, and the levels do not
//! depend on `beta` at all.

use core::fmt;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::geometry::{radial_bound, DefectFrame};
use crate::specfun::{asymptotic_zero, bessel_zero, BesselOrder, ZeroIndex};

/// Eigenvalue of `sigma^3` on the upper two-spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn value(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            _ => Err(Error::Parameter("spin projection s must be +1 or -1")),
        }
    }
}

/// Sign of the square root: particle (`+1`) or antiparticle (`-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Particle,
    Antiparticle,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Particle => 1.0,
            Branch::Antiparticle => -1.0,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Branch::Particle => 1,
            Branch::Antiparticle => -1,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Branch::Particle),
            -1 => Ok(Branch::Antiparticle),
            _ => Err(Error::Parameter("branch must be +1 or -1")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Exact,
    Asymptotic,
    NonRelativistic,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Exact, Method::Asymptotic, Method::NonRelativistic];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::NonRelativistic => "nonrelativistic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: i32,
    pub s: Spin,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: i32, s: Spin) -> Self {
        Self { n, l, s }
    }

    pub fn zeta(&self) -> i32 {
        zeta(self.l, self.s)
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::from_zeta(self.zeta())
    }

    pub fn index(&self) -> ZeroIndex {
        ZeroIndex(self.n)
    }

    /// `n + |zeta|/2 + 3/4`
    fn bracket(&self) -> f64 {
        f64::from(self.n) + 0.5 * self.order().value() + 0.75
    }

    /// `l + 1/2`, the eigenvalue coupling to the angular velocity.
    pub fn total_angular(&self) -> f64 {
        f64::from(self.l) + 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleConfig {
    pub m: f64,
    pub k_z: f64,
    pub r0: f64,
}

impl ParticleConfig {
    pub fn new(m: f64, r0: f64) -> Self {
        Self { m, k_z: 0.0, r0 }
    }

    pub fn with_k_z(self, k_z: f64) -> Self {
        Self { k_z, ..self }
    }

    fn validate(&self) -> Result<()> {
        check_finite("mass must be finite", self.m)?;
        check_finite("k_z must be finite", self.k_z)?;
        check_finite("r0 must be finite", self.r0)?;
        if self.m < 0.0 {
            return Err(Error::Domain { what: "mass must be >= 0", value: self.m });
        }
        if self.r0 <= 0.0 {
            return Err(Error::Domain { what: "wall radius r0 must be > 0", value: self.r0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub value: f64,
    pub branch: Branch,
    pub method: Method,
    pub zeta: i32,
    /// Bessel zero (exact) or its McMahon estimate (asymptotic, non-relativistic).
    pub zero_used: f64,
}

/// `zeta = l + (1 - s)/2`. Independent of the geometry.
pub fn zeta(l: i32, s: Spin) -> i32 {
    l + (1 - s.value()) / 2
}

/// `rho0 = sqrt(r0^2 + beta^2)`.
pub fn effective_radius(r0: f64, beta: f64) -> f64 {
    r0.hypot(beta)
}

fn check_beta(beta: f64) -> Result<()> {
    check_finite("beta must be finite", beta)?;
    if beta < 0.0 {
        return Err(Error::Domain { what: "beta must be >= 0", value: beta });
    }
    Ok(())
}

fn require_k_z_zero(p: &ParticleConfig) -> Result<()> {
    if p.k_z != 0.0 {
        return Err(Error::Unsupported("the asymptotic and non-relativistic spectra assume k_z = 0"));
    }
    Ok(())
}

fn require_mass(m: f64) -> Result<()> {
    check_finite("mass must be finite", m)?;
    if m <= 0.0 {
        return Err(Error::Parameter("mass required: non-relativistic limit needs m > 0"));
    }
    Ok(())
}

/// `E = ±sqrt(m^2 + k_z^2 + tau^2)` with `tau = j_{|zeta|,n+1}/rho0`.
///
/// `k_z != 0` is accepted here only; the `-d^2/dz^2` term then adds `k_z^2`.
pub fn energy_static_exact(
    q: &QuantumNumbers,
    p: &ParticleConfig,
    beta: f64,
    branch: Branch,
) -> Result<EnergyLevel> {
    p.validate()?;
    check_beta(beta)?;
    let zero = bessel_zero(q.order(), q.index())?;
    let tau = zero / effective_radius(p.r0, beta);
    let mut radicand = p.m * p.m + tau * tau;
    if p.k_z != 0.0 {
        radicand += p.k_z * p.k_z;
    }
    Ok(EnergyLevel {
        value: branch.sign() * radicand.sqrt(),
        branch,
        method: Method::Exact,
        zeta: q.zeta(),
        zero_used: zero,
    })
}

/// `E ≈ ±sqrt(m^2 + pi^2/(r0^2 + beta^2) [n + |zeta|/2 + 3/4]^2)`.
pub fn energy_static_asymptotic(
    q: &QuantumNumbers,
    p: &ParticleConfig,
    beta: f64,
    branch: Branch,
) -> Result<EnergyLevel> {
    p.validate()?;
    check_beta(beta)?;
    require_k_z_zero(p)?;
    let zero = asymptotic_zero(q.order(), q.index());
    let tau = zero / effective_radius(p.r0, beta);
    Ok(EnergyLevel {
        value: branch.sign() * (p.m * p.m + tau * tau).sqrt(),
        branch,
        method: Method::Asymptotic,
        zeta: q.zeta(),
        zero_used: zero,
    })
}

/// `E ≈ pi^2/(2 m (r0^2 + beta^2)) [n + |zeta|/2 + 3/4]^2`.
pub fn energy_static_nonrel(
    q: &QuantumNumbers,
    p: &ParticleConfig,
    beta: f64,
) -> Result<EnergyLevel> {
    p.validate()?;
    check_beta(beta)?;
    require_k_z_zero(p)?;
    require_mass(p.m)?;
    let rho_sq = p.r0 * p.r0 + beta * beta;
    let bracket = q.bracket();
    Ok(EnergyLevel {
        value: core::f64::consts::PI.powi(2) / (2.0 * p.m * rho_sq) * bracket * bracket,
        branch: Branch::Particle,
        method: Method::NonRelativistic,
        zeta: q.zeta(),
        zero_used: asymptotic_zero(q.order(), q.index()),
    })
}

/// `tau^2/(2m)` with the exact zero: the non-relativistic counterpart of
/// [`energy_static_exact`], isolating the truncation of the `1/m` expansion.
pub fn energy_static_nonrel_exact(
    q: &QuantumNumbers,
    p: &ParticleConfig,
    beta: f64,
) -> Result<EnergyLevel> {
    p.validate()?;
    check_beta(beta)?;
    require_k_z_zero(p)?;
    require_mass(p.m)?;
    let zero = bessel_zero(q.order(), q.index())?;
    let tau = zero / effective_radius(p.r0, beta);
    Ok(EnergyLevel {
        value: tau * tau / (2.0 * p.m),
        branch: Branch::Particle,
        method: Method::NonRelativistic,
        zeta: q.zeta(),
        zero_used: zero,
    })
}

/// `theta^2 = [E + omega (l + 1/2)]^2 - m^2`.
pub fn theta_sq(energy: f64, q: &QuantumNumbers, m: f64, omega: f64) -> f64 {
    let shifted = energy + omega * q.total_angular();
    shifted * shifted - m * m
}

fn check_rotating(m: f64, frame: &DefectFrame) -> Result<()> {
    check_finite("mass must be finite", m)?;
    if m < 0.0 {
        return Err(Error::Domain { what: "mass must be >= 0", value: m });
    }
    if !frame.is_rotating() {
        return Err(Error::Parameter("rotating spectrum needs omega > 0"));
    }
    // surfaces the beta * omega >= 1 parameter error
    radial_bound(frame)?;
    Ok(())
}

/// `E = -omega (l + 1/2) ± sqrt(m^2 + theta^2)` with `theta = omega j_{|zeta|,n+1}`.
///
/// The wall is the light-cone radius, so `y0 = theta sqrt(r0^2 + beta^2) =
/// theta / omega` and the result does not depend on `beta`.
pub fn energy_rotating_exact(
    q: &QuantumNumbers,
    m: f64,
    frame: &DefectFrame,
    branch: Branch,
) -> Result<EnergyLevel> {
    check_rotating(m, frame)?;
    let zero = bessel_zero(q.order(), q.index())?;
    let theta = frame.omega * zero;
    Ok(EnergyLevel {
        value: -frame.omega * q.total_angular() + branch.sign() * (m * m + theta * theta).sqrt(),
        branch,
        method: Method::Exact,
        zeta: q.zeta(),
        zero_used: zero,
    })
}

/// `E ≈ -omega (l + 1/2) ± sqrt(m^2 + pi^2 omega^2 [n + |zeta|/2 + 3/4]^2)`.
pub fn energy_rotating_asymptotic(
    q: &QuantumNumbers,
    m: f64,
    frame: &DefectFrame,
    branch: Branch,
) -> Result<EnergyLevel> {
    check_rotating(m, frame)?;
    let zero = asymptotic_zero(q.order(), q.index());
    let theta = frame.omega * zero;
    Ok(EnergyLevel {
        value: -frame.omega * q.total_angular() + branch.sign() * (m * m + theta * theta).sqrt(),
        branch,
        method: Method::Asymptotic,
        zeta: q.zeta(),
        zero_used: zero,
    })
}

/// `E ≈ pi^2 omega^2/(2m) [n + |zeta|/2 + 3/4]^2 - omega (l + 1/2)`; the last
/// term is the Page-Werner coupling.
pub fn energy_rotating_nonrel(
    q: &QuantumNumbers,
    m: f64,
    frame: &DefectFrame,
) -> Result<EnergyLevel> {
    check_rotating(m, frame)?;
    require_mass(m)?;
    let omega = frame.omega;
    let bracket = q.bracket();
    let confinement = core::f64::consts::PI.powi(2) * omega * omega / (2.0 * m) * bracket * bracket;
    Ok(EnergyLevel {
        value: confinement - omega * q.total_angular(),
        branch: Branch::Particle,
        method: Method::NonRelativistic,
        zeta: q.zeta(),
        zero_used: asymptotic_zero(q.order(), q.index()),
    })
}

/// `theta^2/(2m) - omega (l + 1/2)` with the exact zero.
pub fn energy_rotating_nonrel_exact(
    q: &QuantumNumbers,
    m: f64,
    frame: &DefectFrame,
) -> Result<EnergyLevel> {
    check_rotating(m, frame)?;
    require_mass(m)?;
    let zero = bessel_zero(q.order(), q.index())?;
    let theta = frame.omega * zero;
    Ok(EnergyLevel {
        value: theta * theta / (2.0 * m) - frame.omega * q.total_angular(),
        branch: Branch::Particle,
        method: Method::NonRelativistic,
        zeta: q.zeta(),
        zero_used: zero,
    })
}
