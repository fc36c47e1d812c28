//! Upper-spinor mode functions for tabulation.
//!
//! A mode is `e^{i(l+1/2) phi + i k_z z} u(r)` with
//! `u(r) = A exp(i zeta atan(r/beta)) J_|zeta|(kappa sqrt(r^2 + beta^2))`, where
//! `kappa` is `tau` (static) or `theta` (rotating). The constant `A` is fixed by
//! `2 pi ∫_0^{r0} |u|^2 r dr = 1`: the spatial metric determinant is `r^2`
//! for every `beta`, so the measure is `r dr dphi`, with a unit-length box in `z`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{check_finite, Error, Result};
use crate::geometry::{radial_bound, DefectFrame};
use crate::quadrature::{simpson_with_estimate, GaussLegendre};
use crate::radial_oracle::phase_angle;
use crate::specfun::{bessel_j, bessel_zero, BesselOrder, ZeroIndex};
use crate::spectrum::{
    energy_rotating_exact, energy_static_exact, Branch, EnergyLevel, Method, ParticleConfig,
    QuantumNumbers,
};

/// Largest `|J(x0)|` accepted for the zero stored in an exact level.
const WALL_TOLERANCE: f64 = 1e-9;
/// Relative accuracy required of the normalisation integral.
pub const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub q: QuantumNumbers,
    pub energy: EnergyLevel,
    pub beta: f64,
    pub omega: f64,
    pub k_z: f64,
    /// Hard-wall radius: `r0` in the static frame, the light-cone radius when rotating.
    pub wall_radius: f64,
}

impl ModeSpec {
    pub fn static_mode(q: QuantumNumbers, p: &ParticleConfig, beta: f64) -> Result<Self> {
        let energy = energy_static_exact(&q, p, beta, Branch::Particle)?;
        Ok(Self { q, energy, beta, omega: 0.0, k_z: p.k_z, wall_radius: p.r0 })
    }

    pub fn rotating_mode(q: QuantumNumbers, m: f64, frame: &DefectFrame) -> Result<Self> {
        let energy = energy_rotating_exact(&q, m, frame, Branch::Particle)?;
        let wall = radial_bound(frame)?
            .ok_or(Error::Parameter("rotating mode needs omega > 0"))?;
        Ok(Self { q, energy, beta: frame.beta, omega: frame.omega, k_z: 0.0, wall_radius: wall })
    }

    /// `rho0 = sqrt(r0^2 + beta^2)`; `1/omega` in the rotating frame.
    pub fn effective_radius(&self) -> f64 {
        self.wall_radius.hypot(self.beta)
    }

    /// Radial wavenumber with `kappa rho0` at the stored Bessel zero.
    pub fn kappa(&self) -> f64 {
        self.energy.zero_used / self.effective_radius()
    }

    fn order(&self) -> BesselOrder {
        self.q.order()
    }

    fn validate(&self) -> Result<()> {
        check_finite("beta must be finite", self.beta)?;
        check_finite("wall radius must be finite", self.wall_radius)?;
        if self.wall_radius <= 0.0 {
            return Err(Error::Domain { what: "wall radius must be > 0", value: self.wall_radius });
        }
        if self.energy.method != Method::Exact {
            return Err(Error::Parameter("profiles need an exact eigenvalue"));
        }
        if self.omega > 0.0 {
            let frame = DefectFrame::new(self.beta, self.omega)?;
            let bound = radial_bound(&frame)?.unwrap_or(f64::INFINITY);
            if (self.wall_radius - bound).abs() > 1e-12 * bound {
                return Err(Error::Parameter("rotating modes have their wall at the light-cone radius"));
            }
        }
        let wall_value = bessel_j(self.order(), self.energy.zero_used)?.abs();
        if wall_value > WALL_TOLERANCE {
            return Err(Error::NotEigenvalue { wall_value });
        }
        Ok(())
    }

    fn envelope(&self, r: f64) -> Result<f64> {
        bessel_j(self.order(), self.kappa() * r.hypot(self.beta))
    }

    fn phase(&self, r: f64) -> Complex64 {
        Complex64::from_polar(1.0, f64::from(self.q.zeta()) * phase_angle(r, self.beta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    /// `r_i = wall (i + 1)/n` for `i = 0..n`; the last sample is the wall.
    pub radii: Vec<f64>,
    pub u_values: Vec<Complex64>,
    pub f_values: Vec<f64>,
    pub norm_constant: f64,
}

impl RadialProfile {
    pub fn max_modulus(&self) -> f64 {
        self.u_values.iter().fold(0.0, |m, u| m.max(u.norm()))
    }

    /// `|u(wall)| / max |u|`.
    pub fn wall_ratio(&self) -> f64 {
        self.u_values.last().map_or(0.0, |u| u.norm()) / self.max_modulus()
    }

    fn spacing(&self) -> f64 {
        self.radii[0]
    }
}

/// Samples `u(r)` on `n_samples` equally spaced radii ending at the wall,
/// with `A = 1`.
pub fn radial_profile(mode: &ModeSpec, n_samples: usize) -> Result<RadialProfile> {
    if n_samples < 2 {
        return Err(Error::Domain { what: "need at least 2 samples", value: n_samples as f64 });
    }
    mode.validate()?;
    let h = mode.wall_radius / n_samples as f64;
    let mut radii = Vec::with_capacity(n_samples);
    let mut f_values = Vec::with_capacity(n_samples);
    let mut u_values = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let r = if i + 1 == n_samples { mode.wall_radius } else { h * (i + 1) as f64 };
        let f = mode.envelope(r)?;
        radii.push(r);
        f_values.push(f);
        u_values.push(mode.phase(r) * f);
    }
    Ok(RadialProfile { radii, u_values, f_values, norm_constant: 1.0 })
}

/// `2 pi ∫_0^{r0} |u|^2 r dr` by composite Simpson over the samples, with
/// the origin (where the integrand vanishes) as the first node.
pub fn normalization_integral(profile: &RadialProfile, r0: f64) -> Result<(f64, f64)> {
    check_uniform(profile, r0)?;
    let mut integrand = Vec::with_capacity(profile.radii.len() + 1);
    integrand.push(0.0);
    integrand.extend(profile.radii.iter().zip(&profile.u_values).map(|(r, u)| u.norm_sqr() * r));
    let (value, estimate) = simpson_with_estimate(&integrand, profile.spacing());
    let scale = 2.0 * core::f64::consts::PI;
    Ok((scale * value, scale * estimate))
}

fn check_uniform(profile: &RadialProfile, r0: f64) -> Result<()> {
    let n = profile.radii.len();
    if n < 2 || profile.u_values.len() != n || profile.f_values.len() != n {
        return Err(Error::Parameter("profile is empty or inconsistent"));
    }
    let h = profile.spacing();
    if (profile.radii[n - 1] - r0).abs() > 1e-12 * r0 {
        return Err(Error::Parameter("profile does not end at the wall radius"));
    }
    for (i, r) in profile.radii.iter().enumerate() {
        if (r - h * (i + 1) as f64).abs() > 1e-9 * h {
            return Err(Error::Parameter("profile radii are not equally spaced from the origin"));
        }
    }
    Ok(())
}

/// Rescales the profile so that `2 pi ∫_0^{r0} |u|^2 r dr = 1`.
pub fn normalize(profile: RadialProfile, r0: f64) -> Result<RadialProfile> {
    let (integral, estimate) = normalization_integral(&profile, r0)?;
    if !(integral > 0.0) {
        return Err(Error::Quadrature { estimate: integral, tolerance: 0.0 });
    }
    if estimate > NORM_TOLERANCE * integral {
        return Err(Error::Quadrature { estimate: estimate / integral, tolerance: NORM_TOLERANCE });
    }
    let scale = 1.0 / integral.sqrt();
    let norm_constant = profile.norm_constant * scale;
    let u_values = profile.u_values.iter().map(|u| u * scale).collect();
    Ok(RadialProfile { u_values, norm_constant, ..profile })
}

/// Sign changes of the real envelope strictly inside `(0, wall)`.
pub fn node_count(profile: &RadialProfile) -> usize {
    let interior = &profile.f_values[..profile.f_values.len() - 1];
    let mut count = 0;
    let mut previous = 0.0;
    for &f in interior {
        if f != 0.0 {
            if previous != 0.0 && f.signum() != previous.signum() {
                count += 1;
            }
            previous = f;
        }
    }
    count
}

/// Nodes expected in `(0, wall)`: zeros `j_k < j_{n+1}` of `J_|zeta|` with
/// `j_k > kappa beta`. Equals `n` whenever `kappa beta` is below the first zero.
pub fn expected_node_count(mode: &ModeSpec) -> Result<usize> {
    let inner = mode.kappa() * mode.beta;
    let mut count = 0;
    for k in 0..mode.q.n {
        if bessel_zero(mode.order(), ZeroIndex(k))? > inner {
            count += 1;
        }
    }
    Ok(count)
}

/// `t = 0` value `e^{i(l+1/2) phi} e^{i k_z z} u(r)` with normalisation `A`.
pub fn mode_value(mode: &ModeSpec, norm_constant: f64, r: f64, phi: f64, z: f64) -> Result<Complex64> {
    check_finite("r must be finite", r)?;
    check_finite("phi must be finite", phi)?;
    check_finite("z must be finite", z)?;
    if r <= 0.0 || r > mode.wall_radius * (1.0 + 1e-12) {
        return Err(Error::Region { r, bound: mode.wall_radius });
    }
    let angular = Complex64::from_polar(1.0, mode.q.total_angular() * phi + mode.k_z * z);
    Ok(angular * mode.phase(r) * (norm_constant * mode.envelope(r)?))
}

/// Normalised Gram matrix `<J(k_a rho), J(k_b rho)>` with weight `rho` on
/// `[beta, rho0]` over the first `count` modes of a given `zeta`.
///
/// At `beta = 0` the family is orthogonal. For `beta > 0` the interval is an
/// annulus and the `J`-only family carries no orthogonality guarantee; the
/// matrix is a report in that case.
pub fn overlap_matrix(zeta: i32, beta: f64, wall_radius: f64, count: u32) -> Result<Vec<Vec<f64>>> {
    let order = BesselOrder::from_zeta(zeta);
    let rho0 = wall_radius.hypot(beta);
    let kappas: Vec<f64> = (0..count)
        .map(|k| bessel_zero(order, ZeroIndex(k)).map(|z| z / rho0))
        .collect::<Result<_>>()?;
    let gl = GaussLegendre::new(12);
    let panels = 16 * count.max(1) as usize;
    let mut gram = alloc::vec![alloc::vec![0.0; count as usize]; count as usize];
    for a in 0..count as usize {
        for b in a..count as usize {
            let (ka, kb) = (kappas[a], kappas[b]);
            let value = gl.integrate(
                |rho| {
                    let ja = bessel_j(order, ka * rho).unwrap_or(f64::NAN);
                    let jb = bessel_j(order, kb * rho).unwrap_or(f64::NAN);
                    ja * jb * rho
                },
                beta,
                rho0,
                panels,
            );
            gram[a][b] = value;
            gram[b][a] = value;
        }
    }
    let diag: Vec<f64> = (0..count as usize).map(|i| gram[i][i].sqrt()).collect();
    for (a, row) in gram.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v /= diag[a] * diag[b];
        }
    }
    Ok(gram)
}
