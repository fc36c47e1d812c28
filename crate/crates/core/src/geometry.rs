//! Spiral-dislocation line elements in the static and uniformly rotating
//! frames, their tetrads, and numerical checks of the tetrad and structure
//! equations.
//!
//! Coordinates are ordered `(t, r, phi, z)` with `hbar = c = 1`. Tetrads are
//! stored as `e[a][mu] = e^a_mu` and inverses as `e_inv[mu][a] = e^mu_a`.
//!
//! The torsion of this spacetime is a delta distribution supported on the
//! defect line `r = 0`. Nothing here represents it: every check runs at
//! `r > 0`, where the torsion two-form vanishes identically.

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{check_finite, Error, Result};

pub const T: usize = 0;
pub const R: usize = 1;
pub const PHI: usize = 2;
pub const Z: usize = 3;

pub type Mat4 = [[f64; 4]; 4];

/// Minkowski metric `diag(-1, 1, 1, 1)`.
pub const ETA: Mat4 = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Dislocation parameter `beta` and angular velocity `omega` of the frame.
/// `omega = 0` is the static frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectFrame {
    pub beta: f64,
    pub omega: f64,
}

impl DefectFrame {
    pub fn new(beta: f64, omega: f64) -> Result<Self> {
        let frame = Self { beta, omega };
        frame.validate()?;
        Ok(frame)
    }

    pub fn static_frame(beta: f64) -> Result<Self> {
        Self::new(beta, 0.0)
    }

    pub fn is_rotating(&self) -> bool {
        self.omega > 0.0
    }

    /// Rejects negative or non-finite parameters and `beta * omega >= 1`,
    /// for which the physical region of the rotating frame is empty.
    pub fn validate(&self) -> Result<()> {
        check_finite("beta must be finite", self.beta)?;
        check_finite("omega must be finite", self.omega)?;
        if self.beta < 0.0 {
            return Err(Error::Domain { what: "beta must be >= 0", value: self.beta });
        }
        if self.omega < 0.0 {
            return Err(Error::Domain { what: "omega must be >= 0", value: self.omega });
        }
        if self.omega > 0.0 && self.beta * self.omega >= 1.0 {
            return Err(Error::Parameter("beta * omega must be < 1 (empty physical region)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, r: f64, phi: f64, z: f64) -> Self {
        Self { t, r, phi, z }
    }

    /// A point at `t = phi = z = 0`.
    pub fn at_radius(r: f64) -> Self {
        Self::new(0.0, r, 0.0, 0.0)
    }

    fn coords(&self) -> [f64; 4] {
        [self.t, self.r, self.phi, self.z]
    }

    fn from_coords(c: [f64; 4]) -> Self {
        Self::new(c[T], c[R], c[PHI], c[Z])
    }

    fn check(&self) -> Result<()> {
        for c in self.coords() {
            check_finite("coordinates must be finite", c)?;
        }
        if self.r <= 0.0 {
            return Err(Error::Domain { what: "r must be > 0", value: self.r });
        }
        Ok(())
    }
}

/// `g_{mu nu}` in `(t, r, phi, z)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor {
    pub components: Mat4,
}

impl MetricTensor {
    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.components[mu][nu]
    }

    /// The `(r, phi, z)` block.
    pub fn spatial_block(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.components[i + 1][j + 1];
            }
        }
        out
    }

    pub fn spatial_determinant(&self) -> f64 {
        let m = self.spatial_block();
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetradField {
    /// `e[a][mu] = e^a_mu`
    pub e: Mat4,
    /// `e_inv[mu][a] = e^mu_a`
    pub e_inv: Mat4,
}

impl TetradField {
    /// `e^a_mu e^b_nu eta_ab`.
    pub fn reconstructed_metric(&self) -> Mat4 {
        let mut g = [[0.0; 4]; 4];
        for (mu, row) in g.iter_mut().enumerate() {
            for (nu, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|a| ETA[a][a] * self.e[a][mu] * self.e[a][nu]).sum();
            }
        }
        g
    }

    /// Largest deviation of `e e_inv` and `e_inv e` from the identity.
    pub fn inverse_defect(&self) -> f64 {
        let left = mat_mul(&self.e, &self.e_inv);
        let right = mat_mul(&self.e_inv, &self.e);
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((left[i][j] - id).abs()).max((right[i][j] - id).abs());
            }
        }
        worst
    }
}

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn spatial_components(r: f64, beta: f64) -> Mat4 {
    let mut g = [[0.0; 4]; 4];
    g[R][R] = 1.0;
    g[R][PHI] = beta;
    g[PHI][R] = beta;
    g[PHI][PHI] = beta * beta + r * r;
    g[Z][Z] = 1.0;
    g
}

/// `ds^2 = -dt^2 + dr^2 + 2 beta dr dphi + (beta^2 + r^2) dphi^2 + dz^2`.
pub fn metric_static(point: &SpacetimePoint, frame: &DefectFrame) -> Result<MetricTensor> {
    point.check()?;
    frame.validate()?;
    if frame.omega != 0.0 {
        return Err(Error::Parameter("the static metric needs omega = 0"));
    }
    let mut g = spatial_components(point.r, frame.beta);
    g[T][T] = -1.0;
    Ok(MetricTensor { components: g })
}

/// The static line element after `phi -> phi + omega t`.
///
/// Fails with [`Error::Region`] outside `r < sqrt(1 - beta^2 omega^2)/omega`.
pub fn metric_rotating(point: &SpacetimePoint, frame: &DefectFrame) -> Result<MetricTensor> {
    point.check()?;
    if let Some(bound) = radial_bound(frame)? {
        if point.r >= bound {
            return Err(Error::Region { r: point.r, bound });
        }
    }
    let (r, beta, omega) = (point.r, frame.beta, frame.omega);
    let mut g = spatial_components(r, beta);
    g[T][T] = -(1.0 - omega * omega * beta * beta - omega * omega * r * r);
    g[T][R] = beta * omega;
    g[R][T] = beta * omega;
    g[T][PHI] = omega * (beta * beta + r * r);
    g[PHI][T] = g[T][PHI];
    Ok(MetricTensor { components: g })
}

/// The metric appropriate to the frame: static for `omega = 0`, rotating otherwise.
pub fn metric(point: &SpacetimePoint, frame: &DefectFrame) -> Result<MetricTensor> {
    if frame.is_rotating() {
        metric_rotating(point, frame)
    } else {
        metric_static(point, frame)
    }
}

/// Tetrad and inverse of the rotating frame; reduces to the static pair at `omega = 0`.
pub fn tetrad(point: &SpacetimePoint, frame: &DefectFrame) -> Result<TetradField> {
    point.check()?;
    frame.validate()?;
    let (r, beta, omega) = (point.r, frame.beta, frame.omega);
    let e = [
        [1.0, 0.0, 0.0, 0.0],
        [omega * beta, 1.0, beta, 0.0],
        [omega * r, 0.0, r, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    let e_inv = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, -beta / r, 0.0],
        [-omega, 0.0, 1.0 / r, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    Ok(TetradField { e, e_inv })
}

/// Max absolute entry of `g - e eta e^T` for an explicit tetrad.
pub fn tetrad_metric_residual(metric: &MetricTensor, tetrad: &TetradField) -> f64 {
    let rebuilt = tetrad.reconstructed_metric();
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            worst = worst.max((metric.components[mu][nu] - rebuilt[mu][nu]).abs());
        }
    }
    worst
}

/// Max absolute entry of `g_{mu nu} - e^a_mu e^b_nu eta_ab` at a point.
pub fn verify_tetrad_relation(point: &SpacetimePoint, frame: &DefectFrame) -> Result<f64> {
    let g = metric(point, frame)?;
    let e = tetrad(point, frame)?;
    Ok(tetrad_metric_residual(&g, &e))
}

/// Connection one-form `conn[mu][a][b] = omega_mu^a_b`. The only non-zero
/// entries are `omega_phi^2_1 = -omega_phi^1_2 = 1` and
/// `omega_t^2_1 = -omega_t^1_2 = omega`.
pub fn connection(frame: &DefectFrame) -> [[[f64; 4]; 4]; 4] {
    let mut conn = [[[0.0; 4]; 4]; 4];
    conn[PHI][2][1] = 1.0;
    conn[PHI][1][2] = -1.0;
    conn[T][2][1] = frame.omega;
    conn[T][1][2] = -frame.omega;
    conn
}

/// Default finite-difference step `1e-3 * max(1, r)`.
pub fn default_fd_step(r: f64) -> f64 {
    1e-3 * r.max(1.0)
}

/// Central-difference derivatives `d[mu] = d/dx^mu` of the tetrad and its
/// inverse.
fn tetrad_derivatives(
    point: &SpacetimePoint,
    frame: &DefectFrame,
    h: f64,
) -> Result<([Mat4; 4], [Mat4; 4])> {
    let mut de = [[[0.0; 4]; 4]; 4];
    let mut de_inv = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        let mut plus = point.coords();
        let mut minus = point.coords();
        plus[mu] += h;
        minus[mu] -= h;
        let tp = tetrad(&SpacetimePoint::from_coords(plus), frame)?;
        let tm = tetrad(&SpacetimePoint::from_coords(minus), frame)?;
        for i in 0..4 {
            for j in 0..4 {
                de[mu][i][j] = (tp.e[i][j] - tm.e[i][j]) / (2.0 * h);
                de_inv[mu][i][j] = (tp.e_inv[i][j] - tm.e_inv[i][j]) / (2.0 * h);
            }
        }
    }
    Ok((de, de_inv))
}

/// Torsion residual of `T^a = d theta^a + omega^a_b ^ theta^b` away from the
/// defect, using central differences with step `fd_step`.
///
/// Two projections of the same two-form are evaluated and the larger
/// component is returned:
///
/// * coordinate components `T^a_{mu nu}` from derivatives of `e^a_mu`;
/// * frame components `T^c_{ab} = -theta^c([e_a, e_b]) + omega^c_b(e_a) - omega^c_a(e_b)`
///   from derivatives of the inverse tetrad.
///
/// The tetrad is affine in `r`, so the first projection is exact up to
/// rounding; the inverse carries `1/r`, so the second shows the `O(h^2)`
/// truncation of the stencil.
pub fn structure_equation_residual(
    point: &SpacetimePoint,
    frame: &DefectFrame,
    fd_step: f64,
) -> Result<f64> {
    point.check()?;
    frame.validate()?;
    if !(fd_step > 0.0) || !fd_step.is_finite() {
        return Err(Error::Domain { what: "fd_step must be > 0", value: fd_step });
    }
    if point.r <= 2.0 * fd_step {
        return Err(Error::Domain {
            what: "finite-difference stencil would cross r <= 0 (need r > 2 fd_step)",
            value: point.r,
        });
    }
    let field = tetrad(point, frame)?;
    let conn = connection(frame);
    let (de, de_inv) = tetrad_derivatives(point, frame, fd_step)?;
    let mut worst: f64 = 0.0;

    for a in 0..4 {
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                let mut t = de[mu][a][nu] - de[nu][a][mu];
                for b in 0..4 {
                    t += conn[mu][a][b] * field.e[b][nu] - conn[nu][a][b] * field.e[b][mu];
                }
                worst = worst.max(t.abs());
            }
        }
    }

    // frame vectors e_a have components e_inv[mu][a]
    for a in 0..4 {
        for b in (a + 1)..4 {
            let mut bracket = [0.0; 4];
            for (mu, slot) in bracket.iter_mut().enumerate() {
                *slot = (0..4)
                    .map(|nu| {
                        field.e_inv[nu][a] * de_inv[nu][mu][b] - field.e_inv[nu][b] * de_inv[nu][mu][a]
                    })
                    .sum();
            }
            for c in 0..4 {
                let mut t: f64 = -(0..4).map(|mu| field.e[c][mu] * bracket[mu]).sum::<f64>();
                for mu in 0..4 {
                    t += conn[mu][c][b] * field.e_inv[mu][a] - conn[mu][c][a] * field.e_inv[mu][b];
                }
                worst = worst.max(t.abs());
            }
        }
    }
    Ok(worst)
}

/// Outer radius of the physical region, `sqrt(1 - beta^2 omega^2)/omega`;
/// `None` (unbounded) in the static frame.
pub fn radial_bound(frame: &DefectFrame) -> Result<Option<f64>> {
    frame.validate()?;
    if frame.omega == 0.0 {
        return Ok(None);
    }
    let bo = frame.beta * frame.omega;
    Ok(Some((1.0 - bo * bo).sqrt() / frame.omega))
}
