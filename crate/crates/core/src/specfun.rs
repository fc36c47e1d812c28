//! Bessel functions of the first kind for real order `nu >= 0` and real
//! argument `x >= 0`, with derivatives and positive zeros.
//!
//! Three evaluation regimes are used:
//!
//! * the ascending series when `x <= SERIES_LIMIT` or when `x^2/4 < nu + 1`
//!   (all terms decrease from the first, so there is no cancellation);
//! * Hankel's large-argument expansion when `x >= max(HANKEL_LIMIT, nu^2/4)`,
//!   where the smallest term is far below rounding;
//! * Steed's method in between: the continued fraction for `J'/J` at order
//!   `nu`, downward recurrence to an order `mu` below `x`, and the complex
//!   continued fraction for `(J' + i Y')/(J + i Y)` at `mu`, normalised by the
//!   Wronskian.
//!
//! Zero indexing: index `n` selects the `(n + 1)`-th *positive* zero, so
//! `n = 0` is the first zero `j_{nu,1}`. The McMahon estimate for that zero
//! is `pi (n + nu/2 + 3/4)`, which is also the zero of the large-argument
//! cosine envelope of `J_nu`. The origin is never counted as a zero.

use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{check_finite, Error, Result};

/// Below this argument the ascending series is used for every order.
/// Checked against `J_{1/2}(x) = sqrt(2/(pi x)) sin x` on both sides.
const SERIES_LIMIT: f64 = 8.0;

/// Lower bound for the Hankel regime. Steed's continued fraction needs
/// `O(x)` iterations, and its rounding error grows with that count.
const HANKEL_LIMIT: f64 = 40.0;

const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// Order of a Bessel function, finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::Domain { what: "Bessel order must be finite and >= 0", value: nu });
        }
        Ok(Self(nu))
    }

    /// The order `|zeta|` that governs the radial equation.
    pub fn from_zeta(zeta: i32) -> Self {
        Self(f64::from(zeta.unsigned_abs()))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Radial quantum number; selects the `(n + 1)`-th positive zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroIndex(pub u32);

impl ZeroIndex {
    pub fn value(self) -> u32 {
        self.0
    }
}

/// `J_nu(x)`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_finite("Bessel argument must be finite", x)?;
    if x < 0.0 {
        return Err(Error::Domain { what: "Bessel argument must be >= 0", value: x });
    }
    let nu = order.value();
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT || 0.25 * x * x < nu + 1.0 {
        Ok(ascending_series(nu, x))
    } else if x >= HANKEL_LIMIT.max(0.25 * nu * nu) {
        Ok(hankel_asymptotic(nu, x))
    } else {
        steed(nu, x)
    }
}

/// `dJ_nu/dx` for `x > 0`.
///
/// Uses `J_0' = -J_1`, `J_nu' = (J_{nu-1} - J_{nu+1})/2` for `nu >= 1` and
/// `J_nu' = (nu/x) J_nu - J_{nu+1}` for `0 < nu < 1`, where the lower
/// neighbour would have negative order.
pub fn bessel_j_prime(order: BesselOrder, x: f64) -> Result<f64> {
    check_finite("Bessel argument must be finite", x)?;
    if x <= 0.0 {
        return Err(Error::Domain { what: "Bessel derivative needs x > 0", value: x });
    }
    let nu = order.value();
    let upper = bessel_j(BesselOrder(nu + 1.0), x)?;
    if nu == 0.0 {
        Ok(-upper)
    } else if nu >= 1.0 {
        let lower = bessel_j(BesselOrder(nu - 1.0), x)?;
        Ok(0.5 * (lower - upper))
    } else {
        Ok(nu / x * bessel_j(order, x)? - upper)
    }
}

/// McMahon estimate `pi (n + nu/2 + 3/4)` of the `(n + 1)`-th zero.
pub fn asymptotic_zero(order: BesselOrder, index: ZeroIndex) -> f64 {
    PI * (f64::from(index.0) + 0.5 * order.value() + 0.75)
}

/// The `(n + 1)`-th positive zero of `J_nu`.
///
/// Zeros are bracketed by a unit-step sign scan starting at `max(nu, 1)`
/// (every positive zero exceeds both `nu` and `j_{0,1}`) and ending a
/// quarter period past the McMahon estimate, which bounds `j_{nu,n+1}` from
/// above for every `nu >= 0`. Consecutive zeros are more than 3.1 apart, so a
/// unit step cannot skip one. The bracket is then polished with safeguarded
/// Newton iteration.
pub fn bessel_zero(order: BesselOrder, index: ZeroIndex) -> Result<f64> {
    let nu = order.value();
    let estimate = asymptotic_zero(order, index);
    let scan_end = estimate + 0.5 * PI;
    let wanted = index.0 as usize + 1;

    let mut lo = nu.max(1.0);
    let mut f_lo = bessel_j(order, lo)?;
    let mut found = 0usize;
    while lo < scan_end {
        let hi = lo + 1.0;
        let f_hi = bessel_j(order, hi)?;
        if f_hi == 0.0 {
            found += 1;
            if found == wanted {
                return Ok(hi);
            }
            // step over the exact zero so the next interval sees a sign change
            let next = hi + 0.5;
            lo = next;
            f_lo = bessel_j(order, next)?;
            continue;
        }
        if f_lo * f_hi < 0.0 {
            found += 1;
            if found == wanted {
                return refine_zero(order, lo, hi, f_lo);
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::Convergence { routine: "bessel_zero bracket scan", iterations: found })
}

fn refine_zero(order: BesselOrder, mut a: f64, mut b: f64, f_a: f64) -> Result<f64> {
    const MAX_ITER: usize = 200;
    let sign_a = f_a.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        let f = bessel_j(order, x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == sign_a {
            a = x;
        } else {
            b = x;
        }
        let df = bessel_j_prime(order, x)?;
        let newton = x - f / df;
        let next = if df != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || (b - a) <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence { routine: "bessel_zero refinement", iterations: MAX_ITER })
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    // the normalised sum is O(1); stop once terms are below its last bit
    while term.abs() > 1e-18 * (1.0 + sum.abs()) && k < 1000.0 {
        term *= q / (k * (k + nu));
        sum += term;
        k += 1.0;
    }
    sum * series_prefactor(nu, half)
}

/// `sqrt(2/(pi x)) (P cos chi - Q sin chi)` with `chi = x - (nu/2 + 1/4) pi`.
fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut previous = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) * inv8x / k as f64;
        let size = term.abs();
        if size > previous {
            break;
        }
        // terms alternate in sign within P and within Q
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if size < 1e-17 {
            break;
        }
        previous = size;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `(x/2)^nu / Gamma(nu + 1)` without intermediate overflow.
fn series_prefactor(nu: f64, half: f64) -> f64 {
    if nu == 0.0 {
        return 1.0;
    }
    if nu < 150.0 {
        let power = half.powf(nu);
        if power.is_normal() {
            return power / libm::tgamma(nu + 1.0);
        }
    }
    (nu * half.ln() - libm::lgamma(nu + 1.0)).exp()
}

/// Steed's method for `x > SERIES_LIMIT` (so the complex continued fraction
/// converges quickly). Returns `J_nu(x)`.
fn steed(nu: f64, x: f64) -> Result<f64> {
    let max_iter = 10_000usize.max((3.0 * x) as usize);
    let recur = (nu - x + 1.5).floor().max(0.0) as usize;
    let mu = nu - recur as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // J'_nu / J_nu by modified Lentz; `sign` tracks the sign of J_nu.
    let mut sign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..max_iter {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            sign = -sign;
        }
        if (del - 1.0).abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { routine: "Bessel CF1", iterations: max_iter });
    }

    // unnormalised downward recurrence from nu to mu
    let mut j_l = sign * FPMIN;
    let mut jp_l = h * j_l;
    let j_top = j_l;
    let mut fact = nu * xi;
    for _ in 0..recur {
        let t = fact * j_l + jp_l;
        fact -= xi;
        jp_l = fact * t - j_l;
        j_l = t;
    }
    if j_l == 0.0 {
        j_l = f64::EPSILON;
    }
    let f = jp_l / j_l;

    // CF2: p + i q = (J' + i Y')/(J + i Y) at order mu
    let mut a = 0.25 - mu * mu;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let t = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = t;
    converged = false;
    for i in 2..max_iter {
        a += 2.0 * (i - 1) as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        let fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        let den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        let t = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = t;
        if (dlr - 1.0).abs() + dli.abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { routine: "Bessel CF2", iterations: max_iter });
    }

    let gamma = (p - f) / q;
    let j_mu = (w / ((p - f) * gamma + q)).sqrt().copysign(j_l);
    Ok(j_top * (j_mu / j_l))
}
