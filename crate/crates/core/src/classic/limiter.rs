//! Flux-limited Lax-Wendroff for positive advection speed.

use std::fmt;
use std::str::FromStr;

use super::stencil::check_mu;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Limiter {
    VanLeer,
    Superbee,
}

impl Limiter {
    pub fn apply(self, theta: f64) -> f64 {
        match self {
            Self::VanLeer => (theta + theta.abs()) / (1.0 + theta.abs()),
            Self::Superbee => 0.0f64.max((2.0 * theta).min(1.0)).max(theta.min(2.0)),
        }
    }
}

impl fmt::Display for Limiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::VanLeer => "van-leer",
            Self::Superbee => "superbee",
        })
    }
}

impl FromStr for Limiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "van-leer" | "vanleer" => Ok(Self::VanLeer),
            "superbee" => Ok(Self::Superbee),
            _ => Err(Error::InvalidParameter(format!("unknown limiter `{s}`"))),
        }
    }
}

const LARGE: f64 = 1e30;

/// Upwind slope ratio `theta = num / den` with a zero denominator mapped to
/// `+-LARGE` (or 0 when both vanish).
fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() > f64::MIN_POSITIVE {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        LARGE.copysign(num) * den.signum()
    }
}

/// `U_j - mu (U_j - U_{j-1}) - mu(1-mu)/2 [phi_{j+1/2} d_{j+1/2} - phi_{j-1/2} d_{j-1/2}]`
/// with `d_{j-1/2} = U_j - U_{j-1}` and `phi_{j-1/2} = phi(d_{j-3/2} / d_{j-1/2})`.
pub fn step_lw_limited(mu: f64, u: &[f64], limiter: Limiter) -> Result<Vec<f64>> {
    check_mu(mu)?;
    let m = u.len();
    if m < 3 {
        return Err(Error::GridTooSmall { m, half_width: 1 });
    }
    // d[j] = U_j - U_{j-1}, the jump at the left face of cell j
    let d: Vec<f64> = (0..m).map(|j| u[j] - u[(j + m - 1) % m]).collect();
    // limited jump at the left face of j
    let ld: Vec<f64> = (0..m)
        .map(|j| limiter.apply(ratio(d[(j + m - 1) % m], d[j])) * d[j])
        .collect();
    let c = 0.5 * mu * (1.0 - mu);
    Ok((0..m)
        .map(|j| u[j] - mu * d[j] - c * (ld[(j + 1) % m] - ld[j]))
        .collect())
}

pub fn total_variation(u: &[f64]) -> f64 {
    let m = u.len();
    (0..m).map(|j| (u[(j + 1) % m] - u[j]).abs()).sum()
}
