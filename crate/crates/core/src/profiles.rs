//! Named smooth periodic initial profiles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A periodic initial condition on `[0, 1)`.
pub trait Profile: Sync {
    fn value(&self, x: f64) -> f64;

    /// Exact derivative, when known.
    fn slope(&self, _x: f64) -> Option<f64> {
        None
    }

    fn name(&self) -> &str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedProfile {
    /// `exp(-sin^2(pi (x - 1/2)) / 0.05)`, one smooth peak at `x = 1/2`.
    Bump,
    /// `sin(2 pi x)`.
    Sine,
}

const BUMP_WIDTH: f64 = 0.05;

impl Profile for NamedProfile {
    fn value(&self, x: f64) -> f64 {
        match self {
            Self::Bump => (-(PI * (x - 0.5)).sin().powi(2) / BUMP_WIDTH).exp(),
            Self::Sine => (2.0 * PI * x).sin(),
        }
    }

    fn slope(&self, x: f64) -> Option<f64> {
        Some(match self {
            Self::Bump => -self.value(x) * PI * (2.0 * PI * (x - 0.5)).sin() / BUMP_WIDTH,
            Self::Sine => 2.0 * PI * (2.0 * PI * x).cos(),
        })
    }

    fn name(&self) -> &str {
        match self {
            Self::Bump => "bump",
            Self::Sine => "sine",
        }
    }
}

impl fmt::Display for NamedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "bump" => Ok(Self::Bump),
            "sine" | "sin" => Ok(Self::Sine),
            _ => Err(Error::UnknownProfile(s.to_string())),
        }
    }
}

/// Wraps an arbitrary closure as a profile without a known derivative.
pub struct FnProfile<F> {
    name: String,
    f: F,
}

impl<F: Fn(f64) -> f64 + Sync> FnProfile<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F: Fn(f64) -> f64 + Sync> Profile for FnProfile<F> {
    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn name(&self) -> &str {
        &self.name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_match_finite_differences() {
        for p in [NamedProfile::Bump, NamedProfile::Sine] {
            for i in 0..50 {
                let x = i as f64 / 50.0 + 0.003;
                let e = 1e-6;
                let fd = (p.value(x + e) - p.value(x - e)) / (2.0 * e);
                assert!((fd - p.slope(x).unwrap()).abs() < 1e-6, "{p} at {x}");
            }
        }
    }

    #[test]
    fn bump_is_periodic_with_peak_in_the_middle() {
        let b = NamedProfile::Bump;
        assert!((b.value(0.0) - b.value(1.0)).abs() < 1e-15);
        assert_eq!(b.value(0.5), 1.0);
        assert!(b.value(0.0) < 1e-8);
    }

    #[test]
    fn parse_names() {
        assert_eq!("bump".parse::<NamedProfile>().unwrap(), NamedProfile::Bump);
        assert_eq!("Sine".parse::<NamedProfile>().unwrap(), NamedProfile::Sine);
        assert!("square".parse::<NamedProfile>().is_err());
    }
}
