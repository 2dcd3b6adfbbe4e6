//! Constant-coefficient periodic update stencils `U_j <- sum c_nu U_{j+nu}`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Finite stencil `c_{-s}, ..., c_s`, stored with offset `-s` at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantScheme {
    name: String,
    mu: f64,
    coeffs: Vec<f64>,
}

impl CirculantScheme {
    /// `coeffs[k]` is `c_{k - s}`; the length must be odd.
    pub fn new(name: impl Into<String>, mu: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter("stencil length must be odd".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "stencil coefficients must be finite".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            mu,
            coeffs,
        })
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            mu: 0.0,
            coeffs: vec![1.0],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn half_width(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `c_nu`, zero outside the stencil.
    pub fn coeff(&self, nu: i64) -> f64 {
        let s = self.half_width() as i64;
        if nu.abs() > s {
            0.0
        } else {
            self.coeffs[(nu + s) as usize]
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `sum c_nu e^{i nu omega}`.
    pub fn symbol(&self, omega: f64) -> Complex64 {
        let s = self.half_width() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::from_polar(1.0, (k as i64 - s) as f64 * omega))
            .sum()
    }

    /// Stencil of applying `other` first and then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, b) in other.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        Self {
            name: self.name.clone(),
            mu: self.mu,
            coeffs: out,
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let s = self.half_width().max(other.half_width()) as i64;
        let coeffs = (-s..=s)
            .map(|nu| alpha * self.coeff(nu) + beta * other.coeff(nu))
            .collect();
        Self {
            name: self.name.clone(),
            mu: self.mu,
            coeffs,
        }
    }

    pub fn renamed(mut self, name: impl Into<String>, mu: f64) -> Self {
        self.name = name.into();
        self.mu = mu;
        self
    }

    /// One periodic application.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let m = u.len();
        let s = self.half_width();
        if m <= 2 * s {
            return Err(Error::GridTooSmall { m, half_width: s });
        }
        Ok((0..m)
            .map(|j| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * u[(j + m + k - s) % m])
                    .sum()
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilKind {
    Upwind,
    LaxWendroff,
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "CFL number {mu} outside (0, 1)"
        )))
    }
}

pub fn make_stencil(kind: StencilKind, mu: f64) -> Result<CirculantScheme> {
    check_mu(mu)?;
    Ok(match kind {
        StencilKind::Upwind => CirculantScheme {
            name: "upwind".into(),
            mu,
            coeffs: vec![mu, 1.0 - mu, 0.0],
        },
        StencilKind::LaxWendroff => CirculantScheme {
            name: "lax-wendroff".into(),
            mu,
            coeffs: vec![0.5 * mu * (1.0 + mu), 1.0 - mu * mu, -0.5 * mu * (1.0 - mu)],
        },
    })
}

pub fn step_circulant(scheme: &CirculantScheme, u: &[f64]) -> Result<Vec<f64>> {
    scheme.apply(u)
}

/// `mu`-scaled second-order central difference `-(mu/2)(U_{j+1} - U_{j-1})`.
pub fn central2_operator(mu: f64) -> CirculantScheme {
    CirculantScheme {
        name: "central2".into(),
        mu,
        coeffs: vec![0.5 * mu, 0.0, -0.5 * mu],
    }
}

/// Single-step stencil of three-stage SSP-RK3 on [`central2_operator`].
pub fn ssp_central2_stencil(mu: f64) -> Result<CirculantScheme> {
    check_mu(mu)?;
    let id = CirculantScheme::identity();
    let euler = id.combine(1.0, &central2_operator(mu), 1.0);
    let u1 = euler.clone();
    let u2 = id.combine(0.75, &euler.compose(&u1), 0.25);
    let u3 = id.combine(1.0 / 3.0, &euler.compose(&u2), 2.0 / 3.0);
    Ok(u3.renamed("ssp-central2", mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upwind_coefficients() {
        let s = make_stencil(StencilKind::Upwind, 0.8).unwrap();
        assert_eq!(s.coeff(-1), 0.8);
        assert!((s.coeff(0) - 0.2).abs() < 1e-16);
        assert_eq!(s.coeff(1), 0.0);
        assert!(make_stencil(StencilKind::Upwind, 1.0).is_err());
        assert!(make_stencil(StencilKind::LaxWendroff, 0.0).is_err());
    }

    #[test]
    fn consistency() {
        for mu in [0.1, 0.5, 0.8, 0.95] {
            for s in [
                make_stencil(StencilKind::Upwind, mu).unwrap(),
                make_stencil(StencilKind::LaxWendroff, mu).unwrap(),
                ssp_central2_stencil(mu).unwrap(),
            ] {
                let total: f64 = s.coeffs().iter().sum();
                assert!((total - 1.0).abs() < 1e-14, "{}", s.name());
                assert!((s.symbol(0.0) - 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ssp_stencil_is_taylor_polynomial() {
        let mu = 0.8;
        let s = ssp_central2_stencil(mu).unwrap();
        assert_eq!(s.half_width(), 3);
        for k in 0..64 {
            let w = k as f64 * 0.1;
            let d = Complex64::new(0.0, -mu * w.sin());
            let g = 1.0 + d + d * d / 2.0 + d * d * d / 6.0;
            assert!((s.symbol(w) - g).norm() < 1e-14);
        }
    }

    #[test]
    fn basis_vector_gives_circulant_row() {
        let s = make_stencil(StencilKind::Upwind, 0.8).unwrap();
        let mut e = vec![0.0; 5];
        e[2] = 1.0;
        let out = step_circulant(&s, &e).unwrap();
        assert!((out[2] - 0.2).abs() < 1e-16);
        assert_eq!(out[3], 0.8);
        assert_eq!(out.iter().filter(|v| **v != 0.0).count(), 2);
    }

    #[test]
    fn too_small_grid() {
        let s = ssp_central2_stencil(0.5).unwrap();
        assert_eq!(
            s.apply(&[1.0; 6]),
            Err(Error::GridTooSmall {
                m: 6,
                half_width: 3
            })
        );
        assert!(s.apply(&[1.0; 7]).is_ok());
    }

    #[test]
    fn constants_are_preserved() {
        let s = make_stencil(StencilKind::LaxWendroff, 0.3).unwrap();
        for v in s.apply(&[2.5; 9]).unwrap() {
            assert!((v - 2.5).abs() < 1e-15);
        }
    }
}
