//! Amplification factors, circulant spectra, and the Fourier-diagonalized
//! Crank-Nicolson step.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::stencil::{check_mu, make_stencil, ssp_central2_stencil, CirculantScheme, StencilKind};
use crate::csvfmt::Num;
use crate::error::{Error, Result};

/// Linear schemes with a closed-form amplification factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinearScheme {
    Upwind,
    LaxWendroff,
    SspCentral2,
    CnCentral4,
}

impl LinearScheme {
    pub const ALL: [LinearScheme; 4] = [
        LinearScheme::Upwind,
        LinearScheme::LaxWendroff,
        LinearScheme::SspCentral2,
        LinearScheme::CnCentral4,
    ];

    /// Explicit update stencil; `None` for the implicit scheme.
    pub fn stencil(self, mu: f64) -> Result<Option<CirculantScheme>> {
        Ok(match self {
            Self::Upwind => Some(make_stencil(StencilKind::Upwind, mu)?),
            Self::LaxWendroff => Some(make_stencil(StencilKind::LaxWendroff, mu)?),
            Self::SspCentral2 => Some(ssp_central2_stencil(mu)?),
            Self::CnCentral4 => {
                check_mu(mu)?;
                None
            }
        })
    }

    /// Smallest grid the scheme runs on.
    pub fn min_cells(self) -> usize {
        match self {
            Self::Upwind | Self::LaxWendroff => 3,
            Self::SspCentral2 => 7,
            Self::CnCentral4 => 5,
        }
    }
}

/// `b(omega)` with `g = (1 - i b) / (1 + i b)` for Crank-Nicolson on the
/// fourth-order central difference.
fn cn_half_symbol(mu: f64, omega: f64) -> f64 {
    2.0 * mu / 3.0 * omega.sin() - mu / 12.0 * (2.0 * omega).sin()
}

/// Closed-form amplification factor at `omega = xi h`.
pub fn amplification(kind: LinearScheme, mu: f64, omega: f64) -> Complex64 {
    let i = Complex64::i();
    match kind {
        LinearScheme::Upwind => 1.0 - mu * (1.0 - Complex64::from_polar(1.0, -omega)),
        LinearScheme::LaxWendroff => {
            Complex64::new(1.0 - mu * mu * (1.0 - omega.cos()), -mu * omega.sin())
        }
        LinearScheme::SspCentral2 => {
            let mu2 = mu * mu;
            let mu3 = mu2 * mu;
            1.0 - mu2 / 4.0 * (1.0 - (2.0 * omega).cos())
                - i * (mu3 / 24.0 * (3.0 * omega).sin() + (mu - mu3 / 8.0) * omega.sin())
        }
        LinearScheme::CnCentral4 => {
            let b = cn_half_symbol(mu, omega);
            (1.0 - i * b) / (1.0 + i * b)
        }
    }
}

pub const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub scheme: LinearScheme,
    pub mu: f64,
    /// `lambda_j = g(2 pi j / m)`.
    pub eigenvalues: Vec<Complex64>,
    /// Indices with `||lambda_j| - 1| <= UNIT_TOL`.
    pub unit_set: Vec<usize>,
    /// `(omega, g(omega))` on a uniform grid over `[-pi, pi]`.
    pub samples: Vec<(f64, Complex64)>,
}

impl SpectrumReport {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,re,im,modulus")?;
        for (j, z) in self.eigenvalues.iter().enumerate() {
            writeln!(out, "{},{},{},{}", j, Num(z.re), Num(z.im), Num(z.norm()))?;
        }
        let set: Vec<String> = self.unit_set.iter().map(|j| j.to_string()).collect();
        writeln!(
            out,
            "# unit_set: count={} indices={}",
            self.unit_set.len(),
            set.join(" ")
        )
    }
}

const SAMPLES: usize = 401;

/// Circulant eigenvalues from the stencil DFT (or the implicit symbol for
/// Crank-Nicolson).
pub fn spectrum(kind: LinearScheme, mu: f64, m: usize) -> Result<SpectrumReport> {
    let stencil = kind.stencil(mu)?;
    if m < kind.min_cells() {
        return Err(Error::GridTooSmall {
            m,
            half_width: (kind.min_cells() - 1) / 2,
        });
    }
    let g = |omega: f64| match &stencil {
        Some(s) => s.symbol(omega),
        None => amplification(kind, mu, omega),
    };
    let eigenvalues: Vec<Complex64> = (0..m).map(|j| g(2.0 * PI * j as f64 / m as f64)).collect();
    let unit_set = eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, z)| (z.norm() - 1.0).abs() <= UNIT_TOL)
        .map(|(j, _)| j)
        .collect();
    let samples = (0..SAMPLES)
        .map(|k| {
            let w = -PI + 2.0 * PI * k as f64 / (SAMPLES - 1) as f64;
            (w, g(w))
        })
        .collect();
    Ok(SpectrumReport {
        scheme: kind,
        mu,
        eigenvalues,
        unit_set,
        samples,
    })
}

/// `max_{1 <= n <= n_max} |g(omega)^n - e^{-i omega n mu}|`.
pub fn empirical_limsup(kind: LinearScheme, mu: f64, omega: f64, n_max: u64) -> f64 {
    let g = amplification(kind, mu, omega);
    let exact = Complex64::from_polar(1.0, -omega * mu);
    let (mut gn, mut en) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let mut best = 0.0f64;
    for _ in 0..n_max {
        gn *= g;
        en *= exact;
        best = best.max((gn - en).norm());
    }
    best
}

/// Crank-Nicolson step `(I + A/2) U' = (I - A/2) U` for the fourth-order
/// central difference, with the FFT plans and per-mode factors cached.
#[derive(Clone)]
pub struct CnCentral4 {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    factors: Vec<Complex64>,
}

impl CnCentral4 {
    pub fn new(mu: f64, m: usize) -> Result<Self> {
        check_mu(mu)?;
        if m < LinearScheme::CnCentral4.min_cells() {
            return Err(Error::GridTooSmall { m, half_width: 2 });
        }
        let mut planner = FftPlanner::new();
        let scale = 1.0 / m as f64;
        let factors = (0..m)
            .map(|k| {
                amplification(LinearScheme::CnCentral4, mu, 2.0 * PI * k as f64 / m as f64) * scale
            })
            .collect();
        Ok(Self {
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
            factors,
        })
    }

    pub fn cells(&self) -> usize {
        self.factors.len()
    }

    pub fn step(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.cells() {
            return Err(Error::LengthMismatch {
                expected: self.cells(),
                got: u.len(),
            });
        }
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf.iter_mut().zip(&self.factors).for_each(|(x, g)| *x *= g);
        self.inverse.process(&mut buf);
        Ok(buf.into_iter().map(|z| z.re).collect())
    }
}

pub fn step_cn_central4(mu: f64, u: &[f64]) -> Result<Vec<f64>> {
    CnCentral4::new(mu, u.len())?.step(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upwind_amplification_values() {
        assert!((amplification(LinearScheme::Upwind, 0.8, 0.0) - 1.0).norm() < 1e-16);
        assert!(
            (amplification(LinearScheme::Upwind, 0.8, PI) - Complex64::new(-0.6, 0.0)).norm()
                < 1e-15
        );
    }

    #[test]
    fn closed_forms_match_stencil_symbols() {
        for kind in [
            LinearScheme::Upwind,
            LinearScheme::LaxWendroff,
            LinearScheme::SspCentral2,
        ] {
            for mu in [0.25, 0.8] {
                let s = kind.stencil(mu).unwrap().unwrap();
                for k in 0..200 {
                    let w = -PI + k as f64 * 0.0314;
                    assert!(
                        (s.symbol(w) - amplification(kind, mu, w)).norm() < 1e-12,
                        "{kind:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn cn_is_unitary() {
        for k in 0..100 {
            let w = -PI + k as f64 * 0.0628;
            assert!((amplification(LinearScheme::CnCentral4, 0.8, w).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn spectra_unit_sets() {
        let up = spectrum(LinearScheme::Upwind, 0.8, 100).unwrap();
        assert_eq!(up.unit_set, vec![0]);
        // the central difference cannot see the sawtooth mode, so on an even
        // grid g(pi) = 1 shows up a second time
        let ssp = spectrum(LinearScheme::SspCentral2, 0.8, 100).unwrap();
        assert_eq!(ssp.unit_set, vec![0, 50]);
        assert!((ssp.eigenvalues[50] - 1.0).norm() < 1e-15);
        assert_eq!(
            spectrum(LinearScheme::SspCentral2, 0.8, 101)
                .unwrap()
                .unit_set,
            vec![0]
        );
        assert!(ssp.max_modulus() <= 1.0 + 1e-12);
        let cn = spectrum(LinearScheme::CnCentral4, 0.8, 100).unwrap();
        assert_eq!(cn.unit_set.len(), 100);
        assert!(spectrum(LinearScheme::SspCentral2, 0.8, 6).is_err());
    }

    #[test]
    fn spectrum_csv_has_summary() {
        let mut out = Vec::new();
        spectrum(LinearScheme::Upwind, 0.5, 4)
            .unwrap()
            .write_csv(&mut out)
            .unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("j,re,im,modulus\n0,1,0,1\n"));
        assert!(text.ends_with("# unit_set: count=1 indices=0\n"));
    }

    #[test]
    fn cn_step_multiplies_fourier_modes() {
        let m = 32;
        let mu = 0.75;
        let k = 3;
        let w = 2.0 * PI * k as f64 / m as f64;
        let u: Vec<f64> = (0..m).map(|j| (w * j as f64).cos()).collect();
        let g = amplification(LinearScheme::CnCentral4, mu, w);
        let out = step_cn_central4(mu, &u).unwrap();
        for (j, v) in out.iter().enumerate() {
            let want = (g * Complex64::from_polar(1.0, w * j as f64)).re;
            assert!((v - want).abs() < 1e-13);
        }
        let c = step_cn_central4(mu, &[4.0; 9]).unwrap();
        assert!(c.iter().all(|v| (v - 4.0).abs() < 1e-14));
    }

    #[test]
    fn cn_solves_the_implicit_system() {
        let m = 11;
        let mu = 0.6;
        let u: Vec<f64> = (0..m).map(|j| ((j * j) % 7) as f64).collect();
        let v = step_cn_central4(mu, &u).unwrap();
        // A U_j = mu/12 (-U_{j+2} + 8 U_{j+1} - 8 U_{j-1} + U_{j-2})
        let a = |x: &[f64], j: usize| {
            let at = |o: i64| x[(j as i64 + o).rem_euclid(m as i64) as usize];
            mu / 12.0 * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2))
        };
        for j in 0..m {
            assert!((v[j] + 0.5 * a(&v, j) - (u[j] - 0.5 * a(&u, j))).abs() < 1e-12);
        }
    }

    #[test]
    fn limsup_values() {
        for kind in LinearScheme::ALL {
            assert_eq!(empirical_limsup(kind, 0.7, 0.0, 100), 0.0);
        }
        assert!(empirical_limsup(LinearScheme::Upwind, 0.8, PI, 1000) >= 0.99);
        assert!(
            empirical_limsup(LinearScheme::CnCentral4, 0.75, PI / 2.0, 10_000)
                >= 3f64.sqrt() - 0.05
        );
    }
}
