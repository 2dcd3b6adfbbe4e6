//! Classical fixed-grid schemes on periodic nodal values: linear circulant
//! schemes with their spectra, flux-limited Lax-Wendroff, and WENO5.

mod limiter;
mod spectral;
mod stencil;
mod weno;

use std::fmt;
use std::str::FromStr;

pub use limiter::{step_lw_limited, total_variation, Limiter};
pub use spectral::{
    amplification, empirical_limsup, spectrum, step_cn_central4, CnCentral4, LinearScheme,
    SpectrumReport, UNIT_TOL,
};
pub use stencil::{
    central2_operator, make_stencil, ssp_central2_stencil, step_circulant, CirculantScheme,
    StencilKind,
};
pub use weno::step_weno5;

use crate::error::{Error, Result};

/// Three-stage Shu-Osher SSP-RK3 on the central difference, stage by stage.
pub fn step_ssprk3_central2(mu: f64, u: &[f64]) -> Result<Vec<f64>> {
    stencil::check_mu(mu)?;
    if u.len() <= 6 {
        return Err(Error::GridTooSmall {
            m: u.len(),
            half_width: 3,
        });
    }
    let d = central2_operator(mu);
    let euler = |v: &[f64]| -> Result<Vec<f64>> {
        Ok(v.iter().zip(d.apply(v)?).map(|(a, b)| a + b).collect())
    };
    let u1 = euler(u)?;
    let u2: Vec<f64> = u
        .iter()
        .zip(euler(&u1)?)
        .map(|(a, b)| 0.75 * a + 0.25 * b)
        .collect();
    Ok(u.iter()
        .zip(euler(&u2)?)
        .map(|(a, b)| a / 3.0 + 2.0 / 3.0 * b)
        .collect())
}

/// Every classical scheme, addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicScheme {
    Upwind,
    LaxWendroff,
    SspCentral2,
    CnCentral4,
    LwVanLeer,
    LwSuperbee,
    Weno5,
}

impl ClassicScheme {
    pub const ALL: [ClassicScheme; 7] = [
        Self::Upwind,
        Self::LaxWendroff,
        Self::SspCentral2,
        Self::CnCentral4,
        Self::LwVanLeer,
        Self::LwSuperbee,
        Self::Weno5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Upwind => "upwind",
            Self::LaxWendroff => "lax-wendroff",
            Self::SspCentral2 => "ssp-central2",
            Self::CnCentral4 => "cn-central4",
            Self::LwVanLeer => "lw-vanleer",
            Self::LwSuperbee => "lw-superbee",
            Self::Weno5 => "weno5",
        }
    }

    pub fn linear(self) -> Option<LinearScheme> {
        match self {
            Self::Upwind => Some(LinearScheme::Upwind),
            Self::LaxWendroff => Some(LinearScheme::LaxWendroff),
            Self::SspCentral2 => Some(LinearScheme::SspCentral2),
            Self::CnCentral4 => Some(LinearScheme::CnCentral4),
            _ => None,
        }
    }

    pub fn is_linear(self) -> bool {
        self.linear().is_some()
    }
}

impl fmt::Display for ClassicScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "upwind" => Self::Upwind,
            "lax-wendroff" | "lw" => Self::LaxWendroff,
            "ssp-central2" | "ssprk3-central2" => Self::SspCentral2,
            "cn-central4" => Self::CnCentral4,
            "lw-vanleer" | "lw-van-leer" => Self::LwVanLeer,
            "lw-superbee" => Self::LwSuperbee,
            "weno5" => Self::Weno5,
            _ => return Err(Error::UnknownScheme(s.to_string())),
        })
    }
}

#[derive(Clone)]
enum Kernel {
    Stencil(CirculantScheme),
    Cn(CnCentral4),
    Limited(f64, Limiter),
    Weno(f64),
}

/// A classical scheme bound to a CFL number and grid size, with any
/// per-grid setup done once.
#[derive(Clone)]
pub struct Stepper {
    scheme: ClassicScheme,
    cells: usize,
    kernel: Kernel,
}

impl Stepper {
    pub fn new(scheme: ClassicScheme, mu: f64, m: usize) -> Result<Self> {
        stencil::check_mu(mu)?;
        let kernel = match scheme {
            ClassicScheme::CnCentral4 => Kernel::Cn(CnCentral4::new(mu, m)?),
            ClassicScheme::LwVanLeer => Kernel::Limited(mu, Limiter::VanLeer),
            ClassicScheme::LwSuperbee => Kernel::Limited(mu, Limiter::Superbee),
            ClassicScheme::Weno5 => Kernel::Weno(mu),
            linear => Kernel::Stencil(
                linear
                    .linear()
                    .expect("explicit linear scheme")
                    .stencil(mu)?
                    .expect("explicit"),
            ),
        };
        let min = match &kernel {
            Kernel::Stencil(s) => 2 * s.half_width() + 1,
            Kernel::Cn(_) => 5,
            Kernel::Limited(..) => 3,
            Kernel::Weno(_) => 7,
        };
        if m < min {
            return Err(Error::GridTooSmall {
                m,
                half_width: (min - 1) / 2,
            });
        }
        Ok(Self {
            scheme,
            cells: m,
            kernel,
        })
    }

    pub fn scheme(&self) -> ClassicScheme {
        self.scheme
    }

    pub fn step(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.cells {
            return Err(Error::LengthMismatch {
                expected: self.cells,
                got: u.len(),
            });
        }
        match &self.kernel {
            Kernel::Stencil(s) => s.apply(u),
            Kernel::Cn(cn) => cn.step(u),
            Kernel::Limited(mu, l) => step_lw_limited(*mu, u, *l),
            Kernel::Weno(mu) => step_weno5(*mu, u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn names_round_trip() {
        for s in ClassicScheme::ALL {
            assert_eq!(s.name().parse::<ClassicScheme>().unwrap(), s);
        }
        assert_eq!(
            "lw".parse::<ClassicScheme>().unwrap(),
            ClassicScheme::LaxWendroff
        );
        assert_eq!(
            "jet".parse::<ClassicScheme>(),
            Err(Error::UnknownScheme("jet".into()))
        );
    }

    #[test]
    fn staged_and_fused_ssp_agree() {
        let m = 50;
        let mu = 0.8;
        let u: Vec<f64> = (0..m).map(|j| ((j * 13) % 11) as f64 - 5.0).collect();
        let fused = ssp_central2_stencil(mu).unwrap().apply(&u).unwrap();
        let staged = step_ssprk3_central2(mu, &u).unwrap();
        for (a, b) in fused.iter().zip(&staged) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(step_ssprk3_central2(mu, &u[..6]).is_err());
    }

    #[test]
    fn fourier_mode_amplitude_follows_symbol() {
        let m = 64;
        let mu = 0.8;
        let k = 5;
        let w = 2.0 * PI * k as f64 / m as f64;
        for kind in [
            ClassicScheme::Upwind,
            ClassicScheme::LaxWendroff,
            ClassicScheme::SspCentral2,
        ] {
            let st = Stepper::new(kind, mu, m).unwrap();
            let mut re: Vec<f64> = (0..m).map(|j| (w * j as f64).cos()).collect();
            let mut im: Vec<f64> = (0..m).map(|j| (w * j as f64).sin()).collect();
            for _ in 0..10 {
                re = st.step(&re).unwrap();
                im = st.step(&im).unwrap();
            }
            let amp = (re[0] * re[0] + im[0] * im[0]).sqrt();
            let g = amplification(kind.linear().unwrap(), mu, w).norm();
            assert!((amp - g.powi(10)).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn linear_schemes_conserve_mean_and_decay() {
        let m = 40;
        let u: Vec<f64> = (0..m)
            .map(|j| (2.0 * PI * j as f64 / m as f64).sin() + 1.0)
            .collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / m as f64;
        let spread = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max((x - 1.0).abs()));

        let up = Stepper::new(ClassicScheme::Upwind, 0.8, m).unwrap();
        let mut v = u.clone();
        for _ in 0..20_000 {
            v = up.step(&v).unwrap();
        }
        assert!((mean(&v) - 1.0).abs() < 1e-12);
        assert!(spread(&v) < 1e-6);

        let ssp = Stepper::new(ClassicScheme::SspCentral2, 0.8, m).unwrap();
        let mut v = u.clone();
        let mut last = spread(&v);
        for _ in 0..10 {
            for _ in 0..200 {
                v = ssp.step(&v).unwrap();
            }
            assert!(spread(&v) < last);
            last = spread(&v);
        }
        assert!((mean(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stepper_rejects_bad_input() {
        assert!(Stepper::new(ClassicScheme::Weno5, 0.5, 6).is_err());
        assert!(Stepper::new(ClassicScheme::Upwind, 1.2, 10).is_err());
        let st = Stepper::new(ClassicScheme::Upwind, 0.5, 10).unwrap();
        assert!(st.step(&[0.0; 9]).is_err());
    }
}
