//! Fifth-order WENO reconstruction (Jiang-Shu weights) advanced with SSP-RK3.

use super::stencil::check_mu;
use crate::error::{Error, Result};

const EPS: f64 = 1e-6;
const IDEAL: [f64; 3] = [0.1, 0.6, 0.3];

/// Left-biased interface value `u_{j+1/2}^-` from `u_{j-2..=j+2}`.
fn reconstruct(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    let q = [
        (2.0 * a - 7.0 * b + 11.0 * c) / 6.0,
        (-b + 5.0 * c + 2.0 * d) / 6.0,
        (2.0 * c + 5.0 * d - e) / 6.0,
    ];
    let beta = [
        13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2),
        13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2),
        13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2),
    ];
    let alpha: [f64; 3] = std::array::from_fn(|k| IDEAL[k] / (EPS + beta[k]).powi(2));
    let total: f64 = alpha.iter().sum();
    (0..3).map(|k| alpha[k] * q[k]).sum::<f64>() / total
}

/// `dt L(u)_j = -mu (u_{j+1/2} - u_{j-1/2})`.
fn rhs(mu: f64, u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let at = |j: usize, o: isize| u[(j as isize + o).rem_euclid(m as isize) as usize];
    let face: Vec<f64> = (0..m)
        .map(|j| reconstruct(at(j, -2), at(j, -1), u[j], at(j, 1), at(j, 2)))
        .collect();
    (0..m)
        .map(|j| -mu * (face[j] - face[(j + m - 1) % m]))
        .collect()
}

pub fn step_weno5(mu: f64, u: &[f64]) -> Result<Vec<f64>> {
    check_mu(mu)?;
    let m = u.len();
    if m < 7 {
        return Err(Error::GridTooSmall { m, half_width: 3 });
    }
    let l0 = rhs(mu, u);
    let u1: Vec<f64> = u.iter().zip(&l0).map(|(a, b)| a + b).collect();
    let l1 = rhs(mu, &u1);
    let u2: Vec<f64> = (0..m)
        .map(|j| 0.75 * u[j] + 0.25 * (u1[j] + l1[j]))
        .collect();
    let l2 = rhs(mu, &u2);
    Ok((0..m)
        .map(|j| u[j] / 3.0 + 2.0 / 3.0 * (u2[j] + l2[j]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::stencil::{make_stencil, StencilKind};
    use std::f64::consts::PI;

    #[test]
    fn constant_is_unchanged() {
        let out = step_weno5(0.9, &[0.3; 12]).unwrap();
        assert!(out.iter().all(|v| (v - 0.3).abs() < 1e-15));
        assert!(step_weno5(0.5, &[0.0; 6]).is_err());
    }

    #[test]
    fn smooth_data_approaches_ideal_weights() {
        let f = |x: f64| (2.0 * PI * x).sin() + 0.5;
        let gap = |h: f64| {
            let (a, b, c, d, e) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
            let linear = (2.0 * a - 13.0 * b + 47.0 * c + 27.0 * d - 3.0 * e) / 60.0;
            (reconstruct(a, b, c, d, e) - linear).abs()
        };
        assert!(gap(0.01) < 1e-6);
        assert!(gap(0.02) / gap(0.01) > 10.0);
    }

    #[test]
    fn beats_lax_wendroff_on_smooth_sine() {
        let m = 100;
        let mu = 0.8;
        let steps = 125; // one period of travel
        let u0: Vec<f64> = (0..m)
            .map(|j| (2.0 * PI * j as f64 / m as f64).sin())
            .collect();
        let lw = make_stencil(StencilKind::LaxWendroff, mu).unwrap();
        let (mut w, mut l) = (u0.clone(), u0.clone());
        for _ in 0..steps {
            w = step_weno5(mu, &w).unwrap();
            l = lw.apply(&l).unwrap();
        }
        let e = |v: &[f64]| v.iter().zip(&u0).map(|(a, b)| (a - b).abs()).sum::<f64>() / m as f64;
        assert!(e(&w) < e(&l), "weno {} lw {}", e(&w), e(&l));
    }

    #[test]
    fn conserves_mean() {
        let u: Vec<f64> = (0..20).map(|j| ((j * 7) % 5) as f64).collect();
        let v = step_weno5(0.6, &u).unwrap();
        assert!((u.iter().sum::<f64>() - v.iter().sum::<f64>()).abs() < 1e-12);
    }
}
