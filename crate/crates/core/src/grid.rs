//! Periodic uniform grids on `[0, 1)` and rational CFL bookkeeping.
//!
//! Every position that matters for fixed-point analysis (grid points, foot
//! points, per-step shifts) lives on the sub-cell lattice: integer multiples
//! of `1 / (m q)`. Those are kept as integers here; floats are produced only
//! at the boundary to the numerical kernels.

use crate::error::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Wraps `x` into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Uniform periodic grid with `m` cells of width `h = 1/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    m: usize,
}

impl GridSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(m));
        }
        Ok(Self { m })
    }

    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Grid point `x_j = j h`, with `j` taken modulo `m`.
    pub fn x(&self, j: usize) -> f64 {
        (j % self.m) as f64 / self.m as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| self.x(j))
    }
}

pub fn make_grid(m: usize) -> Result<GridSpec> {
    GridSpec::new(m)
}

/// CFL number `mu = p/q` with coprime `p < q`, plus advection speed `a`.
///
/// One time step moves the exact solution by `mu h = p` sub-cells of width
/// `h/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalCfl {
    p: u64,
    q: u64,
    a: f64,
    h: f64,
}

impl RationalCfl {
    pub fn new(p: u64, q: u64, a: f64, grid: &GridSpec) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidCfl {
                p,
                q,
                reason: "p and q must be positive",
            });
        }
        if p >= q {
            return Err(Error::InvalidCfl {
                p,
                q,
                reason: "need 0 < p/q < 1",
            });
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidCfl {
                p,
                q,
                reason: "p and q must be coprime",
            });
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidSpeed(a));
        }
        Ok(Self {
            p,
            q,
            a,
            h: grid.h(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn speed(&self) -> f64 {
        self.a
    }

    pub fn mu(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn dt(&self) -> f64 {
        self.mu() * self.h / self.a
    }

    /// Per-step shift measured in sub-cells of width `h/q`.
    pub fn subcell_shift(&self) -> u64 {
        self.p
    }

    /// Foot-point offset `(1 - mu) h` from the left end of the upwind cell.
    pub fn foot_offset(&self) -> f64 {
        self.h * (self.q - self.p) as f64 / self.q as f64
    }

    /// The distance `mu h` travelled per step.
    pub fn travel(&self) -> f64 {
        self.h * self.p as f64 / self.q as f64
    }

    /// Exact travel after `steps` steps, reduced modulo one period, as a
    /// fraction `num / den` with `den = m q`.
    pub fn lattice_travel(&self, grid: &GridSpec, steps: u64) -> (u64, u64) {
        let den = grid.cells() as u64 * self.q;
        let num = ((steps as u128 * self.p as u128) % den as u128) as u64;
        (num, den)
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.p, self.q)
    }
}

pub fn make_cfl(p: u64, q: u64, a: f64, grid: &GridSpec) -> Result<RationalCfl> {
    RationalCfl::new(p, q, a, grid)
}

/// Smallest positive step count after which the exact shift is a whole
/// number of periods: `m q / gcd(p, m q)`.
pub fn return_step_count(cfl: &RationalCfl, grid: &GridSpec) -> u64 {
    let mq = grid.cells() as u64 * cfl.q();
    mq / gcd(cfl.p(), mq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = make_grid(100).unwrap();
        assert_eq!(g.h(), 0.01);
        assert_eq!(g.x(50), 0.5);
        assert_eq!(make_grid(3).unwrap().h(), 1.0 / 3.0);
        assert_eq!(make_grid(1), Err(Error::InvalidGrid(1)));
    }

    #[test]
    fn cfl_examples() {
        let g = make_grid(3).unwrap();
        let c = make_cfl(3, 4, 1.0, &g).unwrap();
        assert!((c.dt() - 0.25).abs() < 1e-15);
        assert_eq!(c.subcell_shift(), 3);
        assert!((c.travel() - 3.0 / 12.0).abs() < 1e-15);

        let g = make_grid(100).unwrap();
        let c = make_cfl(9, 10, 1.0, &g).unwrap();
        assert!((c.dt() - 0.009).abs() < 1e-15);

        assert!(make_cfl(4, 4, 1.0, &g).is_err());
        assert!(make_cfl(2, 4, 1.0, &g).is_err());
        assert!(make_cfl(5, 4, 1.0, &g).is_err());
        assert!(make_cfl(1, 4, 0.0, &g).is_err());
    }

    #[test]
    fn return_counts() {
        let n = |m, p, q| {
            let g = make_grid(m).unwrap();
            return_step_count(&make_cfl(p, q, 1.0, &g).unwrap(), &g)
        };
        assert_eq!(n(3, 3, 4), 4);
        assert_eq!(n(96, 3, 4), 128);
        assert_eq!(n(100, 9, 10), 1000);
    }

    #[test]
    fn return_count_is_minimal_by_brute_force() {
        for m in 2..40usize {
            for q in 2..12u64 {
                for p in 1..q {
                    if gcd(p, q) != 1 {
                        continue;
                    }
                    let g = make_grid(m).unwrap();
                    let c = make_cfl(p, q, 1.0, &g).unwrap();
                    let mq = m as u64 * q;
                    let brute = (1..=mq).find(|n| (n * p) % mq == 0).unwrap();
                    assert_eq!(return_step_count(&c, &g), brute, "m={m} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn wrap_stays_in_unit_interval() {
        assert_eq!(wrap_unit(1.25), 0.25);
        assert_eq!(wrap_unit(-0.25), 0.75);
        assert_eq!(wrap_unit(-1e-18), 0.0);
        assert_eq!(wrap_unit(1.0), 0.0);
    }
}
