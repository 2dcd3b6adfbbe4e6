//! Continuous periodic piecewise-linear functions on `[0, 1)`.
//!
//! A [`PiecewiseLinearFn`] is stored as a sorted list of knots, each carrying
//! its value and the slope of the segment that starts there. Shifts are
//! applied lazily: lattice shifts (multiples of a sub-cell width) are kept as
//! an exact fraction so that long runs of steps never drift in position.
//!
//! Slopes are stored explicitly instead of being recovered from neighbouring
//! knot values. Kinks sit a tiny distance `delta` away from grid points, and a
//! divided difference across such a sliver would lose most of its digits.

use std::io::{self, Write};

use crate::csvfmt::Num;
use crate::error::{Error, Result};
use crate::grid::{gcd, wrap_unit, GridSpec};
use crate::jet::JetState;

/// A knot of a piecewise-linear function: position, value, and the slope of
/// the segment to its right (up to the next knot, periodically).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub x: f64,
    pub value: f64,
    pub slope: f64,
}

/// A periodic shift: an exact fraction `num/den` of the period plus a real
/// residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    num: u64,
    den: u64,
    residual: f64,
}

impl Shift {
    pub const ZERO: Shift = Shift {
        num: 0,
        den: 1,
        residual: 0.0,
    };

    /// Exact shift by `num/den` of the period. Negative numerators wrap.
    pub fn lattice(num: i64, den: u64) -> Self {
        assert!(den > 0, "lattice shift needs a positive denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = gcd(r, den).max(1);
        Shift {
            num: r / g,
            den: den / g,
            residual: 0.0,
        }
    }

    pub fn real(s: f64) -> Self {
        Shift {
            num: 0,
            den: 1,
            residual: s,
        }
    }

    pub fn fraction(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_lattice(&self) -> bool {
        self.residual == 0.0
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64 + self.residual
    }

    fn compose(self, other: Shift) -> Shift {
        let g = gcd(self.den, other.den);
        let den = self.den / g * other.den;
        let num = (self.num as u128 * (den / self.den) as u128
            + other.num as u128 * (den / other.den) as u128)
            % den as u128;
        let lat = Shift::lattice(num as i64, den);
        let residual = self.residual + other.residual;
        Shift {
            residual: residual - residual.floor(),
            ..lat
        }
    }
}

/// Which piece of the nonlinear Hermite interpolant a cell uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceKind {
    /// Two lines through the end points with the prescribed slopes, meeting
    /// at an interior kink.
    Genuine { kink: f64 },
    /// The secant through the two end values.
    Fallback,
}

/// Interpolant on one cell `[x_l, x_r]` built from value/slope data at both
/// ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPiece {
    pub kind: PieceKind,
    pub x_l: f64,
    pub x_r: f64,
    pub phi_l: f64,
    pub psi_l: f64,
    pub phi_r: f64,
    pub psi_r: f64,
}

/// Offset of the kink from the left end of a cell of width `w`, or `None`
/// when the two end lines are parallel or meet outside the open cell.
#[inline]
pub(crate) fn kink_offset(w: f64, phi_l: f64, psi_l: f64, phi_r: f64, psi_r: f64) -> Option<f64> {
    if psi_l == psi_r {
        return None;
    }
    let k = (phi_l - phi_r + psi_r * w) / (psi_r - psi_l);
    (k > 0.0 && k < w).then_some(k)
}

impl CellPiece {
    pub fn is_genuine(&self) -> bool {
        matches!(self.kind, PieceKind::Genuine { .. })
    }

    pub fn kink(&self) -> Option<f64> {
        match self.kind {
            PieceKind::Genuine { kink } => Some(kink),
            PieceKind::Fallback => None,
        }
    }

    pub fn secant_slope(&self) -> f64 {
        (self.phi_r - self.phi_l) / (self.x_r - self.x_l)
    }

    /// Value at `x`; the left line is used up to and including the kink.
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            PieceKind::Genuine { kink } if x <= kink => self.phi_l + self.psi_l * (x - self.x_l),
            PieceKind::Genuine { .. } => self.phi_r + self.psi_r * (x - self.x_r),
            PieceKind::Fallback => self.phi_l + self.secant_slope() * (x - self.x_l),
        }
    }

    /// Left-sided derivative at `x`.
    pub fn left_slope(&self, x: f64) -> f64 {
        match self.kind {
            PieceKind::Genuine { kink } if x <= kink => self.psi_l,
            PieceKind::Genuine { .. } => self.psi_r,
            PieceKind::Fallback => self.secant_slope(),
        }
    }
}

/// Nonlinear Hermite interpolant on `[x_l, x_r]`.
///
/// Uses the two lines `phi_l + psi_l (x - x_l)` and `phi_r + psi_r (x - x_r)`
/// when they intersect strictly inside the cell, otherwise the secant.
pub fn cell_interpolant(
    x_l: f64,
    x_r: f64,
    phi_l: f64,
    psi_l: f64,
    phi_r: f64,
    psi_r: f64,
) -> Result<CellPiece> {
    if !(x_l < x_r) {
        return Err(Error::InvalidCell { x_l, x_r });
    }
    let kind = match kink_offset(x_r - x_l, phi_l, psi_l, phi_r, psi_r) {
        Some(k) => PieceKind::Genuine { kink: x_l + k },
        None => PieceKind::Fallback,
    };
    Ok(CellPiece {
        kind,
        x_l,
        x_r,
        phi_l,
        psi_l,
        phi_r,
        psi_r,
    })
}

/// A continuous periodic piecewise-linear function on `[0, 1)` with finitely
/// many kinks.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFn {
    knots: Vec<Knot>,
    shift: Shift,
}

impl PiecewiseLinearFn {
    pub fn constant(c: f64) -> Self {
        Self {
            knots: vec![Knot {
                x: 0.0,
                value: c,
                slope: 0.0,
            }],
            shift: Shift::ZERO,
        }
    }

    /// Builds the function that linearly connects `(position, value)` points,
    /// wrapping from the last point back to the first.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("need at least one point".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidParameter(
                    "positions must be strictly increasing".into(),
                ));
            }
        }
        if !(points[0].0 >= 0.0 && points[points.len() - 1].0 < 1.0) {
            return Err(Error::InvalidParameter(
                "positions must lie in [0, 1)".into(),
            ));
        }
        let n = points.len();
        let knots = (0..n)
            .map(|i| {
                let (x, v) = points[i];
                let (xn, vn) = if i + 1 < n {
                    points[i + 1]
                } else {
                    (points[0].0 + 1.0, points[0].1)
                };
                let slope = if n == 1 { 0.0 } else { (vn - v) / (xn - x) };
                Knot { x, value: v, slope }
            })
            .collect();
        Ok(Self {
            knots,
            shift: Shift::ZERO,
        })
    }

    /// Builds a function directly from knots with explicit segment slopes.
    pub fn from_knots(knots: Vec<Knot>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidParameter("need at least one knot".into()));
        }
        for w in knots.windows(2) {
            if !(w[0].x <= w[1].x) {
                return Err(Error::InvalidParameter("knots must be sorted".into()));
            }
        }
        if !(knots[0].x >= 0.0 && knots[knots.len() - 1].x < 1.0) {
            return Err(Error::InvalidParameter(
                "knot positions must lie in [0, 1)".into(),
            ));
        }
        Ok(Self {
            knots,
            shift: Shift::ZERO,
        })
    }

    /// Knots in the unshifted frame.
    pub fn base_knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    /// Knots at their actual positions (shift applied), sorted.
    pub fn knots(&self) -> Vec<Knot> {
        if self.shift == Shift::ZERO {
            return self.knots.clone();
        }
        let s = self.shift.as_f64();
        let mut out: Vec<Knot> = self
            .knots
            .iter()
            .map(|k| Knot {
                x: wrap_unit(k.x + s),
                ..*k
            })
            .collect();
        out.sort_by(|a, b| a.x.total_cmp(&b.x));
        out
    }

    fn base_coord(&self, x: f64) -> f64 {
        wrap_unit(x - self.shift.as_f64())
    }

    /// Segment (start position, start value, slope) containing base-frame `y`;
    /// `strict` selects the segment ending at `y` when `y` is a knot.
    fn segment_at(&self, y: f64, strict: bool) -> (f64, f64, f64) {
        let idx = if strict {
            self.knots.partition_point(|k| k.x < y)
        } else {
            self.knots.partition_point(|k| k.x <= y)
        };
        if idx == 0 {
            let k = self.knots[self.knots.len() - 1];
            (k.x - 1.0, k.value, k.slope)
        } else {
            let k = self.knots[idx - 1];
            (k.x, k.value, k.slope)
        }
    }

    /// Value at `x` (wrapped periodically).
    pub fn eval(&self, x: f64) -> f64 {
        let y = self.base_coord(x);
        let (x0, v0, s) = self.segment_at(y, false);
        v0 + s * (y - x0)
    }

    /// Left-sided derivative at `x`: at a kink, the slope of the segment
    /// ending there.
    pub fn eval_left_slope(&self, x: f64) -> f64 {
        let y = self.base_coord(x);
        self.segment_at(y, true).2
    }

    /// `x -> f(x - s)` periodically, with `s` applied exactly when it is a
    /// lattice shift.
    pub fn shifted(&self, s: Shift) -> Self {
        Self {
            knots: self.knots.clone(),
            shift: self.shift.compose(s),
        }
    }

    /// Positions of genuine kinks (slope jumps), shifted and sorted.
    pub fn kinks(&self) -> Vec<f64> {
        let n = self.knots.len();
        let s = self.shift.as_f64();
        let mut out: Vec<f64> = (0..n)
            .filter(|&i| self.knots[(i + n - 1) % n].slope != self.knots[i].slope)
            .map(|i| wrap_unit(self.knots[i].x + s))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Base-frame positions (no shift applied) where the slope jumps by more
    /// than `tol`.
    pub(crate) fn base_kinks(&self, tol: f64) -> impl Iterator<Item = f64> + '_ {
        let n = self.knots.len();
        (0..n)
            .filter(move |&i| (self.knots[(i + n - 1) % n].slope - self.knots[i].slope).abs() > tol)
            .map(move |i| self.knots[i].x)
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.knots.iter().fold(0.0, |a, k| a.max(k.slope.abs()))
    }

    pub fn max_value(&self) -> f64 {
        self.knots
            .iter()
            .map(|k| k.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.knots
            .iter()
            .map(|k| k.value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact integral over one period.
    pub fn integral(&self) -> f64 {
        let n = self.knots.len();
        (0..n)
            .map(|i| {
                let k = self.knots[i];
                let end = if i + 1 < n {
                    self.knots[i + 1].x
                } else {
                    self.knots[0].x + 1.0
                };
                let w = end - k.x;
                w * (k.value + 0.5 * k.slope * w)
            })
            .sum()
    }

    /// Writes `position,value` rows of the (shifted) knots.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "position,value")?;
        for k in self.knots() {
            writeln!(out, "{},{}", Num(k.x), Num(k.value))?;
        }
        Ok(())
    }
}

/// Assembles the global interpolant `I(U)` from jet data: one nonlinear
/// Hermite piece per cell `[x_j, x_{j+1}]`, glued at the grid points.
pub fn assemble_from_jet(state: &JetState, grid: &GridSpec) -> Result<PiecewiseLinearFn> {
    let m = grid.cells();
    if state.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: state.len(),
        });
    }
    let h = grid.h();
    let (phi, psi) = (state.phi(), state.psi());
    let mut knots = Vec::with_capacity(2 * m);
    for c in 0..m {
        let r = (c + 1) % m;
        let x = grid.x(c);
        match kink_offset(h, phi[c], psi[c], phi[r], psi[r]) {
            Some(k) => {
                knots.push(Knot {
                    x,
                    value: phi[c],
                    slope: psi[c],
                });
                knots.push(Knot {
                    x: x + k,
                    value: phi[c] + psi[c] * k,
                    slope: psi[r],
                });
            }
            None => {
                knots.push(Knot {
                    x,
                    value: phi[c],
                    slope: (phi[r] - phi[c]) / h,
                });
            }
        }
    }
    Ok(PiecewiseLinearFn {
        knots,
        shift: Shift::ZERO,
    })
}

/// The connect-the-dots interpolant through nodal values `(x_j, U_j)`.
pub fn connect_the_dots(values: &[f64], grid: &GridSpec) -> Result<PiecewiseLinearFn> {
    let m = grid.cells();
    if values.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: values.len(),
        });
    }
    let h = grid.h();
    let knots = (0..m)
        .map(|j| Knot {
            x: grid.x(j),
            value: values[j],
            slope: (values[(j + 1) % m] - values[j]) / h,
        })
        .collect();
    Ok(PiecewiseLinearFn {
        knots,
        shift: Shift::ZERO,
    })
}

/// `shift_periodic(f, s)(x) = f(mod(x - s, 1))`.
pub fn shift_periodic(f: &PiecewiseLinearFn, s: Shift) -> PiecewiseLinearFn {
    f.shifted(s)
}

/// Line (start, value at start, slope) of the segment of `knots` containing
/// `y`, for sorted knots in absolute coordinates.
fn line_at(knots: &[Knot], y: f64) -> (f64, f64, f64) {
    let idx = knots.partition_point(|k| k.x <= y);
    if idx == 0 {
        let k = knots[knots.len() - 1];
        (k.x - 1.0, k.value, k.slope)
    } else {
        let k = knots[idx - 1];
        (k.x, k.value, k.slope)
    }
}

/// `integral over [a, b] of |d|` for `d` linear with end values `da`, `db`.
#[inline]
fn abs_linear_integral(w: f64, da: f64, db: f64) -> f64 {
    if (da >= 0.0) == (db >= 0.0) || da == 0.0 || db == 0.0 {
        0.5 * w * (da.abs() + db.abs())
    } else {
        // the sign change splits the interval into two triangles
        0.5 * w * (da * da + db * db) / (da.abs() + db.abs())
    }
}

fn breakpoints(a: &[Knot], b: &[Knot]) -> Vec<f64> {
    let mut pts: Vec<f64> = Vec::with_capacity(a.len() + b.len() + 2);
    pts.push(0.0);
    pts.extend(a.iter().map(|k| k.x));
    pts.extend(b.iter().map(|k| k.x));
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Exact `L1` distance between two piecewise-linear functions.
///
/// Sub-intervals are bounded by the kinks of both functions; on each one the
/// difference is linear and `|f - g|` integrates in closed form, splitting at
/// the sign change when there is one.
pub fn l1_plf(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn) -> f64 {
    let fk = f.knots();
    let gk = g.knots();
    let pts = breakpoints(&fk, &gk);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let (fx, fv, fs) = line_at(&fk, mid);
        let (gx, gv, gs) = line_at(&gk, mid);
        let da = (fv + fs * (a - fx)) - (gv + gs * (a - gx));
        let db = (fv + fs * (b - fx)) - (gv + gs * (b - gx));
        total += abs_linear_integral(b - a, da, db);
    }
    total
}

const GAUSS3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// `L1` distance from `f` to a general periodic function `u`, by 3-point
/// Gauss quadrature on the knot intervals of `f`, each bisected `refinement`
/// times.
pub fn l1_vs_function<U: Fn(f64) -> f64 + ?Sized>(
    f: &PiecewiseLinearFn,
    u: &U,
    refinement: u32,
) -> f64 {
    let fk = f.knots();
    let pts = breakpoints(&fk, &[]);
    let parts = 1usize << refinement.min(30);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fx, fv, fs) = line_at(&fk, 0.5 * (a + b));
        let sub = (b - a) / parts as f64;
        for i in 0..parts {
            let lo = a + sub * i as f64;
            let c = lo + 0.5 * sub;
            let r = 0.5 * sub;
            for (node, weight) in GAUSS3_NODES.iter().zip(GAUSS3_WEIGHTS) {
                let x = c + r * node;
                total += weight * r * (fv + fs * (x - fx) - u(x)).abs();
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tent() -> PiecewiseLinearFn {
        PiecewiseLinearFn::from_points(&[(0.0, 0.0), (0.5, 1.0)]).unwrap()
    }

    #[test]
    fn cell_interpolant_cases() {
        let p = cell_interpolant(0.0, 1.0, 0.0, 1.0, 0.0, -1.0).unwrap();
        assert_eq!(p.kink(), Some(0.5));
        assert_eq!(p.eval(0.5), 0.5);

        let p = cell_interpolant(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(!p.is_genuine());
        assert_eq!(p.secant_slope(), 1.0);

        // lines meet at x = 3, outside the cell
        let p = cell_interpolant(0.0, 1.0, 0.0, 1.0, 2.0, 0.5).unwrap();
        assert!(!p.is_genuine());
        assert_eq!(p.left_slope(0.3), 2.0);

        assert!(cell_interpolant(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn kink_on_cell_boundary_is_fallback() {
        // lines meet exactly at x_r
        let p = cell_interpolant(0.0, 1.0, 0.0, 1.0, 1.0, 2.0).unwrap();
        assert!(!p.is_genuine());
    }

    #[test]
    fn genuine_piece_reproduces_hermite_data() {
        let p = cell_interpolant(0.25, 0.5, 1.0, 3.0, 1.1, -2.0).unwrap();
        assert!(p.is_genuine());
        assert_eq!(p.eval(0.25), 1.0);
        assert_eq!(p.left_slope(0.25 + 1e-9), 3.0);
        assert!((p.eval(0.5) - 1.1).abs() < 1e-15);
        assert_eq!(p.left_slope(0.5), -2.0);
    }

    #[test]
    fn evaluation_conventions() {
        let c = PiecewiseLinearFn::constant(5.0);
        assert_eq!(c.eval(0.3), 5.0);
        assert_eq!(c.eval_left_slope(0.3), 0.0);

        let t = tent();
        assert_eq!(t.eval_left_slope(0.5), 2.0);
        assert_eq!(t.eval_left_slope(0.50001), -2.0);
        assert_eq!(t.eval_left_slope(0.0), -2.0);
        assert_eq!(t.eval(1.25), t.eval(0.25));
        assert_eq!(t.eval(0.25), 0.5);
    }

    #[test]
    fn shifts() {
        let t = tent();
        assert_eq!(t.shifted(Shift::ZERO), t);
        let full = t.shifted(Shift::lattice(4, 4));
        assert_eq!(full.knots(), t.knots());
        let f = PiecewiseLinearFn::from_points(&[(0.0, 0.0), (0.25, 1.0)]).unwrap();
        let g = f.shifted(Shift::real(0.5));
        assert_eq!(g.kinks(), vec![0.5, 0.75]);
        assert_eq!(g.eval(0.75), 1.0);
        // composing lattice shifts stays exact
        let h = f
            .shifted(Shift::lattice(1, 3))
            .shifted(Shift::lattice(2, 3));
        assert_eq!(h.shift(), Shift::ZERO);
    }

    #[test]
    fn l1_examples() {
        let zero = PiecewiseLinearFn::constant(0.0);
        assert_eq!(l1_plf(&zero, &PiecewiseLinearFn::constant(1.0)), 1.0);
        let t = PiecewiseLinearFn::from_points(&[(0.0, 0.0), (0.5, 1.0)]).unwrap();
        assert!((l1_plf(&zero, &t) - 0.5).abs() < 1e-15);
        assert_eq!(l1_plf(&t, &t), 0.0);
    }

    #[test]
    fn l1_against_function() {
        let t = tent();
        let e = l1_vs_function(&t, &|x: f64| t.eval(x), 0);
        assert!(e < 1e-14);
        let zero = PiecewiseLinearFn::constant(0.0);
        let e = l1_vs_function(&zero, &|x: f64| (2.0 * PI * x).sin(), 4);
        assert!((e - 2.0 / PI).abs() < 1e-6, "{e}");
    }

    #[test]
    fn connect_the_dots_interpolation_error_is_second_order() {
        let u = |x: f64| (2.0 * PI * x).sin();
        let err = |m: usize| {
            let g = GridSpec::new(m).unwrap();
            let vals: Vec<f64> = g.points().map(u).collect();
            l1_vs_function(&connect_the_dots(&vals, &g).unwrap(), &u, 2)
        };
        let ratio = err(32) / err(64);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn assemble_constant_and_tent() {
        let g = GridSpec::new(4).unwrap();
        let s = JetState::new(vec![2.0; 4], vec![0.0; 4]).unwrap();
        let f = assemble_from_jet(&s, &g).unwrap();
        assert!(f.kinks().is_empty());
        assert_eq!(f.eval(0.37), 2.0);

        // m = 2: values (0, 1) with slopes +-2 give the tent with kinks at 0 and 0.5
        let g = GridSpec::new(2).unwrap();
        let s = JetState::new(vec![0.0, 1.0], vec![-2.0, 2.0]).unwrap();
        let f = assemble_from_jet(&s, &g).unwrap();
        assert_eq!(f.kinks(), vec![0.0, 0.5]);
        assert!(l1_plf(&f, &tent()) < 1e-15);
    }

    fn arb_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::btree_set(0u32..400, 1..20).prop_flat_map(|xs| {
            let n = xs.len();
            let xs: Vec<f64> = xs.into_iter().map(|k| k as f64 / 400.0).collect();
            prop::collection::vec(-1.0f64..1.0, n)
                .prop_map(move |vs| xs.iter().copied().zip(vs).collect::<Vec<_>>())
        })
    }

    proptest! {
        #[test]
        fn l1_is_a_metric(a in arb_points(), b in arb_points(), c in arb_points()) {
            let (f, g, h) = (
                PiecewiseLinearFn::from_points(&a).unwrap(),
                PiecewiseLinearFn::from_points(&b).unwrap(),
                PiecewiseLinearFn::from_points(&c).unwrap(),
            );
            let fg = l1_plf(&f, &g);
            prop_assert!(fg >= 0.0);
            prop_assert!((fg - l1_plf(&g, &f)).abs() < 1e-13);
            prop_assert!(fg <= l1_plf(&f, &h) + l1_plf(&h, &g) + 1e-13);
        }

        #[test]
        fn lattice_shift_is_an_isometry(a in arb_points(), b in arb_points(), s in 0i64..40, t in 0i64..40) {
            let f = PiecewiseLinearFn::from_points(&a).unwrap();
            let g = PiecewiseLinearFn::from_points(&b).unwrap();
            let d = l1_plf(&f, &g);
            let ds = l1_plf(&f.shifted(Shift::lattice(t, 40)), &g.shifted(Shift::lattice(t, 40)));
            prop_assert!((d - ds).abs() < 1e-12);
            let e1 = l1_plf(&f, &f.shifted(Shift::lattice(s, 40)));
            let e2 = l1_plf(&f.shifted(Shift::lattice(t, 40)), &f.shifted(Shift::lattice(s + t, 40)));
            prop_assert!((e1 - e2).abs() < 1e-12);
        }

        #[test]
        fn integral_matches_l1_to_zero_for_positive_functions(a in arb_points()) {
            let pos: Vec<(f64, f64)> = a.iter().map(|&(x, v)| (x, v + 2.0)).collect();
            let f = PiecewiseLinearFn::from_points(&pos).unwrap();
            let zero = PiecewiseLinearFn::constant(0.0);
            prop_assert!((f.integral() - l1_plf(&f, &zero)).abs() < 1e-12);
        }
    }
}
