//! The nonlinear piecewise-linear jet scheme for `u_t + a u_x = 0` with
//! constant `a > 0`.
//!
//! Each grid point carries a value `phi_j` and a slope `psi_j`. One step
//! traces the characteristic back to the foot point `x_j - mu h`, which lies
//! in the upwind cell `[x_{j-1}, x_j]`, and reads value and left-sided slope
//! of that cell's nonlinear Hermite interpolant there.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::csvfmt::Num;
use crate::error::{Error, Result};
use crate::grid::{return_step_count, wrap_unit, GridSpec, RationalCfl};
use crate::plf::{assemble_from_jet, kink_offset, l1_plf, PiecewiseLinearFn};

/// Grid values `phi_j` and slopes `psi_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetState {
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl JetState {
    pub fn new(phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if phi.len() != psi.len() {
            return Err(Error::LengthMismatch {
                expected: phi.len(),
                got: psi.len(),
            });
        }
        if phi.iter().chain(&psi).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "jet state entries must be finite".into(),
            ));
        }
        Ok(Self { phi, psi })
    }

    /// From the interleaved vector `[phi_0, psi_0, phi_1, psi_1, ...]`.
    pub fn from_interleaved(u: &[f64]) -> Result<Self> {
        if !u.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                expected: u.len() + 1,
                got: u.len(),
            });
        }
        Self::new(
            u.iter().step_by(2).copied().collect(),
            u.iter().skip(1).step_by(2).copied().collect(),
        )
    }

    pub fn to_interleaved(&self) -> Vec<f64> {
        self.phi
            .iter()
            .zip(&self.psi)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            phi: self.phi.iter().map(|v| v * c).collect(),
            psi: self.psi.iter().map(|v| v * c).collect(),
        }
    }

    /// Largest absolute entry over values and slopes.
    pub fn max_norm(&self) -> f64 {
        self.phi
            .iter()
            .chain(&self.psi)
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Writes `j,x_j,phi,psi` rows.
    pub fn write_csv<W: Write>(&self, grid: &GridSpec, mut out: W) -> io::Result<()> {
        writeln!(out, "j,x,phi,psi")?;
        for j in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{}",
                j,
                Num(grid.x(j)),
                Num(self.phi[j]),
                Num(self.psi[j])
            )?;
        }
        Ok(())
    }
}

/// Branch of the cell interpolant a foot point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Left line of a genuine piece (foot point at or left of the kink).
    L,
    /// Right line of a genuine piece.
    R,
    /// Secant fallback.
    F,
}

/// Per-cell branch tags; entry `c` belongs to cell `[x_c, x_{c+1}]`, which
/// holds the foot point of grid point `c + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchPattern(pub Vec<Branch>);

impl BranchPattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn uniform(b: Branch, m: usize) -> Self {
        Self(vec![b; m])
    }
}

impl fmt::Display for BranchPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(match b {
                Branch::L => "L",
                Branch::R => "R",
                Branch::F => "F",
            })?;
        }
        Ok(())
    }
}

impl FromStr for BranchPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c.to_ascii_uppercase() {
                'L' => Ok(Branch::L),
                'R' => Ok(Branch::R),
                'F' => Ok(Branch::F),
                other => Err(Error::InvalidParameter(format!("bad branch tag `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BranchPattern)
    }
}

/// Direct initialization `phi_j = u0(x_j)`, `psi_j = u0'(x_j)`.
///
/// Periodicity of `u0` is not checked.
pub fn init_direct<U, D>(u0: U, du0: D, grid: &GridSpec) -> JetState
where
    U: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    JetState {
        phi: grid.points().map(&u0).collect(),
        psi: grid.points().map(&du0).collect(),
    }
}

/// Default kink offset `h / 2^26` for [`init_delta`].
pub fn default_delta(grid: &GridSpec) -> f64 {
    grid.h() * 2f64.powi(-26)
}

/// Initialization from the connect-the-dots interpolant `I` of the samples
/// `u0(x_j)`, shifted left by `delta`: `phi_j = I(x_j + delta)`,
/// `psi_j = I'(x_j + delta)`.
///
/// The resulting interpolant has its kinks at `x_j - delta`, exactly one
/// grid spacing apart, so it is non-defective for every CFL number with
/// `delta < h / q`. Collinear sample triples are left as they are; they just
/// produce no kink.
pub fn init_delta<U>(
    u0: U,
    grid: &GridSpec,
    cfl: &RationalCfl,
    delta: Option<f64>,
) -> Result<JetState>
where
    U: Fn(f64) -> f64,
{
    let h = grid.h();
    let delta = delta.unwrap_or_else(|| default_delta(grid));
    let limit = h / cfl.q() as f64;
    if !(delta > 0.0 && delta < limit) {
        return Err(Error::InvalidDelta { delta, limit });
    }
    let m = grid.cells();
    let samples: Vec<f64> = grid.points().map(&u0).collect();
    let psi: Vec<f64> = (0..m)
        .map(|j| (samples[(j + 1) % m] - samples[j]) / h)
        .collect();
    let phi = (0..m).map(|j| samples[j] + psi[j] * delta).collect();
    Ok(JetState { phi, psi })
}

/// Evaluation operator: values and left-sided slopes of `f` at the grid
/// points.
pub fn evaluate_on_grid(f: &PiecewiseLinearFn, grid: &GridSpec) -> JetState {
    JetState {
        phi: grid.points().map(|x| f.eval(x)).collect(),
        psi: grid.points().map(|x| f.eval_left_slope(x)).collect(),
    }
}

fn check_len(state: &JetState, grid: &GridSpec) -> Result<()> {
    if state.len() != grid.cells() {
        return Err(Error::LengthMismatch {
            expected: grid.cells(),
            got: state.len(),
        });
    }
    Ok(())
}

/// One step of the jet scheme. Returns the new state and the branch each
/// cell used.
pub fn jet_step(
    state: &JetState,
    grid: &GridSpec,
    cfl: &RationalCfl,
) -> Result<(JetState, BranchPattern)> {
    check_len(state, grid)?;
    let m = grid.cells();
    let h = grid.h();
    let xi = cfl.foot_offset();
    let travel = cfl.travel();
    let (phi, psi) = (&state.phi, &state.psi);
    let mut next = JetState {
        phi: vec![0.0; m],
        psi: vec![0.0; m],
    };
    let mut pattern = Vec::with_capacity(m);
    for c in 0..m {
        let r = (c + 1) % m;
        let (pl, sl, pr, sr) = (phi[c], psi[c], phi[r], psi[r]);
        let branch = match kink_offset(h, pl, sl, pr, sr) {
            Some(k) if xi <= k => Branch::L,
            Some(_) => Branch::R,
            None => Branch::F,
        };
        let (v, s) = match branch {
            Branch::L => (pl + sl * xi, sl),
            Branch::R => (pr - sr * travel, sr),
            Branch::F => {
                let s = (pr - pl) / h;
                (pl + s * xi, s)
            }
        };
        next.phi[r] = v;
        next.psi[r] = s;
        pattern.push(branch);
    }
    Ok((next, BranchPattern(pattern)))
}

/// Jet step with every cell forced onto the given branch; this is the
/// linear map the pattern matrix represents.
pub fn forced_step(
    state: &JetState,
    grid: &GridSpec,
    cfl: &RationalCfl,
    pattern: &BranchPattern,
) -> Result<JetState> {
    check_len(state, grid)?;
    if pattern.len() != grid.cells() {
        return Err(Error::LengthMismatch {
            expected: grid.cells(),
            got: pattern.len(),
        });
    }
    let m = grid.cells();
    let h = grid.h();
    let xi = cfl.foot_offset();
    let travel = cfl.travel();
    let mut next = JetState {
        phi: vec![0.0; m],
        psi: vec![0.0; m],
    };
    for (c, b) in pattern.0.iter().enumerate() {
        let r = (c + 1) % m;
        let (pl, sl, pr, sr) = (state.phi[c], state.psi[c], state.phi[r], state.psi[r]);
        let (v, s) = match b {
            Branch::L => (pl + sl * xi, sl),
            Branch::R => (pr - sr * travel, sr),
            Branch::F => {
                let s = (pr - pl) / h;
                (pl + s * xi, s)
            }
        };
        next.phi[r] = v;
        next.psi[r] = s;
    }
    Ok(next)
}

/// Runs `steps` jet steps.
pub fn evolve_jet(
    state: &JetState,
    grid: &GridSpec,
    cfl: &RationalCfl,
    steps: u64,
) -> Result<JetState> {
    let mut s = state.clone();
    for _ in 0..steps {
        s = jet_step(&s, grid, cfl)?.0;
    }
    Ok(s)
}

/// Kink layout on the sub-cell lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub defective: bool,
    /// Smallest number of whole sub-cells strictly between two adjacent
    /// kinks (circularly); `m q` when there are no kinks.
    pub min_gap_subcells: u64,
    pub kink_subcell_indices: Vec<u64>,
}

/// Relative size below which a slope jump counts as round-off, not a kink.
const KINK_TOL: f64 = 1e-10;

/// Maps each kink of `f` to one of the `m q` sub-cells (kinks on a sub-cell
/// boundary go to the left sub-cell) and reports whether any adjacent pair
/// has fewer than `q - 1` sub-cells between them.
pub fn classify(f: &PiecewiseLinearFn, grid: &GridSpec, q: u64) -> Classification {
    let mq = grid.cells() as u64 * q;
    let mqf = mq as f64;
    let shift = f.shift();
    let (num, den) = shift.fraction();
    let exact_offset = (shift.is_lattice() && mq.is_multiple_of(den)).then(|| num * (mq / den));
    let s = shift.as_f64();

    let mut idx: Vec<u64> = f
        .base_kinks(KINK_TOL * f.max_abs_slope().max(1.0))
        .map(|x| {
            let t = match exact_offset {
                Some(off) => (x * mqf + off as f64).rem_euclid(mqf),
                None => wrap_unit(x + s) * mqf,
            };
            let r = t.round();
            let i = if (t - r).abs() < 1e-9 {
                r as i64 - 1
            } else {
                t.floor() as i64
            };
            i.rem_euclid(mq as i64) as u64
        })
        .collect();
    idx.sort_unstable();

    let min_gap = match idx.len() {
        0 => mq,
        1 => mq - 1,
        n => {
            let inner = idx.windows(2).map(|w| (w[1] - w[0]).saturating_sub(1));
            let wrap = (idx[0] + mq - idx[n - 1]).saturating_sub(1);
            inner.chain(std::iter::once(wrap)).min().unwrap()
        }
    };
    Classification {
        defective: min_gap < q.saturating_sub(1),
        min_gap_subcells: min_gap,
        kink_subcell_indices: idx,
    }
}

/// Runs one return period (`return_step_count` steps) and measures the exact
/// `L1` distance between the initial and final interpolants. Returns whether
/// it is within `tol`, and the distance.
pub fn fixed_point_check(
    state: &JetState,
    grid: &GridSpec,
    cfl: &RationalCfl,
    tol: f64,
) -> Result<(bool, f64)> {
    let start = assemble_from_jet(state, grid)?;
    let end = evolve_jet(state, grid, cfl, return_step_count(cfl, grid))?;
    let d = l1_plf(&start, &assemble_from_jet(&end, grid)?);
    Ok((d <= tol, d))
}

/// `L1` distance of `f` from its mean.
pub fn variation(f: &PiecewiseLinearFn) -> f64 {
    l1_plf(f, &PiecewiseLinearFn::constant(f.integral()))
}

/// First return period `k` such that the state after `k` periods is
/// reproduced by one more period, to within `tol` relative to its variation
/// about the mean.
///
/// Returns `None` when no such period occurs within `max_periods`, and also
/// when the variation collapses below `tol` times the initial variation:
/// a state decaying geometrically onto a constant only reaches it in the
/// limit, and what is left at that point is round-off.
pub fn fixed_point_onset(
    state: &JetState,
    grid: &GridSpec,
    cfl: &RationalCfl,
    max_periods: usize,
    tol: f64,
) -> Result<Option<usize>> {
    let n_ret = return_step_count(cfl, grid);
    let mut current = state.clone();
    let mut f = assemble_from_jet(&current, grid)?;
    let scale0 = variation(&f);
    if scale0 == 0.0 {
        return Ok(Some(0));
    }
    for k in 0..max_periods {
        let scale = variation(&f);
        if scale <= tol * scale0 {
            return Ok(None);
        }
        let next = evolve_jet(&current, grid, cfl, n_ret)?;
        let g = assemble_from_jet(&next, grid)?;
        if l1_plf(&f, &g) <= tol * scale {
            return Ok(Some(k));
        }
        current = next;
        f = g;
    }
    Ok(None)
}

/// Matrix `M` of the jet step with branches forced to `pattern`, acting on
/// the interleaved state `[phi_0, psi_0, ..., phi_{m-1}, psi_{m-1}]`.
pub fn build_pattern_matrix(
    grid: &GridSpec,
    cfl: &RationalCfl,
    pattern: &BranchPattern,
) -> Result<DMatrix<f64>> {
    let m = grid.cells();
    if pattern.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: pattern.len(),
        });
    }
    let h = grid.h();
    let xi = cfl.foot_offset();
    let mu = cfl.mu();
    let mut mat = DMatrix::zeros(2 * m, 2 * m);
    for (c, b) in pattern.0.iter().enumerate() {
        let r = (c + 1) % m;
        let (pl, sl, pr, sr) = (2 * c, 2 * c + 1, 2 * r, 2 * r + 1);
        match b {
            Branch::L => {
                mat[(pr, pl)] = 1.0;
                mat[(pr, sl)] = xi;
                mat[(sr, sl)] = 1.0;
            }
            Branch::R => {
                mat[(pr, pr)] = 1.0;
                mat[(pr, sr)] = -cfl.travel();
                mat[(sr, sr)] = 1.0;
            }
            Branch::F => {
                mat[(pr, pl)] += mu;
                mat[(pr, pr)] += 1.0 - mu;
                mat[(sr, pl)] += -1.0 / h;
                mat[(sr, pr)] += 1.0 / h;
            }
        }
    }
    Ok(mat)
}

/// A real eigenpair `(lambda, v)` of a pattern matrix with `0 < |lambda| < 1`
/// whose eigenvector the nonlinear scheme evolves on the assumed pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayingMode {
    pub lambda: f64,
    /// Eigenvector scaled to unit max-norm with a positive largest entry.
    pub state: JetState,
}

const REAL_TOL: f64 = 1e-10;

/// Finds a decaying real eigenpair of `mat` and checks that one genuine
/// nonlinear step of the eigenvector realizes `pattern` and returns
/// `lambda v`. Candidates are tried in order of decreasing modulus.
pub fn decaying_eigenvector(
    mat: &DMatrix<f64>,
    grid: &GridSpec,
    cfl: &RationalCfl,
    pattern: &BranchPattern,
) -> Result<DecayingMode> {
    let n = mat.nrows();
    if n != mat.ncols() || n != 2 * grid.cells() {
        return Err(Error::LengthMismatch {
            expected: 2 * grid.cells(),
            got: n,
        });
    }
    let mut candidates: Vec<f64> = mat
        .clone()
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= REAL_TOL * z.re.abs().max(1.0))
        .map(|z| z.re)
        .filter(|l| l.abs() > 1e-8 && l.abs() < 1.0 - 1e-12)
        .collect();
    candidates.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if candidates.is_empty() {
        return Err(Error::EigenNotFound);
    }

    let mut last_realized = None;
    for approx in candidates {
        let shifted = mat - DMatrix::identity(n, n) * approx;
        let svd = shifted.svd(false, true);
        let Some(v_t) = svd.v_t else { continue };
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        let mut v: Vec<f64> = v_t.row(imin).iter().copied().collect();
        let (_, peak) = v.iter().fold((0.0f64, 0.0f64), |(best, val), &x| {
            if x.abs() > best {
                (x.abs(), x)
            } else {
                (best, val)
            }
        });
        v.iter_mut().for_each(|x| *x /= peak);
        let vv = nalgebra::DVector::from_column_slice(&v);
        let lambda = (vv.transpose() * mat * &vv)[(0, 0)] / vv.norm_squared();

        let state = JetState::from_interleaved(&v)?;
        let (next, realized) = jet_step(&state, grid, cfl)?;
        let residual = next
            .to_interleaved()
            .iter()
            .zip(&v)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - lambda * b).abs()));
        if realized == *pattern && residual <= 1e-9 {
            return Ok(DecayingMode { lambda, state });
        }
        last_realized = Some(realized);
    }
    Err(Error::PatternNotRealized {
        expected: pattern.to_string(),
        realized: last_realized.map(|p| p.to_string()).unwrap_or_default(),
    })
}
