//! Experiment engine: trajectories, total and evolution errors, `(h, t_f)`
//! sweeps, scaling-law fits and maximum tracking.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::classic::{ClassicScheme, Stepper};
use crate::csvfmt::Num;
use crate::error::{Error, Result};
use crate::grid::{make_cfl, make_grid, return_step_count, wrap_unit, GridSpec, RationalCfl};
use crate::jet::{init_delta, init_direct, jet_step, JetState};
use crate::plf::{
    assemble_from_jet, connect_the_dots, l1_plf, l1_vs_function, PiecewiseLinearFn, Shift,
};
use crate::profiles::Profile;

/// Gauss refinement level used for total errors.
const TOTAL_ERROR_REFINEMENT: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Classic(ClassicScheme),
    Jet,
}

impl SchemeId {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classic(c) => c.name(),
            Self::Jet => "jet",
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, Self::Classic(c) if c.is_linear())
    }

    pub fn all() -> impl Iterator<Item = SchemeId> {
        ClassicScheme::ALL
            .into_iter()
            .map(Self::Classic)
            .chain(std::iter::once(Self::Jet))
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("jet") {
            Ok(Self::Jet)
        } else {
            s.parse().map(Self::Classic)
        }
    }
}

/// How the jet scheme samples the initial condition. Classical schemes
/// always take nodal samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum IcStrategy {
    /// `phi = u0(x_j)`, `psi = u0'(x_j)`.
    Direct,
    /// Shifted connect-the-dots data with the default offset.
    #[default]
    Delta,
    /// Shifted connect-the-dots data with an explicit offset.
    DeltaWith(f64),
}

impl IcStrategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Delta | Self::DeltaWith(_) => "delta",
        }
    }
}

impl FromStr for IcStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" | "phi-psi" => Ok(Self::Direct),
            "delta" => Ok(Self::Delta),
            _ => Err(Error::InvalidParameter(format!(
                "unknown initialization strategy `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeState {
    Jet(JetState),
    Nodal(Vec<f64>),
}

impl SchemeState {
    /// Jet interpolant, or connect-the-dots through nodal values.
    pub fn interpolant(&self, grid: &GridSpec) -> Result<PiecewiseLinearFn> {
        match self {
            Self::Jet(s) => assemble_from_jet(s, grid),
            Self::Nodal(u) => connect_the_dots(u, grid),
        }
    }

    /// Largest interpolant value for the jet, largest nodal value otherwise.
    pub fn max_value(&self, grid: &GridSpec) -> Result<f64> {
        match self {
            Self::Jet(_) => Ok(self.interpolant(grid)?.max_value()),
            Self::Nodal(u) => Ok(u.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        }
    }
}

/// A scheme bound to a grid, CFL number and initialization strategy.
#[derive(Clone)]
pub struct Experiment {
    scheme: SchemeId,
    strategy: IcStrategy,
    grid: GridSpec,
    cfl: RationalCfl,
    stepper: Option<Stepper>,
}

impl Experiment {
    pub fn new(
        scheme: SchemeId,
        strategy: IcStrategy,
        grid: GridSpec,
        cfl: RationalCfl,
    ) -> Result<Self> {
        let stepper = match scheme {
            SchemeId::Classic(c) => Some(Stepper::new(c, cfl.mu(), grid.cells())?),
            SchemeId::Jet => None,
        };
        Ok(Self {
            scheme,
            strategy,
            grid,
            cfl,
            stepper,
        })
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn cfl(&self) -> &RationalCfl {
        &self.cfl
    }

    pub fn initial_state(&self, u0: &dyn Profile) -> Result<SchemeState> {
        match (self.scheme, self.strategy) {
            (SchemeId::Classic(_), _) => Ok(SchemeState::Nodal(
                self.grid.points().map(|x| u0.value(x)).collect(),
            )),
            (SchemeId::Jet, IcStrategy::Direct) => {
                if u0.slope(0.0).is_none() {
                    return Err(Error::MissingDerivative(u0.name().to_string()));
                }
                Ok(SchemeState::Jet(init_direct(
                    |x| u0.value(x),
                    |x| u0.slope(x).unwrap_or(f64::NAN),
                    &self.grid,
                )))
            }
            (SchemeId::Jet, IcStrategy::Delta) => Ok(SchemeState::Jet(init_delta(
                |x| u0.value(x),
                &self.grid,
                &self.cfl,
                None,
            )?)),
            (SchemeId::Jet, IcStrategy::DeltaWith(d)) => Ok(SchemeState::Jet(init_delta(
                |x| u0.value(x),
                &self.grid,
                &self.cfl,
                Some(d),
            )?)),
        }
    }

    pub fn step(&self, state: &SchemeState) -> Result<SchemeState> {
        match (state, &self.stepper) {
            (SchemeState::Nodal(u), Some(st)) => Ok(SchemeState::Nodal(st.step(u)?)),
            (SchemeState::Jet(s), None) => {
                Ok(SchemeState::Jet(jet_step(s, &self.grid, &self.cfl)?.0))
            }
            _ => Err(Error::InvalidParameter(
                "state does not belong to this scheme".into(),
            )),
        }
    }

    pub fn advance(&self, state: &SchemeState, steps: u64) -> Result<SchemeState> {
        let mut s = state.clone();
        for _ in 0..steps {
            s = self.step(&s)?;
        }
        Ok(s)
    }

    pub fn evolve(&self, u0: &dyn Profile, n_steps: u64) -> Result<SchemeState> {
        self.advance(&self.initial_state(u0)?, n_steps)
    }

    /// Total error against `u0(x - a t_n)` and evolution error against the
    /// initial interpolant moved by the exact lattice travel.
    pub fn measure(
        &self,
        initial: &SchemeState,
        state: &SchemeState,
        u0: &dyn Profile,
        n_steps: u64,
        t_f_requested: f64,
    ) -> Result<ErrorRecord> {
        let (num, den) = self.cfl.lattice_travel(&self.grid, n_steps);
        let travel = num as f64 / den as f64;
        let f = state.interpolant(&self.grid)?;
        let moved = initial
            .interpolant(&self.grid)?
            .shifted(Shift::lattice(num as i64, den));
        let exact = |x: f64| u0.value(wrap_unit(x - travel));
        Ok(ErrorRecord {
            scheme: self.scheme.name().to_string(),
            m: self.grid.cells(),
            p: self.cfl.p(),
            q: self.cfl.q(),
            a: self.cfl.speed(),
            t_f_requested,
            t_f_actual: n_steps as f64 * self.cfl.dt(),
            steps: n_steps,
            total_error: l1_vs_function(&f, &exact, TOTAL_ERROR_REFINEMENT),
            evolution_error: l1_plf(&f, &moved),
        })
    }
}

/// Runs `n_steps` from the scheme's initialization of `u0`.
pub fn evolve(
    scheme: SchemeId,
    strategy: IcStrategy,
    u0: &dyn Profile,
    grid: &GridSpec,
    cfl: &RationalCfl,
    n_steps: u64,
) -> Result<SchemeState> {
    Experiment::new(scheme, strategy, *grid, *cfl)?.evolve(u0, n_steps)
}

/// Evolves and measures in one go.
pub fn measure_errors(
    scheme: SchemeId,
    strategy: IcStrategy,
    u0: &dyn Profile,
    grid: &GridSpec,
    cfl: &RationalCfl,
    n_steps: u64,
) -> Result<ErrorRecord> {
    let exp = Experiment::new(scheme, strategy, *grid, *cfl)?;
    let initial = exp.initial_state(u0)?;
    let end = exp.advance(&initial, n_steps)?;
    exp.measure(&initial, &end, u0, n_steps, n_steps as f64 * cfl.dt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub scheme: String,
    pub m: usize,
    pub p: u64,
    pub q: u64,
    pub a: f64,
    pub t_f_requested: f64,
    pub t_f_actual: f64,
    pub steps: u64,
    pub total_error: f64,
    pub evolution_error: f64,
}

impl ErrorRecord {
    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn error(&self, kind: ErrorKind) -> f64 {
        match kind {
            ErrorKind::Total => self.total_error,
            ErrorKind::Evolution => self.evolution_error,
        }
    }
}

pub const RECORD_HEADER: &str =
    "scheme,m,p,q,a,t_f_requested,t_f_actual,steps,total_error,evolution_error";

pub fn write_records_csv<W: Write>(records: &[ErrorRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{RECORD_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.m,
            r.p,
            r.q,
            Num(r.a),
            Num(r.t_f_requested),
            Num(r.t_f_actual),
            r.steps,
            Num(r.total_error),
            Num(r.evolution_error)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Total,
    Evolution,
}

/// Step count for the return-period multiple nearest to `t_f`.
pub fn snap_to_return_period(t_f: f64, grid: &GridSpec, cfl: &RationalCfl) -> u64 {
    let n_ret = return_step_count(cfl, grid);
    let period = n_ret as f64 * cfl.dt();
    (t_f / period).round().max(0.0) as u64 * n_ret
}

/// Error records for every `(m, t_f)` pair, each `t_f` snapped to a whole
/// number of return periods. Output is ordered by `m_list`, then `tf_list`.
pub fn bivariate_sweep(
    scheme: SchemeId,
    strategy: IcStrategy,
    u0: &dyn Profile,
    m_list: &[usize],
    (p, q, a): (u64, u64, f64),
    tf_list: &[f64],
) -> Result<Vec<ErrorRecord>> {
    if m_list.is_empty() {
        return Err(Error::EmptySweep("m"));
    }
    if tf_list.is_empty() {
        return Err(Error::EmptySweep("t_f"));
    }
    let per_m: Vec<Result<Vec<ErrorRecord>>> = m_list
        .par_iter()
        .map(|&m| {
            let grid = make_grid(m)?;
            let cfl = make_cfl(p, q, a, &grid)?;
            let exp = Experiment::new(scheme, strategy, grid, cfl)?;
            let targets: Vec<u64> = tf_list
                .iter()
                .map(|&t| snap_to_return_period(t, &grid, &cfl))
                .collect();
            let mut order: Vec<usize> = (0..tf_list.len()).collect();
            order.sort_by_key(|&i| targets[i]);

            let initial = exp.initial_state(u0)?;
            let mut state = initial.clone();
            let mut done = 0;
            let mut out: Vec<Option<ErrorRecord>> = vec![None; tf_list.len()];
            for i in order {
                state = exp.advance(&state, targets[i] - done)?;
                done = targets[i];
                out[i] = Some(exp.measure(&initial, &state, u0, done, tf_list[i])?);
            }
            Ok(out
                .into_iter()
                .map(|r| r.expect("every target measured"))
                .collect())
        })
        .collect();
    let mut records = Vec::with_capacity(m_list.len() * tf_list.len());
    for r in per_m {
        records.extend(r?);
    }
    Ok(records)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Least-squares slope of `log error` against `log h` over the three finest
/// grids.
pub fn observed_order(records: &[ErrorRecord], kind: ErrorKind) -> Result<f64> {
    let mut rs: Vec<&ErrorRecord> = records.iter().collect();
    if rs.len() < 3 {
        return Err(Error::TooFewRecords {
            needed: 3,
            got: rs.len(),
        });
    }
    rs.sort_by_key(|r| r.m);
    let pts: Vec<(f64, f64)> = rs[rs.len() - 3..]
        .iter()
        .map(|r| (r.h().ln(), r.error(kind).ln()))
        .collect();
    Ok(least_squares_slope(&pts))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalH {
    /// `(t_f, h*)` in increasing `t_f`.
    pub points: Vec<(f64, f64)>,
    /// Fitted exponent `beta` in `h* ~ t_f^beta`.
    pub exponent: f64,
}

/// Grid spacing `h*(t_f)` at which the error reaches `target`, by log-log
/// interpolation between the bracketing grids, plus the fitted power law.
pub fn critical_h(records: &[ErrorRecord], target: f64, kind: ErrorKind) -> Result<CriticalH> {
    let mut tfs: Vec<f64> = records.iter().map(|r| r.t_f_actual).collect();
    tfs.sort_by(f64::total_cmp);
    tfs.dedup();
    if tfs.len() < 2 {
        return Err(Error::TooFewRecords {
            needed: 2,
            got: tfs.len(),
        });
    }
    let mut points = Vec::with_capacity(tfs.len());
    for &t in &tfs {
        let mut rs: Vec<&ErrorRecord> = records.iter().filter(|r| r.t_f_actual == t).collect();
        rs.sort_by_key(|r| r.m);
        let hit = rs.windows(2).find_map(|w| {
            let (e0, e1) = (w[0].error(kind), w[1].error(kind));
            if (e0 - target) * (e1 - target) > 0.0 || e0 <= 0.0 || e1 <= 0.0 || e0 == e1 {
                return None;
            }
            let s = (target.ln() - e0.ln()) / (e1.ln() - e0.ln());
            Some((w[0].h().ln() + s * (w[1].h().ln() - w[0].h().ln())).exp())
        });
        points.push((t, hit.ok_or(Error::TargetNotBracketed { target, t_f: t })?));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(t, h)| (t.ln(), h.ln())).collect();
    Ok(CriticalH {
        exponent: least_squares_slope(&logs),
        points,
    })
}

/// Dispersive coefficient `-(a/6)(1 - mu^2) h^2` of the `v_xxx` term in the
/// Lax-Wendroff modified equation.
pub fn modified_eq_coefficient(mu: f64, a: f64, h: f64) -> f64 {
    -(a / 6.0) * (1.0 - mu * mu) * h * h
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxSeries {
    pub scheme: String,
    pub times: Vec<f64>,
    pub max_values: Vec<f64>,
}

impl MaxSeries {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,max_value")?;
        for (t, v) in self.times.iter().zip(&self.max_values) {
            writeln!(out, "{},{}", Num(*t), Num(*v))?;
        }
        Ok(())
    }
}

/// Maximum of the solution at each sample time (rounded to whole steps).
pub fn max_series(
    scheme: SchemeId,
    strategy: IcStrategy,
    u0: &dyn Profile,
    grid: &GridSpec,
    cfl: &RationalCfl,
    sample_times: &[f64],
) -> Result<MaxSeries> {
    if sample_times.windows(2).any(|w| w[1] <= w[0]) || sample_times.iter().any(|t| *t < 0.0) {
        return Err(Error::InvalidParameter(
            "sample times must be non-negative and increasing".into(),
        ));
    }
    let exp = Experiment::new(scheme, strategy, *grid, *cfl)?;
    let dt = cfl.dt();
    let mut state = exp.initial_state(u0)?;
    let mut done = 0u64;
    let mut times = Vec::with_capacity(sample_times.len());
    let mut max_values = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        let target = (t / dt).round() as u64;
        if target < done {
            continue;
        }
        state = exp.advance(&state, target - done)?;
        done = target;
        if times.last() == Some(&(done as f64 * dt)) {
            continue;
        }
        times.push(done as f64 * dt);
        max_values.push(state.max_value(grid)?);
    }
    Ok(MaxSeries {
        scheme: scheme.name().to_string(),
        times,
        max_values,
    })
}
