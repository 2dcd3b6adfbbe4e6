use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use advect_core::classic::spectrum;
use advect_core::csvfmt::Num;
use advect_core::jet::{
    build_pattern_matrix, classify, decaying_eigenvector, fixed_point_onset, jet_step, variation,
};
use advect_core::plf::assemble_from_jet;
use advect_core::study::{
    bivariate_sweep, max_series, observed_order, snap_to_return_period, write_records_csv,
    ErrorKind, Experiment, SchemeId, SchemeState,
};
use advect_core::{
    l1_plf, make_cfl, make_grid, return_step_count, BranchPattern, Error, GridSpec, RationalCfl,
};

use crate::config::{Command, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
    /// stdout was closed by the reader, e.g. `advect ... | head`
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGrid(_)
            | Error::InvalidCfl { .. }
            | Error::InvalidSpeed(_)
            | Error::InvalidDelta { .. }
            | Error::GridTooSmall { .. }
            | Error::InvalidParameter(_)
            | Error::MissingDerivative(_)
            | Error::UnknownScheme(_)
            | Error::UnknownProfile(_)
            | Error::Unsupported(_)
            | Error::EmptySweep(_) => Self::Usage(e.to_string()),
            _ => Self::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Self::Closed;
        }
        Self::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Writes each CSV (prefixed with the config line) to a file under the
/// output directory, or to stdout as consecutive blocks.
struct Sink {
    dir: Option<PathBuf>,
    header: String,
    blocks: usize,
}

impl Sink {
    fn new(cfg: &RunConfig) -> io::Result<Self> {
        if let Some(dir) = &cfg.out {
            fs::create_dir_all(dir)?;
        }
        Ok(Self {
            dir: cfg.out.clone(),
            header: cfg.header(),
            blocks: 0,
        })
    }

    fn emit(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut Vec<u8>) -> io::Result<()>,
    ) -> io::Result<()> {
        let mut buf = Vec::new();
        writeln!(buf, "{}", self.header)?;
        write(&mut buf)?;
        match &self.dir {
            Some(dir) => fs::write(dir.join(name), buf)?,
            None => {
                let mut out = io::stdout().lock();
                if self.blocks > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# file: {name}")?;
                out.write_all(&buf)?;
            }
        }
        self.blocks += 1;
        Ok(())
    }
}

fn setup(cfg: &RunConfig) -> Result<(GridSpec, RationalCfl), Failure> {
    let grid = make_grid(cfg.m)?;
    let cfl = make_cfl(cfg.p, cfg.q, cfg.a, &grid)?;
    Ok((grid, cfl))
}

pub fn dispatch(cfg: &RunConfig) -> Outcome {
    match cfg.command {
        Command::Run => run(cfg),
        Command::Spectrum => spectrum_cmd(cfg),
        Command::Sweep => sweep(cfg),
        Command::Counterexample => counterexample(cfg),
        Command::Maxtrack => maxtrack(cfg),
        Command::Fixedpoint => fixedpoint(cfg),
    }
}

fn run(cfg: &RunConfig) -> Outcome {
    let (grid, cfl) = setup(cfg)?;
    let exp = Experiment::new(cfg.scheme, cfg.strategy, grid, cfl)?;
    let steps = match (cfg.steps, cfg.tf) {
        (Some(n), _) => n,
        (None, Some(t)) => snap_to_return_period(t, &grid, &cfl),
        (None, None) => 0,
    };
    let requested = cfg.tf.unwrap_or(steps as f64 * cfl.dt());
    let initial = exp.initial_state(&cfg.ic)?;
    let end = exp.advance(&initial, steps)?;
    let record = exp.measure(&initial, &end, &cfg.ic, steps, requested)?;
    let profile = end.interpolant(&grid)?;

    let mut sink = Sink::new(cfg)?;
    sink.emit("errors.csv", |w| {
        write_records_csv(std::slice::from_ref(&record), w)
    })?;
    sink.emit("profile.csv", |w| profile.write_csv(w))?;
    if let SchemeState::Jet(s) = &end {
        sink.emit("state.csv", |w| s.write_csv(&grid, w))?;
    }
    Ok(())
}

fn spectrum_cmd(cfg: &RunConfig) -> Outcome {
    let SchemeId::Classic(c) = cfg.scheme else {
        return Err(Failure::Usage(format!(
            "unsupported: spectrum of `{}`",
            cfg.scheme
        )));
    };
    let kind = c
        .linear()
        .ok_or_else(|| Failure::Usage(format!("unsupported: spectrum of nonlinear `{c}`")))?;
    let (_, cfl) = setup(cfg)?;
    let report = spectrum(kind, cfl.mu(), cfg.m)?;
    Sink::new(cfg)?.emit("spectrum.csv", |w| report.write_csv(w))?;
    Ok(())
}

fn sweep(cfg: &RunConfig) -> Outcome {
    let records = bivariate_sweep(
        cfg.scheme,
        cfg.strategy,
        &cfg.ic,
        &cfg.ms,
        (cfg.p, cfg.q, cfg.a),
        &cfg.tfs,
    )?;
    let mut tfs: Vec<f64> = records.iter().map(|r| r.t_f_actual).collect();
    tfs.sort_by(f64::total_cmp);
    tfs.dedup();
    let mut fits = String::from("t_f,observed_order_total,observed_order_evolution\n");
    for t in tfs {
        let at: Vec<_> = records
            .iter()
            .filter(|r| r.t_f_actual == t)
            .cloned()
            .collect();
        if let (Ok(a), Ok(b)) = (
            observed_order(&at, ErrorKind::Total),
            observed_order(&at, ErrorKind::Evolution),
        ) {
            fits.push_str(&format!("{},{},{}\n", Num(t), Num(a), Num(b)));
        }
    }
    let mut sink = Sink::new(cfg)?;
    sink.emit("records.csv", |w| write_records_csv(&records, w))?;
    sink.emit("fits.csv", |w| w.write_all(fits.as_bytes()))?;
    Ok(())
}

fn counterexample(cfg: &RunConfig) -> Outcome {
    let (grid, cfl) = setup(cfg)?;
    let pattern: BranchPattern = cfg.pattern.as_deref().unwrap_or("LLFLLF").parse()?;
    let mat = build_pattern_matrix(&grid, &cfl, &pattern)?;
    let mode = decaying_eigenvector(&mat, &grid, &cfl, &pattern)?;
    let steps = cfg
        .steps
        .unwrap_or_else(|| (cfg.tf.unwrap_or(0.0) / cfl.dt()).round() as u64);

    let amp0 = mode.state.max_norm();
    let mut rows = String::from("step,t,amplitude,predicted,pattern\n");
    rows.push_str(&format!("0,0,{},{},\n", Num(amp0), Num(amp0)));
    let mut state = mode.state.clone();
    let mut kept = true;
    for n in 1..=steps {
        let (next, realized) = jet_step(&state, &grid, &cfl)?;
        kept &= realized == pattern;
        state = next;
        let predicted = amp0 * mode.lambda.abs().powi(n as i32);
        rows.push_str(&format!(
            "{n},{},{},{},{realized}\n",
            Num(n as f64 * cfl.dt()),
            Num(state.max_norm()),
            Num(predicted)
        ));
    }
    let factor = state.max_norm() / amp0;

    let mut sink = Sink::new(cfg)?;
    sink.emit("eigenpair.csv", |w| {
        writeln!(
            w,
            "lambda,modulus,pattern,pattern_kept,steps,t,amplitude_factor,predicted_factor"
        )?;
        writeln!(
            w,
            "{},{},{pattern},{kept},{steps},{},{},{}",
            Num(mode.lambda),
            Num(mode.lambda.abs()),
            Num(steps as f64 * cfl.dt()),
            Num(factor),
            Num(mode.lambda.abs().powi(steps as i32))
        )
    })?;
    sink.emit("mode.csv", |w| mode.state.write_csv(&grid, w))?;
    sink.emit("trajectory.csv", |w| w.write_all(rows.as_bytes()))?;
    Ok(())
}

fn maxtrack(cfg: &RunConfig) -> Outcome {
    let (grid, cfl) = setup(cfg)?;
    let tf = cfg
        .tf
        .unwrap_or_else(|| cfg.steps.unwrap_or(0) as f64 * cfl.dt());
    let n = cfg.samples;
    let times: Vec<f64> = (0..n).map(|k| tf * k as f64 / (n - 1) as f64).collect();
    let mut sink = Sink::new(cfg)?;
    for &id in &cfg.schemes {
        let series = max_series(id, cfg.strategy, &cfg.ic, &grid, &cfl, &times)?;
        sink.emit(&format!("max_{}.csv", id.name()), |w| {
            writeln!(w, "# scheme={}", series.scheme)?;
            series.write_csv(w)
        })?;
    }
    Ok(())
}

fn fixedpoint(cfg: &RunConfig) -> Outcome {
    let (grid, cfl) = setup(cfg)?;
    let exp = Experiment::new(SchemeId::Jet, cfg.strategy, grid, cfl)?;
    let SchemeState::Jet(start) = exp.initial_state(&cfg.ic)? else {
        return Err(Failure::Runtime(
            "jet initialization produced nodal data".into(),
        ));
    };
    let n_ret = return_step_count(&cfl, &grid);
    let f0 = assemble_from_jet(&start, &grid)?;
    let class = classify(&f0, &grid, cfl.q());
    let onset = fixed_point_onset(&start, &grid, &cfl, cfg.periods, cfg.tol)?;

    let mut rows = String::from("period,steps,l1_change,variation\n");
    let mut current = SchemeState::Jet(start);
    let mut f = f0;
    for k in 0..cfg.periods {
        let next = exp.advance(&current, n_ret)?;
        let g = next.interpolant(&grid)?;
        rows.push_str(&format!(
            "{k},{},{},{}\n",
            (k as u64 + 1) * n_ret,
            Num(l1_plf(&f, &g)),
            Num(variation(&g))
        ));
        current = next;
        f = g;
    }
    let onset_text = onset.map_or_else(|| "none".to_string(), |k| k.to_string());
    let mut sink = Sink::new(cfg)?;
    sink.emit("fixedpoint.csv", |w| {
        writeln!(w, "n_ret,defective,min_gap_subcells,kinks,onset_period")?;
        writeln!(
            w,
            "{n_ret},{},{},{},{onset_text}",
            class.defective,
            class.min_gap_subcells,
            class.kink_subcell_indices.len()
        )
    })?;
    sink.emit("periods.csv", |w| w.write_all(rows.as_bytes()))?;
    Ok(())
}
