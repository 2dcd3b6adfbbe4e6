//! Flag and config-file resolution into a validated `RunConfig`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::PathBuf;

use advect_core::study::{IcStrategy, SchemeId};
use advect_core::{make_cfl, make_grid, NamedProfile};
use clap::Args;

/// Usage-level failure: bad flags, bad config file, unsupported request.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<advect_core::Error> for UsageError {
    fn from(e: advect_core::Error) -> Self {
        Self(e.to_string())
    }
}

/// Flags shared by every subcommand. Each may also come from `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// key=value file; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// scheme name (jet, upwind, lax-wendroff, ssp-central2, cn-central4, lw-vanleer, lw-superbee, weno5)
    #[arg(long)]
    pub scheme: Option<String>,
    /// initial profile: bump or sine
    #[arg(long)]
    pub ic: Option<String>,
    /// jet initialization: direct or delta
    #[arg(long)]
    pub strategy: Option<String>,
    /// number of grid cells
    #[arg(long)]
    pub m: Option<String>,
    /// CFL number as p/q
    #[arg(long)]
    pub cfl: Option<String>,
    /// advection speed
    #[arg(long)]
    pub a: Option<String>,
    /// final time, snapped to whole return periods
    #[arg(long)]
    pub tf: Option<String>,
    /// exact step count (overrides --tf)
    #[arg(long)]
    pub steps: Option<String>,
    /// kink offset for the delta initialization
    #[arg(long)]
    pub delta: Option<String>,
    /// output directory; CSVs go to stdout when absent
    #[arg(long)]
    pub out: Option<String>,
    /// seed recorded with the run
    #[arg(long)]
    pub seed: Option<String>,
    /// comma-separated grid sizes (sweep)
    #[arg(long)]
    pub ms: Option<String>,
    /// comma-separated final times (sweep)
    #[arg(long)]
    pub tfs: Option<String>,
    /// comma-separated scheme names (maxtrack)
    #[arg(long)]
    pub schemes: Option<String>,
    /// number of sample times (maxtrack)
    #[arg(long)]
    pub samples: Option<String>,
    /// branch pattern over L/R/F (counterexample)
    #[arg(long)]
    pub pattern: Option<String>,
    /// return periods to examine (fixedpoint)
    #[arg(long)]
    pub periods: Option<String>,
    /// relative tolerance (fixedpoint)
    #[arg(long)]
    pub tol: Option<String>,
}

const KEYS: [&str; 19] = [
    "scheme", "ic", "strategy", "m", "cfl", "a", "tf", "steps", "delta", "out", "seed", "ms",
    "tfs", "schemes", "samples", "pattern", "periods", "tol", "config",
];

impl Flags {
    fn get(&self, key: &str) -> Option<&String> {
        match key {
            "scheme" => self.scheme.as_ref(),
            "ic" => self.ic.as_ref(),
            "strategy" => self.strategy.as_ref(),
            "m" => self.m.as_ref(),
            "cfl" => self.cfl.as_ref(),
            "a" => self.a.as_ref(),
            "tf" => self.tf.as_ref(),
            "steps" => self.steps.as_ref(),
            "delta" => self.delta.as_ref(),
            "out" => self.out.as_ref(),
            "seed" => self.seed.as_ref(),
            "ms" => self.ms.as_ref(),
            "tfs" => self.tfs.as_ref(),
            "schemes" => self.schemes.as_ref(),
            "samples" => self.samples.as_ref(),
            "pattern" => self.pattern.as_ref(),
            "periods" => self.periods.as_ref(),
            "tol" => self.tol.as_ref(),
            _ => None,
        }
    }
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key=value", n + 1)))?;
        let key = k.trim().trim_start_matches("--").to_string();
        if !KEYS.contains(&key.as_str()) || key == "config" {
            return Err(UsageError(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Merged raw values: file first, then flags.
fn merge(flags: &Flags) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    for key in KEYS {
        if let Some(v) = flags.get(key) {
            map.insert(key.to_string(), v.clone());
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Spectrum,
    Sweep,
    Counterexample,
    Maxtrack,
    Fixedpoint,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Run => "run",
            Self::Spectrum => "spectrum",
            Self::Sweep => "sweep",
            Self::Counterexample => "counterexample",
            Self::Maxtrack => "maxtrack",
            Self::Fixedpoint => "fixedpoint",
        }
    }

    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Self::Run => &[("scheme", "jet"), ("m", "96"), ("cfl", "3/4"), ("tf", "10")],
            Self::Spectrum => &[("scheme", "upwind"), ("m", "100"), ("cfl", "4/5")],
            Self::Sweep => &[
                ("scheme", "lax-wendroff"),
                ("ic", "sine"),
                ("cfl", "4/5"),
                ("ms", "64,128,256,512"),
                ("tfs", "1,2,4,8"),
            ],
            Self::Counterexample => &[
                ("m", "6"),
                ("cfl", "3/4"),
                ("pattern", "LLFLLF"),
                ("tf", "5"),
            ],
            Self::Maxtrack => &[
                ("schemes", "jet,weno5,lw-superbee,lw-vanleer"),
                ("strategy", "direct"),
                ("m", "100"),
                ("cfl", "9/10"),
                ("tf", "1000"),
                ("samples", "101"),
            ],
            Self::Fixedpoint => &[
                ("scheme", "jet"),
                ("m", "96"),
                ("cfl", "3/4"),
                ("periods", "10"),
                ("tol", "1e-12"),
            ],
        }
    }
}

const COMMON_DEFAULTS: [(&str, &str); 6] = [
    ("scheme", "jet"),
    ("ic", "bump"),
    ("strategy", "delta"),
    ("m", "96"),
    ("a", "1"),
    ("seed", "0"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scheme: SchemeId,
    pub ic: NamedProfile,
    pub strategy: IcStrategy,
    pub m: usize,
    pub p: u64,
    pub q: u64,
    pub a: f64,
    pub tf: Option<f64>,
    pub steps: Option<u64>,
    pub delta: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub ms: Vec<usize>,
    pub tfs: Vec<f64>,
    pub schemes: Vec<SchemeId>,
    pub samples: usize,
    pub pattern: Option<String>,
    pub periods: usize,
    pub tol: f64,
    raw: BTreeMap<String, String>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.parse()
        .map_err(|_| UsageError(format!("--{key}: cannot parse `{v}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, UsageError> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s.trim()))
        .collect()
}

/// `p/q` with positive integers; decimals are rejected.
pub fn parse_cfl(v: &str) -> Result<(u64, u64), UsageError> {
    let err = || UsageError(format!("--cfl must be a rational literal p/q, got `{v}`"));
    let (p, q) = v.split_once('/').ok_or_else(err)?;
    let p: u64 = p.trim().parse().map_err(|_| err())?;
    let q: u64 = q.trim().parse().map_err(|_| err())?;
    Ok((p, q))
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, UsageError> {
        let given = merge(flags)?;
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in COMMON_DEFAULTS.iter().chain(command.defaults()) {
            raw.insert(k.to_string(), v.to_string());
        }
        raw.extend(given);
        if raw.contains_key("steps") && command != Command::Counterexample {
            raw.remove("tf");
        }
        let get = |k: &str| raw.get(k).map(String::as_str);

        let scheme: SchemeId = get("scheme").unwrap_or("jet").parse()?;
        let ic: NamedProfile = get("ic").unwrap_or("bump").parse()?;
        let mut strategy: IcStrategy = get("strategy").unwrap_or("delta").parse()?;
        let m: usize = parse_num("m", get("m").unwrap_or("96"))?;
        let (p, q) = parse_cfl(get("cfl").unwrap_or("3/4"))?;
        let a: f64 = parse_num("a", get("a").unwrap_or("1"))?;
        let tf = get("tf").map(|v| parse_num::<f64>("tf", v)).transpose()?;
        let steps = get("steps")
            .map(|v| parse_num::<u64>("steps", v))
            .transpose()?;
        let delta = get("delta")
            .map(|v| parse_num::<f64>("delta", v))
            .transpose()?;
        if let (Some(d), IcStrategy::Delta) = (delta, strategy) {
            strategy = IcStrategy::DeltaWith(d);
        }
        let seed = parse_num("seed", get("seed").unwrap_or("0"))?;
        let ms = get("ms")
            .map(|v| parse_list("ms", v))
            .transpose()?
            .unwrap_or_default();
        let tfs = get("tfs")
            .map(|v| parse_list("tfs", v))
            .transpose()?
            .unwrap_or_default();
        let schemes = get("schemes")
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<SchemeId>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?
            .unwrap_or_default();
        let samples = get("samples")
            .map(|v| parse_num("samples", v))
            .transpose()?
            .unwrap_or(0);
        let periods = get("periods")
            .map(|v| parse_num("periods", v))
            .transpose()?
            .unwrap_or(0);
        let tol = get("tol")
            .map(|v| parse_num("tol", v))
            .transpose()?
            .unwrap_or(0.0);
        if let Some(t) = tf {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(UsageError(format!(
                    "--tf must be a non-negative time, got {t}"
                )));
            }
        }

        let cfg = Self {
            command,
            scheme,
            ic,
            strategy,
            m,
            p,
            q,
            a,
            tf,
            steps,
            delta,
            out: get("out").map(PathBuf::from),
            seed,
            ms,
            tfs,
            schemes,
            samples,
            pattern: get("pattern").map(str::to_string),
            periods,
            tol,
            raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), UsageError> {
        let grids: Vec<usize> = if self.command == Command::Sweep {
            self.ms.clone()
        } else {
            vec![self.m]
        };
        for &m in &grids {
            let grid = make_grid(m)?;
            make_cfl(self.p, self.q, self.a, &grid)?;
        }
        match self.command {
            Command::Spectrum if !self.scheme.is_linear() => Err(UsageError(format!(
                "unsupported: spectrum of nonlinear scheme `{}`",
                self.scheme
            ))),
            Command::Fixedpoint if self.scheme != SchemeId::Jet => Err(UsageError(
                "unsupported: fixedpoint only applies to the jet scheme".into(),
            )),
            Command::Sweep if self.ms.is_empty() || self.tfs.is_empty() => {
                Err(UsageError("sweep needs non-empty --ms and --tfs".into()))
            }
            Command::Maxtrack if self.schemes.is_empty() || self.samples < 2 => Err(UsageError(
                "maxtrack needs --schemes and --samples >= 2".into(),
            )),
            Command::Fixedpoint if self.periods == 0 || !(self.tol > 0.0) => Err(UsageError(
                "fixedpoint needs --periods >= 1 and --tol > 0".into(),
            )),
            _ => Ok(()),
        }
    }

    /// `# config: ...` line listing every resolved key in a fixed order.
    pub fn header(&self) -> String {
        let mut s = format!("# config: command={}", self.command.name());
        for (k, v) in &self.raw {
            let _ = write!(s, " {k}={v}");
        }
        s
    }
}
