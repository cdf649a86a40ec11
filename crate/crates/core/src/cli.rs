//! Configuration, commands and output for the `fh-spectra` binary.
//!
//! A run is described by `key = value` lines (with `#` comments), overridden
//! by command-line `--set key=value` pairs. Keys are case-sensitive so that
//! the potential strength `C` and the speed of light `c` can coexist.
//!
//! | key | meaning |
//! |-----|---------|
//! | `kind` | `general`, `wei_hua`, `manning_rosen` or `box` (verify only) |
//! | `A B C D alpha q q_tilde t_e` | general potential |
//! | `alpha q q_tilde t_e` | Wei-Hua |
//! | `alpha V0 beta t_e` | Manning-Rosen |
//! | `box_length` | length of the `V ≡ 0` self-test box |
//! | `mass_energy hbar c` | constants, default 1 |
//! | `sweep range samples` | `t` or `alpha`, `lo,hi`, point count |
//! | `series series_values` | `alpha` or `q`, list of values (potential) |
//! | `nmax states` | highest state (spectrum), state list (wavefunction) |
//! | `unbound` | `null` (default) or `value` for non-bound momenta |
//! | `npoints n_check threshold` | verification grid, state count, pass threshold |
//! | `format out` | `csv` or `json`, output path |
//!
//! Columns: `potential` emits `t,V` or `t,V[alpha=..],...`; `spectrum` emits
//! `alpha,P_0,..,P_nmax` (plus `bound_0,..` with `unbound = value`);
//! `wavefunction` emits `t,psi_0,..`; `verify` emits
//! `n,closed_form,oracle,relative_deviation,richardson_error`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::closed_form::{compute_spectrum, CLOSURE_TOLERANCE};
use crate::error::Error;
use crate::oracle::{
    verify_box, verify_spectrum, VerificationReport, VerifyOptions, DEFAULT_NPOINTS,
    DEFAULT_THRESHOLD,
};
use crate::potential::{
    reduce_manning_rosen, reduce_wei_hua, GeneralMolecularPotential, ManningRosenParams,
    PhysicalConstants, WeiHuaParams,
};
use crate::wavefunction::{normalize, NormalizedWavefunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad configuration; `field` names the offending key.
    Config {
        field: String,
        message: String,
    },
    Model(Error),
    Io(String),
    /// The verification ran but at least one row exceeded the threshold.
    VerificationFailed(VerificationReport),
}

impl CliError {
    fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => EXIT_VALIDATION,
            CliError::VerificationFailed(_) => EXIT_VERIFICATION,
            CliError::Model(e) => match e {
                Error::InvalidParameter { .. } | Error::NonBoundState { .. } | Error::Domain(_) => {
                    EXIT_VALIDATION
                }
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "config field `{field}`: {message}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::VerificationFailed(r) => {
                write!(f, "verification failed (threshold {:e})", r.threshold)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Ordered `key → value` pairs before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            raw.set_pair(line).map_err(|_| {
                CliError::config(
                    format!("line {}", lineno + 1),
                    format!("expected key = value, got `{line}`"),
                )
            })?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> CliResult<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::config(pair, "expected key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::config(pair, "empty key"));
        }
        self.entries.insert(k.to_string(), v.to_string());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::config(key, format!("not a finite number: `{v}`")))
            })
            .transpose()
    }

    fn f64_req(&self, key: &str) -> CliResult<f64> {
        self.f64_opt(key)?
            .ok_or_else(|| CliError::config(key, "required"))
    }

    fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn usize_opt(&self, key: &str) -> CliResult<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    CliError::config(key, format!("not a non-negative integer: `{v}`"))
                })
            })
            .transpose()
    }

    fn f64_list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| {
                                CliError::config(key, format!("bad number `{}`", x.trim()))
                            })
                    })
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    General(GeneralMolecularPotential),
    WeiHua(WeiHuaParams),
    ManningRosen(ManningRosenParams),
    /// `V ≡ 0` on `[0, length]`; only meaningful for `verify`.
    Box {
        length: f64,
    },
}

impl Model {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Model::General(p) => Some(p.alpha),
            Model::WeiHua(w) => Some(w.alpha),
            Model::ManningRosen(mr) => Some(mr.alpha),
            Model::Box { .. } => None,
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Model {
        match *self {
            Model::General(p) => Model::General(GeneralMolecularPotential { alpha, ..p }),
            Model::WeiHua(w) => Model::WeiHua(WeiHuaParams { alpha, ..w }),
            Model::ManningRosen(mr) => Model::ManningRosen(ManningRosenParams { alpha, ..mr }),
            b @ Model::Box { .. } => b,
        }
    }

    pub fn with_q(&self, q: f64) -> CliResult<Model> {
        match *self {
            Model::General(p) => Ok(Model::General(GeneralMolecularPotential { q, ..p })),
            Model::WeiHua(w) => Ok(Model::WeiHua(WeiHuaParams { q, ..w })),
            _ => Err(CliError::config(
                "series",
                "q series needs kind = general or wei_hua",
            )),
        }
    }

    /// The general potential for this model, validated.
    pub fn potential(&self) -> CliResult<GeneralMolecularPotential> {
        match self {
            Model::General(p) => {
                p.validate()?;
                Ok(*p)
            }
            Model::WeiHua(w) => Ok(reduce_wei_hua(w)?),
            Model::ManningRosen(mr) => Ok(reduce_manning_rosen(mr)?),
            Model::Box { .. } => Err(CliError::config("kind", "box is only valid for verify")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Time,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVariable {
    Alpha,
    Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub variable: SeriesVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnboundPolicy {
    Null,
    Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub constants: PhysicalConstants,
    pub sweep: Option<Sweep>,
    pub series: Option<Series>,
    pub states: Vec<usize>,
    pub nmax: usize,
    pub unbound: UnboundPolicy,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub threshold: f64,
    pub npoints: usize,
    pub n_check: usize,
    pub closed_form_offset: f64,
}

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "A",
    "B",
    "C",
    "D",
    "alpha",
    "q",
    "q_tilde",
    "t_e",
    "V0",
    "beta",
    "box_length",
    "mass_energy",
    "hbar",
    "c",
    "sweep",
    "range",
    "samples",
    "series",
    "series_values",
    "states",
    "nmax",
    "unbound",
    "format",
    "out",
    "threshold",
    "npoints",
    "n_check",
    "closed_form_offset",
];

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> CliResult<Self> {
        if let Some(k) = raw
            .entries
            .keys()
            .find(|k| !KNOWN_KEYS.contains(&k.as_str()))
        {
            return Err(CliError::config(k.clone(), "unknown key"));
        }
        let t_e = raw.f64_or("t_e", 0.0)?;
        let kind = raw
            .get("kind")
            .ok_or_else(|| CliError::config("kind", "required"))?;
        let model = match kind {
            "general" => Model::General(GeneralMolecularPotential {
                a: raw.f64_req("A")?,
                b: raw.f64_req("B")?,
                c: raw.f64_req("C")?,
                d: raw.f64_req("D")?,
                alpha: raw.f64_req("alpha")?,
                q: raw.f64_req("q")?,
                q_tilde: raw.f64_req("q_tilde")?,
                t_e,
            }),
            "wei_hua" => Model::WeiHua(WeiHuaParams {
                alpha: raw.f64_req("alpha")?,
                q: raw.f64_req("q")?,
                q_tilde: raw.f64_req("q_tilde")?,
                t_e,
            }),
            "manning_rosen" => Model::ManningRosen(ManningRosenParams {
                alpha: raw.f64_req("alpha")?,
                v0: raw.f64_req("V0")?,
                beta: raw.f64_req("beta")?,
                t_e,
            }),
            "box" => {
                let length = raw.f64_req("box_length")?;
                if length <= 0.0 {
                    return Err(CliError::config("box_length", "must be > 0"));
                }
                Model::Box { length }
            }
            other => return Err(CliError::config("kind", format!("unknown kind `{other}`"))),
        };
        if !matches!(model, Model::Box { .. }) {
            model.potential().map_err(|e| match e {
                CliError::Model(Error::InvalidParameter { field, reason }) => {
                    CliError::config(field, reason)
                }
                other => other,
            })?;
        }

        let constants = PhysicalConstants {
            mass_energy: raw.f64_or("mass_energy", 1.0)?,
            hbar: raw.f64_or("hbar", 1.0)?,
            c: raw.f64_or("c", 1.0)?,
        };
        constants.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => CliError::config(field, reason),
            other => CliError::Model(other),
        })?;

        let sweep = match raw.get("sweep") {
            None => None,
            Some(v) => {
                let variable = match v {
                    "t" => SweepVariable::Time,
                    "alpha" => SweepVariable::Alpha,
                    other => {
                        return Err(CliError::config(
                            "sweep",
                            format!("expected t or alpha, got `{other}`"),
                        ))
                    }
                };
                let range = raw
                    .f64_list("range")?
                    .ok_or_else(|| CliError::config("range", "required with sweep"))?;
                if range.len() != 2 {
                    return Err(CliError::config("range", "expected lo,hi"));
                }
                if range[0] >= range[1] {
                    return Err(CliError::config(
                        "range",
                        "lower bound must be below upper bound",
                    ));
                }
                let samples = raw
                    .usize_opt("samples")?
                    .ok_or_else(|| CliError::config("samples", "required with sweep"))?;
                if samples < 2 {
                    return Err(CliError::config("samples", "must be >= 2"));
                }
                if variable == SweepVariable::Alpha && range[0] <= 0.0 {
                    return Err(CliError::config("range", "alpha must stay > 0"));
                }
                Some(Sweep {
                    variable,
                    lo: range[0],
                    hi: range[1],
                    samples,
                })
            }
        };

        let series = match raw.get("series") {
            None => None,
            Some(v) => {
                let variable = match v {
                    "alpha" => SeriesVariable::Alpha,
                    "q" => SeriesVariable::Q,
                    other => {
                        return Err(CliError::config(
                            "series",
                            format!("expected alpha or q, got `{other}`"),
                        ))
                    }
                };
                let values = raw
                    .f64_list("series_values")?
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| CliError::config("series_values", "required with series"))?;
                for &x in &values {
                    let m = match variable {
                        SeriesVariable::Alpha => model.with_alpha(x),
                        SeriesVariable::Q => model.with_q(x)?,
                    };
                    m.potential().map_err(|e| match e {
                        CliError::Model(err) => {
                            CliError::config("series_values", format!("{x}: {err}"))
                        }
                        other => other,
                    })?;
                }
                Some(Series { variable, values })
            }
        };

        let states = match raw.get("states") {
            None => Vec::new(),
            Some(v) => v
                .split(',')
                .map(|x| {
                    x.trim().parse::<usize>().map_err(|_| {
                        CliError::config("states", format!("bad state `{}`", x.trim()))
                    })
                })
                .collect::<CliResult<_>>()?,
        };

        let unbound = match raw.get("unbound").unwrap_or("null") {
            "null" => UnboundPolicy::Null,
            "value" => UnboundPolicy::Value,
            other => {
                return Err(CliError::config(
                    "unbound",
                    format!("expected null or value, got `{other}`"),
                ))
            }
        };
        let format = match raw.get("format").unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(CliError::config(
                    "format",
                    format!("expected csv or json, got `{other}`"),
                ))
            }
        };
        let threshold = raw.f64_or("threshold", DEFAULT_THRESHOLD)?;
        if threshold <= 0.0 {
            return Err(CliError::config("threshold", "must be > 0"));
        }
        let npoints = raw.usize_opt("npoints")?.unwrap_or(DEFAULT_NPOINTS);
        if npoints < 3 {
            return Err(CliError::config("npoints", "must be >= 3"));
        }
        let n_check = raw.usize_opt("n_check")?.unwrap_or(3);
        if n_check == 0 {
            return Err(CliError::config("n_check", "must be >= 1"));
        }

        Ok(RunConfig {
            model,
            constants,
            sweep,
            series,
            states,
            nmax: raw.usize_opt("nmax")?.unwrap_or(3),
            unbound,
            format,
            out: raw.get("out").filter(|s| !s.is_empty()).map(PathBuf::from),
            threshold,
            npoints,
            n_check,
            closed_form_offset: raw.f64_or("closed_form_offset", 0.0)?,
        })
    }

    fn require_sweep(&self, variable: SweepVariable) -> CliResult<Sweep> {
        let name = match variable {
            SweepVariable::Time => "t",
            SweepVariable::Alpha => "alpha",
        };
        match self.sweep {
            Some(s) if s.variable == variable => Ok(s),
            Some(_) => Err(CliError::config(
                "sweep",
                format!("this command sweeps {name}"),
            )),
            None => Err(CliError::config(
                "sweep",
                format!("required (sweep = {name})"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Null,
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Num)
    }
}

/// Column-ordered output table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Non-fatal diagnostics, written to stderr by the binary.
    pub warnings: Vec<String>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format!("{x:.16e}"),
                    Cell::Int(i) => i.to_string(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Null => String::new(),
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| {
                            let v = match *c {
                                Cell::Num(x) => serde_json::Number::from_f64(x)
                                    .map_or(Value::Null, Value::Number),
                                Cell::Int(i) => Value::from(i),
                                Cell::Bool(b) => Value::Bool(b),
                                Cell::Null => Value::Null,
                            };
                            (k.clone(), v)
                        })
                        .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

/// `t, V(t)` for each parameter set of the series.
pub fn cmd_potential(cfg: &RunConfig) -> CliResult<Table> {
    let sweep = cfg.require_sweep(SweepVariable::Time)?;
    let models: Vec<(String, Model)> = match &cfg.series {
        None => vec![("V".to_string(), cfg.model)],
        Some(series) => series
            .values
            .iter()
            .map(|&x| {
                Ok(match series.variable {
                    SeriesVariable::Alpha => (
                        format!("V[alpha={}]", fmt_param(x)),
                        cfg.model.with_alpha(x),
                    ),
                    SeriesVariable::Q => (format!("V[q={}]", fmt_param(x)), cfg.model.with_q(x)?),
                })
            })
            .collect::<CliResult<_>>()?,
    };
    let potentials = models
        .iter()
        .map(|(_, m)| m.potential())
        .collect::<CliResult<Vec<_>>>()?;
    let mut columns = vec!["t".to_string()];
    columns.extend(models.iter().map(|(name, _)| name.clone()));
    let mut table = Table::new(columns);
    for t in sweep.points() {
        let mut row = vec![Cell::Num(t)];
        for p in &potentials {
            row.push(p.evaluate(t).ok().into());
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// `alpha, P_0, ..., P_nmax` over the alpha sweep.
pub fn cmd_spectrum(cfg: &RunConfig) -> CliResult<Table> {
    let sweep = cfg.require_sweep(SweepVariable::Alpha)?;
    let n = cfg.nmax + 1;
    let mut columns = vec!["alpha".to_string()];
    columns.extend((0..n).map(|i| format!("P_{i}")));
    let with_flags = cfg.unbound == UnboundPolicy::Value;
    if with_flags {
        columns.extend((0..n).map(|i| format!("bound_{i}")));
    }
    let mut table = Table::new(columns);
    for alpha in sweep.points() {
        let p = cfg.model.with_alpha(alpha).potential()?;
        let mut row = vec![Cell::Num(alpha)];
        match compute_spectrum(&p, &cfg.constants, cfg.nmax) {
            Ok(spectrum) => {
                for s in &spectrum.states {
                    if s.closure_residual > CLOSURE_TOLERANCE {
                        table.warnings.push(format!(
                            "alpha={alpha} n={}: closure residual {:e}",
                            s.n, s.closure_residual
                        ));
                    }
                    let keep = s.is_bound() || with_flags;
                    row.push(keep.then_some(s.momentum).into());
                }
                if with_flags {
                    row.extend(spectrum.states.iter().map(|s| Cell::Bool(s.is_bound())));
                }
            }
            Err(Error::RNotReal { radicand }) => {
                table
                    .warnings
                    .push(format!("alpha={alpha}: 1/R not real (radicand {radicand})"));
                let width = if with_flags { 2 * n } else { n };
                row.extend(std::iter::repeat_n(Cell::Null, width));
            }
            Err(e) => return Err(e.into()),
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Normalized `ψ_n(t)` for each requested state.
pub fn cmd_wavefunction(cfg: &RunConfig) -> CliResult<Table> {
    if cfg.states.is_empty() {
        return Err(CliError::config("states", "at least one state is required"));
    }
    let p = cfg.model.potential()?;
    let spectrum = compute_spectrum(
        &p,
        &cfg.constants,
        *cfg.states.iter().max().expect("non-empty"),
    )?;
    let psis: Vec<NormalizedWavefunction> = cfg
        .states
        .iter()
        .map(|&n| {
            let s = &spectrum.states[n];
            if !s.is_bound() {
                return Err(CliError::config(
                    "states",
                    format!("state n = {n} is not bound (gamma1 = {})", s.gamma1),
                ));
            }
            Ok(normalize(s, &p)?)
        })
        .collect::<CliResult<_>>()?;
    let sweep = match cfg.sweep {
        Some(s) if s.variable == SweepVariable::Time => s,
        Some(_) => return Err(CliError::config("sweep", "this command sweeps t")),
        None => Sweep {
            variable: SweepVariable::Time,
            lo: psis[0].t_lo,
            hi: psis
                .iter()
                .map(|w| w.t_hi)
                .fold(f64::NEG_INFINITY, f64::max),
            samples: 2001,
        },
    };
    let mut columns = vec!["t".to_string()];
    columns.extend(cfg.states.iter().map(|n| format!("psi_{n}")));
    let mut table = Table::new(columns);
    for t in sweep.points() {
        let mut row = vec![Cell::Num(t)];
        row.extend(psis.iter().map(|w| Cell::from(w.eval(t).ok())));
        table.rows.push(row);
    }
    Ok(table)
}

/// Closed form against the finite-difference oracle; fails when any row
/// exceeds the threshold.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<(Table, VerificationReport)> {
    let opts = VerifyOptions {
        npoints: cfg.npoints,
        threshold: cfg.threshold,
        convergence_tolerance: cfg.threshold,
        closed_form_offset: cfg.closed_form_offset,
    };
    let report = match cfg.model {
        Model::Box { length } => verify_box(length, &cfg.constants, cfg.n_check, &opts)?,
        _ => verify_spectrum(&cfg.model.potential()?, &cfg.constants, cfg.n_check, &opts)?,
    };
    let mut table = Table::new(
        [
            "n",
            "closed_form",
            "oracle",
            "relative_deviation",
            "richardson_error",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    );
    for r in &report.rows {
        table.rows.push(vec![
            Cell::Int(r.n as i64),
            Cell::Num(r.closed_form),
            r.oracle.into(),
            r.relative_deviation.into(),
            r.richardson_error.into(),
        ]);
        if !r.bound {
            table
                .warnings
                .push(format!("n={}: closed-form state is not bound", r.n));
        }
        if r.oracle.is_none() {
            table.warnings.push(format!(
                "n={}: no oracle eigenvalue below the continuum threshold {}",
                r.n, report.continuum_threshold
            ));
        }
    }
    Ok((table, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Potential,
    Spectrum,
    Wavefunction,
    Verify,
}

/// Output of a successful or verification-failed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rendered: String,
    pub table: Table,
    pub passed: bool,
}

/// Runs a command and renders its table in the configured format.
pub fn run(command: Command, cfg: &RunConfig) -> CliResult<RunOutput> {
    let (table, passed) = match command {
        Command::Potential => (cmd_potential(cfg)?, true),
        Command::Spectrum => (cmd_spectrum(cfg)?, true),
        Command::Wavefunction => (cmd_wavefunction(cfg)?, true),
        Command::Verify => {
            let (table, report) = cmd_verify(cfg)?;
            (table, report.passed())
        }
    };
    Ok(RunOutput {
        rendered: table.render(cfg.format),
        table,
        passed,
    })
}

/// Header and rows of a parsed CSV table.
pub type CsvData = (Vec<String>, Vec<Vec<Option<f64>>>);

/// Parses emitted CSV back into numbers; empty fields become `None`.
pub fn parse_csv(text: &str) -> CliResult<CsvData> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Io("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect::<Vec<_>>();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|f| match f {
                    "" => Ok(None),
                    "true" => Ok(Some(1.0)),
                    "false" => Ok(Some(0.0)),
                    _ => f
                        .parse::<f64>()
                        .map(Some)
                        .map_err(|_| CliError::Io(format!("bad CSV field `{f}`"))),
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((header, rows))
}
