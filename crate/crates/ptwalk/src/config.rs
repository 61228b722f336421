//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Angles
//! are given in units of π and may be written as decimals or fractions
//! (`0.25`, `1/4`, `-3/4`). `beta` and `t` take comma-separated lists.
//! Command-line flags are applied after the file and override its keys.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ptwalk_core::scan::SweepSpec;
use ptwalk_core::{canonical_angle, Coin, Measure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Evolve,
    Sweep,
    PhaseDiagram,
    Winding,
    PtScan,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Evolve,
        Command::Sweep,
        Command::PhaseDiagram,
        Command::Winding,
        Command::PtScan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Sweep => "sweep",
            Command::PhaseDiagram => "phase-diagram",
            Command::Winding => "winding",
            Command::PtScan => "pt-scan",
        }
    }
}

impl FromStr for Command {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or(())
    }
}

/// Where a configuration value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { key: String, origin: Origin },
    #[error("{origin}: key `{key}` given twice")]
    Duplicate { key: String, origin: Origin },
    #[error("{origin}: invalid value `{value}` for key `{key}`: {reason}")]
    InvalidValue {
        key: String,
        origin: Origin,
        value: String,
        reason: String,
    },
    #[error("missing key `{key}`{}", context_suffix(.context))]
    Missing {
        key: String,
        context: Option<&'static str>,
    },
}

fn context_suffix(context: &Option<&'static str>) -> String {
    context.map(|c| format!(" ({c})")).unwrap_or_default()
}

impl ConfigError {
    /// Name of the offending key, if the error concerns one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::Duplicate { key, .. }
            | ConfigError::InvalidValue { key, .. }
            | ConfigError::Missing { key, .. } => Some(key),
        }
    }

    pub fn origin(&self) -> Option<Origin> {
        match self {
            ConfigError::Syntax { origin, .. }
            | ConfigError::UnknownKey { origin, .. }
            | ConfigError::Duplicate { origin, .. }
            | ConfigError::InvalidValue { origin, .. } => Some(*origin),
            ConfigError::Missing { .. } => None,
        }
    }
}

/// A validated run. Angles are stored in units of π; single angles are wrapped to
/// `[-1, 1)`, range ends are kept as given.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Single α; for `sweep` it replaces the α range.
    pub alpha: Option<f64>,
    pub alpha_start: f64,
    pub alpha_stop: f64,
    pub alpha_count: usize,
    pub beta: Vec<f64>,
    pub beta_start: f64,
    pub beta_stop: f64,
    pub beta_count: usize,
    pub t: Vec<usize>,
    pub l1: f64,
    pub l2: f64,
    pub num_k: usize,
    pub coin: Coin,
    pub measure: Measure,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

pub const KEYS: [&str; 17] = [
    "command",
    "alpha",
    "alpha_start",
    "alpha_stop",
    "alpha_count",
    "beta",
    "beta_start",
    "beta_stop",
    "beta_count",
    "t",
    "l1",
    "l2",
    "num_k",
    "coin",
    "measure",
    "out",
    "plot",
];

impl RunConfig {
    fn with_command(command: Command) -> Self {
        RunConfig {
            command,
            alpha: None,
            alpha_start: -1.0,
            alpha_stop: 1.0,
            alpha_count: 201,
            beta: vec![0.25],
            beta_start: -1.0,
            beta_stop: 1.0,
            beta_count: 64,
            t: vec![15],
            l1: 1.0,
            l2: 1.0,
            num_k: ptwalk_core::momentum::DEFAULT_NUM_K,
            coin: Coin::Up,
            measure: Measure::LossWeighted,
            out: None,
            plot: false,
        }
    }

    pub fn alpha_radians(&self) -> Option<f64> {
        self.alpha.map(|a| a * PI)
    }

    pub fn beta_radians(&self) -> Vec<f64> {
        self.beta.iter().map(|b| b * PI).collect()
    }

    /// Sweep grid for `sweep`, `evolve` and `pt-scan`.
    pub fn sweep_spec(&self) -> SweepSpec {
        let (alpha_start, alpha_stop, alpha_count) = match self.alpha {
            Some(a) => (a * PI, a * PI, 1),
            None => (
                self.alpha_start * PI,
                self.alpha_stop * PI,
                self.alpha_count,
            ),
        };
        let t_values = match self.command {
            Command::Evolve => (1..=self.t.iter().copied().max().unwrap_or(1)).collect(),
            _ => self.t.clone(),
        };
        SweepSpec {
            alpha_start,
            alpha_stop,
            alpha_count,
            beta_values: self.beta_radians(),
            t_values,
            l1: self.l1,
            l2: self.l2,
            num_k: self.num_k,
            initial_coin: self.coin,
            measure: self.measure,
            ..SweepSpec::default()
        }
    }

    /// Half-open grid `start + (stop - start)·i/count`, in radians.
    fn grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
        let mut g: Vec<f64> = (0..count)
            .map(|i| canonical_angle(PI * (start + (stop - start) * i as f64 / count as f64)))
            .collect();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    pub fn phase_alpha_grid(&self) -> Vec<f64> {
        Self::grid(self.alpha_start, self.alpha_stop, self.alpha_count)
    }

    pub fn phase_beta_grid(&self) -> Vec<f64> {
        Self::grid(self.beta_start, self.beta_stop, self.beta_count)
    }

    /// Config text that parses back to `self`.
    pub fn to_config_string(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        let mut put = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        put("command", self.command.as_str().into());
        if let Some(a) = self.alpha {
            put("alpha", a.to_string());
        }
        put("alpha_start", self.alpha_start.to_string());
        put("alpha_stop", self.alpha_stop.to_string());
        put("alpha_count", self.alpha_count.to_string());
        put("beta", list(&self.beta));
        put("beta_start", self.beta_start.to_string());
        put("beta_stop", self.beta_stop.to_string());
        put("beta_count", self.beta_count.to_string());
        put(
            "t",
            self.t
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        );
        put("l1", self.l1.to_string());
        put("l2", self.l2.to_string());
        put("num_k", self.num_k.to_string());
        put("coin", coin_str(self.coin).into());
        put("measure", self.measure.as_str().into());
        if let Some(out) = &self.out {
            put("out", out.display().to_string());
        }
        put("plot", self.plot.to_string());
        s
    }
}

fn coin_str(c: Coin) -> &'static str {
    match c {
        Coin::Up => "up",
        Coin::Down => "down",
    }
}

fn parse_pi_raw(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("`{p}` is not a number"))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| format!("`{q}` is not a number"))?;
            if q == 0.0 {
                return Err("zero denominator".into());
            }
            p / q
        }
        None => s
            .parse()
            .map_err(|_| "not a number in units of pi".to_string())?,
    };
    if !value.is_finite() {
        return Err("angle must be finite".into());
    }
    Ok(value)
}

/// Parses an angle in units of π (a decimal or `p/q`) and wraps it to `[-1, 1)`.
pub fn parse_pi_units(s: &str) -> Result<f64, String> {
    Ok(wrap_pi_units(parse_pi_raw(s)?))
}

/// Wraps to `[-1, 1)`; values already in range come back bit-identical.
fn wrap_pi_units(v: f64) -> f64 {
    let w = v - 2.0 * ((v + 1.0) / 2.0).floor();
    if w >= 1.0 {
        w - 2.0
    } else {
        w
    }
}

struct Entry<'a> {
    key: &'a str,
    value: &'a str,
    origin: Origin,
}

fn invalid(e: &Entry, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: e.key.into(),
        origin: e.origin,
        value: e.value.into(),
        reason: reason.into(),
    }
}

fn parse_num<T: FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value
        .trim()
        .parse()
        .map_err(|_| invalid(e, "not a valid number"))
}

fn parse_count(e: &Entry, min: usize) -> Result<usize, ConfigError> {
    let n: usize = parse_num(e)?;
    if n < min {
        return Err(invalid(e, format!("must be at least {min}")));
    }
    Ok(n)
}

fn parse_loss(e: &Entry) -> Result<f64, ConfigError> {
    let l: f64 = parse_num(e)?;
    if !(0.0..=1.0).contains(&l) {
        return Err(invalid(e, "loss factor must lie in [0, 1]"));
    }
    Ok(l)
}

fn parse_angle(e: &Entry) -> Result<f64, ConfigError> {
    parse_pi_units(e.value).map_err(|r| invalid(e, r))
}

fn parse_list<T>(
    e: &Entry,
    item: impl Fn(&str) -> Result<T, String>,
) -> Result<Vec<T>, ConfigError> {
    let items = e
        .value
        .split(',')
        .map(|s| item(s.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|r| invalid(e, r))?;
    if items.is_empty() {
        return Err(invalid(e, "empty list"));
    }
    Ok(items)
}

fn parse_steps(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("`{s}` is not a positive step count")),
        Ok(t) => Ok(t),
    }
}

fn parse_bool(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(e, "expected true or false")),
    }
}

fn apply(cfg: &mut RunConfig, e: &Entry) -> Result<(), ConfigError> {
    match e.key {
        "command" => unreachable!("command is resolved first"),
        "alpha" => cfg.alpha = Some(parse_angle(e)?),
        "alpha_start" => cfg.alpha_start = parse_range_end(e)?,
        "alpha_stop" => cfg.alpha_stop = parse_range_end(e)?,
        "alpha_count" => cfg.alpha_count = parse_count(e, 2)?,
        "beta" => cfg.beta = parse_list(e, parse_pi_units)?,
        "beta_start" => cfg.beta_start = parse_range_end(e)?,
        "beta_stop" => cfg.beta_stop = parse_range_end(e)?,
        "beta_count" => cfg.beta_count = parse_count(e, 2)?,
        "t" => cfg.t = parse_list(e, parse_steps)?,
        "l1" => cfg.l1 = parse_loss(e)?,
        "l2" => cfg.l2 = parse_loss(e)?,
        "num_k" => cfg.num_k = parse_count(e, 16)?,
        "coin" => {
            cfg.coin = match e.value.trim() {
                "up" | "↑" => Coin::Up,
                "down" | "↓" => Coin::Down,
                _ => return Err(invalid(e, "expected up or down")),
            }
        }
        "measure" => {
            cfg.measure = match e.value.trim() {
                "loss-weighted" => Measure::LossWeighted,
                "post-selected" => Measure::PostSelected,
                _ => return Err(invalid(e, "expected loss-weighted or post-selected")),
            }
        }
        "out" => {
            let v = e.value.trim();
            if v.is_empty() {
                return Err(invalid(e, "empty path"));
            }
            cfg.out = Some(PathBuf::from(v));
        }
        "plot" => cfg.plot = parse_bool(e)?,
        _ => {
            return Err(ConfigError::UnknownKey {
                key: e.key.into(),
                origin: e.origin,
            });
        }
    }
    Ok(())
}

/// Range ends are not wrapped, so the default stop `1` stays `π`.
fn parse_range_end(e: &Entry) -> Result<f64, ConfigError> {
    parse_pi_raw(e.value).map_err(|r| invalid(e, r))
}

fn split_lines(text: &str) -> Result<Vec<Entry<'_>>, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let origin = Origin::Line(i + 1);
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin,
            text: line.into(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                origin,
                text: line.into(),
            });
        }
        entries.push(Entry {
            key,
            value: value.trim(),
            origin,
        });
    }
    Ok(entries)
}

/// Parses a config document and applies `overrides` (key, value) on top.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut entries = split_lines(text)?;
    for (i, e) in entries.iter().enumerate() {
        if !KEYS.contains(&e.key) {
            return Err(ConfigError::UnknownKey {
                key: e.key.into(),
                origin: e.origin,
            });
        }
        if entries[..i].iter().any(|p| p.key == e.key) {
            return Err(ConfigError::Duplicate {
                key: e.key.into(),
                origin: e.origin,
            });
        }
    }
    for (k, v) in overrides {
        if !KEYS.contains(&k.as_str()) {
            return Err(ConfigError::UnknownKey {
                key: k.clone(),
                origin: Origin::Flag,
            });
        }
        entries.retain(|e| e.key != k);
        entries.push(Entry {
            key: k,
            value: v,
            origin: Origin::Flag,
        });
    }

    let command = match entries.iter().find(|e| e.key == "command") {
        Some(e) => e.value.parse::<Command>().map_err(|_| {
            invalid(
                e,
                "expected evolve, sweep, phase-diagram, winding or pt-scan",
            )
        })?,
        None => {
            return Err(ConfigError::Missing {
                key: "command".into(),
                context: None,
            })
        }
    };
    let mut cfg = RunConfig::with_command(command);
    for e in entries.iter().filter(|e| e.key != "command") {
        apply(&mut cfg, e)?;
    }
    validate(&cfg, &entries)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, entries: &[Entry]) -> Result<(), ConfigError> {
    let find = |k: &str| entries.iter().find(|e| e.key == k);
    let need_alpha = matches!(cfg.command, Command::Evolve | Command::Winding);
    if need_alpha && cfg.alpha.is_none() {
        return Err(ConfigError::Missing {
            key: "alpha".into(),
            context: Some("required by this command"),
        });
    }
    if matches!(cfg.command, Command::Winding | Command::PhaseDiagram)
        && (cfg.l1 != 1.0 || cfg.l2 != 1.0)
    {
        let e = find("l2")
            .filter(|_| cfg.l2 != 1.0)
            .or_else(|| find("l1"))
            .expect("non-default loss was set");
        return Err(invalid(
            e,
            "winding numbers need a lossless walk (l1 = l2 = 1)",
        ));
    }
    for (k, start, stop) in [
        ("alpha_stop", cfg.alpha_start, cfg.alpha_stop),
        ("beta_stop", cfg.beta_start, cfg.beta_stop),
    ] {
        if stop <= start {
            let reason = "range stop must exceed its start";
            return Err(
                match find(k).or_else(|| find(&k.replace("stop", "start"))) {
                    Some(e) => invalid(e, reason),
                    None => unreachable!("default ranges are valid"),
                },
            );
        }
    }
    if cfg.plot && cfg.out.is_none() {
        return Err(ConfigError::Missing {
            key: "out".into(),
            context: Some("a plot needs an output path"),
        });
    }
    Ok(())
}
