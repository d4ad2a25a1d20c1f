//! Line-oriented experiment configuration.
//!
//! ```text
//! # comment
//! [scenario]
//! name = overload-delay
//! regime = quantum
//! horizon = 1000
//!
//! [capacity]
//! kind = channel
//! channel = attenuation
//! l = 10
//! l_a = 50
//!
//! [arrival]
//! kind = poisson
//! rate_per_capacity = 10
//! ```
//!
//! Sections: `scenario`, `arrival`, `capacity` (required) and `bounds`,
//! `monte_carlo`, `grid`, `limits`, `output` (optional). Errors carry the
//! 1-based line they refer to.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bounds::{Measure, Regime, Scenario, ThetaGrid, DEFAULT_HOLDER_GRID};
use crate::capacity::ChannelSpec;
use crate::error::{Error, Result};
use crate::processes::{IncrementDistribution, MapKernel, Process};
use crate::queue::DEFAULT_LADDER;

/// `start:end:points` linear grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        crate::numeric::linspace(self.start, self.end, self.points)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("grid `{s}` is not start:end:points"));
        }
        let start: f64 = parse_f64(parts[0])?;
        let end: f64 = parse_f64(parts[1])?;
        let points: usize = parts[2].parse().map_err(|_| format!("bad point count `{}`", parts[2]))?;
        if points == 0 {
            return Err("grid needs at least one point".into());
        }
        if !(start <= end) {
            return Err(format!("grid start {start} exceeds end {end}"));
        }
        Ok(GridSpec { start, end, points })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.end, self.points)
    }
}

/// Per-slot increment law inside a Markov state.
#[derive(Debug, Clone, PartialEq)]
pub enum StepSpec {
    Constant(f64),
    Poisson(f64),
    Finite(Vec<f64>, Vec<f64>),
}

impl StepSpec {
    fn parse(tok: &str) -> std::result::Result<Self, String> {
        let (kind, rest) = tok
            .split_once(':')
            .ok_or_else(|| format!("increment `{tok}` is not kind:parameters"))?;
        match kind.trim() {
            "const" => Ok(StepSpec::Constant(parse_f64(rest)?)),
            "poisson" => Ok(StepSpec::Poisson(parse_f64(rest)?)),
            "finite" => {
                let mut vals = Vec::new();
                let mut probs = Vec::new();
                for atom in rest.split('|') {
                    let (v, p) = atom
                        .split_once('@')
                        .ok_or_else(|| format!("finite atom `{atom}` is not value@prob"))?;
                    vals.push(parse_f64(v)?);
                    probs.push(parse_f64(p)?);
                }
                Ok(StepSpec::Finite(vals, probs))
            }
            other => Err(format!("unknown increment kind `{other}` (const, poisson, finite)")),
        }
    }

    fn render(&self) -> String {
        match self {
            StepSpec::Constant(c) => format!("const:{c:?}"),
            StepSpec::Poisson(r) => format!("poisson:{r:?}"),
            StepSpec::Finite(v, p) => {
                let atoms: Vec<String> = v.iter().zip(p).map(|(v, p)| format!("{v:?}@{p:?}")).collect();
                format!("finite:{}", atoms.join("|"))
            }
        }
    }

    fn build(&self) -> Result<IncrementDistribution> {
        match self {
            StepSpec::Constant(c) => IncrementDistribution::constant(*c),
            StepSpec::Poisson(r) => IncrementDistribution::poisson(*r),
            StepSpec::Finite(v, p) => IncrementDistribution::finite_support(v.clone(), p.clone()),
        }
    }
}

/// Poisson rate, either absolute or a multiple of the mean service rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSpec {
    Absolute(f64),
    PerCapacity(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    Constant(f64),
    Poisson(RateSpec),
    Finite { values: Vec<f64>, probs: Vec<f64> },
    Channel(ChannelSpec),
    Markov {
        transition: Vec<Vec<f64>>,
        increments: Vec<StepSpec>,
        initial: usize,
    },
}

impl ProcessSpec {
    /// `service_rate` resolves [`RateSpec::PerCapacity`].
    pub fn build(&self, service_rate: Option<f64>) -> Result<Process> {
        Ok(match self {
            ProcessSpec::Constant(c) => Process::constant(*c)?,
            ProcessSpec::Poisson(RateSpec::Absolute(r)) => Process::Iid(IncrementDistribution::poisson(*r)?),
            ProcessSpec::Poisson(RateSpec::PerCapacity(m)) => {
                let q = service_rate.ok_or_else(|| Error::Precondition("rate_per_capacity needs a capacity".into()))?;
                Process::Iid(IncrementDistribution::poisson(m * q)?)
            }
            ProcessSpec::Finite { values, probs } => {
                Process::Iid(IncrementDistribution::finite_support(values.clone(), probs.clone())?)
            }
            ProcessSpec::Channel(ch) => Process::constant(ch.capacity()?)?,
            ProcessSpec::Markov {
                transition,
                increments,
                initial,
            } => {
                let per_state = increments.iter().map(StepSpec::build).collect::<Result<Vec<_>>>()?;
                Process::markov(MapKernel::state_dependent(transition.clone(), per_state)?, *initial)?
            }
        })
    }

    fn uses_capacity_rate(&self) -> bool {
        matches!(self, ProcessSpec::Poisson(RateSpec::PerCapacity(_)))
    }

    fn render(&self, out: &mut String) {
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        match self {
            ProcessSpec::Constant(c) => {
                kv("kind", "constant".into());
                kv("value", format!("{c:?}"));
            }
            ProcessSpec::Poisson(r) => {
                kv("kind", "poisson".into());
                match r {
                    RateSpec::Absolute(r) => kv("rate", format!("{r:?}")),
                    RateSpec::PerCapacity(m) => kv("rate_per_capacity", format!("{m:?}")),
                }
            }
            ProcessSpec::Finite { values, probs } => {
                kv("kind", "finite".into());
                kv("values", join(values));
                kv("probs", join(probs));
            }
            ProcessSpec::Channel(ch) => {
                kv("kind", "channel".into());
                match *ch {
                    ChannelSpec::Attenuation { l, l_a } => {
                        kv("channel", "attenuation".into());
                        kv("l", format!("{l:?}"));
                        kv("l_a", format!("{l_a:?}"));
                    }
                    ChannelSpec::Qubit { alpha, beta } => {
                        kv("channel", "qubit".into());
                        kv("alpha", format!("{alpha:?}"));
                        kv("beta", format!("{beta:?}"));
                    }
                    ChannelSpec::BroadbandLossy { eta, power_ratio } => {
                        kv("channel", "broadband".into());
                        kv("eta", format!("{eta:?}"));
                        kv("power_ratio", format!("{power_ratio:?}"));
                    }
                    ChannelSpec::FreeSpace { omega_c, power_ratio } => {
                        kv("channel", "freespace".into());
                        kv("omega_c", format!("{omega_c:?}"));
                        kv("power_ratio", format!("{power_ratio:?}"));
                    }
                }
            }
            ProcessSpec::Markov {
                transition,
                increments,
                initial,
            } => {
                kv("kind", "markov".into());
                let rows: Vec<String> = transition.iter().map(|r| join(r)).collect();
                kv("transition", rows.join("; "));
                let incs: Vec<String> = increments.iter().map(StepSpec::render).collect();
                kv("increments", incs.join(", "));
                kv("initial", initial.to_string());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsConfig {
    pub measures: Vec<Measure>,
    pub theta: ThetaGrid,
    /// Also emit the generic transient tail bounds.
    pub general: bool,
    pub holder_grid: Vec<f64>,
    /// Violation probability for the reported throughput quantile.
    pub violation: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            measures: Measure::ALL.to_vec(),
            theta: ThetaGrid::default(),
            general: true,
            holder_grid: DEFAULT_HOLDER_GRID.to_vec(),
            violation: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    pub paths: usize,
    pub seed: u64,
    pub z: f64,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            paths: 10_000,
            seed: 1,
            z: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitsConfig {
    pub enabled: bool,
    pub ladder: Vec<usize>,
    pub paths: usize,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            ladder: DEFAULT_LADDER.to_vec(),
            paths: 2_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub description: String,
    pub regime: Regime,
    pub horizon: usize,
    pub arrival: ProcessSpec,
    pub capacity: ProcessSpec,
    pub bounds: BoundsConfig,
    pub monte_carlo: MonteCarloConfig,
    /// Explicit argument grids; missing measures get a grid over the
    /// empirical support widened by 20% on each side.
    pub grids: BTreeMap<&'static str, GridSpec>,
    pub limits: LimitsConfig,
    pub output_dir: Option<String>,
}

impl ExperimentConfig {
    pub fn grid(&self, measure: Measure) -> Option<GridSpec> {
        self.grids.get(measure.as_str()).copied()
    }

    pub fn set_grid(&mut self, measure: Measure, grid: GridSpec) {
        self.grids.insert(measure.as_str(), grid);
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let capacity = self.capacity.build(None).map_err(|e| e.context("capacity"))?;
        let service_rate = match self.regime {
            Regime::Classical => capacity.mean_rate(),
            Regime::Quantum => capacity.clipped_positive()?.mean_rate(),
        };
        let arrival = self
            .arrival
            .build(Some(service_rate))
            .map_err(|e| e.context("arrival"))?;
        Scenario::new(self.name.clone(), arrival, capacity, self.horizon, self.regime)
    }

    /// Text that [`parse_config`] maps back to an equal config.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let kv = |s: &mut String, k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        s.push_str("[scenario]\n");
        kv(&mut s, "name", self.name.clone());
        if !self.description.is_empty() {
            kv(&mut s, "description", self.description.clone());
        }
        kv(&mut s, "regime", self.regime.as_str().into());
        kv(&mut s, "horizon", self.horizon.to_string());
        s.push_str("\n[arrival]\n");
        self.arrival.render(&mut s);
        s.push_str("\n[capacity]\n");
        self.capacity.render(&mut s);
        s.push_str("\n[bounds]\n");
        let m: Vec<&str> = self.bounds.measures.iter().map(Measure::as_str).collect();
        kv(&mut s, "measures", m.join(", "));
        kv(&mut s, "theta_min", format!("{:?}", self.bounds.theta.min));
        kv(&mut s, "theta_max", format!("{:?}", self.bounds.theta.max));
        kv(&mut s, "theta_points", self.bounds.theta.points.to_string());
        kv(&mut s, "general", self.bounds.general.to_string());
        kv(&mut s, "holder_grid", join(&self.bounds.holder_grid));
        kv(&mut s, "violation", format!("{:?}", self.bounds.violation));
        s.push_str("\n[monte_carlo]\n");
        kv(&mut s, "paths", self.monte_carlo.paths.to_string());
        kv(&mut s, "seed", self.monte_carlo.seed.to_string());
        kv(&mut s, "z", format!("{:?}", self.monte_carlo.z));
        if !self.grids.is_empty() {
            s.push_str("\n[grid]\n");
            for (k, g) in &self.grids {
                kv(&mut s, k, g.to_string());
            }
        }
        s.push_str("\n[limits]\n");
        kv(&mut s, "enabled", self.limits.enabled.to_string());
        let l: Vec<String> = self.limits.ladder.iter().map(usize::to_string).collect();
        kv(&mut s, "ladder", l.join(", "));
        kv(&mut s, "paths", self.limits.paths.to_string());
        if let Some(dir) = &self.output_dir {
            s.push_str("\n[output]\n");
            kv(&mut s, "dir", dir.clone());
        }
        s
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{}` is not finite", s.trim()))
    }
}

struct Entry {
    value: String,
    line: usize,
    used: bool,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn get(&mut self, key: &str) -> Option<(&str, usize)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.value.as_str(), e.line)
        })
    }

    fn require(&mut self, name: &str, key: &str) -> Result<(&str, usize)> {
        let line = self.line;
        self.get(key)
            .ok_or_else(|| Error::config(line, format!("missing required key `{key}` in [{name}]")))
    }

    fn parse<T>(&mut self, key: &str, f: impl FnOnce(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => f(v).map(Some).map_err(|m| Error::config(line, format!("`{key}`: {m}"))),
        }
    }

    fn parse_required<T>(
        &mut self,
        name: &str,
        key: &str,
        f: impl FnOnce(&str) -> std::result::Result<T, String>,
    ) -> Result<T> {
        let (v, line) = self.require(name, key)?;
        f(v).map_err(|m| Error::config(line, format!("`{key}`: {m}")))
    }

    fn finish(&self, name: &str) -> Result<()> {
        match self.entries.iter().filter(|(_, e)| !e.used).min_by_key(|(_, e)| e.line) {
            Some((k, e)) => Err(Error::config(e.line, format!("unknown key `{k}` in [{name}]"))),
            None => Ok(()),
        }
    }
}

const SECTIONS: [&str; 8] = [
    "scenario",
    "arrival",
    "capacity",
    "bounds",
    "monte_carlo",
    "grid",
    "limits",
    "output",
];

fn split_sections(text: &str) -> Result<BTreeMap<&'static str, Section>> {
    let mut sections: BTreeMap<&'static str, Section> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::config(line, format!("malformed section header `{content}`")))?
                .trim();
            let known = SECTIONS
                .iter()
                .find(|s| **s == name)
                .ok_or_else(|| Error::config(line, format!("unknown section [{name}]")))?;
            if sections.contains_key(known) {
                return Err(Error::config(line, format!("duplicate section [{name}]")));
            }
            sections.insert(
                known,
                Section {
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(known);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::config(line, "empty key"));
        }
        let sec = current.ok_or_else(|| Error::config(line, format!("key `{key}` outside any section")))?;
        let entries = &mut sections.get_mut(sec).unwrap().entries;
        if entries.contains_key(key) {
            return Err(Error::config(line, format!("duplicate key `{key}` in [{sec}]")));
        }
        entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
                used: false,
            },
        );
    }
    Ok(sections)
}

fn list<T>(s: &str, f: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    let v: Vec<T> = s.split(',').map(|x| f(x.trim())).collect::<std::result::Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(v)
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    s.trim().parse().map_err(|_| format!("`{}` is not a nonnegative integer", s.trim()))
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("`{other}` is not true/false")),
    }
}

fn positive(v: f64) -> std::result::Result<f64, String> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_process(name: &str, sec: &mut Section) -> Result<ProcessSpec> {
    let kind = sec.require(name, "kind")?.0.to_string();
    let kind_line = sec.get("kind").unwrap().1;
    let num = |sec: &mut Section, key: &str| sec.parse_required(name, key, parse_f64);
    let spec = match kind.as_str() {
        "constant" => ProcessSpec::Constant(num(sec, "value")?),
        "poisson" => {
            let rate = sec.parse("rate", |v| parse_f64(v).and_then(positive))?;
            let per = sec.parse("rate_per_capacity", |v| parse_f64(v).and_then(positive))?;
            match (rate, per) {
                (Some(r), None) => ProcessSpec::Poisson(RateSpec::Absolute(r)),
                (None, Some(m)) => ProcessSpec::Poisson(RateSpec::PerCapacity(m)),
                (Some(_), Some(_)) => {
                    let line = sec.get("rate_per_capacity").unwrap().1;
                    return Err(Error::config(line, "give either `rate` or `rate_per_capacity`, not both"));
                }
                (None, None) => {
                    return Err(Error::config(
                        sec.line,
                        format!("missing required key `rate` (or `rate_per_capacity`) in [{name}]"),
                    ))
                }
            }
        }
        "finite" => ProcessSpec::Finite {
            values: sec.parse_required(name, "values", |v| list(v, parse_f64))?,
            probs: sec.parse_required(name, "probs", |v| list(v, parse_f64))?,
        },
        "channel" => {
            let (ch, ch_line) = sec.require(name, "channel")?;
            let ch = ch.to_string();
            let spec = match ch.as_str() {
                "attenuation" => ChannelSpec::Attenuation {
                    l: num(sec, "l")?,
                    l_a: num(sec, "l_a")?,
                },
                "qubit" => ChannelSpec::Qubit {
                    alpha: num(sec, "alpha")?,
                    beta: num(sec, "beta")?,
                },
                "broadband" => ChannelSpec::BroadbandLossy {
                    eta: num(sec, "eta")?,
                    power_ratio: num(sec, "power_ratio")?,
                },
                "freespace" => ChannelSpec::FreeSpace {
                    omega_c: num(sec, "omega_c")?,
                    power_ratio: num(sec, "power_ratio")?,
                },
                other => {
                    return Err(Error::config(
                        ch_line,
                        format!("unknown channel `{other}` (attenuation, qubit, broadband, freespace)"),
                    ))
                }
            };
            spec.capacity()
                .map_err(|e| Error::config(ch_line, format!("channel capacity: {e}")))?;
            ProcessSpec::Channel(spec)
        }
        "markov" => {
            let transition = sec.parse_required(name, "transition", |v| {
                v.split(';')
                    .map(|row| {
                        row.split([',', ' '])
                            .filter(|s| !s.trim().is_empty())
                            .map(parse_f64)
                            .collect::<std::result::Result<Vec<f64>, String>>()
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })?;
            let increments = sec.parse_required(name, "increments", |v| list(v, StepSpec::parse))?;
            let initial = sec.parse("initial", parse_usize)?.unwrap_or(0);
            ProcessSpec::Markov {
                transition,
                increments,
                initial,
            }
        }
        other => {
            return Err(Error::config(
                kind_line,
                format!("unknown kind `{other}` (constant, poisson, finite, channel, markov)"),
            ))
        }
    };
    sec.finish(name)?;
    // Invariants of the law itself (probabilities, stochastic rows, ...).
    let probe = if spec.uses_capacity_rate() { Some(1.0) } else { None };
    spec.build(probe).map_err(|e| Error::config(sec.line, format!("[{name}]: {e}")))?;
    Ok(spec)
}

/// Parses and validates a config; the first problem is reported with its line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut secs = split_sections(text)?;
    let end = text.lines().count().max(1);
    let mut take = |name: &'static str| {
        secs.remove(name)
            .ok_or_else(|| Error::config(end, format!("missing required section [{name}]")))
    };

    let mut sc = take("scenario")?;
    let name = sc.require("scenario", "name")?.0.to_string();
    let description = sc.get("description").map(|(v, _)| v.to_string()).unwrap_or_default();
    let regime = sc.parse_required("scenario", "regime", |v| match v {
        "classical" => Ok(Regime::Classical),
        "quantum" => Ok(Regime::Quantum),
        other => Err(format!("unknown regime `{other}` (classical, quantum)")),
    })?;
    let horizon = sc.parse_required("scenario", "horizon", |v| {
        parse_usize(v).and_then(|t| if t > 0 { Ok(t) } else { Err("must be at least 1".into()) })
    })?;
    sc.finish("scenario")?;

    let mut arr = take("arrival")?;
    let arrival = parse_process("arrival", &mut arr)?;
    let mut cap = take("capacity")?;
    let capacity = parse_process("capacity", &mut cap)?;
    if capacity.uses_capacity_rate() {
        let line = cap.get("rate_per_capacity").map(|(_, l)| l).unwrap_or(cap.line);
        return Err(Error::config(line, "capacity cannot be given relative to itself"));
    }

    let mut bounds = BoundsConfig::default();
    if let Ok(mut b) = take("bounds") {
        if let Some(m) = b.parse("measures", |v| list(v, |s| s.parse::<Measure>()))? {
            bounds.measures = m;
        }
        let min = b.parse("theta_min", |v| parse_f64(v).and_then(positive))?;
        let max = b.parse("theta_max", |v| parse_f64(v).and_then(positive))?;
        let points = b.parse("theta_points", parse_usize)?;
        bounds.theta = ThetaGrid {
            min: min.unwrap_or(bounds.theta.min),
            max: max.unwrap_or(bounds.theta.max),
            points: points.unwrap_or(bounds.theta.points),
        };
        bounds
            .theta
            .validate()
            .map_err(|e| Error::config(b.line, format!("θ grid: {e}")))?;
        if let Some(g) = b.parse("general", parse_bool)? {
            bounds.general = g;
        }
        if let Some(h) = b.parse("holder_grid", |v| {
            list(v, |s| {
                parse_f64(s).and_then(|p| if p > 1.0 { Ok(p) } else { Err(format!("Hölder exponent {p} must exceed 1")) })
            })
        })? {
            bounds.holder_grid = h;
        }
        if let Some(v) = b.parse("violation", |v| {
            parse_f64(v).and_then(|p| if p > 0.0 && p < 1.0 { Ok(p) } else { Err("must lie in (0,1)".into()) })
        })? {
            bounds.violation = v;
        }
        b.finish("bounds")?;
    }

    let mut monte_carlo = MonteCarloConfig::default();
    if let Ok(mut m) = take("monte_carlo") {
        if let Some(p) = m.parse("paths", |v| {
            parse_usize(v).and_then(|n| if n > 0 { Ok(n) } else { Err("must be at least 1".into()) })
        })? {
            monte_carlo.paths = p;
        }
        if let Some(s) = m.parse("seed", |v| v.parse::<u64>().map_err(|_| format!("`{v}` is not a u64")))? {
            monte_carlo.seed = s;
        }
        if let Some(z) = m.parse("z", |v| parse_f64(v).and_then(positive))? {
            monte_carlo.z = z;
        }
        m.finish("monte_carlo")?;
    }

    let mut grids = BTreeMap::new();
    if let Ok(mut g) = take("grid") {
        for measure in Measure::ALL {
            if let Some(spec) = g.parse(measure.as_str(), |v| v.parse::<GridSpec>())? {
                if measure == Measure::Delay && (spec.start < 0.0 || spec.end > horizon as f64) {
                    let line = g.get("delay").unwrap().1;
                    return Err(Error::config(line, format!("delay grid must lie in [0, {horizon}]")));
                }
                grids.insert(measure.as_str(), spec);
            }
        }
        g.finish("grid")?;
    }

    let mut limits = LimitsConfig::default();
    if let Ok(mut l) = take("limits") {
        if let Some(e) = l.parse("enabled", parse_bool)? {
            limits.enabled = e;
        }
        if let Some(ladder) = l.parse("ladder", |v| {
            list(v, |s| parse_usize(s).and_then(|t| if t > 0 { Ok(t) } else { Err("horizons must be positive".into()) }))
        })? {
            limits.ladder = ladder;
        }
        if let Some(p) = l.parse("paths", |v| {
            parse_usize(v).and_then(|n| if n > 0 { Ok(n) } else { Err("must be at least 1".into()) })
        })? {
            limits.paths = p;
        }
        l.finish("limits")?;
    }

    let mut output_dir = None;
    if let Ok(mut o) = take("output") {
        output_dir = o.get("dir").map(|(v, _)| v.to_string());
        o.finish("output")?;
    }

    let cfg = ExperimentConfig {
        name,
        description,
        regime,
        horizon,
        arrival,
        capacity,
        bounds,
        monte_carlo,
        grids,
        limits,
        output_dir,
    };
    cfg.scenario()
        .map_err(|e| Error::config(arr.line.min(cap.line), format!("scenario is invalid: {e}")))?;
    Ok(cfg)
}
