//! Experiment configuration in TOML.
//!
//! ```toml
//! name = "fibonacci_full"
//! seed = 42
//! tasks = ["points", "autocorr", "decompose", "diffract", "verify"]
//!
//! [scheme]
//! d = 1
//! m = 1
//! matrix = [[1, "tau"], [1, "1 - tau"]]   # or: catalog = "fibonacci"
//!
//! [window]
//! boxes = [{ sides = [[0, 1]] }]           # optional `open = [[false, false]]`
//!
//! [radii]
//! values = [250, 500, 1000, 2000, 4000]    # or: start = 250, count = 5
//! region = 8000                            # patch half-width, default 2·max
//!
//! [comb]
//! weight_model = "unit"                    # bernoulli (p), tent (center,
//!                                          # halfwidth), phase (theta)
//!
//! [thresholds]
//! eps = [0.1, 0.5]
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use modelset::catalog;
use modelset::geometry::Interval;
use modelset::{AxisBox, InternalWeight, RVec, SchemeBasis, WindowUnion};
use serde::Deserialize;
use thiserror::Error;

use crate::number::parse_number;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Expr(String),
}

impl Number {
    fn value(&self, field: &str) -> Result<f64, ConfigError> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Expr(s) => parse_number(s).map_err(|e| ConfigError::new(field, e)),
        }
    }
}

fn values(xs: &[Number], field: &str) -> Result<Vec<f64>, ConfigError> {
    xs.iter().map(|x| x.value(field)).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    seed: Option<u64>,
    output: Option<String>,
    tasks: Vec<String>,
    scheme: Option<RawScheme>,
    window: Option<RawWindow>,
    radii: Option<RawRadii>,
    comb: Option<RawComb>,
    #[serde(default)]
    thresholds: RawThresholds,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    catalog: Option<String>,
    name: Option<String>,
    d: Option<usize>,
    m: Option<usize>,
    matrix: Option<Vec<Vec<Number>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    boxes: Vec<RawBox>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    sides: Vec<[Number; 2]>,
    open: Option<Vec<[bool; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRadii {
    values: Option<Vec<Number>>,
    start: Option<Number>,
    count: Option<usize>,
    region: Option<Number>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComb {
    weight_model: String,
    p: Option<f64>,
    center: Option<Vec<Number>>,
    halfwidth: Option<Vec<Number>>,
    theta: Option<Vec<Number>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawThresholds {
    eta: f64,
    eps: Vec<f64>,
    noise_factor: f64,
    noise_probes: usize,
    candidate_budget: f64,
    internal_cutoff: f64,
    freq_box: Option<Vec<[Number; 2]>>,
    chi_box: f64,
    null_ratio: f64,
    defect: f64,
    bragg_covering: f64,
    residual_box: Option<[f64; 2]>,
    residual_bins: usize,
    residual_samples: usize,
    residual_decay: f64,
}

impl Default for RawThresholds {
    fn default() -> Self {
        Self {
            eta: 1e-9,
            eps: vec![0.1, 0.5],
            noise_factor: 10.0,
            noise_probes: 200,
            candidate_budget: 1e8,
            internal_cutoff: 30.0,
            freq_box: None,
            chi_box: 100.0,
            null_ratio: 0.5,
            defect: 0.05,
            bragg_covering: 2.0,
            residual_box: None,
            residual_bins: 10,
            residual_samples: 400,
            residual_decay: 1.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Points,
    Autocorr,
    Decompose,
    Diffract,
    Verify,
    Fixtures,
}

impl Task {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "points" => Task::Points,
            "autocorr" => Task::Autocorr,
            "decompose" => Task::Decompose,
            "diffract" => Task::Diffract,
            "verify" => Task::Verify,
            "fixtures" => Task::Fixtures,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Points => "points",
            Task::Autocorr => "autocorr",
            Task::Decompose => "decompose",
            Task::Diffract => "diffract",
            Task::Verify => "verify",
            Task::Fixtures => "fixtures",
        }
    }

    fn needs_comb(self) -> bool {
        self != Task::Fixtures
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CombSpec {
    Unit,
    Bernoulli { p: f64 },
    Internal(InternalWeight),
}

#[derive(Clone, Debug)]
pub struct Thresholds {
    pub eps: Vec<f64>,
    pub noise_factor: f64,
    pub noise_probes: usize,
    pub candidate_budget: f64,
    pub internal_cutoff: f64,
    pub freq_box: Option<AxisBox>,
    pub chi_box: f64,
    pub null_ratio: f64,
    pub defect: f64,
    pub bragg_covering: f64,
    pub residual_box: [f64; 2],
    pub residual_bins: usize,
    pub residual_samples: usize,
    pub residual_decay: f64,
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub name: String,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub tasks: Vec<Task>,
    pub scheme: Option<SchemeBasis>,
    pub window: Option<WindowUnion>,
    pub radii: Option<Vec<f64>>,
    pub region: Option<f64>,
    pub comb: Option<CombSpec>,
    pub thresholds: Thresholds,
}

impl Experiment {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::new("path", format!("{}: {e}", path.display())))?;
        let fallback = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
        Self::parse(&text, fallback)
    }

    pub fn parse(text: &str, fallback_name: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.contains("field"))
                .unwrap_or("toml")
                .to_string();
            ConfigError::new(field, msg)
        })?;
        raw.validate(fallback_name)
    }
}

impl RawConfig {
    fn validate(self, fallback_name: &str) -> Result<Experiment, ConfigError> {
        let mut tasks = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &self.tasks {
            let task = Task::parse(t).ok_or_else(|| ConfigError::new("tasks", format!("unknown task `{t}`")))?;
            if !seen.insert(task) {
                return Err(ConfigError::new("tasks", format!("task `{t}` listed twice")));
            }
            tasks.push(task);
        }
        if tasks.is_empty() {
            return Err(ConfigError::new("tasks", "no tasks requested"));
        }
        let scheme = self.scheme.as_ref().map(scheme_from).transpose()?;
        let t = &self.thresholds;
        if !(t.eta >= 0.0) {
            return Err(ConfigError::new("thresholds.eta", "must be nonnegative"));
        }
        let window = match (&self.window, &self.scheme) {
            (Some(w), _) => Some(window_from(w, t.eta)?),
            (
                None,
                Some(RawScheme {
                    catalog: Some(name), ..
                }),
            ) => catalog::scheme_by_name(name).map(|(_, w)| w.with_eta(t.eta)),
            _ => None,
        };
        if let (Some(s), Some(w)) = (&scheme, &window) {
            if w.dim() != s.m() {
                return Err(ConfigError::new("window", "window dimension differs from scheme m"));
            }
        }
        let radii = self.radii.as_ref().map(radii_from).transpose()?;
        let region = match (&self.radii, &radii) {
            (Some(RawRadii { region: Some(r), .. }), Some(rs)) => {
                let r = r.value("radii.region")?;
                if r < *rs.last().unwrap() {
                    return Err(ConfigError::new("radii.region", "region must cover the largest radius"));
                }
                Some(r)
            }
            (_, Some(rs)) => Some(2.0 * rs.last().unwrap()),
            _ => None,
        };
        let comb = self.comb.as_ref().map(|c| comb_from(c, scheme.as_ref())).transpose()?;

        for task in &tasks {
            if task.needs_comb() {
                for (present, field) in [
                    (scheme.is_some(), "scheme"),
                    (window.is_some(), "window"),
                    (radii.is_some(), "radii"),
                    (comb.is_some(), "comb"),
                ] {
                    if !present {
                        return Err(ConfigError::new(field, format!("required by task `{}`", task.name())));
                    }
                }
            }
        }

        if t.eps.is_empty() || t.eps.iter().any(|e| !(*e > 0.0)) {
            return Err(ConfigError::new("thresholds.eps", "needs positive values"));
        }
        for (v, field) in [
            (t.noise_factor, "thresholds.noise_factor"),
            (t.candidate_budget, "thresholds.candidate_budget"),
            (t.internal_cutoff, "thresholds.internal_cutoff"),
            (t.chi_box, "thresholds.chi_box"),
            (t.null_ratio, "thresholds.null_ratio"),
            (t.defect, "thresholds.defect"),
            (t.bragg_covering, "thresholds.bragg_covering"),
            (t.residual_decay, "thresholds.residual_decay"),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ConfigError::new(field, "must be positive and finite"));
            }
        }
        for (v, field) in [
            (t.noise_probes, "thresholds.noise_probes"),
            (t.residual_bins, "thresholds.residual_bins"),
            (t.residual_samples, "thresholds.residual_samples"),
        ] {
            if v == 0 {
                return Err(ConfigError::new(field, "must be positive"));
            }
        }
        let freq_box = match &t.freq_box {
            Some(sides) => {
                let b = box_from(sides, None, "thresholds.freq_box")?;
                if let Some(s) = &scheme {
                    if b.dim() != s.d() {
                        return Err(ConfigError::new(
                            "thresholds.freq_box",
                            "dimension differs from scheme d",
                        ));
                    }
                }
                Some(b)
            }
            None => None,
        };
        let residual_box = t.residual_box.unwrap_or([0.05, 5.05]);
        if !(residual_box[1] > residual_box[0]) {
            return Err(ConfigError::new("thresholds.residual_box", "needs lo < hi"));
        }

        Ok(Experiment {
            name: self.name.unwrap_or_else(|| fallback_name.to_string()),
            seed: self.seed.unwrap_or(0),
            output: self.output.map(PathBuf::from),
            tasks,
            scheme,
            window,
            radii,
            region,
            comb,
            thresholds: Thresholds {
                eps: t.eps.clone(),
                noise_factor: t.noise_factor,
                noise_probes: t.noise_probes,
                candidate_budget: t.candidate_budget,
                internal_cutoff: t.internal_cutoff,
                freq_box,
                chi_box: t.chi_box,
                null_ratio: t.null_ratio,
                defect: t.defect,
                bragg_covering: t.bragg_covering,
                residual_box,
                residual_bins: t.residual_bins,
                residual_samples: t.residual_samples,
                residual_decay: t.residual_decay,
            },
        })
    }
}

fn scheme_from(raw: &RawScheme) -> Result<SchemeBasis, ConfigError> {
    if let Some(name) = &raw.catalog {
        if raw.matrix.is_some() {
            return Err(ConfigError::new(
                "scheme",
                "give either `catalog` or `matrix`, not both",
            ));
        }
        return catalog::scheme_by_name(name)
            .map(|(s, _)| s)
            .ok_or_else(|| ConfigError::new("scheme.catalog", format!("unknown scheme `{name}`")));
    }
    let d = raw.d.ok_or_else(|| ConfigError::new("scheme.d", "missing"))?;
    let m = raw.m.ok_or_else(|| ConfigError::new("scheme.m", "missing"))?;
    let matrix = raw
        .matrix
        .as_ref()
        .ok_or_else(|| ConfigError::new("scheme.matrix", "missing"))?;
    let rows: Vec<Vec<f64>> = matrix
        .iter()
        .map(|row| values(row, "scheme.matrix"))
        .collect::<Result<_, _>>()?;
    let name = raw.name.clone().unwrap_or_else(|| "custom".into());
    SchemeBasis::new(name, d, m, &rows).map_err(|e| ConfigError::new("scheme.matrix", e.to_string()))
}

fn box_from(sides: &[[Number; 2]], open: Option<&[[bool; 2]]>, field: &str) -> Result<AxisBox, ConfigError> {
    if sides.is_empty() {
        return Err(ConfigError::new(field, "needs at least one side"));
    }
    if let Some(o) = open {
        if o.len() != sides.len() {
            return Err(ConfigError::new(field, "`open` needs one flag pair per side"));
        }
    }
    let mut out = Vec::with_capacity(sides.len());
    for (i, [lo, hi]) in sides.iter().enumerate() {
        let (lo, hi) = (lo.value(field)?, hi.value(field)?);
        if !(hi >= lo) {
            return Err(ConfigError::new(field, format!("side {i} has lo > hi")));
        }
        let [lo_open, hi_open] = open.map(|o| o[i]).unwrap_or([false, false]);
        out.push(Interval {
            lo,
            hi,
            lo_closed: !lo_open,
            hi_closed: !hi_open,
        });
    }
    Ok(AxisBox::from_sides(&out))
}

fn window_from(raw: &RawWindow, eta: f64) -> Result<WindowUnion, ConfigError> {
    let boxes = raw
        .boxes
        .iter()
        .map(|b| box_from(&b.sides, b.open.as_deref(), "window.boxes"))
        .collect::<Result<Vec<_>, _>>()?;
    WindowUnion::new(boxes)
        .map(|w| w.with_eta(eta))
        .map_err(|e| ConfigError::new("window", e.to_string()))
}

fn radii_from(raw: &RawRadii) -> Result<Vec<f64>, ConfigError> {
    let radii = match (&raw.values, &raw.start, raw.count) {
        (Some(v), None, None) => values(v, "radii")?,
        (None, Some(start), Some(count)) => {
            let r1 = start.value("radii")?;
            (0..count).map(|n| r1 * 2f64.powi(n as i32)).collect()
        }
        _ => return Err(ConfigError::new("radii", "give `values`, or `start` with `count`")),
    };
    if radii.len() < 3 {
        return Err(ConfigError::new("radii", "at least three radii are needed"));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(ConfigError::new("radii", "radii must be positive"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError::new("radii", "radii must be strictly increasing"));
    }
    Ok(radii)
}

fn comb_from(raw: &RawComb, scheme: Option<&SchemeBasis>) -> Result<CombSpec, ConfigError> {
    let m = scheme.map(SchemeBasis::m);
    let vector = |v: &Option<Vec<Number>>, field: &str| -> Result<RVec, ConfigError> {
        let xs = values(v.as_deref().ok_or_else(|| ConfigError::new(field, "missing"))?, field)?;
        if m.is_some_and(|m| m != xs.len()) {
            return Err(ConfigError::new(field, "length differs from scheme m"));
        }
        Ok(RVec::new(&xs))
    };
    match raw.weight_model.as_str() {
        "unit" | "full_modelset" => Ok(CombSpec::Unit),
        "indicator" => Ok(CombSpec::Internal(InternalWeight::Indicator)),
        "bernoulli" => {
            let p = raw.p.ok_or_else(|| ConfigError::new("comb.p", "bernoulli needs p"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::new("comb.p", "must lie in [0, 1]"));
            }
            Ok(CombSpec::Bernoulli { p })
        }
        "tent" => {
            let halfwidth = vector(&raw.halfwidth, "comb.halfwidth")?;
            if halfwidth.as_slice().iter().any(|h| !(*h > 0.0)) {
                return Err(ConfigError::new("comb.halfwidth", "must be positive"));
            }
            Ok(CombSpec::Internal(InternalWeight::Tent {
                center: vector(&raw.center, "comb.center")?,
                halfwidth,
            }))
        }
        "phase" => Ok(CombSpec::Internal(InternalWeight::ComplexPhase {
            theta: vector(&raw.theta, "comb.theta")?,
        })),
        other => Err(ConfigError::new(
            "comb.weight_model",
            format!("unknown model `{other}`"),
        )),
    }
}
