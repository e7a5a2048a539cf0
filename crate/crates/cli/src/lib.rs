//! Batch front end for the `modelset` library: experiment configs, task
//! execution, CSV/SVG artifacts and a claim-by-claim verification report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod export;
pub mod number;
mod verify;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use modelset::autocorr::multiscale_null_mean;
use modelset::diffraction::{
    bragg_candidates, intensity_via_autocorr_with, FourierBohr, Frequency, Spectrum, SpectrumEntry, SpectrumMethod,
    Taper,
};
use modelset::fixtures::{perturbed_lattice_comb, sample_support_differences, two_lattice_comb};
use modelset::{
    catalog, decompose, null_mean, Autocorrelation, AxisBox, EdgeCorrection, OracleKind, PointSetPatch,
    VanHoveSequence, WeightedComb,
};
use thiserror::Error;

pub use config::{CombSpec, ConfigError, Experiment, Task};
pub use verify::{Claim, Verdict};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] modelset::Error),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub svg: bool,
    pub log_scale: bool,
    /// Replaces the task list of the config.
    pub tasks: Option<Vec<Task>>,
}

#[derive(Clone, Debug)]
pub struct TaskLine {
    pub task: Task,
    pub summary: String,
}

impl fmt::Display for TaskLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TASK {} {}", self.task.name(), self.summary)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub tasks: Vec<TaskLine>,
    pub claims: Vec<Claim>,
    pub info: Vec<(String, f64)>,
}

impl RunOutcome {
    pub fn failed(&self) -> bool {
        self.claims.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn report_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.tasks.iter().map(|t| t.to_string()).collect();
        out.extend(self.claims.iter().map(|c| c.to_string()));
        out.extend(
            self.info
                .iter()
                .map(|(k, v)| format!("INFO {k} value={}", verify::fmt_num(*v))),
        );
        out
    }
}

/// Built objects shared by the tasks of one run.
pub(crate) struct Context<'a> {
    pub exp: &'a Experiment,
    pub seed: u64,
    pub comb: WeightedComb,
    pub radii: Vec<f64>,
    gamma: Option<Autocorrelation>,
}

impl<'a> Context<'a> {
    fn new(exp: &'a Experiment, seed: u64) -> Result<Self, RunError> {
        let field = |f: &str| ConfigError::new(f, "missing");
        let scheme = exp.scheme.as_ref().ok_or_else(|| field("scheme"))?;
        let window = exp.window.as_ref().ok_or_else(|| field("window"))?;
        let radii = exp.radii.clone().ok_or_else(|| field("radii"))?;
        let region = exp.region.ok_or_else(|| field("radii"))?;
        let spec = exp.comb.as_ref().ok_or_else(|| field("comb"))?;
        let patch = Arc::new(PointSetPatch::model_set_with_budget(
            scheme,
            window,
            &AxisBox::centered(scheme.d(), region),
            exp.thresholds.candidate_budget,
        )?);
        let comb = match spec {
            CombSpec::Unit => WeightedComb::unit(patch),
            CombSpec::Bernoulli { p } => WeightedComb::bernoulli(patch, *p, seed)?,
            CombSpec::Internal(g) => WeightedComb::from_internal_weight(patch, g.clone()),
        };
        Ok(Self {
            exp,
            seed,
            comb,
            radii,
            gamma: None,
        })
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn sequence(&self) -> VanHoveSequence {
        VanHoveSequence::new(self.comb.patch().scheme().d(), self.radii.clone()).expect("radii validated")
    }

    pub fn oracle(&self) -> Result<OracleKind, RunError> {
        Ok(OracleKind::for_model(self.comb.model())?)
    }

    pub fn freq_box(&self) -> AxisBox {
        let d = self.comb.patch().scheme().d();
        self.exp
            .thresholds
            .freq_box
            .unwrap_or_else(|| AxisBox::centered(d, 10.0))
    }

    pub fn gamma(&mut self) -> Result<&Autocorrelation, RunError> {
        if self.gamma.is_none() {
            self.gamma = Some(Autocorrelation::compute(&self.comb, self.r_max())?);
        }
        Ok(self.gamma.as_ref().unwrap())
    }
}

pub(crate) fn io_err(path: &Path, e: impl fmt::Display) -> RunError {
    RunError::Io(format!("{}: {e}", path.display()))
}

pub fn run(exp: &Experiment, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    let seed = opts.seed.unwrap_or(exp.seed);
    let out_dir = opts
        .out
        .clone()
        .or_else(|| exp.output.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&exp.name));
    std::fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
    let tasks = opts.tasks.clone().unwrap_or_else(|| exp.tasks.clone());
    let needs_ctx = tasks.iter().any(|t| *t != Task::Fixtures);
    let mut ctx = if needs_ctx {
        Some(Context::new(exp, seed)?)
    } else {
        None
    };

    let mut outcome = RunOutcome {
        out_dir: out_dir.clone(),
        tasks: Vec::new(),
        claims: Vec::new(),
        info: Vec::new(),
    };
    for task in tasks {
        let summary = match task {
            Task::Fixtures => run_fixtures(exp, seed, &out_dir)?,
            Task::Points => run_points(ctx.as_mut().unwrap(), &out_dir)?,
            Task::Autocorr => run_autocorr(ctx.as_mut().unwrap(), &out_dir)?,
            Task::Decompose => run_decompose(ctx.as_mut().unwrap(), &out_dir)?,
            Task::Diffract => run_diffract(ctx.as_mut().unwrap(), &out_dir, opts)?,
            Task::Verify => {
                let (claims, info) = verify::run_verify(ctx.as_mut().unwrap())?;
                let summary = format!(
                    "claims={} fail={}",
                    claims.len(),
                    claims.iter().filter(|c| c.verdict == Verdict::Fail).count()
                );
                outcome.claims.extend(claims);
                outcome.info.extend(info);
                summary
            }
        };
        outcome.tasks.push(TaskLine { task, summary });
    }
    let report = out_dir.join("verify_report.txt");
    let mut text = outcome.report_lines().join("\n");
    text.push('\n');
    std::fs::write(&report, text).map_err(|e| io_err(&report, e))?;
    Ok(outcome)
}

fn run_points(ctx: &mut Context, out: &Path) -> Result<String, RunError> {
    export::write_points(&out.join("points.csv"), &ctx.comb)?;
    let p = ctx.comb.patch();
    Ok(format!(
        "points={} boundary_ambiguous={}",
        p.len(),
        p.boundary_ambiguous()
    ))
}

fn run_autocorr(ctx: &mut Context, out: &Path) -> Result<String, RunError> {
    let scheme = ctx.comb.patch().scheme().clone();
    let g = ctx.gamma()?;
    export::write_coefficients(&out.join("autocorr.csv"), &scheme, g.coefficients())?;
    Ok(format!(
        "R={} keys={} gamma0={}",
        g.radius(),
        g.coefficients().len(),
        verify::fmt_num(g.get(&modelset::IntPoint::zero(scheme.n())).re)
    ))
}

fn run_decompose(ctx: &mut Context, out: &Path) -> Result<String, RunError> {
    let kind = ctx.oracle()?;
    let window = ctx.comb.patch().window().clone();
    let scheme = ctx.comb.patch().scheme().clone();
    let dec = decompose(ctx.gamma()?, &kind, &window, EdgeCorrection::BoxOverlap)?;
    export::write_coefficients(&out.join("gamma_s.csv"), &scheme, dec.gamma_s())?;
    export::write_coefficients(&out.join("gamma_0.csv"), &scheme, dec.gamma_0())?;
    let seq = ctx.sequence();
    let means = multiscale_null_mean(&ctx.comb, &seq, &kind, EdgeCorrection::BoxOverlap)?;
    export::write_null_means(&out.join("null_mean.csv"), seq.radii(), &means)?;
    Ok(format!(
        "oracle={} sum_deviation={} null_mean_last={}",
        kind.label(),
        verify::fmt_num(dec.sum_deviation()),
        verify::fmt_num(*means.last().unwrap())
    ))
}

fn run_diffract(ctx: &mut Context, out: &Path, opts: &RunOptions) -> Result<String, RunError> {
    let r = ctx.r_max();
    let fbox = ctx.freq_box();
    let dual = ctx.comb.patch().scheme().dual_basis();
    let d = dual.d();
    let cands: Vec<Frequency> = bragg_candidates(&dual, &fbox, ctx.exp.thresholds.internal_cutoff)?;
    let bohr = FourierBohr::new(&ctx.comb, r)?.spectrum(&cands);
    let g = ctx.gamma()?;
    let entries = cands
        .iter()
        .map(|f| {
            let v = intensity_via_autocorr_with(g, &f.k, r / 2.0, Taper::Fejer)?;
            Ok(SpectrumEntry {
                frequency: *f,
                intensity: v.value,
            })
        })
        .collect::<Result<Vec<_>, modelset::Error>>()?;
    let via = Spectrum {
        entries,
        radius: r,
        method: SpectrumMethod::ViaAutocorr,
    };
    export::write_spectra(&out.join("spectrum.csv"), d, &[&bohr, &via])?;
    if opts.svg {
        export::write_stick_svg(&out.join("spectrum.svg"), &bohr, opts.log_scale)?;
    }
    let strongest = bohr.strongest(1);
    Ok(format!(
        "R={r} candidates={} strongest={}",
        cands.len(),
        strongest.first().map_or("-".into(), |e| verify::fmt_num(e.intensity))
    ))
}

fn run_fixtures(exp: &Experiment, seed: u64, out: &Path) -> Result<String, RunError> {
    let radii = exp
        .radii
        .clone()
        .unwrap_or_else(|| vec![1250.0, 2500.0, 5000.0, 10000.0]);
    let r = *radii.last().unwrap();
    let seq = VanHoveSequence::new(1, radii)?;
    let nu = perturbed_lattice_comb(r);
    let means = null_mean(&nu, &seq);
    export::write_null_means(&out.join("fixture_nu_null_mean.csv"), seq.radii(), &means)?;
    let mu = two_lattice_comb(r);
    let shifts = sample_support_differences(&mu, 50, r / 10.0, seed);
    let rows: Vec<Vec<f64>> = shifts
        .iter()
        .map(|t| vec![t.physical()[0], modelset::autocorr::norm_ap_defect(&mu, t, r)])
        .collect();
    export::write_table(&out.join("fixture_mu_defects.csv"), &["t", "defect"], &rows)?;
    let min_defect = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "nu_null_mean={} mu_min_defect={} shifts={}",
        verify::fmt_num(*means.last().unwrap()),
        verify::fmt_num(min_defect),
        rows.len()
    ))
}

/// One line per bundled example: name, dimensions, default window.
pub fn list_examples() -> Vec<String> {
    catalog::entries()
        .iter()
        .map(|e| {
            let m = e.m.map_or("-".to_string(), |m| m.to_string());
            format!(
                "{:<12} d={} m={:<2} window={:<10} {}",
                e.name, e.d, m, e.window, e.description
            )
        })
        .collect()
}
