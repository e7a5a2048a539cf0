//! Claim-by-claim checks for the `verify` task.

use std::fmt;

use modelset::autocorr::{almost_periods, multiscale_null_mean, norm_ap_defect};
use modelset::diffraction::{
    bragg_candidates, continuous_residual, covering_radius, eps_dual_characters, lipschitz_bound_check,
    lipschitz_constant, noise_floor, off_module_probes, split_bins, FourierBohr,
};
use modelset::spatial::{covering_with_margin, NearestIndex};
use modelset::{
    decompose, support_check, Autocorrelation, AxisBox, EdgeCorrection, IntPoint, OracleKind, PointSetPatch, RVec,
};

use crate::{Context, RunError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N-A",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub id: &'static str,
    pub verdict: Verdict,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
}

impl Claim {
    fn check(id: &'static str, pass: bool, measured: f64, bound: f64) -> Self {
        Self {
            id,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            measured: Some(measured),
            bound: Some(bound),
        }
    }

    fn not_applicable(id: &'static str) -> Self {
        Self {
            id,
            verdict: Verdict::NotApplicable,
            measured: None,
            bound: None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<f64>| v.map_or("-".to_string(), fmt_num);
        write!(
            f,
            "CLAIM {} {} measured={} bound={}",
            self.id,
            self.verdict,
            show(self.measured),
            show(self.bound)
        )
    }
}

pub(crate) fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        format!("{v}")
    }
}

/// Thresholded Bragg frequencies near `fbox` and their covering radius in
/// it (infinite when none survive the threshold).
fn bragg_covering(ctx: &Context, fb: &FourierBohr, fbox: &AxisBox) -> Result<(f64, usize), RunError> {
    let t = &ctx.exp.thresholds;
    let dual = ctx.comb.patch().scheme().dual_basis();
    let d = dual.d() as f64;
    let ks: Vec<RVec> = bragg_candidates(&dual, &fbox.expanded(5.0), t.internal_cutoff)?
        .iter()
        .map(|f| f.k)
        .collect();
    let guard = 10.0 / fb.volume().powf(1.0 / d);
    let probes = off_module_probes(fbox, t.noise_probes, ctx.seed.wrapping_add(1), &ks, guard);
    let threshold = t.noise_factor * noise_floor(fb, &probes);
    let kept: Vec<RVec> = ks
        .iter()
        .zip(fb.intensities(&ks))
        .filter(|(_, i)| *i > threshold)
        .map(|(k, _)| *k)
        .collect();
    if kept.is_empty() {
        return Ok((f64::INFINITY, 0));
    }
    Ok((covering_radius(&kept, fbox)?, kept.len()))
}

pub(crate) type Info = Vec<(String, f64)>;

pub(crate) fn run_verify(ctx: &mut Context) -> Result<(Vec<Claim>, Info), RunError> {
    ctx.gamma()?;
    let exp = ctx.exp;
    let t = &exp.thresholds;
    let r = ctx.r_max();
    let region = exp.region.unwrap_or(2.0 * r);
    let scheme = ctx.comb.patch().scheme().clone();
    let window = ctx.comb.patch().window().clone();
    let d = scheme.d();
    let kind = OracleKind::for_model(ctx.comb.model()).ok();
    let fbox = ctx.freq_box();
    let dual = scheme.dual_basis();
    let mut claims = Vec::new();
    let mut info: Info = Vec::new();
    let g = ctx.gamma.as_ref().unwrap();

    let support = support_check(g, &window);
    claims.push(Claim::check(
        "i",
        support.violations == 0,
        support.violations as f64,
        0.0,
    ));

    match &kind {
        Some(kind) => {
            let dec = decompose(g, kind, &window, EdgeCorrection::None)?;
            let gs = dec.gamma_s_measure();
            let periods = almost_periods(&scheme, 0.01, r / 10.0, 3)?;
            if periods.is_empty() || gs.sup_abs() == 0.0 {
                claims.push(Claim::not_applicable("ii"));
            } else {
                let worst = periods.iter().map(|p| norm_ap_defect(&gs, p, r)).fold(0.0, f64::max) / gs.sup_abs();
                claims.push(Claim::check("ii", worst <= t.defect, worst, t.defect));
            }

            let corrected = decompose(g, kind, &window, EdgeCorrection::BoxOverlap)?;
            let zero = IntPoint::zero(scheme.n());
            info.push((
                "gamma0_at_0".into(),
                corrected.gamma_0().get(&zero).map_or(0.0, |v| v.re),
            ));
            let means = multiscale_null_mean(&ctx.comb, &ctx.sequence(), kind, EdgeCorrection::BoxOverlap)?;
            let ratio = means.last().unwrap() / means[0];
            info.push(("null_mean_last".into(), *means.last().unwrap()));
            claims.push(Claim::check("iii", ratio <= t.null_ratio, ratio, t.null_ratio));
        }
        None => {
            claims.push(Claim::not_applicable("ii"));
            claims.push(Claim::not_applicable("iii"));
        }
    }

    let fb = FourierBohr::new(&ctx.comb, r)?;
    let (cover, kept) = bragg_covering(ctx, &fb, &fbox)?;
    info.push(("bragg_kept".into(), kept as f64));
    let (cover2, _) = bragg_covering(ctx, &fb, &fbox.scaled_about_center(2.0))?;
    info.push(("bragg_covering_doubled_box".into(), cover2));
    claims.push(Claim::check(
        "v",
        kept == 0 || cover <= t.bragg_covering,
        cover,
        t.bragg_covering,
    ));

    let positive: Vec<RVec> = ctx
        .comb
        .patch()
        .embedded()
        .iter()
        .zip(ctx.comb.weights())
        .filter(|(_, w)| w.re > 0.0)
        .map(|(e, _)| e.physical)
        .collect();
    let dense_support = positive.len() >= 2 && {
        let index = NearestIndex::new(&positive);
        covering_with_margin(&index, &AxisBox::centered(d, r), 1000) <= r / 10.0
    };
    if ctx.comb.is_real_nonnegative() && dense_support {
        claims.push(Claim::check(
            "vi",
            kept > 0 && cover <= t.bragg_covering,
            cover,
            t.bragg_covering,
        ));
    } else {
        claims.push(Claim::not_applicable("vi"));
    }

    let mut lo = vec![t.residual_box[0]; d];
    let mut hi = vec![t.residual_box[1]; d];
    let rbox = AxisBox::closed(&lo, &hi);
    let bins = split_bins(&rbox, t.residual_bins);
    let per_axis = if d == 1 {
        t.residual_samples
    } else {
        (t.residual_samples as f64).powf(1.0 / d as f64).ceil() as usize
    };
    lo.iter_mut().for_each(|v| *v -= 1.0);
    hi.iter_mut().for_each(|v| *v += 1.0);
    let peaks: Vec<RVec> = bragg_candidates(&dual, &AxisBox::closed(&lo, &hi), 1.5 * t.internal_cutoff)?
        .iter()
        .map(|f| f.k)
        .collect();
    let guard = Some(10.0 / (r / 2.0 * 2.0));
    let mean =
        |bins: &[modelset::diffraction::ResidualBin]| bins.iter().map(|b| b.level).sum::<f64>() / bins.len() as f64;
    let small = continuous_residual(&ctx.comb, r / 2.0, &bins, per_axis, &peaks, guard)?;
    let large = continuous_residual(&ctx.comb, r, &bins, per_axis, &peaks, guard)?;
    let (m_small, m_large) = (mean(&small), mean(&large));
    info.push(("residual_level".into(), m_large));
    let decay = if m_large > 0.0 {
        m_small / m_large
    } else {
        f64::INFINITY
    };
    info.push(("residual_decay".into(), decay));
    let flatness = if m_large > 0.0 {
        large.iter().map(|b| b.level).fold(f64::INFINITY, f64::min) / m_large
    } else {
        0.0
    };
    if m_small == 0.0 && m_large == 0.0 || decay >= t.residual_decay {
        claims.push(Claim::check("vii", true, decay, t.residual_decay));
    } else {
        claims.push(Claim::check("vii", flatness >= 0.5, flatness, 0.5));
    }

    let r_l = r.min(region / 2.0);
    let gl = if r_l == r {
        g.clone()
    } else {
        Autocorrelation::compute(&ctx.comb, r_l)?
    };
    let radii: Vec<f64> = ctx.radii.iter().copied().filter(|x| *x <= r_l).collect();
    let c_est = lipschitz_constant(&gl, &radii);
    info.push(("c_est".into(), c_est));
    let fbl = FourierBohr::new(&ctx.comb, r_l)?;
    let psis: Vec<RVec> = fbl
        .spectrum(&bragg_candidates(&dual, &fbox, t.internal_cutoff)?)
        .strongest(10)
        .iter()
        .map(|e| e.frequency.k)
        .collect();
    let dw = window.difference_window();
    let dpatch = PointSetPatch::model_set_with_budget(&scheme, &dw, &AxisBox::centered(d, r_l), t.candidate_budget)?;
    let mut violations = 0;
    let mut max_ratio: f64 = 0.0;
    for &eps in &t.eps {
        let set = eps_dual_characters(&dual, &dw, eps, &AxisBox::centered(d, t.chi_box), &dpatch)?;
        let mut chis = set.positions();
        chis.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        chis.truncate(10);
        let rep = lipschitz_bound_check(&ctx.comb, &chis, eps, &psis, c_est, r_l)?;
        violations += rep.violations;
        max_ratio = max_ratio.max(rep.max_ratio);
    }
    let viii = violations == 0;
    claims.push(Claim::check("viii", viii, max_ratio, 1.0));

    let eps_max = t.eps.iter().copied().fold(0.0, f64::max);
    let set = eps_dual_characters(&dual, &dw, eps_max, &fbox.expanded(10.0), &dpatch)?;
    let half = fbox.sides().iter().map(|s| s.width()).fold(f64::INFINITY, f64::min) / 2.0;
    let gamma_cover = covering_radius(&set.positions(), &fbox)?;
    claims.push(Claim::check("ix", viii && gamma_cover <= half, gamma_cover, half));

    Ok((claims, info))
}
