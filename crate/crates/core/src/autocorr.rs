//! Finite-volume autocorrelation of weighted combs, analytic strongly almost
//! periodic parts, and the splitting `γ = γ_S + γ_0` with its diagnostics.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::comb::{InternalWeight, WeightModel, WeightedComb};
use crate::cps::{IntPoint, SchemeBasis};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Interval, RVec};
use crate::measure::{DiscreteMeasure, Shift};
use crate::window::{Membership, WindowUnion};

/// Region containment slack for `[−R, R]^d ⊆ region`.
const REGION_SLACK: f64 = 1e-9;

/// Centered boxes `A_n = [−R_n, R_n]^d` with strictly increasing radii.
#[derive(Clone, Debug, PartialEq)]
pub struct VanHoveSequence {
    d: usize,
    radii: Vec<f64>,
}

impl VanHoveSequence {
    pub fn new(d: usize, radii: Vec<f64>) -> Result<Self> {
        if radii.len() < 3 {
            return Err(Error::InvalidSequence(format!(
                "need at least 3 radii, got {}",
                radii.len()
            )));
        }
        if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidSequence("radii must be positive and finite".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSequence("radii must be strictly increasing".into()));
        }
        Ok(Self { d, radii })
    }

    /// `R_n = r1 · 2^(n−1)` for `n = 1..=count`.
    pub fn geometric(d: usize, r1: f64, count: usize) -> Result<Self> {
        Self::new(d, (0..count).map(|n| r1 * 2f64.powi(n as i32)).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.radii.iter().map(|r| (2.0 * r).powi(self.d as i32)).collect()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AutocorrOptions {
    /// Accumulate in fixed chunks of the first point index on the rayon
    /// pool. Chunk results are merged in chunk order, so the output only
    /// depends on `chunk`, not on the thread count.
    pub parallel: bool,
    /// Chunk length for the parallel mode; 0 picks 256.
    pub chunk: usize,
}

/// `γ_R(z) = (1/Vol(A_R)) Σ_{x, y ∈ A_R, x − y = z} ω(x) conj(ω(y))`.
#[derive(Clone, Debug)]
pub struct Autocorrelation {
    radius: f64,
    volume: f64,
    scheme: SchemeBasis,
    coefficients: BTreeMap<IntPoint, Complex64>,
    comb: String,
}

impl Autocorrelation {
    pub fn compute(comb: &WeightedComb, radius: f64) -> Result<Self> {
        Self::compute_with(comb, radius, AutocorrOptions::default())
    }

    pub fn compute_with(comb: &WeightedComb, radius: f64, opts: AutocorrOptions) -> Result<Self> {
        let patch = comb.patch();
        let scheme = patch.scheme();
        let d = scheme.d();
        let fits = patch
            .region()
            .sides()
            .iter()
            .all(|s| s.lo <= -radius + REGION_SLACK && s.hi >= radius - REGION_SLACK);
        if !(radius > 0.0) || !fits {
            return Err(Error::RegionTooSmall { radius });
        }
        let inside: Vec<(IntPoint, Complex64)> = patch
            .points()
            .iter()
            .zip(patch.embedded())
            .zip(comb.weights())
            .filter(|((_, e), w)| e.physical.norm_inf() <= radius && **w != Complex64::new(0.0, 0.0))
            .map(|((z, _), w)| (*z, *w))
            .collect();
        let volume = (2.0 * radius).powi(d as i32);
        let sums = if opts.parallel {
            let chunk = if opts.chunk == 0 { 256 } else { opts.chunk };
            let partials: Vec<FxHashMap<IntPoint, Complex64>> =
                inside.par_chunks(chunk).map(|rows| accumulate(rows, &inside)).collect();
            let mut merged: FxHashMap<IntPoint, Complex64> = FxHashMap::default();
            for part in partials {
                let mut entries: Vec<_> = part.into_iter().collect();
                entries.sort_by_key(|a| a.0);
                for (k, v) in entries {
                    *merged.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
                }
            }
            merged
        } else {
            accumulate(&inside, &inside)
        };
        let coefficients = sums.into_iter().map(|(k, v)| (k, v / volume)).collect();
        Ok(Self {
            radius,
            volume,
            scheme: scheme.clone(),
            coefficients,
            comb: comb.model().label(),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn scheme(&self) -> &SchemeBasis {
        &self.scheme
    }

    pub fn comb_descriptor(&self) -> &str {
        &self.comb
    }

    pub fn coefficients(&self) -> &BTreeMap<IntPoint, Complex64> {
        &self.coefficients
    }

    pub fn get(&self, key: &IntPoint) -> Complex64 {
        self.coefficients.get(key).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Fraction of `A_R` that overlaps `A_R + x` for the physical part `x`.
    pub fn overlap_factor(&self, key: &IntPoint) -> f64 {
        box_overlap(&self.scheme.physical(key), self.radius)
    }

    /// Coefficients divided by [`Self::overlap_factor`], removing the linear
    /// bias from restricting both factors to `A_R`.
    pub fn edge_corrected(&self) -> BTreeMap<IntPoint, Complex64> {
        self.coefficients
            .iter()
            .filter_map(|(k, v)| {
                let f = self.overlap_factor(k);
                (f > 0.0).then(|| (*k, v / f))
            })
            .collect()
    }

    pub fn to_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_keyed(&self.scheme, &self.coefficients)
    }
}

fn accumulate(rows: &[(IntPoint, Complex64)], cols: &[(IntPoint, Complex64)]) -> FxHashMap<IntPoint, Complex64> {
    let mut map: FxHashMap<IntPoint, Complex64> = FxHashMap::default();
    for (zx, wx) in rows {
        for (zy, wy) in cols {
            *map.entry(*zx - *zy).or_insert(Complex64::new(0.0, 0.0)) += *wx * wy.conj();
        }
    }
    map
}

/// `Π_k max(0, 1 − |x_k| / 2R)`.
pub fn box_overlap(x: &RVec, radius: f64) -> f64 {
    x.as_slice()
        .iter()
        .map(|xk| (1.0 - xk.abs() / (2.0 * radius)).max(0.0))
        .product()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportReport {
    /// Nonzero coefficients whose star image misses the difference window.
    pub violations: usize,
    /// Nonzero coefficients within the boundary tolerance of the window edge.
    pub boundary_keys: usize,
    /// Largest distance from a violating star image to the difference window.
    pub max_excursion: f64,
    pub checked: usize,
}

/// Checks that every nonzero coefficient sits on a key whose star image is
/// in the closure of `W − W`.
pub fn support_check(gamma: &Autocorrelation, window: &WindowUnion) -> SupportReport {
    let dw = window.difference_window();
    let mut report = SupportReport {
        violations: 0,
        boundary_keys: 0,
        max_excursion: 0.0,
        checked: 0,
    };
    for (k, v) in gamma.coefficients() {
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        report.checked += 1;
        let s = gamma.scheme().star(k);
        match dw.classify(&s) {
            Membership::Inside => {}
            Membership::Boundary => report.boundary_keys += 1,
            Membership::Outside => {
                report.violations += 1;
                report.max_excursion = report.max_excursion.max(dw.distance(&s));
            }
        }
    }
    report
}

/// Analytic infinite-volume coefficient families.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleKind {
    FullModelSet,
    InternalFunction(InternalWeight),
    Bernoulli { p: f64 },
}

impl OracleKind {
    /// The oracle that matches how a comb's weights were produced.
    pub fn for_model(model: &WeightModel) -> Result<Self> {
        match model {
            WeightModel::Unit => Ok(OracleKind::FullModelSet),
            WeightModel::Internal(InternalWeight::Indicator) => Ok(OracleKind::FullModelSet),
            WeightModel::Internal(g) => Ok(OracleKind::InternalFunction(g.clone())),
            WeightModel::Bernoulli { p, .. } => Ok(OracleKind::Bernoulli { p: *p }),
            WeightModel::Custom => Err(Error::UnknownKind(model.label())),
        }
    }

    pub fn from_name(name: &str, p: Option<f64>) -> Result<Self> {
        match (name, p) {
            ("full_modelset", _) => Ok(OracleKind::FullModelSet),
            ("bernoulli", Some(p)) => Ok(OracleKind::Bernoulli { p }),
            _ => Err(Error::UnknownKind(name.into())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            OracleKind::FullModelSet => "full_modelset".into(),
            OracleKind::InternalFunction(g) => format!("internal_function({})", g.label()),
            OracleKind::Bernoulli { p } => format!("bernoulli({p})"),
        }
    }
}

/// Infinite-volume strongly almost periodic coefficient at lattice key `z`.
pub fn gamma_s_oracle(kind: &OracleKind, scheme: &SchemeBasis, window: &WindowUnion, z: &IntPoint) -> Complex64 {
    let s = scheme.star(z);
    let dens = scheme.density();
    match kind {
        OracleKind::FullModelSet => Complex64::new(dens * window.covariogram(&s), 0.0),
        OracleKind::Bernoulli { p } => Complex64::new(p * p * dens * window.covariogram(&s), 0.0),
        OracleKind::InternalFunction(g) => dens * weighted_covariogram(g, window, &s),
    }
}

/// `∫ (g·1_W)(u) conj((g·1_W)(u − s)) du`.
pub fn weighted_covariogram(g: &InternalWeight, window: &WindowUnion, s: &RVec) -> Complex64 {
    match g {
        InternalWeight::Indicator => Complex64::new(window.covariogram(s), 0.0),
        InternalWeight::ComplexPhase { theta } => {
            let phase = 2.0 * std::f64::consts::PI * theta.dot(s);
            Complex64::from_polar(window.covariogram(s), phase)
        }
        _ => match separable_axes(g, window.dim()) {
            Some(axes) => {
                let mut total = 0.0;
                for a in window.boxes() {
                    for b in window.boxes() {
                        let mut prod = 1.0;
                        for (k, f) in axes.iter().enumerate() {
                            prod *= axis_integral(f, a.side(k), b.side(k), s[k]);
                            if prod == 0.0 {
                                break;
                            }
                        }
                        total += prod;
                    }
                }
                Complex64::new(total, 0.0)
            }
            None => numeric_covariogram(g, window, s),
        },
    }
}

/// Piecewise-linear function of one variable, constant outside its knots.
struct Pwl {
    knots: Vec<(f64, f64)>,
    outside: f64,
}

impl Pwl {
    fn eval(&self, x: f64) -> f64 {
        let (first, last) = match (self.knots.first(), self.knots.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return self.outside,
        };
        if x < first.0 || x > last.0 {
            return self.outside;
        }
        let i = self.knots.partition_point(|k| k.0 <= x).clamp(1, self.knots.len() - 1);
        let (a, b) = (self.knots[i - 1], self.knots[i]);
        if b.0 == a.0 {
            return b.1;
        }
        a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
    }
}

fn separable_axes(g: &InternalWeight, m: usize) -> Option<Vec<Pwl>> {
    match g {
        InternalWeight::Indicator => Some(
            (0..m)
                .map(|_| Pwl {
                    knots: Vec::new(),
                    outside: 1.0,
                })
                .collect(),
        ),
        InternalWeight::Tent { center, halfwidth } => Some(
            (0..m)
                .map(|k| Pwl {
                    knots: vec![
                        (center[k] - halfwidth[k], 0.0),
                        (center[k], 1.0),
                        (center[k] + halfwidth[k], 0.0),
                    ],
                    outside: 0.0,
                })
                .collect(),
        ),
        InternalWeight::Trapezoid(profile) => {
            let pieces = profile.pieces();
            if pieces.len() != 1 {
                return None;
            }
            let (plateau, support) = &pieces[0];
            Some(
                (0..m)
                    .map(|k| Pwl {
                        knots: vec![
                            (support.side(k).lo, 0.0),
                            (plateau.side(k).lo, 1.0),
                            (plateau.side(k).hi, 1.0),
                            (support.side(k).hi, 0.0),
                        ],
                        outside: 0.0,
                    })
                    .collect(),
            )
        }
        InternalWeight::ComplexPhase { .. } => None,
    }
}

/// `∫_{A ∩ (B + s)} f(x) f(x − s) dx`, exact by Simpson's rule between
/// breakpoints where the integrand is quadratic.
fn axis_integral(f: &Pwl, a: &Interval, b: &Interval, s: f64) -> f64 {
    let lo = a.lo.max(b.lo + s);
    let hi = a.hi.min(b.hi + s);
    if !(hi > lo) {
        return 0.0;
    }
    let mut cuts = vec![lo, hi];
    for &(x, _) in &f.knots {
        for c in [x, x + s] {
            if c > lo && c < hi {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let h = |x: f64| f.eval(x) * f.eval(x - s);
    cuts.windows(2)
        .map(|w| {
            let (p, q) = (w[0], w[1]);
            (q - p) / 6.0 * (h(p) + 4.0 * h(0.5 * (p + q)) + h(q))
        })
        .sum()
}

/// Midpoint rule with step 1e-5 in one dimension and 1e-3 in two.
fn numeric_covariogram(g: &InternalWeight, window: &WindowUnion, s: &RVec) -> Complex64 {
    let m = window.dim();
    let step = if m == 1 { 1e-5 } else { 1e-3 };
    let mut total = Complex64::new(0.0, 0.0);
    for a in window.boxes() {
        for b in window.boxes() {
            let shifted: Vec<Interval> = b
                .sides()
                .iter()
                .enumerate()
                .map(|(k, side)| Interval::closed(side.lo + s[k], side.hi + s[k]))
                .collect();
            let region = a.closure().intersect(&AxisBox::from_sides(&shifted));
            if region.is_empty() || region.volume() == 0.0 {
                continue;
            }
            let counts: Vec<usize> = region
                .sides()
                .iter()
                .map(|side| ((side.width() / step).ceil() as usize).max(1))
                .collect();
            let widths: Vec<f64> = region
                .sides()
                .iter()
                .zip(&counts)
                .map(|(side, &n)| side.width() / n as f64)
                .collect();
            let cell: f64 = widths.iter().product();
            let total_cells: usize = counts.iter().product();
            for idx in 0..total_cells {
                let mut rem = idx;
                let mut u = [0.0; 2];
                for k in 0..m {
                    let i = rem % counts[k];
                    rem /= counts[k];
                    u[k] = region.side(k).lo + (i as f64 + 0.5) * widths[k];
                }
                let uv = RVec::new(&u[..m]);
                let v = g.eval(&uv) * g.eval(&(uv - *s)).conj();
                total += v * cell;
            }
        }
    }
    total
}

/// How the oracle is matched to the finite-volume estimator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeCorrection {
    /// Use the infinite-volume oracle unchanged.
    None,
    /// Multiply the oracle by [`box_overlap`], the expected thinning from
    /// restricting both factors to `A_R`.
    #[default]
    BoxOverlap,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    radius: f64,
    scheme: SchemeBasis,
    gamma: BTreeMap<IntPoint, Complex64>,
    gamma_s: BTreeMap<IntPoint, Complex64>,
    gamma_0: BTreeMap<IntPoint, Complex64>,
    oracle: String,
    correction: EdgeCorrection,
}

impl Decomposition {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn oracle(&self) -> &str {
        &self.oracle
    }

    pub fn correction(&self) -> EdgeCorrection {
        self.correction
    }

    pub fn gamma_s(&self) -> &BTreeMap<IntPoint, Complex64> {
        &self.gamma_s
    }

    pub fn gamma_0(&self) -> &BTreeMap<IntPoint, Complex64> {
        &self.gamma_0
    }

    pub fn gamma(&self) -> &BTreeMap<IntPoint, Complex64> {
        &self.gamma
    }

    pub fn gamma_s_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_keyed(&self.scheme, &self.gamma_s)
    }

    pub fn gamma_0_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_keyed(&self.scheme, &self.gamma_0)
    }

    pub fn gamma_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_keyed(&self.scheme, &self.gamma)
    }

    /// Largest `|γ_0(z)|`.
    pub fn max_null_coefficient(&self) -> f64 {
        self.gamma_0.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|γ_S(z) + γ_0(z) − γ(z)|` over all keys.
    pub fn sum_deviation(&self) -> f64 {
        let zero = Complex64::new(0.0, 0.0);
        self.gamma_s
            .keys()
            .chain(self.gamma.keys())
            .map(|k| {
                let s = self.gamma_s.get(k).copied().unwrap_or(zero);
                let n = self.gamma_0.get(k).copied().unwrap_or(zero);
                let g = self.gamma.get(k).copied().unwrap_or(zero);
                (s + n - g).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Splits `γ` into the oracle part and the remainder on the keys of `γ`
/// together with every key in `[−2R, 2R]^d` whose star image lies in the
/// closed difference window.
pub fn decompose(
    gamma: &Autocorrelation,
    kind: &OracleKind,
    window: &WindowUnion,
    correction: EdgeCorrection,
) -> Result<Decomposition> {
    let scheme = gamma.scheme();
    let r = gamma.radius();
    let dw = window.difference_window();
    let phys = AxisBox::centered(scheme.d(), 2.0 * r);
    let internal = dw.bounding_box().expanded(dw.eta());
    let mut keys: Vec<IntPoint> = gamma.coefficients().keys().copied().collect();
    for z in scheme.enumerate_lattice(&phys, &internal)? {
        if dw.contains(&scheme.star(&z)) && !gamma.coefficients().contains_key(&z) {
            keys.push(z);
        }
    }
    keys.sort();
    let zero = Complex64::new(0.0, 0.0);
    let mut gamma_s = BTreeMap::new();
    let mut gamma_0 = BTreeMap::new();
    for k in keys {
        let factor = match correction {
            EdgeCorrection::None => 1.0,
            EdgeCorrection::BoxOverlap => gamma.overlap_factor(&k),
        };
        let s = if factor > 0.0 {
            gamma_s_oracle(kind, scheme, window, &k) * factor
        } else {
            zero
        };
        let g = gamma.get(&k);
        if s == zero && !gamma.coefficients().contains_key(&k) {
            continue;
        }
        gamma_s.insert(k, s);
        gamma_0.insert(k, g - s);
    }
    let out = Decomposition {
        radius: r,
        scheme: scheme.clone(),
        gamma: gamma.coefficients().clone(),
        gamma_s,
        gamma_0,
        oracle: kind.label(),
        correction,
    };
    let deviation = out.sum_deviation();
    if deviation > 1e-12 {
        return Err(Error::SumMismatch { deviation });
    }
    Ok(out)
}

/// `|μ|(A_n) / Vol(A_n)` along the sequence.
pub fn null_mean(coeffs: &DiscreteMeasure, seq: &VanHoveSequence) -> Vec<f64> {
    seq.radii().iter().map(|&r| coeffs.mean_abs(r)).collect()
}

/// Null mean of `γ_0` where `γ` is recomputed at every scale `R_n` and the
/// mean is taken over `A_n` itself.
pub fn multiscale_null_mean(
    comb: &WeightedComb,
    seq: &VanHoveSequence,
    kind: &OracleKind,
    correction: EdgeCorrection,
) -> Result<Vec<f64>> {
    seq.radii()
        .iter()
        .map(|&r| {
            let gamma = Autocorrelation::compute(comb, r)?;
            let dec = decompose(&gamma, kind, comb.patch().window(), correction)?;
            Ok(dec.gamma_0_measure().mean_abs(r))
        })
        .collect()
}

/// `sup_z |c(z) − c(z − t)|` away from the patch boundary.
pub fn norm_ap_defect(coeffs: &DiscreteMeasure, t: &Shift, patch_radius: f64) -> f64 {
    coeffs.translation_defect(t, patch_radius)
}

/// Nonzero lattice vectors with `|x*| < max_star` and `|x|_∞ ≤ max_physical`,
/// ordered by physical length, at most `count` of them.
pub fn almost_periods(scheme: &SchemeBasis, max_star: f64, max_physical: f64, count: usize) -> Result<Vec<Shift>> {
    let phys = AxisBox::centered(scheme.d(), max_physical);
    let internal = AxisBox::centered(scheme.m(), max_star);
    let mut found: Vec<(f64, IntPoint)> = scheme
        .enumerate_lattice(&phys, &internal)?
        .into_iter()
        .filter(|z| !z.is_zero() && scheme.star(z).norm() < max_star)
        .filter(|z| *z > -*z)
        .map(|z| (scheme.physical(&z).norm(), z))
        .collect();
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(found
        .into_iter()
        .take(count)
        .map(|(_, z)| Shift::lattice(scheme, z))
        .collect())
}

#[derive(Clone, Debug)]
pub struct UniquenessScreen {
    pub periods: Vec<Shift>,
    pub patch_radius: f64,
    /// Defect tolerance relative to `sup |candidate_S|`.
    pub defect_tolerance: f64,
    /// Final null-mean tolerance relative to the final null mean of `μ`.
    pub null_tolerance: f64,
    /// Number of periods that must pass the defect screen.
    pub min_periods: usize,
}

impl UniquenessScreen {
    pub fn new(periods: Vec<Shift>, patch_radius: f64) -> Self {
        Self {
            periods,
            patch_radius,
            defect_tolerance: 0.05,
            null_tolerance: 0.05,
            min_periods: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub defects: Vec<f64>,
    pub defect_tolerance: f64,
    pub null_means: Vec<f64>,
    pub null_tolerance: f64,
    pub passes_defect: bool,
    pub passes_null: bool,
}

impl UniquenessReport {
    pub fn accepted(&self) -> bool {
        self.passes_defect && self.passes_null
    }
}

/// Screens a candidate pair `(μ_S, μ_0)` with `μ = μ_S + μ_0`: `μ_S` must
/// have small translation defect along enough candidate periods and `μ_0`
/// must have a null mean that does not grow and ends below tolerance.
pub fn uniqueness_check(
    mu: &DiscreteMeasure,
    candidate_s: &DiscreteMeasure,
    candidate_0: &DiscreteMeasure,
    seq: &VanHoveSequence,
    screen: &UniquenessScreen,
) -> Result<UniquenessReport> {
    let deviation = mu.sub(candidate_s).sub(candidate_0).sup_abs();
    if deviation > 1e-12 {
        return Err(Error::SumMismatch { deviation });
    }
    let defect_tolerance = (screen.defect_tolerance * candidate_s.sup_abs()).max(1e-12);
    let defects: Vec<f64> = screen
        .periods
        .iter()
        .map(|t| norm_ap_defect(candidate_s, t, screen.patch_radius))
        .collect();
    let passing = defects.iter().filter(|&&d| d < defect_tolerance).count();
    let null_means = null_mean(candidate_0, seq);
    let scale = null_mean(mu, seq).last().copied().unwrap_or(0.0);
    let null_tolerance = (screen.null_tolerance * scale).max(1e-12);
    let (first, last) = (null_means[0], *null_means.last().unwrap());
    Ok(UniquenessReport {
        passes_defect: passing >= screen.min_periods,
        passes_null: last <= first && last < null_tolerance,
        defects,
        defect_tolerance,
        null_means,
        null_tolerance,
    })
}
