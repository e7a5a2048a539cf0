//! Finite patches of model sets and weighted Dirac combs on them.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::cps::{Embedded, IntPoint, SchemeBasis, DEFAULT_CANDIDATE_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Interval, RVec};
use crate::prng::XorShift64Star;
use crate::spatial::{covering_with_margin, NearestIndex};
use crate::window::{Membership, WindowUnion};

/// Grid steps per axis used for covering-radius estimates.
pub const COVERING_GRID_STEPS: usize = 1000;

/// The points of `Λ(W)` whose physical part lies in a bounded region.
#[derive(Clone)]
pub struct PointSetPatch {
    scheme: SchemeBasis,
    window: WindowUnion,
    region: AxisBox,
    points: Vec<IntPoint>,
    embedded: Vec<Embedded>,
    boundary_ambiguous: usize,
}

impl fmt::Debug for PointSetPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSetPatch")
            .field("scheme", &self.scheme.name())
            .field("window", &self.window)
            .field("region", &self.region)
            .field("points", &self.points.len())
            .field("boundary_ambiguous", &self.boundary_ambiguous)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeloneRadii {
    pub packing: f64,
    pub covering: f64,
}

impl PointSetPatch {
    /// Enumerates `Λ(W) ∩ region`. Points within the window's boundary
    /// tolerance are kept and counted in [`Self::boundary_ambiguous`].
    pub fn model_set(scheme: &SchemeBasis, window: &WindowUnion, region: &AxisBox) -> Result<Self> {
        Self::model_set_with_budget(scheme, window, region, DEFAULT_CANDIDATE_BUDGET)
    }

    pub fn model_set_with_budget(
        scheme: &SchemeBasis,
        window: &WindowUnion,
        region: &AxisBox,
        budget: f64,
    ) -> Result<Self> {
        if window.dim() != scheme.m() || region.dim() != scheme.d() {
            return Err(Error::InvalidArgument(
                "window/region dimensions do not match the scheme".into(),
            ));
        }
        if !region.is_bounded() {
            return Err(Error::InvalidArgument("region must be bounded".into()));
        }
        let internal_box = window.bounding_box().expanded(window.eta());
        let candidates = scheme.enumerate_lattice_with_budget(region, &internal_box, budget)?;
        let mut points = Vec::with_capacity(candidates.len());
        let mut embedded = Vec::with_capacity(candidates.len());
        let mut boundary_ambiguous = 0;
        for z in candidates {
            let e = scheme.embed(&z);
            match window.classify(&e.internal) {
                Membership::Inside => {}
                Membership::Boundary => boundary_ambiguous += 1,
                Membership::Outside => continue,
            }
            points.push(z);
            embedded.push(e);
        }
        Ok(Self {
            scheme: scheme.clone(),
            window: window.clone(),
            region: *region,
            points,
            embedded,
            boundary_ambiguous,
        })
    }

    /// Builds a patch from explicit lattice points without checking window
    /// membership. Used for negative controls.
    pub fn from_raw_points(
        scheme: &SchemeBasis,
        window: &WindowUnion,
        region: &AxisBox,
        mut points: Vec<IntPoint>,
    ) -> Self {
        points.sort();
        points.dedup();
        let embedded = points.iter().map(|z| scheme.embed(z)).collect();
        Self {
            scheme: scheme.clone(),
            window: window.clone(),
            region: *region,
            points,
            embedded,
            boundary_ambiguous: 0,
        }
    }

    pub fn scheme(&self) -> &SchemeBasis {
        &self.scheme
    }

    pub fn window(&self) -> &WindowUnion {
        &self.window
    }

    pub fn region(&self) -> &AxisBox {
        &self.region
    }

    pub fn points(&self) -> &[IntPoint] {
        &self.points
    }

    pub fn embedded(&self) -> &[Embedded] {
        &self.embedded
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn boundary_ambiguous(&self) -> usize {
        self.boundary_ambiguous
    }

    pub fn physical_positions(&self) -> Vec<RVec> {
        self.embedded.iter().map(|e| e.physical).collect()
    }

    /// Packing radius (half the minimum pairwise distance) and covering
    /// radius over a grid of the region with a self-consistent margin.
    pub fn delone_radii(&self) -> Result<DeloneRadii> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                found: self.len(),
            });
        }
        let index = NearestIndex::new(&self.physical_positions());
        Ok(DeloneRadii {
            packing: 0.5 * index.min_pair_distance(),
            covering: covering_with_margin(&index, &self.region, COVERING_GRID_STEPS),
        })
    }

    /// Minimum distance between distinct elements of `Δ = Λ − Λ`, built from
    /// the points of the central half of the region. Differences are taken on
    /// integer coordinates before embedding.
    pub fn meyer_defect(&self) -> Result<f64> {
        let central = self.region.scaled_about_center(0.5);
        let inner: Vec<IntPoint> = self
            .points
            .iter()
            .zip(&self.embedded)
            .filter(|(_, e)| central.contains_closed(&e.physical))
            .map(|(z, _)| *z)
            .collect();
        if inner.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                found: inner.len(),
            });
        }
        let mut diffs: FxHashSet<IntPoint> = FxHashSet::default();
        for a in &inner {
            for b in &inner {
                diffs.insert(*a - *b);
            }
        }
        let mut keys: Vec<IntPoint> = diffs.into_iter().collect();
        keys.sort();
        let positions: Vec<RVec> = keys.iter().map(|k| self.scheme.physical(k)).collect();
        Ok(NearestIndex::new(&positions).min_pair_distance())
    }
}

/// How the weights of a comb were produced.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightModel {
    Unit,
    Internal(InternalWeight),
    Bernoulli { p: f64, seed: u64 },
    Custom,
}

impl WeightModel {
    pub fn label(&self) -> String {
        match self {
            WeightModel::Unit => "unit".into(),
            WeightModel::Internal(g) => format!("internal({})", g.label()),
            WeightModel::Bernoulli { p, seed } => format!("bernoulli(p={p}, seed={seed})"),
            WeightModel::Custom => "custom".into(),
        }
    }
}

/// Bounded weight functions on internal space.
#[derive(Clone, Debug, PartialEq)]
pub enum InternalWeight {
    Indicator,
    /// `Π_k max(0, 1 − |u_k − c_k| / h_k)`.
    Tent {
        center: RVec,
        halfwidth: RVec,
    },
    /// `exp(2πi θ·u)`.
    ComplexPhase {
        theta: RVec,
    },
    /// Continuous, 1 on the η-thickened inner window, linear down to 0 at
    /// the boundary of the enclosing box of the outer window.
    Trapezoid(Arc<TrapezoidProfile>),
}

impl InternalWeight {
    pub fn label(&self) -> String {
        match self {
            InternalWeight::Indicator => "indicator".into(),
            InternalWeight::Tent { center, halfwidth } => {
                format!("tent(center={center:?}, halfwidth={halfwidth:?})")
            }
            InternalWeight::ComplexPhase { theta } => format!("complex_phase({theta:?})"),
            InternalWeight::Trapezoid(_) => "trapezoid".into(),
        }
    }

    pub fn eval(&self, u: &RVec) -> Complex64 {
        match self {
            InternalWeight::Indicator => Complex64::new(1.0, 0.0),
            InternalWeight::Tent { center, halfwidth } => {
                let mut v = 1.0;
                for k in 0..u.dim() {
                    v *= (1.0 - (u[k] - center[k]).abs() / halfwidth[k]).max(0.0);
                }
                Complex64::new(v, 0.0)
            }
            InternalWeight::ComplexPhase { theta } => {
                let phase = 2.0 * std::f64::consts::PI * theta.dot(u);
                Complex64::from_polar(1.0, phase)
            }
            InternalWeight::Trapezoid(t) => Complex64::new(t.eval(u), 0.0),
        }
    }

    /// Upper bound on `|g|`.
    pub fn bound(&self) -> f64 {
        1.0
    }
}

/// Per-box trapezoid plateaus for the domination construction.
#[derive(Debug, PartialEq)]
pub struct TrapezoidProfile {
    /// (plateau, support) pairs; the plateau lies strictly inside the support.
    pieces: Vec<(AxisBox, AxisBox)>,
}

impl TrapezoidProfile {
    pub fn pieces(&self) -> &[(AxisBox, AxisBox)] {
        &self.pieces
    }

    pub fn eval(&self, u: &RVec) -> f64 {
        let mut best: f64 = 0.0;
        for (plateau, support) in &self.pieces {
            let mut v = 1.0;
            for k in 0..u.dim() {
                v *= ramp(plateau.side(k), support.side(k), u[k]);
                if v == 0.0 {
                    break;
                }
            }
            best = best.max(v);
        }
        best
    }
}

fn ramp(plateau: &Interval, support: &Interval, x: f64) -> f64 {
    if x >= plateau.lo && x <= plateau.hi {
        1.0
    } else if x < plateau.lo && x > support.lo {
        (x - support.lo) / (plateau.lo - support.lo)
    } else if x > plateau.hi && x < support.hi {
        (support.hi - x) / (support.hi - plateau.hi)
    } else {
        0.0
    }
}

/// A finite weighted Dirac comb `Σ ω(x) δ_x` over a patch.
#[derive(Clone, Debug)]
pub struct WeightedComb {
    patch: Arc<PointSetPatch>,
    weights: Vec<Complex64>,
    model: WeightModel,
    bound: f64,
}

impl WeightedComb {
    pub fn custom(patch: Arc<PointSetPatch>, weights: Vec<Complex64>) -> Result<Self> {
        Self::with_model(patch, weights, WeightModel::Custom)
    }

    fn with_model(patch: Arc<PointSetPatch>, weights: Vec<Complex64>, model: WeightModel) -> Result<Self> {
        if weights.len() != patch.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} points",
                weights.len(),
                patch.len()
            )));
        }
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::InvalidArgument("weights must be finite".into()));
        }
        let bound = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(Self {
            patch,
            weights,
            model,
            bound,
        })
    }

    pub fn unit(patch: Arc<PointSetPatch>) -> Self {
        let weights = vec![Complex64::new(1.0, 0.0); patch.len()];
        Self::with_model(patch, weights, WeightModel::Unit).unwrap()
    }

    /// Weight at each point is `g(x*)`.
    pub fn from_internal_weight(patch: Arc<PointSetPatch>, g: InternalWeight) -> Self {
        let weights = patch.embedded().iter().map(|e| g.eval(&e.internal)).collect();
        Self::with_model(patch, weights, WeightModel::Internal(g)).unwrap()
    }

    /// I.i.d. `{0, 1}` weights with `P(1) = p`, drawn in lexicographic point
    /// order from [`XorShift64Star`].
    pub fn bernoulli(patch: Arc<PointSetPatch>, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
        let mut rng = XorShift64Star::new(seed);
        let weights = (0..patch.len())
            .map(|_| Complex64::new(if rng.bernoulli(p) { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self::with_model(patch, weights, WeightModel::Bernoulli { p, seed })
    }

    pub fn patch(&self) -> &PointSetPatch {
        &self.patch
    }

    pub fn patch_arc(&self) -> &Arc<PointSetPatch> {
        &self.patch
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    /// Stored bound on `|ω(x)|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_real_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0 && w.re >= 0.0)
    }

    fn mapped(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let weights = self.weights.iter().map(|&w| f(w)).collect();
        Self::with_model(self.patch.clone(), weights, WeightModel::Custom).unwrap()
    }

    /// Pointwise complex conjugate.
    pub fn conjugate(&self) -> Self {
        let mut c = self.mapped(|w| w.conj());
        if self.weights.iter().all(|w| w.im == 0.0) {
            c.model = self.model.clone();
        }
        c
    }

    pub fn re_part(&self) -> Self {
        self.mapped(|w| Complex64::new(w.re, 0.0))
    }

    pub fn im_part(&self) -> Self {
        self.mapped(|w| Complex64::new(w.im, 0.0))
    }

    /// Empirical `C_K = max_t Σ_{x ∈ t+K} |ω(x)|` over translates `t` on a
    /// grid of the given stride, with `K = [−h, h]^d` and `t + K` inside the
    /// region.
    pub fn translation_bound(&self, halfwidth: f64, stride: f64) -> Result<f64> {
        if !(halfwidth > 0.0) || !(stride > 0.0) {
            return Err(Error::InvalidArgument("halfwidth and stride must be positive".into()));
        }
        let region = self.patch.region();
        let axes: Vec<Vec<f64>> = region
            .sides()
            .iter()
            .map(|s| {
                let (first, last) = (s.lo + halfwidth, s.hi - halfwidth);
                if first > last + 1e-12 {
                    return Vec::new();
                }
                let steps = ((last - first) / stride + 1e-9).floor() as usize;
                (0..=steps).map(|k| first + stride * k as f64).collect()
            })
            .collect();
        if axes.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("K box does not fit in the region".into()));
        }
        // points sorted by first coordinate with their |ω|
        let mut pts: Vec<(RVec, f64)> = self
            .patch
            .embedded()
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| (e.physical, w.norm()))
            .collect();
        pts.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
        let xs: Vec<f64> = pts.iter().map(|p| p.0[0]).collect();
        let mut prefix = vec![0.0; pts.len() + 1];
        for (i, p) in pts.iter().enumerate() {
            prefix[i + 1] = prefix[i] + p.1;
        }
        let range = |t: f64| {
            let a = xs.partition_point(|&x| x < t - halfwidth);
            let b = xs.partition_point(|&x| x <= t + halfwidth);
            (a, b)
        };
        let mut best: f64 = 0.0;
        if self.patch.scheme().d() == 1 {
            for &t in &axes[0] {
                let (a, b) = range(t);
                best = best.max(prefix[b] - prefix[a]);
            }
        } else {
            for &tx in &axes[0] {
                let (a, b) = range(tx);
                for &ty in &axes[1] {
                    let s: f64 = pts[a..b]
                        .iter()
                        .filter(|p| (p.0[1] - ty).abs() <= halfwidth)
                        .map(|p| p.1)
                        .sum();
                    best = best.max(s);
                }
            }
        }
        Ok(best)
    }
}

/// Builds a comb on `Λ(U) ∩ region` with a continuous internal weight that
/// is 1 on `W` and vanishes outside `U`, and checks that it dominates the
/// unit comb of `patch` pointwise.
pub fn dominating_comb(patch: &PointSetPatch, outer: &WindowUnion) -> Result<WeightedComb> {
    let inner = patch.window();
    let eta = inner.eta().max(outer.eta());
    let mut pieces = Vec::new();
    let mut worst_margin = f64::INFINITY;
    for b in inner.boxes() {
        // best enclosing outer box for this inner box
        let mut found: Option<(f64, AxisBox)> = None;
        for u in outer.boxes() {
            let margin = b
                .sides()
                .iter()
                .zip(u.sides())
                .map(|(s, o)| (s.lo - o.lo).min(o.hi - s.hi))
                .fold(f64::INFINITY, f64::min);
            if found.as_ref().is_none_or(|(m, _)| margin > *m) {
                found = Some((margin, *u));
            }
        }
        let (margin, support) = found.ok_or(Error::Margin {
            margin: f64::NEG_INFINITY,
        })?;
        worst_margin = worst_margin.min(margin);
        if !(margin > 2.0 * eta) {
            return Err(Error::Margin { margin });
        }
        pieces.push((b.expanded(eta), support.closure()));
    }
    if pieces.is_empty() {
        return Err(Error::Margin { margin: worst_margin });
    }
    let profile = Arc::new(TrapezoidProfile { pieces });
    let outer_patch = PointSetPatch::model_set(patch.scheme(), outer, patch.region())?;
    let comb = WeightedComb::from_internal_weight(Arc::new(outer_patch), InternalWeight::Trapezoid(profile));
    let lookup: FxHashMap<IntPoint, Complex64> = comb
        .patch()
        .points()
        .iter()
        .copied()
        .zip(comb.weights().iter().copied())
        .collect();
    for z in patch.points() {
        let w = lookup.get(z).map_or(0.0, |w| w.re);
        if w < 1.0 {
            return Err(Error::Domination { weight: w });
        }
    }
    Ok(comb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn fib_patch(lo: f64, hi: f64) -> Arc<PointSetPatch> {
        let (s, w) = catalog::scheme_by_name("fibonacci").unwrap();
        Arc::new(PointSetPatch::model_set(&s, &w, &AxisBox::closed(&[lo], &[hi])).unwrap())
    }

    fn z_patch(r: f64) -> Arc<PointSetPatch> {
        let s = catalog::identity(1, 1);
        let w = WindowUnion::interval(-0.5, 0.5);
        Arc::new(PointSetPatch::model_set(&s, &w, &AxisBox::closed(&[-r], &[r])).unwrap())
    }

    #[test]
    fn model_set_examples() {
        let p = z_patch(2.5);
        let xs: Vec<f64> = p.physical_positions().iter().map(|v| v[0]).collect();
        assert_eq!(xs, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);

        let p = fib_patch(-0.1, 2.7);
        let xs: Vec<f64> = p.physical_positions().iter().map(|v| v[0]).collect();
        assert_eq!(xs.len(), 3);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[1], 1.0);
        assert!((xs[2] - (1.0 + catalog::tau())).abs() < 1e-15);
        // 0 and 1 sit on the boundary of [0, 1]
        assert_eq!(p.boundary_ambiguous(), 2);

        let (s, _) = catalog::scheme_by_name("fibonacci").unwrap();
        let degenerate = WindowUnion::interval(0.3, 0.3);
        let p = PointSetPatch::model_set(&s, &degenerate, &AxisBox::closed(&[-50.0], &[50.0])).unwrap();
        assert!(p.len() <= 1);
    }

    #[test]
    fn delone_examples() {
        let r = z_patch(2.5).delone_radii().unwrap();
        assert!((r.packing - 0.5).abs() < 1e-12);
        assert!((r.covering - 0.5).abs() < 1e-12);

        let r = fib_patch(-50.0, 50.0).delone_radii().unwrap();
        // brute-force gap scan of the same patch
        let mut xs: Vec<f64> = fib_patch(-50.0, 50.0)
            .physical_positions()
            .iter()
            .map(|v| v[0])
            .collect();
        xs.sort_by(f64::total_cmp);
        let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
        assert!((r.packing - min_gap / 2.0).abs() < 1e-12);
        assert!(r.packing > 0.4);
        assert!(r.covering < 2.7);
        assert!((r.covering - max_gap / 2.0).abs() < 0.1 + 1e-9);

        let s = catalog::identity(1, 1);
        let w = WindowUnion::interval(-0.5, 0.5);
        let two = PointSetPatch::from_raw_points(
            &s,
            &w,
            &AxisBox::closed(&[0.0], &[5.0]),
            vec![IntPoint::new(&[0, 0]), IntPoint::new(&[5, 0])],
        );
        let r = two.delone_radii().unwrap();
        assert!((r.packing - 2.5).abs() < 1e-12);
        assert!((r.covering - 2.5).abs() < 1e-12);

        let one = PointSetPatch::from_raw_points(&s, &w, &two.region, vec![IntPoint::new(&[0, 0])]);
        assert!(matches!(one.delone_radii(), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn meyer_defect_examples() {
        assert!((z_patch(20.0).meyer_defect().unwrap() - 1.0).abs() < 1e-12);
        let a = fib_patch(-100.0, 100.0).meyer_defect().unwrap();
        let b = fib_patch(-200.0, 200.0).meyer_defect().unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn internal_weight_examples() {
        let p = fib_patch(-30.0, 30.0);
        let c = WeightedComb::from_internal_weight(p.clone(), InternalWeight::Indicator);
        assert!(c.weights().iter().all(|w| *w == Complex64::new(1.0, 0.0)));

        let tent = InternalWeight::Tent {
            center: RVec::scalar(0.5),
            halfwidth: RVec::scalar(0.5),
        };
        let v = tent.eval(&RVec::scalar(0.382));
        assert!((v.re - (1.0 - (0.382f64 - 0.5).abs() / 0.5)).abs() < 1e-15);
        assert!((v.re - 0.764).abs() < 1e-12);
        let c = WeightedComb::from_internal_weight(p.clone(), tent.clone());
        for (w, e) in c.weights().iter().zip(p.embedded()) {
            assert_eq!(*w, tent.eval(&e.internal));
        }

        let phase = InternalWeight::ComplexPhase {
            theta: RVec::scalar(1.0),
        };
        let v = phase.eval(&RVec::scalar(0.25));
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn bernoulli_examples() {
        let p = fib_patch(-2000.0, 2000.0);
        let zero = WeightedComb::bernoulli(p.clone(), 0.0, 9).unwrap();
        assert!(zero.weights().iter().all(|w| w.re == 0.0));
        let one = WeightedComb::bernoulli(p.clone(), 1.0, 9).unwrap();
        assert!(one.weights().iter().all(|w| w.re == 1.0));
        let half = WeightedComb::bernoulli(p.clone(), 0.5, 42).unwrap();
        let n = half.len() as f64;
        let mean = half.weights().iter().map(|w| w.re).sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 3.0 / n.sqrt());
        let again = WeightedComb::bernoulli(p, 0.5, 42).unwrap();
        assert_eq!(half.weights(), again.weights());
        assert!(WeightedComb::bernoulli(z_patch(3.0), 1.5, 1).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let p = z_patch(3.0);
        let unit = WeightedComb::unit(p.clone());
        assert_eq!(unit.conjugate().weights(), unit.weights());

        let mut weights = vec![Complex64::new(0.0, 0.0); p.len()];
        weights[2] = Complex64::new(3.0, 4.0);
        let c = WeightedComb::custom(p.clone(), weights).unwrap();
        assert_eq!(c.re_part().weights()[2], Complex64::new(3.0, 0.0));
        assert_eq!(c.im_part().weights()[2], Complex64::new(4.0, 0.0));
    }

    proptest::proptest! {
        #[test]
        fn conjugation_algebra(raw in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 7)) {
            let p = z_patch(3.0);
            let weights: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let c = WeightedComb::custom(p, weights).unwrap();
            let (re, im) = (c.re_part(), c.im_part());
            let i = Complex64::new(0.0, 1.0);
            for k in 0..c.len() {
                proptest::prop_assert_eq!(re.weights()[k].im, 0.0);
                proptest::prop_assert_eq!(im.weights()[k].im, 0.0);
                proptest::prop_assert_eq!(re.weights()[k] + i * im.weights()[k], c.weights()[k]);
                proptest::prop_assert_eq!(c.conjugate().weights()[k].norm(), c.weights()[k].norm());
            }
            let cc = c.conjugate().conjugate();
            proptest::prop_assert_eq!(cc.weights(), c.weights());
        }
    }

    #[test]
    fn translation_bound_examples() {
        let unit = WeightedComb::unit(z_patch(20.0));
        assert_eq!(unit.translation_bound(2.5, 0.1).unwrap(), 6.0);

        let s = catalog::identity(1, 1);
        let w = WindowUnion::interval(-0.5, 0.5);
        let empty = PointSetPatch::from_raw_points(&s, &w, &AxisBox::closed(&[-10.0], &[10.0]), vec![]);
        let c = WeightedComb::unit(Arc::new(empty));
        assert_eq!(c.translation_bound(2.5, 0.1).unwrap(), 0.0);

        let p = fib_patch(-500.0, 500.0);
        let b = WeightedComb::bernoulli(p.clone(), 0.5, 42).unwrap();
        let u = WeightedComb::unit(p);
        assert!(b.translation_bound(10.0, 0.5).unwrap() <= u.translation_bound(10.0, 0.5).unwrap());
    }

    #[test]
    fn dominating_comb_examples() {
        let p = fib_patch(-200.0, 200.0);
        let outer = WindowUnion::single(AxisBox::open(&[-0.5], &[1.5]));
        let nu = dominating_comb(&p, &outer).unwrap();
        let lookup: FxHashMap<IntPoint, Complex64> = nu
            .patch()
            .points()
            .iter()
            .copied()
            .zip(nu.weights().iter().copied())
            .collect();
        for z in p.points() {
            assert_eq!(lookup[z].re, 1.0);
        }
        assert!(matches!(
            nu.model(),
            WeightModel::Internal(InternalWeight::Trapezoid(_))
        ));

        let same = WindowUnion::interval(0.0, 1.0);
        assert!(matches!(dominating_comb(&p, &same), Err(Error::Margin { .. })));

        let outer = WindowUnion::single(AxisBox::open(&[-0.25], &[1.25]));
        let nu = dominating_comb(&p, &outer).unwrap();
        let lookup: FxHashMap<IntPoint, f64> = nu
            .patch()
            .points()
            .iter()
            .copied()
            .zip(nu.weights().iter().map(|w| w.re))
            .collect();
        assert!(p.points().iter().all(|z| lookup[z] >= 1.0));
        // weights taper to zero towards the outer boundary
        assert!(nu.weights().iter().any(|w| w.re < 1.0));
        assert!(nu.weights().iter().all(|w| w.re >= 0.0 && w.re <= 1.0));
    }

    #[test]
    fn model_sets_are_monotone_in_the_window() {
        let (s, _) = catalog::scheme_by_name("fibonacci").unwrap();
        let region = AxisBox::closed(&[-300.0], &[300.0]);
        let small = PointSetPatch::model_set(&s, &WindowUnion::interval(0.1, 0.8), &region).unwrap();
        let big = PointSetPatch::model_set(&s, &WindowUnion::interval(0.0, 1.0), &region).unwrap();
        let big_set: FxHashSet<IntPoint> = big.points().iter().copied().collect();
        assert!(small.points().iter().all(|z| big_set.contains(z)));
        assert!(small.len() < big.len());
    }
}
