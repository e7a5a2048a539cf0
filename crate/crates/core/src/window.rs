//! Windows in internal space: finite unions of axis-aligned boxes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Interval, RVec};

pub const DEFAULT_BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Result of testing a point against a window with boundary tolerance η.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// In the window and farther than η from its boundary.
    Inside,
    /// Within η of the boundary: counted as a member and flagged.
    Boundary,
    Outside,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self != Membership::Outside
    }
}

/// A finite union of pairwise disjoint boxes in `ℝ^m`.
#[derive(Clone, PartialEq)]
pub struct WindowUnion {
    dim: usize,
    boxes: Vec<AxisBox>,
    eta: f64,
}

impl fmt::Debug for WindowUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.boxes {
            if !first {
                write!(f, " ∪ ")?;
            }
            first = false;
            write!(f, "{b:?}")?;
        }
        if self.boxes.is_empty() {
            write!(f, "∅")?;
        }
        Ok(())
    }
}

impl WindowUnion {
    /// Normalizes `boxes` into a disjoint union. Empty boxes are dropped;
    /// overlapping boxes are split, and in one dimension touching intervals
    /// are merged.
    pub fn new(boxes: Vec<AxisBox>) -> Result<Self> {
        let dim = boxes
            .first()
            .map(AxisBox::dim)
            .ok_or_else(|| Error::InvalidWindow("window needs at least one box".into()))?;
        if boxes.iter().any(|b| b.dim() != dim) {
            return Err(Error::InvalidWindow("boxes of mixed dimension".into()));
        }
        if boxes.iter().any(|b| !b.is_bounded()) {
            return Err(Error::InvalidWindow("window boxes must be bounded".into()));
        }
        let mut disjoint: Vec<AxisBox> = Vec::new();
        for b in boxes.into_iter().filter(|b| !b.is_empty()) {
            let mut pieces = vec![b];
            for existing in &disjoint {
                pieces = pieces.iter().flat_map(|p| p.minus(existing)).collect();
            }
            disjoint.extend(pieces.into_iter().filter(|p| !p.is_empty()));
        }
        disjoint.sort_by(|a, b| {
            let (la, lb) = (a.lo(), b.lo());
            la.as_slice().partial_cmp(lb.as_slice()).unwrap()
        });
        if dim == 1 {
            let mut merged: Vec<AxisBox> = Vec::new();
            for b in disjoint {
                if let Some(last) = merged.last_mut() {
                    let (l, s) = (*last.side(0), *b.side(0));
                    if l.hi == s.lo && (l.hi_closed || s.lo_closed) {
                        *last = AxisBox::from_sides(&[Interval {
                            lo: l.lo,
                            hi: s.hi,
                            lo_closed: l.lo_closed,
                            hi_closed: s.hi_closed,
                        }]);
                        continue;
                    }
                }
                merged.push(b);
            }
            disjoint = merged;
        }
        Ok(Self {
            dim,
            boxes: disjoint,
            eta: DEFAULT_BOUNDARY_TOLERANCE,
        })
    }

    pub fn single(b: AxisBox) -> Self {
        Self::new(vec![b]).expect("a bounded box is a valid window")
    }

    /// Closed interval `[lo, hi]` in one dimension.
    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::single(AxisBox::closed(&[lo], &[hi]))
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        assert!(eta >= 0.0, "boundary tolerance must be nonnegative");
        self.eta = eta;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Smallest closed box containing the window.
    pub fn bounding_box(&self) -> AxisBox {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for b in &self.boxes {
            for (k, s) in b.sides().iter().enumerate() {
                lo[k] = lo[k].min(s.lo);
                hi[k] = hi[k].max(s.hi);
            }
        }
        AxisBox::closed(&lo, &hi)
    }

    pub fn classify(&self, u: &RVec) -> Membership {
        let mut result = Membership::Outside;
        for b in &self.boxes {
            match classify_box(b, u, self.eta) {
                Membership::Inside => return Membership::Inside,
                Membership::Boundary => result = Membership::Boundary,
                Membership::Outside => {}
            }
        }
        result
    }

    pub fn contains(&self, u: &RVec) -> bool {
        self.classify(u).is_member()
    }

    /// Euclidean distance from `u` to the closure of the window.
    pub fn distance(&self, u: &RVec) -> f64 {
        self.boxes
            .iter()
            .map(|b| {
                b.sides()
                    .iter()
                    .zip(u.as_slice())
                    .map(|(s, &x)| {
                        let out = (s.lo - x).max(x - s.hi).max(0.0);
                        out * out
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Lebesgue measure; endpoint flags do not matter.
    pub fn volume(&self) -> f64 {
        self.boxes.iter().map(AxisBox::volume).sum()
    }

    /// `vol(W ∩ (W + t))`.
    pub fn covariogram(&self, t: &RVec) -> f64 {
        let mut total = 0.0;
        for a in &self.boxes {
            for b in &self.boxes {
                total += a.overlap(b, t);
            }
        }
        total
    }

    /// Upper bound on the Lipschitz constant (Euclidean) of the covariogram.
    pub fn covariogram_lipschitz(&self) -> f64 {
        let mut total = 0.0;
        for a in &self.boxes {
            for b in &self.boxes {
                let mut grad_sq = 0.0;
                for k in 0..self.dim {
                    let mut p = 1.0;
                    for l in (0..self.dim).filter(|&l| l != k) {
                        p *= a.side(l).width().min(b.side(l).width());
                    }
                    grad_sq += p * p;
                }
                total += grad_sq.sqrt();
            }
        }
        total
    }

    /// Closure of `W − W`, as a closed box union.
    pub fn difference_window(&self) -> WindowUnion {
        let mut out = Vec::with_capacity(self.boxes.len() * self.boxes.len());
        for a in &self.boxes {
            for b in &self.boxes {
                let sides: Vec<Interval> = a
                    .sides()
                    .iter()
                    .zip(b.sides())
                    .map(|(x, y)| Interval::closed(x.lo - y.hi, x.hi - y.lo))
                    .collect();
                out.push(AxisBox::from_sides(&sides));
            }
        }
        let mut w = WindowUnion::new(out).expect("differences of bounded boxes");
        w.eta = self.eta;
        w
    }

    /// `sup_{w ∈ closure(W)} |exp(2πi y·w) − 1|`, exact per box.
    pub fn char_deviation(&self, y: &RVec) -> f64 {
        let mut worst: f64 = 0.0;
        for b in &self.boxes {
            let (mut a, mut c) = (0.0, 0.0);
            for (s, &yk) in b.sides().iter().zip(y.as_slice()) {
                let (p, q) = (yk * s.lo, yk * s.hi);
                a += p.min(q);
                c += p.max(q);
            }
            let dev = if c - a >= 1.0 || (a - 0.5).ceil() <= c - 0.5 {
                2.0
            } else {
                let sa = (std::f64::consts::PI * a).sin().abs();
                let sc = (std::f64::consts::PI * c).sin().abs();
                2.0 * sa.max(sc)
            };
            worst = worst.max(dev);
            if worst >= 2.0 {
                return 2.0;
            }
        }
        worst
    }

    /// Membership of `y` in `N(W̄, ε)`: every character value on the window
    /// lies strictly within `ε` of 1.
    pub fn eps_dual_member(&self, y: &RVec, eps: f64) -> bool {
        self.char_deviation(y) < eps
    }
}

fn classify_box(b: &AxisBox, u: &RVec, eta: f64) -> Membership {
    let mut margin = f64::INFINITY;
    let mut outside_dist_sq = 0.0;
    for (s, &x) in b.sides().iter().zip(u.as_slice()) {
        margin = margin.min(x - s.lo).min(s.hi - x);
        let out = if x < s.lo {
            s.lo - x
        } else if x > s.hi {
            x - s.hi
        } else {
            0.0
        };
        outside_dist_sq += out * out;
    }
    let exact = b.contains(u);
    if exact && margin > eta {
        Membership::Inside
    } else if exact || (eta > 0.0 && outside_dist_sq.sqrt() <= eta) {
        Membership::Boundary
    } else {
        Membership::Outside
    }
}

type Predicate = dyn Fn(&RVec) -> bool + Send + Sync;

/// A window known only through a membership test.
#[derive(Clone)]
pub struct PredicateWindow {
    descriptor: String,
    test: Arc<Predicate>,
}

impl fmt::Debug for PredicateWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("PredicateWindow").field(&self.descriptor).finish()
    }
}

impl PredicateWindow {
    pub fn new(descriptor: impl Into<String>, test: impl Fn(&RVec) -> bool + Send + Sync + 'static) -> Self {
        Self {
            descriptor: descriptor.into(),
            test: Arc::new(test),
        }
    }

    /// `N(W̄, ε) = { y : sup_{w ∈ W̄} |exp(2πi y·w) − 1| < ε }`.
    pub fn eps_dual(window: &WindowUnion, eps: f64) -> Self {
        let w = window.clone();
        Self::new(format!("N({w:?}, {eps})"), move |y| w.eps_dual_member(y, eps))
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn contains(&self, y: &RVec) -> bool {
        (self.test)(y)
    }
}
