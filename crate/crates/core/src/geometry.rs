//! Small fixed-capacity vectors and axis-aligned boxes in one or two
//! dimensions, shared by physical space, internal space and frequency space.

use std::fmt;

/// Largest supported dimension of a single factor (physical or internal).
pub const MAX_FACTOR_DIM: usize = 2;

/// A real vector of length 1 or 2.
#[derive(Clone, Copy, PartialEq)]
pub struct RVec {
    c: [f64; MAX_FACTOR_DIM],
    len: u8,
}

impl RVec {
    pub fn new(values: &[f64]) -> Self {
        assert!(
            !values.is_empty() && values.len() <= MAX_FACTOR_DIM,
            "vector length {} unsupported",
            values.len()
        );
        let mut c = [0.0; MAX_FACTOR_DIM];
        c[..values.len()].copy_from_slice(values);
        Self {
            c,
            len: values.len() as u8,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_FACTOR_DIM).contains(&dim));
        Self {
            c: [0.0; MAX_FACTOR_DIM],
            len: dim as u8,
        }
    }

    pub fn scalar(x: f64) -> Self {
        Self::new(&[x])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.len as usize]
    }

    #[inline]
    pub fn dot(&self, other: &RVec) -> f64 {
        debug_assert_eq!(self.len, other.len);
        self.as_slice().iter().zip(other.as_slice()).map(|(a, b)| a * b).sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Maximum absolute coordinate.
    #[inline]
    pub fn norm_inf(&self) -> f64 {
        self.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[inline]
    pub fn dist(&self, other: &RVec) -> f64 {
        (*self - *other).norm()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = *self;
        for v in &mut out.c[..self.len as usize] {
            *v = f(*v);
        }
        out
    }
}

impl std::ops::Index<usize> for RVec {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl std::ops::Add for RVec {
    type Output = RVec;
    #[inline]
    fn add(mut self, rhs: RVec) -> RVec {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len as usize {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl std::ops::Sub for RVec {
    type Output = RVec;
    #[inline]
    fn sub(mut self, rhs: RVec) -> RVec {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len as usize {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl std::ops::Neg for RVec {
    type Output = RVec;
    #[inline]
    fn neg(self) -> RVec {
        self.map(|v| -v)
    }
}

impl std::ops::Mul<f64> for RVec {
    type Output = RVec;
    #[inline]
    fn mul(self, s: f64) -> RVec {
        self.map(|v| v * s)
    }
}

impl fmt::Debug for RVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// A bounded interval with independent endpoint closedness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    /// True when the interval contains no point.
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn contains_closed(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn closure(&self) -> Self {
        Self::closed(self.lo, self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    /// Lebesgue measure of the intersection with `other + shift`.
    pub fn overlap(&self, other: &Interval, shift: f64) -> f64 {
        let lo = self.lo.max(other.lo + shift);
        let hi = self.hi.min(other.hi + shift);
        (hi - lo).max(0.0)
    }
}

/// An axis-aligned box in one or two dimensions.
#[derive(Clone, Copy, PartialEq)]
pub struct AxisBox {
    sides: [Interval; MAX_FACTOR_DIM],
    dim: u8,
}

impl AxisBox {
    pub fn from_sides(sides: &[Interval]) -> Self {
        assert!(!sides.is_empty() && sides.len() <= MAX_FACTOR_DIM);
        let mut s = [Interval::closed(0.0, 0.0); MAX_FACTOR_DIM];
        s[..sides.len()].copy_from_slice(sides);
        Self {
            sides: s,
            dim: sides.len() as u8,
        }
    }

    /// Closed box `[lo_i, hi_i]` in every coordinate.
    pub fn closed(lo: &[f64], hi: &[f64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let sides: Vec<Interval> = lo.iter().zip(hi).map(|(&l, &h)| Interval::closed(l, h)).collect();
        Self::from_sides(&sides)
    }

    pub fn open(lo: &[f64], hi: &[f64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let sides: Vec<Interval> = lo.iter().zip(hi).map(|(&l, &h)| Interval::open(l, h)).collect();
        Self::from_sides(&sides)
    }

    /// The centered cube `[-r, r]^dim`.
    pub fn centered(dim: usize, r: f64) -> Self {
        Self::closed(&vec![-r; dim], &vec![r; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn sides(&self) -> &[Interval] {
        &self.sides[..self.dim as usize]
    }

    pub fn side(&self, i: usize) -> &Interval {
        &self.sides()[i]
    }

    pub fn lo(&self) -> RVec {
        let v: Vec<f64> = self.sides().iter().map(|s| s.lo).collect();
        RVec::new(&v)
    }

    pub fn hi(&self) -> RVec {
        let v: Vec<f64> = self.sides().iter().map(|s| s.hi).collect();
        RVec::new(&v)
    }

    pub fn center(&self) -> RVec {
        let v: Vec<f64> = self.sides().iter().map(|s| 0.5 * (s.lo + s.hi)).collect();
        RVec::new(&v)
    }

    pub fn volume(&self) -> f64 {
        self.sides().iter().map(Interval::width).product()
    }

    pub fn is_empty(&self) -> bool {
        self.sides().iter().any(Interval::is_empty)
    }

    pub fn is_bounded(&self) -> bool {
        self.sides().iter().all(|s| s.lo.is_finite() && s.hi.is_finite())
    }

    pub fn contains(&self, p: &RVec) -> bool {
        debug_assert_eq!(p.dim(), self.dim());
        self.sides().iter().zip(p.as_slice()).all(|(s, &x)| s.contains(x))
    }

    pub fn contains_closed(&self, p: &RVec) -> bool {
        self.sides()
            .iter()
            .zip(p.as_slice())
            .all(|(s, &x)| s.contains_closed(x))
    }

    pub fn closure(&self) -> Self {
        let sides: Vec<Interval> = self.sides().iter().map(Interval::closure).collect();
        Self::from_sides(&sides)
    }

    pub fn intersect(&self, other: &AxisBox) -> AxisBox {
        assert_eq!(self.dim, other.dim);
        let sides: Vec<Interval> = self
            .sides()
            .iter()
            .zip(other.sides())
            .map(|(a, b)| a.intersect(b))
            .collect();
        Self::from_sides(&sides)
    }

    /// Lebesgue measure of `self ∩ (other + shift)`.
    pub fn overlap(&self, other: &AxisBox, shift: &RVec) -> f64 {
        self.sides()
            .iter()
            .zip(other.sides())
            .zip(shift.as_slice())
            .map(|((a, b), &t)| a.overlap(b, t))
            .product()
    }

    /// Grows (or shrinks, for negative `by`) every side symmetrically; the
    /// result is closed.
    pub fn expanded(&self, by: f64) -> AxisBox {
        let sides: Vec<Interval> = self
            .sides()
            .iter()
            .map(|s| Interval::closed(s.lo - by, s.hi + by))
            .collect();
        Self::from_sides(&sides)
    }

    /// Scales the box about its center.
    pub fn scaled_about_center(&self, factor: f64) -> AxisBox {
        let sides: Vec<Interval> = self
            .sides()
            .iter()
            .map(|s| {
                let c = 0.5 * (s.lo + s.hi);
                let h = 0.5 * (s.hi - s.lo) * factor;
                Interval::closed(c - h, c + h)
            })
            .collect();
        Self::from_sides(&sides)
    }

    /// Set difference `self \ other`, as disjoint boxes (slab decomposition).
    pub fn minus(&self, other: &AxisBox) -> Vec<AxisBox> {
        let inter = self.intersect(other);
        if inter.is_empty() {
            return vec![*self];
        }
        let mut out = Vec::new();
        let mut rest = *self;
        for k in 0..self.dim() {
            let s = rest.sides[k];
            let o = other.sides[k];
            // below `o`
            let below = Interval {
                lo: s.lo,
                hi: o.lo,
                lo_closed: s.lo_closed,
                hi_closed: !o.lo_closed,
            }
            .intersect(&s);
            if !below.is_empty() {
                let mut b = rest;
                b.sides[k] = below;
                out.push(b);
            }
            let above = Interval {
                lo: o.hi,
                hi: s.hi,
                lo_closed: !o.hi_closed,
                hi_closed: s.hi_closed,
            }
            .intersect(&s);
            if !above.is_empty() {
                let mut a = rest;
                a.sides[k] = above;
                out.push(a);
            }
            rest.sides[k] = s.intersect(&o);
        }
        out
    }
}

impl fmt::Debug for AxisBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in self.sides() {
            if !first {
                write!(f, "×")?;
            }
            first = false;
            write!(
                f,
                "{}{}, {}{}",
                if s.lo_closed { '[' } else { '(' },
                s.lo,
                s.hi,
                if s.hi_closed { ']' } else { ')' }
            )?;
        }
        Ok(())
    }
}

/// Regular grid of sample points covering `region`, `per_axis` steps per
/// axis (so `per_axis + 1` samples per axis including both ends).
pub fn grid_points(region: &AxisBox, per_axis: usize) -> Vec<RVec> {
    let per_axis = per_axis.max(1);
    let axis = |s: &Interval| -> Vec<f64> {
        let step = (s.hi - s.lo) / per_axis as f64;
        (0..=per_axis).map(|i| s.lo + step * i as f64).collect()
    };
    match region.dim() {
        1 => axis(region.side(0)).into_iter().map(RVec::scalar).collect(),
        _ => {
            let xs = axis(region.side(0));
            let ys = axis(region.side(1));
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for &x in &xs {
                for &y in &ys {
                    out.push(RVec::new(&[x, y]));
                }
            }
            out
        }
    }
}
