//! Euclidean cut-and-project schemes with exact integer lattice coordinates.
//!
//! A scheme is given by an invertible `(d+m)×(d+m)` matrix `B` whose columns
//! generate the lattice in `ℝ^d × ℝ^m`. Lattice points are stored as their
//! integer coordinate vectors `z`; the physical and internal parts of `B·z`
//! are derived on demand, so set operations on point sets stay exact.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RVec, MAX_FACTOR_DIM};

/// Largest supported total dimension `d + m`.
pub const MAX_DIM: usize = 2 * MAX_FACTOR_DIM;

/// Default cap on the number of integer candidates an enumeration may scan.
pub const DEFAULT_CANDIDATE_BUDGET: f64 = 1e8;

/// Physical norm below which a nonzero lattice vector is reported by the
/// injectivity probe.
pub const INJECTIVITY_TOLERANCE: f64 = 1e-9;

/// Integer coordinates of a lattice point. Equality, hashing and ordering
/// are exact; ordering is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoint {
    coords: [i64; MAX_DIM],
    len: u8,
}

impl IntPoint {
    pub fn new(coords: &[i64]) -> Self {
        assert!(!coords.is_empty() && coords.len() <= MAX_DIM);
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Self {
            coords: c,
            len: coords.len() as u8,
        }
    }

    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n));
        Self {
            coords: [0; MAX_DIM],
            len: n as u8,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_slice(&self) -> &[i64] {
        &self.coords[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&c| c == 0)
    }
}

impl Add for IntPoint {
    type Output = IntPoint;
    #[inline]
    fn add(mut self, rhs: IntPoint) -> IntPoint {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..MAX_DIM {
            self.coords[i] += rhs.coords[i];
        }
        self
    }
}

impl Sub for IntPoint {
    type Output = IntPoint;
    #[inline]
    fn sub(mut self, rhs: IntPoint) -> IntPoint {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..MAX_DIM {
            self.coords[i] -= rhs.coords[i];
        }
        self
    }
}

impl Neg for IntPoint {
    type Output = IntPoint;
    #[inline]
    fn neg(mut self) -> IntPoint {
        for c in &mut self.coords {
            *c = -*c;
        }
        self
    }
}

impl fmt::Debug for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z")?;
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// Physical and internal parts of an embedded lattice point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Embedded {
    pub physical: RVec,
    pub internal: RVec,
}

/// A cut-and-project scheme `(ℝ^d × ℝ^m, B·ℤ^(d+m))`.
#[derive(Clone, PartialEq)]
pub struct SchemeBasis {
    name: String,
    d: usize,
    m: usize,
    /// Row-major, `n×n` in the leading block.
    b: [[f64; MAX_DIM]; MAX_DIM],
    binv: [[f64; MAX_DIM]; MAX_DIM],
    det: f64,
}

impl fmt::Debug for SchemeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeBasis")
            .field("name", &self.name)
            .field("d", &self.d)
            .field("m", &self.m)
            .field("det", &self.det)
            .finish()
    }
}

impl SchemeBasis {
    /// Builds a scheme from a row-major matrix. Rows `0..d` are the physical
    /// coordinates, rows `d..d+m` the internal ones.
    pub fn new(name: impl Into<String>, d: usize, m: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if !(1..=MAX_FACTOR_DIM).contains(&d) || !(1..=MAX_FACTOR_DIM).contains(&m) {
            return Err(Error::InvalidScheme(format!(
                "dimensions d={d}, m={m}; each must be 1 or 2"
            )));
        }
        let n = d + m;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidScheme(format!("matrix must be {n}×{n}")));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SingularBasis);
        }
        let mat = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let det = mat.determinant();
        if !det.is_finite() || det.abs() < 1e-12 {
            return Err(Error::SingularBasis);
        }
        let inv = mat.try_inverse().ok_or(Error::SingularBasis)?;
        let mut b = [[0.0; MAX_DIM]; MAX_DIM];
        let mut binv = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                b[i][j] = rows[i][j];
                binv[i][j] = inv[(i, j)];
            }
        }
        Ok(Self {
            name: name.into(),
            d,
            m,
            b,
            binv,
            det,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.d + self.m
    }

    pub fn determinant(&self) -> f64 {
        self.det
    }

    /// `rows()[i][j]` is entry `(i, j)` of `B`.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n).map(|i| self.b[i][..n].to_vec()).collect()
    }

    pub fn inverse_rows(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n).map(|i| self.binv[i][..n].to_vec()).collect()
    }

    /// Density of the lattice, `1/|det B|`.
    pub fn density(&self) -> f64 {
        1.0 / self.det.abs()
    }

    #[inline]
    fn apply(&self, z: &[i64]) -> [f64; MAX_DIM] {
        let n = self.n();
        let mut y = [0.0; MAX_DIM];
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            let mut s = 0.0;
            for (j, &zj) in z.iter().enumerate() {
                s += self.b[i][j] * zj as f64;
            }
            *yi = s;
        }
        y
    }

    /// Splits `B·p` into its physical and internal parts.
    #[inline]
    pub fn embed(&self, p: &IntPoint) -> Embedded {
        debug_assert_eq!(p.len(), self.n());
        let y = self.apply(p.as_slice());
        Embedded {
            physical: RVec::new(&y[..self.d]),
            internal: RVec::new(&y[self.d..self.n()]),
        }
    }

    #[inline]
    pub fn physical(&self, p: &IntPoint) -> RVec {
        self.embed(p).physical
    }

    /// The star map: internal part of the lattice point.
    #[inline]
    pub fn star(&self, p: &IntPoint) -> RVec {
        self.embed(p).internal
    }

    /// `B⁻¹·y` for a point of `ℝ^n`.
    pub fn preimage(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.binv[i][j] * y[j]).sum()).collect()
    }

    /// The dual scheme with basis `(Bᵀ)⁻¹`, same physical/internal split.
    pub fn dual_basis(&self) -> DualSchemeBasis {
        let n = self.n();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| self.binv[j][i]).collect()).collect();
        let basis = SchemeBasis::new(format!("{}*", self.name), self.d, self.m, &rows)
            .expect("inverse transpose of an invertible matrix is invertible");
        DualSchemeBasis { basis }
    }

    /// All lattice points with physical part in `physical_box` and internal
    /// part in `internal_box` (both treated as closed), in lexicographic
    /// order of their integer coordinates.
    pub fn enumerate_lattice(&self, physical_box: &AxisBox, internal_box: &AxisBox) -> Result<Vec<IntPoint>> {
        self.enumerate_lattice_with_budget(physical_box, internal_box, DEFAULT_CANDIDATE_BUDGET)
    }

    pub fn enumerate_lattice_with_budget(
        &self,
        physical_box: &AxisBox,
        internal_box: &AxisBox,
        budget: f64,
    ) -> Result<Vec<IntPoint>> {
        assert_eq!(physical_box.dim(), self.d, "physical box dimension");
        assert_eq!(internal_box.dim(), self.m, "internal box dimension");
        if !physical_box.is_bounded() || !internal_box.is_bounded() {
            return Err(Error::InvalidArgument("enumeration boxes must be bounded".into()));
        }
        let n = self.n();
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for (i, s) in physical_box.sides().iter().chain(internal_box.sides()).enumerate() {
            lo[i] = s.lo;
            hi[i] = s.hi;
        }
        if (0..n).any(|i| lo[i] > hi[i]) {
            return Ok(Vec::new());
        }

        // Integer bounding box of the preimage of the product box.
        let mut zlo = [i64::MAX; MAX_DIM];
        let mut zhi = [i64::MIN; MAX_DIM];
        let mut fmin = [f64::INFINITY; MAX_DIM];
        let mut fmax = [f64::NEG_INFINITY; MAX_DIM];
        for corner in 0..(1usize << n) {
            let y: Vec<f64> = (0..n)
                .map(|i| if corner >> i & 1 == 0 { lo[i] } else { hi[i] })
                .collect();
            let z = self.preimage(&y);
            for j in 0..n {
                fmin[j] = fmin[j].min(z[j]);
                fmax[j] = fmax[j].max(z[j]);
            }
        }
        // The last coordinate is solved per row, so the work is the number
        // of rows over the outer coordinates.
        let mut candidates = 1.0f64;
        for j in 0..n {
            let slack = 1e-9 * (1.0 + fmin[j].abs().max(fmax[j].abs()));
            zlo[j] = (fmin[j] - slack).floor() as i64;
            zhi[j] = (fmax[j] + slack).ceil() as i64;
            if j + 1 < n {
                candidates *= (zhi[j] - zlo[j] + 1) as f64;
            }
        }
        if candidates > budget {
            return Err(Error::Oversize { candidates, budget });
        }

        let row_for = |z_outer: &[i64; MAX_DIM], out: &mut Vec<IntPoint>| {
            let last = n - 1;
            // Solve the box constraints for the last coordinate.
            let mut tlo = zlo[last] as f64;
            let mut thi = zhi[last] as f64;
            for i in 0..n {
                let a: f64 = (0..last).map(|j| self.b[i][j] * z_outer[j] as f64).sum();
                let c = self.b[i][last];
                let tol = 1e-9 * (1.0 + a.abs() + lo[i].abs().max(hi[i].abs()));
                if c.abs() < 1e-300 {
                    if a < lo[i] - tol || a > hi[i] + tol {
                        return;
                    }
                    continue;
                }
                let (mut l, mut h) = ((lo[i] - a) / c, (hi[i] - a) / c);
                if c < 0.0 {
                    std::mem::swap(&mut l, &mut h);
                }
                let widen = tol / c.abs();
                tlo = tlo.max(l - widen);
                thi = thi.min(h + widen);
            }
            if tlo > thi {
                return;
            }
            let mut z = *z_outer;
            for t in (tlo.ceil() as i64)..=(thi.floor() as i64) {
                z[last] = t;
                let y = self.apply(&z[..n]);
                if (0..n).all(|i| y[i] >= lo[i] && y[i] <= hi[i]) {
                    out.push(IntPoint::new(&z[..n]));
                }
            }
        };

        // Walk the outer coordinates lexicographically; the leading
        // coordinate is split across workers and merged in order.
        let scan_leading = |z0: i64| -> Vec<IntPoint> {
            let mut out = Vec::new();
            let mut z = [0i64; MAX_DIM];
            z[0] = z0;
            let inner_dims = n - 2; // coordinates 1..n-1 exclusive of last
            if inner_dims == 0 {
                row_for(&z, &mut out);
                return out;
            }
            let mut idx: Vec<i64> = (1..=inner_dims).map(|j| zlo[j]).collect();
            loop {
                for (k, &v) in idx.iter().enumerate() {
                    z[k + 1] = v;
                }
                row_for(&z, &mut out);
                let mut k = inner_dims;
                loop {
                    if k == 0 {
                        return out;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] <= zhi[k + 1] {
                        break;
                    }
                    idx[k] = zlo[k + 1];
                }
            }
        };

        let leading: Vec<i64> = (zlo[0]..=zhi[0]).collect();
        let parts: Vec<Vec<IntPoint>> = if leading.len() > 64 {
            leading.par_iter().map(|&z0| scan_leading(z0)).collect()
        } else {
            leading.iter().map(|&z0| scan_leading(z0)).collect()
        };
        Ok(parts.into_iter().flatten().collect())
    }

    /// Searches `[-radius, radius]^(d+m)` for a nonzero integer vector whose
    /// physical part has norm below [`INJECTIVITY_TOLERANCE`]. `None` means
    /// the probe found no obstruction to injectivity of the physical
    /// projection restricted to the lattice (a diagnostic, not a proof).
    pub fn injectivity_probe(&self, radius: i64) -> Result<Option<IntPoint>> {
        let (d, n) = (self.d, self.n());
        // Pick d pivot columns of the physical block with the best-conditioned
        // square submatrix; the remaining m columns are scanned.
        let cols: Vec<usize> = (0..n).collect();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for subset in subsets(&cols, d) {
            let sub = DMatrix::from_fn(d, d, |i, j| self.b[i][subset[j]]);
            let det = sub.determinant().abs();
            if best.as_ref().is_none_or(|(b, _)| det > *b) {
                best = Some((det, subset));
            }
        }
        let (det, pivots) = best.expect("at least one subset");
        if det < 1e-12 {
            return Err(Error::InvalidScheme(
                "physical projection of the lattice has deficient rank".into(),
            ));
        }
        let free: Vec<usize> = cols.iter().copied().filter(|c| !pivots.contains(c)).collect();
        let pj = DMatrix::from_fn(d, d, |i, j| self.b[i][pivots[j]]);
        let pj_inv = pj.try_inverse().ok_or(Error::SingularBasis)?;

        let mut idx = vec![-radius; free.len()];
        loop {
            if idx.iter().any(|&v| v != 0) {
                // z_pivots = -P_J⁻¹ P_F z_F
                let rhs: Vec<f64> = (0..d)
                    .map(|i| {
                        free.iter()
                            .zip(&idx)
                            .map(|(&c, &v)| self.b[i][c] * v as f64)
                            .sum::<f64>()
                    })
                    .collect();
                let mut z = [0i64; MAX_DIM];
                for (&c, &v) in free.iter().zip(&idx) {
                    z[c] = v;
                }
                let mut in_range = true;
                for (r, &pc) in pivots.iter().enumerate() {
                    let val: f64 = -(0..d).map(|k| pj_inv[(r, k)] * rhs[k]).sum::<f64>();
                    let rounded = val.round();
                    if rounded.abs() > radius as f64 {
                        in_range = false;
                        break;
                    }
                    z[pc] = rounded as i64;
                }
                if in_range {
                    let p = IntPoint::new(&z[..n]);
                    if self.physical(&p).norm() < INJECTIVITY_TOLERANCE {
                        return Ok(Some(p));
                    }
                }
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] <= radius {
                    break;
                }
                idx[k] = -radius;
            }
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The dual scheme `(ℝ^d × ℝ^m, (Bᵀ)⁻¹·ℤ^(d+m))`. Its lattice pairs to
/// integers with the primal lattice under the standard inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSchemeBasis {
    basis: SchemeBasis,
}

impl DualSchemeBasis {
    pub fn basis(&self) -> &SchemeBasis {
        &self.basis
    }

    /// The dual of the dual, i.e. the original scheme up to rounding.
    pub fn dual(&self) -> SchemeBasis {
        self.basis.dual_basis().basis
    }

    /// `(B·z)·(B'·w)` computed in floating point.
    pub fn pairing(&self, primal: &SchemeBasis, z: &IntPoint, w: &IntPoint) -> f64 {
        let a = primal.embed(z);
        let b = self.basis.embed(w);
        a.physical.dot(&b.physical) + a.internal.dot(&b.internal)
    }
}

impl std::ops::Deref for DualSchemeBasis {
    type Target = SchemeBasis;
    fn deref(&self) -> &SchemeBasis {
        &self.basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const TAU: f64 = 1.618_033_988_749_895;

    #[test]
    fn embed_fibonacci_examples() {
        let s = catalog::fibonacci();
        let e = s.embed(&IntPoint::new(&[0, 0]));
        assert_eq!(e.physical[0], 0.0);
        assert_eq!(e.internal[0], 0.0);
        let e = s.embed(&IntPoint::new(&[1, 0]));
        assert_eq!((e.physical[0], e.internal[0]), (1.0, 1.0));
        let e = s.embed(&IntPoint::new(&[0, 1]));
        assert!((e.physical[0] - TAU).abs() < 1e-15);
        assert!((e.internal[0] - (1.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        assert_eq!(catalog::identity(1, 1).density(), 1.0);
        let fib = catalog::fibonacci();
        assert!((fib.density() - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        let scaled: Vec<Vec<f64>> = fib.rows().iter().map(|r| r.iter().map(|v| 2.0 * v).collect()).collect();
        let s2 = SchemeBasis::new("fib2", 1, 1, &scaled).unwrap();
        assert!((s2.density() - fib.density() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(SchemeBasis::new("bad", 1, 1, &rows).unwrap_err(), Error::SingularBasis);
    }

    #[test]
    fn dual_examples() {
        let id = catalog::identity(1, 1);
        let dual = id.dual_basis();
        assert_eq!(dual.rows(), id.rows());

        // (Bᵀ)⁻¹ for B = [[1, τ], [1, 1-τ]], det = 1 - 2τ = -√5.
        let fib = catalog::fibonacci();
        let det = 1.0 - 2.0 * TAU;
        let expected = [[(1.0 - TAU) / det, -1.0 / det], [-TAU / det, 1.0 / det]];
        let got = fib.dual_basis().rows();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[i][j] - expected[i][j]).abs() < 1e-14, "{i}{j}");
            }
        }
        let back = fib.dual_basis().dual();
        for (r, o) in back.rows().iter().zip(fib.rows()) {
            for (a, b) in r.iter().zip(o) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn enumerate_identity_example() {
        let id = catalog::identity(1, 1);
        let pts = id
            .enumerate_lattice(&AxisBox::closed(&[-1.5], &[1.5]), &AxisBox::closed(&[-0.5], &[0.5]))
            .unwrap();
        let want: Vec<IntPoint> = [[-1, 0], [0, 0], [1, 0]].iter().map(|c| IntPoint::new(c)).collect();
        assert_eq!(pts, want);
    }

    #[test]
    fn enumerate_fibonacci_example() {
        let fib = catalog::fibonacci();
        let pts = fib
            .enumerate_lattice(&AxisBox::closed(&[-0.1], &[2.7]), &AxisBox::closed(&[0.0], &[1.0]))
            .unwrap();
        let want: Vec<IntPoint> = [[0, 0], [1, 0], [1, 1]].iter().map(|c| IntPoint::new(c)).collect();
        assert_eq!(pts, want);
        // oracle: direct scan over |m|,|n| <= 4
        let mut scan = Vec::new();
        for a in -4..=4 {
            for b in -4..=4 {
                let p = IntPoint::new(&[a, b]);
                let e = fib.embed(&p);
                if (-0.1..=2.7).contains(&e.physical[0]) && (0.0..=1.0).contains(&e.internal[0]) {
                    scan.push(p);
                }
            }
        }
        assert_eq!(pts, scan);
    }

    #[test]
    fn enumerate_empty_box() {
        let fib = catalog::fibonacci();
        let pts = fib
            .enumerate_lattice(&AxisBox::closed(&[1.0], &[0.0]), &AxisBox::closed(&[0.0], &[1.0]))
            .unwrap();
        assert!(pts.is_empty());
        let pts = fib
            .enumerate_lattice(&AxisBox::closed(&[0.1], &[0.2]), &AxisBox::closed(&[0.1], &[0.2]))
            .unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn oversize_is_reported() {
        let fib = catalog::fibonacci();
        let err = fib
            .enumerate_lattice_with_budget(&AxisBox::closed(&[-1e4], &[1e4]), &AxisBox::closed(&[0.0], &[1.0]), 1e3)
            .unwrap_err();
        assert!(matches!(err, Error::Oversize { .. }));
    }

    #[test]
    fn bundled_schemes_pass_injectivity_probe() {
        for s in [catalog::fibonacci(), catalog::silver_mean()] {
            assert_eq!(s.injectivity_probe(1000).unwrap(), None, "{}", s.name());
        }
        assert_eq!(catalog::box2d().injectivity_probe(200).unwrap(), None);
    }

    #[test]
    fn rational_scheme_fails_injectivity_probe() {
        // physical row (1, 2): z = (2, -1) maps to 0
        let rows = vec![vec![1.0, 2.0], vec![0.0, 1.0]];
        let s = SchemeBasis::new("rational", 1, 1, &rows).unwrap();
        let hit = s.injectivity_probe(10).unwrap().expect("collision");
        assert!(s.physical(&hit).norm() < 1e-12);
        assert!(!hit.is_zero());
    }
}
