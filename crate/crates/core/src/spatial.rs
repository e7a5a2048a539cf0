//! Nearest-neighbor queries and grid-based covering radii for point sets in
//! one or two dimensions.

use rustc_hash::FxHashMap;

use crate::geometry::{grid_points, AxisBox, RVec};

/// Static nearest-neighbor index: a sorted array in 1D, a bucket grid in 2D.
pub struct NearestIndex {
    points: Vec<RVec>,
    kind: IndexKind,
}

enum IndexKind {
    Line {
        /// (coordinate, original index), sorted by coordinate
        sorted: Vec<(f64, usize)>,
    },
    Grid {
        cell: f64,
        origin: [f64; 2],
        buckets: FxHashMap<(i64, i64), Vec<usize>>,
        max_ring: i64,
    },
}

impl NearestIndex {
    pub fn new(points: &[RVec]) -> Self {
        assert!(!points.is_empty(), "index needs at least one point");
        let dim = points[0].dim();
        let kind = if dim == 1 {
            let mut sorted: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, p)| (p[0], i)).collect();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            IndexKind::Line { sorted }
        } else {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for p in points {
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
            let area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
            let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
            let n = points.len() as f64;
            // thin or collinear sets fall back to spacing along the long side
            let mut cell = ((area / n).sqrt() * 1.5).max(span / n);
            if !(cell > 0.0) || !cell.is_finite() {
                cell = 1.0;
            }
            let mut buckets: FxHashMap<(i64, i64), Vec<usize>> = FxHashMap::default();
            for (i, p) in points.iter().enumerate() {
                let key = (
                    ((p[0] - lo[0]) / cell).floor() as i64,
                    ((p[1] - lo[1]) / cell).floor() as i64,
                );
                buckets.entry(key).or_default().push(i);
            }
            let max_ring = (span / cell).ceil() as i64 + 2;
            IndexKind::Grid {
                cell,
                origin: lo,
                buckets,
                max_ring,
            }
        };
        Self {
            points: points.to_vec(),
            kind,
        }
    }

    pub fn points(&self) -> &[RVec] {
        &self.points
    }

    /// Distance from `q` to the nearest indexed point other than `skip`.
    pub fn nearest_dist_excluding(&self, q: &RVec, skip: Option<usize>) -> f64 {
        match &self.kind {
            IndexKind::Line { sorted } => {
                let x = q[0];
                let pos = sorted.partition_point(|&(v, _)| v < x);
                let mut best = f64::INFINITY;
                // walk outwards past the skipped element if needed
                let mut i = pos;
                while i < sorted.len() {
                    if Some(sorted[i].1) != skip {
                        best = best.min((sorted[i].0 - x).abs());
                        break;
                    }
                    i += 1;
                }
                let mut j = pos;
                while j > 0 {
                    j -= 1;
                    if Some(sorted[j].1) != skip {
                        best = best.min((sorted[j].0 - x).abs());
                        break;
                    }
                }
                best
            }
            IndexKind::Grid {
                cell,
                origin,
                buckets,
                max_ring,
            } => {
                let cx = ((q[0] - origin[0]) / cell).floor() as i64;
                let cy = ((q[1] - origin[1]) / cell).floor() as i64;
                let mut best = f64::INFINITY;
                let mut ring = 0i64;
                loop {
                    for dx in -ring..=ring {
                        for dy in -ring..=ring {
                            if dx.abs() != ring && dy.abs() != ring {
                                continue;
                            }
                            if let Some(ids) = buckets.get(&(cx + dx, cy + dy)) {
                                for &i in ids {
                                    if Some(i) == skip {
                                        continue;
                                    }
                                    best = best.min(self.points[i].dist(q));
                                }
                            }
                        }
                    }
                    // cells of ring r+1 are at least r*cell away
                    if best <= ring as f64 * cell {
                        return best;
                    }
                    ring += 1;
                    let far = (cx.abs().max(cy.abs())) + max_ring;
                    if ring > far {
                        return best;
                    }
                }
            }
        }
    }

    pub fn nearest_dist(&self, q: &RVec) -> f64 {
        self.nearest_dist_excluding(q, None)
    }

    /// Smallest distance between two distinct indexed points.
    pub fn min_pair_distance(&self) -> f64 {
        match &self.kind {
            IndexKind::Line { sorted } => sorted.windows(2).map(|w| w[1].0 - w[0].0).fold(f64::INFINITY, f64::min),
            IndexKind::Grid { .. } => (0..self.points.len())
                .map(|i| self.nearest_dist_excluding(&self.points[i], Some(i)))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Max distance to the nearest point over a regular grid of `region`
/// (`per_axis` steps per axis), with no boundary margin.
pub fn covering_on_grid(index: &NearestIndex, region: &AxisBox, per_axis: usize) -> f64 {
    grid_points(region, per_axis)
        .iter()
        .map(|g| index.nearest_dist(g))
        .fold(0.0, f64::max)
}

/// Covering radius with a self-consistent interior margin: picks the largest
/// `c` for which the grid points at least `c` away from the region boundary
/// have nearest-point distance reaching `c`, and returns the max distance
/// over those grid points. Gaps created by truncating the set at the region
/// edge are excluded without a hand-tuned margin.
pub fn covering_with_margin(index: &NearestIndex, region: &AxisBox, per_axis: usize) -> f64 {
    let grid = grid_points(region, per_axis);
    let mut samples: Vec<(f64, f64)> = grid
        .iter()
        .map(|g| {
            let boundary = region
                .sides()
                .iter()
                .zip(g.as_slice())
                .map(|(s, &x)| (x - s.lo).min(s.hi - x))
                .fold(f64::INFINITY, f64::min);
            (boundary, index.nearest_dist(g))
        })
        .collect();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut running = 0.0f64;
    let mut best_c = f64::NEG_INFINITY;
    let mut value = 0.0;
    for &(b, dist) in &samples {
        running = running.max(dist);
        let c = b.min(running);
        if c >= best_c {
            best_c = c;
            value = running;
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::XorShift64Star;

    #[test]
    fn nearest_matches_brute_force_2d() {
        let mut g = XorShift64Star::new(3);
        let pts: Vec<RVec> = (0..300)
            .map(|_| RVec::new(&[g.next_f64() * 10.0, g.next_f64() * 5.0]))
            .collect();
        let idx = NearestIndex::new(&pts);
        for _ in 0..200 {
            let q = RVec::new(&[g.next_f64() * 14.0 - 2.0, g.next_f64() * 9.0 - 2.0]);
            let brute = pts.iter().map(|p| p.dist(&q)).fold(f64::INFINITY, f64::min);
            assert_eq!(idx.nearest_dist(&q), brute);
        }
        let brute_pair = (0..pts.len())
            .flat_map(|i| (0..pts.len()).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| pts[i].dist(&pts[j]))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(idx.min_pair_distance(), brute_pair);
    }

    #[test]
    fn margin_covering_examples() {
        let z: Vec<RVec> = (-2..=2).map(|i| RVec::scalar(i as f64)).collect();
        let idx = NearestIndex::new(&z);
        let region = AxisBox::closed(&[-2.5], &[2.5]);
        assert!((covering_with_margin(&idx, &region, 1000) - 0.5).abs() < 1e-12);
        let two = NearestIndex::new(&[RVec::scalar(0.0), RVec::scalar(5.0)]);
        let r = covering_with_margin(&two, &AxisBox::closed(&[0.0], &[5.0]), 1000);
        assert!((r - 2.5).abs() < 1e-12);
    }
}
