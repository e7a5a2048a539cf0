//! Two explicit point measures on the line that are not model-set combs.

use num_complex::Complex64;

use crate::geometry::RVec;
use crate::measure::{DiscreteMeasure, Shift};
use crate::prng::XorShift64Star;

/// `δ_ℤ + δ_{√2ℤ + 1/2}` restricted to `[−R, R]`.
pub fn two_lattice_comb(radius: f64) -> DiscreteMeasure {
    let one = Complex64::new(1.0, 0.0);
    let n = radius.floor() as i64;
    let integers = (-n..=n).map(|k| (RVec::scalar(k as f64), one));
    let s = std::f64::consts::SQRT_2;
    let lo = ((-radius - 0.5) / s).ceil() as i64;
    let hi = ((radius - 0.5) / s).floor() as i64;
    let shifted = (lo..=hi).map(move |k| (RVec::scalar(s * k as f64 + 0.5), one));
    DiscreteMeasure::from_positions(1, integers.chain(shifted))
}

/// `δ_ℤ − Σ_{n≠0} δ_{n − 1/n}` restricted to `[−R, R]`. The atoms at 0 from
/// `n = ±1` merge with the one from `δ_ℤ` into a single atom of mass −1.
pub fn perturbed_lattice_comb(radius: f64) -> DiscreteMeasure {
    let n = radius.floor() as i64;
    let integers = (-n..=n).map(|k| (RVec::scalar(k as f64), Complex64::new(1.0, 0.0)));
    let bound = n + 2;
    let perturbed = (-bound..=bound)
        .filter(|&k| k != 0)
        .map(|k| k as f64 - 1.0 / k as f64)
        .filter(|x| x.abs() <= radius)
        .map(|x| (RVec::scalar(x), Complex64::new(-1.0, 0.0)));
    DiscreteMeasure::from_positions(1, integers.chain(perturbed))
}

/// Nonzero differences of support positions with `|t| ≤ max_len`, drawn
/// from random atom pairs.
pub fn sample_support_differences(measure: &DiscreteMeasure, count: usize, max_len: f64, seed: u64) -> Vec<Shift> {
    let atoms = measure.atoms();
    let mut rng = XorShift64Star::new(seed);
    let mut out = Vec::with_capacity(count);
    if atoms.len() < 2 {
        return out;
    }
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let i = (rng.next_u64() % atoms.len() as u64) as usize;
        let j = (rng.next_u64() % atoms.len() as u64) as usize;
        let t = atoms[i].position - atoms[j].position;
        if t.norm_inf() > 1e-9 && t.norm_inf() <= max_len {
            out.push(Shift::Position(t));
        }
    }
    out
}
