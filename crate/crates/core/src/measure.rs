//! Finite complex point measures with exact lattice keys or plain positions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::cps::{IntPoint, SchemeBasis};
use crate::geometry::RVec;

/// Positions closer than this are treated as the same atom.
pub const POSITION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub key: Option<IntPoint>,
    pub position: RVec,
    pub value: Complex64,
}

/// `Σ c_j δ_{x_j}` with finitely many atoms. Atoms are sorted by key when
/// keyed, otherwise by position.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    by_key: FxHashMap<IntPoint, usize>,
    /// (first coordinate, atom index), sorted
    by_position: Vec<(f64, usize)>,
}

/// A translation, either by an exact lattice vector or by a position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shift {
    Key { key: IntPoint, physical: RVec },
    Position(RVec),
}

impl Shift {
    pub fn lattice(scheme: &SchemeBasis, key: IntPoint) -> Self {
        Shift::Key {
            key,
            physical: scheme.physical(&key),
        }
    }

    pub fn physical(&self) -> RVec {
        match self {
            Shift::Key { physical, .. } => *physical,
            Shift::Position(p) => *p,
        }
    }
}

impl DiscreteMeasure {
    pub fn empty(dim: usize) -> Self {
        Self::from_atoms(dim, Vec::new())
    }

    /// Keyed measure; positions are the physical parts of the keys.
    pub fn from_keyed(scheme: &SchemeBasis, coeffs: &BTreeMap<IntPoint, Complex64>) -> Self {
        let atoms = coeffs
            .iter()
            .map(|(k, v)| Atom {
                key: Some(*k),
                position: scheme.physical(k),
                value: *v,
            })
            .collect();
        Self::from_atoms(scheme.d(), atoms)
    }

    /// Unkeyed measure; atoms at coinciding positions are merged.
    pub fn from_positions(dim: usize, atoms: impl IntoIterator<Item = (RVec, Complex64)>) -> Self {
        let mut raw: Vec<(RVec, Complex64)> = atoms.into_iter().collect();
        raw.sort_by(|a, b| cmp_positions(&a.0, &b.0));
        let mut merged: Vec<Atom> = Vec::with_capacity(raw.len());
        for (p, v) in raw {
            if let Some(last) = merged.last_mut() {
                if (last.position - p).norm_inf() <= POSITION_TOLERANCE {
                    last.value += v;
                    continue;
                }
            }
            merged.push(Atom {
                key: None,
                position: p,
                value: v,
            });
        }
        Self::from_atoms(dim, merged)
    }

    fn from_atoms(dim: usize, atoms: Vec<Atom>) -> Self {
        let by_key = atoms
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.key.map(|k| (k, i)))
            .collect();
        let mut by_position: Vec<(f64, usize)> = atoms.iter().enumerate().map(|(i, a)| (a.position[0], i)).collect();
        by_position.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Self {
            dim,
            atoms,
            by_key,
            by_position,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn value_at_key(&self, key: &IntPoint) -> Complex64 {
        self.by_key
            .get(key)
            .map_or(Complex64::new(0.0, 0.0), |&i| self.atoms[i].value)
    }

    /// Value of the atom within [`POSITION_TOLERANCE`] of `p`, or 0.
    pub fn value_at_position(&self, p: &RVec) -> Complex64 {
        let tol = POSITION_TOLERANCE;
        let start = self.by_position.partition_point(|&(x, _)| x < p[0] - tol);
        let mut total = Complex64::new(0.0, 0.0);
        for &(x, i) in &self.by_position[start..] {
            if x > p[0] + tol {
                break;
            }
            if (self.atoms[i].position - *p).norm_inf() <= tol {
                total += self.atoms[i].value;
            }
        }
        total
    }

    /// Value at `atom − shift`.
    fn shifted_value(&self, atom: &Atom, shift: &Shift, sign: f64) -> Complex64 {
        match shift {
            Shift::Key { key, physical } => match atom.key {
                Some(k) if sign < 0.0 => self.value_at_key(&(k - *key)),
                Some(k) => self.value_at_key(&(k + *key)),
                None => self.value_at_position(&(atom.position + *physical * sign)),
            },
            Shift::Position(t) => self.value_at_position(&(atom.position + *t * sign)),
        }
    }

    /// `|μ|(A_R) / Vol(A_R)` for the closed box `A_R = [−R, R]^d`.
    pub fn mean_abs(&self, radius: f64) -> f64 {
        let total: f64 = self
            .atoms
            .iter()
            .filter(|a| a.position.norm_inf() <= radius)
            .map(|a| a.value.norm())
            .sum();
        total / (2.0 * radius).powi(self.dim as i32)
    }

    pub fn sup_abs(&self) -> f64 {
        self.atoms.iter().map(|a| a.value.norm()).fold(0.0, f64::max)
    }

    /// `sup_z |μ(z) − μ(z − t)|` over positions `z` with `|z|_∞ ≤ R − |t|_∞`,
    /// where `z` ranges over the support of `μ` and of its translate.
    pub fn translation_defect(&self, shift: &Shift, patch_radius: f64) -> f64 {
        let t = shift.physical();
        let limit = patch_radius - t.norm_inf();
        let mut worst: f64 = 0.0;
        for a in &self.atoms {
            if a.position.norm_inf() <= limit {
                let d = a.value - self.shifted_value(a, shift, -1.0);
                worst = worst.max(d.norm());
            }
            if (a.position + t).norm_inf() <= limit {
                let d = self.shifted_value(a, shift, 1.0) - a.value;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Coefficientwise difference `self − other`.
    pub fn sub(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let keyed = self.atoms.iter().chain(&other.atoms).all(|a| a.key.is_some());
        if keyed {
            let mut map: BTreeMap<IntPoint, (RVec, Complex64)> = BTreeMap::new();
            for a in &self.atoms {
                map.entry(a.key.unwrap())
                    .or_insert((a.position, Complex64::new(0.0, 0.0)))
                    .1 += a.value;
            }
            for a in &other.atoms {
                map.entry(a.key.unwrap())
                    .or_insert((a.position, Complex64::new(0.0, 0.0)))
                    .1 -= a.value;
            }
            let atoms = map
                .into_iter()
                .map(|(k, (p, v))| Atom {
                    key: Some(k),
                    position: p,
                    value: v,
                })
                .collect();
            Self::from_atoms(self.dim, atoms)
        } else {
            let pairs = self
                .atoms
                .iter()
                .map(|a| (a.position, a.value))
                .chain(other.atoms.iter().map(|a| (a.position, -a.value)));
            Self::from_positions(self.dim, pairs)
        }
    }
}

fn cmp_positions(a: &RVec, b: &RVec) -> std::cmp::Ordering {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
