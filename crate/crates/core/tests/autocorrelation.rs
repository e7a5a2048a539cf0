use std::collections::BTreeMap;
use std::sync::Arc;

use modelset::catalog;
use modelset::{
    decompose, gamma_s_oracle, support_check, Autocorrelation, AxisBox, EdgeCorrection, IntPoint, InternalWeight,
    OracleKind, PointSetPatch, RVec, WeightedComb, WindowUnion,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn patch(window: &WindowUnion, r: f64) -> Arc<PointSetPatch> {
    Arc::new(PointSetPatch::model_set(&catalog::fibonacci(), window, &AxisBox::centered(1, r)).unwrap())
}

fn brute_force(comb: &WeightedComb, r: f64) -> BTreeMap<IntPoint, Complex64> {
    let p = comb.patch();
    let mut out: BTreeMap<IntPoint, Complex64> = BTreeMap::new();
    let inside: Vec<usize> = (0..p.len())
        .filter(|&i| p.embedded()[i].physical.norm_inf() <= r && comb.weights()[i] != Complex64::new(0.0, 0.0))
        .collect();
    for &i in &inside {
        for &j in &inside {
            let key = p.points()[i] - p.points()[j];
            *out.entry(key).or_default() += comb.weights()[i] * comb.weights()[j].conj();
        }
    }
    let v = 2.0 * r;
    out.into_iter().map(|(k, s)| (k, s / v)).collect()
}

fn min_eigenvalue(keys: &[IntPoint], f: impl Fn(&IntPoint) -> Complex64) -> (f64, f64) {
    let n = keys.len();
    let m = DMatrix::from_fn(n, n, |i, j| f(&(keys[i] - keys[j])));
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let eig = m.symmetric_eigen();
    (eig.eigenvalues.min(), scale)
}

fn tent_strategy() -> impl Strategy<Value = InternalWeight> {
    (-0.5f64..1.5, 0.2f64..2.0).prop_map(|(c, h)| InternalWeight::Tent {
        center: RVec::scalar(c),
        halfwidth: RVec::scalar(h),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_brute_force(a in -0.5f64..0.4, len in 0.3f64..1.5, r in 20.0f64..110.0, g in tent_strategy(), seed in 0u64..1000) {
        let p = patch(&WindowUnion::interval(a, a + len), 120.0);
        prop_assume!(p.len() <= 200);
        for comb in [
            WeightedComb::unit(p.clone()),
            WeightedComb::from_internal_weight(p.clone(), g.clone()),
            WeightedComb::bernoulli(p.clone(), 0.6, seed).unwrap(),
            WeightedComb::from_internal_weight(p.clone(), InternalWeight::ComplexPhase { theta: RVec::scalar(a) }),
        ] {
            let fast = Autocorrelation::compute(&comb, r).unwrap();
            let slow = brute_force(&comb, r);
            prop_assert_eq!(fast.coefficients().len(), slow.len());
            for (k, v) in &slow {
                prop_assert!((fast.get(k) - v).norm() <= 1e-12 * v.norm().max(1.0));
            }
        }
    }

    #[test]
    fn hermitian_with_total_mass_at_zero(theta in -2.0f64..2.0, r in 50.0f64..400.0) {
        let p = patch(&WindowUnion::interval(0.0, 1.0), 400.0);
        let comb = WeightedComb::from_internal_weight(p, InternalWeight::ComplexPhase { theta: RVec::scalar(theta) });
        let g = Autocorrelation::compute(&comb, r).unwrap();
        for (k, v) in g.coefficients() {
            prop_assert!((g.get(&-*k) - v.conj()).norm() <= 1e-12);
        }
        let inside = comb
            .patch()
            .embedded()
            .iter()
            .zip(comb.weights())
            .filter(|(e, _)| e.physical.norm_inf() <= r)
            .map(|(_, w)| w.norm_sqr())
            .sum::<f64>();
        let at_zero = g.get(&IntPoint::zero(2));
        prop_assert!((at_zero.re - inside / (2.0 * r)).abs() <= 1e-12 && at_zero.im.abs() <= 1e-12);
    }

    #[test]
    fn support_stays_in_the_difference_window(a in -0.5f64..0.5, len in 0.2f64..1.5, r in 50.0f64..500.0) {
        let w = WindowUnion::interval(a, a + len);
        let g = Autocorrelation::compute(&WeightedComb::unit(patch(&w, r)), r).unwrap();
        let rep = support_check(&g, &w);
        prop_assert_eq!(rep.violations, 0);
    }

    #[test]
    fn decomposition_sums_back(a in -0.3f64..0.3, r in 100.0f64..600.0, seed in 0u64..100) {
        let w = WindowUnion::interval(a, a + 1.0);
        let p = patch(&w, r);
        for comb in [WeightedComb::unit(p.clone()), WeightedComb::bernoulli(p.clone(), 0.5, seed).unwrap()] {
            let kind = OracleKind::for_model(comb.model()).unwrap();
            let g = Autocorrelation::compute(&comb, r).unwrap();
            for corr in [EdgeCorrection::None, EdgeCorrection::BoxOverlap] {
                let dec = decompose(&g, &kind, &w, corr).unwrap();
                prop_assert!(dec.sum_deviation() <= 1e-12);
                for v in dec.gamma_s().values() {
                    prop_assert!(v.re >= 0.0 && v.im == 0.0);
                }
            }
        }
    }
}

#[test]
fn finite_autocorrelation_is_positive_definite() {
    let w = WindowUnion::interval(0.0, 1.0);
    let p = patch(&w, 300.0);
    let keys: Vec<IntPoint> = p
        .points()
        .iter()
        .zip(p.embedded())
        .filter(|(_, e)| e.physical.norm_inf() <= 30.0)
        .map(|(z, _)| *z)
        .collect();
    let tent = InternalWeight::Tent {
        center: RVec::scalar(0.3),
        halfwidth: RVec::scalar(0.8),
    };
    for comb in [
        WeightedComb::unit(p.clone()),
        WeightedComb::bernoulli(p.clone(), 0.4, 3).unwrap(),
        WeightedComb::from_internal_weight(p.clone(), tent),
        WeightedComb::from_internal_weight(
            p.clone(),
            InternalWeight::ComplexPhase {
                theta: RVec::scalar(0.7),
            },
        ),
    ] {
        let g = Autocorrelation::compute(&comb, 300.0).unwrap();
        let (lo, scale) = min_eigenvalue(&keys, |z| g.get(z));
        assert!(lo >= -1e-10 * scale, "{} {lo}", comb.model().label());
    }
}

#[test]
fn oracle_part_is_positive_definite() {
    let w = WindowUnion::interval(0.0, 1.0);
    let s = catalog::fibonacci();
    let p = patch(&w, 100.0);
    let keys: Vec<IntPoint> = p.points().to_vec();
    let tent = InternalWeight::Tent {
        center: RVec::scalar(0.5),
        halfwidth: RVec::scalar(0.6),
    };
    for kind in [
        OracleKind::FullModelSet,
        OracleKind::Bernoulli { p: 0.3 },
        OracleKind::InternalFunction(tent),
    ] {
        let (lo, scale) = min_eigenvalue(&keys, |z| gamma_s_oracle(&kind, &s, &w, z));
        assert!(lo >= -1e-9 * scale, "{} {lo}", kind.label());
    }
}

#[test]
fn edge_corrected_coefficients_converge() {
    let w = WindowUnion::interval(0.0, 1.0);
    let s = catalog::fibonacci();
    let comb = WeightedComb::unit(patch(&w, 5000.0));
    let corrected = |r: f64| Autocorrelation::compute(&comb, r).unwrap().edge_corrected();
    let zero = Complex64::new(0.0, 0.0);
    // one key set for both comparisons, sized by the smaller scale
    let two_scale = |a: &BTreeMap<IntPoint, Complex64>, b: &BTreeMap<IntPoint, Complex64>| {
        a.keys()
            .chain(b.keys())
            .filter(|k| s.physical(k).norm_inf() <= 1250.0 / 4.0)
            .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
    };
    let (g1, g2, g4) = (corrected(1250.0), corrected(2500.0), corrected(5000.0));
    let (e1, e2) = (two_scale(&g1, &g2), two_scale(&g2, &g4));
    assert!(e1 / e2 >= 1.5, "{e1} {e2}");
}
