use std::collections::BTreeSet;

use modelset::catalog;
use modelset::{AxisBox, IntPoint, PointSetPatch, SchemeBasis, WindowUnion};
use proptest::prelude::*;

fn scan_oracle(s: &SchemeBasis, phys: &AxisBox, int: &AxisBox, reach: i64) -> BTreeSet<IntPoint> {
    let n = s.n();
    let mut out = BTreeSet::new();
    let mut idx = vec![-reach; n];
    loop {
        let z = IntPoint::new(&idx);
        let e = s.embed(&z);
        if phys.contains_closed(&e.physical) && int.contains_closed(&e.internal) {
            out.insert(z);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] <= reach {
                break;
            }
            idx[k] = -reach;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_matches_scan_1d(lo in -20.0f64..20.0, len in 0.0f64..15.0, ilo in -1.5f64..1.0, ilen in 0.0f64..1.5) {
        for s in [catalog::fibonacci(), catalog::silver_mean()] {
            let phys = AxisBox::closed(&[lo], &[lo + len]);
            let int = AxisBox::closed(&[ilo], &[ilo + ilen]);
            let got: BTreeSet<IntPoint> = s.enumerate_lattice(&phys, &int).unwrap().into_iter().collect();
            prop_assert_eq!(got, scan_oracle(&s, &phys, &int, 40));
        }
    }

    #[test]
    fn enumeration_matches_scan_2d(x in -3.0f64..3.0, y in -3.0f64..3.0, u in -1.0f64..0.5, v in -1.0f64..0.5) {
        let s = catalog::box2d();
        let phys = AxisBox::closed(&[x, y], &[x + 3.0, y + 2.5]);
        let int = AxisBox::closed(&[u, v], &[u + 1.0, v + 1.2]);
        let got: BTreeSet<IntPoint> = s.enumerate_lattice(&phys, &int).unwrap().into_iter().collect();
        prop_assert_eq!(got, scan_oracle(&s, &phys, &int, 9));
    }

    #[test]
    fn enumerated_points_round_trip(lo in -500.0f64..500.0) {
        for s in [catalog::fibonacci(), catalog::box2d()] {
            let (d, m) = (s.d(), s.m());
            let phys = AxisBox::closed(&vec![lo; d], &vec![lo + 40.0; d]);
            let int = AxisBox::closed(&vec![-0.5; m], &vec![1.5; m]);
            for z in s.enumerate_lattice(&phys, &int).unwrap() {
                let e = s.embed(&z);
                prop_assert!(phys.contains_closed(&e.physical) && int.contains_closed(&e.internal));
                let y: Vec<f64> = e.physical.as_slice().iter().chain(e.internal.as_slice()).copied().collect();
                let back = s.preimage(&y);
                for (b, zi) in back.iter().zip(z.as_slice()) {
                    prop_assert!((b - *zi as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn dual_pairing_is_integral(zs in proptest::collection::vec(-50i64..=50, 4), ws in proptest::collection::vec(-50i64..=50, 4)) {
        for s in [catalog::fibonacci(), catalog::silver_mean(), catalog::box2d()] {
            let n = s.n();
            let dual = s.dual_basis();
            let p = dual.pairing(&s, &IntPoint::new(&zs[..n]), &IntPoint::new(&ws[..n]));
            prop_assert!((p - p.round()).abs() < 1e-9, "{}", p);
        }
    }

    #[test]
    fn model_sets_grow_with_the_window(a in 0.0f64..0.4, b in 0.6f64..1.0, grow in 0.0f64..0.3) {
        let s = catalog::fibonacci();
        let region = AxisBox::centered(1, 400.0);
        let small = PointSetPatch::model_set(&s, &WindowUnion::interval(a, b), &region).unwrap();
        let big = PointSetPatch::model_set(&s, &WindowUnion::interval(a - grow, b + grow), &region).unwrap();
        let big: BTreeSet<IntPoint> = big.points().iter().copied().collect();
        prop_assert!(small.points().iter().all(|z| big.contains(z)));
    }
}

#[test]
fn patch_points_sit_in_the_window() {
    for name in ["fibonacci", "silver_mean", "box2d"] {
        let (s, w) = catalog::scheme_by_name(name).unwrap();
        let r = if s.d() == 1 { 3000.0 } else { 40.0 };
        let p = PointSetPatch::model_set(&s, &w, &AxisBox::centered(s.d(), r)).unwrap();
        for (z, e) in p.points().iter().zip(p.embedded()) {
            assert!(w.contains(&e.internal));
            assert_eq!(s.embed(z), *e);
        }
        if name == "silver_mean" {
            assert_eq!(p.boundary_ambiguous(), 0);
        }
    }
}
