use rayon::prelude::*;
use voganlab::geometry::{dual_map, DualStrategy};
use voganlab::kl::KlEngine;
use voganlab::variety::Exponent;
use voganlab::verify::{dimension_vectors, verify_variety};
use voganlab::{build_variety, Family, GradedDims, Multisegment, OrbitTable, Segment};

#[test]
fn battery_over_small_gl_varieties() {
    let engine = KlEngine::new();
    let all = dimension_vectors(6, 5);
    assert_eq!(all.len(), 252);
    let failures: Vec<(String, String)> = all
        .par_iter()
        .flat_map_iter(|dims| {
            let r = verify_variety(dims, &engine, 0).unwrap_or_else(|e| panic!("{dims:?}: {e}"));
            let spec = format!("{:?}", dims.to_spec(Family::Gl).chains);
            r.checks.into_iter().filter(|c| !c.passed).map(move |c| (c.name, format!("{spec}: {:?}", c.counterexample)))
        })
        .collect();
    let other: Vec<_> = failures.iter().filter(|(name, _)| name != "dual-order-reversal").collect();
    assert!(other.is_empty(), "{other:#?}");
}

// a = arrow -1 -> 0 (2x1), b = arrow 0 -> 1 (1x2)
#[test]
fn duality_is_not_order_reversing_on_121() {
    let dims = GradedDims::single(Exponent::from_integer(-1), &[1, 2, 1]).unwrap();
    let v = build_variety(&dims, Family::Gl).unwrap();
    let t = OrbitTable::new(v.clone()).unwrap();
    let d = OrbitTable::new(v.dual()).unwrap();
    let find = |t: &OrbitTable, segs: Vec<Segment>| {
        let m = Multisegment::new(segs);
        t.orbits.iter().position(|o| o.multisegment == m).unwrap()
    };
    // C: a = 0, rk b = 1; D: rk a = rk b = 1, ba = 0
    let c = find(&t, vec![Segment::new(0, 0, 0), Segment::new(0, 1, 1), Segment::new(0, 1, 2)]);
    let dd = find(&t, vec![Segment::new(0, 0, 1), Segment::new(0, 1, 2)]);
    assert!(t.leq(c, dd));
    let map = dual_map(&t, &d, DualStrategy::Symbolic).unwrap();
    assert_eq!(d.orbits[map[c]].dim, 2);
    assert_eq!(d.orbits[map[dd]].dim, 3);
    assert!(d.leq(map[c], map[dd]));
    assert!(!d.leq(map[dd], map[c]));
}
