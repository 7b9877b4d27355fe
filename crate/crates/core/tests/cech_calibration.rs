use std::time::Instant;

use deligne_core::cech::{cover_pn, hypercohomology, sheaf_cohomology, verify_splitting, Sheaf, TruncationPolicy};
use deligne_core::complexes::tangent_deligne;
use deligne_core::differentials::BaseTag;
use deligne_core::families::{elliptic_cover, standard_towers};
use deligne_core::scalars::Tower;

fn top() -> BaseTag {
    BaseTag::Level(0)
}

#[test]
fn line_bundles_on_p1() {
    let t = Instant::now();
    let c = cover_pn(1, &Tower::rationals()).unwrap();
    let pol = TruncationPolicy::default();
    for d in 0..=5 {
        let r = sheaf_cohomology(&c, &Sheaf::twisted(d, top()), &pol).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.dim(0), d as usize + 1, "H0(O({d}))");
    }
    for d in 2..=5 {
        let r = sheaf_cohomology(&c, &Sheaf::twisted(-d, top()), &pol).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.dim(1), d as usize - 1, "H1(O(-{d}))");
    }
    eprintln!("p1 line bundles: {:?}", t.elapsed());
}

#[test]
fn hodge_numbers_of_p2() {
    let t = Instant::now();
    let c = cover_pn(2, &Tower::rationals()).unwrap();
    let pol = TruncationPolicy::default();
    for r in 0..=2 {
        let rep = sheaf_cohomology(&c, &Sheaf::forms(r, top()), &pol).unwrap();
        assert!(rep.stabilized, "Omega^{r}");
        for q in 0..=2 {
            assert_eq!(rep.dim(q), usize::from(q == r as i64), "H{q}(Omega^{r})");
        }
    }
    eprintln!("p2 hodge: {:?}", t.elapsed());
}

#[test]
fn splitting_and_elliptic_curve() {
    let t = Instant::now();
    let pol = TruncationPolicy::default();
    let q = Tower::rationals();
    let p1 = cover_pn(1, &q).unwrap();
    let p2 = cover_pn(2, &q).unwrap();
    let e = elliptic_cover(&q).unwrap();
    for (cover, p) in [(&p1, 1), (&p2, 1), (&p2, 2), (&e, 1)] {
        let rep = verify_splitting(p, cover, &pol).unwrap();
        assert!(rep.pass(), "{} p={p}: {rep:?}", cover.name);
    }
    let cx = tangent_deligne(2, &p2.charts[0], top()).unwrap();
    let h = hypercohomology(&p2, &cx, &pol).unwrap();
    assert!(h.stabilized);
    assert_eq!(h.dim(3), 1);
    let o = sheaf_cohomology(&e, &Sheaf::forms(0, top()), &pol).unwrap();
    assert!(o.stabilized);
    assert_eq!(o.dim(1), 1);
    eprintln!("splitting + elliptic: {:?}", t.elapsed());
}

#[test]
fn cohomology_is_insensitive_to_the_ground_field() {
    let pol = TruncationPolicy::new(2, 2).unwrap();
    for (label, tower) in standard_towers().unwrap() {
        let c = cover_pn(2, &tower).unwrap();
        let base = BaseTag::Level(tower.step_count());
        let rep = sheaf_cohomology(&c, &Sheaf::forms(1, base), &pol).unwrap();
        assert_eq!(rep.dims, vec![0, 1, 0], "{label}");
    }
}
