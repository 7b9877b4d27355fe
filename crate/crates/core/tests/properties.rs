use proptest::prelude::*;

use deligne_core::differentials::{d, dlog, BaseTag};
use deligne_core::families::{eps_symbols, family_ring, rng_for, standard_towers};
use deligne_core::funcrings::{ring_make, FunctionRing, RingElem};
use deligne_core::milnor::{beta, beta_via_truncation, tilde_dlog};
use deligne_core::scalars::{make_tower, Scalar, StepSpec, Tower};

fn tower(which: usize) -> Tower {
    match which {
        0 => Tower::rationals(),
        1 => make_tower(&[StepSpec::algebraic_rational("a", &[-2, 0, 1])]).unwrap(),
        _ => make_tower(&[StepSpec::transcendental("t")]).unwrap(),
    }
}

fn ring(which: usize) -> FunctionRing {
    ring_make(&tower(which), &["x", "y"], None).unwrap()
}

type Terms = Vec<(i64, u8, u8)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((-4i64..=4, 0u8..3, 0u8..3), 1..4)
}

/// Polynomial in x, y, plus the tower generator when there is one.
fn poly(r: &FunctionRing, ts: &Terms) -> RingElem {
    let (x, y) = (r.var("x").unwrap(), r.var("y").unwrap());
    let g = r.tower().names().first().map(|n| r.var(n).unwrap()).unwrap_or_else(|| r.one());
    let mut acc = r.int(1);
    for (i, &(c, a, b)) in ts.iter().enumerate() {
        let mut m = r.int(c).try_mul(&x.pow(i64::from(a)).unwrap()).unwrap().try_mul(&y.pow(i64::from(b)).unwrap()).unwrap();
        if i % 2 == 1 {
            m = m.try_mul(&g).unwrap();
        }
        acc = acc.try_add(&m).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn d_squares_to_zero(which in 0usize..3, ts in terms(), base in 0usize..2) {
        let r = ring(which);
        let base = BaseTag::Level(base.min(r.tower().step_count()));
        let f = poly(&r, &ts);
        prop_assert!(d(&f, base).unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(which in 0usize..3, a in terms(), b in terms()) {
        let r = ring(which);
        let top = BaseTag::Level(r.tower().step_count());
        let (f, g) = (poly(&r, &a), poly(&r, &b));
        let lhs = d(&f.try_mul(&g).unwrap(), top).unwrap();
        let rhs = d(&g, top).unwrap().scale(&f).unwrap().add(&d(&f, top).unwrap().scale(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dlog_is_additive(which in 0usize..3, a in terms(), b in terms()) {
        let r = ring(which);
        let (f, g) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!f.is_zero() && !g.is_zero());
        for base in [BaseTag::Level(0), BaseTag::Level(r.tower().step_count())] {
            let lhs = dlog(&f.try_mul(&g).unwrap(), base).unwrap();
            prop_assert_eq!(lhs, dlog(&f, base).unwrap().add(&dlog(&g, base).unwrap()).unwrap());
        }
    }

    #[test]
    fn one_forms_anticommute(which in 0usize..3, a in terms(), b in terms()) {
        let r = ring(which);
        let base = BaseTag::Level(0);
        let (df, dg) = (d(&poly(&r, &a), base).unwrap(), d(&poly(&r, &b), base).unwrap());
        prop_assert_eq!(df.wedge(&dg).unwrap(), dg.wedge(&df).unwrap().neg());
        prop_assert!(df.wedge(&df).unwrap().is_zero());
    }

    #[test]
    fn quadratic_field_inverses(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, e in -9i64..=9) {
        prop_assume!(c != 0 || e != 0);
        let k = tower(1);
        let s = Scalar::generator(&k, "a").unwrap();
        let u = Scalar::from_int(&k, a).add(&s.mul(&Scalar::from_int(&k, b)).unwrap()).unwrap();
        let v = Scalar::from_int(&k, c).add(&s.mul(&Scalar::from_int(&k, e)).unwrap()).unwrap();
        let back = u.mul(&v).unwrap().mul(&v.inv().unwrap()).unwrap();
        prop_assert!(back.sub(&u).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn symbol_identities_for_any_seed(seed in any::<u64>(), which in 0usize..3, p in 2usize..4) {
        let (label, k) = standard_towers().unwrap().swap_remove(which);
        let r = family_ring(&k).unwrap();
        for s in eps_symbols(&r, p, 4, &mut rng_for(seed, &label, p)).unwrap() {
            let b = beta(&s).unwrap();
            let sign = if p % 2 == 1 { 1 } else { -1 };
            prop_assert_eq!(tilde_dlog(&s).unwrap(), b.d().unwrap().scale_int(sign));
            prop_assert_eq!(beta_via_truncation(&s).unwrap(), b);
        }
    }
}
