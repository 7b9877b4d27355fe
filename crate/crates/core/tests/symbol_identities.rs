use deligne_core::differentials::BaseTag;
use deligne_core::families::{eps_symbols, family_ring, relation_instances, rng_for, standard_towers};
use deligne_core::milnor::{beta, beta_via_truncation, eps_to_absolute, relation_check, tilde_dlog};

const SEED: u64 = 20261016;

#[test]
fn tilde_dlog_is_signed_derivative_of_beta() {
    for (label, tower) in standard_towers().unwrap() {
        let ring = family_ring(&tower).unwrap();
        for p in 2..=4 {
            for s in eps_symbols(&ring, p, 50, &mut rng_for(SEED, &label, p)).unwrap() {
                let b = beta(&s).unwrap();
                let sign = if p % 2 == 1 { 1 } else { -1 };
                assert_eq!(tilde_dlog(&s).unwrap(), b.d().unwrap().scale_int(sign), "{label} p={p} {s}");
            }
        }
    }
}

#[test]
fn truncation_route_agrees_with_beta() {
    for (label, tower) in standard_towers().unwrap() {
        let ring = family_ring(&tower).unwrap();
        for p in 2..=4 {
            for s in eps_symbols(&ring, p, 50, &mut rng_for(SEED, &label, p)).unwrap() {
                assert_eq!(beta_via_truncation(&s).unwrap(), beta(&s).unwrap(), "{label} p={p} {s}");
            }
        }
    }
}

#[test]
fn absolute_forms_base_change_to_beta() {
    for (label, tower) in standard_towers().unwrap() {
        let ring = family_ring(&tower).unwrap();
        let top = BaseTag::Level(tower.step_count());
        for p in 2..=4 {
            for s in eps_symbols(&ring, p, 50, &mut rng_for(SEED, &label, p)).unwrap() {
                let abs = eps_to_absolute(&s).unwrap();
                assert_eq!(abs.base_change(top).unwrap(), beta(&s).unwrap(), "{label} p={p} {s}");
            }
        }
    }
}

#[test]
fn relations_vanish_under_all_maps() {
    let mut total = 0;
    for (label, tower) in standard_towers().unwrap() {
        let ring = family_ring(&tower).unwrap();
        for inst in relation_instances(&ring, 40, &mut rng_for(SEED, &label, 0)).unwrap() {
            let rep = relation_check(&inst).unwrap();
            assert!(rep.pass(), "{label}: {rep:?}");
            total += 1;
        }
    }
    assert!(total >= 100);
}
