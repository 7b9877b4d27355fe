//! Seeded random inputs for the symbol identities: small rational functions
//! in `x, y, z, w` over ℚ, ℚ(√2) and ℚ(t).

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{cover_plane_curve, plane_ring, Cover};
use crate::error::Result;
use crate::funcrings::{ring_make, DualElem, FunctionRing, RingElem};
use crate::milnor::{EpsSymbol, RelationInstance};
use crate::scalars::{make_tower, StepSpec, Tower};

pub const FAMILY_VARS: [&str; 4] = ["x", "y", "z", "w"];

/// `(label, tower)` for ℚ, ℚ(√2), ℚ(t).
pub fn standard_towers() -> Result<Vec<(String, Tower)>> {
    Ok(alloc::vec![
        (String::from("Q"), Tower::rationals()),
        (String::from("Q(sqrt2)"), make_tower(&[StepSpec::algebraic_rational("sqrt2", &[-2, 0, 1])])?),
        (String::from("Q(t)"), make_tower(&[StepSpec::transcendental("t")])?),
    ])
}

/// The cubic `y²z = x³ − xz² + z³`.
pub fn elliptic_cover(tower: &Tower) -> Result<Cover> {
    let ring = plane_ring(tower)?;
    let (x, y, z) = (ring.var("x")?, ring.var("y")?, ring.var("z")?);
    let f = &(&(&(&y * &y) * &z) - &(&(&x * &x) * &x)) + &(&(&x * &z) * &z);
    cover_plane_curve(&(&f - &(&(&z * &z) * &z)))
}

pub fn family_ring(tower: &Tower) -> Result<FunctionRing> {
    ring_make(tower, &FAMILY_VARS, None)
}

/// Deterministic stream for a seed and a sub-family label.
pub fn rng_for(seed: u64, label: &str, p: usize) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain([p as u8]) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

struct Gen<'a> {
    ring: &'a FunctionRing,
    vars: Vec<RingElem>,
    gens: Vec<RingElem>,
}

impl<'a> Gen<'a> {
    fn new(ring: &'a FunctionRing) -> Gen<'a> {
        let vars = FAMILY_VARS.iter().filter_map(|v| ring.var(v).ok()).collect();
        let gens = ring.tower().names().iter().filter_map(|n| ring.var(n).ok()).collect();
        Gen { ring, vars, gens }
    }

    fn coeff(&self, rng: &mut ChaCha8Rng) -> RingElem {
        let mut c = self.ring.int(pick_nonzero(rng, 3));
        if !self.gens.is_empty() && rng.gen_bool(0.4) {
            let g = &self.gens[rng.gen_range(0..self.gens.len())];
            c = &c * g;
            if rng.gen_bool(0.5) {
                c = &c + &self.ring.int(pick_nonzero(rng, 2));
            }
        }
        c
    }

    fn monomial(&self, rng: &mut ChaCha8Rng) -> RingElem {
        let mut m = self.ring.one();
        for _ in 0..rng.gen_range(0..=2) {
            m = &m * &self.vars[rng.gen_range(0..self.vars.len())];
        }
        m
    }

    fn poly(&self, rng: &mut ChaCha8Rng) -> RingElem {
        loop {
            let mut f = self.ring.zero();
            for _ in 0..rng.gen_range(1..=2) {
                f = &f + &(&self.coeff(rng) * &self.monomial(rng));
            }
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// A nonzero rational function.
    fn unit(&self, rng: &mut ChaCha8Rng) -> RingElem {
        let num = self.poly(rng);
        if rng.gen_bool(0.6) {
            return num;
        }
        num.div(&self.poly(rng)).expect("nonzero denominator")
    }

    fn any(&self, rng: &mut ChaCha8Rng) -> RingElem {
        if rng.gen_bool(0.1) {
            self.ring.zero()
        } else {
            self.unit(rng)
        }
    }

    fn dual_unit(&self, rng: &mut ChaCha8Rng) -> DualElem {
        let slope = if rng.gen_bool(0.3) { self.ring.zero() } else { self.any(rng) };
        DualElem::new(self.unit(rng), slope).expect("same ring")
    }
}

fn pick_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// `count` EpsSymbols of length `p`, each with one or two factors.
pub fn eps_symbols(ring: &FunctionRing, p: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<EpsSymbol>> {
    let g = Gen::new(ring);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut s = EpsSymbol::empty(ring, p);
        for _ in 0..rng.gen_range(1..=2) {
            let h = g.unit(rng);
            let tail = (1..p).map(|_| g.unit(rng)).collect();
            let e = [1, 1, -1, 2][rng.gen_range(0..4)];
            s.push(h, tail, e)?;
        }
        out.push(s);
    }
    Ok(out)
}

/// `count` relation instances cycling through the three kinds, with
/// symbol lengths 2 to 4.
pub fn relation_instances(ring: &FunctionRing, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<RelationInstance>> {
    let g = Gen::new(ring);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = out.len() % 3;
        let extra = rng.gen_range(0..=2);
        let rest: Vec<DualElem> = (0..extra).map(|_| g.dual_unit(rng)).collect();
        let inst = match kind {
            0 => {
                let u = g.dual_unit(rng);
                if (&g.ring.one() - &u.body).is_zero() {
                    continue;
                }
                RelationInstance::steinberg(&u, &rest)?
            }
            1 => {
                let mut rest = rest;
                if rest.is_empty() {
                    rest.push(g.dual_unit(rng));
                }
                RelationInstance::multilinearity(&g.dual_unit(rng), &g.dual_unit(rng), &rest)?
            }
            _ => RelationInstance::graded_commutativity(&g.dual_unit(rng), &g.dual_unit(rng), &rest)?,
        };
        out.push(inst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let towers = standard_towers().unwrap();
        let r = family_ring(&towers[2].1).unwrap();
        let a = eps_symbols(&r, 3, 5, &mut rng_for(7, "Q(t)", 3)).unwrap();
        let b = eps_symbols(&r, 3, 5, &mut rng_for(7, "Q(t)", 3)).unwrap();
        assert_eq!(a, b);
        let c = eps_symbols(&r, 3, 5, &mut rng_for(8, "Q(t)", 3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn transcendental_appears() {
        let towers = standard_towers().unwrap();
        let r = family_ring(&towers[2].1).unwrap();
        let s = eps_symbols(&r, 2, 30, &mut rng_for(1, "Q(t)", 2)).unwrap();
        let shown: String = s.iter().map(|e| alloc::format!("{e}")).collect();
        assert!(shown.contains('t'));
    }
}
