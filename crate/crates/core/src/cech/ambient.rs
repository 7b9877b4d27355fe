//! One coordinate system shared by every open of a cover.
//!
//! Projective space: Laurent monomials `u^b` in the coordinates of the first
//! chart. Plane curves `y²z^{e−2} = h(x, z)`: monomials `xⁱ yʲ` with `i < e`,
//! `j ∈ ℤ`, powers `x^e` being rewritten through the equation. Both carry
//! wedge monomials in the letters: the geometric ones (`du₁, du₂` or `dx`)
//! followed by `dt_j` for every transcendental `t_j` live above the base.
//!
//! Restriction between opens is the identity in these coordinates, which
//! makes the Čech differential a pure relabelling.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::{Field, Frac, FracField, Ring};
use crate::linalg::axpy;

pub type Exps = [i32; 2];
pub type AVec = BTreeMap<(Exps, u32), Frac>;

#[derive(Clone, Debug)]
pub enum Shape {
    Projective { n: usize },
    /// `y²z^{e−2} = x^e + h[e−1]·x^{e−1}z + … + h[0]·z^e`.
    Curve { e: usize, h: Vec<Frac> },
}

impl Shape {
    pub fn geometric_letters(&self) -> u32 {
        match self {
            Shape::Projective { n } => *n as u32,
            Shape::Curve { .. } => 1,
        }
    }
}

/// Sign of moving the letters of `b` to the right of those of `a`.
pub fn merge_sign(a: u32, b: u32) -> bool {
    let mut parity = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        parity += (b & ((1u32 << i) - 1)).count_ones();
    }
    parity % 2 == 1
}

#[derive(Clone, Debug)]
pub struct Ambient {
    pub shape: Shape,
    pub field: FracField,
    /// Global indices of the transcendentals whose letters are live.
    pub live: Vec<usize>,
    geo: u32,
    /// `dy` for curves.
    dy: AVec,
}

impl Ambient {
    pub fn new(shape: Shape, field: FracField, live: Vec<usize>) -> Ambient {
        let geo = shape.geometric_letters();
        let mut amb = Ambient { shape, field, live, geo, dy: BTreeMap::new() };
        if let Shape::Curve { e, h } = &amb.shape {
            // dy = (h'(x) dx + Σ ∂h/∂t dt) / 2y
            let (e, h) = (*e, h.clone());
            let f = &amb.field;
            let half = f.inv(&f.from_int(2)).unwrap();
            let mut dy = BTreeMap::new();
            let lead = f.mul(&half, &f.from_int(e as i64));
            axpy(f, &mut dy, &lead, &single([e as i32 - 1, -1], 1, f.one()));
            for (k, hk) in h.iter().enumerate() {
                if k > 0 {
                    let c = f.mul(&half, &f.mul(hk, &f.from_int(k as i64)));
                    axpy(f, &mut dy, &c, &single([k as i32 - 1, -1], 1, f.one()));
                }
                for &j in &amb.live {
                    let c = f.mul(&half, &f.deriv(hk, j));
                    axpy(f, &mut dy, &c, &single([k as i32, -1], 1 << (amb.geo + j as u32), f.one()));
                }
            }
            amb.dy = dy;
        }
        amb
    }

    pub fn geo(&self) -> u32 {
        self.geo
    }

    pub fn trans_bit(&self, j: usize) -> u32 {
        1 << (self.geo + j as u32)
    }

    pub fn is_trans_bit(&self, letters: u32) -> bool {
        letters >> self.geo != 0
    }

    pub fn mono(&self, exps: Exps, letters: u32, c: Frac) -> AVec {
        let mut v = BTreeMap::new();
        self.push(&mut v, exps, letters, c);
        v
    }

    pub fn one(&self) -> AVec {
        self.mono([0, 0], 0, self.field.one())
    }

    /// Adds `c·(monomial)` to `acc`, rewriting `x^e` on curves.
    pub fn push(&self, acc: &mut AVec, exps: Exps, letters: u32, c: Frac) {
        let f = &self.field;
        if f.is_zero(&c) {
            return;
        }
        if let Shape::Curve { e, h } = &self.shape {
            let e = *e as i32;
            if exps[0] >= e {
                // x^e = y² − Σ h_k x^k
                let rest = exps[0] - e;
                self.push(acc, [rest, exps[1] + 2], letters, c.clone());
                for (k, hk) in h.iter().enumerate() {
                    if !f.is_zero(hk) {
                        self.push(acc, [rest + k as i32, exps[1]], letters, f.neg(&f.mul(&c, hk)));
                    }
                }
                return;
            }
        }
        let key = (exps, letters);
        match acc.get_mut(&key) {
            Some(x) => {
                *x = f.add(x, &c);
                if f.is_zero(x) {
                    acc.remove(&key);
                }
            }
            None => {
                acc.insert(key, c);
            }
        }
    }

    pub fn add(&self, a: &AVec, b: &AVec) -> AVec {
        let mut out = a.clone();
        axpy(&self.field, &mut out, &self.field.one(), b);
        out
    }

    pub fn scale(&self, c: &Frac, a: &AVec) -> AVec {
        let mut out = BTreeMap::new();
        axpy(&self.field, &mut out, c, a);
        out
    }

    /// Product of forms (wedge on letters).
    pub fn mul(&self, a: &AVec, b: &AVec) -> AVec {
        let f = &self.field;
        let mut out = BTreeMap::new();
        for ((ea, la), ca) in a {
            for ((eb, lb), cb) in b {
                if la & lb != 0 {
                    continue;
                }
                let mut c = f.mul(ca, cb);
                if merge_sign(*la, *lb) {
                    c = f.neg(&c);
                }
                self.push(&mut out, [ea[0] + eb[0], ea[1] + eb[1]], la | lb, c);
            }
        }
        out
    }

    /// `d` of a monomial function `u^b` or `xⁱyʲ`.
    fn d_monomial(&self, exps: Exps) -> AVec {
        let f = &self.field;
        let mut out = BTreeMap::new();
        match &self.shape {
            Shape::Projective { n } => {
                for k in 0..*n {
                    if exps[k] != 0 {
                        let mut m = exps;
                        m[k] -= 1;
                        self.push(&mut out, m, 1 << k, f.from_int(exps[k] as i64));
                    }
                }
            }
            Shape::Curve { .. } => {
                if exps[0] != 0 {
                    self.push(&mut out, [exps[0] - 1, exps[1]], 1, f.from_int(exps[0] as i64));
                }
                if exps[1] != 0 {
                    let m = self.mono([exps[0], exps[1] - 1], 0, f.from_int(exps[1] as i64));
                    out = self.add(&out, &self.mul(&m, &self.dy));
                }
            }
        }
        out
    }

    /// Exterior derivative over the base: coefficients are differentiated in
    /// the live transcendentals only.
    pub fn d(&self, v: &AVec) -> AVec {
        let f = &self.field;
        let mut out = BTreeMap::new();
        for ((exps, letters), c) in v {
            let tail = self.mono([0, 0], *letters, c.clone());
            let dm = self.d_monomial(*exps);
            if !dm.is_empty() {
                axpy(f, &mut out, &f.one(), &self.mul(&dm, &tail));
            }
            for &j in &self.live {
                let dc = f.deriv(c, j);
                if f.is_zero(&dc) {
                    continue;
                }
                let w = self.mono(*exps, self.trans_bit(j), dc);
                axpy(f, &mut out, &f.one(), &self.mul(&w, &self.mono([0, 0], *letters, f.one())));
            }
        }
        out
    }

    /// Drops every term carrying a letter of a transcendental in `kill`.
    pub fn drop_letters(&self, v: &AVec, kill: &[usize]) -> AVec {
        let mask: u32 = kill.iter().map(|&j| self.trans_bit(j)).fold(0, |a, b| a | b);
        v.iter().filter(|((_, l), _)| l & mask == 0).map(|(k, c)| (*k, c.clone())).collect()
    }

    /// Torus weight `b + Σ_{letters} e_k` (projective space only).
    pub fn weight(&self, exps: Exps, letters: u32) -> Exps {
        let mut w = exps;
        for (k, wk) in w.iter_mut().enumerate() {
            if letters & (1 << k) != 0 && (k as u32) < self.geo {
                *wk += 1;
            }
        }
        w
    }
}

fn single(exps: Exps, letters: u32, c: Frac) -> AVec {
    let mut v = BTreeMap::new();
    v.insert((exps, letters), c);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::NumberField;

    fn elliptic() -> Ambient {
        let f = FracField::new(NumberField::rationals(), 0, None);
        // y² = x³ − x + 1
        let h = alloc::vec![f.from_int(1), f.from_int(-1), f.from_int(0)];
        Ambient::new(Shape::Curve { e: 3, h }, f, Vec::new())
    }

    #[test]
    fn curve_reduction() {
        let a = elliptic();
        let x = a.mono([1, 0], 0, a.field.one());
        let x3 = a.mul(&x, &a.mul(&x, &x));
        // x³ = y² + x − 1
        let mut expect = a.mono([0, 2], 0, a.field.one());
        a.push(&mut expect, [1, 0], 0, a.field.one());
        a.push(&mut expect, [0, 0], 0, a.field.from_int(-1));
        assert_eq!(x3, expect);
    }

    #[test]
    fn d_squares_to_zero() {
        let a = elliptic();
        let g = a.mono([2, -3], 0, a.field.from_int(5));
        assert!(a.d(&a.d(&g)).is_empty());
        let f = FracField::new(NumberField::rationals(), 0, None);
        let p = Ambient::new(Shape::Projective { n: 2 }, f, Vec::new());
        let g = p.mono([2, -1], 0, p.field.one());
        assert!(p.d(&p.d(&g)).is_empty());
        assert!(!p.d(&g).is_empty());
    }

    #[test]
    fn derivative_respects_relation() {
        // d(x³) computed on the reduced form y² + x − 1 equals 3x² dx
        let a = elliptic();
        let f = &a.field;
        let x = a.mono([1, 0], 0, f.one());
        let x3 = a.mul(&x, &a.mul(&x, &x));
        let expect = a.mul(&a.mono([2, 0], 0, f.from_int(3)), &a.mono([0, 0], 1, f.one()));
        assert_eq!(a.d(&x3), expect);
    }
}
