//! Affine covers of P¹, P² and plane curves `y²z^{e−2} = h(x, z)`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::ambient::{AVec, Ambient, Exps, Shape};
use crate::arith::{Field, Frac, Monomial, Poly, Ring};
use crate::differentials::{free_vars, BaseTag, DiffForm};
use crate::error::{Error, Result};
use crate::funcrings::{ring_make, FunctionRing, RingElem};
use crate::scalars::Tower;

/// An open `U_σ`: the ring of the chart `min σ` with the listed coordinates
/// inverted.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub simplex: u8,
    pub chart: usize,
    pub ring: FunctionRing,
    pub inverted: Vec<RingElem>,
}

/// Restriction `U_from ⊃ U_to`: images of the coordinates of chart
/// `min from` in the ring of chart `min to`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub from: u8,
    pub to: u8,
    pub images: Vec<RingElem>,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub name: String,
    pub tower: Tower,
    pub shape: Shape,
    pub charts: Vec<FunctionRing>,
    pub intersections: Vec<Intersection>,
    pub restrictions: Vec<Restriction>,
    /// Ambient expressions of each chart's coordinates.
    coords: Vec<Vec<(Exps, i64)>>,
    transitions: BTreeMap<(usize, usize), Vec<RingElem>>,
}

pub fn simplex_charts(s: u8) -> Vec<usize> {
    (0..8).filter(|i| s & (1 << i) != 0).collect()
}

pub fn simplex_name(s: u8) -> String {
    let mut out = String::from("U");
    for i in simplex_charts(s) {
        out.push_str(&i.to_string());
    }
    out
}

/// The standard cover of P¹ (`n = 1`, chart coordinates `z`, `w`) or P²
/// (`(x, y)`, `(u, v)`, `(s, r)`).
pub fn cover_pn(n: usize, tower: &Tower) -> Result<Cover> {
    let names: Vec<Vec<&str>> = match n {
        1 => vec![vec!["z"], vec!["w"]],
        2 => vec![vec!["x", "y"], vec!["u", "v"], vec!["s", "r"]],
        _ => return Err(Error::InvalidArgument(alloc::format!("projective space of dimension {n} is not supported"))),
    };
    let charts = names.iter().map(|v| ring_make(tower, v, None)).collect::<Result<Vec<_>>>()?;
    // chart i coordinate j (j ≠ i, ascending) is X_j / X_i = u_j / u_i, u_0 = 1
    let coords: Vec<Vec<(Exps, i64)>> = (0..=n)
        .map(|i| {
            (0..=n)
                .filter(|&j| j != i)
                .map(|j| {
                    let mut e = [0i32; 2];
                    if j > 0 {
                        e[j - 1] += 1;
                    }
                    if i > 0 {
                        e[i - 1] -= 1;
                    }
                    (e, 1)
                })
                .collect()
        })
        .collect();
    let name = alloc::format!("P{n} over {}", tower.describe());
    let transition = |charts: &[FunctionRing], a: usize, b: usize| -> Result<Vec<RingElem>> {
        // X_j/X_a = (X_j/X_b) / (X_a/X_b)
        let ring = &charts[b];
        let w = |k: usize| -> RingElem {
            if k == b {
                ring.one()
            } else {
                let pos = (0..=n).filter(|&j| j != b).position(|j| j == k).unwrap();
                ring.elem(ring.field().var(ring.var_index(pos)))
            }
        };
        (0..=n).filter(|&j| j != a).map(|j| w(j).div(&w(a))).collect()
    };
    build(name, tower, Shape::Projective { n }, charts, coords, n + 1, &transition)
}

/// The ring `k[x, y, z]` in which plane curves are written.
pub fn plane_ring(tower: &Tower) -> Result<FunctionRing> {
    ring_make(tower, &["x", "y", "z"], None)
}

/// Cover of the curve `F = 0` in P², `F` homogeneous of degree 2 or 3 of the
/// shape `c·y²z^{e−2} − c·h(x, z)` with `h` monic in `x`. Charts `z ≠ 0`
/// (coordinates `y, x`) and `y ≠ 0` (coordinates `c = z/y, a = x/y`).
pub fn cover_plane_curve(f: &RingElem) -> Result<Cover> {
    let ring = f.ring();
    let tower = ring.tower().clone();
    let nf = tower.nf();
    let nt = tower.trans_count();
    if ring.var_count() != 3 || ring.has_relation() || !f.frac().is_polynomial() {
        return Err(Error::UnsupportedCurve(String::from("expected a polynomial in x, y, z")));
    }
    let (vx, vy, vz) = (nt, nt + 1, nt + 2);
    let poly = nf.pscale(&f.frac().num, &nf.inv(&f.frac().den.constant_value(nf).unwrap()).unwrap());
    // group by the monomial in x, y, z; coefficients are polynomials in the transcendentals
    let mut groups: BTreeMap<(u16, u16, u16), Poly> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let key = (m.0[vx], m.0[vy], m.0[vz]);
        let mut tm = *m;
        tm.0[vx] = 0;
        tm.0[vy] = 0;
        tm.0[vz] = 0;
        let g = groups.entry(key).or_insert_with(Poly::zero);
        *g = nf.padd(g, &Poly::term(tm, c.clone()));
    }
    let degree = groups.keys().map(|(a, b, c)| a + b + c).max().unwrap_or(0);
    if groups.keys().any(|(a, b, c)| a + b + c != degree) {
        return Err(Error::UnsupportedCurve(String::from("polynomial is not homogeneous")));
    }
    let e = degree as usize;
    if !(2..=3).contains(&e) {
        return Err(Error::UnsupportedCurve(alloc::format!("degree {e}; only conics and cubics are supported")));
    }
    let ykey = (0u16, 2u16, degree - 2);
    let cy = groups.remove(&ykey).ok_or_else(|| Error::UnsupportedCurve(String::from("no y²z^{e−2} term")))?;
    if groups.keys().any(|(_, b, _)| *b > 0) {
        return Err(Error::UnsupportedCurve(String::from("y may only occur as y²z^{e−2}")));
    }
    let cy = cy.constant_value(nf).ok_or_else(|| Error::UnsupportedCurve(String::from("the y² coefficient must be a constant")))?;
    // h = −(F − cy·y²z^{e−2}) / cy
    let scale = nf.neg(&nf.inv(&cy).unwrap());
    let tf = tower.field();
    let mut h: Vec<Frac> = Vec::new();
    let mut hpolys: Vec<Poly> = Vec::new();
    for k in 0..=e {
        let c = groups.get(&(k as u16, 0, (e - k) as u16)).cloned().unwrap_or_else(Poly::zero);
        let c = nf.pscale(&c, &scale);
        hpolys.push(c.clone());
        if k < e {
            h.push(tf.from_poly(c));
        }
    }
    if !nf.pis_one(&hpolys[e]) {
        return Err(Error::UnsupportedCurve(String::from("h must be monic in x")));
    }
    // h(x, 1) squarefree over the ground field
    let mut hx = Poly::zero();
    for (k, c) in hpolys.iter().enumerate() {
        hx = nf.padd(&hx, &nf.pmul(c, &Poly::term(Monomial::var(vx, k as u16), nf.one())));
    }
    let g = nf.pgcd(&hx, &nf.pderiv(&hx, vx));
    if g.degree_in(vx) > 0 {
        return Err(Error::SingularRelation { point: String::from("(x : 0 : 1) with h(x, 1) = ∂h/∂x(x, 1) = 0") });
    }
    // chart 0: variables (y, x), relation h(x, 1) − y²
    let lift = |p: &Poly, map: &[(usize, usize)]| -> Poly {
        Poly::from_terms(
            p.terms().map(|(m, c)| {
                let mut out = *m;
                for &(from, _) in map {
                    out.0[from] = 0;
                }
                for &(from, to) in map {
                    out.0[to] += m.0[from];
                }
                (out, c.clone())
            }),
            nf,
        )
    };
    let (c0y, c0x) = (nt, nt + 1);
    let rel0 = nf.psub(&lift(&hx, &[(vx, c0x)]), &Poly::term(Monomial::var(c0y, 2), nf.one()));
    // chart 1: variables (c, a), relation h(a, c) − c^{e−2}
    let (c1c, c1a) = (nt, nt + 1);
    let mut rel1 = Poly::zero();
    for (k, c) in hpolys.iter().enumerate() {
        let mut m = Monomial::ONE;
        m.0[c1a] = k as u16;
        m.0[c1c] = (e - k) as u16;
        rel1 = nf.padd(&rel1, &nf.pmul(c, &Poly::term(m, nf.one())));
    }
    rel1 = nf.psub(&rel1, &Poly::term(Monomial::var(c1c, (e - 2) as u16), nf.one()));
    let chart0 = ring_make(&tower, &["y", "x"], Some(&rel0))?;
    let chart1 = ring_make(&tower, &["c", "a"], Some(&rel1))?;
    let charts = vec![chart0, chart1];
    let coords = vec![vec![([0, 1], 1), ([1, 0], 1)], vec![([0, -1], 1), ([1, -1], 1)]];
    let transition = |charts: &[FunctionRing], a: usize, b: usize| -> Result<Vec<RingElem>> {
        let r = &charts[b];
        let v0 = r.elem(r.field().var(r.var_index(0)));
        let v1 = r.elem(r.field().var(r.var_index(1)));
        match (a, b) {
            // (c, a) = (1/y, x/y)
            (1, 0) => Ok(vec![v0.inv()?, v1.div(&v0)?]),
            // (y, x) = (1/c, a/c)
            (0, 1) => Ok(vec![v0.inv()?, v1.div(&v0)?]),
            _ => Err(Error::InvalidArgument(String::from("no such transition"))),
        }
    };
    let label = if e == 3 { "cubic" } else { "conic" };
    let name = alloc::format!("{label} {} = 0 over {}", f, tower.describe());
    build(name, &tower, Shape::Curve { e, h }, charts, coords, 2, &transition)
}

type Transition<'a> = dyn Fn(&[FunctionRing], usize, usize) -> Result<Vec<RingElem>> + 'a;

fn build(
    name: String,
    tower: &Tower,
    shape: Shape,
    charts: Vec<FunctionRing>,
    coords: Vec<Vec<(Exps, i64)>>,
    count: usize,
    transition: &Transition<'_>,
) -> Result<Cover> {
    let max_size = if matches!(shape, Shape::Curve { .. }) { 2 } else { 3 };
    let simplices: Vec<u8> = (1u8..(1 << count)).filter(|s| s.count_ones() as usize <= max_size).collect();
    let mut intersections = Vec::new();
    for &s in &simplices {
        let cs = simplex_charts(s);
        let b = cs[0];
        let ring = charts[b].clone();
        let mut inverted = Vec::new();
        for &a in &cs[1..] {
            // the coordinate of chart b that vanishes off chart a
            let inv = match &shape {
                Shape::Projective { .. } => {
                    let pos = (0..count).filter(|&j| j != b).position(|j| j == a).unwrap();
                    ring.elem(ring.field().var(ring.var_index(pos)))
                }
                Shape::Curve { .. } => ring.elem(ring.field().var(ring.var_index(0))),
            };
            inverted.push(inv);
        }
        intersections.push(Intersection { simplex: s, chart: b, ring, inverted });
    }
    let mut transitions = BTreeMap::new();
    for a in 0..count {
        for b in 0..count {
            if a != b {
                transitions.insert((a, b), transition(&charts, a, b)?);
            }
        }
    }
    let mut restrictions = Vec::new();
    for &from in &simplices {
        for &to in &simplices {
            if from == to || from & to != from {
                continue;
            }
            let (a, b) = (from.trailing_zeros() as usize, to.trailing_zeros() as usize);
            let images = if a == b {
                let r = &charts[a];
                (0..r.var_count()).map(|i| r.elem(r.field().var(r.var_index(i)))).collect()
            } else {
                transitions[&(a, b)].clone()
            };
            restrictions.push(Restriction { from, to, images });
        }
    }
    let cover = Cover { name, tower: tower.clone(), shape, charts, intersections, restrictions, coords, transitions };
    cover.check()?;
    Ok(cover)
}

impl Cover {
    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    /// Simplices with `q + 1` charts.
    pub fn simplices(&self, q: usize) -> Vec<u8> {
        self.intersections.iter().map(|i| i.simplex).filter(|s| s.count_ones() as usize == q + 1).collect()
    }

    pub fn max_cech_degree(&self) -> usize {
        self.intersections.iter().map(|i| i.simplex.count_ones() as usize - 1).max().unwrap_or(0)
    }

    pub fn has_simplex(&self, s: u8) -> bool {
        self.intersections.iter().any(|i| i.simplex == s)
    }

    pub fn intersection(&self, s: u8) -> Option<&Intersection> {
        self.intersections.iter().find(|i| i.simplex == s)
    }

    pub fn top_level(&self) -> usize {
        self.tower.step_count()
    }

    /// The ambient algebra with the letters live over `base`.
    pub fn ambient(&self, base: BaseTag) -> Result<Ambient> {
        let BaseTag::Level(b) = base else {
            return Err(Error::BaseIncompatible(String::from("Čech computations need a base without ε")));
        };
        if b > self.tower.step_count() {
            return Err(Error::BaseIncompatible(alloc::format!("level {b} exceeds the tower")));
        }
        Ok(Ambient::new(self.shape.clone(), self.tower.field().clone(), self.tower.trans_above(b)))
    }

    /// Ambient expression of coordinate `k` of chart `i`.
    pub fn chart_coordinate(&self, amb: &Ambient, i: usize, k: usize) -> AVec {
        let (e, c) = self.coords[i][k];
        amb.mono(e, 0, amb.field.from_int(c))
    }

    /// Images of chart `a`'s coordinates in chart `b`'s ring.
    pub fn transition_images(&self, a: usize, b: usize) -> Result<Vec<RingElem>> {
        if a == b {
            let r = &self.charts[a];
            return Ok((0..r.var_count()).map(|i| r.elem(r.field().var(r.var_index(i)))).collect());
        }
        self.transitions.get(&(a, b)).cloned().ok_or(Error::InvalidArgument(String::from("charts do not meet")))
    }

    /// Checks that transitions compose (cocycle condition on coordinate
    /// generators) and that every restriction lands in the intersection ring
    /// with only the inverted coordinates in denominators.
    pub fn check(&self) -> Result<()> {
        let n = self.charts.len();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.has_simplex((1 << a) | (1 << b)) {
                    continue;
                }
                let ab = self.transition_images(a, b)?;
                let ba = self.transition_images(b, a)?;
                // a → b → a is the identity
                let back: Vec<RingElem> = ab.iter().map(|x| x.substitute(&ba, &self.charts[a])).collect::<Result<_>>()?;
                if back != self.transition_images(a, a)? {
                    return Err(Error::Mismatch(alloc::format!("transition {a}→{b}→{a} is not the identity")));
                }
                for c in 0..n {
                    if c == a || c == b || !self.has_simplex((1 << a) | (1 << b) | (1 << c)) {
                        continue;
                    }
                    let bc = self.transition_images(b, c)?;
                    let via: Vec<RingElem> = ab.iter().map(|x| x.substitute(&bc, &self.charts[c])).collect::<Result<_>>()?;
                    if via != self.transition_images(a, c)? {
                        return Err(Error::Mismatch(alloc::format!("transitions {a}→{b}→{c} and {a}→{c} differ")));
                    }
                }
            }
        }
        let nt = self.tower.trans_count();
        for r in &self.restrictions {
            let inter = self.intersection(r.to).unwrap();
            let allowed: u32 = inter.inverted.iter().map(|x| x.frac().num.var_mask()).fold(0, |a, b| a | b);
            for im in &r.images {
                let den = &im.frac().den;
                let m = den.min_monomial();
                let rest = den.div_monomial(&m);
                let ring_mask = m.var_mask() & !((1u32 << nt) - 1);
                if rest.var_mask() >> nt != 0 || ring_mask & !allowed != 0 {
                    return Err(Error::Mismatch(alloc::format!(
                        "restriction {}→{} has denominator {} outside the inverted coordinates",
                        simplex_name(r.from),
                        simplex_name(r.to),
                        im
                    )));
                }
            }
        }
        Ok(())
    }

    /// Ambient expression of a function on chart `min simplex`.
    pub fn function_to_ambient(&self, amb: &Ambient, simplex: u8, f: &RingElem) -> Result<AVec> {
        let inter = self.intersection(simplex).ok_or(Error::InvalidArgument(alloc::format!("no open {}", simplex_name(simplex))))?;
        if *f.ring() != inter.ring {
            return Err(Error::RingMismatch);
        }
        let g = if inter.chart == 0 { f.clone() } else { f.substitute(&self.transition_images(inter.chart, 0)?, &self.charts[0])? };
        self.frac_to_ambient(amb, &g)
    }

    fn frac_to_ambient(&self, amb: &Ambient, g: &RingElem) -> Result<AVec> {
        let nt = self.tower.trans_count();
        let nf = self.tower.nf();
        let tf = &amb.field;
        let fr = g.frac();
        let not_laurent = || Error::NotLaurent(g.to_string());
        let mut m = fr.den.min_monomial();
        for v in 0..nt {
            m.0[v] = 0;
        }
        let rest = fr.den.div_monomial(&m);
        if rest.var_mask() >> nt != 0 {
            return Err(not_laurent());
        }
        let mut groups: BTreeMap<Exps, Poly> = BTreeMap::new();
        for (mono, c) in fr.num.terms() {
            let e0 = mono.0[nt] as i32 - m.0[nt] as i32;
            let e1 = mono.0[nt + 1] as i32 - m.0[nt + 1] as i32;
            let exps = match self.shape {
                Shape::Projective { .. } => [e0, e1],
                // chart 0 variables are (y, x)
                Shape::Curve { .. } => {
                    if m.0[nt + 1] != 0 {
                        return Err(not_laurent());
                    }
                    [e1, e0]
                }
            };
            let mut t = *mono;
            for v in nt..crate::arith::MAX_VARS {
                t.0[v] = 0;
            }
            let p = groups.entry(exps).or_insert_with(Poly::zero);
            *p = nf.padd(p, &Poly::term(t, c.clone()));
        }
        let mut out = BTreeMap::new();
        for (exps, p) in groups {
            let c = tf.frac(p, rest.clone()).ok_or(Error::DivisionByZero)?;
            amb.push(&mut out, exps, 0, c);
        }
        Ok(out)
    }

    /// Ambient expression of a form on chart `min simplex` (base without ε).
    pub fn to_ambient(&self, amb: &Ambient, simplex: u8, w: &DiffForm) -> Result<AVec> {
        let inter = self.intersection(simplex).ok_or(Error::InvalidArgument(alloc::format!("no open {}", simplex_name(simplex))))?;
        if *w.ring() != inter.ring {
            return Err(Error::RingMismatch);
        }
        if w.base().is_dual() {
            return Err(Error::BaseIncompatible(String::from("forms over dual numbers have no Čech model")));
        }
        let ring = &inter.ring;
        let free = free_vars(ring);
        let nt = self.tower.trans_count();
        let letter_forms: Vec<AVec> = free
            .iter()
            .map(|&v| amb.d(&self.chart_coordinate(amb, inter.chart, v - nt)))
            .collect();
        let mut out = BTreeMap::new();
        for (mask, coef) in w.plain_terms() {
            let mut term = self.function_to_ambient(amb, simplex, &coef)?;
            let mut rest = mask;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let letter = if bit < free.len() {
                    letter_forms[bit].clone()
                } else {
                    let j = bit - free.len();
                    if !amb.live.contains(&j) {
                        return Err(Error::BaseIncompatible(String::from("letter not live over the ambient base")));
                    }
                    amb.mono([0, 0], amb.trans_bit(j), amb.field.one())
                };
                term = amb.mul(&term, &letter);
            }
            out = amb.add(&out, &term);
        }
        Ok(out)
    }

    /// Human-readable ambient monomial.
    pub fn format_monomial(&self, amb: &Ambient, exps: Exps, letters: u32) -> String {
        let mut parts: Vec<String> = Vec::new();
        let names: [&str; 2] = match self.shape {
            Shape::Projective { n: 1 } => ["z", ""],
            Shape::Projective { .. } => ["x", "y"],
            Shape::Curve { .. } => ["x", "y"],
        };
        for (k, e) in exps.iter().enumerate() {
            match *e {
                0 => {}
                1 => parts.push(names[k].to_string()),
                e => parts.push(alloc::format!("{}^{}", names[k], e)),
            }
        }
        for b in 0..32u32 {
            if letters & (1 << b) == 0 {
                continue;
            }
            if b < amb.geo() {
                parts.push(alloc::format!("d{}", names[b as usize]));
            } else {
                parts.push(alloc::format!("d{}", self.tower.trans_names[(b - amb.geo()) as usize]));
            }
        }
        if parts.is_empty() {
            String::from("1")
        } else {
            parts.join("*")
        }
    }

    pub fn format_ambient(&self, amb: &Ambient, v: &AVec) -> String {
        if v.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = v
            .iter()
            .map(|((e, l), c)| {
                let cs = self.tower.format_frac(c, &[]);
                let m = self.format_monomial(amb, *e, *l);
                if m == "1" {
                    cs
                } else if cs == "1" {
                    m
                } else {
                    alloc::format!("({cs})*{m}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// The same cover over a tower extending this one.
    pub fn over(&self, tower: &Tower) -> Result<Cover> {
        if !tower.extends(&self.tower) {
            return Err(Error::NotAnEnlargement { from: self.tower.describe(), to: tower.describe() });
        }
        match &self.shape {
            Shape::Projective { n } => cover_pn(*n, tower),
            Shape::Curve { e, h } => {
                let ring = plane_ring(tower)?;
                let x = ring.var("x")?;
                let y = ring.var("y")?;
                let z = ring.var("z")?;
                let mut f = &(&y * &y) * &z.pow(*e as i64 - 2)?;
                f = &f - &x.pow(*e as i64)?;
                for (k, hk) in h.iter().enumerate() {
                    let c = embed_scalar(&ring, hk, &self.tower)?;
                    let t = &(&c * &x.pow(k as i64)?) * &z.pow((*e - k) as i64)?;
                    f = &f - &t;
                }
                cover_plane_curve(&f)
            }
        }
    }
}

/// A scalar of `from` (transcendentals first) as a scalar of `to`, which
/// extends `from` by later steps.
pub fn embed_frac(c: &Frac, from: &Tower, to: &Tower) -> Result<Frac> {
    let nf_from = from.nf();
    let nf = to.nf();
    if nf_from.dim() != nf.dim() && from.trans_count() > 0 {
        return Err(Error::InvalidArgument(String::from("cannot embed transcendental coefficients across algebraic steps")));
    }
    let emb = |p: &Poly| Poly::from_terms(p.terms().map(|(m, c)| (*m, nf.embed_from(c))), nf);
    to.field().frac(emb(&c.num), emb(&c.den)).ok_or(Error::DivisionByZero)
}

fn embed_scalar(ring: &FunctionRing, c: &Frac, from: &Tower) -> Result<RingElem> {
    Ok(ring.elem(embed_frac(c, from, ring.tower())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_tower, StepSpec};

    #[test]
    fn projective_covers_are_consistent() {
        let q = Tower::rationals();
        let p1 = cover_pn(1, &q).unwrap();
        assert_eq!(p1.intersections.len(), 3);
        let p2 = cover_pn(2, &q).unwrap();
        assert_eq!(p2.intersections.len(), 7);
        assert_eq!(p2.simplices(2), vec![7]);
        let s2 = make_tower(&[StepSpec::algebraic_rational("sqrt2", &[-2, 0, 1])]).unwrap();
        assert!(cover_pn(2, &s2).is_ok());
    }

    #[test]
    fn elliptic_cover() {
        let q = Tower::rationals();
        let r = plane_ring(&q).unwrap();
        let (x, y, z) = (r.var("x").unwrap(), r.var("y").unwrap(), r.var("z").unwrap());
        let f = &(&(&y * &y) * &z) - &(&(&(&x * &x) * &x) - &(&(&x * &z) * &z));
        let f = &f - &(&(&z * &z) * &z);
        let c = cover_plane_curve(&f).unwrap();
        assert_eq!(c.charts.len(), 2);
        assert_eq!(c.max_cech_degree(), 1);
    }

    #[test]
    fn cuspidal_cubic_rejected() {
        let q = Tower::rationals();
        let r = plane_ring(&q).unwrap();
        let (x, y, z) = (r.var("x").unwrap(), r.var("y").unwrap(), r.var("z").unwrap());
        let f = &(&(&y * &y) * &z) - &(&(&x * &x) * &x);
        assert!(matches!(cover_plane_curve(&f), Err(Error::SingularRelation { .. })));
    }

    #[test]
    fn form_to_ambient() {
        let q = Tower::rationals();
        let p1 = cover_pn(1, &q).unwrap();
        let amb = p1.ambient(BaseTag::Level(0)).unwrap();
        let w = p1.charts[1].var("w").unwrap();
        let dw = crate::differentials::d(&w, BaseTag::Level(0)).unwrap();
        // w = 1/z, dw = −z^{-2} dz
        let v = p1.to_ambient(&amb, 0b10, &dw).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.keys().next().unwrap(), &([-2, 0], 1));
    }
}
