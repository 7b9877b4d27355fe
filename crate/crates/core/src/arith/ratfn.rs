//! Fractions of polynomials in lowest terms, optionally in the function field
//! of a hypersurface cut out by one relation monic in a distinguished variable.
//!
//! Normal form: the numerator is reduced modulo the relation, the denominator
//! does not involve the relation variable, numerator and denominator are
//! coprime and the denominator is monic in graded-lex order.
//!
//! Denominators also carry a factorization into pairwise coprime monic
//! factors. Arithmetic works on the factor lists, so cancellation only ever
//! needs gcds against single (small) factors instead of whole denominators.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::{Hash, Hasher};

use super::numfield::{NfElem, NumberField};
use super::poly::{Monomial, Poly, MAX_VARS};
use super::{Field, Ring, Q};

type Factors = Vec<(Poly, u32)>;

#[derive(Clone, Debug)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
    fac: Factors,
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        self.num == o.num && self.den == o.den
    }
}

impl Eq for Frac {}

impl Hash for Frac {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.num.hash(h);
        self.den.hash(h);
    }
}

impl Frac {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Pairwise coprime monic factors whose product is the denominator.
    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.fac
    }
}

/// A relation `F` monic of degree `degree` in variable `var`.
#[derive(Clone, PartialEq, Debug)]
pub struct Relation {
    pub var: usize,
    pub poly: Poly,
    pub degree: u16,
}

impl Relation {
    /// Scales `poly` so its leading coefficient in `var` is 1; `None` when that
    /// coefficient is not a constant.
    pub fn new(nf: &NumberField, poly: &Poly, var: usize) -> Option<Relation> {
        let degree = poly.degree_in(var);
        if degree == 0 {
            return None;
        }
        let cs = nf.coeffs_in(poly, var);
        let lead = cs[degree as usize].constant_value(nf)?;
        let inv = nf.inv(&lead)?;
        Some(Relation { var, poly: nf.pscale(poly, &inv), degree })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FracField {
    pub nf: NumberField,
    pub nvars: usize,
    pub relation: Option<Relation>,
}

impl FracField {
    pub fn new(nf: NumberField, nvars: usize, relation: Option<Relation>) -> FracField {
        FracField { nf, nvars, relation }
    }

    fn poly_frac(&self, num: Poly) -> Frac {
        Frac { num, den: self.nf.pone(), fac: Vec::new() }
    }

    pub fn from_poly(&self, p: Poly) -> Frac {
        match &self.relation {
            None => self.poly_frac(p),
            Some(r) => self.poly_frac(self.nf.preduce(&p, &r.poly, r.var)),
        }
    }

    pub fn from_nf(&self, c: NfElem) -> Frac {
        self.poly_frac(Poly::constant(c))
    }

    pub fn from_rational(&self, c: Q) -> Frac {
        self.from_nf(self.nf.from_rational(c))
    }

    pub fn from_int(&self, n: i64) -> Frac {
        self.from_nf(self.nf.from_int(n))
    }

    pub fn var(&self, v: usize) -> Frac {
        self.from_poly(self.nf.pvar(v))
    }

    /// Builds `num/den` in normal form; `None` when `den` vanishes.
    pub fn frac(&self, num: Poly, den: Poly) -> Option<Frac> {
        self.normalize(num, den)
    }

    fn normalize(&self, num: Poly, den: Poly) -> Option<Frac> {
        let nf = &self.nf;
        let (mut num, mut den) = (num, den);
        if let Some(r) = &self.relation {
            den = nf.preduce(&den, &r.poly, r.var);
            if den.is_zero() {
                return None;
            }
            if den.degree_in(r.var) > 0 {
                let (adj, det) = self.poly_inverse(&den)?;
                num = nf.pmul(&num, &adj);
                den = det;
            }
            num = nf.preduce(&num, &r.poly, r.var);
        }
        if den.is_zero() {
            return None;
        }
        let (c, fac) = self.factor_hint(&den, 1);
        num = nf.pscale(&num, &nf.inv(&c)?);
        Some(self.cancel(num, fac))
    }

    /// `p = c·Π fᵢ^{eᵢ·mult}` with monomial content split into variables.
    fn factor_hint(&self, p: &Poly, mult: u32) -> (NfElem, Factors) {
        let nf = &self.nf;
        let c = p.lead().map(|(_, c)| c.clone()).unwrap_or_else(|| nf.one());
        let m = p.min_monomial();
        let rest = if m.is_one() { p.clone() } else { p.div_monomial(&m) };
        let mut fac: Factors = Vec::new();
        for v in 0..MAX_VARS {
            if m.0[v] > 0 {
                fac.push((nf.pvar(v), m.0[v] as u32 * mult));
            }
        }
        if !rest.is_constant() {
            fac.push((nf.pmonic(&rest), mult));
        }
        (c, fac)
    }

    /// Divides out every factor of `fac` that divides `num` and assembles
    /// the fraction. `fac` must be pairwise coprime and monic.
    fn cancel(&self, num: Poly, fac: Factors) -> Frac {
        let nf = &self.nf;
        let mut num = num;
        let mut fac = fac;
        if num.is_zero() {
            return self.zero();
        }
        'outer: loop {
            for i in 0..fac.len() {
                while fac[i].1 > 0 {
                    let f = &fac[i].0;
                    if f.len() == 1 {
                        let m = f.lead().map(|(m, _)| *m).unwrap();
                        if m.divides(&num.min_monomial()) {
                            num = num.div_monomial(&m);
                            fac[i].1 -= 1;
                            continue;
                        }
                        break;
                    }
                    if let Some(q) = nf.pdiv_exact(&num, f) {
                        num = q;
                        fac[i].1 -= 1;
                        continue;
                    }
                    let g = nf.pmonic(&nf.pgcd(&num, f));
                    if g.is_constant() || g == *f {
                        break;
                    }
                    let h = nf.pmonic(&nf.pdiv_exact(f, &g).expect("gcd divides"));
                    let e = fac[i].1;
                    fac.swap_remove(i);
                    let mut parts: Vec<(Poly, [u32; 2])> = fac.into_iter().map(|(p, e)| (p, [e, 0])).collect();
                    parts.push((g, [e, 0]));
                    parts.push((h, [e, 0]));
                    fac = self.refine(parts).into_iter().map(|(p, e)| (p, e[0])).collect();
                    continue 'outer;
                }
            }
            break;
        }
        fac.retain(|(_, e)| *e > 0);
        self.assemble(num, fac)
    }

    fn assemble(&self, num: Poly, fac: Factors) -> Frac {
        let nf = &self.nf;
        let mut den = nf.pone();
        for (f, e) in &fac {
            for _ in 0..*e {
                den = nf.pmul(&den, f);
            }
        }
        Frac { num, den, fac }
    }

    /// Coprime refinement: the product `Π pᵢ^{eᵢ[k]}` is preserved for each
    /// `k`, and the returned polynomials are monic, nonconstant and pairwise
    /// coprime.
    fn refine(&self, parts: Vec<(Poly, [u32; 2])>) -> Vec<(Poly, [u32; 2])> {
        let mut out: Vec<(Poly, [u32; 2])> = Vec::new();
        for (p, e) in parts {
            self.refine_insert(&mut out, p, e);
        }
        out
    }

    fn refine_insert(&self, out: &mut Vec<(Poly, [u32; 2])>, p: Poly, e: [u32; 2]) {
        let nf = &self.nf;
        if p.is_constant() || e == [0, 0] {
            return;
        }
        let p = nf.pmonic(&p);
        for j in 0..out.len() {
            if out[j].0 == p {
                out[j].1[0] += e[0];
                out[j].1[1] += e[1];
                return;
            }
            if out[j].0.len() == 1 && p.len() == 1 {
                continue;
            }
            if (out[j].0.len() == 1 && p.min_monomial().is_one()) || (p.len() == 1 && out[j].0.min_monomial().is_one()) {
                continue;
            }
            let g = nf.pgcd(&out[j].0, &p);
            if !g.is_constant() {
                let (h, eh) = out.swap_remove(j);
                let h1 = nf.pdiv_exact(&h, &g).expect("gcd divides");
                let p1 = nf.pdiv_exact(&p, &g).expect("gcd divides");
                self.refine_insert(out, h1, eh);
                self.refine_insert(out, g, [eh[0] + e[0], eh[1] + e[1]]);
                self.refine_insert(out, p1, e);
                return;
            }
        }
        out.push((p, e));
    }

    fn fac_product(&self, parts: &[(Poly, [u32; 2])], k: usize, skip: &[u32]) -> Poly {
        let nf = &self.nf;
        let mut acc = nf.pone();
        for (i, (f, e)) in parts.iter().enumerate() {
            let n = e[k].saturating_sub(skip.get(i).copied().unwrap_or(0));
            for _ in 0..n {
                acc = nf.pmul(&acc, f);
            }
        }
        acc
    }

    fn reduce_num(&self, num: Poly) -> Poly {
        match &self.relation {
            Some(r) => self.nf.preduce(&num, &r.poly, r.var),
            None => num,
        }
    }

    /// For `a` reduced modulo the relation, returns `(b, det)` with
    /// `a·b ≡ det` and `det` free of the relation variable.
    fn poly_inverse(&self, a: &Poly) -> Option<(Poly, Poly)> {
        let nf = &self.nf;
        let r = self.relation.as_ref()?;
        let n = r.degree as usize;
        let v = r.var;
        // column j: coordinates of a·v^j on 1, v, …, v^{n-1}
        let mut m = vec![vec![Poly::zero(); n]; n];
        let mut cur = a.clone();
        for j in 0..n {
            if j > 0 {
                cur = nf.preduce(&cur.mul_monomial(&Monomial::var(v, 1)), &r.poly, v);
            }
            for (i, c) in nf.coeffs_in(&cur, v).into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        let det = nf.pdet(m.clone());
        if det.is_zero() {
            return None;
        }
        // first column of the adjugate: cofactors of row 0
        let mut b = Poly::zero();
        for i in 0..n {
            let minor: Vec<Vec<Poly>> = (1..n)
                .map(|row| (0..n).filter(|&col| col != i).map(|col| m[row][col].clone()).collect())
                .collect();
            let mut c = nf.pdet(minor);
            if i % 2 == 1 {
                c = nf.pneg(&c);
            }
            b = nf.padd(&b, &c.mul_monomial(&Monomial::var(v, i as u16)));
        }
        Some((b, det))
    }

    /// Formal partial derivative of the representative in variable `v`.
    pub fn deriv(&self, f: &Frac, v: usize) -> Frac {
        let nf = &self.nf;
        let dn = nf.pderiv(&f.num, v);
        let live: Vec<usize> = (0..f.fac.len()).filter(|&i| f.fac[i].0.degree_in(v) > 0).collect();
        if live.is_empty() {
            return self.cancel(self.reduce_num(dn), f.fac.clone());
        }
        // d(n/Πfᵢ^eᵢ) = (n'·R − n·Σ eᵢ fᵢ'·R/fᵢ) / (Πfᵢ^eᵢ · R), R = Π_{live} fᵢ
        let mut r = nf.pone();
        for &i in &live {
            r = nf.pmul(&r, &f.fac[i].0);
        }
        let mut sum = Poly::zero();
        for &i in &live {
            let (fi, ei) = &f.fac[i];
            let mut others = nf.pderiv(fi, v);
            for &j in &live {
                if j != i {
                    others = nf.pmul(&others, &f.fac[j].0);
                }
            }
            sum = nf.padd(&sum, &nf.pscale(&others, &nf.from_int(*ei as i64)));
        }
        let num = nf.psub(&nf.pmul(&dn, &r), &nf.pmul(&f.num, &sum));
        let mut fac = f.fac.clone();
        for &i in &live {
            fac[i].1 += 1;
        }
        self.cancel(self.reduce_num(num), fac)
    }

    pub fn scale(&self, f: &Frac, c: &NfElem) -> Frac {
        if c.is_zero() {
            return self.zero();
        }
        Frac { num: self.nf.pscale(&f.num, c), den: f.den.clone(), fac: f.fac.clone() }
    }

    pub fn pow(&self, f: &Frac, e: i64) -> Option<Frac> {
        let base = if e < 0 { self.inv(f)? } else { f.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Some(acc)
    }

    /// Replaces every variable `i` by `images[i]` (all in `target`).
    pub fn substitute(&self, f: &Frac, images: &[Frac], target: &FracField) -> Option<Frac> {
        let num = self.subst_poly(&f.num, images, target);
        let mut den = target.one();
        for (p, e) in &f.fac {
            let q = self.subst_poly(p, images, target);
            for _ in 0..*e {
                den = target.mul(&den, &q);
            }
        }
        target.div(&num, &den)
    }

    fn subst_poly(&self, p: &Poly, images: &[Frac], target: &FracField) -> Frac {
        let mut acc = target.zero();
        for (m, c) in p.terms() {
            let mut t = target.from_nf(target.nf.embed_from(c));
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = target.mul(&t, &images[i]);
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Constant value of `f` when it lies in the coefficient field.
    pub fn constant_value(&self, f: &Frac) -> Option<NfElem> {
        if f.den.is_constant() {
            f.num.constant_value(&self.nf)
        } else {
            None
        }
    }

    fn combine(&self, a: &Frac, b: &Frac) -> Vec<(Poly, [u32; 2])> {
        let mut parts: Vec<(Poly, [u32; 2])> = a.fac.iter().map(|(p, e)| (p.clone(), [*e, 0])).collect();
        parts.extend(b.fac.iter().map(|(p, e)| (p.clone(), [0, *e])));
        if a.fac.is_empty() || b.fac.is_empty() {
            return parts;
        }
        self.refine(parts)
    }
}

impl Ring for FracField {
    type Elem = Frac;

    fn zero(&self) -> Frac {
        self.poly_frac(Poly::zero())
    }

    fn one(&self) -> Frac {
        self.poly_frac(self.nf.pone())
    }

    fn is_zero(&self, a: &Frac) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        let nf = &self.nf;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = nf.padd(&a.num, &b.num);
            if a.fac.is_empty() {
                return self.poly_frac(num);
            }
            return self.cancel(num, a.fac.clone());
        }
        let parts = self.combine(a, b);
        let lcm: Vec<u32> = parts.iter().map(|(_, e)| e[0].max(e[1])).collect();
        let fa: Vec<(Poly, [u32; 2])> = parts.iter().zip(&lcm).map(|((p, e), l)| (p.clone(), [l - e[0], 0])).collect();
        let fb: Vec<(Poly, [u32; 2])> = parts.iter().zip(&lcm).map(|((p, e), l)| (p.clone(), [l - e[1], 0])).collect();
        let num = nf.padd(&nf.pmul(&a.num, &self.fac_product(&fa, 0, &[])), &nf.pmul(&b.num, &self.fac_product(&fb, 0, &[])));
        let fac: Factors = parts.into_iter().zip(lcm).map(|((p, _), l)| (p, l)).filter(|(_, l)| *l > 0).collect();
        self.cancel(self.reduce_num(num), fac)
    }

    fn neg(&self, a: &Frac) -> Frac {
        Frac { num: self.nf.pneg(&a.num), den: a.den.clone(), fac: a.fac.clone() }
    }

    fn sub(&self, a: &Frac, b: &Frac) -> Frac {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        let nf = &self.nf;
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let num = self.reduce_num(nf.pmul(&a.num, &b.num));
        if a.fac.is_empty() && b.fac.is_empty() {
            return self.poly_frac(num);
        }
        let fac: Factors = self.combine(a, b).into_iter().map(|(p, e)| (p, e[0] + e[1])).collect();
        self.cancel(num, fac)
    }
}

impl Field for FracField {
    fn inv(&self, a: &Frac) -> Option<Frac> {
        if a.is_zero() {
            return None;
        }
        if self.relation.as_ref().is_some_and(|r| a.num.degree_in(r.var) > 0) {
            return self.normalize(a.den.clone(), a.num.clone());
        }
        let nf = &self.nf;
        let (c, fac) = self.factor_hint(&a.num, 1);
        let fac: Factors = self.refine(fac.into_iter().map(|(p, e)| (p, [e, 0])).collect()).into_iter().map(|(p, e)| (p, e[0])).collect();
        let num = nf.pscale(&a.den, &nf.inv(&c)?);
        Some(self.assemble(num, fac))
    }

    fn div(&self, a: &Frac, b: &Frac) -> Option<Frac> {
        if b.is_zero() {
            return None;
        }
        Some(self.mul(a, &self.inv(b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn curve_field() -> FracField {
        // y^2 - x^3 + x - 1 over ℚ, variables x = 0, y = 1
        let nf = NumberField::rationals();
        let x = nf.pvar(0);
        let y = nf.pvar(1);
        let f = nf.psub(
            &nf.pmul(&y, &y),
            &nf.padd(&nf.psub(&nf.ppow(&x, 3), &x), &nf.pone()),
        );
        let rel = Relation::new(&nf, &f, 1).unwrap();
        FracField::new(nf, 2, Some(rel))
    }

    #[test]
    fn plain_fraction_normal_form() {
        let k = FracField::new(NumberField::rationals(), 1, None);
        let t = k.var(0);
        let s = k.add(&t, &k.inv(&t).unwrap());
        // (t^2 + 1)/t
        let nf = &k.nf;
        let expect = k.frac(nf.padd(&nf.ppow(&nf.pvar(0), 2), &nf.pone()), nf.pvar(0)).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn inverse_modulo_relation() {
        let k = curve_field();
        let y = k.var(1);
        let x = k.var(0);
        let a = k.add(&y, &x);
        let ai = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ai), k.one());
        assert_eq!(ai.den.degree_in(1), 0);
    }

    #[test]
    fn relation_identifies_y_squared() {
        let k = curve_field();
        let y = k.var(1);
        let x = k.var(0);
        let lhs = k.mul(&y, &y);
        let x3 = k.mul(&k.mul(&x, &x), &x);
        let rhs = k.add(&k.sub(&x3, &x), &k.one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_by_y_gives_y_over_h() {
        let k = curve_field();
        let y = k.var(1);
        let inv = k.inv(&y).unwrap();
        assert_eq!(inv.num, k.nf.pvar(1));
        assert_eq!(inv.den.degree_in(0), 3);
        assert_eq!(k.mul(&inv, &y), k.one());
        let half = k.from_rational(crate::arith::qq(1, 2));
        assert_eq!(k.add(&half, &half), k.one());
        let _ = q(0);
    }
}
