//! Sparse multivariate polynomials over a [`NumberField`].
//!
//! Variables are addressed by index. All polynomials share the same fixed
//! exponent layout, so polynomials in the first k variables embed into larger
//! rings unchanged.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use super::numfield::{Fp, NfElem, NumberField};
use super::{Field, Ring, Q};

pub const MAX_VARS: usize = 10;

/// Exponent vector, ordered graded-lexicographically (variable 0 heaviest).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(v: usize, e: u16) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[v] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] += o.0[i];
        }
        m
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.0[i] -= self.0[i];
        }
        m
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].min(o.0[i]);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn var_mask(&self) -> u32 {
        let mut mask = 0;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, NfElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: NfElem) -> Poly {
        Poly::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: NfElem) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, NfElem)>, nf: &NumberField) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(nf, m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::ONE))
    }

    pub fn constant_value(&self, nf: &NumberField) -> Option<NfElem> {
        if self.terms.is_empty() {
            Some(nf.zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::ONE).cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &NfElem)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, NfElem)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&NfElem> {
        self.terms.get(m)
    }

    /// Leading term in graded-lex order.
    pub fn lead(&self) -> Option<(&Monomial, &NfElem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn var_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| acc | m.var_mask())
    }

    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |acc, m| acc.gcd(m))
    }

    fn add_term(&mut self, nf: &NumberField, m: Monomial, c: NfElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = nf.add(x, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (m.quotient_of(k), c.clone())).collect() }
    }

    /// Renames variables: variable `i` becomes `map[i]`.
    pub fn remap_vars(&self, map: &[usize]) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut k = Monomial::ONE;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    k.0[map[i]] += e;
                }
            }
            terms.insert(k, c.clone());
        }
        Poly { terms }
    }

    /// Zero-pads every coefficient into a larger number field.
    pub fn embed_coeffs(&self, into: &NumberField) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, into.embed_from(c))).collect() }
    }

    pub fn format(&self, nf: &NumberField, vars: &[String], algs: &[String]) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = String::new();
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let name = vars.get(v).map(String::as_str).unwrap_or("?");
                if e == 1 {
                    mono.push_str(name);
                } else {
                    let _ = write!(mono, "{name}^{e}");
                }
            }
            let cs = nf.format(c, algs);
            let compound = c.nonzero_count() > 1;
            let (neg, body) = if !compound && cs.starts_with('-') {
                (true, String::from(&cs[1..]))
            } else {
                (false, cs)
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                if compound && i > 0 {
                    let _ = write!(s, "({body})");
                } else {
                    s.push_str(&body);
                }
            } else if body == "1" {
                s.push_str(&mono);
            } else if compound {
                let _ = write!(s, "({body})*{mono}");
            } else {
                let _ = write!(s, "{body}*{mono}");
            }
        }
        s
    }
}

/// Polynomial arithmetic, with the coefficient field as context.
impl NumberField {
    pub fn pconst(&self, c: Q) -> Poly {
        Poly::constant(self.from_rational(c))
    }

    pub fn pone(&self) -> Poly {
        Poly::constant(self.one())
    }

    pub fn pvar(&self, v: usize) -> Poly {
        Poly::term(Monomial::var(v, 1), self.one())
    }

    pub fn padd(&self, a: &Poly, b: &Poly) -> Poly {
        let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(self, *m, c.clone());
        }
        out
    }

    pub fn psub(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.add_term(self, *m, self.neg(c));
        }
        out
    }

    pub fn pneg(&self, a: &Poly) -> Poly {
        Poly { terms: a.terms.iter().map(|(m, c)| (*m, self.neg(c))).collect() }
    }

    pub fn pscale(&self, a: &Poly, c: &NfElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return a.clone();
        }
        Poly { terms: a.terms.iter().map(|(m, x)| (*m, self.mul(x, c))).collect() }
    }

    pub fn pmul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        if a.len() == 1 {
            let (m, c) = a.terms.iter().next().unwrap();
            return self.pscale(&b.mul_monomial(m), c);
        }
        if b.len() == 1 {
            let (m, c) = b.terms.iter().next().unwrap();
            return self.pscale(&a.mul_monomial(m), c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(self, ma.mul(mb), self.mul(ca, cb));
            }
        }
        out
    }

    pub fn ppow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.pone();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.pmul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.pmul(&base, &base);
            }
        }
        acc
    }

    pub fn pderiv(&self, a: &Poly, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &a.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut k = *m;
            k.0[v] -= 1;
            out.add_term(self, k, self.scale(c, &super::q(e as i64)));
        }
        out
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn pmonic(&self, a: &Poly) -> Poly {
        match a.lead() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => a.clone(),
            Some((_, c)) => {
                let inv = self.inv(c).expect("nonzero leading coefficient");
                self.pscale(a, &inv)
            }
        }
    }

    /// Coefficients of `a` viewed as a polynomial in variable `v`.
    pub fn coeffs_in(&self, a: &Poly, v: usize) -> Vec<Poly> {
        let deg = a.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &a.terms {
            let e = m.0[v] as usize;
            let mut k = *m;
            k.0[v] = 0;
            out[e].terms.insert(k, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(&self, cs: &[Poly], v: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in cs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut k = *m;
                k.0[v] += e as u16;
                terms.insert(k, x.clone());
            }
        }
        Poly { terms }
    }

    /// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
    pub fn pdiv_exact(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        if b.is_zero() {
            return None;
        }
        if let Some(c) = b.constant_value(self) {
            return Some(self.pscale(a, &self.inv(&c)?));
        }
        let (mb, cb) = b.lead().map(|(m, c)| (*m, c.clone()))?;
        let cbi = self.inv(&cb)?;
        if b.len() == 1 {
            if a.terms.keys().all(|m| mb.divides(m)) {
                return Some(self.pscale(&a.div_monomial(&mb), &cbi));
            }
            return None;
        }
        if !self.may_divide(a, b) {
            return None;
        }
        let mut quo = Poly::zero();
        let mut rem = a.clone();
        while let Some((mr, cr)) = rem.lead().map(|(m, c)| (*m, c.clone())) {
            if !mb.divides(&mr) {
                return None;
            }
            let mq = mb.quotient_of(&mr);
            let cq = self.mul(&cr, &cbi);
            for (m, c) in &b.terms {
                rem.add_term(self, m.mul(&mq), self.neg(&self.mul(c, &cq)));
            }
            quo.terms.insert(mq, cq);
        }
        Some(quo)
    }

    /// Remainder of `a` modulo `rel`, which must be monic of degree `n` in `v`.
    pub fn preduce(&self, a: &Poly, rel: &Poly, v: usize) -> Poly {
        let n = rel.degree_in(v);
        if a.degree_in(v) < n {
            return a.clone();
        }
        let rc = self.coeffs_in(rel, v);
        let mut cs = self.coeffs_in(a, v);
        let n = n as usize;
        while cs.len() > n {
            let top = cs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = cs.len() - n;
            for (j, r) in rc.iter().take(n).enumerate() {
                if r.is_zero() {
                    continue;
                }
                let t = self.pmul(&top, r);
                cs[j + shift] = self.psub(&cs[j + shift], &t);
            }
        }
        self.from_coeffs_in(&cs, v)
    }

    /// Monic greatest common divisor (gcd(0, 0) = 0).
    pub fn pgcd(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return self.pmonic(b);
        }
        if b.is_zero() {
            return self.pmonic(a);
        }
        if a.is_constant() || b.is_constant() {
            return self.pone();
        }
        let ma = a.min_monomial();
        let mb = b.min_monomial();
        let mg = ma.gcd(&mb);
        if a.len() == 1 || b.len() == 1 {
            return Poly::term(mg, self.one());
        }
        let a1 = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
        let b1 = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
        if a1 == b1 {
            return self.pmonic(&a1).mul_monomial(&mg);
        }
        let g = self.gcd_general(&a1, &b1);
        g.mul_monomial(&mg)
    }

    fn gcd_general(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_constant() || b.is_constant() {
            return self.pone();
        }
        let common = a.var_mask() & b.var_mask();
        if common == 0 {
            return self.pone();
        }
        // main variable: the common one of smallest combined degree
        if self.coprime_by_specialization(a, b, common) {
            return self.pone();
        }
        if let Some(q) = self.pdiv_exact(b, a) {
            if !q.is_zero() {
                return self.pmonic(a);
            }
        }
        if let Some(q) = self.pdiv_exact(a, b) {
            if !q.is_zero() {
                return self.pmonic(b);
            }
        }
        let v = (0..MAX_VARS)
            .filter(|v| common & (1 << v) != 0)
            .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
            .unwrap();
        let ca = self.content_in(a, v);
        let cb = self.content_in(b, v);
        let pa = self.pdiv_exact(a, &ca).expect("content divides");
        let pb = self.pdiv_exact(b, &cb).expect("content divides");
        let gc = self.pgcd(&ca, &cb);
        let gp = self.prs_gcd(pa, pb, v);
        self.pmonic(&self.pmul(&gc, &gp))
    }

    /// Certifies `gcd(a, b) = 1` when, for every common variable `v`, some
    /// integer specialization of the other variables keeps the leading
    /// coefficient of `a` in `v` nonzero and makes the two univariate images
    /// coprime. A `false` answer is inconclusive.
    fn coprime_by_specialization(&self, a: &Poly, b: &Poly, common: u32) -> bool {
        if let Some(ok) = self.coprime_mod_p(a, b, common) {
            return ok;
        }
        const POINTS: [i64; 12] = [3, -5, 7, 11, -13, 2, 17, -19, 23, 29, -31, 37];
        for v in 0..MAX_VARS {
            if common & (1 << v) == 0 {
                continue;
            }
            let ca = self.coeffs_in(a, v);
            let cb = self.coeffs_in(b, v);
            let mut certified = false;
            for attempt in 0..2 {
                let point: Vec<NfElem> =
                    (0..MAX_VARS).map(|i| self.from_int(POINTS[(i + 5 * attempt) % POINTS.len()] + attempt as i64)).collect();
                let ua: Vec<NfElem> = ca.iter().map(|c| self.peval(c, &point)).collect();
                if ua.last().is_none_or(|c| c.is_zero()) {
                    continue;
                }
                let ub: Vec<NfElem> = cb.iter().map(|c| self.peval(c, &point)).collect();
                if self.univariate_gcd_degree(ua, ub) == 0 {
                    certified = true;
                    break;
                }
            }
            if !certified {
                return false;
            }
        }
        true
    }

    /// A fast necessary condition for `b | a`: for each variable of `b`, the
    /// univariate image of `b` in 𝔽_p divides the image of `a`.
    pub fn may_divide(&self, a: &Poly, b: &Poly) -> bool {
        let Some(fp) = self.mod_field() else { return true };
        for v in 0..MAX_VARS {
            if a.degree_in(v) < b.degree_in(v) {
                return false;
            }
        }
        let Some(ia) = mod_terms(self, a) else { return true };
        let Some(ib) = mod_terms(self, b) else { return true };
        let point: Vec<u64> = (0..MAX_VARS as u64).map(|i| (7919 * (i + 1) + 31) % fp.0).collect();
        for v in 0..MAX_VARS {
            let db = b.degree_in(v) as usize;
            if db == 0 {
                continue;
            }
            let ub = mod_image(fp, &ib, v, db, &point);
            if ub[db] == 0 {
                continue;
            }
            let ua = mod_image(fp, &ia, v, a.degree_in(v) as usize, &point);
            if !mod_rem(fp, ua, &ub).is_empty() {
                return false;
            }
        }
        true
    }

    /// The same certificate with the images taken in 𝔽_p. Coprimality of the
    /// images mod p implies coprimality over the field because the leading
    /// coefficient survives reduction. `None` when some coefficient has no
    /// image.
    fn coprime_mod_p(&self, a: &Poly, b: &Poly, common: u32) -> Option<bool> {
        let fp = self.mod_field()?;
        let ia = mod_terms(self, a)?;
        let ib = mod_terms(self, b)?;
        for v in 0..MAX_VARS {
            if common & (1 << v) == 0 {
                continue;
            }
            let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
            let mut certified = false;
            for attempt in 0..3u64 {
                let point: Vec<u64> = (0..MAX_VARS as u64).map(|i| (7919 * (i + 1) + 104_729 * attempt + 31) % fp.0).collect();
                let ua = mod_image(fp, &ia, v, da, &point);
                if ua[da] == 0 {
                    continue;
                }
                let ub = mod_image(fp, &ib, v, db, &point);
                if mod_gcd_degree(fp, ua, ub) == 0 {
                    certified = true;
                    break;
                }
            }
            if !certified {
                return Some(false);
            }
        }
        Some(true)
    }

    fn univariate_gcd_degree(&self, a: Vec<NfElem>, b: Vec<NfElem>) -> usize {
        let trim = |mut v: Vec<NfElem>| {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        };
        let (mut f, mut g) = (trim(a), trim(b));
        if f.len() < g.len() {
            core::mem::swap(&mut f, &mut g);
        }
        while !g.is_empty() {
            let inv = self.inv(g.last().unwrap()).expect("nonzero lead");
            while f.len() >= g.len() {
                let c = self.mul(f.last().unwrap(), &inv);
                let shift = f.len() - g.len();
                for (i, gi) in g.iter().enumerate() {
                    f[shift + i] = self.sub(&f[shift + i], &self.mul(&c, gi));
                }
                f.pop();
                f = trim(f);
                if f.is_empty() {
                    break;
                }
            }
            core::mem::swap(&mut f, &mut g);
        }
        f.len().saturating_sub(1)
    }

    /// gcd of the coefficients of `a` as a polynomial in `v`.
    pub fn content_in(&self, a: &Poly, v: usize) -> Poly {
        let mut cs = self.coeffs_in(a, v).into_iter().filter(|c| !c.is_zero());
        let mut g = match cs.next() {
            Some(c) => self.pmonic(&c),
            None => return Poly::zero(),
        };
        for c in cs {
            if g.is_constant() {
                break;
            }
            g = self.pgcd(&g, &c);
        }
        g
    }

    fn primitive_part_in(&self, a: &Poly, v: usize) -> Poly {
        let c = self.content_in(a, v);
        let p = self.pdiv_exact(a, &c).expect("content divides");
        self.pmonic(&p)
    }

    /// Primitive polynomial remainder sequence in `v`; inputs primitive in `v`.
    fn prs_gcd(&self, a: Poly, b: Poly, v: usize) -> Poly {
        let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
        loop {
            if g.degree_in(v) == 0 {
                return self.pone();
            }
            let r = self.prem(&f, &g, v);
            if r.is_zero() {
                return self.pmonic(&g);
            }
            if r.degree_in(v) == 0 {
                return self.pone();
            }
            f = g;
            g = self.primitive_part_in(&r, v);
        }
    }

    /// A nonzero multiple of the pseudo-remainder of `f` by `g` in `v`.
    fn prem(&self, f: &Poly, g: &Poly, v: usize) -> Poly {
        let gc = self.coeffs_in(g, v);
        let m = gc.len() - 1;
        let lg = gc[m].clone();
        let mut r = self.coeffs_in(f, v);
        while r.len() > m {
            let lr = r.pop().unwrap();
            if lr.is_zero() {
                continue;
            }
            let k = r.len() - m;
            for x in r.iter_mut() {
                *x = self.pmul(x, &lg);
            }
            for (j, gj) in gc.iter().take(m).enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let t = self.pmul(&lr, gj);
                r[j + k] = self.psub(&r[j + k], &t);
            }
            while r.last().is_some_and(Poly::is_zero) {
                r.pop();
            }
        }
        self.from_coeffs_in(&r, v)
    }

    /// Determinant by fraction-free (Bareiss) elimination over the polynomial ring.
    pub fn pdet(&self, mut m: Vec<Vec<Poly>>) -> Poly {
        let n = m.len();
        if n == 0 {
            return self.pone();
        }
        let mut sign = false;
        let mut prev = self.pone();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = !sign;
                    }
                    None => return Poly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = self.psub(
                        &self.pmul(&m[i][j], &m[k][k]),
                        &self.pmul(&m[i][k], &m[k][j]),
                    );
                    m[i][j] = self.pdiv_exact(&t, &prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign {
            self.pneg(&d)
        } else {
            d
        }
    }

    pub fn pis_one(&self, a: &Poly) -> bool {
        a.len() == 1 && a.coeff(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    /// Evaluates at a point with coefficients in the field (one value per variable).
    pub fn peval(&self, a: &Poly, point: &[NfElem]) -> NfElem {
        let mut acc = self.zero();
        for (m, c) in &a.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = self.mul(&t, &point[v]);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }
}

fn mod_terms(nf: &NumberField, a: &Poly) -> Option<Vec<(Monomial, u64)>> {
    a.terms().map(|(m, c)| Some((*m, nf.reduce_mod(c)?))).collect()
}

/// Univariate image in `v` (degree at most `deg`) after substituting `point`
/// for the other variables.
fn mod_image(fp: Fp, terms: &[(Monomial, u64)], v: usize, deg: usize, point: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; deg + 1];
    for (m, c) in terms {
        let mut t = *c;
        for (u, &e) in m.0.iter().enumerate() {
            if u != v && e > 0 {
                t = fp.mul(t, fp.pow(point[u], e as u64));
            }
        }
        let k = m.0[v] as usize;
        out[k] = fp.add(out[k], t);
    }
    out
}

fn mod_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `f` modulo `g` (nonzero leading coefficient), trimmed.
fn mod_rem(fp: Fp, f: Vec<u64>, g: &[u64]) -> Vec<u64> {
    let mut f = mod_trim(f);
    let inv = fp.inv(*g.last().unwrap());
    while f.len() >= g.len() {
        let c = fp.mul(*f.last().unwrap(), inv);
        let shift = f.len() - g.len();
        for (i, gi) in g.iter().enumerate() {
            f[shift + i] = fp.sub(f[shift + i], fp.mul(c, *gi));
        }
        f.pop();
        f = mod_trim(f);
    }
    f
}

fn mod_gcd_degree(fp: Fp, a: Vec<u64>, b: Vec<u64>) -> usize {
    let (mut f, mut g) = (mod_trim(a), mod_trim(b));
    while !g.is_empty() {
        let r = mod_rem(fp, f, &g);
        f = g;
        g = r;
    }
    f.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn qf() -> NumberField {
        NumberField::rationals()
    }

    fn x(nf: &NumberField) -> Poly {
        nf.pvar(0)
    }
    fn y(nf: &NumberField) -> Poly {
        nf.pvar(1)
    }

    #[test]
    fn gcd_of_products() {
        let k = qf();
        let x = x(&k);
        let y = y(&k);
        let one = k.pone();
        let a = k.padd(&x, &one); // x+1
        let b = k.psub(&y, &x); // y-x
        let c = k.padd(&k.pmul(&x, &y), &k.pconst(q(2))); // xy+2
        let p1 = k.pmul(&k.pmul(&a, &b), &c);
        let p2 = k.pmul(&k.pmul(&a, &c), &k.padd(&y, &one));
        let g = k.pgcd(&p1, &p2);
        assert_eq!(g, k.pmonic(&k.pmul(&a, &c)));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let k = qf();
        let x = x(&k);
        let y = y(&k);
        let a = k.padd(&k.pmul(&x, &x), &y);
        let b = k.psub(&k.pmul(&y, &y), &x);
        assert!(k.pis_one(&k.pgcd(&a, &b)));
    }

    #[test]
    fn gcd_with_monomial_factor() {
        let k = qf();
        let x = x(&k);
        let y = y(&k);
        let a = k.pmul(&k.pmul(&x, &x), &k.padd(&y, &k.pone()));
        let b = k.pmul(&x, &y);
        assert_eq!(k.pgcd(&a, &b), x);
    }

    #[test]
    fn exact_division() {
        let k = qf();
        let x = x(&k);
        let y = y(&k);
        let a = k.padd(&x, &y);
        let b = k.psub(&x, &y);
        let p = k.pmul(&a, &b);
        assert_eq!(k.pdiv_exact(&p, &a), Some(b.clone()));
        assert_eq!(k.pdiv_exact(&p, &k.padd(&x, &k.pone())), None);
    }

    #[test]
    fn reduction_by_monic_relation() {
        let k = qf();
        let x = x(&k);
        let y = y(&k);
        // y^2 - x^3 + x - 1
        let rel = k.padd(
            &k.psub(&k.pmul(&y, &y), &k.ppow(&x, 3)),
            &k.psub(&x, &k.pone()),
        );
        let y3 = k.ppow(&y, 3);
        let r = k.preduce(&y3, &rel, 1);
        let expect = k.pmul(&y, &k.psub(&k.ppow(&x, 3), &k.psub(&x, &k.pone())));
        assert_eq!(r, expect);
    }

    #[test]
    fn bareiss_determinant() {
        let k = qf();
        let x = x(&k);
        let m = vec![
            vec![x.clone(), k.pone(), k.pconst(q(2))],
            vec![k.pone(), x.clone(), k.pone()],
            vec![k.pconst(q(3)), k.pone(), x.clone()],
        ];
        // x^3 - 8x + 5 by cofactor expansion
        let d = k.pdet(m);
        let expect = k.padd(
            &k.psub(&k.ppow(&x, 3), &k.pscale(&x, &k.from_int(8))),
            &k.pconst(q(5)),
        );
        assert_eq!(d, expect);
    }
}
