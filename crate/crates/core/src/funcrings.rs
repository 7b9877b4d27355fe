//! Rational-function rings over a tower, optionally cut down by one relation
//! monic in the last variable, and their dual-number extensions.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arith::{q, qq, Field, Frac, FracField, Monomial, NfElem, Poly, Relation, Ring, MAX_VARS, Q};
use crate::error::{Error, Result};
use crate::scalars::{is_identifier, Scalar, Tower};

#[derive(Debug)]
pub struct RingData {
    pub tower: Tower,
    pub vars: Vec<String>,
    /// Variables are numbered transcendentals first, then ring variables.
    pub field: FracField,
    /// `-∂F/∂v ÷ ∂F/∂y` for every variable `v` (zero for `y` itself).
    pub elim: Option<Vec<Frac>>,
}

/// Shared handle to an immutable ring; equality is identity.
#[derive(Clone, Debug)]
pub struct FunctionRing(Arc<RingData>);

impl PartialEq for FunctionRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for FunctionRing {}

impl core::ops::Deref for FunctionRing {
    type Target = RingData;
    fn deref(&self) -> &RingData {
        &self.0
    }
}

/// Builds a ring. `relation`, when given, is a polynomial in the global
/// variable numbering (see [`FunctionRing::var_index`]).
pub fn ring_make(tower: &Tower, vars: &[&str], relation: Option<&Poly>) -> Result<FunctionRing> {
    let mut names: Vec<String> = Vec::new();
    for v in vars {
        if !is_identifier(v) {
            return Err(Error::InvalidArgument(alloc::format!("bad variable name `{v}`")));
        }
        if names.iter().any(|n| n == v) || tower.names().iter().any(|n| n == v) || *v == "eps" {
            return Err(Error::NameClash(v.to_string()));
        }
        names.push(v.to_string());
    }
    let nt = tower.trans_count();
    let n = nt + names.len();
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let nf = tower.nf().clone();
    let (rel, elim) = match relation {
        None => (None, None),
        Some(f) => {
            let last = names.last().cloned().ok_or_else(|| Error::InvalidArgument("relation without variables".into()))?;
            let y = n - 1;
            if f.var_mask() >> n != 0 {
                return Err(Error::InvalidArgument("relation mentions unknown variables".into()));
            }
            let rel = Relation::new(&nf, f, y).ok_or(Error::RelationNotMonic(last))?;
            if let Some(point) = find_singular_point(tower, &rel.poly, nt, names.len()) {
                return Err(Error::SingularRelation { point });
            }
            let plain = FracField::new(nf.clone(), n, None);
            let fy = plain.from_poly(nf.pderiv(&rel.poly, y));
            let field = FracField::new(nf.clone(), n, Some(rel.clone()));
            let fy = field.frac(fy.num, fy.den).ok_or(Error::SingularRelation {
                point: String::from("∂F/∂y vanishes identically"),
            })?;
            let mut elim = Vec::with_capacity(n);
            for v in 0..n {
                if v == y {
                    elim.push(field.zero());
                    continue;
                }
                let fv = field.from_poly(nf.pderiv(&rel.poly, v));
                let r = field.div(&field.neg(&fv), &fy).ok_or(Error::DivisionByZero)?;
                elim.push(r);
            }
            (Some(rel), Some(elim))
        }
    };
    let field = FracField::new(nf, n, rel);
    Ok(FunctionRing(Arc::new(RingData { tower: tower.clone(), vars: names, field, elim })))
}

/// Bounded search for a common zero of `F` and its partial derivatives: the
/// free ring variables range over small rationals, the last variable over the
/// rational roots of the resulting univariate polynomial. Only relations with
/// rational coefficients free of transcendentals are searched.
fn find_singular_point(tower: &Tower, f: &Poly, nt: usize, nv: usize) -> Option<String> {
    let nf = tower.nf();
    if f.terms().any(|(m, c)| c.as_rational().is_none() || (0..nt).any(|v| m.0[v] > 0)) {
        return None;
    }
    let mut cands: Vec<Q> = Vec::new();
    for den in 1..=3i64 {
        for num in -6..=6i64 {
            let c = qq(num, den);
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
    }
    let free = nv - 1;
    let y = nt + nv - 1;
    let mut idx = alloc::vec![0usize; free];
    loop {
        let mut point: Vec<NfElem> = (0..nt + nv).map(|_| nf.from_int(0)).collect();
        for (k, &i) in idx.iter().enumerate() {
            point[nt + k] = nf.from_rational(cands[i].clone());
        }
        // univariate in y after substituting the free variables
        let deg = f.degree_in(y) as usize;
        let mut coeffs: Vec<Q> = alloc::vec![q(0); deg + 1];
        for (m, c) in f.terms() {
            let mut t = c.as_rational().unwrap().clone();
            for k in 0..free {
                for _ in 0..m.0[nt + k] {
                    t *= point[nt + k].as_rational().unwrap();
                }
            }
            coeffs[m.0[y] as usize] += t;
        }
        for r in univariate_rational_roots(&coeffs) {
            point[y] = nf.from_rational(r);
            let singular = (0..nv).all(|k| nf.peval(&nf.pderiv(f, nt + k), &point).is_zero());
            if singular {
                let coords: Vec<String> = (0..nv).map(|k| nf.format(&point[nt + k], &[])).collect();
                return Some(alloc::format!("({})", coords.join(", ")));
            }
        }
        let mut k = 0;
        loop {
            if k == free {
                return None;
            }
            idx[k] += 1;
            if idx[k] < cands.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn univariate_rational_roots(coeffs: &[Q]) -> Vec<Q> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive, Zero};
    let mut cs: Vec<Q> = coeffs.to_vec();
    while cs.len() > 1 && cs.last().is_some_and(Zero::is_zero) {
        cs.pop();
    }
    let mut roots = Vec::new();
    if cs.len() < 2 {
        return roots;
    }
    let mut shift = 0;
    while cs[shift].is_zero() {
        shift += 1;
    }
    if shift > 0 {
        roots.push(Q::zero());
    }
    let cs = &cs[shift..];
    if cs.len() < 2 {
        return roots;
    }
    let lcm = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = cs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(a0), Some(ad)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
        return roots;
    };
    if a0 > 100_000 || ad > 100_000 {
        return roots;
    }
    for num in (1..=a0).filter(|d| a0 % d == 0) {
        for den in (1..=ad).filter(|d| ad % d == 0) {
            for sign in [1i64, -1] {
                let r = Q::new(BigInt::from(num) * sign, BigInt::from(den));
                let mut acc = Q::zero();
                for c in cs.iter().rev() {
                    acc = acc * &r + c;
                }
                if acc.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

impl FunctionRing {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn field(&self) -> &FracField {
        &self.field
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Global variable index of ring variable `i`.
    pub fn var_index(&self, i: usize) -> usize {
        self.tower.trans_count() + i
    }

    pub fn total_vars(&self) -> usize {
        self.tower.trans_count() + self.vars.len()
    }

    pub fn has_relation(&self) -> bool {
        self.field.relation.is_some()
    }

    /// Global index of the eliminated variable, if any.
    pub fn eliminated_var(&self) -> Option<usize> {
        self.field.relation.as_ref().map(|r| r.var)
    }

    pub fn relation(&self) -> Option<&Poly> {
        self.field.relation.as_ref().map(|r| &r.poly)
    }

    /// Names of all variables in the global numbering.
    pub fn all_var_names(&self) -> Vec<String> {
        let mut v = self.tower.trans_names.clone();
        v.extend(self.vars.iter().cloned());
        v
    }

    pub fn var(&self, name: &str) -> Result<RingElem> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(self.elem(self.field.var(self.var_index(i))));
        }
        Scalar::generator(&self.tower, name).map(|s| self.scalar(&s))
    }

    pub fn elem(&self, f: Frac) -> RingElem {
        RingElem { ring: self.clone(), f }
    }

    pub fn from_poly(&self, p: Poly) -> RingElem {
        self.elem(self.field.from_poly(p))
    }

    pub fn int(&self, n: i64) -> RingElem {
        self.elem(self.field.from_int(n))
    }

    pub fn rational(&self, c: Q) -> RingElem {
        self.elem(self.field.from_rational(c))
    }

    pub fn zero(&self) -> RingElem {
        self.int(0)
    }

    pub fn one(&self) -> RingElem {
        self.int(1)
    }

    pub fn scalar(&self, s: &Scalar) -> RingElem {
        let v = s.value();
        self.elem(self.field.frac(v.num.clone(), v.den.clone()).expect("nonzero denominator"))
    }

    pub fn format(&self, f: &Frac) -> String {
        self.tower.format_frac(f, &self.vars)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingElem {
    ring: FunctionRing,
    f: Frac,
}

impl RingElem {
    pub fn ring(&self) -> &FunctionRing {
        &self.ring
    }

    pub fn frac(&self) -> &Frac {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.f == self.ring.field.one()
    }

    fn wrap(&self, f: Frac) -> RingElem {
        RingElem { ring: self.ring.clone(), f }
    }

    fn check(&self, o: &RingElem) -> Result<()> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, o: &RingElem) -> Result<RingElem> {
        self.check(o)?;
        Ok(self.wrap(self.ring.field.add(&self.f, &o.f)))
    }

    pub fn try_mul(&self, o: &RingElem) -> Result<RingElem> {
        self.check(o)?;
        Ok(self.wrap(self.ring.field.mul(&self.f, &o.f)))
    }

    pub fn inv(&self) -> Result<RingElem> {
        self.ring.field.inv(&self.f).map(|f| self.wrap(f)).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, o: &RingElem) -> Result<RingElem> {
        self.check(o)?;
        self.ring.field.div(&self.f, &o.f).map(|f| self.wrap(f)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<RingElem> {
        self.ring.field.pow(&self.f, e).map(|f| self.wrap(f)).ok_or(Error::DivisionByZero)
    }

    pub fn scale_int(&self, n: i64) -> RingElem {
        self.wrap(self.ring.field.scale(&self.f, &self.ring.field.nf.from_int(n)))
    }

    /// Formal partial derivative of the representative in global variable `v`.
    pub fn partial(&self, v: usize) -> RingElem {
        self.wrap(self.ring.field.deriv(&self.f, v))
    }

    /// Re-derives the normal form from the stored representative.
    pub fn normalize(&self) -> RingElem {
        let f = self.ring.field.frac(self.f.num.clone(), self.f.den.clone()).expect("nonzero denominator");
        self.wrap(f)
    }

    /// Maps into `target`, sending ring variable `i` to `images[i]`; tower
    /// generators are sent to themselves (the towers must coincide).
    pub fn substitute(&self, images: &[RingElem], target: &FunctionRing) -> Result<RingElem> {
        if target.tower != self.ring.tower || images.len() != self.ring.vars.len() {
            return Err(Error::RingMismatch);
        }
        let nt = self.ring.tower.trans_count();
        let mut all: Vec<Frac> = (0..nt).map(|j| target.field.var(j)).collect();
        for im in images {
            if im.ring != *target {
                return Err(Error::RingMismatch);
            }
            all.push(im.f.clone());
        }
        self.ring
            .field
            .substitute(&self.f, &all, &target.field)
            .map(|f| target.elem(f))
            .ok_or(Error::DivisionByZero)
    }

    /// Value in the coefficient number field, when constant.
    pub fn constant_value(&self) -> Option<NfElem> {
        self.ring.field.constant_value(&self.f)
    }

    /// True when the element is a nonzero constant times a monomial.
    pub fn is_monomial(&self) -> bool {
        self.f.num.len() == 1 && self.f.den.len() == 1
    }

    pub fn monomial_parts(&self) -> Option<(Monomial, Monomial, NfElem)> {
        let (n, c) = self.f.num.lead()?;
        if self.f.num.len() != 1 || self.f.den.len() != 1 {
            return None;
        }
        let (d, dc) = self.f.den.lead()?;
        let nf = &self.ring.field.nf;
        Some((*n, *d, nf.div(c, dc)?))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.f))
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    /// Panics when the operands live in different rings.
    fn add(self, o: &RingElem) -> RingElem {
        self.try_add(o).expect("ring mismatch")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        self.check(o).expect("ring mismatch");
        self.wrap(self.ring.field.sub(&self.f, &o.f))
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        self.try_mul(o).expect("ring mismatch")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.wrap(self.ring.field.neg(&self.f))
    }
}

/// `body + ε·slope` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElem {
    pub body: RingElem,
    pub slope: RingElem,
}

impl DualElem {
    pub fn new(body: RingElem, slope: RingElem) -> Result<DualElem> {
        body.check(&slope)?;
        Ok(DualElem { body, slope })
    }

    pub fn plain(body: RingElem) -> DualElem {
        let slope = body.ring.zero();
        DualElem { body, slope }
    }

    pub fn eps(ring: &FunctionRing) -> DualElem {
        DualElem { body: ring.zero(), slope: ring.one() }
    }

    pub fn ring(&self) -> &FunctionRing {
        &self.body.ring
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.slope.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.body.is_zero()
    }

    pub fn add(&self, o: &DualElem) -> Result<DualElem> {
        Ok(DualElem { body: self.body.try_add(&o.body)?, slope: self.slope.try_add(&o.slope)? })
    }

    pub fn sub(&self, o: &DualElem) -> Result<DualElem> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DualElem {
        DualElem { body: -&self.body, slope: -&self.slope }
    }

    pub fn scale(&self, c: &RingElem) -> Result<DualElem> {
        Ok(DualElem { body: self.body.try_mul(c)?, slope: self.slope.try_mul(c)? })
    }
}

impl fmt::Display for DualElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            write!(f, "{}", self.body)
        } else if self.body.is_zero() {
            write!(f, "eps*({})", self.slope)
        } else {
            write!(f, "{} + eps*({})", self.body, self.slope)
        }
    }
}

/// `(a + εb)(c + εd) = ac + ε(ad + bc)`.
pub fn dual_mul(a: &DualElem, b: &DualElem) -> Result<DualElem> {
    let body = a.body.try_mul(&b.body)?;
    let slope = a.body.try_mul(&b.slope)?.try_add(&a.slope.try_mul(&b.body)?)?;
    Ok(DualElem { body, slope })
}

/// `(a + εb)⁻¹ = a⁻¹ − ε·a⁻²·b`.
pub fn dual_inv(a: &DualElem) -> Result<DualElem> {
    let bi = a.body.inv().map_err(|_| Error::NonUnitBody)?;
    let slope = -&(&(&bi * &bi) * &a.slope);
    Ok(DualElem { body: bi, slope })
}

pub fn specialize_eps(a: &DualElem) -> RingElem {
    a.body.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_tower, StepSpec};

    fn plane() -> FunctionRing {
        ring_make(&Tower::rationals(), &["x", "y"], None).unwrap()
    }

    fn elliptic() -> FunctionRing {
        let nf = crate::arith::NumberField::rationals();
        let x = nf.pvar(0);
        let y = nf.pvar(1);
        let f = nf.psub(&nf.pmul(&y, &y), &nf.padd(&nf.psub(&nf.ppow(&x, 3), &x), &nf.pone()));
        ring_make(&Tower::rationals(), &["x", "y"], Some(&f)).unwrap()
    }

    #[test]
    fn dual_products() {
        let r = plane();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let a = DualElem::new(x.clone(), r.one()).unwrap();
        let b = DualElem::new(y.clone(), r.one()).unwrap();
        let p = dual_mul(&a, &b).unwrap();
        assert_eq!(p.body, &x * &y);
        assert_eq!(p.slope, &x + &y);
        let c = DualElem::new(x.clone(), -&r.one()).unwrap();
        let p = dual_mul(&a, &c).unwrap();
        assert_eq!(p, DualElem::plain(&x * &x));
    }

    #[test]
    fn dual_inverse() {
        let r = plane();
        let x = r.var("x").unwrap();
        let a = DualElem::new(x.clone(), r.one()).unwrap();
        let ai = dual_inv(&a).unwrap();
        assert_eq!(ai.body, x.inv().unwrap());
        assert_eq!(ai.slope, -&x.pow(-2).unwrap());
        assert_eq!(dual_mul(&a, &ai).unwrap(), DualElem::plain(r.one()));
        let two = DualElem::plain(r.int(2));
        assert_eq!(dual_inv(&two).unwrap().body, r.rational(qq(1, 2)));
        assert_eq!(dual_inv(&DualElem::eps(&r)).unwrap_err(), Error::NonUnitBody);
    }

    #[test]
    fn elliptic_chart_relation() {
        let r = elliptic();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let lhs = &y * &y;
        let rhs = &(&(&(&x * &x) * &x) - &x) + &r.one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn singular_and_clashing() {
        let nf = crate::arith::NumberField::rationals();
        let x = nf.pvar(0);
        let y = nf.pvar(1);
        let cusp = nf.psub(&nf.pmul(&y, &y), &nf.ppow(&x, 3));
        let e = ring_make(&Tower::rationals(), &["x", "y"], Some(&cusp)).unwrap_err();
        assert!(matches!(e, Error::SingularRelation { .. }));
        let t = make_tower(&[StepSpec::transcendental("t")]).unwrap();
        assert_eq!(ring_make(&t, &["t"], None).unwrap_err(), Error::NameClash("t".into()));
        let bad = nf.psub(&nf.pmul(&x, &y), &nf.pone());
        assert!(matches!(
            ring_make(&Tower::rationals(), &["x", "y"], Some(&bad)).unwrap_err(),
            Error::RelationNotMonic(_)
        ));
    }

    #[test]
    fn rings_mismatch() {
        let a = plane().one();
        let b = plane().one();
        assert_eq!(a.try_add(&b).unwrap_err(), Error::RingMismatch);
        let da = DualElem::plain(a);
        let db = DualElem::plain(b);
        assert_eq!(dual_mul(&da, &db).unwrap_err(), Error::RingMismatch);
    }
}
