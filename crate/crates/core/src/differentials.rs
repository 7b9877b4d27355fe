//! Kähler differential forms over a function ring, relative to a chosen base.
//!
//! A form is a map from wedge monomials to coefficients. Wedge monomials are
//! bit masks over a fixed alphabet: the free ring variables (the variable
//! eliminated by a relation never appears), then one letter per
//! transcendental tower generator, then `dε` as the highest bit. The base
//! decides which letters are live. Coefficients are dual numbers; on bases
//! without ε their slope is zero.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Frac, Ring};
use crate::error::{Error, Result};
use crate::funcrings::{DualElem, FunctionRing, RingElem};

pub const EPS_BIT: u32 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseTag {
    /// Differentials relative to the first `n` tower steps (0 = ℚ, the
    /// step count = the whole tower).
    Level(usize),
    /// Differentials of A[ε] relative to the whole tower, so `dε` is live.
    AbsoluteOnDual,
    /// Differentials of A[ε] relative to (whole tower)[ε], so `dε = 0`.
    DualRelative,
}

impl BaseTag {
    pub fn is_dual(&self) -> bool {
        !matches!(self, BaseTag::Level(_))
    }
}

impl fmt::Display for BaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseTag::Level(n) => write!(f, "level {n}"),
            BaseTag::AbsoluteOnDual => f.write_str("absolute on dual numbers"),
            BaseTag::DualRelative => f.write_str("relative to dual numbers"),
        }
    }
}

/// What a letter stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    /// d of the variable with this global index.
    Var(usize),
    Eps,
}

/// Letters live over `base`, as `(bit, letter)` pairs in bit order.
pub fn alphabet(ring: &FunctionRing, base: BaseTag) -> Vec<(u32, Letter)> {
    let mut out = Vec::new();
    let free = free_vars(ring);
    for (bit, &v) in free.iter().enumerate() {
        out.push((bit as u32, Letter::Var(v)));
    }
    if let BaseTag::Level(b) = base {
        for j in ring.tower().trans_above(b) {
            out.push(((free.len() + j) as u32, Letter::Var(j)));
        }
    }
    if base == BaseTag::AbsoluteOnDual {
        out.push((EPS_BIT, Letter::Eps));
    }
    out
}

/// Global indices of the ring variables that carry a letter.
pub fn free_vars(ring: &FunctionRing) -> Vec<usize> {
    let elim = ring.eliminated_var();
    (0..ring.var_count()).map(|i| ring.var_index(i)).filter(|v| Some(*v) != elim).collect()
}

pub fn letter_name(ring: &FunctionRing, bit: u32) -> String {
    if bit == EPS_BIT {
        return String::from("deps");
    }
    let free = free_vars(ring);
    let b = bit as usize;
    if b < free.len() {
        let names = ring.all_var_names();
        alloc::format!("d{}", names[free[b]])
    } else {
        alloc::format!("d{}", ring.tower().trans_names[b - free.len()])
    }
}

fn check_base(ring: &FunctionRing, base: BaseTag) -> Result<()> {
    match base {
        BaseTag::Level(b) if b > ring.tower().step_count() => Err(Error::BaseIncompatible(alloc::format!(
            "level {b} exceeds the {} tower steps",
            ring.tower().step_count()
        ))),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Coef {
    body: Frac,
    slope: Frac,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffForm {
    ring: FunctionRing,
    base: BaseTag,
    degree: usize,
    terms: BTreeMap<u32, Coef>,
}

fn sign_of_merge(a: u32, b: u32) -> bool {
    // parity of pairs (i in a, j in b) with i > j
    let mut parity = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        parity += (b & ((1u32 << i) - 1)).count_ones();
    }
    parity % 2 == 1
}

impl DiffForm {
    pub fn zero(ring: &FunctionRing, base: BaseTag, degree: usize) -> DiffForm {
        DiffForm { ring: ring.clone(), base, degree, terms: BTreeMap::new() }
    }

    /// A degree-0 form.
    pub fn function(f: &RingElem, base: BaseTag) -> Result<DiffForm> {
        DiffForm::dual_function(&DualElem::plain(f.clone()), base)
    }

    pub fn dual_function(a: &DualElem, base: BaseTag) -> Result<DiffForm> {
        let ring = a.ring();
        check_base(ring, base)?;
        if !base.is_dual() && !a.slope.is_zero() {
            return Err(Error::BaseIncompatible(String::from("ε-coefficient over a base without ε")));
        }
        let mut w = DiffForm::zero(ring, base, 0);
        w.insert(0, Coef { body: a.body.frac().clone(), slope: a.slope.frac().clone() });
        Ok(w)
    }

    /// The single letter `d(var)` for a named ring variable or tower generator.
    pub fn letter(ring: &FunctionRing, base: BaseTag, name: &str) -> Result<DiffForm> {
        let f = ring.var(name)?;
        DiffForm::function(&f, base)?.d()
    }

    pub fn ring(&self) -> &FunctionRing {
        &self.ring
    }

    pub fn base(&self) -> BaseTag {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `(mask, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, DualElem)> + '_ {
        self.terms.iter().map(move |(m, c)| {
            (*m, DualElem { body: self.ring.elem(c.body.clone()), slope: self.ring.elem(c.slope.clone()) })
        })
    }

    /// Coefficient bodies, for forms over a base without ε.
    pub fn plain_terms(&self) -> impl Iterator<Item = (u32, RingElem)> + '_ {
        self.terms.iter().map(move |(m, c)| (*m, self.ring.elem(c.body.clone())))
    }

    pub fn coefficient(&self, mask: u32) -> RingElem {
        self.terms.get(&mask).map(|c| self.ring.elem(c.body.clone())).unwrap_or_else(|| self.ring.zero())
    }

    fn field(&self) -> &crate::arith::FracField {
        self.ring.field()
    }

    fn insert(&mut self, mask: u32, mut c: Coef) {
        if mask & (1 << EPS_BIT) != 0 {
            // ε·dε = 0
            c.slope = self.field().zero();
        }
        if c.body.is_zero() && c.slope.is_zero() {
            return;
        }
        let f = self.ring.field().clone();
        match self.terms.get_mut(&mask) {
            None => {
                self.terms.insert(mask, c);
            }
            Some(old) => {
                old.body = f.add(&old.body, &c.body);
                old.slope = f.add(&old.slope, &c.slope);
                if old.body.is_zero() && old.slope.is_zero() {
                    self.terms.remove(&mask);
                }
            }
        }
    }

    fn compatible(&self, o: &DiffForm) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::Mismatch(String::from("forms over different rings")));
        }
        if self.base != o.base {
            return Err(Error::Mismatch(alloc::format!("bases {} and {}", self.base, o.base)));
        }
        Ok(())
    }

    pub fn add(&self, o: &DiffForm) -> Result<DiffForm> {
        self.compatible(o)?;
        if self.degree != o.degree && !self.is_zero() && !o.is_zero() {
            return Err(Error::Mismatch(alloc::format!("degrees {} and {}", self.degree, o.degree)));
        }
        let mut out = if self.is_zero() { o.clone() } else { self.clone() };
        if !self.is_zero() {
            for (m, c) in &o.terms {
                out.insert(*m, c.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> DiffForm {
        let f = self.field();
        let mut out = DiffForm::zero(&self.ring, self.base, self.degree);
        for (m, c) in &self.terms {
            out.terms.insert(*m, Coef { body: f.neg(&c.body), slope: f.neg(&c.slope) });
        }
        out
    }

    pub fn sub(&self, o: &DiffForm) -> Result<DiffForm> {
        self.add(&o.neg())
    }

    pub fn scale_int(&self, n: i64) -> DiffForm {
        self.scale(&self.ring.int(n)).expect("same ring")
    }

    pub fn scale(&self, a: &RingElem) -> Result<DiffForm> {
        self.scale_dual(&DualElem::plain(a.clone()))
    }

    pub fn scale_dual(&self, a: &DualElem) -> Result<DiffForm> {
        if *a.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        let g = DiffForm::dual_function(a, self.base)?;
        g.wedge(self)
    }

    pub fn wedge(&self, o: &DiffForm) -> Result<DiffForm> {
        self.compatible(o)?;
        let f = self.field();
        let mut out = DiffForm::zero(&self.ring, self.base, self.degree + o.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let body = f.mul(&ca.body, &cb.body);
                let slope = f.add(&f.mul(&ca.body, &cb.slope), &f.mul(&ca.slope, &cb.body));
                let (body, slope) = if sign_of_merge(*ma, *mb) { (f.neg(&body), f.neg(&slope)) } else { (body, slope) };
                out.insert(ma | mb, Coef { body, slope });
            }
        }
        Ok(out)
    }

    /// Exterior derivative relative to the form's base.
    pub fn d(&self) -> Result<DiffForm> {
        let letters = alphabet(&self.ring, self.base);
        let mut out = DiffForm::zero(&self.ring, self.base, self.degree + 1);
        for (mask, c) in &self.terms {
            for (bit, letter) in &letters {
                if mask & (1 << bit) != 0 {
                    continue;
                }
                let (body, slope) = match letter {
                    Letter::Var(v) => (self.total_partial(&c.body, *v), self.total_partial(&c.slope, *v)),
                    Letter::Eps => (c.slope.clone(), self.field().zero()),
                };
                // the new letter goes in front of the existing wedge
                let neg = (mask & ((1u32 << bit) - 1)).count_ones() % 2 == 1;
                let f = self.field();
                let (body, slope) = if neg { (f.neg(&body), f.neg(&slope)) } else { (body, slope) };
                out.insert(mask | (1 << bit), Coef { body, slope });
            }
        }
        Ok(out)
    }

    /// ∂f/∂v along the relation: ∂f/∂v + ∂f/∂y · (−F_v/F_y).
    fn total_partial(&self, f: &Frac, v: usize) -> Frac {
        let field = self.field();
        if f.is_zero() {
            return field.zero();
        }
        let mut out = field.deriv(f, v);
        if let (Some(y), Some(elim)) = (self.ring.eliminated_var(), self.ring.elim.as_ref()) {
            let fy = field.deriv(f, y);
            if !fy.is_zero() && !elim[v].is_zero() {
                out = field.add(&out, &field.mul(&fy, &elim[v]));
            }
        }
        out
    }

    /// Coefficient of a trailing `dε`, specialized at ε = 0; the result is a
    /// form relative to the whole tower.
    pub fn contract_deps(&self) -> Result<DiffForm> {
        if !self.base.is_dual() {
            return Err(Error::NoDualBase);
        }
        let top = BaseTag::Level(self.ring.tower().step_count());
        let mut out = DiffForm::zero(&self.ring, top, self.degree.saturating_sub(1));
        for (mask, c) in &self.terms {
            if mask & (1 << EPS_BIT) == 0 {
                continue;
            }
            // dε is the highest letter, hence already trailing
            out.insert(mask & !(1 << EPS_BIT), Coef { body: c.body.clone(), slope: self.field().zero() });
        }
        Ok(out)
    }

    /// Passes to a larger base, killing the letters of the generators now
    /// inside the base.
    pub fn base_change(&self, to: BaseTag) -> Result<DiffForm> {
        let (BaseTag::Level(from), BaseTag::Level(t)) = (self.base, to) else {
            return Err(Error::NotAnEnlargement {
                from: alloc::format!("{}", self.base),
                to: alloc::format!("{to}"),
            });
        };
        check_base(&self.ring, to)?;
        if t < from {
            return Err(Error::NotAnEnlargement { from: alloc::format!("{}", self.base), to: alloc::format!("{to}") });
        }
        let nfree = free_vars(&self.ring).len();
        let mut kill = 0u32;
        for j in self.ring.tower().trans_between(from, t) {
            kill |= 1 << (nfree + j);
        }
        let mut out = DiffForm::zero(&self.ring, to, self.degree);
        for (mask, c) in &self.terms {
            if mask & kill == 0 {
                out.terms.insert(*mask, c.clone());
            }
        }
        Ok(out)
    }

    /// Specialization ε = 0 of the coefficients.
    pub fn body_part(&self) -> DiffForm {
        self.part(false)
    }

    /// The ε-coefficient: `w = body + ε·slope`.
    pub fn slope_part(&self) -> DiffForm {
        self.part(true)
    }

    fn part(&self, slope: bool) -> DiffForm {
        let top = BaseTag::Level(self.ring.tower().step_count());
        let mut out = DiffForm::zero(&self.ring, top, self.degree);
        for (mask, c) in &self.terms {
            if mask & (1 << EPS_BIT) != 0 {
                continue;
            }
            let v = if slope { c.slope.clone() } else { c.body.clone() };
            out.insert(*mask, Coef { body: v, slope: self.field().zero() });
        }
        out
    }

    /// `body + ε·slope` as a form over `base` (a dual base), from two forms
    /// relative to the whole tower.
    pub fn from_parts(body: &DiffForm, slope: &DiffForm, base: BaseTag) -> Result<DiffForm> {
        let top = BaseTag::Level(body.ring.tower().step_count());
        if !base.is_dual() || body.base != top || slope.base != top || body.ring != slope.ring {
            return Err(Error::Mismatch(String::from("parts must be forms relative to the whole tower")));
        }
        let mut out = DiffForm::zero(&body.ring, base, body.degree.max(slope.degree));
        let zero = body.field().zero();
        for (m, c) in &body.terms {
            out.insert(*m, Coef { body: c.body.clone(), slope: zero.clone() });
        }
        for (m, c) in &slope.terms {
            out.insert(*m, Coef { body: zero.clone(), slope: c.body.clone() });
        }
        Ok(out)
    }

    /// Reinterprets a form relative to the whole tower over a dual base.
    pub fn embed_dual(&self, base: BaseTag) -> Result<DiffForm> {
        let zero = DiffForm::zero(&self.ring, self.base, self.degree);
        DiffForm::from_parts(self, &zero, base)
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        for (mask, c) in &self.terms {
            let mut letters = Vec::new();
            let mut rest = *mask;
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                letters.push(letter_name(&self.ring, b));
            }
            let coef = if c.slope.is_zero() {
                self.ring.format(&c.body)
            } else if c.body.is_zero() {
                alloc::format!("eps*({})", self.ring.format(&c.slope))
            } else {
                alloc::format!("{} + eps*({})", self.ring.format(&c.body), self.ring.format(&c.slope))
            };
            if letters.is_empty() {
                parts.push(coef);
            } else {
                parts.push(alloc::format!("({coef})*{}", letters.join("^")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// `d f` relative to `base`.
pub fn d(f: &RingElem, base: BaseTag) -> Result<DiffForm> {
    DiffForm::function(f, base)?.d()
}

pub fn d_dual(a: &DualElem, base: BaseTag) -> Result<DiffForm> {
    DiffForm::dual_function(a, base)?.d()
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm> {
    a.wedge(b)
}

pub fn contract_deps(w: &DiffForm) -> Result<DiffForm> {
    w.contract_deps()
}

pub fn base_change(w: &DiffForm, to: BaseTag) -> Result<DiffForm> {
    w.base_change(to)
}

/// Letters killed by passing from base `from` to base `to`.
pub fn base_change_kernel_letters(ring: &FunctionRing, from: BaseTag, to: BaseTag) -> Result<Vec<String>> {
    let (BaseTag::Level(a), BaseTag::Level(b)) = (from, to) else {
        return Err(Error::NotAnEnlargement { from: alloc::format!("{from}"), to: alloc::format!("{to}") });
    };
    check_base(ring, to)?;
    if b < a {
        return Err(Error::NotAnEnlargement { from: alloc::format!("{from}"), to: alloc::format!("{to}") });
    }
    let nfree = free_vars(ring).len();
    Ok(ring.tower().trans_between(a, b).into_iter().map(|j| letter_name(ring, (nfree + j) as u32)).collect())
}

/// `df/f`.
pub fn dlog(f: &RingElem, base: BaseTag) -> Result<DiffForm> {
    let inv = f.inv().map_err(|_| Error::NonUnitEntry)?;
    d(f, base)?.scale(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrings::ring_make;
    use crate::scalars::{make_tower, StepSpec, Tower};

    fn top(r: &FunctionRing) -> BaseTag {
        BaseTag::Level(r.tower().step_count())
    }

    #[test]
    fn sqrt2_is_closed() {
        let k = make_tower(&[StepSpec::algebraic_rational("r2", &[-2, 0, 1])]).unwrap();
        let r = ring_make(&k, &["x"], None).unwrap();
        let s = r.var("r2").unwrap();
        assert!(d(&s, BaseTag::Level(0)).unwrap().is_zero());
    }

    #[test]
    fn dt_depends_on_base() {
        let k = make_tower(&[StepSpec::transcendental("t")]).unwrap();
        let r = ring_make(&k, &["x"], None).unwrap();
        let t = r.var("t").unwrap();
        let x = r.var("x").unwrap();
        let tx = &t * &x;
        let rel = d(&tx, BaseTag::Level(1)).unwrap();
        assert_eq!(rel, DiffForm::letter(&r, BaseTag::Level(1), "x").unwrap().scale(&t).unwrap());
        let abs = d(&tx, BaseTag::Level(0)).unwrap();
        let dx = DiffForm::letter(&r, BaseTag::Level(0), "x").unwrap();
        let dt = DiffForm::letter(&r, BaseTag::Level(0), "t").unwrap();
        assert_eq!(abs, dx.scale(&t).unwrap().add(&dt.scale(&x).unwrap()).unwrap());
        assert_eq!(abs.base_change(BaseTag::Level(1)).unwrap(), rel);
        assert_eq!(
            base_change_kernel_letters(&r, BaseTag::Level(0), BaseTag::Level(1)).unwrap(),
            alloc::vec![String::from("dt")]
        );
    }

    #[test]
    fn dy_on_elliptic_chart() {
        let nf = crate::arith::NumberField::rationals();
        let (x, y) = (nf.pvar(0), nf.pvar(1));
        let f = nf.psub(&nf.pmul(&y, &y), &nf.padd(&nf.psub(&nf.ppow(&x, 3), &x), &nf.pone()));
        let r = ring_make(&Tower::rationals(), &["x", "y"], Some(&f)).unwrap();
        let xe = r.var("x").unwrap();
        let ye = r.var("y").unwrap();
        let dy = d(&ye, top(&r)).unwrap();
        let coeff = (&(&xe * &xe).scale_int(3) - &r.one()).div(&ye.scale_int(2)).unwrap();
        let dx = d(&xe, top(&r)).unwrap();
        assert_eq!(dy, dx.scale(&coeff).unwrap());
    }

    #[test]
    fn wedge_rules() {
        let r = ring_make(&Tower::rationals(), &["x", "y"], None).unwrap();
        let b = top(&r);
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let dx = d(&x, b).unwrap();
        let dy = d(&y, b).unwrap();
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
        let lhs = dx.scale(&x).unwrap().wedge(&dy.scale(&y).unwrap().add(&dx).unwrap()).unwrap();
        assert_eq!(lhs, dx.wedge(&dy).unwrap().scale(&(&x * &y)).unwrap());
    }

    #[test]
    fn truncation_examples() {
        let r = ring_make(&Tower::rationals(), &["x", "y"], None).unwrap();
        let deps = d_dual(&DualElem::eps(&r), BaseTag::AbsoluteOnDual).unwrap();
        assert_eq!(deps.contract_deps().unwrap(), DiffForm::function(&r.one(), top(&r)).unwrap());
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let dx = d_dual(&DualElem::plain(x.clone()), BaseTag::AbsoluteOnDual).unwrap();
        let dy = d_dual(&DualElem::plain(y.clone()), BaseTag::AbsoluteOnDual).unwrap();
        let w = dx.wedge(&dy).unwrap().scale_dual(&DualElem::eps(&r)).unwrap();
        assert!(w.contract_deps().unwrap().is_zero());
        assert!(d_dual(&DualElem::eps(&r), BaseTag::DualRelative).unwrap().is_zero());
        assert_eq!(
            DiffForm::function(&x, top(&r)).unwrap().contract_deps().unwrap_err(),
            Error::NoDualBase
        );
    }

    #[test]
    fn eps_deps_vanishes() {
        let r = ring_make(&Tower::rationals(), &["x"], None).unwrap();
        let e = DualElem::eps(&r);
        let w = d_dual(&e, BaseTag::AbsoluteOnDual).unwrap().scale_dual(&e).unwrap();
        assert!(w.is_zero());
    }
}
