//! Milnor symbols over a function ring A and over A[ε].
//!
//! Symbols are never compared directly; every identity is checked after
//! applying one of the dlog-type maps.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::differentials::{d, d_dual, dlog, BaseTag, DiffForm};
use crate::error::{Error, Result};
use crate::funcrings::{dual_inv, dual_mul, DualElem, FunctionRing, RingElem};

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolFactor {
    pub entries: Vec<DualElem>,
    pub exponent: i64,
}

/// A formal product of symbols `{u₁,…,u_p}^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolWord {
    ring: FunctionRing,
    p: usize,
    factors: Vec<SymbolFactor>,
}

impl SymbolWord {
    pub fn empty(ring: &FunctionRing, p: usize) -> SymbolWord {
        SymbolWord { ring: ring.clone(), p, factors: Vec::new() }
    }

    pub fn single(entries: Vec<DualElem>, exponent: i64) -> Result<SymbolWord> {
        let ring = entries.first().ok_or_else(|| Error::InvalidArgument("empty symbol".into()))?.ring().clone();
        let mut w = SymbolWord::empty(&ring, entries.len());
        w.push(entries, exponent)?;
        Ok(w)
    }

    pub fn plain(entries: &[RingElem]) -> Result<SymbolWord> {
        SymbolWord::single(entries.iter().cloned().map(DualElem::plain).collect(), 1)
    }

    pub fn push(&mut self, entries: Vec<DualElem>, exponent: i64) -> Result<()> {
        if entries.len() != self.p {
            return Err(Error::Mismatch(alloc::format!("symbol of length {} in a word of length {}", entries.len(), self.p)));
        }
        for e in &entries {
            if *e.ring() != self.ring {
                return Err(Error::RingMismatch);
            }
            if !e.is_unit() {
                return Err(Error::NonUnitEntry);
            }
        }
        if exponent != 0 {
            self.factors.push(SymbolFactor { entries, exponent });
        }
        Ok(())
    }

    pub fn ring(&self) -> &FunctionRing {
        &self.ring
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn factors(&self) -> &[SymbolFactor] {
        &self.factors
    }

    pub fn is_plain(&self) -> bool {
        self.factors.iter().all(|f| f.entries.iter().all(|e| e.slope.is_zero()))
    }

    pub fn mul(&self, o: &SymbolWord) -> Result<SymbolWord> {
        if o.ring != self.ring || o.p != self.p {
            return Err(Error::Mismatch(String::from("symbol words of different shape")));
        }
        let mut w = self.clone();
        w.factors.extend(o.factors.iter().cloned());
        Ok(w)
    }

    pub fn inverse(&self) -> SymbolWord {
        let mut w = self.clone();
        for f in &mut w.factors {
            f.exponent = -f.exponent;
        }
        w
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            let entries: Vec<String> = fac.entries.iter().map(|e| alloc::format!("{e}")).collect();
            write!(f, "{{{}}}", entries.join(", "))?;
            if fac.exponent != 1 {
                write!(f, "^({})", fac.exponent)?;
            }
        }
        Ok(())
    }
}

/// `{1+εh, f₂,…,f_p}^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsFactor {
    pub h: RingElem,
    pub tail: Vec<RingElem>,
    pub exponent: i64,
}

/// Normalized element of the ε-part of K^M_p of A[ε].
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSymbol {
    ring: FunctionRing,
    p: usize,
    factors: Vec<EpsFactor>,
}

impl EpsSymbol {
    pub fn empty(ring: &FunctionRing, p: usize) -> EpsSymbol {
        EpsSymbol { ring: ring.clone(), p, factors: Vec::new() }
    }

    /// `{1+εh, tail…}^exponent`.
    pub fn single(h: RingElem, tail: Vec<RingElem>, exponent: i64) -> Result<EpsSymbol> {
        let mut s = EpsSymbol::empty(h.ring(), tail.len() + 1);
        s.push(h, tail, exponent)?;
        Ok(s)
    }

    pub fn push(&mut self, h: RingElem, tail: Vec<RingElem>, exponent: i64) -> Result<()> {
        if tail.len() + 1 != self.p {
            return Err(Error::Mismatch(alloc::format!("tail of length {} for p = {}", tail.len(), self.p)));
        }
        if *h.ring() != self.ring || tail.iter().any(|t| *t.ring() != self.ring) {
            return Err(Error::RingMismatch);
        }
        if tail.iter().any(RingElem::is_zero) {
            return Err(Error::NonUnitEntry);
        }
        if exponent != 0 && !h.is_zero() {
            self.factors.push(EpsFactor { h, tail, exponent });
        }
        Ok(())
    }

    pub fn ring(&self) -> &FunctionRing {
        &self.ring
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn factors(&self) -> &[EpsFactor] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, o: &EpsSymbol) -> Result<EpsSymbol> {
        if o.ring != self.ring || o.p != self.p {
            return Err(Error::Mismatch(String::from("ε-symbols of different shape")));
        }
        let mut s = self.clone();
        s.factors.extend(o.factors.iter().cloned());
        Ok(s)
    }

    /// The same element as a word over A[ε].
    pub fn embed(&self) -> SymbolWord {
        let mut w = SymbolWord::empty(&self.ring, self.p);
        for f in &self.factors {
            let mut entries = vec![DualElem::new(self.ring.one(), f.h.clone()).expect("same ring")];
            entries.extend(f.tail.iter().cloned().map(DualElem::plain));
            w.factors.push(SymbolFactor { entries, exponent: f.exponent });
        }
        w
    }
}

impl fmt::Display for EpsSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.embed(), f)
    }
}

fn top(ring: &FunctionRing) -> BaseTag {
    BaseTag::Level(ring.tower().step_count())
}

fn wedge_all(ring: &FunctionRing, base: BaseTag, forms: &[DiffForm]) -> Result<DiffForm> {
    let mut acc = DiffForm::function(&ring.one(), base)?;
    for w in forms {
        acc = acc.wedge(w)?;
    }
    Ok(acc)
}

/// `Σ e·dlog u₁ ∧ … ∧ dlog u_p` over a base without ε.
pub fn dlog_word(w: &SymbolWord, base: BaseTag) -> Result<DiffForm> {
    if base.is_dual() {
        return dlog_dual_word(w, base);
    }
    if !w.is_plain() {
        return Err(Error::BaseIncompatible(String::from("ε-entries need a dual base")));
    }
    let mut acc = DiffForm::zero(&w.ring, base, w.p);
    for f in &w.factors {
        let logs: Vec<DiffForm> = f.entries.iter().map(|e| dlog(&e.body, base)).collect::<Result<_>>()?;
        let term = wedge_all(&w.ring, base, &logs)?;
        acc = acc.add(&term.scale_int(f.exponent))?;
    }
    Ok(acc)
}

/// dlog over A[ε], relative to `base` (one of the dual bases).
pub fn dlog_dual_word(w: &SymbolWord, base: BaseTag) -> Result<DiffForm> {
    if !base.is_dual() {
        return Err(Error::BaseIncompatible(String::from("expected a dual base")));
    }
    let mut acc = DiffForm::zero(&w.ring, base, w.p);
    for f in &w.factors {
        let mut logs = Vec::with_capacity(f.entries.len());
        for e in &f.entries {
            let inv = dual_inv(e).map_err(|_| Error::NonUnitEntry)?;
            logs.push(d_dual(e, base)?.scale_dual(&inv)?);
        }
        let term = wedge_all(&w.ring, base, &logs)?;
        acc = acc.add(&term.scale_int(f.exponent))?;
    }
    Ok(acc)
}

/// Splits a word over A[ε] into its ε = 0 body and its normalized ε-part.
///
/// Expanding each entry `f_i(1+εh_i)` multilinearly, terms with two or more
/// ε-slots die (ε·dε = 0 and ε² = 0), so only single-slot terms survive;
/// the ε-slot is moved to the front at the cost of `(−1)^{i−1}`.
pub fn eps_split(w: &SymbolWord) -> Result<(SymbolWord, EpsSymbol)> {
    let mut body = SymbolWord::empty(&w.ring, w.p);
    let mut eps = EpsSymbol::empty(&w.ring, w.p);
    for f in &w.factors {
        let bodies: Vec<RingElem> = f.entries.iter().map(|e| e.body.clone()).collect();
        body.push(bodies.iter().cloned().map(DualElem::plain).collect(), f.exponent)?;
        for (i, e) in f.entries.iter().enumerate() {
            if e.slope.is_zero() {
                continue;
            }
            let h = e.slope.div(&e.body).map_err(|_| Error::NonUnitEntry)?;
            let tail: Vec<RingElem> =
                bodies.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            eps.push(h, tail, sign * f.exponent)?;
        }
    }
    Ok((body, eps))
}

/// `Σ e·dh ∧ dlog f₂ ∧ … ∧ dlog f_p`, relative to the whole tower.
pub fn tilde_dlog(s: &EpsSymbol) -> Result<DiffForm> {
    let base = top(&s.ring);
    let mut acc = DiffForm::zero(&s.ring, base, s.p);
    for f in &s.factors {
        let mut forms = vec![d(&f.h, base)?];
        for t in &f.tail {
            forms.push(dlog(t, base)?);
        }
        acc = acc.add(&wedge_all(&s.ring, base, &forms)?.scale_int(f.exponent))?;
    }
    Ok(acc)
}

fn signed_h_dlog_tail(s: &EpsSymbol, base: BaseTag) -> Result<DiffForm> {
    let sign = if s.p % 2 == 1 { 1 } else { -1 };
    let mut acc = DiffForm::zero(&s.ring, base, s.p - 1);
    for f in &s.factors {
        let logs: Vec<DiffForm> = f.tail.iter().map(|t| dlog(t, base)).collect::<Result<_>>()?;
        let w = wedge_all(&s.ring, base, &logs)?.scale(&f.h)?;
        acc = acc.add(&w.scale_int(sign * f.exponent))?;
    }
    Ok(acc)
}

/// `Σ e·(−1)^{p−1}·h·dlog f₂ ∧ … ∧ dlog f_p`, relative to the whole tower.
pub fn beta(s: &EpsSymbol) -> Result<DiffForm> {
    signed_h_dlog_tail(s, top(&s.ring))
}

/// dlog over A[ε] relative to the whole tower (so `dε` survives), followed
/// by the trailing-`dε` truncation.
pub fn beta_via_truncation(s: &EpsSymbol) -> Result<DiffForm> {
    dlog_dual_word(&s.embed(), BaseTag::AbsoluteOnDual)?.contract_deps()
}

/// The same formula as [`beta`] with absolute differentials (base ℚ).
pub fn eps_to_absolute(s: &EpsSymbol) -> Result<DiffForm> {
    signed_h_dlog_tail(s, BaseTag::Level(0))
}

/// dlog of `w` over A[ε] (base with `dε`) against dlog of its body plus dlog
/// of its embedded ε-part.
pub fn recombination(w: &SymbolWord) -> Result<(DiffForm, DiffForm)> {
    let (body, eps) = eps_split(w)?;
    let lhs = dlog_dual_word(w, BaseTag::AbsoluteOnDual)?;
    let rhs = dlog_dual_word(&body, BaseTag::AbsoluteOnDual)?.add(&dlog_dual_word(&eps.embed(), BaseTag::AbsoluteOnDual)?)?;
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Steinberg,
    Multilinearity,
    GradedCommutativity,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Steinberg => "steinberg",
            RelationKind::Multilinearity => "multilinearity",
            RelationKind::GradedCommutativity => "graded-commutativity",
        })
    }
}

/// Two words over A[ε] that the relation identifies.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub lhs: SymbolWord,
    pub rhs: SymbolWord,
}

impl RelationInstance {
    /// `{u, 1−u, rest…} = 1`.
    pub fn steinberg(u: &DualElem, rest: &[DualElem]) -> Result<RelationInstance> {
        let one_minus = DualElem::plain(u.ring().one()).sub(u)?;
        let mut entries = vec![u.clone(), one_minus];
        entries.extend(rest.iter().cloned());
        let lhs = SymbolWord::single(entries, 1)?;
        let rhs = SymbolWord::empty(u.ring(), lhs.p);
        Ok(RelationInstance { kind: RelationKind::Steinberg, lhs, rhs })
    }

    /// `{uv, rest…} = {u, rest…}{v, rest…}`.
    pub fn multilinearity(u: &DualElem, v: &DualElem, rest: &[DualElem]) -> Result<RelationInstance> {
        let word = |first: DualElem| {
            let mut e = vec![first];
            e.extend(rest.iter().cloned());
            SymbolWord::single(e, 1)
        };
        let lhs = word(dual_mul(u, v)?)?;
        let rhs = word(u.clone())?.mul(&word(v.clone())?)?;
        Ok(RelationInstance { kind: RelationKind::Multilinearity, lhs, rhs })
    }

    /// `{u, v, rest…} = {v, u, rest…}⁻¹`.
    pub fn graded_commutativity(u: &DualElem, v: &DualElem, rest: &[DualElem]) -> Result<RelationInstance> {
        let word = |a: &DualElem, b: &DualElem| {
            let mut e = vec![a.clone(), b.clone()];
            e.extend(rest.iter().cloned());
            SymbolWord::single(e, 1)
        };
        let lhs = word(u, v)?;
        let rhs = word(v, u)?.inverse();
        Ok(RelationInstance { kind: RelationKind::GradedCommutativity, lhs, rhs })
    }
}

#[derive(Clone, Debug)]
pub struct MapCheck {
    pub map: &'static str,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub kind: RelationKind,
    pub instance: String,
    pub checks: Vec<MapCheck>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Applies dlog (to the ε = 0 body) and the three ε-maps to both sides.
pub fn relation_check(inst: &RelationInstance) -> Result<RelationReport> {
    let (lb, le) = eps_split(&inst.lhs)?;
    let (rb, re) = eps_split(&inst.rhs)?;
    let base = top(inst.lhs.ring());
    let mut checks = Vec::new();
    let mut push = |map: &'static str, l: DiffForm, r: DiffForm| {
        checks.push(MapCheck { map, pass: l == r, lhs: l.format(), rhs: r.format() });
    };
    push("dlog", dlog_word(&lb, base)?, dlog_word(&rb, base)?);
    push("tilde_dlog", tilde_dlog(&le)?, tilde_dlog(&re)?);
    push("beta", beta(&le)?, beta(&re)?);
    push("eps_to_absolute", eps_to_absolute(&le)?, eps_to_absolute(&re)?);
    Ok(RelationReport { kind: inst.kind, instance: alloc::format!("{} = {}", inst.lhs, inst.rhs), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qq;
    use crate::funcrings::ring_make;
    use crate::scalars::{make_tower, StepSpec, Tower};

    fn ring() -> FunctionRing {
        ring_make(&Tower::rationals(), &["x", "y"], None).unwrap()
    }

    fn dx_dy(r: &FunctionRing) -> DiffForm {
        let b = top(r);
        d(&r.var("x").unwrap(), b).unwrap().wedge(&d(&r.var("y").unwrap(), b).unwrap()).unwrap()
    }

    #[test]
    fn dlog_examples() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let w = dlog_word(&SymbolWord::plain(&[x.clone(), y.clone()]).unwrap(), top(&r)).unwrap();
        assert_eq!(w, dx_dy(&r).scale(&(&x * &y).inv().unwrap()).unwrap());
        let st = SymbolWord::plain(&[x.clone(), &r.one() - &x]).unwrap();
        assert!(dlog_word(&st, top(&r)).unwrap().is_zero());
        let neg = SymbolWord::plain(&[x.clone(), -&x]).unwrap();
        assert!(dlog_word(&neg, top(&r)).unwrap().is_zero());
    }

    #[test]
    fn split_of_first_slot() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let g = &x + &y;
        let w = SymbolWord::single(vec![DualElem::new(x.clone(), g.clone()).unwrap(), DualElem::plain(y.clone())], 1)
            .unwrap();
        let (body, eps) = eps_split(&w).unwrap();
        assert_eq!(body, SymbolWord::plain(&[x.clone(), y.clone()]).unwrap());
        assert_eq!(eps, EpsSymbol::single(g.div(&x).unwrap(), vec![y.clone()], 1).unwrap());
    }

    #[test]
    fn split_of_both_slots() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let a = r.int(3);
        let b = &x - &y;
        let w = SymbolWord::single(vec![DualElem::new(x.clone(), a.clone()).unwrap(), DualElem::new(y.clone(), b.clone()).unwrap()], 1)
            .unwrap();
        let (_, eps) = eps_split(&w).unwrap();
        let mut expect = EpsSymbol::single(a.div(&x).unwrap(), vec![y.clone()], 1).unwrap();
        expect.push(b.div(&y).unwrap(), vec![x.clone()], -1).unwrap();
        assert_eq!(eps, expect);
        let (l, rr) = recombination(&w).unwrap();
        assert_eq!(l, rr);
    }

    #[test]
    fn eps_maps_on_examples() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let s = EpsSymbol::single(x.inv().unwrap(), vec![y.clone()], 1).unwrap();
        let xxy = &(&x * &x) * &y;
        assert_eq!(tilde_dlog(&s).unwrap(), dx_dy(&r).scale(&xxy.inv().unwrap()).unwrap().neg());
        let dy = d(&y, top(&r)).unwrap();
        let expect = dy.scale(&(&x * &y).inv().unwrap()).unwrap().neg();
        assert_eq!(beta(&s).unwrap(), expect);
        assert_eq!(beta_via_truncation(&s).unwrap(), expect);
        let s2 = EpsSymbol::single(x.clone(), vec![y.clone()], 1).unwrap();
        assert_eq!(tilde_dlog(&s2).unwrap(), dx_dy(&r).scale(&y.inv().unwrap()).unwrap());
        let e2 = dy.scale(&x.div(&y).unwrap()).unwrap().neg();
        assert_eq!(beta(&s2).unwrap(), e2);
        assert_eq!(beta_via_truncation(&s2).unwrap(), e2);
        let empty = EpsSymbol::empty(&r, 2);
        assert!(tilde_dlog(&empty).unwrap().is_zero());
        assert!(beta(&empty).unwrap().is_zero());
        assert!(beta_via_truncation(&empty).unwrap().is_zero());
    }

    #[test]
    fn absolute_map_over_transcendental_tower() {
        let k = make_tower(&[StepSpec::transcendental("t")]).unwrap();
        let r = ring_make(&k, &["x"], None).unwrap();
        let t = r.var("t").unwrap();
        let x = r.var("x").unwrap();
        let dx0 = d(&x, BaseTag::Level(0)).unwrap();
        let dt0 = d(&t, BaseTag::Level(0)).unwrap();
        let s = EpsSymbol::single(t.clone(), vec![x.clone()], 1).unwrap();
        assert_eq!(eps_to_absolute(&s).unwrap(), dx0.scale(&t.div(&x).unwrap()).unwrap().neg());
        let s = EpsSymbol::single(x.clone(), vec![t.clone()], 1).unwrap();
        let abs = eps_to_absolute(&s).unwrap();
        assert_eq!(abs, dt0.scale(&x.div(&t).unwrap()).unwrap().neg());
        assert!(abs.base_change(BaseTag::Level(1)).unwrap().is_zero());
        assert!(beta(&s).unwrap().is_zero());
    }

    #[test]
    fn relations_are_killed() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let u = DualElem::new(x.clone(), &y * &y).unwrap();
        let v = DualElem::new(&y + &r.int(2), r.rational(qq(1, 3))).unwrap();
        for inst in [
            RelationInstance::steinberg(&u, &[]).unwrap(),
            RelationInstance::steinberg(&u, std::slice::from_ref(&v)).unwrap(),
            RelationInstance::multilinearity(&u, &v, &[DualElem::plain(y.clone())]).unwrap(),
            RelationInstance::graded_commutativity(&u, &v, &[]).unwrap(),
        ] {
            let rep = relation_check(&inst).unwrap();
            assert!(rep.pass(), "{:?}", rep);
        }
    }
}
