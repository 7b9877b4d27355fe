//! Bounded complexes of form modules: the tangent Deligne complex, the split
//! of its ε-deformation, and the α/δ comparison diagram.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::differentials::{alphabet, d, BaseTag, DiffForm, Letter};
use crate::error::{Error, Result};
use crate::funcrings::{FunctionRing, RingElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermDesc {
    Forms(usize),
    /// `Ω^a ⊕ Ω^b`.
    Sum(usize, usize),
    Zero,
}

impl fmt::Display for TermDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermDesc::Forms(r) => write!(f, "Omega^{r}"),
            TermDesc::Sum(a, b) => write!(f, "Omega^{a} + Omega^{b}"),
            TermDesc::Zero => f.write_str("0"),
        }
    }
}

/// Named operators between terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Zero,
    /// `x ↦ sign·dx`.
    D(i64),
    Scale(i64),
    /// `x ↦ sign·(dx, x)`.
    AlphaTop(i64),
    /// `x ↦ sign·(0, dx)`.
    DeltaPenult(i64),
    /// `(x, y) ↦ sign·(−dx, −x + dy)`.
    DeltaTop(i64),
}

#[derive(Clone, Debug)]
pub enum Elem {
    Zero,
    Single(DiffForm),
    Pair(DiffForm, DiffForm),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Zero => true,
            Elem::Single(a) => a.is_zero(),
            Elem::Pair(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    pub fn sub(&self, o: &Elem) -> Result<Elem> {
        Ok(match (self, o) {
            (x, Elem::Zero) => x.clone(),
            (Elem::Zero, Elem::Single(b)) => Elem::Single(b.neg()),
            (Elem::Zero, Elem::Pair(a, b)) => Elem::Pair(a.neg(), b.neg()),
            (Elem::Single(a), Elem::Single(b)) => Elem::Single(a.sub(b)?),
            (Elem::Pair(a, b), Elem::Pair(c, e)) => Elem::Pair(a.sub(c)?, b.sub(e)?),
            _ => return Err(Error::Mismatch(String::from("elements of different term shapes"))),
        })
    }

    pub fn format(&self) -> String {
        match self {
            Elem::Zero => String::from("0"),
            Elem::Single(a) => a.format(),
            Elem::Pair(a, b) => alloc::format!("({}, {})", a.format(), b.format()),
        }
    }
}

fn single(e: &Elem) -> Result<&DiffForm> {
    match e {
        Elem::Single(a) => Ok(a),
        _ => Err(Error::Mismatch(String::from("operator expects a single form"))),
    }
}

fn zero_form_like(w: &DiffForm, degree: usize) -> DiffForm {
    DiffForm::zero(w.ring(), w.base(), degree)
}

impl Op {
    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        if matches!(x, Elem::Zero) {
            return Ok(Elem::Zero);
        }
        Ok(match *self {
            Op::Zero => Elem::Zero,
            Op::D(s) => Elem::Single(single(x)?.d()?.scale_int(s)),
            Op::Scale(s) => match x {
                Elem::Single(a) => Elem::Single(a.scale_int(s)),
                Elem::Pair(a, b) => Elem::Pair(a.scale_int(s), b.scale_int(s)),
                Elem::Zero => Elem::Zero,
            },
            Op::AlphaTop(s) => {
                let a = single(x)?;
                Elem::Pair(a.d()?.scale_int(s), a.scale_int(s))
            }
            Op::DeltaPenult(s) => {
                let a = single(x)?;
                Elem::Pair(zero_form_like(a, a.degree() + 2), a.d()?.scale_int(s))
            }
            Op::DeltaTop(s) => match x {
                Elem::Pair(a, b) => Elem::Pair(a.d()?.scale_int(-s), b.d()?.sub(a)?.scale_int(s)),
                _ => return Err(Error::Mismatch(String::from("δ_p expects a pair"))),
            },
        })
    }

    pub fn name(&self) -> String {
        match *self {
            Op::Zero => String::from("0"),
            Op::D(1) => String::from("d"),
            Op::D(s) => alloc::format!("{s}*d"),
            Op::Scale(s) => alloc::format!("{s}"),
            Op::AlphaTop(s) => alloc::format!("{s}*(d, id)"),
            Op::DeltaPenult(s) => alloc::format!("{s}*(0, d)"),
            Op::DeltaTop(s) => alloc::format!("{s}*delta"),
        }
    }
}

/// Terms in degrees `start, start+1, …`; `diffs[i]` leaves `terms[i]`. The
/// differential out of the last term is zero.
#[derive(Clone, Debug)]
pub struct Complex {
    pub ring: FunctionRing,
    pub base: BaseTag,
    pub start: i64,
    pub terms: Vec<TermDesc>,
    pub diffs: Vec<Op>,
}

impl Complex {
    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64 - 1
    }

    pub fn term(&self, n: i64) -> TermDesc {
        if n < self.start || n > self.end() {
            TermDesc::Zero
        } else {
            self.terms[(n - self.start) as usize]
        }
    }

    pub fn diff(&self, n: i64) -> Op {
        if n < self.start || n >= self.end() {
            Op::Zero
        } else {
            self.diffs[(n - self.start) as usize]
        }
    }

    pub fn describe(&self) -> Vec<String> {
        (self.start..=self.end()).map(|n| alloc::format!("{n}: {}", self.term(n))).collect()
    }
}

/// `O → Ω¹ → … → Ω^{p−1}` in degrees `1..p` with the differential of `base`.
pub fn tangent_deligne(p: usize, ring: &FunctionRing, base: BaseTag) -> Result<Complex> {
    if p == 0 {
        return Err(Error::InvalidArgument(String::from("p must be positive")));
    }
    Ok(Complex {
        ring: ring.clone(),
        base,
        start: 1,
        terms: (0..p).map(TermDesc::Forms).collect(),
        diffs: vec![Op::D(1); p - 1],
    })
}

/// Bottom row of the α/δ diagram through degree `p+1`.
pub fn bottom_complex(p: usize, ring: &FunctionRing, base: BaseTag) -> Result<Complex> {
    if p < 2 {
        return Err(Error::InvalidArgument(String::from("the α/δ diagram needs p ≥ 2")));
    }
    let mut terms: Vec<TermDesc> = (0..p - 1).map(TermDesc::Forms).collect();
    terms.push(TermDesc::Sum(p, p - 1));
    terms.push(TermDesc::Sum(p + 1, p));
    let mut diffs = vec![Op::D(-1); p - 2];
    diffs.push(Op::DeltaPenult(-1));
    diffs.push(Op::DeltaTop(-1));
    Ok(Complex { ring: ring.clone(), base, start: 1, terms, diffs })
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct ChainMapSpec {
    pub source: Complex,
    pub target: Complex,
    pub start: i64,
    pub components: Vec<Op>,
}

impl ChainMapSpec {
    pub fn component(&self, n: i64) -> Op {
        if n < self.start || n >= self.start + self.components.len() as i64 {
            Op::Zero
        } else {
            self.components[(n - self.start) as usize]
        }
    }
}

/// α from the tangent Deligne complex into the bottom complex.
pub fn alpha_delta_diagram(p: usize, ring: &FunctionRing) -> Result<ChainMapSpec> {
    let base = BaseTag::Level(ring.tower().step_count());
    let source = tangent_deligne(p, ring, base)?;
    let target = bottom_complex(p, ring, base)?;
    let mut components: Vec<Op> = (1..p).map(|i| Op::Scale(sign(i - 1))).collect();
    components.push(Op::AlphaTop(sign(p - 1)));
    components.push(Op::Zero);
    Ok(ChainMapSpec { source, target, start: 1, components })
}

/// `(−1)^{p−1}·ω`, the element that α_p sends to `(dω, ω)`.
pub fn unique_preimage(omega: &DiffForm, p: usize) -> Result<DiffForm> {
    if p == 0 {
        return Err(Error::InvalidArgument(String::from("p must be positive")));
    }
    let x = omega.scale_int(sign(p - 1));
    let got = Op::AlphaTop(sign(p - 1)).apply(&Elem::Single(x.clone()))?;
    let want = Elem::Pair(omega.d()?, omega.clone());
    if !got.sub(&want)?.is_zero() {
        return Err(Error::Mismatch(String::from("α_p does not send the preimage to (dω, ω)")));
    }
    Ok(x)
}

/// Wedge-basis monomials of degree `r` times each of `1, x, y, 1/x, x·y`,
/// where `x`, `y` are the first two ring variables.
pub fn test_forms(ring: &FunctionRing, base: BaseTag, r: usize) -> Result<Vec<DiffForm>> {
    let letters: Vec<DiffForm> = alphabet(ring, base)
        .into_iter()
        .filter_map(|(_, l)| match l {
            Letter::Var(v) => Some(v),
            Letter::Eps => None,
        })
        .map(|v| d(&ring.elem(ring.field().var(v)), base))
        .collect::<Result<_>>()?;
    let coeffs = coefficient_family(ring)?;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << letters.len()) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let mut w = DiffForm::function(&ring.one(), base)?;
        for (i, l) in letters.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w = w.wedge(l)?;
            }
        }
        for c in &coeffs {
            out.push(w.scale(c)?);
        }
    }
    Ok(out)
}

fn coefficient_family(ring: &FunctionRing) -> Result<Vec<RingElem>> {
    let nt = ring.tower().trans_count();
    let var = |i: usize| ring.elem(ring.field().var(nt + i));
    let x = var(0);
    let mut out = vec![ring.one(), x.clone()];
    if ring.var_count() > 1 {
        let y = var(1);
        out.push(y.clone());
        out.push(x.inv()?);
        out.push(&x * &y);
    } else {
        out.push(x.inv()?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub tested: usize,
    /// First failing input with both sides, when any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub p: usize,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
    pub checks: Vec<IdentityCheck>,
}

impl DiagramReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Checker {
    checks: Vec<IdentityCheck>,
}

impl Checker {
    fn run(&mut self, name: String, inputs: &[Elem], lhs: impl Fn(&Elem) -> Result<Elem>, rhs: impl Fn(&Elem) -> Result<Elem>) -> Result<()> {
        let mut witness = None;
        for x in inputs {
            let l = lhs(x)?;
            let r = rhs(x)?;
            if !l.sub(&r)?.is_zero() {
                witness = Some(alloc::format!("input {}: {} vs {}", x.format(), l.format(), r.format()));
                break;
            }
        }
        self.checks.push(IdentityCheck { name, pass: witness.is_none(), tested: inputs.len(), witness });
        Ok(())
    }
}

fn inputs_for(term: TermDesc, ring: &FunctionRing, base: BaseTag) -> Result<Vec<Elem>> {
    Ok(match term {
        TermDesc::Zero => Vec::new(),
        TermDesc::Forms(r) => test_forms(ring, base, r)?.into_iter().map(Elem::Single).collect(),
        TermDesc::Sum(a, b) => {
            let xs = test_forms(ring, base, a)?;
            let ys = test_forms(ring, base, b)?;
            let zx = DiffForm::zero(ring, base, a);
            let zy = DiffForm::zero(ring, base, b);
            let mut out: Vec<Elem> = xs.iter().map(|x| Elem::Pair(x.clone(), zy.clone())).collect();
            out.extend(ys.iter().map(|y| Elem::Pair(zx.clone(), y.clone())));
            out
        }
    })
}

fn check_d_squared(ck: &mut Checker, label: &str, cx: &Complex) -> Result<()> {
    for n in cx.start..cx.end() {
        let inputs = inputs_for(cx.term(n), &cx.ring, cx.base)?;
        let (a, b) = (cx.diff(n), cx.diff(n + 1));
        ck.run(alloc::format!("{label}: d{} o d{n} = 0", n + 1), &inputs, |x| b.apply(&a.apply(x)?), |_| Ok(Elem::Zero))?;
    }
    Ok(())
}

/// Verifies d² = 0 on both rows, every square of α, `δ_p∘α_p = 0` and the
/// preimage identity, on the fixed test-form family.
pub fn verify_alpha_delta(p: usize, ring: &FunctionRing) -> Result<DiagramReport> {
    let map = alpha_delta_diagram(p, ring)?;
    let (src, tgt) = (&map.source, &map.target);
    let base = src.base;
    let mut ck = Checker { checks: Vec::new() };
    check_d_squared(&mut ck, "top", src)?;
    check_d_squared(&mut ck, "bottom", tgt)?;
    for n in src.start..=src.end() {
        let inputs = inputs_for(src.term(n), ring, base)?;
        let (f0, f1, ds, dt) = (map.component(n), map.component(n + 1), src.diff(n), tgt.diff(n));
        ck.run(
            alloc::format!("square at degree {n}"),
            &inputs,
            |x| f1.apply(&ds.apply(x)?),
            |x| dt.apply(&f0.apply(x)?),
        )?;
    }
    let top_inputs = inputs_for(TermDesc::Forms(p - 1), ring, base)?;
    ck.run(
        String::from("delta_p o alpha_p = 0"),
        &top_inputs,
        |x| Op::DeltaTop(1).apply(&Op::AlphaTop(sign(p - 1)).apply(x)?),
        |_| Ok(Elem::Zero),
    )?;
    ck.run(
        String::from("alpha_p((-1)^(p-1) w) = (dw, w)"),
        &top_inputs,
        |x| Op::AlphaTop(sign(p - 1)).apply(&Elem::Single(unique_preimage(single(x)?, p)?)),
        |x| {
            let w = single(x)?;
            Ok(Elem::Pair(w.d()?, w.clone()))
        },
    )?;
    Ok(DiagramReport { p, top: src.describe(), bottom: tgt.describe(), checks: ck.checks })
}

/// Checks, on test forms of degrees `0..p`, that forms over A[ε] relative to
/// (tower)[ε] split as body ⊕ ε·slope compatibly with d.
pub fn deformed_deligne_split(p: usize, ring: &FunctionRing) -> Result<DiagramReport> {
    if p == 0 {
        return Err(Error::InvalidArgument(String::from("p must be positive")));
    }
    let top = BaseTag::Level(ring.tower().step_count());
    let dual = BaseTag::DualRelative;
    let mut checks = Vec::new();
    for r in 0..p {
        let forms = test_forms(ring, top, r)?;
        let mut witness = None;
        let mut tested = 0;
        for (i, a) in forms.iter().enumerate() {
            let b = &forms[(i * 7 + 3) % forms.len()];
            let w = DiffForm::from_parts(a, b, dual)?;
            tested += 1;
            let dw = w.d()?;
            let ok = w.body_part() == *a
                && w.slope_part() == *b
                && DiffForm::from_parts(&w.body_part(), &w.slope_part(), dual)? == w
                && dw.body_part() == a.d()?
                && dw.slope_part() == b.d()?;
            let eps_only = DiffForm::from_parts(&DiffForm::zero(ring, top, r), b, dual)?.d()?;
            let stays = eps_only.body_part().is_zero();
            if !(ok && stays) && witness.is_none() {
                witness = Some(alloc::format!("({}) + eps*({})", a.format(), b.format()));
            }
        }
        checks.push(IdentityCheck {
            name: alloc::format!("Omega^{r} over the dual base splits compatibly with d"),
            pass: witness.is_none(),
            tested,
            witness,
        });
    }
    let cx = tangent_deligne(p, ring, top)?;
    Ok(DiagramReport { p, top: cx.describe(), bottom: Vec::new(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrings::ring_make;
    use crate::scalars::Tower;

    fn ring() -> FunctionRing {
        ring_make(&Tower::rationals(), &["x", "y", "z", "w", "v"], None).unwrap()
    }

    #[test]
    fn shapes() {
        let r = ring();
        let b = BaseTag::Level(0);
        let c = tangent_deligne(1, &r, b).unwrap();
        assert_eq!(c.terms, vec![TermDesc::Forms(0)]);
        let c = tangent_deligne(3, &r, b).unwrap();
        assert_eq!(c.terms, vec![TermDesc::Forms(0), TermDesc::Forms(1), TermDesc::Forms(2)]);
        assert_eq!((c.start, c.end()), (1, 3));
        let bot = bottom_complex(2, &r, b).unwrap();
        assert_eq!(bot.terms, vec![TermDesc::Forms(0), TermDesc::Sum(2, 1), TermDesc::Sum(3, 2)]);
    }

    #[test]
    fn diagram_commutes() {
        let r = ring();
        for p in 2..=4 {
            let rep = verify_alpha_delta(p, &r).unwrap();
            assert!(rep.pass(), "{:?}", rep.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn broken_sign_is_caught() {
        let r = ring();
        let base = BaseTag::Level(0);
        let xs = inputs_for(TermDesc::Forms(1), &r, base).unwrap();
        let mut ck = Checker { checks: Vec::new() };
        ck.run(String::from("bad"), &xs, |x| Op::DeltaTop(1).apply(&Op::AlphaTop(1).apply(x)?), |x| Op::AlphaTop(1).apply(x))
            .unwrap();
        assert!(!ck.checks[0].pass);
        assert!(ck.checks[0].witness.is_some());
    }

    #[test]
    fn preimage_signs() {
        let r = ring();
        let base = BaseTag::Level(0);
        let x = r.var("x").unwrap();
        let w = d(&r.var("y").unwrap(), base).unwrap().scale(&x.inv().unwrap()).unwrap();
        assert_eq!(unique_preimage(&w, 2).unwrap(), w.neg());
        assert_eq!(unique_preimage(&w, 3).unwrap(), w);
        let z = DiffForm::zero(&r, base, 1);
        assert!(unique_preimage(&z, 2).unwrap().is_zero());
    }

    #[test]
    fn dual_split() {
        let r = ring();
        let rep = deformed_deligne_split(3, &r).unwrap();
        assert!(rep.pass(), "{:?}", rep.checks);
    }
}
