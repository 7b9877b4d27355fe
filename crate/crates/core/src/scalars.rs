//! Towers of field extensions over ℚ and their elements.
//!
//! A tower is an ordered list of steps, each either a simple algebraic
//! extension or a purely transcendental one. Elements are stored as a
//! fraction of polynomials in the transcendental generators whose
//! coefficients lie in the number field generated by the algebraic steps.
//! Minimal polynomials may only involve algebraic generators, so this number
//! field is independent of where the transcendental steps sit.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{Field, Frac, FracField, NfElem, NumberField, Ring, MAX_VARS, Q};
use crate::error::{Error, Result};

/// A sum of rational multiples of monomials in named lower generators.
pub type LowerCoeff = Vec<(Q, Vec<(String, u32)>)>;

#[derive(Clone, Debug, PartialEq)]
pub enum StepSpec {
    /// Root of `c₀ + c₁T + … + c_d T^d`, coefficients listed from `c₀`.
    Algebraic { name: String, minpoly: Vec<LowerCoeff>, trusted: bool },
    Transcendental { name: String },
}

impl StepSpec {
    pub fn algebraic_rational(name: &str, coeffs: &[i64]) -> StepSpec {
        let minpoly = coeffs
            .iter()
            .map(|&c| if c == 0 { Vec::new() } else { vec![(crate::arith::q(c), Vec::new())] })
            .collect();
        StepSpec::Algebraic { name: name.to_string(), minpoly, trusted: false }
    }

    pub fn transcendental(name: &str) -> StepSpec {
        StepSpec::Transcendental { name: name.to_string() }
    }

    pub fn name(&self) -> &str {
        match self {
            StepSpec::Algebraic { name, .. } | StepSpec::Transcendental { name } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Index among algebraic generators and degree of the extension.
    Algebraic { generator: usize, degree: usize },
    /// Index among transcendental generators.
    Transcendental { index: usize },
}

#[derive(Debug)]
pub struct TowerData {
    pub specs: Vec<StepSpec>,
    pub kinds: Vec<StepKind>,
    pub alg_names: Vec<String>,
    pub trans_names: Vec<String>,
    /// Step index of every transcendental generator.
    pub trans_steps: Vec<usize>,
    pub field: FracField,
}

/// Shared handle to an immutable tower; equality is identity.
#[derive(Clone, Debug)]
pub struct Tower(Arc<TowerData>);

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Tower {}

impl core::ops::Deref for Tower {
    type Target = TowerData;
    fn deref(&self) -> &TowerData {
        &self.0
    }
}

pub fn make_tower(steps: &[StepSpec]) -> Result<Tower> {
    let mut nf = NumberField::rationals();
    let mut kinds = Vec::new();
    let mut alg_names: Vec<String> = Vec::new();
    let mut trans_names: Vec<String> = Vec::new();
    let mut trans_steps = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for (idx, step) in steps.iter().enumerate() {
        let name = step.name();
        if !is_identifier(name) {
            return Err(Error::InvalidArgument(alloc::format!("bad generator name `{name}`")));
        }
        if seen.contains(&name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        seen.push(name);
        match step {
            StepSpec::Transcendental { .. } => {
                kinds.push(StepKind::Transcendental { index: trans_names.len() });
                trans_names.push(name.to_string());
                trans_steps.push(idx);
            }
            StepSpec::Algebraic { minpoly, trusted, .. } => {
                let coeffs = resolve_minpoly(&nf, name, minpoly, &alg_names, &trans_names)?;
                let d = coeffs.len() - 1;
                if !coeffs[d].is_one() {
                    return Err(Error::NonMonic(name.to_string()));
                }
                let low: Vec<NfElem> = coeffs[..d].to_vec();
                if d == 1 {
                    let root = nf.neg(&low[0]);
                    return Err(Error::ReducibleMinpoly {
                        name: name.to_string(),
                        root: nf.format(&root, &alg_names),
                    });
                }
                if !trusted {
                    if let Some(root) = find_root(&nf, &coeffs) {
                        return Err(Error::ReducibleMinpoly {
                            name: name.to_string(),
                            root: nf.format(&root, &alg_names),
                        });
                    }
                }
                let ext = nf.extend(&low);
                // separability: f'(a) must be a unit
                let a = ext.generator(alg_names.len());
                let deriv: Vec<NfElem> = (1..=d)
                    .map(|i| ext.scale(&ext.embed_from(&coeffs[i]), &crate::arith::q(i as i64)))
                    .collect();
                if ext.eval_univariate(&deriv, &a).is_zero() {
                    return Err(Error::ReducibleMinpoly {
                        name: name.to_string(),
                        root: String::from("repeated root"),
                    });
                }
                kinds.push(StepKind::Algebraic { generator: alg_names.len(), degree: d });
                alg_names.push(name.to_string());
                nf = ext;
            }
        }
    }
    if trans_names.len() > MAX_VARS {
        return Err(Error::TooManyVariables(trans_names.len()));
    }
    let field = FracField::new(nf, trans_names.len(), None);
    Ok(Tower(Arc::new(TowerData {
        specs: steps.to_vec(),
        kinds,
        alg_names,
        trans_names,
        trans_steps,
        field,
    })))
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn resolve_minpoly(
    nf: &NumberField,
    name: &str,
    minpoly: &[LowerCoeff],
    algs: &[String],
    trans: &[String],
) -> Result<Vec<NfElem>> {
    let mut out = Vec::with_capacity(minpoly.len());
    for coeff in minpoly {
        let mut acc = nf.zero();
        for (c, mono) in coeff {
            let mut t = nf.from_rational(c.clone());
            for (g, e) in mono {
                if let Some(i) = algs.iter().position(|a| a == g) {
                    let gen = nf.generator(i);
                    for _ in 0..*e {
                        t = nf.mul(&t, &gen);
                    }
                } else if trans.contains(g) {
                    return Err(Error::UnsupportedMinpoly(name.to_string()));
                } else {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "unknown generator `{g}` in minimal polynomial of `{name}`"
                    )));
                }
            }
            acc = nf.add(&acc, &t);
        }
        out.push(acc);
    }
    while out.len() > 1 && out.last().is_some_and(NfElem::is_zero) {
        out.pop();
    }
    if out.len() < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "minimal polynomial of `{name}` has degree < 1"
        )));
    }
    Ok(out)
}

/// Bounded root search: rational roots by the rational root test, then small
/// integer combinations of the power basis of the field below.
fn find_root(nf: &NumberField, coeffs: &[NfElem]) -> Option<NfElem> {
    let rational: Option<Vec<Q>> = coeffs.iter().map(|c| c.as_rational().cloned()).collect();
    if let Some(rc) = rational {
        if let Some(r) = rational_root(&rc) {
            return Some(nf.from_rational(r));
        }
    }
    let dim = nf.dim();
    if dim == 1 || dim > 4 {
        return None;
    }
    let range: Vec<i64> = (-3..=3).collect();
    let mut idx = vec![0usize; dim];
    loop {
        let cand = NfElem(idx.iter().map(|&i| crate::arith::q(range[i])).collect());
        if cand.0[1..].iter().any(|c| !c.is_zero()) && nf.eval_univariate(coeffs, &cand).is_zero() {
            return Some(cand);
        }
        let mut k = 0;
        loop {
            if k == dim {
                return None;
            }
            idx[k] += 1;
            if idx[k] < range.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn rational_root(coeffs: &[Q]) -> Option<Q> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    if ints[0].is_zero() {
        return Some(Q::zero());
    }
    let a0 = ints[0].abs().to_u64()?;
    let ad = ints.last().unwrap().abs().to_u64()?;
    if a0 > 1_000_000 || ad > 1_000_000 {
        return None;
    }
    let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
    for num in divisors(a0) {
        for den in divisors(ad) {
            for sign in [1i64, -1] {
                let r = Q::new(BigInt::from(num) * sign, BigInt::from(den));
                let mut acc = Q::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &r + c;
                }
                if acc.is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

impl Tower {
    pub fn rationals() -> Tower {
        make_tower(&[]).expect("empty tower is valid")
    }

    pub fn step_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn trans_count(&self) -> usize {
        self.trans_names.len()
    }

    pub fn nf(&self) -> &NumberField {
        &self.field.nf
    }

    pub fn field(&self) -> &FracField {
        &self.field
    }

    pub fn is_number_field(&self) -> bool {
        self.trans_names.is_empty()
    }

    /// Transcendental generators whose steps lie at or above `level`.
    pub fn trans_above(&self, level: usize) -> Vec<usize> {
        (0..self.trans_count()).filter(|&j| self.trans_steps[j] >= level).collect()
    }

    /// Transcendental generators with steps in `[from, to)`.
    pub fn trans_between(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.trans_count())
            .filter(|&j| self.trans_steps[j] >= from && self.trans_steps[j] < to)
            .collect()
    }

    /// The tower formed by the first `level` steps.
    pub fn prefix(&self, level: usize) -> Result<Tower> {
        make_tower(&self.specs[..level.min(self.specs.len())])
    }

    /// True when the first steps of `self` are exactly the steps of `sub`.
    pub fn extends(&self, sub: &Tower) -> bool {
        sub.specs.len() <= self.specs.len() && self.specs[..sub.specs.len()] == sub.specs[..]
    }

    pub fn names(&self) -> Vec<String> {
        self.specs.iter().map(|s| s.name().to_string()).collect()
    }

    pub fn format_frac(&self, f: &Frac, extra_vars: &[String]) -> String {
        let mut vars = self.trans_names.clone();
        vars.extend(extra_vars.iter().cloned());
        format_frac(self.nf(), f, &vars, &self.alg_names)
    }

    pub fn describe(&self) -> String {
        if self.specs.is_empty() {
            return String::from("Q");
        }
        let mut s = String::from("Q");
        for spec in &self.specs {
            s.push('(');
            s.push_str(spec.name());
            s.push(')');
        }
        s
    }
}

pub fn format_frac(nf: &NumberField, f: &Frac, vars: &[String], algs: &[String]) -> String {
    let num = f.num.format(nf, vars, algs);
    if f.den.is_constant() {
        return num;
    }
    let den = f.den.format(nf, vars, algs);
    let num = if f.num.len() > 1 { alloc::format!("({num})") } else { num };
    let den = if den.contains([' ', '*']) { alloc::format!("({den})") } else { den };
    alloc::format!("{num}/{den}")
}

/// An element of a tower in canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct Scalar {
    tower: Tower,
    value: Frac,
}

impl Scalar {
    pub fn from_frac(tower: &Tower, value: Frac) -> Scalar {
        Scalar { tower: tower.clone(), value }
    }

    pub fn from_int(tower: &Tower, n: i64) -> Scalar {
        Scalar::from_frac(tower, tower.field.from_int(n))
    }

    pub fn from_rational(tower: &Tower, c: Q) -> Scalar {
        Scalar::from_frac(tower, tower.field.from_rational(c))
    }

    pub fn generator(tower: &Tower, name: &str) -> Result<Scalar> {
        if let Some(i) = tower.alg_names.iter().position(|n| n == name) {
            return Ok(Scalar::from_frac(tower, tower.field.from_nf(tower.nf().generator(i))));
        }
        if let Some(j) = tower.trans_names.iter().position(|n| n == name) {
            return Ok(Scalar::from_frac(tower, tower.field.var(j)));
        }
        Err(Error::InvalidArgument(alloc::format!("unknown generator `{name}`")))
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn value(&self) -> &Frac {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, o: &Scalar) -> Result<()> {
        if self.tower == o.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        Ok(Scalar::from_frac(&self.tower, self.tower.field.add(&self.value, &o.value)))
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        Ok(Scalar::from_frac(&self.tower, self.tower.field.sub(&self.value, &o.value)))
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        self.check(o)?;
        Ok(Scalar::from_frac(&self.tower, self.tower.field.mul(&self.value, &o.value)))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::from_frac(&self.tower, self.tower.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Scalar> {
        let v = self.tower.field.inv(&self.value).ok_or(Error::DivisionByZero)?;
        Ok(Scalar::from_frac(&self.tower, v))
    }

    /// Re-derives the canonical form from the stored representative.
    pub fn normalize(&self) -> Scalar {
        let f = &self.tower.field;
        let v = f.frac(self.value.num.clone(), self.value.den.clone()).expect("nonzero denominator");
        Scalar::from_frac(&self.tower, v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower.format_frac(&self.value, &[]))
    }
}

pub fn scalar_add(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.add(b)
}

pub fn scalar_mul(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.mul(b)
}

pub fn scalar_inv(a: &Scalar) -> Result<Scalar> {
    a.inv()
}

pub fn is_number_field(tower: &Tower) -> bool {
    tower.is_number_field()
}

/// The derivative of the minimal polynomial of algebraic generator `gen`,
/// evaluated at that generator.
pub fn minpoly_derivative_at_generator(tower: &Tower, gen: usize) -> NfElem {
    let nf = tower.nf();
    let low = nf.minpoly(gen);
    let d = low.len();
    let mut deriv: Vec<NfElem> = (1..d).map(|i| nf.scale(&nf.embed_from(&low[i]), &crate::arith::q(i as i64))).collect();
    deriv.push(nf.from_int(d as i64));
    nf.eval_univariate(&deriv, &nf.generator(gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qq;

    fn sqrt2() -> Tower {
        make_tower(&[StepSpec::algebraic_rational("r2", &[-2, 0, 1])]).unwrap()
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let k = sqrt2();
        let r = Scalar::generator(&k, "r2").unwrap();
        assert_eq!(r.mul(&r).unwrap(), Scalar::from_int(&k, 2));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        let k = sqrt2();
        let r = Scalar::generator(&k, "r2").unwrap();
        let a = r.add(&Scalar::from_int(&k, 1)).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(inv, r.sub(&Scalar::from_int(&k, 1)).unwrap());
        assert_eq!(a.mul(&inv).unwrap(), Scalar::from_int(&k, 1));
    }

    #[test]
    fn transcendental_fraction() {
        let k = make_tower(&[StepSpec::transcendental("t")]).unwrap();
        let t = Scalar::generator(&k, "t").unwrap();
        let s = t.add(&t.inv().unwrap()).unwrap();
        assert_eq!(s.to_string(), "(t^2 + 1)/t");
    }

    #[test]
    fn composite_tower() {
        let k = make_tower(&[StepSpec::transcendental("t"), StepSpec::algebraic_rational("i", &[1, 0, 1])]).unwrap();
        assert!(!k.is_number_field());
        let i = Scalar::generator(&k, "i").unwrap();
        assert_eq!(i.mul(&i).unwrap(), Scalar::from_int(&k, -1));
    }

    #[test]
    fn rejections() {
        let e = make_tower(&[StepSpec::algebraic_rational("a", &[-4, 0, 1])]).unwrap_err();
        assert!(matches!(e, Error::ReducibleMinpoly { .. }));
        let e = make_tower(&[StepSpec::transcendental("t"), StepSpec::transcendental("t")]).unwrap_err();
        assert_eq!(e, Error::DuplicateName("t".into()));
        let e = make_tower(&[StepSpec::algebraic_rational("a", &[-2, 0, 2])]).unwrap_err();
        assert_eq!(e, Error::NonMonic("a".into()));
        // √2 is a root of T² − 2 over ℚ(√2)
        let spec = StepSpec::Algebraic {
            name: "b".into(),
            minpoly: vec![vec![(qq(-2, 1), vec![])], vec![], vec![(qq(1, 1), vec![])]],
            trusted: false,
        };
        let e = make_tower(&[StepSpec::algebraic_rational("r2", &[-2, 0, 1]), spec]).unwrap_err();
        assert!(matches!(e, Error::ReducibleMinpoly { .. }));
        let spec = StepSpec::Algebraic {
            name: "b".into(),
            minpoly: vec![vec![(qq(-1, 1), vec![("t".into(), 1)])], vec![], vec![(qq(1, 1), vec![])]],
            trusted: false,
        };
        let e = make_tower(&[StepSpec::transcendental("t"), spec]).unwrap_err();
        assert_eq!(e, Error::UnsupportedMinpoly("b".into()));
    }

    #[test]
    fn number_field_predicate() {
        assert!(sqrt2().is_number_field());
        assert!(Tower::rationals().is_number_field());
        assert!(!make_tower(&[StepSpec::transcendental("t")]).unwrap().is_number_field());
    }

    #[test]
    fn separability_at_generators() {
        let k = make_tower(&[
            StepSpec::algebraic_rational("r2", &[-2, 0, 1]),
            StepSpec::algebraic_rational("c", &[-3, 0, 0, 1]),
        ])
        .unwrap();
        for g in 0..2 {
            assert!(!minpoly_derivative_at_generator(&k, g).is_zero());
        }
    }

    #[test]
    fn tower_mismatch() {
        let a = Scalar::from_int(&sqrt2(), 1);
        let b = Scalar::from_int(&sqrt2(), 1);
        assert_eq!(a.add(&b).unwrap_err(), Error::TowerMismatch);
    }
}
