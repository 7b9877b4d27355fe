//! Evaluation of parsed expressions in a function ring.

use std::collections::BTreeMap;
use std::fmt;

use deligne_core::differentials::{BaseTag, DiffForm};
use deligne_core::funcrings::{dual_inv, dual_mul, DualElem, FunctionRing, RingElem};
use deligne_core::milnor::{eps_split, EpsSymbol, SymbolWord};
use deligne_core::scalars::StepKind;

use crate::expr::{parse_resolved, DBase, Expr};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Function(RingElem),
    Dual(DualElem),
    Form(DiffForm),
    Symbol(SymbolWord),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Function(x) => write!(f, "{x}"),
            Value::Dual(x) => write!(f, "{x}"),
            Value::Form(w) => f.write_str(&w.format()),
            Value::Symbol(s) => write!(f, "{s}"),
        }
    }
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Function(_) => "function",
            Value::Dual(_) => "dual number",
            Value::Form(_) => "form",
            Value::Symbol(_) => "symbol",
        }
    }
}

/// Ring, tower and named values in which expressions are evaluated.
pub struct Scope {
    pub ring: FunctionRing,
    pub named: BTreeMap<String, Value>,
}

type EResult<T> = Result<T, String>;

fn core<T>(r: deligne_core::Result<T>) -> EResult<T> {
    r.map_err(|e| e.to_string())
}

impl Scope {
    pub fn new(ring: FunctionRing) -> Scope {
        Scope { ring, named: BTreeMap::new() }
    }

    pub fn knows(&self, name: &str) -> bool {
        self.named.contains_key(name) || self.ring.var(name).is_ok()
    }

    /// Number of leading algebraic steps: the level of `d_k`.
    pub fn k_level(&self) -> usize {
        self.ring.tower().kinds.iter().take_while(|k| matches!(k, StepKind::Algebraic { .. })).count()
    }

    pub fn top(&self) -> BaseTag {
        BaseTag::Level(self.ring.tower().step_count())
    }

    /// Parses `text` against this scope and evaluates it.
    pub fn eval_str(&self, text: &str) -> EResult<Value> {
        let e = parse_resolved(text, &|s| self.knows(s)).map_err(|e| e.to_string())?;
        self.eval(&e)
    }

    pub fn define(&mut self, name: &str, text: &str) -> EResult<()> {
        let v = self.eval_str(text)?;
        self.named.insert(name.to_string(), v);
        Ok(())
    }

    pub fn eval(&self, e: &Expr) -> EResult<Value> {
        Ok(match e {
            Expr::Int(n) => Value::Function(self.ring.int(*n)),
            Expr::Ident(name) => match self.named.get(name) {
                Some(v) => v.clone(),
                None => Value::Function(core(self.ring.var(name))?),
            },
            Expr::Eps => Value::Dual(DualElem::eps(&self.ring)),
            Expr::Neg(a) => self.neg(self.eval(a)?)?,
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?)?,
            Expr::Sub(a, b) => {
                let nb = self.neg(self.eval(b)?)?;
                self.add(self.eval(a)?, nb)?
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?)?,
            Expr::Div(a, b) => {
                let inv = self.inv(self.eval(b)?)?;
                self.mul(self.eval(a)?, inv)?
            }
            Expr::Pow(a, n) => self.pow(self.eval(a)?, *n)?,
            Expr::Wedge(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let base = match (&x, &y) {
                    (Value::Form(w), _) | (_, Value::Form(w)) => w.base(),
                    _ => return Err(String::from("wedge needs at least one form")),
                };
                Value::Form(core(self.as_form(x, base)?.wedge(&self.as_form(y, base)?))?)
            }
            Expr::D(b, a) => {
                let v = self.eval(a)?;
                let has_eps = match &v {
                    Value::Dual(x) => !x.slope.is_zero(),
                    Value::Form(w) => w.base().is_dual(),
                    _ => false,
                };
                let base = match b {
                    DBase::Q => BaseTag::Level(0),
                    DBase::K => BaseTag::Level(self.k_level()),
                    DBase::C if has_eps => BaseTag::AbsoluteOnDual,
                    DBase::C => self.top(),
                    DBase::CEps => BaseTag::DualRelative,
                };
                Value::Form(core(self.as_form(v, base)?.d())?)
            }
            Expr::Symbol(entries) => {
                let xs = entries.iter().map(|x| self.as_dual(self.eval(x)?)).collect::<EResult<Vec<_>>>()?;
                Value::Symbol(core(SymbolWord::single(xs, 1))?)
            }
        })
    }

    fn as_dual(&self, v: Value) -> EResult<DualElem> {
        match v {
            Value::Function(f) => Ok(DualElem::plain(f)),
            Value::Dual(x) => Ok(x),
            other => Err(format!("expected a function or dual number, found a {}", other.kind())),
        }
    }

    fn as_form(&self, v: Value, base: BaseTag) -> EResult<DiffForm> {
        match v {
            Value::Function(f) => core(DiffForm::function(&f, base)),
            Value::Dual(x) => core(DiffForm::dual_function(&x, base)),
            Value::Form(w) if w.base() == base => Ok(w),
            Value::Form(w) => Err(format!("form over {} used over {base}", w.base())),
            Value::Symbol(_) => Err(String::from("a symbol is not a form")),
        }
    }

    fn neg(&self, v: Value) -> EResult<Value> {
        Ok(match v {
            Value::Function(f) => Value::Function(-&f),
            Value::Dual(x) => Value::Dual(x.neg()),
            Value::Form(w) => Value::Form(w.neg()),
            Value::Symbol(_) => return Err(String::from("symbols form a multiplicative group; use ^-1")),
        })
    }

    fn add(&self, a: Value, b: Value) -> EResult<Value> {
        Ok(match (a, b) {
            (Value::Function(x), Value::Function(y)) => Value::Function(core(x.try_add(&y))?),
            (Value::Form(w), other) | (other, Value::Form(w)) => {
                let base = w.base();
                Value::Form(core(w.add(&self.as_form(other, base)?))?)
            }
            (Value::Symbol(_), _) | (_, Value::Symbol(_)) => return Err(String::from("symbols cannot be added")),
            (x, y) => Value::Dual(core(self.as_dual(x)?.add(&self.as_dual(y)?))?),
        })
    }

    fn mul(&self, a: Value, b: Value) -> EResult<Value> {
        Ok(match (a, b) {
            (Value::Function(x), Value::Function(y)) => Value::Function(core(x.try_mul(&y))?),
            (Value::Symbol(x), Value::Symbol(y)) => Value::Symbol(core(x.mul(&y))?),
            (Value::Symbol(_), _) | (_, Value::Symbol(_)) => return Err(String::from("symbols multiply only with symbols")),
            (Value::Form(w), Value::Form(o)) => Value::Form(core(w.wedge(&o))?),
            (Value::Form(w), Value::Function(f)) | (Value::Function(f), Value::Form(w)) => Value::Form(core(w.scale(&f))?),
            (Value::Form(w), Value::Dual(x)) | (Value::Dual(x), Value::Form(w)) => Value::Form(core(w.scale_dual(&x))?),
            (x, y) => Value::Dual(core(dual_mul(&self.as_dual(x)?, &self.as_dual(y)?))?),
        })
    }

    fn inv(&self, v: Value) -> EResult<Value> {
        Ok(match v {
            Value::Function(f) => Value::Function(core(f.inv())?),
            Value::Dual(x) => Value::Dual(core(dual_inv(&x))?),
            Value::Symbol(s) => Value::Symbol(s.inverse()),
            Value::Form(_) => return Err(String::from("cannot divide by a form")),
        })
    }

    fn pow(&self, v: Value, n: i64) -> EResult<Value> {
        if let Value::Function(f) = &v {
            return Ok(Value::Function(core(f.pow(n))?));
        }
        if let Value::Form(_) = v {
            return Err(String::from("forms have no powers"));
        }
        let base = if n < 0 { self.inv(v)? } else { v };
        let mut acc = match &base {
            Value::Symbol(s) => Value::Symbol(SymbolWord::empty(&self.ring, s.p())),
            _ => Value::Function(self.ring.one()),
        };
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(acc, base.clone())?;
        }
        Ok(acc)
    }
}

/// The ε-part of a symbol value, as an EpsSymbol.
pub fn eps_part(v: &Value) -> EResult<EpsSymbol> {
    match v {
        Value::Symbol(w) => Ok(core(eps_split(w))?.1),
        other => Err(format!("expected a symbol, found a {}", other.kind())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use deligne_core::funcrings::ring_make;
    use deligne_core::milnor::{beta, tilde_dlog};
    use deligne_core::scalars::Tower;

    fn scope() -> Scope {
        Scope::new(ring_make(&Tower::rationals(), &["x", "y"], None).unwrap())
    }

    #[test]
    fn forms_and_symbols() {
        let s = scope();
        let w = s.eval_str("d_C(x) ∧ d_C(y)/y").unwrap();
        let v = s.eval_str("d_C(x) /\\ d_C(y) * y^-1").unwrap();
        assert_eq!(w, v);
        let e = eps_part(&s.eval_str("{1 + eps*(1/x), y}").unwrap()).unwrap();
        assert_eq!(tilde_dlog(&e).unwrap().format(), s.eval_str("-1/x^2 * d_C(x) ∧ d_C(y)/y").unwrap().to_string());
        assert_eq!(Value::Form(beta(&e).unwrap()), s.eval_str("-1/x * d_C(y)/y").unwrap());
    }

    #[test]
    fn errors_name_the_problem() {
        let s = scope();
        assert!(s.eval_str("x + q").unwrap_err().contains("unknown identifier `q`"));
        assert!(s.eval_str("d_C(x)^2").is_err());
        assert!(s.eval_str("{x, 0}").is_err());
    }
}
