//! Instance files: a tower, an optional ring and cover, a truncation policy,
//! expected values for checks, and named forms and symbols. TOML, with a
//! JSON mirror of the same structure.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use deligne_core::arith::{q, Field, Q};
use deligne_core::cech::{cover_plane_curve, cover_pn, plane_ring, Cover, Sheaf, TruncationPolicy};
use deligne_core::differentials::BaseTag;
use deligne_core::families::family_ring;
use deligne_core::funcrings::{ring_make, FunctionRing};
use deligne_core::scalars::{make_tower, LowerCoeff, StepSpec, Tower};

use crate::eval::{Scope, Value};
use crate::expr::{parse, Expr};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub tower: Vec<StepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyFile>,
    #[serde(default)]
    pub checks: ChecksFile,
    #[serde(default)]
    pub forms: Vec<NamedForm>,
    #[serde(default)]
    pub symbols: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

/// A tower step; without `minpoly` it is transcendental.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    /// `P1`, `P2` or `plane-curve`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyFile {
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksFile {
    #[serde(default)]
    pub cech: Vec<CechExpect>,
    #[serde(default)]
    pub hypercoh: Vec<HyperExpect>,
    /// Values of `p` for the splitting check.
    #[serde(default)]
    pub lemma24: Vec<usize>,
    #[serde(default)]
    pub tangent_chow: Vec<TangentExpect>,
    /// Values of `p` for `delta-r` and `composed`.
    #[serde(default)]
    pub tangent_maps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_letters: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CechExpect {
    pub sheaf: String,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperExpect {
    pub p: usize,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentExpect {
    pub p: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedForm {
    pub name: String,
    pub expr: String,
}

pub const BUILTINS: [(&str, &str); 7] = [
    ("p1", include_str!("../instances/p1.toml")),
    ("p2", include_str!("../instances/p2.toml")),
    ("elliptic", include_str!("../instances/elliptic.toml")),
    ("p2-sqrt2", include_str!("../instances/p2-sqrt2.toml")),
    ("p1-Qs", include_str!("../instances/p1-Qs.toml")),
    ("elliptic-Qt", include_str!("../instances/elliptic-Qt.toml")),
    ("families", include_str!("../instances/families.toml")),
];

pub struct Instance {
    pub label: String,
    pub file: InstanceFile,
    pub tower: Tower,
    pub scope: Scope,
    pub cover: Option<Cover>,
}

impl InstanceFile {
    pub fn from_toml(text: &str) -> Result<InstanceFile, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json(text: &str) -> Result<InstanceFile, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

/// A builtin name or a path to a `.toml` or `.json` file.
pub fn read_instance(spec: &str) -> Result<(String, InstanceFile), String> {
    if let Some((name, text)) = BUILTINS.iter().find(|(n, _)| *n == spec) {
        return Ok((name.to_string(), InstanceFile::from_toml(text).map_err(|e| format!("builtin {name}: {e}"))?));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| {
        let names: Vec<&str> = BUILTINS.iter().map(|(n, _)| *n).collect();
        format!("{spec}: {e} (builtins: {})", names.join(", "))
    })?;
    let json = path.extension().is_some_and(|x| x == "json") || text.trim_start().starts_with('{');
    let file = if json { InstanceFile::from_json(&text) } else { InstanceFile::from_toml(&text) };
    Ok((spec.to_string(), file.map_err(|e| format!("{spec}: {e}"))?))
}

type Monomial = BTreeMap<String, u32>;

/// Expands a polynomial expression with rational coefficients.
fn expand(e: &Expr) -> Result<BTreeMap<Monomial, Q>, String> {
    let mul = |a: &BTreeMap<Monomial, Q>, b: &BTreeMap<Monomial, Q>| {
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut m = ma.clone();
                for (v, k) in mb {
                    *m.entry(v.clone()).or_insert(0) += k;
                }
                let c = out.entry(m).or_insert_with(|| q(0));
                *c = c.clone() + ca.clone() * cb.clone();
            }
        }
        out.retain(|_, c| *c != q(0));
        out
    };
    let add = |a: BTreeMap<Monomial, Q>, b: BTreeMap<Monomial, Q>, sign: i64| {
        let mut out = a;
        for (m, c) in b {
            let e = out.entry(m).or_insert_with(|| q(0));
            *e = e.clone() + c * q(sign);
        }
        out.retain(|_, c| *c != q(0));
        out
    };
    let constant = |c: Q| -> BTreeMap<Monomial, Q> {
        let mut m = BTreeMap::new();
        if c != q(0) {
            m.insert(Monomial::new(), c);
        }
        m
    };
    Ok(match e {
        Expr::Int(n) => constant(q(*n)),
        Expr::Ident(v) => {
            let mut m = BTreeMap::new();
            m.insert(Monomial::from([(v.clone(), 1)]), q(1));
            m
        }
        Expr::Neg(a) => add(BTreeMap::new(), expand(a)?, -1),
        Expr::Add(a, b) => add(expand(a)?, expand(b)?, 1),
        Expr::Sub(a, b) => add(expand(a)?, expand(b)?, -1),
        Expr::Mul(a, b) => mul(&expand(a)?, &expand(b)?),
        Expr::Div(a, b) => {
            let d = expand(b)?;
            match d.iter().next() {
                Some((m, c)) if d.len() == 1 && m.is_empty() => mul(&expand(a)?, &constant(q(1) / c.clone())),
                _ => return Err(format!("minimal polynomials divide by nonzero rationals only, not `{b}`")),
            }
        }
        Expr::Pow(a, n) if *n >= 0 => {
            let base = expand(a)?;
            let mut acc = constant(q(1));
            for _ in 0..*n {
                acc = mul(&acc, &base);
            }
            acc
        }
        other => return Err(format!("`{other}` is not a polynomial with rational coefficients")),
    })
}

/// Coefficients of `text` as a polynomial in `name`, from the constant term up.
fn minpoly_coeffs(name: &str, text: &str) -> Result<Vec<LowerCoeff>, String> {
    let e = parse(text).map_err(|e| format!("minpoly of {name}: {e}"))?;
    let terms = expand(&e).map_err(|e| format!("minpoly of {name}: {e}"))?;
    let mut coeffs: Vec<LowerCoeff> = Vec::new();
    for (mut m, c) in terms {
        let k = m.remove(name).unwrap_or(0) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Vec::new());
        }
        coeffs[k].push((c, m.into_iter().collect()));
    }
    Ok(coeffs)
}

pub fn build_tower(steps: &[StepFile]) -> Result<Tower, String> {
    let specs = steps
        .iter()
        .map(|s| {
            Ok(match &s.minpoly {
                None => StepSpec::transcendental(&s.name),
                Some(text) => StepSpec::Algebraic { name: s.name.clone(), minpoly: minpoly_coeffs(&s.name, text)?, trusted: false },
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    make_tower(&specs).map_err(|e| format!("tower: {e}"))
}

fn build_ring(tower: &Tower, spec: &Option<RingFile>) -> Result<FunctionRing, String> {
    let Some(spec) = spec else {
        return family_ring(tower).map_err(|e| e.to_string());
    };
    let vars: Vec<&str> = spec.vars.iter().map(String::as_str).collect();
    let free = ring_make(tower, &vars, None).map_err(|e| format!("ring: {e}"))?;
    let Some(rel) = &spec.relation else {
        return Ok(free);
    };
    let f = match Scope::new(free).eval_str(rel).map_err(|e| format!("ring relation: {e}"))? {
        Value::Function(f) => f,
        other => return Err(format!("ring relation must be a function, not `{other}`")),
    };
    let nf = tower.nf();
    let den = f.frac().den.constant_value(nf).ok_or("ring relation must be a polynomial")?;
    let poly = nf.pscale(&f.frac().num, &nf.inv(&den).ok_or("zero denominator")?);
    ring_make(tower, &vars, Some(&poly)).map_err(|e| format!("ring: {e}"))
}

fn build_cover(tower: &Tower, spec: &CoverFile) -> Result<Cover, String> {
    let cover = match spec.kind.as_str() {
        "P1" | "p1" => cover_pn(1, tower),
        "P2" | "p2" => cover_pn(2, tower),
        "plane-curve" => {
            let eq = spec.equation.as_ref().ok_or("a plane curve needs an equation in x, y, z")?;
            let ring = plane_ring(tower).map_err(|e| e.to_string())?;
            match Scope::new(ring).eval_str(eq).map_err(|e| format!("cover equation: {e}"))? {
                Value::Function(f) => cover_plane_curve(&f),
                other => return Err(format!("cover equation must be a function, not `{other}`")),
            }
        }
        other => return Err(format!("unknown cover kind `{other}` (expected P1, P2 or plane-curve)")),
    };
    cover.map_err(|e| format!("cover: {e}"))
}

pub fn load(spec: &str) -> Result<Instance, String> {
    let (label, file) = read_instance(spec)?;
    build(label, file)
}

pub fn build(label: String, file: InstanceFile) -> Result<Instance, String> {
    let tower = build_tower(&file.tower)?;
    let ring = build_ring(&tower, &file.ring)?;
    let mut scope = Scope::new(ring);
    for f in &file.forms {
        if scope.knows(&f.name) {
            return Err(format!("form name `{}` clashes with an existing name", f.name));
        }
        scope.define(&f.name, &f.expr).map_err(|e| format!("form {}: {e}", f.name))?;
    }
    let cover = file.cover.as_ref().map(|c| build_cover(&tower, c)).transpose()?;
    Ok(Instance { label: file.name.clone().unwrap_or(label), file, tower, scope, cover })
}

impl Instance {
    /// Policy from the file, with command-line overrides.
    pub fn policy(&self, d: Option<usize>, delta: Option<usize>) -> Result<TruncationPolicy, String> {
        let base = TruncationPolicy::default();
        let pf = self.file.policy.as_ref();
        let d = d.or(pf.and_then(|p| p.degree_bound)).unwrap_or(base.degree_bound);
        let delta = delta.or(pf.and_then(|p| p.delta)).unwrap_or(base.delta);
        TruncationPolicy::new(d, delta).map_err(|e| e.to_string())
    }

    pub fn cover(&self) -> Result<&Cover, String> {
        self.cover.as_ref().ok_or_else(|| format!("instance {} has no [cover]", self.label))
    }
}

/// `O`, `O(d)`, `omega<r>`, `Omega^<r>`, optionally twisted `(d)`, optionally
/// followed by `/Q` for absolute differentials.
pub fn parse_sheaf(text: &str, top: usize) -> Result<Sheaf, String> {
    let bad = || format!("cannot read sheaf `{text}` (try O, O(-2), omega1, Omega^2, omega1/Q)");
    let (body, base) = match text.strip_suffix("/Q") {
        Some(b) => (b, BaseTag::Level(0)),
        None => (text, BaseTag::Level(top)),
    };
    let (head, twist) = match body.find('(') {
        Some(i) => {
            let inner = body[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            (&body[..i], inner.trim().parse::<i64>().map_err(|_| bad())?)
        }
        None => (body, 0),
    };
    let r = if head == "O" {
        0
    } else {
        let digits = head.strip_prefix("omega").or_else(|| head.strip_prefix("Omega^")).ok_or_else(bad)?;
        digits.parse::<usize>().map_err(|_| bad())?
    };
    Ok(Sheaf { r, twist, base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        for (name, _) in BUILTINS {
            let inst = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            for c in &inst.file.checks.cech {
                parse_sheaf(&c.sheaf, inst.tower.step_count()).unwrap();
            }
        }
    }

    #[test]
    fn json_mirror_matches() {
        let (_, file) = read_instance("elliptic").unwrap();
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(InstanceFile::from_json(&json).unwrap(), file);
    }

    #[test]
    fn minpolys_over_lower_generators() {
        let t = build_tower(&[
            StepFile { name: "a".into(), minpoly: Some("a^2 - 2".into()) },
            StepFile { name: "b".into(), minpoly: Some("b^2 - a".into()) },
        ])
        .unwrap();
        assert_eq!(t.nf().dim(), 4);
        assert!(build_tower(&[StepFile { name: "a".into(), minpoly: Some("a^2 - 4".into()) }]).is_err());
    }

    #[test]
    fn sheaves() {
        assert_eq!(parse_sheaf("O(-3)", 0).unwrap(), Sheaf::twisted(-3, BaseTag::Level(0)));
        assert_eq!(parse_sheaf("omega1", 1).unwrap(), Sheaf::forms(1, BaseTag::Level(1)));
        assert_eq!(parse_sheaf("Omega^2/Q", 1).unwrap(), Sheaf::forms(2, BaseTag::Level(0)));
        assert!(parse_sheaf("F", 0).is_err());
    }
}
