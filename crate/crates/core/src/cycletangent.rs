//! Tangent maps on `H^p(Ω^{p−1})`: the formal tangent space to `CH^p`, the
//! infinitesimal cycle class map between bases, extension of scalars to a
//! model of ℂ, and the factorization of λ through one summand.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Frac, Ring};
use crate::cech::engine::{Engine, Layout};
use crate::cech::{
    cohomology_basis, embed_frac, format_cochain, sheaf_cohomology, Cochain, CohomologyBasis, CohomologyReport, Cover,
    Key, Sheaf, TruncationPolicy,
};
use crate::differentials::{base_change_kernel_letters, BaseTag};
use crate::error::{Error, Result};
use crate::linalg::{rank_of, SparseVec};
use crate::milnor::{beta, EpsSymbol};
use crate::scalars::{make_tower, StepSpec, Tower};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Injective,
    NotInjective,
    /// The source is zero.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Injective => "injective",
            Verdict::NotInjective => "not injective",
            Verdict::Vacuous => "vacuous",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TangentMapReport {
    pub p: usize,
    pub cover: String,
    pub source: CohomologyReport,
    pub target: CohomologyReport,
    pub source_basis: Vec<String>,
    pub target_basis: Vec<String>,
    /// `matrix[i][j]`: coordinate `i` of the image of source vector `j`.
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub kernel_dim: usize,
    pub verdict: Verdict,
    /// Letters of the source base that die in the target base.
    pub kernel_letters: Vec<String>,
}

impl TangentMapReport {
    pub fn injective(&self) -> bool {
        self.kernel_dim == 0
    }

    pub fn stabilized(&self) -> bool {
        self.source.stabilized && self.target.stabilized
    }

    /// True when the matrix is the identity.
    pub fn is_identity(&self) -> bool {
        self.matrix.len() == self.source_basis.len()
            && self.matrix.iter().enumerate().all(|(i, row)| {
                row.len() == self.matrix.len()
                    && row.iter().enumerate().all(|(j, x)| x == if i == j { "1" } else { "0" })
            })
    }
}

fn forms_layout(p: usize, base: BaseTag) -> Result<Layout> {
    if p == 0 {
        return Err(Error::InvalidArgument(String::from("p must be positive")));
    }
    Ok(Layout::sheaf(&Sheaf::forms(p - 1, base)))
}

/// `H^p(X, Ω^{p−1})` with absolute differentials (base ℚ).
pub fn formal_tangent_chow(cover: &Cover, p: usize, policy: &TruncationPolicy) -> Result<CohomologyReport> {
    let mut rep = sheaf_cohomology(cover, &Sheaf::forms(p.checked_sub(1).ok_or_else(positive)?, BaseTag::Level(0)), policy)?;
    rep.label = alloc::format!("H^{p}({}, Omega^{}_/Q)", cover.name, p - 1);
    Ok(rep)
}

fn positive() -> Error {
    Error::InvalidArgument(String::from("p must be positive"))
}

struct Side<'a> {
    cover: &'a Cover,
    basis: CohomologyBasis,
    report: CohomologyReport,
    formatted: Vec<String>,
}

fn side<'a>(cover: &'a Cover, p: usize, base: BaseTag, policy: &TruncationPolicy) -> Result<Side<'a>> {
    let layout = forms_layout(p, base)?;
    let report = sheaf_cohomology(cover, &Sheaf::forms(p - 1, base), policy)?;
    let basis = cohomology_basis(cover, &layout, p as i64, policy)?;
    let amb = cover.ambient(base)?;
    let formatted = basis.reps.iter().map(|z| format_cochain(cover, &amb, z)).collect();
    Ok(Side { cover, basis, report, formatted })
}

/// Coordinates of the images of the source representatives, as columns.
fn assemble(
    p: usize,
    src: &Side<'_>,
    dst: &Side<'_>,
    map: &dyn Fn(&Cochain) -> Result<Cochain>,
    kernel_letters: Vec<String>,
) -> Result<TangentMapReport> {
    let f = dst.basis.field().clone();
    let mut columns: Vec<SparseVec<usize, Frac>> = Vec::new();
    for z in &src.basis.reps {
        let image = map(z)?;
        let coords = dst.basis.coordinates(&image)?;
        columns.push(coords.into_iter().enumerate().filter(|(_, c)| !f.is_zero(c)).collect());
    }
    let rank = rank_of(&f, &columns);
    let n = src.basis.dim();
    let tower = &dst.cover.tower;
    let matrix = (0..dst.basis.dim())
        .map(|i| {
            columns
                .iter()
                .map(|col| col.get(&i).map_or_else(|| String::from("0"), |c| tower.format_frac(c, &[])))
                .collect()
        })
        .collect();
    let kernel_dim = n - rank;
    let verdict = if n == 0 {
        Verdict::Vacuous
    } else if kernel_dim == 0 {
        Verdict::Injective
    } else {
        Verdict::NotInjective
    };
    Ok(TangentMapReport {
        p,
        cover: src.cover.name.clone(),
        source: src.report.clone(),
        target: dst.report.clone(),
        source_basis: src.formatted.clone(),
        target_basis: dst.formatted.clone(),
        matrix,
        rank,
        kernel_dim,
        verdict,
        kernel_letters,
    })
}

/// `δr: H^p(Ω^{p−1}_{X/ℚ}) → H^p(Ω^{p−1}_{X/K})`, `K` the top of the tower,
/// induced by the base change of forms.
pub fn delta_r(cover: &Cover, p: usize, policy: &TruncationPolicy) -> Result<TangentMapReport> {
    if p == 0 {
        return Err(positive());
    }
    let top = BaseTag::Level(cover.top_level());
    let src = side(cover, p, BaseTag::Level(0), policy)?;
    let dst = side(cover, p, top, policy)?;
    let amb = cover.ambient(BaseTag::Level(0))?;
    let geo_mask = (1u32 << amb.geo()) - 1;
    let map = |z: &Cochain| -> Result<Cochain> {
        Ok(z.iter().filter(|(k, _)| k.letters & !geo_mask == 0).map(|(k, c)| (*k, c.clone())).collect())
    };
    let letters = base_change_kernel_letters(&cover.charts[0], BaseTag::Level(0), top)?;
    assemble(p, &src, &dst, &map, letters)
}

/// `k(t1, t2)`, with fresh names, as the default model of ℂ.
pub fn default_cmodel(k: &Tower) -> Result<Tower> {
    let names = k.names();
    let mut specs = k.specs.clone();
    let mut i = 1;
    while specs.len() < k.specs.len() + 2 {
        let name = alloc::format!("t{i}");
        if !names.contains(&name) {
            specs.push(StepSpec::transcendental(&name));
        }
        i += 1;
    }
    make_tower(&specs)
}

/// `H^p(Ω^{p−1}_{X/k}) → H^p(Ω^{p−1}_{X/k}) ⊗_k C` for a number field `k`,
/// with `C` a finitely generated extension of `k`. Injectivity is certified
/// by the rank of the mapped basis over `C`.
pub fn composed_infinitesimal(cover: &Cover, p: usize, cmodel: &Tower, policy: &TruncationPolicy) -> Result<TangentMapReport> {
    if p == 0 {
        return Err(positive());
    }
    if !cover.tower.is_number_field() {
        return Err(Error::NotNumberField);
    }
    let big = cover.over(cmodel)?;
    let src = side(cover, p, BaseTag::Level(cover.top_level()), policy)?;
    let dst = side(&big, p, BaseTag::Level(big.top_level()), policy)?;
    let map = |z: &Cochain| -> Result<Cochain> {
        z.iter().map(|(k, c)| Ok((*k, embed_frac(c, &cover.tower, cmodel)?))).collect()
    };
    assemble(p, &src, &dst, &map, Vec::new())
}

/// Letters of `Ω_{X/ℚ}` killed in `Ω_{X/k}`: nonempty exactly when `k` has
/// transcendentals, which is where the injectivity statement breaks down.
pub fn transcendental_kernel_letters(cover: &Cover) -> Result<Vec<String>> {
    base_change_kernel_letters(&cover.charts[0], BaseTag::Level(0), BaseTag::Level(cover.top_level()))
}

#[derive(Clone, Debug)]
pub struct LambdaCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct LambdaReport {
    pub p: usize,
    pub checks: Vec<LambdaCheck>,
}

impl LambdaReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// The cochain of `β(s)` on the deepest intersection, in position
/// (Čech `p`, form degree `p−1`) of the tangent Deligne total complex.
pub fn lambda_cochain(cover: &Cover, s: &EpsSymbol) -> Result<Cochain> {
    let p = s.p();
    if p != cover.max_cech_degree() {
        return Err(Error::InvalidArgument(alloc::format!(
            "λ lands in Čech degree {p}; the cover reaches degree {}",
            cover.max_cech_degree()
        )));
    }
    let simplex = ((1u16 << (p + 1)) - 1) as u8;
    let base = BaseTag::Level(cover.top_level());
    let amb = cover.ambient(base)?;
    let b = beta(s)?;
    let v = cover.to_ambient(&amb, simplex, &b)?;
    let slot = (2 * (p - 1)) as u8;
    Ok(v.into_iter().map(|((exps, letters), c)| (Key { simplex, slot, exps, letters }, c)).collect())
}

/// Checks on sample symbols that λ produces total-degree-`2p` cocycles of
/// the tangent Deligne complex supported in the single summand
/// `(Čech p, Ω^{p−1})`, additively, with the empty symbol going to zero.
pub fn lambda_factorization_check(cover: &Cover, symbols: &[EpsSymbol], p: usize, policy: &TruncationPolicy) -> Result<LambdaReport> {
    let base = BaseTag::Level(cover.top_level());
    let cx = crate::complexes::tangent_deligne(p, &cover.charts[0], base)?;
    let layout = Layout::complex(&cx);
    let engine = Engine::new(cover, &layout, *policy)?;
    let f = engine.field().clone();
    let simplex = ((1u16 << (p + 1)) - 1) as u8;
    let slot = (2 * (p - 1)) as u8;
    let mut checks = Vec::new();
    let mut images = Vec::new();
    for s in symbols {
        if s.p() != p {
            return Err(Error::Mismatch(alloc::format!("symbol of degree {} for p = {p}", s.p())));
        }
        images.push(lambda_cochain(cover, s)?);
    }
    let mut cocycle = None;
    let mut support = None;
    for (s, z) in symbols.iter().zip(&images) {
        if cocycle.is_none() && !engine.total_d(z).is_empty() {
            cocycle = Some(alloc::format!("{s}"));
        }
        if support.is_none() && z.keys().any(|k| k.simplex != simplex || k.slot != slot) {
            support = Some(alloc::format!("{s}"));
        }
    }
    checks.push(LambdaCheck { name: String::from("cocycle"), pass: cocycle.is_none(), witness: cocycle });
    checks.push(LambdaCheck { name: String::from("single summand"), pass: support.is_none(), witness: support });
    let mut additive = None;
    for i in 0..symbols.len().saturating_sub(1) {
        let prod = symbols[i].mul(&symbols[i + 1])?;
        let lhs = lambda_cochain(cover, &prod)?;
        let mut rhs: Cochain = BTreeMap::new();
        crate::linalg::axpy(&f, &mut rhs, &f.one(), &images[i]);
        crate::linalg::axpy(&f, &mut rhs, &f.one(), &images[i + 1]);
        if lhs != rhs {
            additive = Some(alloc::format!("{} · {}", symbols[i], symbols[i + 1]));
            break;
        }
    }
    checks.push(LambdaCheck { name: String::from("additive"), pass: additive.is_none(), witness: additive });
    let zero = lambda_cochain(cover, &EpsSymbol::empty(&cover.charts[0], p))?;
    checks.push(LambdaCheck {
        name: String::from("zero symbol"),
        pass: zero.is_empty(),
        witness: (!zero.is_empty()).then(|| engine.format_cochain(&zero)),
    });
    Ok(LambdaReport { p, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::cover_pn;
    use crate::families::elliptic_cover;

    #[test]
    fn tangent_spaces() {
        let q = Tower::rationals();
        let pol = TruncationPolicy::default();
        assert_eq!(formal_tangent_chow(&cover_pn(1, &q).unwrap(), 1, &pol).unwrap().dim(1), 0);
        assert_eq!(formal_tangent_chow(&elliptic_cover(&q).unwrap(), 1, &pol).unwrap().dim(1), 1);
        assert_eq!(formal_tangent_chow(&cover_pn(2, &q).unwrap(), 2, &pol).unwrap().dim(2), 0);
    }

    #[test]
    fn delta_r_is_identity_over_number_fields() {
        let q = Tower::rationals();
        let r = delta_r(&elliptic_cover(&q).unwrap(), 1, &TruncationPolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Injective);
        assert!(r.is_identity());
        let r = delta_r(&cover_pn(2, &q).unwrap(), 2, &TruncationPolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Vacuous);
    }

    #[test]
    fn composed_over_elliptic() {
        let q = Tower::rationals();
        let c = default_cmodel(&q).unwrap();
        let r = composed_infinitesimal(&elliptic_cover(&q).unwrap(), 1, &c, &TruncationPolicy::default()).unwrap();
        assert_eq!(r.matrix.len(), 1);
        assert_ne!(r.matrix[0][0], "0");
        assert_eq!(r.verdict, Verdict::Injective);
    }

    #[test]
    fn lambda_on_p1() {
        let q = Tower::rationals();
        let cover = cover_pn(1, &q).unwrap();
        let ring = &cover.charts[0];
        let z = ring.var("z").unwrap();
        let s1 = EpsSymbol::single(&z + &z.inv().unwrap(), Vec::new(), 1).unwrap();
        let s2 = EpsSymbol::single(z.pow(3).unwrap(), Vec::new(), -2).unwrap();
        let r = lambda_factorization_check(&cover, &[s1, s2], 1, &TruncationPolicy::default()).unwrap();
        assert!(r.pass(), "{r:?}");
    }
}
