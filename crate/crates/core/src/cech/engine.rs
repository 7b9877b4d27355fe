//! Truncated Čech double complexes and their cohomology by exact elimination.
//!
//! Cochains of total degree `n` are spanned by generators `G^n`: monomial
//! sections inside the truncation window on each open, placed at Čech degree
//! `q` and complex position `n − q`. With `T` the total differential the
//! spaces `S^n = span(G^n ∪ T G^{n−1})` form a subcomplex, and
//! `dim H^n = rank S^n − rank T G^n − rank T G^{n−1}`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ambient::{AVec, Ambient, Exps, Shape};
use super::cover::{simplex_charts, simplex_name, Cover};
use crate::arith::{Frac, FracField, Ring};
use crate::complexes::{Complex, Op, TermDesc};
use crate::differentials::BaseTag;
use crate::error::{Error, Result};
use crate::linalg::{axpy, combine, kernel, rank_of, Combo, Echelon, SparseVec};

/// Largest accepted degree bound.
pub const MAX_DEGREE_BOUND: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// `D`: Laurent exponents (torus weights on P^n, powers of `y` on
    /// curves) range over `[−D, D]` on intersections.
    pub degree_bound: usize,
    /// `Δ`: the second run uses `D + Δ`.
    pub delta: usize,
    /// Extra room for chart sections on curves.
    pub chart_slack: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { degree_bound: 4, delta: 2, chart_slack: 2 }
    }
}

impl TruncationPolicy {
    pub fn new(degree_bound: usize, delta: usize) -> Result<TruncationPolicy> {
        if delta == 0 {
            return Err(Error::InvalidArgument(String::from("stabilization increment must be positive")));
        }
        if degree_bound + delta > MAX_DEGREE_BOUND {
            return Err(Error::WindowOverflow(alloc::format!(
                "degree bound {degree_bound} + {delta} exceeds {MAX_DEGREE_BOUND}"
            )));
        }
        Ok(TruncationPolicy { degree_bound, delta, chart_slack: 2 })
    }

    pub fn raised(&self) -> TruncationPolicy {
        TruncationPolicy { degree_bound: self.degree_bound + self.delta, ..*self }
    }
}

/// Ω^r(d) over a base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sheaf {
    pub r: usize,
    pub twist: i64,
    pub base: BaseTag,
}

impl Sheaf {
    pub fn forms(r: usize, base: BaseTag) -> Sheaf {
        Sheaf { r, twist: 0, base }
    }

    /// `O(d)`.
    pub fn twisted(d: i64, base: BaseTag) -> Sheaf {
        Sheaf { r: 0, twist: d, base }
    }
}

impl fmt::Display for Sheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.r, self.twist) {
            (0, 0) => f.write_str("O"),
            (0, d) => write!(f, "O({d})"),
            (r, 0) => write!(f, "Omega^{r}"),
            (r, d) => write!(f, "Omega^{r}({d})"),
        }
    }
}

/// Terms placed at degrees `start, start+1, …` with the maps between them.
#[derive(Clone, Debug)]
pub struct Layout {
    pub start: i64,
    pub terms: Vec<TermDesc>,
    pub ops: Vec<Op>,
    pub base: BaseTag,
    pub twist: i64,
}

impl Layout {
    pub fn sheaf(s: &Sheaf) -> Layout {
        Layout { start: 0, terms: alloc::vec![TermDesc::Forms(s.r)], ops: Vec::new(), base: s.base, twist: s.twist }
    }

    pub fn complex(cx: &Complex) -> Layout {
        Layout { start: cx.start, terms: cx.terms.clone(), ops: cx.diffs.clone(), base: cx.base, twist: 0 }
    }

    fn uses_d(&self) -> bool {
        self.ops.iter().any(|o| !matches!(o, Op::Zero | Op::Scale(_)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub simplex: u8,
    /// `2·(term index) + (summand index)`.
    pub slot: u8,
    pub exps: Exps,
    pub letters: u32,
}

pub type Cochain = SparseVec<Key, Frac>;

/// Cocycle representatives of one cohomology group and an echelon form of
/// boundaries plus representatives, used to take coordinates of classes.
pub struct CohomologyBasis {
    pub degree: i64,
    pub reps: Vec<Cochain>,
    echelon: Echelon<FracField, Key>,
}

impl fmt::Debug for CohomologyBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohomologyBasis").field("degree", &self.degree).field("dim", &self.reps.len()).finish()
    }
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn field(&self) -> &FracField {
        self.echelon.field()
    }

    /// Coordinates of the class of `z` on the representatives. Fails when
    /// `z` is not a cocycle of the computed subcomplex.
    pub fn coordinates(&self, z: &Cochain) -> Result<Vec<Frac>> {
        let (r, e) = self.echelon.reduce(z);
        if !r.is_empty() {
            return Err(Error::Mismatch(String::from("cochain is not a cocycle of the truncated complex")));
        }
        let f = self.echelon.field();
        Ok((0..self.reps.len()).map(|i| e.get(&i).cloned().unwrap_or_else(|| f.zero())).collect())
    }

    /// True when `z` is a coboundary.
    pub fn is_zero_class(&self, z: &Cochain) -> Result<bool> {
        Ok(self.coordinates(z)?.iter().all(|c| self.field().is_zero(c)))
    }
}

pub(crate) struct Engine<'a> {
    pub cover: &'a Cover,
    pub amb: Ambient,
    layout: Layout,
    policy: TruncationPolicy,
}

struct Level {
    gens: Vec<Cochain>,
    images: Vec<Cochain>,
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

impl<'a> Engine<'a> {
    pub fn new(cover: &'a Cover, layout: &Layout, policy: TruncationPolicy) -> Result<Engine<'a>> {
        let amb = cover.ambient(layout.base)?;
        if layout.uses_d() && !amb.live.is_empty() {
            return Err(Error::BaseIncompatible(String::from(
                "d is not linear over the coefficients while transcendental letters are live",
            )));
        }
        if layout.twist != 0 && !matches!(cover.shape, Shape::Projective { .. }) {
            return Err(Error::InvalidArgument(String::from("twists are supported on projective space only")));
        }
        if layout.terms.len() != layout.ops.len() + 1 {
            return Err(Error::InvalidArgument(String::from("a complex needs one map between consecutive terms")));
        }
        if policy.degree_bound + policy.delta > MAX_DEGREE_BOUND {
            return Err(Error::WindowOverflow(alloc::format!("degree bound {}", policy.degree_bound)));
        }
        Ok(Engine { cover, amb, layout: layout.clone(), policy })
    }

    pub fn field(&self) -> &FracField {
        &self.amb.field
    }

    /// Wedges of `r` letters drawn from `pool`, dropping zero products.
    fn letter_wedges(&self, pool: &[AVec], r: usize) -> Vec<AVec> {
        combinations(pool.len(), r)
            .into_iter()
            .map(|idx| idx.iter().fold(self.amb.one(), |acc, &i| self.amb.mul(&acc, &pool[i])))
            .filter(|w| !w.is_empty())
            .collect()
    }

    fn trans_letters(&self) -> Vec<AVec> {
        let f = self.field();
        self.amb.live.iter().map(|&j| self.amb.mono([0, 0], self.amb.trans_bit(j), f.one())).collect()
    }

    /// Generators of the truncated sections of Ω^r(twist) on `U_σ`.
    fn section_gens(&self, simplex: u8, r: usize) -> Vec<AVec> {
        let amb = &self.amb;
        let f = self.field();
        let charts = simplex_charts(simplex);
        let i = charts[0];
        let mut out = Vec::new();
        match &self.cover.shape {
            Shape::Projective { n } => {
                let n = *n;
                let mut pool: Vec<AVec> = (0..n).map(|k| amb.d(&self.cover.chart_coordinate(amb, i, k))).collect();
                pool.extend(self.trans_letters());
                let bound = self.policy.degree_bound as i32 + self.layout.twist.unsigned_abs() as i32;
                let mut weights: Vec<Exps> = Vec::new();
                for a in -bound..=bound {
                    if n == 1 {
                        weights.push([a, 0]);
                    } else {
                        for b in -bound..=bound {
                            weights.push([a, b]);
                        }
                    }
                }
                for w in self.letter_wedges(&pool, r) {
                    let (&(e0, l0), _) = w.iter().next().unwrap();
                    let wt = amb.weight(e0, l0);
                    for target in &weights {
                        let shifted = [target[0] - wt[0], target[1] - wt[1]];
                        // the function part before the twist factor u_i^d
                        let mut m = shifted;
                        if i > 0 {
                            m[i - 1] -= self.layout.twist as i32;
                        }
                        let regular = (1..=n).all(|k| charts.contains(&k) || m[k - 1] >= 0)
                            && (charts.contains(&0) || m[..n].iter().sum::<i32>() <= 0);
                        if regular {
                            out.push(amb.mul(&amb.mono(shifted, 0, f.one()), &w));
                        }
                    }
                }
            }
            Shape::Curve { e, .. } => {
                let e = *e as i32;
                let wd = self.policy.degree_bound as i32;
                let wc = wd + self.policy.chart_slack as i32;
                let (funcs, mut pool): (Vec<Exps>, Vec<AVec>) = match simplex {
                    0b01 => (
                        (0..e).flat_map(|a| (0..=wc).map(move |j| [a, j])).collect(),
                        (0..2).map(|k| amb.d(&self.cover.chart_coordinate(amb, 0, k))).collect(),
                    ),
                    0b10 => (
                        (0..e).flat_map(|a| (0..=wc).map(move |j| [a, -a - j])).collect(),
                        (0..2).map(|k| amb.d(&self.cover.chart_coordinate(amb, 1, k))).collect(),
                    ),
                    _ => (
                        (0..e).flat_map(|a| (-wd..=wd).map(move |j| [a, j])).collect(),
                        alloc::vec![amb.mono([0, 0], 1, f.one())],
                    ),
                };
                pool.extend(self.trans_letters());
                for w in self.letter_wedges(&pool, r) {
                    for m in &funcs {
                        let g = amb.mul(&amb.mono(*m, 0, f.one()), &w);
                        if !g.is_empty() {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    }

    fn components(&self, k: usize) -> Vec<(u8, usize)> {
        let s = (2 * k) as u8;
        match self.layout.terms[k] {
            TermDesc::Forms(r) => alloc::vec![(s, r)],
            TermDesc::Sum(a, b) => alloc::vec![(s, a), (s + 1, b)],
            TermDesc::Zero => Vec::new(),
        }
    }

    pub fn degree_range(&self) -> (i64, i64) {
        let lo = self.layout.start;
        let hi = self.layout.start + self.layout.terms.len() as i64 - 1 + self.cover.max_cech_degree() as i64;
        (lo, hi)
    }

    pub fn gens(&self, n: i64) -> Vec<Cochain> {
        let mut out = Vec::new();
        for k in 0..self.layout.terms.len() {
            let q = n - (self.layout.start + k as i64);
            if q < 0 || q as usize > self.cover.max_cech_degree() {
                continue;
            }
            for simplex in self.cover.simplices(q as usize) {
                for (slot, r) in self.components(k) {
                    for g in self.section_gens(simplex, r) {
                        out.push(g.into_iter().map(|((exps, letters), c)| (Key { simplex, slot, exps, letters }, c)).collect());
                    }
                }
            }
        }
        out
    }

    fn lift(&self, v: &AVec, simplex: u8, slot: u8, c: &Frac, out: &mut Cochain) {
        let f = self.field();
        let keyed: Cochain = v.iter().map(|((exps, letters), x)| (Key { simplex, slot, exps: *exps, letters: *letters }, x.clone())).collect();
        axpy(f, out, c, &keyed);
    }

    /// Total differential `δ + (−1)^q d`.
    pub fn total_d(&self, c: &Cochain) -> Cochain {
        let f = self.field();
        let amb = &self.amb;
        let mut out: Cochain = BTreeMap::new();
        let mut groups: BTreeMap<(u8, usize), [AVec; 2]> = BTreeMap::new();
        let n = self.cover.chart_count();
        for (key, x) in c {
            // Čech part
            for j in 0..n {
                if key.simplex & (1 << j) != 0 {
                    continue;
                }
                let target = key.simplex | (1 << j);
                if !self.cover.has_simplex(target) {
                    continue;
                }
                let pos = (key.simplex & ((1u8 << j) - 1)).count_ones();
                let sx = if pos % 2 == 1 { f.neg(x) } else { x.clone() };
                axpy(f, &mut out, &f.one(), &core::iter::once((Key { simplex: target, ..*key }, sx)).collect());
            }
            let g = groups.entry((key.simplex, key.slot as usize / 2)).or_insert_with(|| [BTreeMap::new(), BTreeMap::new()]);
            amb.push(&mut g[key.slot as usize % 2], key.exps, key.letters, x.clone());
        }
        for ((simplex, k), [x, y]) in groups {
            if k >= self.layout.ops.len() {
                continue;
            }
            let q = simplex.count_ones() - 1;
            let sign = if q % 2 == 1 { -1 } else { 1 };
            let s0 = (2 * (k + 1)) as u8;
            let (parts, s): (Vec<(u8, AVec)>, i64) = match self.layout.ops[k] {
                Op::Zero => (Vec::new(), 1),
                Op::D(s) => (alloc::vec![(0, amb.d(&x))], s),
                Op::Scale(s) => (alloc::vec![(0, x)], s),
                Op::AlphaTop(s) => (alloc::vec![(0, amb.d(&x)), (1, x)], s),
                Op::DeltaPenult(s) => (alloc::vec![(1, amb.d(&x))], s),
                Op::DeltaTop(s) => {
                    let minus = f.from_int(-1);
                    let dx = amb.scale(&minus, &amb.d(&x));
                    let second = amb.add(&amb.scale(&minus, &x), &amb.d(&y));
                    (alloc::vec![(0, dx), (1, second)], s)
                }
            };
            let c = f.from_int(sign * s);
            for (comp, v) in parts {
                self.lift(&v, simplex, s0 + comp, &c, &mut out);
            }
        }
        out
    }

    fn level(&self, n: i64) -> Level {
        let gens = self.gens(n);
        let images = gens.iter().map(|g| self.total_d(g)).collect();
        Level { gens, images }
    }

    /// Dimensions for every degree in `[lo, hi]`, with bases when asked.
    pub fn compute(&self, lo: i64, hi: i64, with_bases: bool) -> Result<(Vec<usize>, Vec<Option<CohomologyBasis>>)> {
        let f = self.field().clone();
        let mut levels: BTreeMap<i64, Level> = BTreeMap::new();
        for n in lo - 1..=hi {
            levels.insert(n, self.level(n));
        }
        let mut dims = Vec::new();
        let mut bases = Vec::new();
        for n in lo..=hi {
            let cur = &levels[&n];
            let prev = &levels[&(n - 1)];
            let mut span: Vec<Cochain> = cur.gens.clone();
            span.extend(prev.images.iter().cloned());
            let rank_s = rank_of(&f, &span);
            let rank_t = rank_of(&f, &cur.images);
            let rank_b = rank_of(&f, &prev.images);
            let dim = rank_s - rank_t - rank_b;
            dims.push(dim);
            if !with_bases {
                bases.push(None);
                continue;
            }
            let mut ech: Echelon<FracField, Key> = Echelon::tracking(f.clone());
            for b in &prev.images {
                ech.insert(b, BTreeMap::new());
            }
            let mut reps = Vec::new();
            for combo in kernel(&f, &cur.images) {
                let z = combine(&f, &combo, &cur.gens);
                let mut id: Combo<Frac> = BTreeMap::new();
                id.insert(reps.len(), f.one());
                if ech.insert(&z, id).is_none() {
                    reps.push(z);
                }
            }
            if reps.len() != dim {
                return Err(Error::Mismatch(alloc::format!(
                    "degree {n}: {} representatives for dimension {dim}",
                    reps.len()
                )));
            }
            bases.push(Some(CohomologyBasis { degree: n, reps, echelon: ech }));
        }
        Ok((dims, bases))
    }

    /// `T∘T` vanishes on every generator in `[lo, hi]`.
    pub fn squares_to_zero(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|n| self.gens(n).iter().all(|g| self.total_d(&self.total_d(g)).is_empty()))
    }

    pub fn format_cochain(&self, c: &Cochain) -> String {
        format_cochain(self.cover, &self.amb, c)
    }
}

pub fn format_cochain(cover: &Cover, amb: &Ambient, c: &Cochain) -> String {
    if c.is_empty() {
        return String::from("0");
    }
    let mut groups: BTreeMap<(u8, u8), AVec> = BTreeMap::new();
    for (k, x) in c {
        groups.entry((k.simplex, k.slot)).or_default().insert((k.exps, k.letters), x.clone());
    }
    let parts: Vec<String> = groups
        .iter()
        .map(|((s, slot), v)| alloc::format!("{}[{}]: {}", simplex_name(*s), slot, cover.format_ambient(amb, v)))
        .collect();
    parts.join("; ")
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub label: String,
    pub degrees: Vec<i64>,
    pub dims: Vec<usize>,
    pub dims_high: Vec<usize>,
    pub stabilized: bool,
    pub policy: TruncationPolicy,
    /// Formatted representatives at the lower bound, per degree.
    pub representatives: Vec<Vec<String>>,
}

impl CohomologyReport {
    pub fn dim(&self, n: i64) -> usize {
        self.degrees.iter().position(|&d| d == n).map_or(0, |i| self.dims[i])
    }

    pub fn require_stabilized(self) -> Result<CohomologyReport> {
        if self.stabilized {
            Ok(self)
        } else {
            Err(Error::NotStabilized { dims_low: self.dims, dims_high: self.dims_high })
        }
    }
}

pub(crate) fn run_layout(cover: &Cover, layout: &Layout, policy: &TruncationPolicy, label: String) -> Result<CohomologyReport> {
    let low = Engine::new(cover, layout, *policy)?;
    let (lo, hi) = low.degree_range();
    let (dims, bases) = low.compute(lo, hi, true)?;
    let high = Engine::new(cover, layout, policy.raised())?;
    let (dims_high, _) = high.compute(lo, hi, false)?;
    let representatives = bases
        .iter()
        .map(|b| b.as_ref().map_or_else(Vec::new, |b| b.reps.iter().map(|z| low.format_cochain(z)).collect()))
        .collect();
    Ok(CohomologyReport {
        label,
        degrees: (lo..=hi).collect(),
        stabilized: dims == dims_high,
        dims,
        dims_high,
        policy: *policy,
        representatives,
    })
}

/// Čech cohomology `H^q(X, Ω^r(d))` for every `q`.
pub fn sheaf_cohomology(cover: &Cover, sheaf: &Sheaf, policy: &TruncationPolicy) -> Result<CohomologyReport> {
    run_layout(cover, &Layout::sheaf(sheaf), policy, alloc::format!("H^*({}, {})", cover.name, sheaf))
}

/// Hypercohomology of a complex of form sheaves.
pub fn hypercohomology(cover: &Cover, cx: &Complex, policy: &TruncationPolicy) -> Result<CohomologyReport> {
    run_layout(cover, &Layout::complex(cx), policy, alloc::format!("H^*({}, {})", cover.name, cx.describe().join(", ")))
}

/// Representatives and coordinates for one degree, at the policy's lower bound.
pub fn cohomology_basis(cover: &Cover, layout: &Layout, degree: i64, policy: &TruncationPolicy) -> Result<CohomologyBasis> {
    let e = Engine::new(cover, layout, *policy)?;
    let (_, mut bases) = e.compute(degree, degree, true)?;
    Ok(bases.pop().flatten().expect("basis requested"))
}

/// Checks `T∘T = 0` on every generator of the truncated total complex.
pub fn differential_squares_to_zero(cover: &Cover, layout: &Layout, policy: &TruncationPolicy) -> Result<bool> {
    let e = Engine::new(cover, layout, *policy)?;
    let (lo, hi) = e.degree_range();
    Ok(e.squares_to_zero(lo - 1, hi))
}

#[derive(Clone, Debug)]
pub struct SplitSummand {
    pub i: usize,
    pub q: i64,
    pub r: usize,
    pub dim: usize,
    pub stabilized: bool,
}

#[derive(Clone, Debug)]
pub struct SplittingReport {
    pub p: usize,
    pub hyper: CohomologyReport,
    pub summands: Vec<SplitSummand>,
    pub lower_summands: Vec<SplitSummand>,
    pub lhs: usize,
    pub rhs: usize,
    pub lower_lhs: usize,
    pub lower_rhs: usize,
    pub stabilized: bool,
}

impl SplittingReport {
    pub fn pass(&self) -> bool {
        self.stabilized && self.lhs == self.rhs && self.lower_lhs == self.lower_rhs
    }
}

/// Compares `dim ℍ^{2p}` of the tangent Deligne complex with
/// `Σ_{i=1..p} dim H^{2p−i}(Ω^{i−1})`, and the same at total degree `2p−1`.
pub fn verify_splitting(p: usize, cover: &Cover, policy: &TruncationPolicy) -> Result<SplittingReport> {
    let base = BaseTag::Level(cover.top_level());
    let cx = crate::complexes::tangent_deligne(p, &cover.charts[0], base)?;
    let hyper = hypercohomology(cover, &cx, policy)?;
    let mut stabilized = hyper.stabilized;
    let mut sheaves: BTreeMap<usize, CohomologyReport> = BTreeMap::new();
    for i in 1..=p {
        let rep = sheaf_cohomology(cover, &Sheaf::forms(i - 1, base), policy)?;
        stabilized &= rep.stabilized;
        sheaves.insert(i, rep);
    }
    let summands_at = |total: i64| -> Vec<SplitSummand> {
        (1..=p)
            .map(|i| {
                let q = total - i as i64;
                let rep = &sheaves[&i];
                SplitSummand { i, q, r: i - 1, dim: rep.dim(q), stabilized: rep.stabilized }
            })
            .collect()
    };
    let top = 2 * p as i64;
    let summands = summands_at(top);
    let lower_summands = summands_at(top - 1);
    Ok(SplittingReport {
        p,
        lhs: hyper.dim(top),
        rhs: summands.iter().map(|s| s.dim).sum(),
        lower_lhs: hyper.dim(top - 1),
        lower_rhs: lower_summands.iter().map(|s| s.dim).sum(),
        hyper,
        summands,
        lower_summands,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::cover::{cover_plane_curve, cover_pn, plane_ring};
    use crate::scalars::Tower;

    fn top(c: &Cover) -> BaseTag {
        BaseTag::Level(c.top_level())
    }

    #[test]
    fn p1_line_bundles() {
        let c = cover_pn(1, &Tower::rationals()).unwrap();
        let pol = TruncationPolicy::default();
        let r = sheaf_cohomology(&c, &Sheaf::twisted(-2, top(&c)), &pol).unwrap();
        assert_eq!(r.dims, alloc::vec![0, 1]);
        assert!(r.stabilized);
        let r = sheaf_cohomology(&c, &Sheaf::twisted(3, top(&c)), &pol).unwrap();
        assert_eq!(r.dims, alloc::vec![4, 0]);
    }

    #[test]
    fn p2_hodge_diamond_row() {
        let c = cover_pn(2, &Tower::rationals()).unwrap();
        let pol = TruncationPolicy::new(2, 2).unwrap();
        let r = sheaf_cohomology(&c, &Sheaf::forms(1, top(&c)), &pol).unwrap();
        assert_eq!(r.dims, alloc::vec![0, 1, 0]);
        assert!(r.stabilized);
    }

    #[test]
    fn elliptic_h1() {
        let q = Tower::rationals();
        let ring = plane_ring(&q).unwrap();
        let (x, y, z) = (ring.var("x").unwrap(), ring.var("y").unwrap(), ring.var("z").unwrap());
        let f = &(&(&y * &y) * &z) - &(&(&(&x * &x) * &x) - &(&(&x * &z) * &z));
        let f = &f - &(&(&z * &z) * &z);
        let c = cover_plane_curve(&f).unwrap();
        let pol = TruncationPolicy::default();
        let r = sheaf_cohomology(&c, &Sheaf::forms(0, top(&c)), &pol).unwrap();
        assert_eq!(r.dims, alloc::vec![1, 1]);
        let r = sheaf_cohomology(&c, &Sheaf::forms(1, top(&c)), &pol).unwrap();
        assert_eq!(r.dims, alloc::vec![1, 1]);
    }

    #[test]
    fn total_differential_squares_to_zero() {
        let c = cover_pn(2, &Tower::rationals()).unwrap();
        let cx = crate::complexes::tangent_deligne(2, &c.charts[0], top(&c)).unwrap();
        let e = Engine::new(&c, &Layout::complex(&cx), TruncationPolicy::new(1, 1).unwrap()).unwrap();
        assert!(e.squares_to_zero(1, 4));
    }
}
