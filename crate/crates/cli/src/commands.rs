//! One function per subcommand, each returning the list of checks.

use serde_json::{json, Value as Json};

use deligne_core::cech::{
    differential_squares_to_zero, hypercohomology, sheaf_cohomology, verify_splitting, CohomologyReport, Layout,
    TruncationPolicy,
};
use deligne_core::complexes::{deformed_deligne_split, tangent_deligne, verify_alpha_delta, DiagramReport};
use deligne_core::cycletangent::{
    composed_infinitesimal, default_cmodel, delta_r, formal_tangent_chow, transcendental_kernel_letters,
    TangentMapReport,
};
use deligne_core::differentials::{BaseTag, DiffForm};
use deligne_core::families::{eps_symbols, family_ring, relation_instances, rng_for, standard_towers};
use deligne_core::funcrings::{ring_make, FunctionRing};
use deligne_core::milnor::{
    beta, beta_via_truncation, dlog_word, eps_split, eps_to_absolute, relation_check, tilde_dlog, EpsSymbol,
};
use deligne_core::scalars::Tower;
use deligne_core::Error;

use crate::eval::{eps_part, Value};
use crate::instance::{self, parse_sheaf, Instance};
use crate::report::{Check, Status};

/// Seeded symbols per tower and `p`.
pub const FAMILY_SIZE: usize = 50;
/// Seeded relation instances per tower.
pub const RELATIONS_PER_TOWER: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Lemma26,
    BetaAgreement,
    Diagram27,
    AlphaDelta,
    Lemma24,
    Cech,
    Hypercoh,
    TangentChow,
    DeltaR,
    Composed,
    Relations,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Lemma26 => "verify lemma2.6",
            Command::BetaAgreement => "verify beta-agreement",
            Command::Diagram27 => "verify diagram2.7",
            Command::AlphaDelta => "verify alpha-delta",
            Command::Lemma24 => "verify lemma2.4",
            Command::Cech => "cech",
            Command::Hypercoh => "hypercoh",
            Command::TangentChow => "tangent-chow",
            Command::DeltaR => "delta-r",
            Command::Composed => "composed",
            Command::Relations => "relations",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Config {
    pub instance: Option<String>,
    pub p: Option<usize>,
    pub degree_bound: Option<usize>,
    pub delta: Option<usize>,
    pub seed: u64,
    pub sheaf: Option<String>,
}

/// Errors that make the run itself invalid (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

type Run = Result<Vec<Check>, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

pub fn run(cmd: Command, cfg: &Config) -> Run {
    if cfg.p == Some(0) {
        return Err(usage("--p must be positive"));
    }
    let inst = cfg.instance.as_deref().map(instance::load).transpose().map_err(UsageError)?;
    match cmd {
        Command::Lemma26 | Command::BetaAgreement | Command::Diagram27 => families(cmd, cfg, inst.as_ref()),
        Command::Relations => relations(cfg, inst.as_ref()),
        Command::AlphaDelta => alpha_delta(cfg, inst.as_ref()),
        _ => {
            let inst = inst.ok_or_else(|| usage(format!("{} needs --instance", cmd.name())))?;
            let policy = inst.policy(cfg.degree_bound, cfg.delta).map_err(UsageError)?;
            inst.cover().map_err(UsageError)?;
            match cmd {
                Command::Cech => cech(cfg, &inst, &policy),
                Command::Hypercoh => hypercoh(cfg, &inst, &policy),
                Command::Lemma24 => lemma24(cfg, &inst, &policy),
                Command::TangentChow => tangent_chow(cfg, &inst, &policy),
                Command::DeltaR => tangent_maps(cfg, &inst, &policy, false),
                Command::Composed => tangent_maps(cfg, &inst, &policy, true),
                _ => unreachable!("handled above"),
            }
        }
    }
}

/// Rings over which the seeded families are drawn: the instance's, or the
/// standard towers Q, Q(sqrt2), Q(t).
fn family_rings(inst: Option<&Instance>) -> Result<Vec<(String, FunctionRing)>, UsageError> {
    match inst {
        Some(i) => Ok(vec![(i.tower.describe(), i.scope.ring.clone())]),
        None => standard_towers()
            .and_then(|ts| ts.into_iter().map(|(l, t)| Ok((l, family_ring(&t)?))).collect())
            .map_err(|e| usage(e.to_string())),
    }
}

fn instance_symbols(inst: Option<&Instance>) -> Result<Vec<(String, EpsSymbol)>, UsageError> {
    let Some(inst) = inst else { return Ok(Vec::new()) };
    inst.file
        .symbols
        .iter()
        .map(|text| {
            let v = inst.scope.eval_str(text).map_err(|e| usage(format!("symbol `{text}`: {e}")))?;
            Ok((text.clone(), eps_part(&v).map_err(|e| usage(format!("symbol `{text}`: {e}")))?))
        })
        .collect()
}

type Identity = fn(&EpsSymbol) -> deligne_core::Result<(DiffForm, DiffForm)>;

fn lemma26_identity(s: &EpsSymbol) -> deligne_core::Result<(DiffForm, DiffForm)> {
    let sign = if s.p() % 2 == 1 { 1 } else { -1 };
    Ok((tilde_dlog(s)?, beta(s)?.d()?.scale_int(sign)))
}

fn beta_identity(s: &EpsSymbol) -> deligne_core::Result<(DiffForm, DiffForm)> {
    Ok((beta_via_truncation(s)?, beta(s)?))
}

fn diagram27_identity(s: &EpsSymbol) -> deligne_core::Result<(DiffForm, DiffForm)> {
    let top = BaseTag::Level(s.ring().tower().step_count());
    Ok((eps_to_absolute(s)?.base_change(top)?, beta(s)?))
}

fn check_identity<'a>(name: String, symbols: impl Iterator<Item = (String, &'a EpsSymbol)>, f: Identity) -> Check {
    let mut tested = 0;
    for (label, s) in symbols {
        tested += 1;
        match f(s) {
            Ok((l, r)) if l == r => {}
            Ok((l, r)) => {
                return Check::failed(name, format!("{label}: lhs {} vs rhs {}", l.format(), r.format()))
                    .dims(json!({ "instances": tested }));
            }
            Err(e) => return Check::failed(name, format!("{label}: {e}")).dims(json!({ "instances": tested })),
        }
    }
    Check::new(name, tested > 0).dims(json!({ "instances": tested }))
}

fn families(cmd: Command, cfg: &Config, inst: Option<&Instance>) -> Run {
    let (what, f): (&str, Identity) = match cmd {
        Command::Lemma26 => ("tilde_dlog = (-1)^(p-1) d beta", lemma26_identity),
        Command::BetaAgreement => ("beta_via_truncation = beta", beta_identity),
        _ => ("base_change(eps_to_absolute) = beta", diagram27_identity),
    };
    let ps: Vec<usize> = cfg.p.map_or_else(|| (2..=4).collect(), |p| vec![p]);
    let mut checks = Vec::new();
    for (label, ring) in family_rings(inst)? {
        for &p in &ps {
            let name = format!("{what} [{label}, p = {p}]");
            let mut rng = rng_for(cfg.seed, &label, p);
            match eps_symbols(&ring, p, FAMILY_SIZE, &mut rng) {
                Ok(syms) => checks.push(check_identity(name, syms.iter().map(|s| (s.to_string(), s)), f)),
                Err(e) => checks.push(Check::failed(name, e.to_string())),
            }
        }
    }
    let extra = instance_symbols(inst)?;
    if !extra.is_empty() {
        checks.push(check_identity(format!("{what} [instance symbols]"), extra.iter().map(|(t, s)| (t.clone(), s)), f));
    }
    Ok(checks)
}

fn relations(cfg: &Config, inst: Option<&Instance>) -> Run {
    let mut checks = Vec::new();
    for (label, ring) in family_rings(inst)? {
        let count = if inst.is_some() { 100 } else { RELATIONS_PER_TOWER };
        let insts = relation_instances(&ring, count, &mut rng_for(cfg.seed, &label, 0)).map_err(|e| usage(e.to_string()))?;
        let maps = ["dlog", "tilde_dlog", "beta", "eps_to_absolute"];
        let mut witnesses: Vec<Option<String>> = vec![None; maps.len()];
        for r in &insts {
            match relation_check(r) {
                Ok(rep) => {
                    for (slot, c) in witnesses.iter_mut().zip(&rep.checks) {
                        if slot.is_none() && !c.pass {
                            *slot = Some(format!("{} {}: lhs {} vs rhs {}", rep.kind, rep.instance, c.lhs, c.rhs));
                        }
                    }
                }
                Err(e) => {
                    for slot in witnesses.iter_mut().filter(|s| s.is_none()) {
                        *slot = Some(format!("{} = {}: {e}", r.lhs, r.rhs));
                    }
                }
            }
        }
        for (map, w) in maps.iter().zip(witnesses) {
            let name = format!("{map} respects Steinberg, multilinearity, commutativity [{label}]");
            let c = match w {
                None => Check::new(name, true),
                Some(w) => Check::failed(name, w),
            };
            checks.push(c.dims(json!({ "instances": insts.len() })));
        }
    }
    if let Some(inst) = inst {
        for text in &inst.file.relations {
            let name = format!("trivial symbol {text}");
            let v = inst.scope.eval_str(text).map_err(|e| usage(format!("relation `{text}`: {e}")))?;
            let Value::Symbol(w) = v else {
                return Err(usage(format!("relation `{text}` is not a symbol")));
            };
            let top = BaseTag::Level(inst.tower.step_count());
            let outcome = eps_split(&w).and_then(|(body, eps)| {
                Ok(vec![
                    ("dlog", dlog_word(&body, top)?),
                    ("tilde_dlog", tilde_dlog(&eps)?),
                    ("beta", beta(&eps)?),
                    ("eps_to_absolute", eps_to_absolute(&eps)?),
                ])
            });
            checks.push(match outcome {
                Ok(images) => match images.iter().find(|(_, w)| !w.is_zero()) {
                    None => Check::new(name, true),
                    Some((map, w)) => Check::failed(name, format!("{map} gives {}", w.format())),
                },
                Err(e) => Check::failed(name, e.to_string()),
            });
        }
    }
    Ok(checks)
}

fn diagram_checks(label: &str, rep: &DiagramReport, out: &mut Vec<Check>) {
    for c in &rep.checks {
        let mut check = Check::new(format!("{label}, p = {}: {}", rep.p, c.name), c.pass).dims(json!({ "tested": c.tested }));
        if let Some(w) = &c.witness {
            check = check.witness(w.clone());
        }
        out.push(check);
    }
}

fn alpha_delta(cfg: &Config, inst: Option<&Instance>) -> Run {
    let ring = match inst {
        Some(i) => i.scope.ring.clone(),
        None => ring_make(&Tower::rationals(), &["x", "y", "z", "w", "v"], None).map_err(|e| usage(e.to_string()))?,
    };
    let ps: Vec<usize> = cfg.p.map_or_else(|| (2..=4).collect(), |p| vec![p]);
    let mut checks = Vec::new();
    for p in ps {
        match verify_alpha_delta(p, &ring) {
            Ok(rep) => diagram_checks("alpha/delta diagram", &rep, &mut checks),
            Err(e) => checks.push(Check::failed(format!("alpha/delta diagram, p = {p}"), e.to_string())),
        }
        match deformed_deligne_split(p, &ring) {
            Ok(rep) => diagram_checks("deformed Deligne splitting", &rep, &mut checks),
            Err(e) => checks.push(Check::failed(format!("deformed Deligne splitting, p = {p}"), e.to_string())),
        }
    }
    Ok(checks)
}

fn dims_json(rep: &CohomologyReport) -> Json {
    json!({
        "degrees": rep.degrees,
        "dims": rep.dims,
        "dims_high": rep.dims_high,
        "stabilized": rep.stabilized,
        "D": rep.policy.degree_bound,
        "delta": rep.policy.delta,
    })
}

fn with_reps(mut c: Check, rep: &CohomologyReport) -> Check {
    for (n, reps) in rep.degrees.iter().zip(&rep.representatives) {
        for z in reps {
            c = c.witness(format!("H^{n}: {z}"));
        }
    }
    c
}

fn fail_on_error(name: String, e: Error) -> Check {
    Check::failed(name, e.to_string())
}

fn cech(cfg: &Config, inst: &Instance, policy: &TruncationPolicy) -> Run {
    let cover = inst.cover().map_err(UsageError)?;
    let top = inst.tower.step_count();
    let wanted: Vec<(String, Option<Vec<usize>>)> = match &cfg.sheaf {
        Some(s) => {
            let expect = inst.file.checks.cech.iter().find(|c| c.sheaf == *s).map(|c| c.dims.clone());
            vec![(s.clone(), expect)]
        }
        None if !inst.file.checks.cech.is_empty() => {
            inst.file.checks.cech.iter().map(|c| (c.sheaf.clone(), Some(c.dims.clone()))).collect()
        }
        None => return Err(usage("cech needs --sheaf (the instance lists no sheaves)")),
    };
    let mut checks = Vec::new();
    for (text, expect) in wanted {
        let sheaf = parse_sheaf(&text, top).map_err(UsageError)?;
        let name = format!("H^*({}, {text})", inst.label);
        checks.push(match sheaf_cohomology(cover, &sheaf, policy) {
            Ok(rep) => {
                let matches = expect.as_ref().is_none_or(|e| *e == rep.dims);
                let mut c = with_reps(Check::new(name, rep.stabilized && matches).dims(dims_json(&rep)), &rep);
                if !rep.stabilized {
                    c = c.witness(format!("not stabilized: {:?} at D vs {:?} at D + delta", rep.dims, rep.dims_high));
                }
                if let Some(e) = expect.filter(|_| !matches) {
                    c = c.witness(format!("expected {e:?}, computed {:?}", rep.dims));
                }
                c
            }
            Err(e) => fail_on_error(name, e),
        });
    }
    Ok(checks)
}

fn ps_for(cfg: &Config, listed: Vec<usize>) -> Vec<usize> {
    match cfg.p {
        Some(p) => vec![p],
        None if listed.is_empty() => vec![1],
        None => {
            let mut v = listed;
            v.sort_unstable();
            v.dedup();
            v
        }
    }
}

fn hypercoh(cfg: &Config, inst: &Instance, policy: &TruncationPolicy) -> Run {
    let cover = inst.cover().map_err(UsageError)?;
    let expects = &inst.file.checks.hypercoh;
    let base = BaseTag::Level(cover.top_level());
    let mut checks = Vec::new();
    for p in ps_for(cfg, expects.iter().map(|e| e.p).collect()) {
        let name = format!("H^*({}, tangent Deligne complex p = {p})", inst.label);
        let cx = match tangent_deligne(p, &cover.charts[0], base) {
            Ok(cx) => cx,
            Err(e) => {
                checks.push(fail_on_error(name, e));
                continue;
            }
        };
        let sq = differential_squares_to_zero(cover, &Layout::complex(&cx), policy);
        checks.push(match sq {
            Ok(ok) => Check::new(format!("total differential squares to zero (p = {p})"), ok),
            Err(e) => fail_on_error(format!("total differential squares to zero (p = {p})"), e),
        });
        checks.push(match hypercohomology(cover, &cx, policy) {
            Ok(rep) => {
                let wrong: Vec<String> = expects
                    .iter()
                    .filter(|e| e.p == p && rep.dim(e.degree) != e.dim)
                    .map(|e| format!("expected dim H^{} = {}, computed {}", e.degree, e.dim, rep.dim(e.degree)))
                    .collect();
                let mut c = with_reps(Check::new(name, rep.stabilized && wrong.is_empty()).dims(dims_json(&rep)), &rep);
                for w in wrong {
                    c = c.witness(w);
                }
                if !rep.stabilized {
                    c = c.witness("not stabilized");
                }
                c
            }
            Err(e) => fail_on_error(name, e),
        });
    }
    Ok(checks)
}

fn lemma24(cfg: &Config, inst: &Instance, policy: &TruncationPolicy) -> Run {
    let cover = inst.cover().map_err(UsageError)?;
    let mut checks = Vec::new();
    for p in ps_for(cfg, inst.file.checks.lemma24.clone()) {
        let name = format!("H^{0}(tangent Deligne) = sum H^({0}-i)(Omega^(i-1)) on {1}, p = {2}", 2 * p, inst.label, p);
        checks.push(match verify_splitting(p, cover, policy) {
            Ok(rep) => {
                let summands = |v: &[deligne_core::cech::SplitSummand]| -> Json {
                    v.iter().map(|s| json!({ "i": s.i, "q": s.q, "r": s.r, "dim": s.dim })).collect()
                };
                let dims = json!({
                    "degree": 2 * p,
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                    "summands": summands(&rep.summands),
                    "lower_degree": 2 * p - 1,
                    "lower_lhs": rep.lower_lhs,
                    "lower_rhs": rep.lower_rhs,
                    "lower_summands": summands(&rep.lower_summands),
                    "hypercohomology": dims_json(&rep.hyper),
                    "stabilized": rep.stabilized,
                });
                let mut c = Check::new(name, rep.pass()).dims(dims);
                if !rep.pass() {
                    c = c.witness(format!(
                        "degree {}: {} vs {}; degree {}: {} vs {}; stabilized {}",
                        2 * p,
                        rep.lhs,
                        rep.rhs,
                        2 * p - 1,
                        rep.lower_lhs,
                        rep.lower_rhs,
                        rep.stabilized
                    ));
                }
                c
            }
            Err(e) => fail_on_error(name, e),
        });
    }
    Ok(checks)
}

fn tangent_chow(cfg: &Config, inst: &Instance, policy: &TruncationPolicy) -> Run {
    let cover = inst.cover().map_err(UsageError)?;
    let expects = &inst.file.checks.tangent_chow;
    let mut checks = Vec::new();
    for p in ps_for(cfg, expects.iter().map(|e| e.p).collect()) {
        let name = format!("formal tangent space H^{p}({}, Omega^{}/Q)", inst.label, p - 1);
        checks.push(match formal_tangent_chow(cover, p, policy) {
            Ok(rep) => {
                let dim = rep.dim(p as i64);
                let expect = expects.iter().find(|e| e.p == p).map(|e| e.dim);
                let ok = rep.stabilized && expect.is_none_or(|e| e == dim);
                let mut c = Check::new(name, ok).dims(json!({ "dim": dim, "cohomology": dims_json(&rep) }));
                if let Some(i) = rep.degrees.iter().position(|&n| n == p as i64) {
                    for z in &rep.representatives[i] {
                        c = c.witness(z.clone());
                    }
                }
                if let Some(e) = expect.filter(|&e| e != dim) {
                    c = c.witness(format!("expected dimension {e}, computed {dim}"));
                }
                c
            }
            Err(e) => fail_on_error(name, e),
        });
    }
    Ok(checks)
}

fn map_check(name: String, rep: &TangentMapReport, mut ok: bool, notes: Vec<String>) -> Check {
    ok &= rep.stabilized();
    let dims = json!({
        "source_dim": rep.source_basis.len(),
        "target_dim": rep.target_basis.len(),
        "rank": rep.rank,
        "kernel_dim": rep.kernel_dim,
        "injective": rep.injective(),
        "verdict": rep.verdict.to_string(),
        "stabilized": rep.stabilized(),
        "source": dims_json(&rep.source),
        "target": dims_json(&rep.target),
    });
    let mut c = Check::new(name, ok).dims(dims).matrix(rep.matrix.clone());
    for z in &rep.source_basis {
        c = c.witness(format!("source: {z}"));
    }
    for z in &rep.target_basis {
        c = c.witness(format!("target: {z}"));
    }
    for n in notes {
        c = c.witness(n);
    }
    c
}

fn kernel_letters_check(inst: &Instance, letters: deligne_core::Result<Vec<String>>) -> Check {
    let name = format!("letters killed by Omega_/Q -> Omega_/K on {}", inst.label);
    match letters {
        Ok(letters) => {
            let expect = inst.file.checks.kernel_letters.as_ref();
            let ok = expect.is_none_or(|e| *e == letters);
            let mut c = Check::new(name, ok).dims(json!({ "kernel_letters": letters }));
            if let Some(e) = expect.filter(|_| !ok) {
                c = c.witness(format!("expected {e:?}, computed {letters:?}"));
            }
            c
        }
        Err(e) => fail_on_error(name, e),
    }
}

fn tangent_maps(cfg: &Config, inst: &Instance, policy: &TruncationPolicy, composed: bool) -> Run {
    let cover = inst.cover().map_err(UsageError)?;
    let mut checks = Vec::new();
    let number_field = inst.tower.is_number_field();
    if composed && !number_field {
        let name = format!("composed infinitesimal map on {}", inst.label);
        let cmodel = default_cmodel(&inst.tower).map_err(|e| usage(e.to_string()))?;
        let p = ps_for(cfg, inst.file.checks.tangent_maps.clone())[0];
        checks.push(match composed_infinitesimal(cover, p, &cmodel, policy) {
            Err(Error::NotNumberField) => Check {
                status: Status::Refused,
                ..Check::new(name, true).witness(Error::NotNumberField.to_string())
            },
            Err(e) => fail_on_error(name, e),
            Ok(_) => Check::failed(name, "accepted a tower that is not a number field"),
        });
        checks.push(kernel_letters_check(inst, transcendental_kernel_letters(cover)));
        return Ok(checks);
    }
    if !composed && inst.file.checks.kernel_letters.is_some() {
        checks.push(kernel_letters_check(inst, transcendental_kernel_letters(cover)));
    }
    for p in ps_for(cfg, inst.file.checks.tangent_maps.clone()) {
        if composed {
            let name = format!("H^{p}(Omega^{}) -> H^{p}(Omega^{}) (x) C injective on {}", p - 1, p - 1, inst.label);
            let cmodel = default_cmodel(&inst.tower).map_err(|e| usage(e.to_string()))?;
            checks.push(match composed_infinitesimal(cover, p, &cmodel, policy) {
                Ok(rep) => {
                    let note = format!("C modelled as {}; verdict {}", cmodel.describe(), rep.verdict);
                    map_check(name, &rep, rep.injective(), vec![note])
                }
                Err(e) => fail_on_error(name, e),
            });
        } else {
            let name = format!("delta r: H^{p}(Omega^{}/Q) -> H^{p}(Omega^{}/K) on {}", p - 1, p - 1, inst.label);
            checks.push(match delta_r(cover, p, policy) {
                Ok(rep) => {
                    // over a number field the two bases coincide and so must the representatives
                    let ok = !number_field || rep.is_identity();
                    let mut notes = vec![format!("verdict {}", rep.verdict)];
                    if !rep.kernel_letters.is_empty() {
                        notes.push(format!("kernel letters {}", rep.kernel_letters.join(", ")));
                    }
                    map_check(name, &rep, ok, notes)
                }
                Err(e) => fail_on_error(name, e),
            });
        }
    }
    Ok(checks)
}
