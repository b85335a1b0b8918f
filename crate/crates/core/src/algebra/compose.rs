//! Compositionality of `𝔡` under the process operators: the `f̂` bound,
//! compatibility, increasing states and the per-operator verifiers.

use std::fmt;
use std::str::FromStr;

use super::semantics::{build_term_lts, TermLts};
use super::term::ProcessTerm;
use crate::error::{Error, Result};
use crate::lts::{ProcessLts, StateId};
use crate::mlts::{Mlts, SimPreorder, TermId, Universe};
use crate::quantale::plus_is_idempotent;
use crate::report::{Entry, Report, Status};
use crate::solver::Workbench;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operator {
    Restrict(String),
    Prefix(String),
    Sum,
    Par,
    Bang,
}

impl Operator {
    pub fn arity(&self) -> usize {
        match self {
            Operator::Sum | Operator::Par => 2,
            _ => 1,
        }
    }

    pub fn apply(&self, args: &[ProcessTerm]) -> ProcessTerm {
        match self {
            Operator::Restrict(l) => ProcessTerm::restrict(l, args[0].clone()),
            Operator::Prefix(l) => ProcessTerm::prefix(l, args[0].clone()),
            Operator::Sum => ProcessTerm::sum(args[0].clone(), args[1].clone()),
            Operator::Par => ProcessTerm::par(args[0].clone(), args[1].clone()),
            Operator::Bang => ProcessTerm::bang(args[0].clone()),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Restrict(l) => write!(f, "restrict:{l}"),
            Operator::Prefix(l) => write!(f, "prefix:{l}"),
            Operator::Sum => f.write_str("sum"),
            Operator::Par => f.write_str("par"),
            Operator::Bang => f.write_str("bang"),
        }
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, label) = match s.split_once(':') {
            Some((h, l)) => (h, Some(l.trim())),
            None => (s, None),
        };
        let need = |l: Option<&str>| {
            l.filter(|l| !l.is_empty())
                .map(str::to_string)
                .ok_or_else(|| Error::parse(format!("operator `{s}`"), "expected a label, as in restrict:a"))
        };
        match head.trim() {
            "restrict" | "nu" => Ok(Operator::Restrict(need(label)?)),
            "prefix" => Ok(Operator::Prefix(need(label)?)),
            "sum" | "+" => Ok(Operator::Sum),
            "par" | "|" => Ok(Operator::Par),
            "bang" | "!" => Ok(Operator::Bang),
            _ => Err(Error::parse(
                format!("operator `{s}`"),
                "expected restrict:<l>, prefix:<l>, sum, par or bang",
            )),
        }
    }
}

/// All tuples of length `n` over `0..k`, in lexicographic order.
fn tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// The greatest compatibility relation between universe terms and
/// processes.
#[derive(Debug, Clone)]
pub struct CompatRelation {
    terms: Vec<TermId>,
    rel: Vec<Vec<bool>>,
    pub rounds: usize,
}

impl CompatRelation {
    /// `None` when `s` is outside the universe.
    pub fn is_compatible(&self, s: TermId, p: StateId) -> Option<bool> {
        self.terms.iter().position(|&t| t == s).map(|i| self.rel[i][p])
    }
}

pub fn compatibility(m: &Mlts, lts: &ProcessLts, universe: &Universe) -> Result<CompatRelation> {
    let order = SimPreorder::compute(m, universe);
    compatibility_with(m, lts, universe, &order)
}

fn compatibility_with(m: &Mlts, lts: &ProcessLts, universe: &Universe, order: &SimPreorder) -> Result<CompatRelation> {
    let map: Vec<Option<usize>> = m.labels().iter().map(|l| lts.label(l).ok()).collect();
    let (u, n) = (universe.len(), lts.num_states());
    let mut rel = vec![vec![true; n]; u];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;
        for s in 0..u {
            for p in 0..n {
                if !rel[s][p] {
                    continue;
                }
                let bad = (0..m.labels().len()).any(|l| {
                    universe.succ(s, l).iter().any(|&s2| {
                        !rel[s2][p]
                            || map[l].is_some_and(|pl| {
                                !lts.succ(p, pl).is_empty()
                                    && (!order.leq(s, s2) || lts.succ(p, pl).iter().any(|&p2| !rel[s2][p2]))
                            })
                    })
                });
                if bad {
                    rel[s][p] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(CompatRelation {
                terms: universe.terms().to_vec(),
                rel,
                rounds,
            });
        }
    }
}

/// Universe terms that only ever move to `≼_V`-larger terms.
pub fn increasing_states(m: &Mlts, universe: &Universe) -> Vec<TermId> {
    let order = SimPreorder::compute(m, universe);
    increasing_with(m, universe, &order)
        .into_iter()
        .enumerate()
        .filter(|&(_, b)| b)
        .map(|(i, _)| universe.term(i))
        .collect()
}

fn increasing_with(m: &Mlts, universe: &Universe, order: &SimPreorder) -> Vec<bool> {
    let u = universe.len();
    let mut inc = vec![true; u];
    loop {
        let mut changed = false;
        for s in 0..u {
            if inc[s]
                && (0..m.labels().len()).any(|l| universe.succ(s, l).iter().any(|&s2| !inc[s2] || !order.leq(s, s2)))
            {
                inc[s] = false;
                changed = true;
            }
        }
        if !changed {
            return inc;
        }
    }
}

/// Checks `D(f p⃗, f q⃗) ≼ D(p₁,q₁) ⊕ … ⊕ D(pₙ,qₙ)` over all tuples from
/// `candidates`.
pub fn check_immediate_compositionality(terms: &TermLts, op: &Operator, candidates: &[ProcessTerm]) -> Result<Report> {
    let lts = &terms.lts;
    let q = &lts.quantale;
    let ids: Vec<StateId> = candidates.iter().map(|c| terms.state(c)).collect::<Result<_>>()?;
    let mut report = Report::new("immediate metric compositionality").with_config("operator", op);
    let n = op.arity();
    let mut witness = None;
    let mut checked = 0;
    'all: for ps in tuples(ids.len(), n) {
        for qs in tuples(ids.len(), n) {
            checked += 1;
            let bound = ps
                .iter()
                .zip(&qs)
                .map(|(&a, &b)| lts.immediate(ids[a], ids[b]))
                .fold(q.bottom(), |acc, v| q.plus_unchecked(acc, v));
            let fp = op.apply(&ps.iter().map(|&i| candidates[i].clone()).collect::<Vec<_>>());
            let fq = op.apply(&qs.iter().map(|&i| candidates[i].clone()).collect::<Vec<_>>());
            let d = lts.immediate(terms.state(&fp)?, terms.state(&fq)?);
            if !q.leq_unchecked(d, bound) {
                witness = Some(vec![
                    fp.to_string(),
                    fq.to_string(),
                    format!("D = {} but the bound is {}", q.display(d), q.display(bound)),
                ]);
                break 'all;
            }
        }
    }
    report.push(match witness {
        None => Entry::new("comp-imm", Status::Pass).detail(format!("{checked} tuple pairs")),
        Some(w) => Entry::new("comp-imm", Status::Fail).witness(w),
    });
    Ok(report)
}

/// `f̂(p⃗, s⃗)`: the join of `𝔡(f p⃗, f p⃗′)` over candidate tuples with
/// `𝔡(pᵢ, pᵢ′) ≼ sᵢ`. `wb` must be built over `terms.lts`.
pub fn f_hat(
    wb: &Workbench,
    terms: &TermLts,
    op: &Operator,
    ps: &[ProcessTerm],
    ss: &[TermId],
    candidates: &[ProcessTerm],
) -> Result<TermId> {
    if ps.len() != op.arity() || ss.len() != op.arity() {
        return Err(Error::Contract(format!("{op} takes {} arguments", op.arity())));
    }
    let pid: Vec<StateId> = ps.iter().map(|p| terms.state(p)).collect::<Result<_>>()?;
    let cid: Vec<StateId> = candidates.iter().map(|c| terms.state(c)).collect::<Result<_>>()?;
    let fp = terms.state(&op.apply(ps))?;
    let mut members: Vec<TermId> = Vec::new();
    for t in tuples(cid.len(), op.arity()) {
        let mut ok = true;
        for (i, &k) in t.iter().enumerate() {
            if !wb.leq(wb.metric(pid[i], cid[k])?.term, ss[i])? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let args: Vec<ProcessTerm> = t.iter().map(|&k| candidates[k].clone()).collect();
        let d = wb.metric(fp, terms.state(&op.apply(&args))?)?.term;
        // keep only ≼-maximal members, one per class
        let mut dominated = false;
        for &x in &members {
            if wb.leq(d, x)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            let mut kept = Vec::with_capacity(members.len() + 1);
            for &x in &members {
                if !wb.leq(x, d)? {
                    kept.push(x);
                }
            }
            kept.push(d);
            members = kept;
        }
    }
    wb.mlts().join(&members)
}

/// What [`verify_composition`] quantifies over.
#[derive(Debug, Clone, Default)]
pub struct ComposeConfig {
    /// Processes substituted for the operator's arguments; defaults to
    /// every state of the base LTS.
    pub candidates: Option<Vec<ProcessTerm>>,
    /// Distances; defaults to the universe reachable from the MLTS's base
    /// states.
    pub params: Option<Vec<TermId>>,
    /// Also evaluate `f̂` literally, with exact `𝔡`, and compare.
    pub literal: bool,
}

/// Checks the operator's compositionality bound on every applicable tuple,
/// through `𝔡(p, q) ≼ s ⟺ p ∼_s q`: the bound `b` holds for `f̂(p⃗, s⃗)`
/// iff `f p⃗ ∼_b f q⃗` for every `q⃗` with `pᵢ ∼_{sᵢ} qᵢ`.
pub fn verify_composition(base: &ProcessLts, m: &Mlts, op: &Operator, config: &ComposeConfig) -> Result<Report> {
    let candidates: Vec<ProcessTerm> = match &config.candidates {
        Some(c) => c.clone(),
        None => base.states().iter().map(|s| ProcessTerm::atom(s)).collect(),
    };
    let bounds = m.bounds();
    let mut roots = candidates.clone();
    for t in tuples(candidates.len(), op.arity()) {
        roots.push(op.apply(&t.iter().map(|&k| candidates[k].clone()).collect::<Vec<_>>()));
    }
    let terms = build_term_lts(base, &roots, &bounds)?;
    let params: Vec<TermId> = match &config.params {
        Some(p) => p.clone(),
        None => Universe::reachable(m, &[])?.terms().to_vec(),
    };
    let names: Vec<String> = params.iter().map(|&s| m.render(s)).collect();
    let mut report = Report::new(format!("compositionality of {op}"))
        .with_config("operator", op)
        .with_config("policy", base.policy())
        .with_config("candidates", candidates.len())
        .with_config("params", names.join(" "))
        .with_config("term_states", terms.lts.num_states())
        .with_config("K", bounds.unfold)
        .with_config("bounded", terms.lts.is_bounded());

    let pre = check_immediate_compositionality(&terms, op, &candidates)?;
    if let Some(e) = pre.failures().next() {
        let mut e = e.clone();
        e.id = "precondition.comp-imm".into();
        e.status = Status::Skip;
        e.detail = "immediate metric is not compositional for this operator; no claim made".into();
        report.push(e);
        return Ok(report);
    }
    report.push(Entry::new("precondition.comp-imm", Status::Pass));

    // plus bounds are precomputed so the family covers them
    let mut extra = Vec::new();
    let mut plus = vec![vec![TermId::BOT; params.len()]; params.len()];
    if op.arity() == 2 {
        for (i, &a) in params.iter().enumerate() {
            for (j, &b) in params.iter().enumerate() {
                plus[i][j] = m.plus(a, b)?;
                extra.push(plus[i][j]);
            }
        }
    }
    let mut roots_v = params.clone();
    roots_v.extend(extra);
    let wb = Workbench::new(terms.lts.clone(), m, &roots_v)?;
    let lit = if config.literal {
        Some(Workbench::with_characteristic(terms.lts.clone(), m, &roots_v)?)
    } else {
        None
    };
    let cid: Vec<StateId> = candidates.iter().map(|c| terms.state(c)).collect::<Result<_>>()?;
    let compat = if *op == Operator::Par {
        Some(compatibility_with(wb.mlts(), &terms.lts, wb.universe(), wb.order())?)
    } else {
        None
    };
    let idempotent = if *op == Operator::Bang {
        let q = &m.quantale;
        plus_is_idempotent(q, &q.carrier().unwrap_or_else(|| q.default_sample()))?
    } else {
        false
    };
    let inc = if *op == Operator::Bang {
        Some(increasing_with(wb.mlts(), wb.universe(), wb.order()))
    } else {
        None
    };
    let apply = |t: &[usize]| -> Result<StateId> {
        terms.state(&op.apply(&t.iter().map(|&k| candidates[k].clone()).collect::<Vec<_>>()))
    };
    let show = |t: &[usize]| {
        t.iter()
            .map(|&k| candidates[k].to_string())
            .collect::<Vec<_>>()
            .join(",")
    };

    let n = op.arity();
    for ps in tuples(candidates.len(), n) {
        for ss in tuples(params.len(), n) {
            let svec: Vec<TermId> = ss.iter().map(|&i| params[i]).collect();
            let id = format!(
                "{op}({}; {})",
                show(&ps),
                ss.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")
            );
            // (parameters for the arguments, bound for the composite)
            let (arg_params, bound): (Vec<TermId>, TermId) = match op {
                Operator::Restrict(_) => (svec.clone(), svec[0]),
                Operator::Sum => (svec.clone(), plus[ss[0]][ss[1]]),
                Operator::Par => {
                    let c = compat.as_ref().unwrap();
                    let ok = |s: TermId, p: usize| c.is_compatible(s, cid[p]).unwrap_or(false);
                    if !(ok(svec[0], ps[1]) && ok(svec[1], ps[0])) {
                        report.push(Entry::new(id, Status::Skip).detail("distances not compatible with the context"));
                        continue;
                    }
                    (svec.clone(), plus[ss[0]][ss[1]])
                }
                Operator::Bang => {
                    let i = wb.universe().index_of(svec[0]).unwrap();
                    if !(inc.as_ref().unwrap()[i] && idempotent) {
                        let why = if idempotent {
                            "not increasing"
                        } else {
                            "plus is not idempotent"
                        };
                        report.push(Entry::new(id, Status::Skip).detail(why));
                        continue;
                    }
                    (svec.clone(), svec[0])
                }
                Operator::Prefix(l) => {
                    let eps = svec[0];
                    let mlab = wb.mlts().label(l)?;
                    let reducts = wb.mlts().moves(eps, mlab)?;
                    let s_l = wb.mlts().meet(&reducts)?;
                    let q = &m.quantale;
                    let above_bot = |t: TermId| -> Result<bool> { Ok(!wb.leq(t, TermId::BOT)?) };
                    if !above_bot(eps)? || !above_bot(s_l)? || !q.leq(wb.mlts().down(s_l), wb.mlts().down(eps))? {
                        report.push(
                            Entry::new(id, Status::Skip)
                                .detail(format!("no witness: meet of {l}-reducts is {}", wb.render(s_l))),
                        );
                        continue;
                    }
                    (vec![s_l], eps)
                }
            };
            let fp = apply(&ps)?;
            let mut violation = None;
            for qs in tuples(candidates.len(), n) {
                let mut related = true;
                for i in 0..n {
                    if !wb.check(cid[ps[i]], cid[qs[i]], arg_params[i])? {
                        related = false;
                        break;
                    }
                }
                if related && !wb.check(fp, apply(&qs)?, bound)? {
                    violation = Some(qs);
                    break;
                }
            }
            let mut entry = match &violation {
                None => Entry::new(id, Status::Pass),
                Some(qs) => Entry::new(id, Status::Fail).witness([
                    format!("q = ({})", show(qs)),
                    format!(
                        "{} is not ~ {} under {}",
                        terms.lts.state_name(fp),
                        terms.lts.state_name(apply(qs)?),
                        wb.render(bound)
                    ),
                ]),
            };
            if matches!(op, Operator::Prefix(_)) {
                entry = entry.detail(format!("witness delta = {}", wb.render(arg_params[0])));
            }
            if let Some(lw) = &lit {
                let pterms: Vec<ProcessTerm> = ps.iter().map(|&k| candidates[k].clone()).collect();
                let fh = f_hat(lw, &terms, op, &pterms, &arg_params, &candidates)?;
                let literal_holds = lw.leq(fh, bound)?;
                if literal_holds != violation.is_none() {
                    entry = Entry::new(entry.id.clone(), Status::Fail).witness([format!(
                        "literal f-hat {} disagrees with the characterization",
                        lw.render(fh)
                    )]);
                }
            }
            report.push(entry);
        }
    }
    Ok(report)
}
