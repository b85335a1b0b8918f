//! Fixpoint engines: parametrized bisimilarity, the contextual bisimilarity
//! map `𝔡`, strong bisimilarity and behavioural metrics.

mod behavioural;
mod family;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lts::{ProcessLts, StateId};
use crate::mlts::{Mlts, SimPreorder, TermId, Universe};
use crate::report::{Entry, Report, Status};

pub use behavioural::{behavioural_as_cbm, behavioural_metric, strong_bisim, MetricStyle, MetricTable, Partition};
pub use family::{
    brute_force_family, env_param_bisim, env_param_bisim_with_distance, param_bisim, param_bisim_family,
    ParamBisimFamily, ORACLE_MAX_LABELS, ORACLE_MAX_PROCS, ORACLE_MAX_TERMS,
};

/// A value of `𝔡(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricValue {
    pub term: TermId,
    /// False when the universe has no least parameter and `term` is the
    /// meet of the minimal ones.
    pub in_universe: bool,
    /// Number of universe terms `s` with `p ∼_s q`.
    pub parameters: usize,
}

fn metric_from(
    m: &Mlts,
    universe: &Universe,
    order: &SimPreorder,
    family: &ParamBisimFamily,
    p: StateId,
    q: StateId,
) -> Result<MetricValue> {
    let xs = family.parameters(p, q);
    if let Some(i) = order.minimum(&xs) {
        return Ok(MetricValue {
            term: universe.term(i),
            in_universe: true,
            parameters: xs.len(),
        });
    }
    let mut minimal: Vec<usize> = Vec::new();
    for &x in &xs {
        let strictly_above = xs.iter().any(|&y| order.leq(y, x) && !order.leq(x, y));
        if !strictly_above && !minimal.iter().any(|&k| order.equiv(k, x)) {
            minimal.push(x);
        }
    }
    let members: Vec<TermId> = minimal.iter().map(|&i| universe.term(i)).collect();
    Ok(MetricValue {
        term: m.meet(&members)?,
        in_universe: false,
        parameters: xs.len(),
    })
}

/// `𝔡(p, q)` relative to `universe`: the least universe term `s` with
/// `p ∼_s q`, or the meet of the minimal ones when there is no least.
pub fn contextual_metric(lts: &ProcessLts, m: &Mlts, universe: &Universe, p: StateId, q: StateId) -> Result<TermId> {
    let family = param_bisim_family(lts, m, universe)?;
    let order = SimPreorder::compute(m, universe);
    Ok(metric_from(m, universe, &order, &family, p, q)?.term)
}

/// Adds one base state per unordered pair of processes whose moves spell
/// out the matching game, making `𝔡` exact over any universe containing
/// them. Returns the states indexed by `[p][q]`.
fn synthesize_characteristic(lts: &ProcessLts, m: &mut Mlts) -> Result<Vec<Vec<TermId>>> {
    let n = lts.num_states();
    let mut c = vec![vec![TermId::BOT; n]; n];
    for p in 0..n {
        for q in p..n {
            let name = format!("<{},{}>", lts.state_name(p), lts.state_name(q));
            let t = m.add_base_unchecked(&name, lts.immediate(p, q))?;
            c[p][q] = t;
            c[q][p] = t;
        }
    }
    let max_choices = m.bounds().max_choices;
    for p in 0..n {
        for q in p..n {
            for l in 0..m.labels().len() {
                let pl = lts.label(&m.labels()[l]).ok();
                let (a, b) = match pl {
                    Some(pl) => (lts.succ(p, pl), lts.succ(q, pl)),
                    None => (&[][..], &[][..]),
                };
                let targets = match (a.is_empty(), b.is_empty()) {
                    (true, true) => vec![TermId::BOT],
                    (true, false) | (false, true) => Vec::new(),
                    (false, false) => {
                        let left = images(a, b, |x, y| c[x][y], max_choices)?;
                        let right = images(b, a, |y, x| c[x][y], max_choices)?;
                        if left.len().saturating_mul(right.len()) > max_choices {
                            return Err(Error::resource(
                                "max_choices",
                                max_choices,
                                format!("matching moves of {} and {}", lts.state_name(p), lts.state_name(q)),
                            ));
                        }
                        let mut out = Vec::new();
                        for f in &left {
                            for g in &right {
                                let mut members = f.clone();
                                members.extend_from_slice(g);
                                out.push(m.join(&members)?);
                            }
                        }
                        out
                    }
                };
                m.set_transitions(c[p][q], l, targets)?;
            }
        }
    }
    Ok(c)
}

/// Distinct images `{pair(x, f x) : x ∈ from}` over all `f: from → to`.
fn images(
    from: &[StateId],
    to: &[StateId],
    pair: impl Fn(StateId, StateId) -> TermId,
    max_choices: usize,
) -> Result<Vec<Vec<TermId>>> {
    let mut acc: Vec<Vec<TermId>> = vec![Vec::new()];
    for &x in from {
        let mut next = Vec::new();
        for img in &acc {
            for &y in to {
                let mut v = img.clone();
                let t = pair(x, y);
                if let Err(pos) = v.binary_search(&t) {
                    v.insert(pos, t);
                }
                next.push(v);
            }
        }
        next.sort();
        next.dedup();
        if next.len() > max_choices {
            return Err(Error::resource(
                "max_choices",
                max_choices,
                "choice functions for a matching move",
            ));
        }
        acc = next;
    }
    Ok(acc)
}

/// A process LTS and an MLTS prepared for repeated `𝔡` queries: the MLTS
/// gains the process labels (and optionally characteristic states), the
/// universe, `≼_V` and the family are computed once.
#[derive(Debug, Clone)]
pub struct Workbench {
    lts: ProcessLts,
    mlts: Mlts,
    universe: Universe,
    order: SimPreorder,
    family: ParamBisimFamily,
    characteristic: Option<Vec<Vec<TermId>>>,
}

impl Workbench {
    /// Universe: `bot`, `top`, every base state and `roots`, closed under moves.
    pub fn new(lts: ProcessLts, mlts: &Mlts, roots: &[TermId]) -> Result<Self> {
        Self::build(lts, mlts, roots, false)
    }

    /// As [`Workbench::new`], with one characteristic state per process
    /// pair added to the MLTS so that `𝔡` is attained in the universe.
    pub fn with_characteristic(lts: ProcessLts, mlts: &Mlts, roots: &[TermId]) -> Result<Self> {
        Self::build(lts, mlts, roots, true)
    }

    fn build(lts: ProcessLts, mlts: &Mlts, roots: &[TermId], synthesize: bool) -> Result<Self> {
        if lts.quantale != mlts.quantale {
            return Err(Error::Type(format!(
                "process LTS is over {} but the MLTS is over {}",
                lts.quantale.name(),
                mlts.quantale.name()
            )));
        }
        let mut m = mlts.clone();
        for l in lts.labels() {
            if m.label(l).is_err() {
                m.add_label(l);
            }
        }
        let characteristic = if synthesize {
            Some(synthesize_characteristic(&lts, &mut m)?)
        } else {
            None
        };
        let universe = Universe::reachable(&m, roots)?;
        let order = SimPreorder::compute(&m, &universe);
        let family = param_bisim_family(&lts, &m, &universe)?;
        Ok(Workbench {
            lts,
            mlts: m,
            universe,
            order,
            family,
            characteristic,
        })
    }

    pub fn lts(&self) -> &ProcessLts {
        &self.lts
    }

    pub fn mlts(&self) -> &Mlts {
        &self.mlts
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn order(&self) -> &SimPreorder {
        &self.order
    }

    pub fn family(&self) -> &ParamBisimFamily {
        &self.family
    }

    pub fn characteristic(&self, p: StateId, q: StateId) -> Option<TermId> {
        self.characteristic.as_ref().map(|c| c[p][q])
    }

    pub fn metric(&self, p: StateId, q: StateId) -> Result<MetricValue> {
        metric_from(&self.mlts, &self.universe, &self.order, &self.family, p, q)
    }

    pub fn metric_named(&self, p: &str, q: &str) -> Result<MetricValue> {
        self.metric(self.lts.state(p)?, self.lts.state(q)?)
    }

    /// `p ∼_s q` for any term `s`, in or out of the universe.
    pub fn check(&self, p: StateId, q: StateId, s: TermId) -> Result<bool> {
        match self.universe.index_of(s) {
            Some(i) => Ok(self.family.contains(i, p, q)),
            None => param_bisim(&self.lts, &self.mlts, p, q, s),
        }
    }

    /// `a ≼_V b`, from the matrix when both are in the universe.
    pub fn leq(&self, a: TermId, b: TermId) -> Result<bool> {
        match (self.universe.index_of(a), self.universe.index_of(b)) {
            (Some(i), Some(j)) => Ok(self.order.leq(i, j)),
            _ => self.mlts.leq(a, b),
        }
    }

    pub fn equiv(&self, a: TermId, b: TermId) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    pub fn render(&self, t: TermId) -> String {
        self.mlts.render(t)
    }

    /// Universe listing, per-term relations and the `𝔡` table.
    pub fn export(&self) -> Result<Value> {
        let lts = &self.lts;
        let name = |p: StateId| lts.state_name(p).to_string();
        let universe: Vec<Value> = (0..self.universe.len())
            .map(|i| {
                let t = self.universe.term(i);
                let pairs: Vec<Value> = self
                    .family
                    .pairs(i)
                    .into_iter()
                    .map(|(p, q)| json!([name(p), name(q)]))
                    .collect();
                json!({
                    "term": self.render(t),
                    "down": self.mlts.quantale.display(self.mlts.down(t)),
                    "relation": pairs,
                })
            })
            .collect();
        let mut table = Vec::new();
        for p in 0..lts.num_states() {
            for q in 0..lts.num_states() {
                let v = self.metric(p, q)?;
                table.push(json!({
                    "p": name(p),
                    "q": name(q),
                    "metric": self.render(v.term),
                    "in_universe": v.in_universe,
                }));
            }
        }
        Ok(json!({
            "quantale": self.mlts.quantale.name(),
            "policy": lts.policy().as_str(),
            "characteristic": self.characteristic.is_some(),
            "universe": universe,
            "metric": table,
        }))
    }
}

/// Checks that `𝔡` is a pseudometric on the workbench's processes:
/// diagonal `≃ bot`, symmetry, and the triangle inequality against the
/// symbolic `plus`.
pub fn metric_axiom_check(wb: &Workbench) -> Result<Report> {
    let n = wb.lts.num_states();
    let mut report = Report::new("metric axioms")
        .with_config("processes", n)
        .with_config("universe", wb.universe.len())
        .with_config("characteristic", wb.characteristic.is_some())
        .with_config("policy", wb.lts.policy())
        .with_config("bounds", wb.mlts.bounds());
    let mut d = vec![vec![TermId::BOT; n]; n];
    for (p, row) in d.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = wb.metric(p, q)?.term;
        }
    }
    let name = |p: StateId| wb.lts.state_name(p);

    let mut bad = None;
    for (p, row) in d.iter().enumerate() {
        if !wb.equiv(row[p], TermId::BOT)? {
            bad = Some(format!("d({0},{0}) = {1}", name(p), wb.render(row[p])));
            break;
        }
    }
    report.push(finding("metric.diagonal", bad, n));

    let mut bad = None;
    'sym: for p in 0..n {
        for q in p + 1..n {
            if !wb.equiv(d[p][q], d[q][p])? {
                bad = Some(format!(
                    "d({0},{1}) = {2} but d({1},{0}) = {3}",
                    name(p),
                    name(q),
                    wb.render(d[p][q]),
                    wb.render(d[q][p])
                ));
                break 'sym;
            }
        }
    }
    report.push(finding("metric.symmetric", bad, n * n.saturating_sub(1) / 2));

    let mut bad = None;
    'tri: for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let bound = wb.mlts.plus(d[p][q], d[q][r])?;
                if !wb.mlts.leq(d[p][r], bound)? {
                    bad = Some(format!(
                        "d({},{}) = {} is not below {}",
                        name(p),
                        name(r),
                        wb.render(d[p][r]),
                        wb.render(bound)
                    ));
                    break 'tri;
                }
            }
        }
    }
    report.push(finding("metric.triangle", bad, n * n * n));
    Ok(report)
}

fn finding(id: &str, witness: Option<String>, checked: usize) -> Entry {
    match witness {
        None => Entry::new(id, Status::Pass).detail(format!("{checked} instances")),
        Some(w) => Entry::new(id, Status::Fail)
            .detail(format!("{checked} instances"))
            .witness([w]),
    }
}
