//! Strong bisimilarity and quantale-valued behavioural metrics.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lts::{ProcessLts, StateId};
use crate::mlts::{quantale_as_mlts, TermId};
use crate::quantale::{Mode, QuantaleValue};
use crate::report::{Entry, Report, Status};

use super::Workbench;

/// Blocks of the coarsest strong bisimulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block: Vec<usize>,
    pub rounds: usize,
}

impl Partition {
    pub fn block(&self, p: StateId) -> usize {
        self.block[p]
    }

    pub fn same(&self, p: StateId, q: StateId) -> bool {
        self.block[p] == self.block[q]
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |&b| b + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<StateId>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (p, &b) in self.block.iter().enumerate() {
            out[b].push(p);
        }
        out
    }
}

/// Partition refinement by successor signatures.
pub fn strong_bisim(lts: &ProcessLts) -> Partition {
    let n = lts.num_states();
    let mut block = vec![0usize; n];
    let mut count = usize::from(n > 0);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for p in 0..n {
            let mut sig: Vec<(usize, usize)> = (0..lts.num_labels())
                .flat_map(|l| lts.succ(p, l).iter().map(move |&r| (l, r)))
                .map(|(l, r)| (l, block[r]))
                .collect();
            sig.sort_unstable();
            sig.dedup();
            let fresh = ids.len();
            next[p] = *ids.entry((block[p], sig)).or_insert(fresh);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return Partition { block, rounds };
        }
        count = new_count;
    }
}

/// How a move of one process is matched by the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricStyle {
    /// Each move matched by a chosen move, over all choice functions.
    PerMove,
    /// `⋁` over moves of `⋀` over matches.
    Hausdorff,
}

impl MetricStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricStyle::PerMove => "per-move",
            MetricStyle::Hausdorff => "hausdorff",
        }
    }
}

impl fmt::Display for MetricStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-move" | "permove" => Ok(MetricStyle::PerMove),
            "hausdorff" => Ok(MetricStyle::Hausdorff),
            _ => Err(Error::parse(format!("style `{s}`"), "expected per-move or hausdorff")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetricTable {
    pub style: MetricStyle,
    values: Vec<Vec<QuantaleValue>>,
    pub iterations: usize,
}

impl MetricTable {
    pub fn get(&self, p: StateId, q: StateId) -> QuantaleValue {
        self.values[p][q]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct values in first-occurrence order.
    pub fn values(&self) -> Vec<QuantaleValue> {
        let mut out: Vec<QuantaleValue> = Vec::new();
        for row in &self.values {
            for &v in row {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

fn step(
    lts: &ProcessLts,
    style: MetricStyle,
    cur: &[Vec<QuantaleValue>],
    max_choices: usize,
) -> Result<Vec<Vec<QuantaleValue>>> {
    let q = &lts.quantale;
    let n = lts.num_states();
    let mut next = vec![vec![q.bottom(); n]; n];
    for p in 0..n {
        for r in 0..n {
            let mut acc = vec![lts.immediate(p, r)];
            for l in 0..lts.num_labels() {
                let (a, b) = (lts.succ(p, l), lts.succ(r, l));
                match style {
                    MetricStyle::Hausdorff => {
                        for &x in a {
                            acc.push(q.fold(Mode::Meet, b.iter().map(|&y| cur[x][y])));
                        }
                        for &y in b {
                            acc.push(q.fold(Mode::Meet, a.iter().map(|&x| cur[x][y])));
                        }
                    }
                    MetricStyle::PerMove => {
                        acc.push(per_move(q, a, b, |x, y| cur[x][y], max_choices)?);
                        acc.push(per_move(q, b, a, |y, x| cur[x][y], max_choices)?);
                    }
                }
            }
            next[p][r] = q.fold(Mode::Join, acc);
        }
    }
    Ok(next)
}

/// `⋀_f ⋁_x M(x, f x)` over all `f: from → to`.
fn per_move(
    q: &crate::quantale::Quantale,
    from: &[StateId],
    to: &[StateId],
    m: impl Fn(StateId, StateId) -> QuantaleValue,
    max_choices: usize,
) -> Result<QuantaleValue> {
    if from.is_empty() {
        return Ok(q.bottom());
    }
    let total = (to.len() as u128).checked_pow(from.len() as u32).unwrap_or(u128::MAX);
    if total > max_choices as u128 {
        return Err(Error::resource(
            "max_choices",
            max_choices,
            "choice functions for a per-move match",
        ));
    }
    let mut choice = vec![0usize; from.len()];
    let mut best = q.top();
    if to.is_empty() {
        return Ok(best);
    }
    loop {
        let v = q.fold(Mode::Join, from.iter().zip(&choice).map(|(&x, &k)| m(x, to[k])));
        best = q.fold(Mode::Meet, [best, v]);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(best);
            }
            choice[i] += 1;
            if choice[i] < to.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Least behavioural metric above `D` by Kleene iteration.
pub fn behavioural_metric(
    lts: &ProcessLts,
    style: MetricStyle,
    max_iterations: usize,
    max_choices: usize,
) -> Result<MetricTable> {
    let q = &lts.quantale;
    let n = lts.num_states();
    let mut cur = vec![vec![q.bottom(); n]; n];
    let mut changed = None;
    for iterations in 1..=max_iterations {
        let next = step(lts, style, &cur, max_choices)?;
        changed = (0..n)
            .flat_map(|p| (0..n).map(move |r| (p, r)))
            .find(|&(p, r)| !q.equal(cur[p][r], next[p][r]));
        cur = next;
        if changed.is_none() {
            return Ok(MetricTable {
                style,
                values: cur,
                iterations,
            });
        }
    }
    let residual = changed
        .map(|(p, r)| format!("still changing at ({}, {})", lts.state_name(p), lts.state_name(r)))
        .unwrap_or_default();
    Err(Error::resource("max_iterations", max_iterations, residual))
}

/// Compares `M` with `↓𝔡` computed in the MLTS whose states are the values
/// of `M` (each with self-loops on every label) plus `top`.
pub fn behavioural_as_cbm(lts: &ProcessLts, table: &MetricTable) -> Result<Report> {
    let q = &lts.quantale;
    let mut values = table.values();
    if !values.contains(&q.bottom()) {
        values.insert(0, q.bottom());
    }
    let m = quantale_as_mlts(q, lts.labels(), Some(&values))?;
    let wb = Workbench::new(lts.clone(), &m, &[])?;
    let n = lts.num_states();
    let mut report = Report::new("behavioural metric as CBM")
        .with_config("quantale", q.name())
        .with_config("style", table.style)
        .with_config("universe", wb.universe().len());
    let mut mismatch = None;
    let mut top_pairs = 0;
    let mut top_as_top = 0;
    for p in 0..n {
        for r in 0..n {
            let d = wb.metric(p, r)?;
            let down = wb.mlts().down(d.term);
            let mv = table.get(p, r);
            if q.equal(mv, q.top()) {
                top_pairs += 1;
                if wb.equiv(d.term, TermId::TOP)? {
                    top_as_top += 1;
                }
            }
            if mismatch.is_none() && !q.equal(down, mv) {
                mismatch = Some(format!(
                    "({}, {}): M = {}, d = {} with down {}",
                    lts.state_name(p),
                    lts.state_name(r),
                    q.display(mv),
                    wb.render(d.term),
                    q.display(down)
                ));
            }
        }
    }
    report.push(match mismatch {
        None => Entry::new("agreement", Status::Pass).detail(format!("{} pairs", n * n)),
        Some(w) => Entry::new("agreement", Status::Fail).witness([w]),
    });
    report.push(
        Entry::new("top_pairs", Status::Info).detail(format!("{top_as_top} of {top_pairs} pairs at top have d = top")),
    );
    Ok(report)
}
