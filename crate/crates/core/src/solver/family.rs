//! Parametrized bisimilarity `{∼_s}` and its environment-indexed variant.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lts::{LabelId, ProcessLts, StateId};
use crate::mlts::{Mlts, TermId, Universe};

/// Maps each MLTS label to the process label with the same name.
#[derive(Debug, Clone)]
pub(crate) struct LabelMap {
    pub(crate) to_lts: Vec<Option<LabelId>>,
}

impl LabelMap {
    pub(crate) fn new(lts: &ProcessLts, m: &Mlts) -> Result<Self> {
        for l in lts.labels() {
            if m.label(l).is_err() {
                return Err(Error::Contract(format!(
                    "process label `{l}` is not a label of the MLTS"
                )));
            }
        }
        Ok(LabelMap {
            to_lts: m.labels().iter().map(|l| lts.label(l).ok()).collect(),
        })
    }
}

/// A family of relations `R_s ⊆ P×P`, one per universe term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamBisimFamily {
    procs: usize,
    terms: Vec<TermId>,
    words: usize,
    bits: Vec<u64>,
    /// Triples removed by refinement.
    pub removals: usize,
}

impl ParamBisimFamily {
    fn full(procs: usize, terms: Vec<TermId>) -> Self {
        let words = (procs * procs).div_ceil(64).max(1);
        ParamBisimFamily {
            procs,
            words,
            bits: vec![0; words * terms.len()],
            terms,
            removals: 0,
        }
    }

    fn slot(&self, s: usize, p: StateId, q: StateId) -> (usize, u64) {
        let k = p * self.procs + q;
        (s * self.words + k / 64, 1u64 << (k % 64))
    }

    pub(crate) fn set(&mut self, s: usize, p: StateId, q: StateId, v: bool) {
        let (w, b) = self.slot(s, p, q);
        if v {
            self.bits[w] |= b;
        } else {
            self.bits[w] &= !b;
        }
    }

    /// `(p, q) ∈ R_s` where `s` is the universe index.
    pub fn contains(&self, s: usize, p: StateId, q: StateId) -> bool {
        let (w, b) = self.slot(s, p, q);
        self.bits[w] & b != 0
    }

    pub fn terms(&self) -> &[TermId] {
        &self.terms
    }

    pub fn num_procs(&self) -> usize {
        self.procs
    }

    pub fn pairs(&self, s: usize) -> Vec<(StateId, StateId)> {
        (0..self.procs)
            .flat_map(|p| (0..self.procs).map(move |q| (p, q)))
            .filter(|&(p, q)| self.contains(s, p, q))
            .collect()
    }

    /// Universe indices `s` with `(p, q) ∈ R_s`, in universe order.
    pub fn parameters(&self, p: StateId, q: StateId) -> Vec<usize> {
        (0..self.terms.len()).filter(|&s| self.contains(s, p, q)).collect()
    }

    /// First triple on which the two families disagree, in canonical order.
    pub fn first_difference(&self, other: &ParamBisimFamily) -> Option<(usize, StateId, StateId)> {
        if self.terms != other.terms || self.procs != other.procs {
            return Some((0, 0, 0));
        }
        for s in 0..self.terms.len() {
            for p in 0..self.procs {
                for q in 0..self.procs {
                    if self.contains(s, p, q) != other.contains(s, p, q) {
                        return Some((s, p, q));
                    }
                }
            }
        }
        None
    }
}

/// Greatest parametrized bisimulation over a transition-closed universe.
pub fn param_bisim_family(lts: &ProcessLts, m: &Mlts, universe: &Universe) -> Result<ParamBisimFamily> {
    let map = LabelMap::new(lts, m)?;
    let q = &m.quantale;
    let n = lts.num_states();
    let u = universe.len();
    let mut fam = ParamBisimFamily::full(n, universe.terms().to_vec());
    for s in 0..u {
        let down = universe.down(s);
        for p in 0..n {
            for r in 0..n {
                if q.leq_unchecked(lts.immediate(p, r), down) {
                    fam.set(s, p, r, true);
                }
            }
        }
    }
    let labels = m.labels().len();
    let mut upred = vec![vec![Vec::new(); labels]; u];
    for s in 0..u {
        for l in 0..labels {
            for &t in universe.succ(s, l) {
                upred[t][l].push(s);
            }
        }
    }
    let mut ppred = vec![vec![Vec::new(); lts.num_labels()]; n];
    for (p, l, r) in lts.transitions() {
        ppred[r][l].push(p);
    }
    let violates = |fam: &ParamBisimFamily, s: usize, p: StateId, r: StateId| {
        (0..labels).any(|l| {
            let Some(pl) = map.to_lts[l] else { return false };
            universe.succ(s, l).iter().any(|&s2| {
                lts.succ(p, pl)
                    .iter()
                    .any(|&p2| !lts.succ(r, pl).iter().any(|&r2| fam.contains(s2, p2, r2)))
                    || lts
                        .succ(r, pl)
                        .iter()
                        .any(|&r2| !lts.succ(p, pl).iter().any(|&p2| fam.contains(s2, p2, r2)))
            })
        })
    };
    let mut stack: Vec<(usize, StateId, StateId)> = Vec::new();
    for s in (0..u).rev() {
        for p in (0..n).rev() {
            for r in (0..n).rev() {
                if fam.contains(s, p, r) {
                    stack.push((s, p, r));
                }
            }
        }
    }
    while let Some((s, p, r)) = stack.pop() {
        if !fam.contains(s, p, r) || !violates(&fam, s, p, r) {
            continue;
        }
        fam.set(s, p, r, false);
        fam.removals += 1;
        for l in 0..labels {
            let Some(pl) = map.to_lts[l] else { continue };
            for &s0 in &upred[s][l] {
                for &p0 in &ppred[p][pl] {
                    for &r0 in &ppred[r][pl] {
                        if fam.contains(s0, p0, r0) {
                            stack.push((s0, p0, r0));
                        }
                    }
                }
            }
        }
    }
    Ok(fam)
}

/// `p ∼_s q`, exploring only the triples reachable from `(s, p, q)`.
pub fn param_bisim(lts: &ProcessLts, m: &Mlts, p: StateId, q: StateId, s: TermId) -> Result<bool> {
    let map = LabelMap::new(lts, m)?;
    let quant = &m.quantale;
    let limit = m.bounds().max_reachable.saturating_mul(16);
    let mut index: HashMap<(TermId, StateId, StateId), usize> = HashMap::new();
    let mut nodes: Vec<(TermId, StateId, StateId)> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    // obligations: every group needs one live member
    let mut groups: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut add = |t: (TermId, StateId, StateId),
                   nodes: &mut Vec<(TermId, StateId, StateId)>,
                   alive: &mut Vec<bool>,
                   groups: &mut Vec<Vec<Vec<usize>>>,
                   queue: &mut VecDeque<usize>|
     -> Result<usize> {
        if let Some(&k) = index.get(&t) {
            return Ok(k);
        }
        let k = nodes.len();
        if k >= limit {
            return Err(Error::resource(
                "max_reachable",
                limit,
                "triples explored by param_bisim",
            ));
        }
        index.insert(t, k);
        nodes.push(t);
        groups.push(Vec::new());
        let ok = quant.leq_unchecked(lts.immediate(t.1, t.2), m.down(t.0));
        alive.push(ok);
        if ok {
            queue.push_back(k);
        }
        Ok(k)
    };
    add((s, p, q), &mut nodes, &mut alive, &mut groups, &mut queue)?;
    while let Some(k) = queue.pop_front() {
        let (t, a, b) = nodes[k];
        let mut gs = Vec::new();
        for l in 0..m.labels().len() {
            let Some(pl) = map.to_lts[l] else { continue };
            for &t2 in m.moves(t, l)?.iter() {
                for &a2 in lts.succ(a, pl) {
                    let mut g = Vec::new();
                    for &b2 in lts.succ(b, pl) {
                        g.push(add((t2, a2, b2), &mut nodes, &mut alive, &mut groups, &mut queue)?);
                    }
                    gs.push(g);
                }
                for &b2 in lts.succ(b, pl) {
                    let mut g = Vec::new();
                    for &a2 in lts.succ(a, pl) {
                        g.push(add((t2, a2, b2), &mut nodes, &mut alive, &mut groups, &mut queue)?);
                    }
                    gs.push(g);
                }
            }
        }
        groups[k] = gs;
    }
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (k, gs) in groups.iter().enumerate() {
        for g in gs {
            for &c in g {
                rev[c].push(k);
            }
        }
    }
    let mut work: Vec<usize> = (0..nodes.len()).collect();
    while let Some(k) = work.pop() {
        if alive[k] && groups[k].iter().any(|g| !g.iter().any(|&c| alive[c])) {
            alive[k] = false;
            work.extend(rev[k].iter().copied());
        }
    }
    Ok(alive[0])
}

/// Size limits for [`brute_force_family`].
pub const ORACLE_MAX_PROCS: usize = 4;
pub const ORACLE_MAX_TERMS: usize = 4;
pub const ORACLE_MAX_LABELS: usize = 2;

enum Goal {
    Need(usize),
    OneOf(Vec<usize>),
}

struct Oracle<'a> {
    lts: &'a ProcessLts,
    m: &'a Mlts,
    u: &'a Universe,
    map: LabelMap,
    n: usize,
    known_in: HashSet<usize>,
    known_out: HashSet<usize>,
}

impl Oracle<'_> {
    fn id(&self, s: usize, p: StateId, q: StateId) -> usize {
        (s * self.n + p) * self.n + q
    }

    fn split(&self, t: usize) -> (usize, StateId, StateId) {
        (t / (self.n * self.n), (t / self.n) % self.n, t % self.n)
    }

    /// The clauses of a triple in `R`: `D` below `↓s`, and one witness per
    /// move obligation.
    fn obligations(&self, t: usize) -> Option<Vec<Vec<usize>>> {
        let (s, p, q) = self.split(t);
        if !self.m.quantale.leq_unchecked(self.lts.immediate(p, q), self.u.down(s)) {
            return None;
        }
        let mut out = Vec::new();
        for l in 0..self.m.labels().len() {
            let Some(pl) = self.map.to_lts[l] else { continue };
            for &s2 in self.u.succ(s, l) {
                for &p2 in self.lts.succ(p, pl) {
                    out.push(self.lts.succ(q, pl).iter().map(|&q2| self.id(s2, p2, q2)).collect());
                }
                for &q2 in self.lts.succ(q, pl) {
                    out.push(self.lts.succ(p, pl).iter().map(|&p2| self.id(s2, p2, q2)).collect());
                }
            }
        }
        Some(out)
    }

    /// Depth-first search for a set of triples closed under the clauses.
    fn search(&self, chosen: &mut Vec<usize>, in_set: &mut HashSet<usize>, goals: &mut Vec<Goal>) -> bool {
        let Some(goal) = goals.pop() else { return true };
        let ok = match &goal {
            Goal::Need(t) => {
                let t = *t;
                if in_set.contains(&t) || self.known_in.contains(&t) {
                    self.search(chosen, in_set, goals)
                } else if self.known_out.contains(&t) {
                    false
                } else {
                    match self.obligations(t) {
                        None => false,
                        Some(obs) => {
                            in_set.insert(t);
                            chosen.push(t);
                            let depth = goals.len();
                            goals.extend(obs.into_iter().map(Goal::OneOf));
                            if self.search(chosen, in_set, goals) {
                                true
                            } else {
                                goals.truncate(depth);
                                chosen.pop();
                                in_set.remove(&t);
                                false
                            }
                        }
                    }
                }
            }
            Goal::OneOf(cands) => {
                if cands.iter().any(|c| in_set.contains(c) || self.known_in.contains(c)) {
                    self.search(chosen, in_set, goals)
                } else {
                    let mut found = false;
                    for &c in cands {
                        if self.known_out.contains(&c) {
                            continue;
                        }
                        let depth = goals.len();
                        goals.push(Goal::Need(c));
                        if self.search(chosen, in_set, goals) {
                            found = true;
                            break;
                        }
                        goals.truncate(depth);
                    }
                    found
                }
            }
        };
        if !ok {
            goals.push(goal);
        }
        ok
    }
}

/// Independent oracle for [`param_bisim_family`]: for every triple, search
/// for a family satisfying the clauses that contains it. The union of all
/// such families is the largest one.
pub fn brute_force_family(lts: &ProcessLts, m: &Mlts, universe: &Universe) -> Result<ParamBisimFamily> {
    if lts.num_states() > ORACLE_MAX_PROCS || universe.len() > ORACLE_MAX_TERMS || m.labels().len() > ORACLE_MAX_LABELS
    {
        return Err(Error::Guard(format!(
            "oracle needs at most {ORACLE_MAX_PROCS} processes, {ORACLE_MAX_TERMS} terms and {ORACLE_MAX_LABELS} labels; got {}, {}, {}",
            lts.num_states(),
            universe.len(),
            m.labels().len()
        )));
    }
    let mut oracle = Oracle {
        lts,
        m,
        u: universe,
        map: LabelMap::new(lts, m)?,
        n: lts.num_states(),
        known_in: HashSet::new(),
        known_out: HashSet::new(),
    };
    let n = oracle.n;
    let total = universe.len() * n * n;
    for t in 0..total {
        if oracle.known_in.contains(&t) || oracle.known_out.contains(&t) {
            continue;
        }
        let mut chosen = Vec::new();
        let mut in_set = HashSet::new();
        let mut goals = vec![Goal::Need(t)];
        if oracle.search(&mut chosen, &mut in_set, &mut goals) {
            oracle.known_in.extend(chosen);
        } else {
            oracle.known_out.insert(t);
        }
    }
    let mut fam = ParamBisimFamily::full(n, universe.terms().to_vec());
    for &t in &oracle.known_in {
        let (s, p, q) = oracle.split(t);
        fam.set(s, p, q, true);
    }
    Ok(fam)
}

/// Environment parametrized bisimilarity: the largest `E`-indexed family
/// with the move clauses only (no distance clause). Indexed `[e][p][q]`.
pub fn env_param_bisim(lts: &ProcessLts, env: &ProcessLts) -> Result<Vec<Vec<Vec<bool>>>> {
    epb(lts, env, false)
}

/// As [`env_param_bisim`], additionally requiring `D(p, q) = ⊥` at every
/// related pair.
pub fn env_param_bisim_with_distance(lts: &ProcessLts, env: &ProcessLts) -> Result<Vec<Vec<Vec<bool>>>> {
    epb(lts, env, true)
}

fn epb(lts: &ProcessLts, env: &ProcessLts, with_distance: bool) -> Result<Vec<Vec<Vec<bool>>>> {
    let n = lts.num_states();
    let e = env.num_states();
    let map: Vec<Option<LabelId>> = env.labels().iter().map(|l| lts.label(l).ok()).collect();
    let bot = lts.quantale.bottom();
    let row: Vec<Vec<bool>> = (0..n)
        .map(|p| (0..n).map(|q| !with_distance || lts.immediate(p, q) == bot).collect())
        .collect();
    let mut rel = vec![row; e];
    loop {
        let mut changed = false;
        for x in 0..e {
            for p in 0..n {
                for q in 0..n {
                    if !rel[x][p][q] {
                        continue;
                    }
                    let bad = (0..env.num_labels()).any(|el| {
                        let Some(pl) = map[el] else { return false };
                        env.succ(x, el).iter().any(|&x2| {
                            lts.succ(p, pl)
                                .iter()
                                .any(|&p2| !lts.succ(q, pl).iter().any(|&q2| rel[x2][p2][q2]))
                                || lts
                                    .succ(q, pl)
                                    .iter()
                                    .any(|&q2| !lts.succ(p, pl).iter().any(|&p2| rel[x2][p2][q2]))
                        })
                    });
                    if bad {
                        rel[x][p][q] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(rel);
        }
    }
}
