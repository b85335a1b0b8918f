//! Operational semantics of process terms and the reachable term LTS.

use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};

use super::term::ProcessTerm;
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::lts::{ImmediatePolicy, LabelId, ProcessLts, StateId};

/// A process LTS whose states are normalized process terms.
#[derive(Debug, Clone)]
pub struct TermLts {
    pub lts: ProcessLts,
    terms: Vec<ProcessTerm>,
    index: HashMap<ProcessTerm, StateId>,
    base: ProcessLts,
}

impl TermLts {
    pub fn term(&self, p: StateId) -> &ProcessTerm {
        &self.terms[p]
    }

    pub fn terms(&self) -> &[ProcessTerm] {
        &self.terms
    }

    /// State of a term, after normalization.
    pub fn state(&self, t: &ProcessTerm) -> Result<StateId> {
        let sem = Semantics::new(&self.base, self.lts.labels().to_vec());
        let n = sem.normalize(t)?;
        self.index
            .get(&n)
            .copied()
            .ok_or_else(|| Error::lookup("process term", n.to_string()))
    }

    pub fn state_of(&self, text: &str) -> Result<StateId> {
        self.state(&ProcessTerm::parse(text)?)
    }
}

pub(crate) struct Semantics<'a> {
    base: &'a ProcessLts,
    labels: Vec<String>,
    base_label: Vec<Option<LabelId>>,
    terminated: RefCell<HashMap<ProcessTerm, bool>>,
}

impl<'a> Semantics<'a> {
    pub(crate) fn new(base: &'a ProcessLts, labels: Vec<String>) -> Self {
        let base_label = labels.iter().map(|l| base.label(l).ok()).collect();
        Semantics {
            base,
            labels,
            base_label,
            terminated: RefCell::new(HashMap::new()),
        }
    }

    fn atom(&self, name: &str) -> Result<StateId> {
        self.base.state(name)
    }

    fn is_terminated(&self, t: &ProcessTerm) -> Result<bool> {
        if let Some(&b) = self.terminated.borrow().get(t) {
            return Ok(b);
        }
        let mut b = true;
        for l in 0..self.labels.len() {
            if !self.moves(t, l, false)?.is_empty() {
                b = false;
                break;
            }
        }
        self.terminated.borrow_mut().insert(t.clone(), b);
        Ok(b)
    }

    /// Flattens parallel stacks, drops terminated components and sorts
    /// the rest.
    pub(crate) fn normalize(&self, t: &ProcessTerm) -> Result<ProcessTerm> {
        Ok(match t {
            ProcessTerm::Atom(n) => {
                self.atom(n)?;
                t.clone()
            }
            ProcessTerm::Nil => ProcessTerm::Nil,
            ProcessTerm::Prefix(l, p) => ProcessTerm::prefix(l, self.normalize(p)?),
            ProcessTerm::Restrict(l, p) => ProcessTerm::restrict(l, self.normalize(p)?),
            ProcessTerm::Sum(a, b) => ProcessTerm::sum(self.normalize(a)?, self.normalize(b)?),
            ProcessTerm::Bang(p) => ProcessTerm::bang(self.normalize(p)?),
            ProcessTerm::Par(cs) => {
                let mut flat = Vec::new();
                for c in cs {
                    match self.normalize(c)? {
                        ProcessTerm::Par(inner) => flat.extend(inner),
                        n => flat.push(n),
                    }
                }
                let mut kept = Vec::new();
                for c in flat {
                    if !self.is_terminated(&c)? {
                        kept.push(c);
                    }
                }
                kept.sort();
                match kept.len() {
                    0 => ProcessTerm::Nil,
                    1 => kept.pop().unwrap(),
                    _ => ProcessTerm::Par(kept),
                }
            }
        })
    }

    /// The `l`-successors of a normalized term, normalized, in generation
    /// order. With `spawn` off, replication keeps `!p` instead of moving to
    /// `p' | !p`.
    pub(crate) fn moves(&self, t: &ProcessTerm, l: usize, spawn: bool) -> Result<Vec<ProcessTerm>> {
        let label = &self.labels[l];
        Ok(match t {
            ProcessTerm::Atom(n) => {
                let p = self.atom(n)?;
                match self.base_label[l] {
                    Some(bl) => self
                        .base
                        .succ(p, bl)
                        .iter()
                        .map(|&q| ProcessTerm::Atom(self.base.state_name(q).to_string()))
                        .collect(),
                    None => Vec::new(),
                }
            }
            ProcessTerm::Nil => Vec::new(),
            ProcessTerm::Prefix(m, p) => {
                if m == label {
                    vec![(**p).clone()]
                } else {
                    Vec::new()
                }
            }
            ProcessTerm::Restrict(m, p) => {
                if m == label {
                    Vec::new()
                } else {
                    self.moves(p, l, spawn)?
                        .into_iter()
                        .map(|q| ProcessTerm::restrict(m, q))
                        .collect()
                }
            }
            ProcessTerm::Sum(a, b) => {
                let mut v = self.moves(a, l, spawn)?;
                v.extend(self.moves(b, l, spawn)?);
                v
            }
            ProcessTerm::Bang(p) => {
                let mut v = Vec::new();
                for q in self.moves(p, l, spawn)? {
                    v.push(if spawn {
                        self.normalize(&ProcessTerm::Par(vec![q, t.clone()]))?
                    } else {
                        t.clone()
                    });
                }
                v
            }
            ProcessTerm::Par(cs) => {
                let succ: Vec<Vec<ProcessTerm>> = cs.iter().map(|c| self.moves(c, l, spawn)).collect::<Result<_>>()?;
                let mut v = Vec::new();
                // every non-empty set of components firing together
                for mask in 1u64..(1u64 << cs.len().min(63)) {
                    let chosen: Vec<usize> = (0..cs.len()).filter(|i| mask >> i & 1 == 1).collect();
                    if chosen.iter().any(|&i| succ[i].is_empty()) {
                        continue;
                    }
                    let mut pick = vec![0usize; chosen.len()];
                    loop {
                        let mut comps = cs.clone();
                        for (k, &i) in chosen.iter().enumerate() {
                            comps[i] = succ[i][pick[k]].clone();
                        }
                        v.push(self.normalize(&ProcessTerm::Par(comps))?);
                        let mut k = 0;
                        while k < pick.len() {
                            pick[k] += 1;
                            if pick[k] < succ[chosen[k]].len() {
                                break;
                            }
                            pick[k] = 0;
                            k += 1;
                        }
                        if k == pick.len() {
                            break;
                        }
                    }
                }
                v
            }
        })
    }
}

/// Spawned components living beside a replication, summed over the term.
pub fn unfold_count(t: &ProcessTerm) -> usize {
    match t {
        ProcessTerm::Atom(_) | ProcessTerm::Nil => 0,
        ProcessTerm::Prefix(_, p) | ProcessTerm::Restrict(_, p) | ProcessTerm::Bang(p) => unfold_count(p),
        ProcessTerm::Sum(a, b) => unfold_count(a) + unfold_count(b),
        ProcessTerm::Par(cs) => {
            let bangs = cs.iter().filter(|c| matches!(c, ProcessTerm::Bang(_))).count();
            let own = if bangs > 0 { cs.len() - bangs } else { 0 };
            own + cs.iter().map(unfold_count).sum::<usize>()
        }
    }
}

/// Explores the terms reachable from `roots`. A replication step that
/// would exceed `bounds.unfold` spawned components keeps `!p` in place of
/// `p' | !p`; the source state is then marked saturated.
pub fn build_term_lts(base: &ProcessLts, roots: &[ProcessTerm], bounds: &Bounds) -> Result<TermLts> {
    let mut labels: Vec<String> = base.labels().to_vec();
    for r in roots {
        r.labels(&mut labels);
    }
    let sem = Semantics::new(base, labels.clone());
    let mut terms: Vec<ProcessTerm> = Vec::new();
    let mut index: HashMap<ProcessTerm, StateId> = HashMap::new();
    let mut edges: Vec<(StateId, LabelId, StateId)> = Vec::new();
    let mut saturated: Vec<StateId> = Vec::new();
    let mut queue = VecDeque::new();
    for r in roots {
        let n = sem.normalize(r)?;
        if !index.contains_key(&n) {
            index.insert(n.clone(), terms.len());
            queue.push_back((terms.len(), r.to_string()));
            terms.push(n);
        }
    }
    while let Some((s, root)) = queue.pop_front() {
        let t = terms[s].clone();
        for l in 0..labels.len() {
            let raw = sem.moves(&t, l, true)?;
            let mut fallback: Option<Vec<ProcessTerm>> = None;
            for (i, mut target) in raw.into_iter().enumerate() {
                if unfold_count(&target) > bounds.unfold {
                    if fallback.is_none() {
                        fallback = Some(sem.moves(&t, l, false)?);
                    }
                    target = fallback.as_ref().unwrap()[i].clone();
                    if saturated.last() != Some(&s) {
                        saturated.push(s);
                    }
                }
                let j = match index.get(&target) {
                    Some(&j) => j,
                    None => {
                        let j = terms.len();
                        if j >= bounds.max_reachable {
                            return Err(Error::resource(
                                "max_reachable",
                                bounds.max_reachable,
                                format!("terms reachable from `{root}`"),
                            ));
                        }
                        index.insert(target.clone(), j);
                        terms.push(target);
                        queue.push_back((j, root.clone()));
                        j
                    }
                };
                edges.push((s, l, j));
            }
        }
    }
    let names: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    let mut lts = ProcessLts::new(base.quantale.clone(), &names, &labels)?;
    for (s, l, j) in edges {
        lts.add_transition(s, l, j);
    }
    for s in saturated {
        lts.mark_saturated(s);
    }
    lts.set_policy(base.policy());
    if base.policy() == ImmediatePolicy::ExplicitTable {
        lts.set_fallback(base.fallback());
        for ((p, q), v) in base.table_entries() {
            let a = index.get(&ProcessTerm::Atom(base.state_name(p).to_string()));
            let b = index.get(&ProcessTerm::Atom(base.state_name(q).to_string()));
            if let (Some(&a), Some(&b)) = (a, b) {
                lts.set_distance_one_way(a, b, v)?;
            }
        }
    }
    Ok(TermLts {
        lts,
        terms,
        index,
        base: base.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lts::load_lts_documents;

    fn base() -> ProcessLts {
        load_lts_documents(
            &[
                ("P.lts", fixtures::P_LTS),
                ("Q.lts", fixtures::Q_LTS),
                ("R.lts", fixtures::R_LTS),
            ],
            None,
        )
        .unwrap()
    }

    fn succ(t: &TermLts, from: &str, l: &str) -> Vec<String> {
        let s = t.state_of(from).unwrap();
        let l = t.lts.label(l).unwrap();
        let mut v: Vec<String> = t
            .lts
            .succ(s, l)
            .iter()
            .map(|&x| t.lts.state_name(x).to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn parallel_moves() {
        let b = base();
        let t = build_term_lts(&b, &[ProcessTerm::parse("p0 | r0").unwrap()], &Bounds::default()).unwrap();
        // p1 and r1 are terminated and dropped: p1|r0 = r0, p0|r1 = p0, p1|r1 = 0
        assert_eq!(succ(&t, "p0 | r0", "a"), vec!["0", "p0", "r0"]);
        assert_eq!(succ(&t, "p0 | r0", "b"), vec!["r0"]);
    }

    #[test]
    fn restriction_filters() {
        let t = build_term_lts(&base(), &[ProcessTerm::parse("nu a p0").unwrap()], &Bounds::default()).unwrap();
        assert!(succ(&t, "nu a p0", "a").is_empty());
        assert_eq!(succ(&t, "nu a p0", "b"), vec!["nu a p2"]);
    }

    #[test]
    fn replication_with_one_unfold() {
        let b = Bounds::default().apply_overrides("K=1").unwrap();
        let t = build_term_lts(&base(), &[ProcessTerm::parse("!p0").unwrap()], &b).unwrap();
        assert_eq!(t.lts.num_states(), 1);
        assert_eq!(succ(&t, "!p0", "a"), vec!["!p0"]);
        assert_eq!(succ(&t, "!p0", "b"), vec!["!p0"]);
        assert!(!t.lts.is_saturated(0));
    }

    #[test]
    fn replication_saturates_at_k() {
        let b = Bounds::default().apply_overrides("K=2").unwrap();
        let t = build_term_lts(&base(), &[ProcessTerm::parse("!q0").unwrap()], &b).unwrap();
        assert!(t.lts.is_bounded());
        assert!(t.terms().iter().all(|x| unfold_count(x) <= 2));
        assert!(t.state_of("q1 | q1 | !q0").is_ok());
    }

    #[test]
    fn unknown_atom() {
        assert!(matches!(
            build_term_lts(&base(), &[ProcessTerm::parse("zz").unwrap()], &Bounds::default()),
            Err(Error::Lookup { .. })
        ));
    }

    #[test]
    fn prefix_labels_are_added() {
        let t = build_term_lts(&base(), &[ProcessTerm::parse("c.p0").unwrap()], &Bounds::default()).unwrap();
        assert_eq!(succ(&t, "c.p0", "c"), vec!["p0"]);
    }
}
