//! The `≼_V` preorder: largest `≼_Q`-preserving reverse simulation.
//!
//! Two independent routes: [`SimPreorder`] refines a full matrix over a
//! transition-closed [`Universe`], and [`Mlts::leq`] explores only the pairs
//! reachable from the queried one.

use std::collections::{HashMap, VecDeque};

use super::{lock, Mlts, TermId};
use crate::error::{Error, Result};
use crate::quantale::QuantaleValue;

/// A finite, transition-closed set of terms in exploration order.
#[derive(Debug, Clone)]
pub struct Universe {
    terms: Vec<TermId>,
    index: HashMap<TermId, usize>,
    /// `succ[i][l]`, indices into `terms`.
    succ: Vec<Vec<Vec<usize>>>,
    down: Vec<QuantaleValue>,
}

impl Universe {
    /// `bot`, `top`, every base state and `roots`, closed under moves
    /// breadth-first.
    pub fn reachable(m: &Mlts, roots: &[TermId]) -> Result<Self> {
        let mut u = Universe {
            terms: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            down: Vec::new(),
        };
        let mut seeds = vec![TermId::BOT, TermId::TOP];
        seeds.extend(m.base_terms());
        seeds.extend_from_slice(roots);
        u.extend(m, &seeds)?;
        Ok(u)
    }

    /// Uses exactly `terms`; fails if they are not closed under moves.
    pub fn from_terms(m: &Mlts, terms: &[TermId]) -> Result<Self> {
        let mut u = Universe {
            terms: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            down: Vec::new(),
        };
        for &t in terms {
            u.insert(m, t);
        }
        for i in 0..u.terms.len() {
            let t = u.terms[i];
            let mut row = Vec::with_capacity(m.labels().len());
            for l in 0..m.labels().len() {
                let mut targets = Vec::new();
                for s in m.moves(t, l)?.iter() {
                    let j = *u.index.get(s).ok_or_else(|| {
                        Error::Contract(format!(
                            "universe is not closed: {} -{}-> {}",
                            m.render(t),
                            m.labels()[l],
                            m.render(*s)
                        ))
                    })?;
                    targets.push(j);
                }
                row.push(targets);
            }
            u.succ[i] = row;
        }
        Ok(u)
    }

    fn insert(&mut self, m: &Mlts, t: TermId) -> (usize, bool) {
        if let Some(&i) = self.index.get(&t) {
            return (i, false);
        }
        let i = self.terms.len();
        self.terms.push(t);
        self.index.insert(t, i);
        self.succ.push(Vec::new());
        self.down.push(m.down(t));
        (i, true)
    }

    /// Adds `roots` and everything reachable from them.
    pub fn extend(&mut self, m: &Mlts, roots: &[TermId]) -> Result<()> {
        let limit = m.bounds().max_reachable;
        let mut queue = VecDeque::new();
        for &r in roots {
            let (i, fresh) = self.insert(m, r);
            if fresh {
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let t = self.terms[i];
            let mut row = Vec::with_capacity(m.labels().len());
            for l in 0..m.labels().len() {
                let mut targets = Vec::new();
                for &s in m.moves(t, l)?.iter() {
                    let (j, fresh) = self.insert(m, s);
                    if fresh {
                        if self.terms.len() > limit {
                            return Err(Error::resource(
                                "max_reachable",
                                limit,
                                format!("{} terms explored, {} still queued", self.terms.len(), queue.len()),
                            ));
                        }
                        queue.push_back(j);
                    }
                    targets.push(j);
                }
                row.push(targets);
            }
            self.succ[i] = row;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[TermId] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> TermId {
        self.terms[i]
    }

    pub fn index_of(&self, t: TermId) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn contains(&self, t: TermId) -> bool {
        self.index.contains_key(&t)
    }

    pub fn succ(&self, i: usize, l: usize) -> &[usize] {
        &self.succ[i][l]
    }

    pub fn down(&self, i: usize) -> QuantaleValue {
        self.down[i]
    }

    pub fn num_labels(&self) -> usize {
        self.succ.first().map_or(0, Vec::len)
    }
}

/// `≼_V` restricted to a universe, as a bit matrix.
#[derive(Debug, Clone)]
pub struct SimPreorder {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    /// Pairs removed during refinement (after the `↓` filter).
    pub refinements: usize,
}

impl SimPreorder {
    pub fn compute(m: &Mlts, u: &Universe) -> Self {
        let n = u.len();
        let words = n.div_ceil(64).max(1);
        let mut rel = SimPreorder {
            n,
            words,
            rows: vec![0; n * words],
            refinements: 0,
        };
        let q = &m.quantale;
        for i in 0..n {
            for j in 0..n {
                if q.leq_unchecked(u.down(i), u.down(j)) {
                    rel.set(i, j, true);
                }
            }
        }
        let labels = u.num_labels();
        let mut pred = vec![vec![Vec::new(); labels]; n];
        for i in 0..n {
            for l in 0..labels {
                for &k in u.succ(i, l) {
                    pred[k][l].push(i);
                }
            }
        }
        let violates = |rel: &SimPreorder, i: usize, j: usize| {
            (0..labels).any(|l| {
                u.succ(j, l)
                    .iter()
                    .any(|&j2| !u.succ(i, l).iter().any(|&i2| rel.leq(i2, j2)))
            })
        };
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rel.leq(i, j) {
                    stack.push((i, j));
                }
            }
        }
        while let Some((i, j)) = stack.pop() {
            if !rel.leq(i, j) || !violates(&rel, i, j) {
                continue;
            }
            rel.set(i, j, false);
            rel.refinements += 1;
            for l in 0..labels {
                for &i0 in &pred[i][l] {
                    for &j0 in &pred[j][l] {
                        if rel.leq(i0, j0) {
                            stack.push((i0, j0));
                        }
                    }
                }
            }
        }
        rel
    }

    fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.rows[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `term i ≼ term j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    /// For each index, the first index of its `≃` class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.n).collect();
        for i in 0..self.n {
            if let Some(k) = (0..i).find(|&k| self.equiv(k, i)) {
                rep[i] = rep[k];
            }
        }
        rep
    }

    pub fn num_classes(&self) -> usize {
        self.representatives()
            .iter()
            .enumerate()
            .filter(|(i, r)| i == *r)
            .count()
    }

    pub fn is_partial_order(&self) -> bool {
        self.num_classes() == self.n
    }

    /// Index of the `≼`-least member of `xs`, if there is one.
    pub fn minimum(&self, xs: &[usize]) -> Option<usize> {
        xs.iter().copied().find(|&x| xs.iter().all(|&y| self.leq(x, y)))
    }
}

enum PairState {
    Undecided,
    Fixed(bool),
}

impl Mlts {
    /// `a ≼_V b`, computed over the pairs reachable from `(a, b)`.
    ///
    /// Every explored pair's verdict is cached; the pair graph from any pair
    /// is closed, so the restricted fixpoint agrees with the global one.
    pub fn leq(&self, a: TermId, b: TermId) -> Result<bool> {
        if let Some(&v) = lock(&self.leq_cache).get(&(a, b)) {
            return Ok(v);
        }
        let limit = self.bounds().max_reachable.saturating_mul(4);
        let q = &self.quantale;
        let mut index: HashMap<(TermId, TermId), usize> = HashMap::new();
        let mut pairs: Vec<(TermId, TermId)> = Vec::new();
        let mut state: Vec<PairState> = Vec::new();
        let mut groups: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut queue = VecDeque::new();
        let cache = lock(&self.leq_cache).clone();
        let mut add = |p: (TermId, TermId),
                       pairs: &mut Vec<(TermId, TermId)>,
                       state: &mut Vec<PairState>,
                       groups: &mut Vec<Vec<Vec<usize>>>,
                       queue: &mut VecDeque<usize>|
         -> Result<usize> {
            if let Some(&k) = index.get(&p) {
                return Ok(k);
            }
            let k = pairs.len();
            if k >= limit {
                return Err(Error::resource(
                    "max_reachable",
                    limit,
                    "pair exploration for the order",
                ));
            }
            index.insert(p, k);
            pairs.push(p);
            groups.push(Vec::new());
            let s = match cache.get(&p) {
                Some(&v) => PairState::Fixed(v),
                None if !q.leq_unchecked(self.down(p.0), self.down(p.1)) => PairState::Fixed(false),
                None => {
                    queue.push_back(k);
                    PairState::Undecided
                }
            };
            state.push(s);
            Ok(k)
        };
        add((a, b), &mut pairs, &mut state, &mut groups, &mut queue)?;
        while let Some(k) = queue.pop_front() {
            let (x, y) = pairs[k];
            let mut gs = Vec::new();
            for l in 0..self.labels().len() {
                let xs = self.moves(x, l)?;
                for &y2 in self.moves(y, l)?.iter() {
                    let mut g = Vec::with_capacity(xs.len());
                    for &x2 in xs.iter() {
                        g.push(add((x2, y2), &mut pairs, &mut state, &mut groups, &mut queue)?);
                    }
                    gs.push(g);
                }
            }
            groups[k] = gs;
        }
        // greatest fixpoint: undecided pairs start true
        let n = pairs.len();
        let mut val: Vec<bool> = state
            .iter()
            .map(|s| match s {
                PairState::Fixed(v) => *v,
                PairState::Undecided => true,
            })
            .collect();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, gs) in groups.iter().enumerate() {
            for g in gs {
                for &c in g {
                    rev[c].push(k);
                }
            }
        }
        let mut work: Vec<usize> = (0..n).filter(|&k| matches!(state[k], PairState::Undecided)).collect();
        while let Some(k) = work.pop() {
            if !val[k] || matches!(state[k], PairState::Fixed(_)) {
                continue;
            }
            if groups[k].iter().any(|g| !g.iter().any(|&c| val[c])) {
                val[k] = false;
                work.extend(rev[k].iter().copied());
            }
        }
        let mut cache = lock(&self.leq_cache);
        for (k, p) in pairs.iter().enumerate() {
            cache.insert(*p, val[k]);
        }
        Ok(val[0])
    }

    /// `a ≃_V b`.
    pub fn equiv(&self, a: TermId, b: TermId) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mlts::load_mlts_documents;

    fn v0() -> Mlts {
        load_mlts_documents(
            &[("S0", fixtures::S0_MLTS), ("Spp", fixtures::SPP_MLTS)],
            None,
            Default::default(),
        )
        .unwrap()
    }

    #[test]
    fn extremal_elements() {
        let m = v0();
        let u = Universe::reachable(&m, &[]).unwrap();
        let sim = SimPreorder::compute(&m, &u);
        let (bot, top) = (u.index_of(TermId::BOT).unwrap(), u.index_of(TermId::TOP).unwrap());
        for i in 0..u.len() {
            assert!(sim.leq(bot, i));
            assert!(sim.leq(i, top));
            assert!(m.leq(TermId::BOT, u.term(i)).unwrap());
            assert!(m.leq(u.term(i), TermId::TOP).unwrap());
        }
    }

    #[test]
    fn s0_below_spp0() {
        let m = v0();
        let (s0, spp) = (m.base("s0").unwrap(), m.base("s''0").unwrap());
        assert!(m.leq(s0, spp).unwrap());
        assert!(!m.leq(spp, s0).unwrap());
    }

    #[test]
    fn routes_agree() {
        let m = v0();
        let s0 = m.base("s0").unwrap();
        let s1 = m.base("s1").unwrap();
        let extra = [
            m.meet(&[s0, s1]).unwrap(),
            m.join(&[s0, s1]).unwrap(),
            m.plus(s0, s1).unwrap(),
            m.meet(&[s0, TermId::BOT]).unwrap(),
        ];
        let u = Universe::reachable(&m, &extra).unwrap();
        let sim = SimPreorder::compute(&m, &u);
        let fresh = v0();
        for i in 0..u.len() {
            for j in 0..u.len() {
                let (a, b) = (
                    fresh.parse_term(&m.render(u.term(i))).unwrap(),
                    fresh.parse_term(&m.render(u.term(j))).unwrap(),
                );
                assert_eq!(
                    sim.leq(i, j),
                    fresh.leq(a, b).unwrap(),
                    "{} vs {}",
                    m.render(u.term(i)),
                    m.render(u.term(j))
                );
            }
        }
    }

    #[test]
    fn open_universe_is_a_contract_error() {
        let m = v0();
        let s0 = m.base("s0").unwrap();
        assert!(matches!(Universe::from_terms(&m, &[s0]), Err(Error::Contract(_))));
    }
}
