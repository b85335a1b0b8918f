//! Constructions producing MLTSs: bounded closure of a pre-MLTS, a quantale
//! viewed as an MLTS, and the embedding of an environment LTS.

use super::{is_ident_char, Mlts, SimPreorder, TermId, Universe, RESERVED};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::lts::{ProcessLts, StateId};
use crate::quantale::{Quantale, QuantaleValue};

/// A materialized closure: a transition-closed universe that is also closed,
/// up to `≃_V`, under binary `meet`, `join` and `plus`.
#[derive(Debug, Clone)]
pub struct Closure {
    pub universe: Universe,
    /// First-explored member of each `≃_V` class.
    pub representatives: Vec<TermId>,
    pub rounds: usize,
}

/// Explores combinations of class representatives breadth-first until no
/// new `≃_V` class appears.
pub fn close_pre_mlts(pre: &Mlts) -> Result<Closure> {
    let mut universe = Universe::reachable(pre, &[])?;
    let mut prev = 0usize;
    let mut rounds = 0usize;
    loop {
        let sim = SimPreorder::compute(pre, &universe);
        let reps: Vec<TermId> = sim
            .representatives()
            .iter()
            .enumerate()
            .filter(|(i, r)| i == *r)
            .map(|(i, _)| universe.term(i))
            .collect();
        if reps.len() == prev {
            return Ok(Closure {
                universe,
                representatives: reps,
                rounds,
            });
        }
        prev = reps.len();
        rounds += 1;
        let stats = |e: Error| match e {
            Error::Resource { bound, limit, detail } => Error::Resource {
                bound,
                limit,
                detail: format!("{detail} (closure round {rounds}, {prev} classes so far)"),
            },
            other => other,
        };
        let mut fresh = Vec::new();
        for (k, &a) in reps.iter().enumerate() {
            for &b in &reps[k..] {
                fresh.push(pre.meet(&[a, b]).map_err(stats)?);
                fresh.push(pre.join(&[a, b]).map_err(stats)?);
                fresh.push(pre.plus(a, b).map_err(stats)?);
            }
        }
        universe.extend(pre, &fresh).map_err(stats)?;
    }
}

/// Base-state name used for a quantale element.
pub fn quantale_state_name(q: &Quantale, v: QuantaleValue) -> String {
    format!("q_{}", q.display(v))
}

/// Every element of `values` (the carrier when `None`, or the default sample
/// of an infinite quantale) becomes a base state with a self-loop on every
/// label and `↓` the element itself. The built-in `top` plays the extra
/// top state.
pub fn quantale_as_mlts<L: AsRef<str>>(q: &Quantale, labels: &[L], values: Option<&[QuantaleValue]>) -> Result<Mlts> {
    let mut vals: Vec<QuantaleValue> = match values {
        Some(v) => v.to_vec(),
        None => q.default_sample(),
    };
    let mut uniq: Vec<QuantaleValue> = Vec::new();
    vals.retain(|v| {
        let fresh = !uniq.iter().any(|u| q.equal(*u, *v));
        if fresh {
            uniq.push(*v);
        }
        fresh
    });
    let mut m = Mlts::new(q.clone(), labels, Bounds::default());
    for v in vals {
        let t = m.add_base(&quantale_state_name(q, v), v)?;
        for l in 0..m.labels().len() {
            m.add_transition(t, l, t)?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct Embedding {
    pub mlts: Mlts,
    /// `states[e]` is the base copy of environment state `e`.
    pub states: Vec<TermId>,
}

/// Copies `env` into a boolean MLTS whose base states all have `↓ = ⊥`.
pub fn embed_environment<L: AsRef<str>>(env: &ProcessLts, labels: &[L]) -> Result<Embedding> {
    let mut all: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    for l in env.labels() {
        if !all.contains(l) {
            all.push(l.clone());
        }
    }
    let mut m = Mlts::new(Quantale::Boolean, &all, Bounds::default());
    let bot = QuantaleValue::Bool(false);
    let mut states = Vec::with_capacity(env.num_states());
    for (i, name) in env.states().iter().enumerate() {
        let usable = !RESERVED.contains(&name.as_str()) && name.chars().all(is_ident_char);
        let base = if usable { name.clone() } else { format!("env{i}") };
        states.push(m.add_base(&base, bot)?);
    }
    for (p, l, q) in env.transitions() {
        let ml = m.label(env.label_name(l))?;
        m.add_transition(states[p], ml, states[q])?;
    }
    Ok(Embedding { mlts: m, states })
}

/// Checks that `s_e -ℓ-> s_e'` exactly when `e -ℓ-> e'`.
pub fn embedding_is_faithful(env: &ProcessLts, emb: &Embedding) -> Result<bool> {
    for e in 0..env.num_states() {
        for l in 0..env.num_labels() {
            let ml = emb.mlts.label(env.label_name(l))?;
            let mut expected: Vec<TermId> = env.succ(e, l).iter().map(|&x: &StateId| emb.states[x]).collect();
            expected.sort_unstable();
            if *emb.mlts.moves(emb.states[e], ml)? != *expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
