//! Hash-consed symbolic MLTS terms.
//!
//! Constructors normalize eagerly and every normalization step preserves
//! both the derived transitions (up to bisimilarity) and `↓`:
//!
//! - `meet`: flatten nested meets, drop `top`, dedupe; `meet{}` is `top`,
//!   `meet{s}` is `s`.
//! - `join`: flatten nested joins, drop `bot`; any `top` member makes the
//!   join `top`; `join{}` is `bot`, `join{s}` is `s`.
//! - `plus`: `bot` is the unit, `top` absorbs (it has no moves and `⊤ ⊕ e = ⊤`
//!   by monotonicity of `⊕`), arguments sorted.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermId(pub(crate) u32);

impl TermId {
    pub const BOT: TermId = TermId(0);
    pub const TOP: TermId = TermId(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One normalized term node; children are already interned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Bot,
    Top,
    /// Index of a base state.
    Base(u32),
    /// Sorted, deduplicated, at least two members.
    Meet(Vec<TermId>),
    Join(Vec<TermId>),
    /// Sorted pair.
    Plus(TermId, TermId),
}

#[derive(Debug, Clone)]
pub(crate) struct Store {
    nodes: Vec<Term>,
    depth: Vec<u32>,
    index: HashMap<Term, TermId>,
}

impl Store {
    pub(crate) fn new() -> Self {
        let mut s = Store {
            nodes: Vec::new(),
            depth: Vec::new(),
            index: HashMap::new(),
        };
        s.intern_raw(Term::Bot, 0);
        s.intern_raw(Term::Top, 0);
        s
    }

    fn intern_raw(&mut self, t: Term, depth: u32) -> TermId {
        if let Some(&id) = self.index.get(&t) {
            return id;
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(t.clone());
        self.depth.push(depth);
        self.index.insert(t, id);
        id
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn node(&self, t: TermId) -> &Term {
        &self.nodes[t.index()]
    }

    pub(crate) fn depth(&self, t: TermId) -> u32 {
        self.depth[t.index()]
    }

    pub(crate) fn base(&mut self, i: u32) -> TermId {
        self.intern_raw(Term::Base(i), 0)
    }

    fn set_op(&mut self, join: bool, args: &[TermId], max_set: usize, max_depth: usize) -> Result<TermId> {
        let (unit, absorbing) = if join {
            (TermId::BOT, Some(TermId::TOP))
        } else {
            (TermId::TOP, None)
        };
        let mut flat: Vec<TermId> = Vec::with_capacity(args.len());
        for &a in args {
            match self.node(a) {
                Term::Join(xs) if join => flat.extend(xs.iter().copied()),
                Term::Meet(xs) if !join => flat.extend(xs.iter().copied()),
                _ => flat.push(a),
            }
        }
        flat.retain(|&x| x != unit);
        if let Some(z) = absorbing.filter(|z| flat.contains(z)) {
            return Ok(z);
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => return Ok(unit),
            1 => return Ok(flat[0]),
            n if n > max_set => {
                return Err(Error::resource(
                    "max_set_size",
                    max_set,
                    format!("{} with {n} members", if join { "join" } else { "meet" }),
                ))
            }
            _ => {}
        }
        let depth = 1 + flat.iter().map(|&x| self.depth(x)).max().unwrap_or(0);
        if depth as usize > max_depth {
            return Err(Error::resource(
                "max_depth",
                max_depth,
                format!("term of depth {depth}"),
            ));
        }
        Ok(self.intern_raw(if join { Term::Join(flat) } else { Term::Meet(flat) }, depth))
    }

    pub(crate) fn meet(&mut self, args: &[TermId], max_set: usize, max_depth: usize) -> Result<TermId> {
        self.set_op(false, args, max_set, max_depth)
    }

    pub(crate) fn join(&mut self, args: &[TermId], max_set: usize, max_depth: usize) -> Result<TermId> {
        self.set_op(true, args, max_set, max_depth)
    }

    pub(crate) fn plus(&mut self, a: TermId, b: TermId, max_depth: usize) -> Result<TermId> {
        if a == TermId::BOT {
            return Ok(b);
        }
        if b == TermId::BOT {
            return Ok(a);
        }
        if a == TermId::TOP || b == TermId::TOP {
            return Ok(TermId::TOP);
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let depth = 1 + self.depth(a).max(self.depth(b));
        if depth as usize > max_depth {
            return Err(Error::resource(
                "max_depth",
                max_depth,
                format!("term of depth {depth}"),
            ));
        }
        Ok(self.intern_raw(Term::Plus(a, b), depth))
    }
}
