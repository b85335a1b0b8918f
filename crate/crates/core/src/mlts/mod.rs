//! Metric LTSs: symbolic terms over a pre-metric LTS of base states, with
//! the derived transition semantics of the `bot`, `top`, `meet`, `join` and
//! `plus` constructors.

mod build;
mod laws;
mod order;
mod parse;
pub mod term;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::lts::LabelId;
use crate::quantale::{Mode, Quantale, QuantaleValue};

pub use build::{close_pre_mlts, embed_environment, embedding_is_faithful, quantale_as_mlts, Closure, Embedding};
pub use laws::validate_mlts;
pub use order::{SimPreorder, Universe};
pub use parse::{load_mlts, load_mlts_documents};
pub use term::{Term, TermId};

use term::Store;

const RESERVED: [&str; 5] = ["bot", "top", "meet", "join", "plus"];

#[derive(Debug, Clone)]
pub struct BaseState {
    pub name: String,
    pub down: QuantaleValue,
    /// Targets per label, sorted.
    trans: Vec<Vec<TermId>>,
}

type MoveCache = HashMap<(TermId, LabelId), Arc<[TermId]>>;

/// A metric LTS over `quantale`.
///
/// Terms are interned in an internal store; all queries take `&self` and
/// may be issued from several threads.
#[derive(Debug)]
pub struct Mlts {
    pub quantale: Quantale,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    bases: Vec<BaseState>,
    base_index: HashMap<String, u32>,
    bounds: Bounds,
    designated_top: TermId,
    store: Mutex<Store>,
    moves: Mutex<MoveCache>,
    leq_cache: Mutex<HashMap<(TermId, TermId), bool>>,
}

impl Clone for Mlts {
    fn clone(&self) -> Self {
        Mlts {
            quantale: self.quantale.clone(),
            labels: self.labels.clone(),
            label_index: self.label_index.clone(),
            bases: self.bases.clone(),
            base_index: self.base_index.clone(),
            bounds: self.bounds,
            designated_top: self.designated_top,
            store: Mutex::new(self.store().clone()),
            moves: Mutex::new(lock(&self.moves).clone()),
            leq_cache: Mutex::new(lock(&self.leq_cache).clone()),
        }
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Mlts {
    pub fn new<L: AsRef<str>>(quantale: Quantale, labels: &[L], bounds: Bounds) -> Self {
        let mut m = Mlts {
            quantale,
            labels: Vec::new(),
            label_index: HashMap::new(),
            bases: Vec::new(),
            base_index: HashMap::new(),
            bounds,
            designated_top: TermId::TOP,
            store: Mutex::new(Store::new()),
            moves: Mutex::new(HashMap::new()),
            leq_cache: Mutex::new(HashMap::new()),
        };
        for l in labels {
            m.add_label(l.as_ref());
        }
        m
    }

    fn store(&self) -> MutexGuard<'_, Store> {
        lock(&self.store)
    }

    fn invalidate(&mut self) {
        self.moves.get_mut().unwrap_or_else(|e| e.into_inner()).clear();
        self.leq_cache.get_mut().unwrap_or_else(|e| e.into_inner()).clear();
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn set_bounds(&mut self, bounds: Bounds) {
        self.bounds = bounds;
        self.invalidate();
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Result<LabelId> {
        self.label_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::lookup("label", name))
    }

    /// Adds a label if absent. Base states have no moves on a new label.
    pub fn add_label(&mut self, name: &str) -> LabelId {
        if let Some(&l) = self.label_index.get(name) {
            return l;
        }
        let l = self.labels.len();
        self.labels.push(name.to_string());
        self.label_index.insert(name.to_string(), l);
        for b in &mut self.bases {
            b.trans.push(Vec::new());
        }
        self.invalidate();
        l
    }

    pub fn add_base(&mut self, name: &str, down: QuantaleValue) -> Result<TermId> {
        if RESERVED.contains(&name) || name.is_empty() || !name.chars().all(is_ident_char) {
            return Err(Error::Validation(format!("`{name}` cannot name a base state")));
        }
        self.add_base_unchecked(name, down)
    }

    /// Like [`Mlts::add_base`] but accepts names the term parser cannot
    /// produce, so generated states never clash with user ones.
    pub(crate) fn add_base_unchecked(&mut self, name: &str, down: QuantaleValue) -> Result<TermId> {
        if self.base_index.contains_key(name) {
            return Err(Error::Validation(format!("base state `{name}` declared twice")));
        }
        self.quantale.check(down)?;
        let i = self.bases.len() as u32;
        self.bases.push(BaseState {
            name: name.to_string(),
            down,
            trans: vec![Vec::new(); self.labels.len()],
        });
        self.base_index.insert(name.to_string(), i);
        let t = self.store().base(i);
        self.invalidate();
        Ok(t)
    }

    fn base_slot(&self, t: TermId) -> Result<usize> {
        match self.node(t) {
            Term::Base(i) => Ok(i as usize),
            _ => Err(Error::Contract(format!("{} is not a base state", self.render(t)))),
        }
    }

    pub fn add_transition(&mut self, base: TermId, l: LabelId, target: TermId) -> Result<()> {
        let i = self.base_slot(base)?;
        let row = &mut self.bases[i].trans[l];
        if let Err(pos) = row.binary_search(&target) {
            row.insert(pos, target);
        }
        self.invalidate();
        Ok(())
    }

    pub fn set_transitions(&mut self, base: TermId, l: LabelId, mut targets: Vec<TermId>) -> Result<()> {
        let i = self.base_slot(base)?;
        targets.sort_unstable();
        targets.dedup();
        self.bases[i].trans[l] = targets;
        self.invalidate();
        Ok(())
    }

    pub fn bases(&self) -> &[BaseState] {
        &self.bases
    }

    pub fn base_terms(&self) -> Vec<TermId> {
        let mut store = self.store();
        (0..self.bases.len() as u32).map(|i| store.base(i)).collect()
    }

    pub fn base(&self, name: &str) -> Result<TermId> {
        let i = *self
            .base_index
            .get(name)
            .ok_or_else(|| Error::lookup("base state", name))?;
        Ok(self.store().base(i))
    }

    /// Replaces the `top` used by law checks; only meant for building
    /// deliberately broken instances.
    pub fn designate_top(&mut self, t: TermId) {
        self.designated_top = t;
        self.invalidate();
    }

    pub fn designated_top(&self) -> TermId {
        self.designated_top
    }

    pub fn num_terms(&self) -> usize {
        self.store().len()
    }

    pub fn node(&self, t: TermId) -> Term {
        self.store().node(t).clone()
    }

    pub fn depth(&self, t: TermId) -> usize {
        self.store().depth(t) as usize
    }

    pub fn meet(&self, xs: &[TermId]) -> Result<TermId> {
        self.store().meet(xs, self.bounds.max_set_size, self.bounds.max_depth)
    }

    pub fn join(&self, xs: &[TermId]) -> Result<TermId> {
        self.store().join(xs, self.bounds.max_set_size, self.bounds.max_depth)
    }

    pub fn plus(&self, a: TermId, b: TermId) -> Result<TermId> {
        self.store().plus(a, b, self.bounds.max_depth)
    }

    /// `↓t`.
    pub fn down(&self, t: TermId) -> QuantaleValue {
        let q = &self.quantale;
        match self.node(t) {
            Term::Bot => q.bottom(),
            Term::Top => q.top(),
            Term::Base(i) => self.bases[i as usize].down,
            Term::Meet(xs) => q.fold(Mode::Meet, xs.iter().map(|&x| self.down(x))),
            Term::Join(xs) => q.fold(Mode::Join, xs.iter().map(|&x| self.down(x))),
            Term::Plus(a, b) => q.plus_unchecked(self.down(a), self.down(b)),
        }
    }

    /// The ℓ-successors of `t`, sorted.
    pub fn moves(&self, t: TermId, l: LabelId) -> Result<Arc<[TermId]>> {
        if let Some(v) = lock(&self.moves).get(&(t, l)) {
            return Ok(v.clone());
        }
        let mut out: Vec<TermId> = match self.node(t) {
            Term::Bot => vec![TermId::BOT],
            Term::Top => Vec::new(),
            Term::Base(i) => self.bases[i as usize].trans[l].clone(),
            Term::Meet(xs) => {
                let mut v = Vec::new();
                for x in xs {
                    v.extend(self.moves(x, l)?.iter().copied());
                }
                v
            }
            Term::Join(xs) => {
                let lists: Vec<Arc<[TermId]>> = xs.iter().map(|&x| self.moves(x, l)).collect::<Result<_>>()?;
                self.choice_images(&lists)?
            }
            Term::Plus(a, b) => {
                let (ma, mb) = (self.moves(a, l)?, self.moves(b, l)?);
                let mut v = Vec::with_capacity(ma.len() * mb.len());
                for &x in ma.iter() {
                    for &y in mb.iter() {
                        v.push(self.plus(x, y)?);
                    }
                }
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        let out: Arc<[TermId]> = out.into();
        lock(&self.moves).insert((t, l), out.clone());
        Ok(out)
    }

    /// `join(image f)` for every choice function `f` picking one entry per list.
    fn choice_images(&self, lists: &[Arc<[TermId]>]) -> Result<Vec<TermId>> {
        if lists.iter().any(|l| l.is_empty()) {
            return Ok(Vec::new());
        }
        let limit = self.bounds.max_choices;
        let count = lists
            .iter()
            .try_fold(1usize, |acc, l| acc.checked_mul(l.len()).filter(|&c| c <= limit));
        if count.is_none() {
            return Err(Error::resource(
                "max_choices",
                limit,
                format!(
                    "join over {} members with {:?} successors each",
                    lists.len(),
                    lists.iter().map(|l| l.len()).collect::<Vec<_>>()
                ),
            ));
        }
        let mut idx = vec![0usize; lists.len()];
        let mut out = Vec::new();
        let mut image = Vec::with_capacity(lists.len());
        loop {
            image.clear();
            image.extend(idx.iter().zip(lists).map(|(&i, l)| l[i]));
            out.push(self.join(&image)?);
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// All labelled moves of `t`.
    pub fn all_moves(&self, t: TermId) -> Result<Vec<(LabelId, Arc<[TermId]>)>> {
        (0..self.labels.len()).map(|l| Ok((l, self.moves(t, l)?))).collect()
    }

    pub fn render(&self, t: TermId) -> String {
        let mut out = String::new();
        self.render_into(t, &mut out);
        out
    }

    fn render_into(&self, t: TermId, out: &mut String) {
        match self.node(t) {
            Term::Bot => out.push_str("bot"),
            Term::Top => out.push_str("top"),
            Term::Base(i) => out.push_str(&self.bases[i as usize].name),
            Term::Meet(xs) | Term::Join(xs) => {
                out.push_str(if matches!(self.node(t), Term::Meet(_)) {
                    "meet{"
                } else {
                    "join{"
                });
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    self.render_into(*x, out);
                }
                out.push('}');
            }
            Term::Plus(a, b) => {
                out.push_str("plus(");
                self.render_into(a, out);
                out.push_str(", ");
                self.render_into(b, out);
                out.push(')');
            }
        }
    }

    /// Parses `bot`, `top`, base names, `meet{..}`, `join{..}`, `plus(a, b)`.
    pub fn parse_term(&self, text: &str) -> Result<TermId> {
        parse::TermParser::new(self, text).parse_all()
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

#[cfg(test)]
mod tests {
    use super::*;
    use QuantaleValue::Bool;

    fn s0() -> Mlts {
        load_mlts(crate::fixtures::S0_MLTS).unwrap()
    }

    #[test]
    fn down_values() {
        let m = s0();
        assert_eq!(m.down(TermId::BOT), Bool(false));
        let t = m.plus(TermId::TOP, TermId::BOT).unwrap();
        assert_eq!(m.down(t), Bool(true));
        assert_eq!(m.down(m.base("s0").unwrap()), Bool(false));
    }

    #[test]
    fn extremal_moves() {
        let m = s0();
        let a = m.label("a").unwrap();
        assert!(m.moves(TermId::TOP, a).unwrap().is_empty());
        assert_eq!(&*m.moves(TermId::BOT, a).unwrap(), &[TermId::BOT]);
    }

    #[test]
    fn meet_moves_are_unions() {
        let m = s0();
        let b = m.label("b").unwrap();
        let t = m.meet(&[m.base("s0").unwrap(), TermId::BOT]).unwrap();
        assert_eq!(&*m.moves(t, b).unwrap(), &[TermId::BOT]);
        let a = m.label("a").unwrap();
        let s1 = m.base("s1").unwrap();
        assert_eq!(&*m.moves(t, a).unwrap(), &[TermId::BOT, s1]);
    }

    #[test]
    fn join_and_plus_moves() {
        let m = s0();
        let a = m.label("a").unwrap();
        let b = m.label("b").unwrap();
        let (s0, s1) = (m.base("s0").unwrap(), m.base("s1").unwrap());
        let j = m.join(&[s0, s1]).unwrap();
        // s0 -a-> s1 and s1 -a-> bot, so the only image is {s1, bot}
        assert_eq!(&*m.moves(j, a).unwrap(), &[s1]);
        // s1 has no b move
        assert!(m.moves(j, b).unwrap().is_empty());
        let p = m.plus(s0, s0).unwrap();
        assert_eq!(&*m.moves(p, a).unwrap(), &[m.plus(s1, s1).unwrap()]);
        assert_eq!(&*m.moves(p, b).unwrap(), &[TermId::BOT]);
    }

    #[test]
    fn choice_bound() {
        let mut m = Mlts::new(
            Quantale::Boolean,
            &["a"],
            Bounds {
                max_choices: 3,
                ..Bounds::default()
            },
        );
        let x = m.add_base("x", Bool(false)).unwrap();
        let y = m.add_base("y", Bool(false)).unwrap();
        m.set_transitions(x, 0, vec![TermId::BOT, x]).unwrap();
        m.set_transitions(y, 0, vec![TermId::BOT, y]).unwrap();
        let j = m.join(&[x, y]).unwrap();
        assert!(matches!(
            m.moves(j, 0),
            Err(Error::Resource {
                bound: "max_choices",
                ..
            })
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        let m = s0();
        for text in [
            "bot",
            "top",
            "s0",
            "meet{s0, s1}",
            "join{s1, plus(s0, s0)}",
            "plus(s1, meet{s0, bot})",
        ] {
            let t = m.parse_term(text).unwrap();
            assert_eq!(m.parse_term(&m.render(t)).unwrap(), t);
        }
        assert_eq!(m.render(m.parse_term("meet{s1, s0, top}").unwrap()), "meet{s0, s1}");
        assert!(matches!(m.parse_term("meet{s0"), Err(Error::Parse { .. })));
        assert!(matches!(m.parse_term("nope"), Err(Error::Lookup { .. })));
    }

    #[test]
    fn reserved_names_rejected() {
        let mut m = Mlts::new(Quantale::Boolean, &["a"], Bounds::default());
        assert!(m.add_base("top", Bool(false)).is_err());
        assert!(m.add_base("x y", Bool(false)).is_err());
    }
}
