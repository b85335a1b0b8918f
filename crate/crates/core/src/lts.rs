//! Finite process LTSs with an immediate distance `D: P×P → Q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::{Quantale, QuantaleValue};
use crate::report::{Entry, Report, Status};

pub type StateId = usize;
pub type LabelId = usize;

/// How `D(p, q)` is derived from the one-step behaviour of `p` and `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImmediatePolicy {
    /// ⊥ iff both states enable the same set of labels.
    Canonical,
    /// ⊥ iff some label is enabled by both.
    CommonAction,
    /// ⊥ iff either state is terminated or some label is enabled by both.
    Liberal,
    /// Values read from a table; missing pairs fall back to another policy.
    ExplicitTable,
}

impl ImmediatePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ImmediatePolicy::Canonical => "canonical",
            ImmediatePolicy::CommonAction => "common-action",
            ImmediatePolicy::Liberal => "liberal",
            ImmediatePolicy::ExplicitTable => "explicit-table",
        }
    }
}

impl fmt::Display for ImmediatePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImmediatePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "canonical" => ImmediatePolicy::Canonical,
            "common-action" | "common" => ImmediatePolicy::CommonAction,
            "liberal" => ImmediatePolicy::Liberal,
            "explicit-table" | "table" => ImmediatePolicy::ExplicitTable,
            other => return Err(Error::lookup("policy", other)),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ProcessLts {
    pub quantale: Quantale,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    /// `succ[p][l]`, sorted and deduplicated.
    succ: Vec<Vec<Vec<StateId>>>,
    policy: ImmediatePolicy,
    fallback: ImmediatePolicy,
    table: HashMap<(StateId, StateId), QuantaleValue>,
    saturated: Vec<bool>,
}

impl ProcessLts {
    pub fn new<S: AsRef<str>, L: AsRef<str>>(quantale: Quantale, states: &[S], labels: &[L]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Validation("an LTS needs at least one state".into()));
        }
        let mut lts = ProcessLts {
            quantale,
            states: Vec::new(),
            state_index: HashMap::new(),
            labels: Vec::new(),
            label_index: HashMap::new(),
            succ: Vec::new(),
            policy: ImmediatePolicy::Canonical,
            fallback: ImmediatePolicy::Canonical,
            table: HashMap::new(),
            saturated: Vec::new(),
        };
        for l in labels {
            lts.add_label(l.as_ref());
        }
        for s in states {
            if lts.state_index.contains_key(s.as_ref()) {
                return Err(Error::Validation(format!("state `{}` declared twice", s.as_ref())));
            }
            lts.add_state(s.as_ref());
        }
        Ok(lts)
    }

    /// Adds a label if absent and returns its id.
    pub fn add_label(&mut self, name: &str) -> LabelId {
        if let Some(&l) = self.label_index.get(name) {
            return l;
        }
        let l = self.labels.len();
        self.labels.push(name.to_string());
        self.label_index.insert(name.to_string(), l);
        for row in &mut self.succ {
            row.push(Vec::new());
        }
        l
    }

    /// Adds a state if absent and returns its id.
    pub fn add_state(&mut self, name: &str) -> StateId {
        if let Some(&p) = self.state_index.get(name) {
            return p;
        }
        let p = self.states.len();
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), p);
        self.succ.push(vec![Vec::new(); self.labels.len()]);
        self.saturated.push(false);
        p
    }

    pub fn add_transition(&mut self, p: StateId, l: LabelId, q: StateId) {
        let row = &mut self.succ[p][l];
        if let Err(pos) = row.binary_search(&q) {
            row.insert(pos, q);
        }
    }

    pub fn add_transition_named(&mut self, p: &str, l: &str, q: &str) -> Result<()> {
        let (p, l, q) = (self.state(p)?, self.label(l)?, self.state(q)?);
        self.add_transition(p, l, q);
        Ok(())
    }

    pub fn set_policy(&mut self, policy: ImmediatePolicy) {
        self.policy = policy;
    }

    pub fn policy(&self) -> ImmediatePolicy {
        self.policy
    }

    /// Policy used for pairs missing from an explicit table.
    pub fn set_fallback(&mut self, policy: ImmediatePolicy) {
        self.fallback = policy;
    }

    pub fn fallback(&self) -> ImmediatePolicy {
        self.fallback
    }

    /// Sets `D(p,q)` and `D(q,p)`.
    pub fn set_distance(&mut self, p: StateId, q: StateId, v: QuantaleValue) -> Result<()> {
        self.quantale.check(v)?;
        self.table.insert((p, q), v);
        self.table.insert((q, p), v);
        Ok(())
    }

    /// Sets `D(p,q)` only; lets tests build asymmetric tables.
    pub fn set_distance_one_way(&mut self, p: StateId, q: StateId, v: QuantaleValue) -> Result<()> {
        self.quantale.check(v)?;
        self.table.insert((p, q), v);
        Ok(())
    }

    pub fn table_entries(&self) -> impl Iterator<Item = ((StateId, StateId), QuantaleValue)> + '_ {
        self.table.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn state_name(&self, p: StateId) -> &str {
        &self.states[p]
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l]
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::lookup("state", name))
    }

    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn label(&self, name: &str) -> Result<LabelId> {
        self.label_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::lookup("label", name))
    }

    pub fn succ(&self, p: StateId, l: LabelId) -> &[StateId] {
        &self.succ[p][l]
    }

    /// The ℓ-successors of `p`, by name.
    pub fn successors(&self, p: &str, l: &str) -> Result<Vec<&str>> {
        let (p, l) = (self.state(p)?, self.label(l)?);
        Ok(self.succ[p][l].iter().map(|&q| self.states[q].as_str()).collect())
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, LabelId, StateId)> + '_ {
        self.succ.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(l, qs)| qs.iter().map(move |&q| (p, l, q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().flatten().map(Vec::len).sum()
    }

    pub fn enables(&self, p: StateId, l: LabelId) -> bool {
        !self.succ[p][l].is_empty()
    }

    pub fn is_terminated(&self, p: StateId) -> bool {
        self.succ[p].iter().all(Vec::is_empty)
    }

    pub fn mark_saturated(&mut self, p: StateId) {
        self.saturated[p] = true;
    }

    /// True when exploration of `p` dropped moves because of a bound.
    pub fn is_saturated(&self, p: StateId) -> bool {
        self.saturated[p]
    }

    pub fn is_bounded(&self) -> bool {
        self.saturated.iter().any(|&b| b)
    }

    fn by_policy(&self, policy: ImmediatePolicy, p: StateId, q: StateId) -> QuantaleValue {
        let labels = 0..self.labels.len();
        let close = match policy {
            ImmediatePolicy::Canonical => labels.clone().all(|l| self.enables(p, l) == self.enables(q, l)),
            ImmediatePolicy::CommonAction => labels.clone().any(|l| self.enables(p, l) && self.enables(q, l)),
            ImmediatePolicy::Liberal => {
                self.is_terminated(p)
                    || self.is_terminated(q)
                    || labels.clone().any(|l| self.enables(p, l) && self.enables(q, l))
            }
            ImmediatePolicy::ExplicitTable => unreachable!("table policy resolved by caller"),
        };
        if close {
            self.quantale.bottom()
        } else {
            self.quantale.top()
        }
    }

    /// `D(p, q)`; ⊥ on the diagonal for every policy.
    pub fn immediate(&self, p: StateId, q: StateId) -> QuantaleValue {
        match self.policy {
            ImmediatePolicy::ExplicitTable => match self.table.get(&(p, q)) {
                Some(&v) => v,
                None if p == q => self.quantale.bottom(),
                None => self.by_policy(self.fallback, p, q),
            },
            _ if p == q => self.quantale.bottom(),
            policy => self.by_policy(policy, p, q),
        }
    }

    pub fn immediate_distance(&self, p: &str, q: &str) -> Result<QuantaleValue> {
        Ok(self.immediate(self.state(p)?, self.state(q)?))
    }

    /// Renders the LTS in the `.lts` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("quantale: {}\n", self.quantale.name()));
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("labels: {}\n", self.labels.join(" ")));
        for (p, l, q) in self.transitions() {
            out.push_str(&format!(
                "trans: {} -{}-> {}\n",
                self.states[p], self.labels[l], self.states[q]
            ));
        }
        if self.policy == ImmediatePolicy::ExplicitTable {
            out.push_str(&format!("D-table: fallback={}\n", self.fallback));
            let sorted: BTreeMap<_, _> = self.table.iter().filter(|((p, q), _)| p <= q).collect();
            for ((p, q), v) in sorted {
                out.push_str(&format!(
                    "{} {} = {}\n",
                    self.states[*p],
                    self.states[*q],
                    self.quantale.display(*v)
                ));
            }
            out.push_str("end\n");
        } else {
            out.push_str(&format!("D: policy={}\n", self.policy));
        }
        out
    }

    /// Graphviz rendering, for inspection only.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n");
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", s.replace('"', "\\\"")));
        }
        for (p, l, q) in self.transitions() {
            out.push_str(&format!("  n{p} -> n{q} [label=\"{}\"];\n", self.labels[l]));
        }
        out.push_str("}\n");
        out
    }
}

/// Checks that `D` is a pseudometric. Violations are warnings.
pub fn validate_immediate_metric(lts: &ProcessLts) -> Report {
    let q = &lts.quantale;
    let n = lts.num_states();
    let name = |p: StateId| lts.state_name(p).to_string();
    let mut report = Report::new("immediate distance")
        .with_config("policy", lts.policy())
        .with_config("states", n);
    let mut emit = |id: &str, witness: Option<Vec<String>>| {
        let e = match witness {
            None => Entry::new(id, Status::Pass),
            Some(w) => Entry::new(id, Status::Warn).witness(w),
        };
        report.push(e);
    };
    let w = (0..n)
        .find(|&p| !q.equal(lts.immediate(p, p), q.bottom()))
        .map(|p| vec![name(p)]);
    emit("reflexive", w);
    let w = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| !q.equal(lts.immediate(a, b), lts.immediate(b, a)))
        .map(|(a, b)| vec![name(a), name(b)]);
    emit("symmetric", w);
    let mut w = None;
    'tri: for a in 0..n {
        for b in 0..n {
            let ab = lts.immediate(a, b);
            for c in 0..n {
                let bound = q.plus_unchecked(ab, lts.immediate(b, c));
                if !q.leq_unchecked(lts.immediate(a, c), bound) {
                    w = Some(vec![name(a), name(b), name(c)]);
                    break 'tri;
                }
            }
        }
    }
    emit("triangle", w);
    report
}

struct Doc {
    quantale: Option<(String, String)>,
    states: Vec<(String, String)>,
    labels: Vec<String>,
    trans: Vec<(String, String, String, String)>,
    policy: Option<(ImmediatePolicy, String)>,
    fallback: Option<ImmediatePolicy>,
    table: Vec<(String, String, String, String)>,
}

fn parse_doc(source: &str, text: &str) -> Result<Doc> {
    let mut doc = Doc {
        quantale: None,
        states: Vec::new(),
        labels: Vec::new(),
        trans: Vec::new(),
        policy: None,
        fallback: None,
        table: Vec::new(),
    };
    let mut in_table = false;
    for (i, raw) in text.lines().enumerate() {
        let loc = format!("{source}:{}", i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_table {
            if line == "end" {
                in_table = false;
                continue;
            }
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(&loc, format!("expected `p q = value`, got `{line}`")))?;
            let ps: Vec<&str> = lhs.split_whitespace().collect();
            if ps.len() != 2 {
                return Err(Error::parse(&loc, "a D-table row names exactly two states"));
            }
            doc.table.push((ps[0].into(), ps[1].into(), rhs.trim().into(), loc));
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(&loc, format!("expected `key: value`, got `{line}`")))?;
        let rest = rest.trim();
        let words = || rest.split([',', ' ', '\t']).filter(|s| !s.is_empty());
        match key.trim() {
            "quantale" => doc.quantale = Some((rest.to_string(), loc)),
            "states" => doc.states.extend(words().map(|s| (s.to_string(), loc.clone()))),
            "labels" => doc.labels.extend(words().map(str::to_string)),
            "trans" => {
                for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (p, tail) = item
                        .split_once('-')
                        .ok_or_else(|| Error::parse(&loc, format!("expected `p -a-> q`, got `{item}`")))?;
                    let (l, q) = tail
                        .split_once("->")
                        .ok_or_else(|| Error::parse(&loc, format!("expected `p -a-> q`, got `{item}`")))?;
                    let l = l.trim().trim_end_matches('-').trim();
                    let (p, q) = (p.trim(), q.trim());
                    if p.is_empty() || l.is_empty() || q.is_empty() {
                        return Err(Error::parse(&loc, format!("incomplete transition `{item}`")));
                    }
                    doc.trans.push((p.into(), l.into(), q.into(), loc.clone()));
                }
            }
            "D" => {
                let name = rest
                    .strip_prefix("policy=")
                    .ok_or_else(|| Error::parse(&loc, "expected `D: policy=<name>`"))?;
                let policy = name
                    .parse()
                    .map_err(|_| Error::parse(&loc, format!("unknown policy `{name}`")))?;
                doc.policy = Some((policy, loc));
            }
            "D-table" => {
                if !rest.is_empty() {
                    let name = rest
                        .strip_prefix("fallback=")
                        .ok_or_else(|| Error::parse(&loc, "expected `D-table:` or `D-table: fallback=<policy>`"))?;
                    let fb: ImmediatePolicy = name
                        .parse()
                        .map_err(|_| Error::parse(&loc, format!("unknown policy `{name}`")))?;
                    if fb == ImmediatePolicy::ExplicitTable {
                        return Err(Error::parse(&loc, "the fallback of a table cannot be a table"));
                    }
                    doc.fallback = Some(fb);
                }
                doc.policy = Some((ImmediatePolicy::ExplicitTable, loc));
                in_table = true;
            }
            other => return Err(Error::parse(&loc, format!("unknown key `{other}`"))),
        }
    }
    if in_table {
        return Err(Error::parse(source, "`D-table:` block is missing its `end`"));
    }
    Ok(doc)
}

/// Loads one `.lts` document.
///
/// ```text
/// quantale: boolean
/// states: p0 p1 p2
/// labels: a b
/// trans: p0 -a-> p1
/// trans: p0 -b-> p2
/// D: policy=liberal
/// ```
///
/// Instead of `D:`, a `D-table: [fallback=<policy>]` block lists
/// `p q = value` rows up to a closing `end`.
pub fn load_lts(document: &str) -> Result<ProcessLts> {
    load_lts_documents(&[("input", document)], None)
}

/// Loads and merges several documents (state names must be distinct across
/// documents). `quantale` overrides any `quantale:` line.
pub fn load_lts_documents(docs: &[(&str, &str)], quantale: Option<&Quantale>) -> Result<ProcessLts> {
    let parsed: Vec<Doc> = docs
        .iter()
        .map(|(src, text)| parse_doc(src, text))
        .collect::<Result<_>>()?;
    let q = match quantale {
        Some(q) => q.clone(),
        None => {
            let mut chosen: Option<(String, String)> = None;
            for d in &parsed {
                if let Some((name, loc)) = &d.quantale {
                    match &chosen {
                        Some((prev, _)) if prev != name => {
                            return Err(Error::parse(loc, format!("quantale `{name}` conflicts with `{prev}`")))
                        }
                        _ => chosen = Some((name.clone(), loc.clone())),
                    }
                }
            }
            match chosen {
                None => Quantale::Boolean,
                Some((name, loc)) => Quantale::builtin(&name)
                    .ok_or_else(|| Error::parse(&loc, format!("unknown built-in quantale `{name}`")))?,
            }
        }
    };
    let mut states = Vec::new();
    let mut seen = HashMap::new();
    for d in &parsed {
        for (s, loc) in &d.states {
            if let Some(prev) = seen.insert(s.clone(), loc.clone()) {
                return Err(Error::Validation(format!(
                    "{loc}: state `{s}` already declared at {prev}"
                )));
            }
            states.push(s.clone());
        }
    }
    if states.is_empty() {
        return Err(Error::Validation("no states declared".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    for d in &parsed {
        for l in &d.labels {
            if !labels.contains(l) {
                labels.push(l.clone());
            }
        }
    }
    let mut lts = ProcessLts::new(q, &states, &labels)?;
    for d in &parsed {
        for (p, l, r, loc) in &d.trans {
            for s in [p, r] {
                if lts.find_state(s).is_none() {
                    return Err(Error::Validation(format!("{loc}: undeclared state `{s}`")));
                }
            }
            if !d.labels.contains(l) {
                return Err(Error::Validation(format!("{loc}: undeclared label `{l}`")));
            }
            lts.add_transition_named(p, l, r)?;
        }
    }
    let mut policy: Option<(ImmediatePolicy, &str)> = None;
    for d in &parsed {
        if let Some((p, loc)) = &d.policy {
            match policy {
                Some((prev, _)) if prev != *p => {
                    return Err(Error::parse(loc, format!("policy `{p}` conflicts with `{prev}`")))
                }
                _ => policy = Some((*p, loc)),
            }
        }
        if let Some(fb) = d.fallback {
            lts.set_fallback(fb);
        }
    }
    let policy = policy.map_or(ImmediatePolicy::Canonical, |(p, _)| p);
    lts.set_policy(policy);
    let mut entries: HashMap<(StateId, StateId), (QuantaleValue, String)> = HashMap::new();
    for d in &parsed {
        for (a, b, v, loc) in &d.table {
            let pa = lts
                .find_state(a)
                .ok_or_else(|| Error::Validation(format!("{loc}: undeclared state `{a}`")))?;
            let pb = lts
                .find_state(b)
                .ok_or_else(|| Error::Validation(format!("{loc}: undeclared state `{b}`")))?;
            let v = lts
                .quantale
                .parse_value(v)
                .map_err(|e| Error::parse(loc, e.to_string()))?;
            if pa == pb && !lts.quantale.equal(v, lts.quantale.bottom()) {
                return Err(Error::Validation(format!("{loc}: D({a},{a}) must be bottom")));
            }
            for key in [(pa, pb), (pb, pa)] {
                if let Some((prev, prev_loc)) = entries.get(&key) {
                    if !lts.quantale.equal(*prev, v) {
                        return Err(Error::Validation(format!(
                            "{loc}: D is not symmetric on ({a},{b}); see {prev_loc}"
                        )));
                    }
                }
            }
            entries.insert((pa, pb), (v, loc.clone()));
        }
    }
    let has_fallback = parsed.iter().any(|d| d.fallback.is_some());
    if policy == ImmediatePolicy::ExplicitTable && !has_fallback {
        for a in 0..lts.num_states() {
            for b in a + 1..lts.num_states() {
                if !entries.contains_key(&(a, b)) && !entries.contains_key(&(b, a)) {
                    return Err(Error::Validation(format!(
                        "D-table has no entry for ({}, {}) and no fallback",
                        lts.state_name(a),
                        lts.state_name(b)
                    )));
                }
            }
        }
    }
    for ((a, b), (v, _)) in entries {
        lts.set_distance(a, b, v)?;
    }
    Ok(lts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: &str = "states: p0 p1 p2\nlabels: a b\ntrans: p0 -a-> p1\ntrans: p0 -b-> p2\n";
    const Q: &str = "states: q0 q1 q2 q3\nlabels: a b\ntrans: q0 -a-> q1, q0 -b-> q2, q1 -b-> q3\n";

    fn pq(policy: ImmediatePolicy) -> ProcessLts {
        let mut l = load_lts_documents(&[("P", P), ("Q", Q)], None).unwrap();
        l.set_policy(policy);
        l
    }

    #[test]
    fn loads_p() {
        let l = load_lts(P).unwrap();
        assert_eq!(l.num_states(), 3);
        assert_eq!(l.num_transitions(), 2);
        assert_eq!(l.successors("p1", "a").unwrap(), Vec::<&str>::new());
        assert_eq!(l.successors("p0", "b").unwrap(), vec!["p2"]);
    }

    #[test]
    fn duplicate_transitions_collapse() {
        let l = load_lts("states: x y\nlabels: a\ntrans: x -a-> y\ntrans: x -a-> y\n").unwrap();
        assert_eq!(l.num_transitions(), 1);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load_lts("states:\nlabels: a\n"), Err(Error::Validation(_))));
        let e = load_lts("states: x\nlabels: a\ntrans: x -a-> y\n").unwrap_err();
        assert!(e.to_string().contains("`y`"), "{e}");
        let e = load_lts("states: x\nlabels: a\ntrans: x -b-> x\n").unwrap_err();
        assert!(e.to_string().contains("`b`"));
        let asym = "states: x y\nlabels: a\nD-table:\nx y = top\ny x = bot\nend\n";
        assert!(matches!(load_lts(asym), Err(Error::Validation(_))));
        let partial = "states: x y z\nlabels: a\nD-table:\nx y = top\nend\n";
        assert!(load_lts(partial).is_err());
        assert!(matches!(
            load_lts("states: x\nD-table:\nx x = top\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn table_with_fallback() {
        let doc = "states: x y z\nlabels: a\ntrans: x -a-> x\nD-table: fallback=canonical\nx y = bot\nend\n";
        let l = load_lts(doc).unwrap();
        assert_eq!(l.immediate_distance("y", "x").unwrap(), QuantaleValue::Bool(false));
        assert_eq!(l.immediate_distance("x", "z").unwrap(), QuantaleValue::Bool(true));
        assert_eq!(l.immediate_distance("y", "z").unwrap(), QuantaleValue::Bool(false));
        let again = load_lts(&l.to_text()).unwrap();
        assert_eq!(again.immediate_distance("x", "y").unwrap(), QuantaleValue::Bool(false));
    }

    #[test]
    fn policies_on_terminated_pair() {
        let top = QuantaleValue::Bool(true);
        let bot = QuantaleValue::Bool(false);
        assert_eq!(
            pq(ImmediatePolicy::Canonical).immediate_distance("p1", "q1").unwrap(),
            top
        );
        assert_eq!(
            pq(ImmediatePolicy::CommonAction)
                .immediate_distance("p1", "q1")
                .unwrap(),
            top
        );
        assert_eq!(
            pq(ImmediatePolicy::Liberal).immediate_distance("p1", "q1").unwrap(),
            bot
        );
        for policy in [
            ImmediatePolicy::Canonical,
            ImmediatePolicy::CommonAction,
            ImmediatePolicy::Liberal,
        ] {
            let l = pq(policy);
            for p in 0..l.num_states() {
                assert_eq!(l.immediate(p, p), bot);
            }
        }
    }

    #[test]
    fn common_action_breaks_triangle() {
        let doc =
            "states: p q r x\nlabels: a b\ntrans: p -a-> x, q -a-> x, q -b-> x, r -b-> x\nD: policy=common-action\n";
        let l = load_lts(doc).unwrap();
        let r = validate_immediate_metric(&l);
        let e = r.find("triangle").unwrap();
        assert_eq!(e.status, Status::Warn);
        let w = e.witness.clone().unwrap();
        // p and r share nothing but both share a label with q
        assert_eq!(l.immediate_distance(&w[0], &w[2]).unwrap(), QuantaleValue::Bool(true));
        assert_eq!(l.immediate_distance(&w[0], &w[1]).unwrap(), QuantaleValue::Bool(false));
        assert!(r.passed());
        let c = pq(ImmediatePolicy::Canonical);
        assert!(validate_immediate_metric(&c)
            .entries
            .iter()
            .all(|e| e.status == Status::Pass));
    }

    #[test]
    fn asymmetric_table_warns() {
        let mut l = load_lts("states: x y\nlabels: a\n").unwrap();
        l.set_policy(ImmediatePolicy::ExplicitTable);
        l.set_distance_one_way(0, 1, QuantaleValue::Bool(true)).unwrap();
        let r = validate_immediate_metric(&l);
        let e = r.find("symmetric").unwrap();
        assert_eq!(e.status, Status::Warn);
        assert_eq!(e.witness.as_deref(), Some(&["x".to_string(), "y".to_string()][..]));
    }
}
