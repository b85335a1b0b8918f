//! Quantales: complete lattices with a commutative monoid that distributes
//! over meets. Order convention: `a ≼ b` iff `a = meet{a, b}`, bottom is the
//! monoid unit and means "no distance".

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Entry, Report, Status};

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuantaleValue {
    Bool(bool),
    /// Extended non-negative real; `f64::INFINITY` is the top element.
    Real(f64),
    /// Index into a finite carrier.
    Elem(u16),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Meet,
    Join,
}

/// A finite quantale given by explicit tables.
///
/// Tables are taken as-is so that broken instances can be built and fed to
/// [`validate_quantale`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteQuantale {
    pub name: String,
    pub elements: Vec<String>,
    /// `meet[a][b]`
    pub meet: Vec<Vec<u16>>,
    pub join: Vec<Vec<u16>>,
    pub plus: Vec<Vec<u16>>,
    pub bottom: u16,
    pub top: u16,
}

impl FiniteQuantale {
    /// Builds meet/join tables from a partial order given as `leq[a][b]`.
    pub fn from_order(name: &str, elements: Vec<String>, leq: &[Vec<bool>], plus: Vec<Vec<u16>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Validation("finite quantale has an empty carrier".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::Validation("finite carrier too large".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Validation(format!(
                        "order is not antisymmetric on {} and {}",
                        elements[a], elements[b]
                    )));
                }
            }
        }
        let bound = |a: usize, b: usize, lower: bool| -> Result<u16> {
            let is_bound = |x: usize| {
                if lower {
                    leq[x][a] && leq[x][b]
                } else {
                    leq[a][x] && leq[b][x]
                }
            };
            let cands: Vec<usize> = (0..n).filter(|&x| is_bound(x)).collect();
            cands
                .iter()
                .copied()
                .find(|&x| cands.iter().all(|&y| if lower { leq[y][x] } else { leq[x][y] }))
                .map(|x| x as u16)
                .ok_or_else(|| {
                    Error::Validation(format!(
                        "{} and {} have no {}",
                        elements[a],
                        elements[b],
                        if lower {
                            "greatest lower bound"
                        } else {
                            "least upper bound"
                        }
                    ))
                })
        };
        let mut meet = vec![vec![0u16; n]; n];
        let mut join = vec![vec![0u16; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = bound(a, b, true)?;
                join[a][b] = bound(a, b, false)?;
            }
        }
        let bottom = (0..n)
            .find(|&x| (0..n).all(|y| leq[x][y]))
            .ok_or_else(|| Error::Validation("order has no bottom".into()))? as u16;
        let top = (0..n)
            .find(|&x| (0..n).all(|y| leq[y][x]))
            .ok_or_else(|| Error::Validation("order has no top".into()))? as u16;
        Ok(FiniteQuantale {
            name: name.to_string(),
            elements,
            meet,
            join,
            plus,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.elements.iter().position(|e| e == name).map(|i| i as u16)
    }

    /// Parses the `.q` text format.
    ///
    /// ```text
    /// name: diamond
    /// carrier: 0 x y 1
    /// order: 0<x, 0<y, x<1, y<1
    /// plus: x + y = 1, x + x = x
    /// ```
    ///
    /// `meet: a b = c` lines may replace `order:`; the order is then read off
    /// the meet table. Missing `plus` entries are filled from their mirror
    /// entry. `bot:`/`top:` lines, when present, must agree with the order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::from("finite");
        let mut elements: Vec<String> = Vec::new();
        let mut order: Vec<(String, String, usize)> = Vec::new();
        let mut meets: Vec<(String, String, String, usize)> = Vec::new();
        let mut pluses: Vec<(String, String, String, usize)> = Vec::new();
        let mut declared_bot = None;
        let mut declared_top = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let loc = format!("line {}", lineno + 1);
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(&loc, "expected `key: value`"))?;
            let rest = rest.trim();
            match key.trim() {
                "name" => name = rest.to_string(),
                "carrier" => {
                    elements = rest
                        .split([',', ' ', '\t'])
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect()
                }
                "order" => {
                    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (a, b) = item
                            .split_once('<')
                            .ok_or_else(|| Error::parse(&loc, format!("expected `a<b`, got `{item}`")))?;
                        order.push((
                            a.trim().into(),
                            b.trim().trim_start_matches('=').trim().into(),
                            lineno + 1,
                        ));
                    }
                }
                "meet" | "plus" => {
                    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (lhs, rhs) = item
                            .split_once('=')
                            .ok_or_else(|| Error::parse(&loc, format!("expected `a op b = c`, got `{item}`")))?;
                        let ops: Vec<&str> = lhs
                            .split(|c: char| c == '+' || c.is_whitespace())
                            .filter(|s| !s.is_empty())
                            .collect();
                        if ops.len() != 2 {
                            return Err(Error::parse(&loc, format!("expected two operands in `{item}`")));
                        }
                        let entry = (
                            ops[0].to_string(),
                            ops[1].to_string(),
                            rhs.trim().to_string(),
                            lineno + 1,
                        );
                        if key.trim() == "meet" {
                            meets.push(entry);
                        } else {
                            pluses.push(entry);
                        }
                    }
                }
                "bot" => declared_bot = Some((rest.to_string(), lineno + 1)),
                "top" => declared_top = Some((rest.to_string(), lineno + 1)),
                other => return Err(Error::parse(&loc, format!("unknown key `{other}`"))),
            }
        }
        if elements.is_empty() {
            return Err(Error::Validation("`carrier:` is missing or empty".into()));
        }
        let n = elements.len();
        let idx = |s: &str, line: usize| -> Result<usize> {
            elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| Error::parse(format!("line {line}"), format!("`{s}` is not in the carrier")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        if !meets.is_empty() {
            for (a, b, c, line) in &meets {
                let (a, b, c) = (idx(a, *line)?, idx(b, *line)?, idx(c, *line)?);
                if c == a {
                    leq[a][b] = true;
                }
                if c == b {
                    leq[b][a] = true;
                }
            }
        }
        for (a, b, line) in &order {
            let (a, b) = (idx(a, *line)?, idx(b, *line)?);
            leq[a][b] = true;
        }
        // reflexive-transitive closure of the Hasse pairs
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut plus: Vec<Vec<Option<u16>>> = vec![vec![None; n]; n];
        for (a, b, c, line) in &pluses {
            let (a, b, c) = (idx(a, *line)?, idx(b, *line)?, idx(c, *line)? as u16);
            plus[a][b] = Some(c);
        }
        let mut table = vec![vec![0u16; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = match (plus[a][b], plus[b][a]) {
                    (Some(c), _) | (None, Some(c)) => c,
                    (None, None) => {
                        return Err(Error::Validation(format!(
                            "plus table has no entry for {} + {}",
                            elements[a], elements[b]
                        )))
                    }
                };
            }
        }
        let declared_bot = declared_bot
            .map(|(b, line)| idx(&b, line).map(|i| (i as u16, line)))
            .transpose()?;
        let declared_top = declared_top
            .map(|(t, line)| idx(&t, line).map(|i| (i as u16, line)))
            .transpose()?;
        let q = FiniteQuantale::from_order(&name, elements, &leq, table)?;
        if let Some((b, line)) = declared_bot {
            if b != q.bottom {
                return Err(Error::parse(
                    format!("line {line}"),
                    "declared bottom disagrees with the order",
                ));
            }
        }
        if let Some((t, line)) = declared_top {
            if t != q.top {
                return Err(Error::parse(
                    format!("line {line}"),
                    "declared top disagrees with the order",
                ));
            }
        }
        Ok(q)
    }

    /// `0 < x, y < 1` with `⊕ = join`.
    pub fn diamond() -> Self {
        let elements: Vec<String> = ["0", "x", "y", "1"].iter().map(|s| s.to_string()).collect();
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][3] = true;
        }
        let plus = vec![vec![0, 1, 2, 3], vec![1, 1, 3, 3], vec![2, 3, 2, 3], vec![3, 3, 3, 3]];
        FiniteQuantale::from_order("diamond", elements, &leq, plus).expect("diamond is a lattice")
    }

    /// `0 < 1 < 2 < 3` with truncated addition.
    pub fn chain4() -> Self {
        let elements: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let leq: Vec<Vec<bool>> = (0..4).map(|a| (0..4).map(|b| a <= b).collect()).collect();
        let plus: Vec<Vec<u16>> = (0..4u16).map(|a| (0..4u16).map(|b| (a + b).min(3)).collect()).collect();
        FiniteQuantale::from_order("chain4", elements, &leq, plus).expect("chain is a lattice")
    }
}

/// A pluggable quantale.
#[derive(Debug, Clone)]
pub enum Quantale {
    Boolean,
    /// `[0, +∞]` with inf/sup and truncated addition.
    Reals {
        eps: f64,
    },
    /// `[0, 1]` with `⊕ = min(1, a + b)`.
    UnitInterval {
        eps: f64,
    },
    Finite(Arc<FiniteQuantale>),
}

impl PartialEq for Quantale {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Quantale::Boolean, Quantale::Boolean) => true,
            (Quantale::Reals { .. }, Quantale::Reals { .. }) => true,
            (Quantale::UnitInterval { .. }, Quantale::UnitInterval { .. }) => true,
            (Quantale::Finite(a), Quantale::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Quantale {
    pub fn reals() -> Self {
        Quantale::Reals { eps: DEFAULT_EPS }
    }

    pub fn unit_interval() -> Self {
        Quantale::UnitInterval { eps: DEFAULT_EPS }
    }

    pub fn finite(table: FiniteQuantale) -> Self {
        Quantale::Finite(Arc::new(table))
    }

    pub fn with_eps(self, eps: f64) -> Self {
        match self {
            Quantale::Reals { .. } => Quantale::Reals { eps },
            Quantale::UnitInterval { .. } => Quantale::UnitInterval { eps },
            other => other,
        }
    }

    /// Resolves a built-in name: `boolean`, `reals`, `unit`, `diamond`, `chain4`.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "boolean" | "bool" | "B" => Quantale::Boolean,
            "reals" | "real" | "R" => Quantale::reals(),
            "unit" | "unit-interval" | "interval" => Quantale::unit_interval(),
            "diamond" => Quantale::finite(FiniteQuantale::diamond()),
            "chain4" => Quantale::finite(FiniteQuantale::chain4()),
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        match self {
            Quantale::Boolean => "boolean".into(),
            Quantale::Reals { .. } => "reals".into(),
            Quantale::UnitInterval { .. } => "unit".into(),
            Quantale::Finite(t) => t.name.clone(),
        }
    }

    pub fn eps(&self) -> f64 {
        match self {
            Quantale::Reals { eps } | Quantale::UnitInterval { eps } => *eps,
            _ => 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Quantale::Boolean | Quantale::Finite(_))
    }

    pub fn bottom(&self) -> QuantaleValue {
        match self {
            Quantale::Boolean => QuantaleValue::Bool(false),
            Quantale::Reals { .. } | Quantale::UnitInterval { .. } => QuantaleValue::Real(0.0),
            Quantale::Finite(t) => QuantaleValue::Elem(t.bottom),
        }
    }

    pub fn top(&self) -> QuantaleValue {
        match self {
            Quantale::Boolean => QuantaleValue::Bool(true),
            Quantale::Reals { .. } => QuantaleValue::Real(f64::INFINITY),
            Quantale::UnitInterval { .. } => QuantaleValue::Real(1.0),
            Quantale::Finite(t) => QuantaleValue::Elem(t.top),
        }
    }

    /// The whole carrier, when finite.
    pub fn carrier(&self) -> Option<Vec<QuantaleValue>> {
        match self {
            Quantale::Boolean => Some(vec![QuantaleValue::Bool(false), QuantaleValue::Bool(true)]),
            Quantale::Finite(t) => Some((0..t.len() as u16).map(QuantaleValue::Elem).collect()),
            _ => None,
        }
    }

    /// The carrier when finite, otherwise a fixed representative sample.
    pub fn default_sample(&self) -> Vec<QuantaleValue> {
        self.carrier().unwrap_or_else(|| match self {
            Quantale::UnitInterval { .. } => [0.0, 0.25, 0.5, 1.0].map(QuantaleValue::Real).to_vec(),
            _ => [0.0, 0.25, 1.0, f64::INFINITY].map(QuantaleValue::Real).to_vec(),
        })
    }

    /// True for quantales whose order is total on the whole carrier.
    pub fn is_totally_ordered(&self) -> bool {
        match self {
            Quantale::Boolean | Quantale::Reals { .. } | Quantale::UnitInterval { .. } => true,
            Quantale::Finite(t) => {
                let n = t.len();
                (0..n).all(|a| (0..n).all(|b| t.meet[a][b] as usize == a || t.meet[a][b] as usize == b))
            }
        }
    }

    pub fn contains(&self, v: QuantaleValue) -> bool {
        match (self, v) {
            (Quantale::Boolean, QuantaleValue::Bool(_)) => true,
            (Quantale::Reals { .. }, QuantaleValue::Real(x)) => x >= 0.0 && !x.is_nan(),
            (Quantale::UnitInterval { .. }, QuantaleValue::Real(x)) => (0.0..=1.0).contains(&x),
            (Quantale::Finite(t), QuantaleValue::Elem(i)) => (i as usize) < t.len(),
            _ => false,
        }
    }

    pub fn check(&self, v: QuantaleValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Type(format!(
                "{v:?} is not an element of the {} quantale",
                self.name()
            )))
        }
    }

    /// `a ≼ b`, i.e. `a = meet{a, b}`.
    pub fn leq(&self, a: QuantaleValue, b: QuantaleValue) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq_unchecked(a, b))
    }

    pub(crate) fn leq_unchecked(&self, a: QuantaleValue, b: QuantaleValue) -> bool {
        match (self, a, b) {
            (Quantale::Boolean, QuantaleValue::Bool(x), QuantaleValue::Bool(y)) => !x || y,
            (
                Quantale::Reals { eps } | Quantale::UnitInterval { eps },
                QuantaleValue::Real(x),
                QuantaleValue::Real(y),
            ) => {
                if y == f64::INFINITY {
                    true
                } else if x == f64::INFINITY {
                    false
                } else {
                    x <= y + eps
                }
            }
            (Quantale::Finite(t), QuantaleValue::Elem(x), QuantaleValue::Elem(y)) => {
                t.meet[x as usize][y as usize] == x
            }
            _ => false,
        }
    }

    /// Equality up to the real tolerance.
    pub fn equal(&self, a: QuantaleValue, b: QuantaleValue) -> bool {
        match (a, b) {
            (QuantaleValue::Real(x), QuantaleValue::Real(y)) => {
                if x.is_infinite() || y.is_infinite() {
                    x == y
                } else {
                    (x - y).abs() <= self.eps()
                }
            }
            _ => a == b,
        }
    }

    fn binary(&self, mode: Mode, a: QuantaleValue, b: QuantaleValue) -> QuantaleValue {
        match (self, a, b) {
            (Quantale::Boolean, QuantaleValue::Bool(x), QuantaleValue::Bool(y)) => QuantaleValue::Bool(match mode {
                Mode::Meet => x && y,
                Mode::Join => x || y,
            }),
            (_, QuantaleValue::Real(x), QuantaleValue::Real(y)) => QuantaleValue::Real(match mode {
                Mode::Meet => x.min(y),
                Mode::Join => x.max(y),
            }),
            (Quantale::Finite(t), QuantaleValue::Elem(x), QuantaleValue::Elem(y)) => QuantaleValue::Elem(match mode {
                Mode::Meet => t.meet[x as usize][y as usize],
                Mode::Join => t.join[x as usize][y as usize],
            }),
            _ => unreachable!("operands checked by caller"),
        }
    }

    /// Meet or join of a finite set; `meet ∅ = ⊤`, `join ∅ = ⊥`.
    pub fn meet_join(&self, mode: Mode, xs: &[QuantaleValue]) -> Result<QuantaleValue> {
        for &x in xs {
            self.check(x)?;
        }
        Ok(self.fold(mode, xs.iter().copied()))
    }

    pub(crate) fn fold(&self, mode: Mode, xs: impl IntoIterator<Item = QuantaleValue>) -> QuantaleValue {
        let unit = match mode {
            Mode::Meet => self.top(),
            Mode::Join => self.bottom(),
        };
        xs.into_iter().fold(unit, |acc, x| self.binary(mode, acc, x))
    }

    pub fn meet(&self, xs: &[QuantaleValue]) -> Result<QuantaleValue> {
        self.meet_join(Mode::Meet, xs)
    }

    pub fn join(&self, xs: &[QuantaleValue]) -> Result<QuantaleValue> {
        self.meet_join(Mode::Join, xs)
    }

    pub fn plus(&self, a: QuantaleValue, b: QuantaleValue) -> Result<QuantaleValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.plus_unchecked(a, b))
    }

    pub(crate) fn plus_unchecked(&self, a: QuantaleValue, b: QuantaleValue) -> QuantaleValue {
        match (self, a, b) {
            (Quantale::Boolean, QuantaleValue::Bool(x), QuantaleValue::Bool(y)) => QuantaleValue::Bool(x || y),
            (Quantale::Reals { .. }, QuantaleValue::Real(x), QuantaleValue::Real(y)) => QuantaleValue::Real(x + y),
            (Quantale::UnitInterval { .. }, QuantaleValue::Real(x), QuantaleValue::Real(y)) => {
                QuantaleValue::Real((x + y).min(1.0))
            }
            (Quantale::Finite(t), QuantaleValue::Elem(x), QuantaleValue::Elem(y)) => {
                QuantaleValue::Elem(t.plus[x as usize][y as usize])
            }
            _ => unreachable!("operands checked by caller"),
        }
    }

    pub fn parse_value(&self, text: &str) -> Result<QuantaleValue> {
        let s = text.trim();
        let bad = || Error::Type(format!("`{s}` is not an element of the {} quantale", self.name()));
        let v = match self {
            Quantale::Boolean => QuantaleValue::Bool(match s {
                "bot" | "false" | "0" | "⊥" => false,
                "top" | "true" | "1" | "⊤" => true,
                _ => return Err(bad()),
            }),
            Quantale::Reals { .. } | Quantale::UnitInterval { .. } => match s {
                "bot" | "⊥" => self.bottom(),
                "top" | "⊤" => self.top(),
                "inf" | "+inf" | "∞" => QuantaleValue::Real(f64::INFINITY),
                _ => QuantaleValue::Real(s.parse::<f64>().map_err(|_| bad())?),
            },
            Quantale::Finite(t) => match t.index_of(s) {
                Some(i) => QuantaleValue::Elem(i),
                None if s == "bot" => self.bottom(),
                None if s == "top" => self.top(),
                None => return Err(bad()),
            },
        };
        self.check(v).map_err(|_| bad())?;
        Ok(v)
    }

    pub fn display(&self, v: QuantaleValue) -> String {
        match (self, v) {
            (_, QuantaleValue::Bool(false)) => "bot".into(),
            (_, QuantaleValue::Bool(true)) => "top".into(),
            (_, QuantaleValue::Real(x)) if x.is_infinite() => "inf".into(),
            (_, QuantaleValue::Real(x)) => format!("{x}"),
            (Quantale::Finite(t), QuantaleValue::Elem(i)) => {
                t.elements.get(i as usize).cloned().unwrap_or_else(|| format!("#{i}"))
            }
            (_, QuantaleValue::Elem(i)) => format!("#{i}"),
        }
    }
}

/// `a ⊕ a = a` for every sampled `a`.
pub fn plus_is_idempotent(q: &Quantale, sample: &[QuantaleValue]) -> Result<bool> {
    for &a in sample {
        if !q.equal(q.plus(a, a)?, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Checks the lattice, monoid and distributivity laws over `sample`, using
/// every subset of at most `max_subset` elements.
pub fn validate_quantale(q: &Quantale, sample: &[QuantaleValue], max_subset: usize) -> Result<Report> {
    for &v in sample {
        q.check(v)?;
    }
    let exhaustive = q
        .carrier()
        .is_some_and(|c| c.iter().all(|x| sample.iter().any(|y| q.equal(*x, *y))));
    let scope = if exhaustive { "exhaustive" } else { "sampled" };
    let mut report = Report::new(format!("quantale laws ({})", q.name()))
        .with_config("quantale", q.name())
        .with_config("sample_size", sample.len())
        .with_config("max_subset", max_subset)
        .with_config("scope", scope);
    let show = |v: QuantaleValue| q.display(v);
    let show_set = |xs: &[usize]| {
        format!(
            "{{{}}}",
            xs.iter().map(|&i| show(sample[i])).collect::<Vec<_>>().join(",")
        )
    };
    let leq = |a, b| q.leq_unchecked(a, b);
    let eq = |a, b| q.equal(a, b);
    let n = sample.len();

    let law = |report: &mut Report, id: &str, witness: Option<Vec<String>>| {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        let mut e = Entry::new(id, status).detail(scope);
        e.witness = witness;
        report.push(e);
    };

    let w = (0..n)
        .find(|&a| !leq(sample[a], sample[a]))
        .map(|a| vec![show(sample[a])]);
    law(&mut report, "order.reflexive", w);
    let w = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| leq(sample[a], sample[b]) && leq(sample[b], sample[a]) && !eq(sample[a], sample[b]))
        .map(|(a, b)| vec![show(sample[a]), show(sample[b])]);
    law(&mut report, "order.antisymmetric", w);
    let mut w = None;
    'trans: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if leq(sample[a], sample[b]) && leq(sample[b], sample[c]) && !leq(sample[a], sample[c]) {
                    w = Some(vec![show(sample[a]), show(sample[b]), show(sample[c])]);
                    break 'trans;
                }
            }
        }
    }
    law(&mut report, "order.transitive", w);
    let w = sample
        .iter()
        .find(|&&x| !leq(q.bottom(), x) || !leq(x, q.top()))
        .map(|&x| vec![show(x)]);
    law(&mut report, "lattice.bounds", w);

    let subs = subsets(n, max_subset);
    for (mode, id) in [(Mode::Meet, "lattice.meet_glb"), (Mode::Join, "lattice.join_lub")] {
        let mut w = None;
        for s in &subs {
            let m = q.fold(mode, s.iter().map(|&i| sample[i]));
            let below = |x, y| if mode == Mode::Meet { leq(x, y) } else { leq(y, x) };
            if let Some(&i) = s.iter().find(|&&i| !below(m, sample[i])) {
                w = Some(vec![
                    show_set(s),
                    show(m),
                    format!("not a bound of {}", show(sample[i])),
                ]);
                break;
            }
            if let Some(x) = sample
                .iter()
                .find(|&&x| s.iter().all(|&i| below(x, sample[i])) && !below(x, m))
            {
                w = Some(vec![show_set(s), show(m), format!("{} is a tighter bound", show(*x))]);
                break;
            }
        }
        law(&mut report, id, w);
    }

    let p = |a, b| q.plus_unchecked(a, b);
    let w = sample
        .iter()
        .find(|&&a| !eq(p(a, q.bottom()), a))
        .map(|&a| vec![show(a)]);
    law(&mut report, "monoid.unit", w);
    let w = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| !eq(p(sample[a], sample[b]), p(sample[b], sample[a])))
        .map(|(a, b)| vec![show(sample[a]), show(sample[b])]);
    law(&mut report, "monoid.commutative", w);
    let mut w = None;
    'assoc: for a in sample {
        for b in sample {
            for c in sample {
                if !eq(p(p(*a, *b), *c), p(*a, p(*b, *c))) {
                    w = Some(vec![show(*a), show(*b), show(*c)]);
                    break 'assoc;
                }
            }
        }
    }
    law(&mut report, "monoid.associative", w);
    let mut w = None;
    'dist: for &e in sample {
        for s in &subs {
            let lhs = p(e, q.fold(Mode::Meet, s.iter().map(|&i| sample[i])));
            let rhs = q.fold(Mode::Meet, s.iter().map(|&i| p(e, sample[i])));
            if !eq(lhs, rhs) {
                w = Some(vec![show(e), show_set(s)]);
                break 'dist;
            }
        }
    }
    law(&mut report, "distributivity", w);
    Ok(report)
}
