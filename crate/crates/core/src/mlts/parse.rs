//! Text formats for MLTS terms and `.mlts` documents.

use std::collections::HashMap;

use super::{is_ident_char, Mlts, TermId};
use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::quantale::Quantale;

pub(crate) struct TermParser<'a> {
    m: &'a Mlts,
    src: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    pub(crate) fn new(m: &'a Mlts, src: &'a str) -> Self {
        TermParser { m, src, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(format!("column {}", self.pos + 1), msg)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !is_ident_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.err("expected a term"));
        }
        Ok(&self.src[start..self.pos])
    }

    pub(crate) fn parse_all(mut self) -> Result<TermId> {
        let t = self.term()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<TermId> {
        let word = self.ident()?;
        match word {
            "bot" => Ok(TermId::BOT),
            "top" => Ok(TermId::TOP),
            "meet" | "join" => {
                self.expect('{')?;
                let mut xs = Vec::new();
                if !self.eat('}') {
                    loop {
                        xs.push(self.term()?);
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                if word == "meet" {
                    self.m.meet(&xs)
                } else {
                    self.m.join(&xs)
                }
            }
            "plus" => {
                self.expect('(')?;
                let a = self.term()?;
                self.expect(',')?;
                let b = self.term()?;
                self.expect(')')?;
                self.m.plus(a, b)
            }
            name => self.m.base(name),
        }
    }
}

/// Loads one `.mlts` document.
///
/// ```text
/// quantale: boolean
/// labels: a b
/// states: s0 s1
/// down: s0=bot, s1=bot
/// trans: s0 -a-> s1
/// trans: s0 -b-> bot
/// bounds: max_set_size=6
/// ```
///
/// Targets are arbitrary terms. `bot`'s self-loops are implicit.
pub fn load_mlts(document: &str) -> Result<Mlts> {
    load_mlts_documents(&[("input", document)], None, Bounds::default())
}

struct Line<'a> {
    loc: String,
    key: &'a str,
    rest: &'a str,
}

/// Loads and merges several documents; base names must be distinct.
pub fn load_mlts_documents(docs: &[(&str, &str)], quantale: Option<&Quantale>, bounds: Bounds) -> Result<Mlts> {
    let mut lines = Vec::new();
    for (src, text) in docs {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let loc = format!("{src}:{}", i + 1);
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(&loc, format!("expected `key: value`, got `{line}`")))?;
            let key = key.trim();
            if !matches!(key, "quantale" | "labels" | "states" | "down" | "trans" | "bounds") {
                return Err(Error::parse(&loc, format!("unknown key `{key}`")));
            }
            lines.push(Line {
                loc,
                key,
                rest: rest.trim(),
            });
        }
    }
    let words = |s: &'_ str| {
        s.split([',', ' ', '\t'])
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect::<Vec<_>>()
    };

    let q = match quantale {
        Some(q) => q.clone(),
        None => {
            let mut chosen: Option<&Line> = None;
            for l in lines.iter().filter(|l| l.key == "quantale") {
                if let Some(prev) = chosen {
                    if prev.rest != l.rest {
                        return Err(Error::parse(
                            &l.loc,
                            format!("quantale `{}` conflicts with `{}`", l.rest, prev.rest),
                        ));
                    }
                }
                chosen = Some(l);
            }
            match chosen {
                None => Quantale::Boolean,
                Some(l) => Quantale::builtin(l.rest)
                    .ok_or_else(|| Error::parse(&l.loc, format!("unknown built-in quantale `{}`", l.rest)))?,
            }
        }
    };
    let mut bounds = bounds;
    for l in lines.iter().filter(|l| l.key == "bounds") {
        bounds = bounds
            .apply_overrides(l.rest)
            .map_err(|e| Error::parse(&l.loc, e.to_string()))?;
    }
    let labels: Vec<String> = lines
        .iter()
        .filter(|l| l.key == "labels")
        .flat_map(|l| words(l.rest))
        .fold(Vec::new(), |mut acc, w| {
            if !acc.contains(&w) {
                acc.push(w);
            }
            acc
        });
    let mut m = Mlts::new(q, &labels, bounds);

    let mut downs: HashMap<String, (String, String)> = HashMap::new();
    for l in lines.iter().filter(|l| l.key == "down") {
        for item in l.rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, v) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(&l.loc, format!("expected `state=value`, got `{item}`")))?;
            downs.insert(name.trim().to_string(), (v.trim().to_string(), l.loc.clone()));
        }
    }
    for l in lines.iter().filter(|l| l.key == "states") {
        for name in words(l.rest) {
            let (v, vloc) = downs
                .remove(&name)
                .ok_or_else(|| Error::Validation(format!("{}: no `down:` value for `{name}`", l.loc)))?;
            let v = m
                .quantale
                .parse_value(&v)
                .map_err(|e| Error::parse(&vloc, e.to_string()))?;
            m.add_base(&name, v)
                .map_err(|e| Error::Validation(format!("{}: {e}", l.loc)))?;
        }
    }
    if let Some((name, (_, loc))) = downs.into_iter().min_by(|a, b| a.1 .1.cmp(&b.1 .1)) {
        return Err(Error::Validation(format!(
            "{loc}: `down:` names undeclared state `{name}`"
        )));
    }
    for l in lines.iter().filter(|l| l.key == "trans") {
        let bad = || Error::parse(&l.loc, format!("expected `s -a-> term`, got `{}`", l.rest));
        let (src, tail) = l.rest.split_once('-').ok_or_else(bad)?;
        let (label, target) = tail.split_once("->").ok_or_else(bad)?;
        let src = src.trim();
        let label = label.trim().trim_end_matches('-').trim();
        let s = m
            .base(src)
            .map_err(|_| Error::Validation(format!("{}: undeclared state `{src}`", l.loc)))?;
        let a = m
            .label(label)
            .map_err(|_| Error::Validation(format!("{}: undeclared label `{label}`", l.loc)))?;
        let t = m.parse_term(target.trim()).map_err(|e| match e {
            Error::Lookup { name, .. } => Error::Validation(format!("{}: undeclared state `{name}`", l.loc)),
            Error::Parse { location, message } => Error::parse(format!("{} {location}", l.loc), message),
            other => other,
        })?;
        m.add_transition(s, a, t)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_fixture() {
        let m = load_mlts(crate::fixtures::S0_MLTS).unwrap();
        assert_eq!(m.bases().len(), 2);
        assert_eq!(m.labels(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = load_mlts("labels: a\nstates: s\ndown: s=bot\ntrans: s -a-> nope\n").unwrap_err();
        assert!(
            e.to_string().contains("input:4") && e.to_string().contains("nope"),
            "{e}"
        );
        let e = load_mlts("labels: a\nstates: s\n").unwrap_err();
        assert!(e.to_string().contains("down"), "{e}");
        let e = load_mlts("labels: a\nstates: s\ndown: s=maybe\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e}");
        let e = load_mlts("labels: a\nstates: s\ndown: s=bot\ntrans: s -a-> meet{s\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e}");
    }

    #[test]
    fn bounds_line() {
        let m = load_mlts("labels: a\nbounds: max_set_size=2\n").unwrap();
        assert_eq!(m.bounds().max_set_size, 2);
    }
}
