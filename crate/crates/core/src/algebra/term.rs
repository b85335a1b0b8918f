//! Process terms over the states of a base LTS.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProcessTerm {
    /// A state of the base LTS, by name.
    Atom(String),
    Nil,
    Prefix(String, Box<ProcessTerm>),
    Restrict(String, Box<ProcessTerm>),
    Sum(Box<ProcessTerm>, Box<ProcessTerm>),
    /// CSP parallel composition of two or more components.
    Par(Vec<ProcessTerm>),
    Bang(Box<ProcessTerm>),
}

impl ProcessTerm {
    pub fn atom(name: &str) -> Self {
        ProcessTerm::Atom(name.to_string())
    }

    pub fn prefix(label: &str, p: ProcessTerm) -> Self {
        ProcessTerm::Prefix(label.to_string(), Box::new(p))
    }

    pub fn restrict(label: &str, p: ProcessTerm) -> Self {
        ProcessTerm::Restrict(label.to_string(), Box::new(p))
    }

    pub fn sum(p: ProcessTerm, q: ProcessTerm) -> Self {
        ProcessTerm::Sum(Box::new(p), Box::new(q))
    }

    pub fn par(p: ProcessTerm, q: ProcessTerm) -> Self {
        ProcessTerm::Par(vec![p, q])
    }

    pub fn bang(p: ProcessTerm) -> Self {
        ProcessTerm::Bang(Box::new(p))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            toks: tokenize(text)?,
            pos: 0,
        };
        let t = p.sum()?;
        match p.toks.get(p.pos) {
            None => Ok(t),
            Some((at, tok)) => Err(Error::parse(
                format!("column {}", at + 1),
                format!("unexpected `{tok}`"),
            )),
        }
    }

    /// Labels used by prefixes and restrictions.
    pub fn labels(&self, out: &mut Vec<String>) {
        match self {
            ProcessTerm::Atom(_) | ProcessTerm::Nil => {}
            ProcessTerm::Prefix(l, p) | ProcessTerm::Restrict(l, p) => {
                if !out.contains(l) {
                    out.push(l.clone());
                }
                p.labels(out);
            }
            ProcessTerm::Sum(a, b) => {
                a.labels(out);
                b.labels(out);
            }
            ProcessTerm::Par(cs) => cs.iter().for_each(|c| c.labels(out)),
            ProcessTerm::Bang(p) => p.labels(out),
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        // 0: sum, 1: parallel, 2: unary
        let need = match self {
            ProcessTerm::Sum(..) => 0,
            ProcessTerm::Par(_) => 1,
            _ => 2,
        };
        if need < level {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ProcessTerm::Atom(n) => f.write_str(n),
            ProcessTerm::Nil => f.write_str("0"),
            ProcessTerm::Prefix(l, p) => {
                write!(f, "{l}.")?;
                p.fmt_at(f, 2)
            }
            ProcessTerm::Restrict(l, p) => {
                write!(f, "nu {l} ")?;
                p.fmt_at(f, 2)
            }
            ProcessTerm::Bang(p) => {
                f.write_str("!")?;
                p.fmt_at(f, 2)
            }
            ProcessTerm::Sum(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)
            }
            ProcessTerm::Par(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    c.fmt_at(f, 2)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl std::str::FromStr for ProcessTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProcessTerm::parse(s)
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<(usize, String)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (at, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "().|+!".contains(c) {
            out.push((at, c.to_string()));
            i += 1;
        } else if is_name_char(c) {
            let mut s = String::new();
            while i < chars.len() && is_name_char(chars[i].1) {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((at, s));
        } else {
            return Err(Error::parse(
                format!("column {}", at + 1),
                format!("unexpected character `{c}`"),
            ));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|(_, t)| t.as_str())
    }

    fn peek2(&self) -> Option<&str> {
        self.toks.get(self.pos + 1).map(|(_, t)| t.as_str())
    }

    fn err(&self, msg: &str) -> Error {
        match self.toks.get(self.pos) {
            Some((at, tok)) => Error::parse(format!("column {}", at + 1), format!("{msg}, found `{tok}`")),
            None => Error::parse("end of input", msg.to_string()),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(t) if t.chars().all(is_name_char) && t != "nu" => {
                let t = t.to_string();
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn sum(&mut self) -> Result<ProcessTerm> {
        let mut t = self.par()?;
        while self.peek() == Some("+") {
            self.pos += 1;
            t = ProcessTerm::sum(t, self.par()?);
        }
        Ok(t)
    }

    fn par(&mut self) -> Result<ProcessTerm> {
        let mut cs = vec![self.unary()?];
        while self.peek() == Some("|") {
            self.pos += 1;
            cs.push(self.unary()?);
        }
        Ok(if cs.len() == 1 {
            cs.pop().unwrap()
        } else {
            ProcessTerm::Par(cs)
        })
    }

    fn unary(&mut self) -> Result<ProcessTerm> {
        match self.peek() {
            Some("!") => {
                self.pos += 1;
                Ok(ProcessTerm::bang(self.unary()?))
            }
            Some("nu") => {
                self.pos += 1;
                let l = self.name()?;
                Ok(ProcessTerm::restrict(&l, self.unary()?))
            }
            Some(t) if t.chars().all(is_name_char) && self.peek2() == Some(".") => {
                let l = self.name()?;
                self.pos += 1;
                Ok(ProcessTerm::prefix(&l, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<ProcessTerm> {
        match self.peek() {
            Some("(") => {
                self.pos += 1;
                let t = self.sum()?;
                if self.peek() != Some(")") {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some("0") => {
                self.pos += 1;
                Ok(ProcessTerm::Nil)
            }
            _ => Ok(ProcessTerm::Atom(self.name()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let t = ProcessTerm::parse("a.p0 + nu a q0 | !r0").unwrap();
        assert_eq!(
            t,
            ProcessTerm::sum(
                ProcessTerm::prefix("a", ProcessTerm::atom("p0")),
                ProcessTerm::par(
                    ProcessTerm::restrict("a", ProcessTerm::atom("q0")),
                    ProcessTerm::bang(ProcessTerm::atom("r0"))
                )
            )
        );
    }

    #[test]
    fn render_round_trips() {
        for s in [
            "p0",
            "0",
            "b.p0",
            "nu a p0",
            "p0 + r0",
            "p0 | r0",
            "!p0",
            "(p0 + q0) | r0",
            "p0 + (q0 + r0)",
            "p0 | (q0 | r0)",
            "nu a (p0 | q0)",
            "!(a.p'0 + 0)",
            "a.b.0 + nu b !q0",
        ] {
            let t = ProcessTerm::parse(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(ProcessTerm::parse(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn errors_carry_columns() {
        let e = ProcessTerm::parse("p0 + ").unwrap_err().to_string();
        assert!(e.contains("end of input"), "{e}");
        let e = ProcessTerm::parse("p0 ) q").unwrap_err().to_string();
        assert!(e.contains("column 4"), "{e}");
        assert!(ProcessTerm::parse("nu nu p").is_err());
        assert!(ProcessTerm::parse("p # q").is_err());
    }
}
