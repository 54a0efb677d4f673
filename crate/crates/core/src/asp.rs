//! Answer set programs: rules of the form
//! `L0 ; ... ; Lk :- Lk+1, ..., Lm, not Lm+1, ..., not Ln.`
//!
//! This module holds the data model, the concrete syntax printer and a
//! small reader for the same syntax.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
    Func(String, Vec<Term>),
}

impl Term {
    pub fn constant(s: impl Into<String>) -> Term {
        Term::Const(s.into())
    }

    pub fn var(s: impl Into<String>) -> Term {
        Term::Var(s.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn collect_constants<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Const(c) => {
                out.insert(c);
            }
            Term::Var(_) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
        }
    }

    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Func(name, args) => Term::Func(name.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => f.write_str(c),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    StrongNeg,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub sign: Sign,
    pub pred: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal { sign: Sign::Pos, pred: pred.into(), args }
    }

    pub fn negated(pred: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal { sign: Sign::StrongNeg, pred: pred.into(), args }
    }

    /// The literal with the opposite strong-negation sign.
    pub fn complement(&self) -> Literal {
        let sign = match self.sign {
            Sign::Pos => Sign::StrongNeg,
            Sign::StrongNeg => Sign::Pos,
        };
        Literal { sign, ..self.clone() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Literal {
        Literal { sign: self.sign, pred: self.pred.clone(), args: self.args.iter().map(|a| a.substitute(f)).collect() }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::StrongNeg {
            f.write_str("-")?;
        }
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AspRule {
    pub head: Vec<Literal>,
    pub body_pos: Vec<Literal>,
    pub body_naf: Vec<Literal>,
}

impl AspRule {
    pub fn fact(head: Literal) -> AspRule {
        AspRule { head: vec![head], body_pos: Vec::new(), body_naf: Vec::new() }
    }

    pub fn is_fact(&self) -> bool {
        self.body_pos.is_empty() && self.body_naf.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    /// Variables in first-occurrence order: head, positive body, then the
    /// negation-as-failure body.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for l in self.head.iter().chain(&self.body_pos).chain(&self.body_naf) {
            l.args.iter().for_each(|a| a.collect_vars(&mut out));
        }
        out
    }

    /// Variables of the head or NAF body that are missing from the positive body.
    pub fn unsafe_vars(&self) -> Vec<&str> {
        let mut bound = Vec::new();
        for l in &self.body_pos {
            l.args.iter().for_each(|a| a.collect_vars(&mut bound));
        }
        let mut others = Vec::new();
        for l in self.head.iter().chain(&self.body_naf) {
            l.args.iter().for_each(|a| a.collect_vars(&mut others));
        }
        others.into_iter().filter(|v| !bound.contains(v)).collect()
    }

    pub fn is_safe(&self) -> bool {
        self.unsafe_vars().is_empty()
    }
}

impl fmt::Display for AspRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.is_fact() {
            if !self.head.is_empty() {
                f.write_str(" ")?;
            }
            f.write_str(":- ")?;
            let body = self
                .body_pos
                .iter()
                .map(|l| l.to_string())
                .chain(self.body_naf.iter().map(|l| format!("not {l}")));
            for (i, b) in body.enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&b)?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AspProgram {
    pub rules: Vec<AspRule>,
}

impl AspProgram {
    pub fn new(rules: Vec<AspRule>) -> AspProgram {
        AspProgram { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Constants occurring anywhere in the program, sorted.
    pub fn constants(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            for l in r.head.iter().chain(&r.body_pos).chain(&r.body_naf) {
                l.args.iter().for_each(|a| a.collect_constants(&mut out));
            }
        }
        out.into_iter().map(String::from).collect()
    }
}

/// One rule per line, each terminated by a newline.
pub fn render(program: &AspProgram) -> String {
    let mut out = String::new();
    for r in &program.rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("offset {offset}: {detail}")]
pub struct ReadError {
    pub offset: usize,
    pub detail: String,
}

/// Reads a program in the concrete syntax produced by [`render`].
/// `%` starts a comment that runs to the end of the line.
pub fn parse_program(text: &str) -> Result<AspProgram, ReadError> {
    let mut r = Reader { src: text.as_bytes(), at: 0 };
    let mut rules = Vec::new();
    loop {
        r.skip_ws();
        if r.at >= r.src.len() {
            break;
        }
        rules.push(r.rule()?);
    }
    Ok(AspProgram { rules })
}

struct Reader<'a> {
    src: &'a [u8],
    at: usize,
}

impl Reader<'_> {
    fn err<T>(&self, detail: impl Into<String>) -> Result<T, ReadError> {
        Err(ReadError { offset: self.at, detail: detail.into() })
    }

    fn skip_ws(&mut self) {
        while self.at < self.src.len() {
            match self.src[self.at] {
                b' ' | b'\t' | b'\n' | b'\r' => self.at += 1,
                b'%' => {
                    while self.at < self.src.len() && self.src[self.at] != b'\n' {
                        self.at += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.at..].starts_with(s.as_bytes()) {
            self.at += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ReadError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ReadError> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.src.len() && (self.src[self.at].is_ascii_alphanumeric() || self.src[self.at] == b'_') {
            self.at += 1;
        }
        if start == self.at {
            return self.err("expected an identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.at]).into_owned())
    }

    fn keyword_not(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.at..];
        if rest.starts_with(b"not") && rest.get(3).is_some_and(|c| c.is_ascii_whitespace()) {
            self.at += 3;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<Term, ReadError> {
        let name = self.ident()?;
        let first = name.as_bytes()[0];
        if first.is_ascii_uppercase() || first == b'_' {
            return Ok(Term::Var(name));
        }
        if !first.is_ascii_lowercase() && !first.is_ascii_digit() {
            return self.err(format!("bad term `{name}`"));
        }
        if self.peek() == Some(b'(') {
            self.at += 1;
            let args = self.args()?;
            return Ok(Term::Func(name, args));
        }
        Ok(Term::Const(name))
    }

    fn args(&mut self) -> Result<Vec<Term>, ReadError> {
        let mut args = vec![self.term()?];
        while self.eat(",") {
            args.push(self.term()?);
        }
        self.expect(")")?;
        Ok(args)
    }

    fn literal(&mut self) -> Result<Literal, ReadError> {
        let sign = if self.eat("-") { Sign::StrongNeg } else { Sign::Pos };
        let pred = self.ident()?;
        if !pred.as_bytes()[0].is_ascii_lowercase() {
            return self.err(format!("predicate `{pred}` must start lowercase"));
        }
        let args = if self.peek() == Some(b'(') {
            self.at += 1;
            self.args()?
        } else {
            Vec::new()
        };
        Ok(Literal { sign, pred, args })
    }

    fn rule(&mut self) -> Result<AspRule, ReadError> {
        let mut rule = AspRule { head: Vec::new(), body_pos: Vec::new(), body_naf: Vec::new() };
        if !matches!(self.peek(), Some(b':')) {
            rule.head.push(self.literal()?);
            while self.eat(";") {
                rule.head.push(self.literal()?);
            }
        }
        if self.eat(":-") {
            loop {
                if self.keyword_not() {
                    rule.body_naf.push(self.literal()?);
                } else {
                    rule.body_pos.push(self.literal()?);
                }
                if !self.eat(",") {
                    break;
                }
            }
        } else if rule.head.is_empty() {
            return self.err("empty rule");
        }
        self.expect(".")?;
        Ok(rule)
    }
}
