//! Feature-annotated context-free grammar.
//!
//! One production per line:
//!
//! ```text
//! Fact -> Subject[num=?n] VP[num=?n]   => clause
//! Sentence -> "if" Antecedent "then" Consequent   => conditional @opener
//! ```
//!
//! Capitalised symbols are nonterminals, lowercase symbols name lexical
//! categories and quoted symbols are literal words. Features are flat
//! `attr=value` pairs; `?x` is a variable local to the production. The text
//! after `=>` names the semantic action, and `@opener` marks a production
//! whose leading literal words are offered together as one sentence opener.
//! The left-hand side of the first production is the start symbol.

use std::collections::HashMap;
use std::fmt;

use crate::lexicon::LexCategory;

/// The grammar fragment shipped with the crate.
pub const DEFAULT_GRAMMAR: &str = include_str!("../data/peng.grammar");

pub(crate) const MAX_VARS: usize = 4;

pub type ValueId = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatVal {
    Const(ValueId),
    Var(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub attr: String,
    pub value: FeatVal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbol {
    Nonterminal { id: usize, features: Vec<Feature> },
    Category { category: LexCategory, features: Vec<Feature> },
    Word(String),
}

impl Symbol {
    pub fn features(&self) -> &[Feature] {
        match self {
            Symbol::Nonterminal { features, .. } | Symbol::Category { features, .. } => features,
            Symbol::Word(_) => &[],
        }
    }

    pub fn is_terminal(&self) -> bool {
        !matches!(self, Symbol::Nonterminal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: usize,
    pub lhs_features: Vec<Feature>,
    pub rhs: Vec<Symbol>,
    pub action: String,
    pub opener: bool,
    pub vars: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("grammar line {line}: {detail}")]
pub struct GrammarError {
    pub line: usize,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    nonterminals: Vec<String>,
    values: Vec<String>,
    rules: Vec<Rule>,
    by_lhs: Vec<Vec<usize>>,
    start: usize,
}

impl Grammar {
    pub fn default_fragment() -> Grammar {
        Grammar::parse(DEFAULT_GRAMMAR).expect("built-in grammar is well-formed")
    }

    pub fn parse(text: &str) -> Result<Grammar, GrammarError> {
        let mut g = Grammar {
            nonterminals: Vec::new(),
            values: Vec::new(),
            rules: Vec::new(),
            by_lhs: Vec::new(),
            start: 0,
        };
        // number values are always interned so lexical features resolve
        g.intern_value("sg");
        g.intern_value("pl");
        let mut used_at: HashMap<usize, usize> = HashMap::new();

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let err = |detail: String| GrammarError { line: lineno, detail };
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (body, opener) = match line.strip_suffix("@opener") {
                Some(rest) => (rest.trim_end(), true),
                None => (line, false),
            };
            let (body, action) = match body.split_once("=>") {
                Some((b, a)) => (b.trim(), a.trim().to_string()),
                None => (body, "pass".to_string()),
            };
            if action.is_empty() || action.contains(char::is_whitespace) {
                return Err(err(format!("bad action name `{action}`")));
            }
            let (lhs, rhs) = body
                .split_once("->")
                .ok_or_else(|| err("expected `LHS -> RHS`".into()))?;
            let mut vars: Vec<String> = Vec::new();
            let (lhs_name, lhs_features) =
                g.parse_symbol_parts(lhs.trim(), &mut vars).map_err(err)?;
            if !starts_upper(&lhs_name) {
                return Err(err(format!("left-hand side `{lhs_name}` must be a nonterminal")));
            }
            let lhs_id = g.intern_nonterminal(&lhs_name);
            let mut symbols = Vec::new();
            for tok in rhs.split_whitespace() {
                if let Some(word) = tok.strip_prefix('"') {
                    let word = word
                        .strip_suffix('"')
                        .filter(|w| !w.is_empty())
                        .ok_or_else(|| err(format!("bad literal {tok}")))?;
                    symbols.push(Symbol::Word(word.to_string()));
                    continue;
                }
                let (name, features) = g.parse_symbol_parts(tok, &mut vars).map_err(err)?;
                if starts_upper(&name) {
                    let id = g.intern_nonterminal(&name);
                    used_at.entry(id).or_insert(lineno);
                    symbols.push(Symbol::Nonterminal { id, features });
                } else {
                    let category: LexCategory = name
                        .parse()
                        .map_err(|_| err(format!("unknown lexical category `{name}`")))?;
                    if let Some(f) = features.iter().find(|f| f.attr != "num") {
                        return Err(err(format!("lexical categories only carry `num`, not `{}`", f.attr)));
                    }
                    symbols.push(Symbol::Category { category, features });
                }
            }
            if symbols.is_empty() {
                return Err(err("empty productions are not supported".into()));
            }
            if vars.len() > MAX_VARS {
                return Err(err(format!("at most {MAX_VARS} feature variables per production")));
            }
            if g.rules.is_empty() {
                g.start = lhs_id;
            }
            g.rules.push(Rule {
                lhs: lhs_id,
                lhs_features,
                rhs: symbols,
                action,
                opener,
                vars: vars.len(),
            });
        }
        if g.rules.is_empty() {
            return Err(GrammarError { line: 0, detail: "no productions".into() });
        }
        g.by_lhs = vec![Vec::new(); g.nonterminals.len()];
        for (i, r) in g.rules.iter().enumerate() {
            g.by_lhs[r.lhs].push(i);
        }
        for (id, line) in used_at {
            if g.by_lhs[id].is_empty() {
                return Err(GrammarError {
                    line,
                    detail: format!("nonterminal `{}` has no productions", g.nonterminals[id]),
                });
            }
        }
        Ok(g)
    }

    fn parse_symbol_parts(
        &mut self,
        tok: &str,
        vars: &mut Vec<String>,
    ) -> Result<(String, Vec<Feature>), String> {
        let Some(open) = tok.find('[') else {
            return Ok((tok.to_string(), Vec::new()));
        };
        let inner = tok[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| format!("unclosed feature list in `{tok}`"))?;
        let mut features = Vec::new();
        for pair in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (attr, value) = pair
                .split_once('=')
                .ok_or_else(|| format!("feature `{pair}` must be attr=value"))?;
            let value = match value.strip_prefix('?') {
                Some(var) => {
                    let idx = match vars.iter().position(|v| v == var) {
                        Some(i) => i,
                        None => {
                            vars.push(var.to_string());
                            vars.len() - 1
                        }
                    };
                    FeatVal::Var(idx as u8)
                }
                None => FeatVal::Const(self.intern_value(value)),
            };
            features.push(Feature { attr: attr.to_string(), value });
        }
        Ok((tok[..open].to_string(), features))
    }

    fn intern_nonterminal(&mut self, name: &str) -> usize {
        match self.nonterminals.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.nonterminals.push(name.to_string());
                self.nonterminals.len() - 1
            }
        }
    }

    fn intern_value(&mut self, value: &str) -> ValueId {
        match self.values.iter().position(|v| v == value) {
            Some(i) => i as ValueId,
            None => {
                self.values.push(value.to_string());
                (self.values.len() - 1) as ValueId
            }
        }
    }

    pub fn value_id(&self, value: &str) -> Option<ValueId> {
        self.values.iter().position(|v| v == value).map(|i| i as ValueId)
    }

    pub fn value_name(&self, id: ValueId) -> &str {
        &self.values[id as usize]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn rules_for(&self, nonterminal: usize) -> &[usize] {
        &self.by_lhs[nonterminal]
    }

    pub fn nonterminal_name(&self, id: usize) -> &str {
        &self.nonterminals[id]
    }

    pub fn nonterminal_id(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    /// Every literal word used by some production.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().flat_map(|r| {
            r.rhs.iter().filter_map(|s| match s {
                Symbol::Word(w) => Some(w.as_str()),
                _ => None,
            })
        })
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Grammar {
    fn fmt_features(&self, fs: &[Feature]) -> String {
        if fs.is_empty() {
            return String::new();
        }
        let parts: Vec<String> = fs
            .iter()
            .map(|ft| match ft.value {
                FeatVal::Const(v) => format!("{}={}", ft.attr, self.value_name(v)),
                FeatVal::Var(i) => format!("{}=?v{}", ft.attr, i),
            })
            .collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            write!(f, "{}{} ->", self.nonterminals[r.lhs], self.fmt_features(&r.lhs_features))?;
            for s in &r.rhs {
                match s {
                    Symbol::Nonterminal { id, features } => {
                        write!(f, " {}{}", self.nonterminals[*id], self.fmt_features(features))?
                    }
                    Symbol::Category { category, features } => {
                        write!(f, " {}{}", category, self.fmt_features(features))?
                    }
                    Symbol::Word(w) => write!(f, " \"{w}\"")?,
                }
            }
            write!(f, " => {}", r.action)?;
            if r.opener {
                write!(f, " @opener")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
