//! Incremental Earley chart parser with lookahead generation.
//!
//! The parser consumes one token at a time. After every token the frontier
//! item set is closed under prediction and completion; the terminals that the
//! frontier items expect are the lookahead categories for the next position.
//! Edges carry the derivation built so far, so a complete parse yields its
//! tree without a separate extraction pass.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grammar::{FeatVal, Feature, Grammar, Rule, Symbol, ValueId, MAX_VARS};
use crate::lexicon::{capitalize, LexCategory, LexEntry, Lexicon, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Punct,
    Eos,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub snum: usize,
    pub pos: usize,
    pub kind: TokenKind,
}

impl Token {
    pub fn new(surface: impl Into<String>, snum: usize, pos: usize) -> Token {
        let surface = surface.into();
        let kind = match surface.as_str() {
            "." | "?" => TokenKind::Eos,
            "," => TokenKind::Punct,
            _ => TokenKind::Word,
        };
        Token { surface, snum, pos, kind }
    }
}

/// A category heading in the lookahead menus. Ordered by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LookaheadCategory {
    Lex(LexCategory),
    EndOfSentence,
}

impl LookaheadCategory {
    pub fn name(self) -> &'static str {
        match self {
            LookaheadCategory::Lex(c) => c.name(),
            LookaheadCategory::EndOfSentence => "end-of-sentence",
        }
    }

    pub fn from_name(name: &str) -> Option<LookaheadCategory> {
        if name == "end-of-sentence" {
            return Some(LookaheadCategory::EndOfSentence);
        }
        name.parse().ok().map(LookaheadCategory::Lex)
    }
}

impl Ord for LookaheadCategory {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name().cmp(other.name())
    }
}

impl PartialOrd for LookaheadCategory {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LookaheadCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for LookaheadCategory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for LookaheadCategory {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        LookaheadCategory::from_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown category `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookaheadItem {
    #[serde(rename = "cat")]
    pub category: LookaheadCategory,
    pub forms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookaheadSet {
    pub pos: usize,
    pub items: Vec<LookaheadItem>,
    pub ana: Vec<String>,
}

impl LookaheadSet {
    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.items.iter().flat_map(|i| i.forms.iter().map(String::as_str))
    }

    pub fn forms_of(&self, category: LookaheadCategory) -> &[String] {
        self.items
            .iter()
            .find(|i| i.category == category)
            .map_or(&[], |i| i.forms.as_slice())
    }

    pub fn contains_form(&self, form: &str) -> bool {
        self.forms().any(|f| f == form)
    }

    /// True if `word` is a listed form or the first word of a multi-word form.
    pub fn admits_word(&self, word: &str) -> bool {
        self.forms()
            .any(|f| f == word || f.split(' ').next() == Some(word))
    }

    pub fn categories(&self) -> impl Iterator<Item = LookaheadCategory> + '_ {
        self.items.iter().map(|i| i.category)
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Derivation tree of a (partial) parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf { index: usize, surface: String, entry: LexEntry },
    Node { rule: usize, children: Vec<Arc<Tree>> },
}

#[derive(Debug)]
struct Children {
    last: Arc<Tree>,
    prev: Option<Arc<Children>>,
}

fn collect_children(list: &Option<Arc<Children>>) -> Vec<Arc<Tree>> {
    let mut out = Vec::new();
    let mut cur = list.as_ref();
    while let Some(c) = cur {
        out.push(c.last.clone());
        cur = c.prev.as_ref();
    }
    out.reverse();
    out
}

type Bindings = [Option<ValueId>; MAX_VARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeKey {
    rule: u32,
    dot: u32,
    origin: u32,
    bindings: Bindings,
}

#[derive(Debug, Clone)]
struct Edge {
    key: EdgeKey,
    children: Option<Arc<Children>>,
}

impl Edge {
    fn rule(&self) -> usize {
        self.key.rule as usize
    }
    fn dot(&self) -> usize {
        self.key.dot as usize
    }
    fn origin(&self) -> usize {
        self.key.origin as usize
    }
}

#[derive(Debug, Default)]
struct ItemSet {
    edges: Vec<Edge>,
    seen: HashSet<EdgeKey>,
}

impl ItemSet {
    fn push(&mut self, edge: Edge) -> bool {
        if self.seen.insert(edge.key) {
            self.edges.push(edge);
            true
        } else {
            false
        }
    }
}

/// Parser state for the sentence being entered.
#[derive(Debug, Clone)]
pub struct ChartState {
    snum: usize,
    accepted: Vec<Token>,
    sets: Vec<Arc<ItemSet>>,
    complete: bool,
}

impl ChartState {
    pub fn snum(&self) -> usize {
        self.snum
    }

    pub fn accepted(&self) -> &[Token] {
        &self.accepted
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The position the next token must carry.
    pub fn next_pos(&self) -> usize {
        self.accepted.len() + 1
    }

    /// Canonical description of the frontier, for equivalence checks.
    pub fn frontier_signature(&self) -> Vec<(u32, u32, u32, Bindings)> {
        let mut v: Vec<_> = self
            .sets
            .last()
            .map(|s| s.edges.iter().map(|e| (e.key.rule, e.key.dot, e.key.origin, e.key.bindings)).collect())
            .unwrap_or_default();
        v.sort();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    UnknownWord,
    NoParse,
}

#[derive(Debug, Clone)]
pub enum Extension {
    Accepted(ChartState, LookaheadSet),
    Rejected(RejectReason),
}

impl Extension {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Extension::Accepted(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("token position {got} out of order, expected {expected}")]
    OutOfOrder { expected: usize, got: usize },
    #[error("the sentence is already complete")]
    SentenceComplete,
    #[error("cannot retract to position {to_pos}: only {accepted} tokens accepted")]
    BadPosition { to_pos: usize, accepted: usize },
    #[error("grammar word `{0}` is missing from the lexicon")]
    MissingWord(String),
}

/// A grammar paired with a lexicon snapshot.
#[derive(Debug, Clone)]
pub struct Parser {
    grammar: Arc<Grammar>,
    lexicon: Arc<Lexicon>,
}

impl Parser {
    pub fn new(grammar: Arc<Grammar>, lexicon: Arc<Lexicon>) -> Result<Parser, ChartError> {
        for w in grammar.words() {
            if !lexicon.entries().iter().any(|e| e.surface == w) {
                return Err(ChartError::MissingWord(w.to_string()));
            }
        }
        Ok(Parser { grammar, lexicon })
    }

    pub fn default_fragment() -> Parser {
        Parser::new(Arc::new(Grammar::default_fragment()), Arc::new(Lexicon::seed()))
            .expect("seed lexicon covers the built-in grammar")
    }

    pub fn grammar(&self) -> &Arc<Grammar> {
        &self.grammar
    }

    pub fn lexicon(&self) -> &Arc<Lexicon> {
        &self.lexicon
    }

    /// Same grammar, new lexicon snapshot.
    pub fn with_lexicon(&self, lexicon: Arc<Lexicon>) -> Parser {
        Parser { grammar: self.grammar.clone(), lexicon }
    }

    pub fn init(&self, snum: usize) -> (ChartState, LookaheadSet) {
        let mut set = ItemSet::default();
        for &r in self.grammar.rules_for(self.grammar.start()) {
            set.push(Edge {
                key: EdgeKey { rule: r as u32, dot: 0, origin: 0, bindings: [None; MAX_VARS] },
                children: None,
            });
        }
        self.close(&mut set, 0, &[]);
        let state = ChartState { snum, accepted: Vec::new(), sets: vec![Arc::new(set)], complete: false };
        let la = self.lookahead(&state);
        (state, la)
    }

    pub fn extend(&self, state: &ChartState, token: &Token) -> Result<Extension, ChartError> {
        if state.complete {
            return Err(ChartError::SentenceComplete);
        }
        if token.pos != state.next_pos() {
            return Err(ChartError::OutOfOrder { expected: state.next_pos(), got: token.pos });
        }
        let entries = self.lexicon.lookup(&token.surface);
        if entries.is_empty() {
            return Ok(Extension::Rejected(RejectReason::UnknownWord));
        }
        let initial = token.pos == 1;
        // common words are capitalised sentence-initially and only there
        let entries: Vec<&LexEntry> = entries
            .into_iter()
            .filter(|e| {
                if initial && e.category != LexCategory::ProperName {
                    capitalize(&e.surface) == token.surface
                } else {
                    e.surface == token.surface
                }
            })
            .collect();
        let index = state.accepted.len();
        let frontier = state.sets.last().expect("chart always has a set");
        let mut next = ItemSet::default();
        for edge in &frontier.edges {
            let rule = self.grammar.rule(edge.rule());
            let Some(sym) = rule.rhs.get(edge.dot()) else { continue };
            match sym {
                Symbol::Nonterminal { .. } => {}
                Symbol::Word(w) => {
                    let Some(entry) = entries.iter().find(|e| &e.surface == w) else { continue };
                    next.push(self.advance(edge, edge.key.bindings, self.leaf(index, token, entry)));
                }
                Symbol::Category { category, features } => {
                    for entry in entries.iter().filter(|e| e.category == *category) {
                        let mut bindings = edge.key.bindings;
                        if self.unify_entry(features, entry, &mut bindings) {
                            next.push(self.advance(edge, bindings, self.leaf(index, token, entry)));
                        }
                    }
                }
            }
        }
        if next.edges.is_empty() {
            return Ok(Extension::Rejected(RejectReason::NoParse));
        }
        self.close(&mut next, index + 1, &state.sets);
        let complete = token.kind == TokenKind::Eos && self.has_complete_parse(&next);
        let mut sets = state.sets.clone();
        sets.push(Arc::new(next));
        let mut accepted = state.accepted.clone();
        accepted.push(token.clone());
        let new_state = ChartState { snum: state.snum, accepted, sets, complete };
        let la = self.lookahead(&new_state);
        Ok(Extension::Accepted(new_state, la))
    }

    /// Convenience wrapper: extend with a surface form at the next position.
    pub fn extend_word(&self, state: &ChartState, surface: &str) -> Result<Extension, ChartError> {
        self.extend(state, &Token::new(surface, state.snum, state.next_pos()))
    }

    /// Replays the first `to_pos` accepted tokens from a fresh chart.
    pub fn retract(&self, state: &ChartState, to_pos: usize) -> Result<(ChartState, LookaheadSet), ChartError> {
        if to_pos > state.accepted.len() {
            return Err(ChartError::BadPosition { to_pos, accepted: state.accepted.len() });
        }
        let (mut s, mut la) = self.init(state.snum);
        for tok in &state.accepted[..to_pos] {
            match self.extend(&s, tok)? {
                Extension::Accepted(next, next_la) => {
                    s = next;
                    la = next_la;
                }
                Extension::Rejected(_) => unreachable!("replaying accepted tokens cannot fail"),
            }
        }
        Ok((s, la))
    }

    /// Parses a whole token sequence from scratch.
    pub fn parse_tokens<S: AsRef<str>>(&self, snum: usize, words: &[S]) -> Result<ChartState, (usize, RejectReason)> {
        let (mut s, _) = self.init(snum);
        for (i, w) in words.iter().enumerate() {
            match self.extend_word(&s, w.as_ref()) {
                Ok(Extension::Accepted(next, _)) => s = next,
                Ok(Extension::Rejected(r)) => return Err((i + 1, r)),
                Err(_) => return Err((i + 1, RejectReason::NoParse)),
            }
        }
        Ok(s)
    }

    pub fn lookahead(&self, state: &ChartState) -> LookaheadSet {
        let pos = state.next_pos();
        let mut items: BTreeMap<LookaheadCategory, BTreeSet<String>> = BTreeMap::new();
        if !state.complete {
            let initial = pos == 1;
            let frontier = state.sets.last().expect("chart always has a set");
            for edge in &frontier.edges {
                let rule = self.grammar.rule(edge.rule());
                let Some(sym) = rule.rhs.get(edge.dot()) else { continue };
                match sym {
                    Symbol::Nonterminal { .. } => {}
                    Symbol::Word(w) => {
                        let (cat, form) = if rule.opener && edge.dot() == 0 {
                            let run: Vec<&str> = rule
                                .rhs
                                .iter()
                                .map_while(|s| match s {
                                    Symbol::Word(w) => Some(w.as_str()),
                                    _ => None,
                                })
                                .collect();
                            (LookaheadCategory::Lex(LexCategory::SentenceOpener), run.join(" "))
                        } else {
                            let entry = self
                                .lexicon
                                .entries()
                                .iter()
                                .find(|e| &e.surface == w)
                                .expect("grammar words are checked against the lexicon");
                            (display_category(entry), w.clone())
                        };
                        let form = if initial { capitalize(&form) } else { form };
                        items.entry(cat).or_default().insert(form);
                    }
                    Symbol::Category { category, features } => {
                        for entry in self.lexicon.entries().iter().filter(|e| e.category == *category) {
                            let mut b = edge.key.bindings;
                            if !self.unify_entry(features, entry, &mut b) {
                                continue;
                            }
                            let form = if initial && entry.category != LexCategory::ProperName {
                                capitalize(&entry.surface)
                            } else {
                                entry.surface.clone()
                            };
                            items.entry(display_category(entry)).or_default().insert(form);
                        }
                    }
                }
            }
        }
        LookaheadSet {
            pos,
            items: items
                .into_iter()
                .map(|(category, forms)| LookaheadItem { category, forms: forms.into_iter().collect() })
                .collect(),
            ana: Vec::new(),
        }
    }

    /// The derivation of a complete sentence.
    pub fn tree(&self, state: &ChartState) -> Option<Arc<Tree>> {
        if !state.complete {
            return None;
        }
        let last = state.sets.last()?;
        last.edges
            .iter()
            .find(|e| self.is_complete_start(e))
            .map(|e| {
                Arc::new(Tree::Node { rule: e.rule(), children: collect_children(&e.children) })
            })
    }

    fn has_complete_parse(&self, set: &ItemSet) -> bool {
        set.edges.iter().any(|e| self.is_complete_start(e))
    }

    fn is_complete_start(&self, e: &Edge) -> bool {
        let rule = self.grammar.rule(e.rule());
        rule.lhs == self.grammar.start() && e.origin() == 0 && e.dot() == rule.rhs.len()
    }

    fn leaf(&self, index: usize, token: &Token, entry: &LexEntry) -> Arc<Tree> {
        Arc::new(Tree::Leaf { index, surface: token.surface.clone(), entry: entry.clone() })
    }

    fn advance(&self, edge: &Edge, bindings: Bindings, child: Arc<Tree>) -> Edge {
        Edge {
            key: EdgeKey { dot: edge.key.dot + 1, bindings, ..edge.key },
            children: Some(Arc::new(Children { last: child, prev: edge.children.clone() })),
        }
    }

    fn number_value(&self, n: Number) -> ValueId {
        self.grammar.value_id(n.name()).expect("number values are interned")
    }

    /// Unifies the `num` constraint of a category symbol with a lexical entry.
    fn unify_entry(&self, features: &[Feature], entry: &LexEntry, bindings: &mut Bindings) -> bool {
        let value = entry.number.map(|n| self.number_value(n));
        features.iter().all(|f| unify(f.value, value, bindings))
    }

    /// Closes `set` (at chart index `k`) under prediction and completion.
    fn close(&self, set: &mut ItemSet, k: usize, earlier: &[Arc<ItemSet>]) {
        let mut i = 0;
        while i < set.edges.len() {
            let edge = set.edges[i].clone();
            i += 1;
            let rule = self.grammar.rule(edge.rule());
            match rule.rhs.get(edge.dot()) {
                Some(Symbol::Nonterminal { id, features }) => {
                    for &r in self.grammar.rules_for(*id) {
                        if let Some(bindings) = predict_bindings(features, &edge.key.bindings, self.grammar.rule(r)) {
                            set.push(Edge {
                                key: EdgeKey { rule: r as u32, dot: 0, origin: k as u32, bindings },
                                children: None,
                            });
                        }
                    }
                }
                Some(_) => {}
                None => {
                    // complete: origin < k because there are no empty productions
                    let origin = edge.origin();
                    let values = lhs_values(rule, &edge.key.bindings);
                    let tree = Arc::new(Tree::Node { rule: edge.rule(), children: collect_children(&edge.children) });
                    let parents = &earlier[origin];
                    for parent in &parents.edges {
                        let prule = self.grammar.rule(parent.rule());
                        let Some(Symbol::Nonterminal { id, features }) = prule.rhs.get(parent.dot()) else {
                            continue;
                        };
                        if *id != rule.lhs {
                            continue;
                        }
                        let mut bindings = parent.key.bindings;
                        let ok = features.iter().all(|f| {
                            let child = values.iter().find(|(a, _)| *a == f.attr).and_then(|(_, v)| *v);
                            unify(f.value, child, &mut bindings)
                        });
                        if ok {
                            set.push(self.advance(parent, bindings, tree.clone()));
                        }
                    }
                }
            }
        }
    }
}

fn display_category(entry: &LexEntry) -> LookaheadCategory {
    match (entry.category, entry.surface.as_str()) {
        (LexCategory::Punctuation, "." | "?") => LookaheadCategory::EndOfSentence,
        (c, _) => LookaheadCategory::Lex(c),
    }
}

fn resolve(v: FeatVal, bindings: &Bindings) -> Option<ValueId> {
    match v {
        FeatVal::Const(c) => Some(c),
        FeatVal::Var(i) => bindings[i as usize],
    }
}

/// Unifies a feature slot of the current edge with an incoming value.
fn unify(slot: FeatVal, incoming: Option<ValueId>, bindings: &mut Bindings) -> bool {
    match (slot, incoming) {
        (_, None) => true,
        (FeatVal::Const(c), Some(v)) => c == v,
        (FeatVal::Var(i), Some(v)) => match bindings[i as usize] {
            Some(b) => b == v,
            None => {
                bindings[i as usize] = Some(v);
                true
            }
        },
    }
}

fn lhs_values<'r>(rule: &'r Rule, bindings: &Bindings) -> Vec<(&'r str, Option<ValueId>)> {
    rule.lhs_features.iter().map(|f| (f.attr.as_str(), resolve(f.value, bindings))).collect()
}

/// Bindings of a predicted production, or `None` if its left-hand side
/// clashes with what the predicting edge demands.
fn predict_bindings(demand: &[Feature], parent: &Bindings, rule: &Rule) -> Option<Bindings> {
    let mut bindings = [None; MAX_VARS];
    for f in &rule.lhs_features {
        let wanted = demand.iter().find(|d| d.attr == f.attr).and_then(|d| resolve(d.value, parent));
        if !unify(f.value, wanted, &mut bindings) {
            return None;
        }
    }
    Some(bindings)
}
