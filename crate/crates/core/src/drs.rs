//! Discourse representation structures.
//!
//! A sentence's DRS is composed from its derivation tree, driven by the
//! action names attached to grammar rules. Definite noun phrases are left
//! as anaphor terms by [`drs_of`] and bound by [`resolve`] against the
//! accessible referents of the sentence and the preceding discourse.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::chart::{ChartState, Extension, Parser, Tree};
use crate::lexicon::{LexCategory, LexEntry, Number};
use crate::text::join_tokens;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// A proper name, lowercased.
    Const(String),
    /// A discourse referent.
    Ref(String),
    /// An unresolved definite description "the N" at token position `pos`.
    Anaphor { noun: String, pos: usize },
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Ref(c) => f.write_str(c),
            Term::Anaphor { noun, pos } => write!(f, "the_{noun}@{pos}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
    /// Strong negation.
    pub negated: bool,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { pred: pred.into(), args, negated: false }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Atom(Atom),
    /// "is provably ADJ": consumed by the translator.
    Provably(Atom),
    Implication(Box<Drs>, Box<Drs>),
    Naf(Box<Drs>),
    /// A "normally" sentence.
    Default(Box<Drs>, Box<Drs>),
    /// A cancellation axiom, from "abnormally".
    Abnormal(Box<Drs>, Box<Drs>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Referent {
    pub name: String,
    /// Base form of the noun that introduced the referent.
    pub noun: String,
    pub pos: usize,
    /// Per-noun introduction index across the discourse; 0 until resolved.
    pub ordinal: usize,
}

impl Referent {
    pub fn label(&self) -> String {
        format!("{}#{}", self.noun, self.ordinal)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Drs {
    pub referents: Vec<Referent>,
    pub conditions: Vec<Condition>,
}

impl Drs {
    pub fn is_empty(&self) -> bool {
        self.referents.is_empty() && self.conditions.is_empty()
    }

    /// All referents, in every box, in introduction order.
    pub fn all_referents(&self) -> Vec<&Referent> {
        let mut out = Vec::new();
        collect_referents(self, &mut out);
        out.sort_by_key(|r| r.pos);
        out
    }
}

fn collect_referents<'a>(drs: &'a Drs, out: &mut Vec<&'a Referent>) {
    out.extend(&drs.referents);
    for c in &drs.conditions {
        match c {
            Condition::Implication(a, b) | Condition::Default(a, b) | Condition::Abnormal(a, b) => {
                collect_referents(a, out);
                collect_referents(b, out);
            }
            Condition::Naf(d) => collect_referents(d, out),
            Condition::Atom(_) | Condition::Provably(_) => {}
        }
    }
}

impl fmt::Display for Drs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.referents.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&r.name)?;
        }
        f.write_str(" |")?;
        for (i, c) in self.conditions.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            match c {
                Condition::Atom(a) => write!(f, "{a}")?,
                Condition::Provably(a) => write!(f, "provably {a}")?,
                Condition::Implication(a, b) => write!(f, "{a} => {b}")?,
                Condition::Naf(d) => write!(f, "not {d}")?,
                Condition::Default(a, b) => write!(f, "{a} =normally=> {b}")?,
                Condition::Abnormal(a, b) => write!(f, "{a} =abnormally=> {b}")?,
            }
        }
        f.write_str("]")
    }
}

/// A constant that a copular sentence classified by a noun ("Sam is a child").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predication {
    pub constant: String,
    pub noun: String,
    pub pos: usize,
}

/// The compositional meaning of one sentence, before discourse merging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceDrs {
    pub snum: usize,
    pub tokens: Vec<String>,
    pub drs: Drs,
    /// Proper-name uses: constant and token position.
    pub names: Vec<(String, usize)>,
    pub predications: Vec<Predication>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnaphorBinding {
    pub expression: String,
    pub snum: usize,
    pub pos: usize,
    pub antecedent_ref: String,
    pub antecedent_location: (usize, usize),
    /// How the antecedent is shown in paraphrases: `child#1` or a constant.
    pub label: String,
}

/// Something a later definite description can refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub term: Term,
    pub noun: String,
    pub snum: usize,
    pub pos: usize,
    pub label: String,
}

/// A sentence after anaphora resolution, as stored in the discourse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedSentence {
    pub snum: usize,
    pub tokens: Vec<String>,
    pub drs: Drs,
    pub bindings: Vec<AnaphorBinding>,
    /// Entities this sentence makes available to later sentences.
    pub entities: Vec<Entity>,
    /// First use of each proper name: constant, snum, pos.
    pub constants: Vec<(String, usize, usize)>,
}

impl ResolvedSentence {
    pub fn text(&self) -> String {
        join_tokens(&self.tokens)
    }

    pub fn paraphrase(&self) -> String {
        paraphrase(&self.tokens, &self.bindings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DrsError {
    #[error("the sentence is not complete")]
    Incomplete,
    #[error("no accessible antecedent for `{expression}` at sentence {snum}, position {pos}")]
    UnresolvedAnaphor { expression: String, snum: usize, pos: usize },
    #[error("no semantics for rule action `{0}`")]
    Unsupported(String),
}

/// Composes the DRS of a complete sentence.
pub fn drs_of(parser: &Parser, state: &ChartState) -> Result<SentenceDrs, DrsError> {
    let tree = parser.tree(state).ok_or(DrsError::Incomplete)?;
    let mut b = Builder { parser, next_ref: 0, names: Vec::new(), predications: Vec::new() };
    let mut top = Drs::default();
    b.sentence(&tree, &mut top)?;
    Ok(SentenceDrs {
        snum: state.snum(),
        tokens: state.accepted().iter().map(|t| t.surface.clone()).collect(),
        drs: top,
        names: b.names,
        predications: b.predications,
    })
}

struct Builder<'a> {
    parser: &'a Parser,
    next_ref: usize,
    names: Vec<(String, usize)>,
    predications: Vec<Predication>,
}

fn children(tree: &Tree) -> &[std::sync::Arc<Tree>] {
    match tree {
        Tree::Node { children, .. } => children,
        Tree::Leaf { .. } => &[],
    }
}

fn leaf(tree: &Tree) -> Option<(&LexEntry, usize)> {
    match tree {
        Tree::Leaf { entry, index, .. } => Some((entry, index + 1)),
        Tree::Node { .. } => None,
    }
}

/// Token position of the first leaf under `tree`.
fn first_pos(tree: &Tree) -> usize {
    match tree {
        Tree::Leaf { index, .. } => index + 1,
        Tree::Node { children, .. } => first_pos(&children[0]),
    }
}

fn last_leaf(tree: &Tree) -> (&LexEntry, usize) {
    match tree {
        Tree::Leaf { entry, index, .. } => (entry, index + 1),
        Tree::Node { children, .. } => last_leaf(children.last().expect("rules have a right-hand side")),
    }
}

impl Builder<'_> {
    fn action(&self, tree: &Tree) -> &str {
        match tree {
            Tree::Node { rule, .. } => &self.parser.grammar().rule(*rule).action,
            Tree::Leaf { .. } => "leaf",
        }
    }

    fn unsupported<T>(&self, tree: &Tree) -> Result<T, DrsError> {
        Err(DrsError::Unsupported(self.action(tree).to_string()))
    }

    fn new_ref(&mut self, noun: &str, pos: usize, drs: &mut Drs) -> Term {
        self.next_ref += 1;
        let name = format!("X{}", self.next_ref);
        drs.referents.push(Referent { name: name.clone(), noun: noun.to_string(), pos, ordinal: 0 });
        Term::Ref(name)
    }

    fn name(&mut self, entry: &LexEntry, pos: usize) -> Term {
        self.names.push((entry.base.clone(), pos));
        Term::Const(entry.base.clone())
    }

    fn sentence(&mut self, tree: &Tree, top: &mut Drs) -> Result<(), DrsError> {
        let ch = children(tree);
        match self.action(tree) {
            "text" | "pass" => self.sentence(&ch[0], top),
            "facts_one" => self.sentence(&ch[0], top),
            "facts_more" => {
                self.sentence(&ch[0], top)?;
                self.sentence(&ch[2], top)
            }
            "there_is" => self.np(&ch[2], top).map(drop),
            "clause" => self.clause(tree, top, true),
            "universal" => {
                let mut ante = Drs::default();
                let xs = self.np(&ch[0], &mut ante)?;
                let mut cons = Drs::default();
                self.vp(&ch[1], &xs, &mut cons, false)?;
                top.conditions.push(Condition::Implication(Box::new(ante), Box::new(cons)));
                Ok(())
            }
            "universal_default" => {
                let mut ante = Drs::default();
                let xs = self.np(&ch[0], &mut ante)?;
                let mut cons = Drs::default();
                self.verb(&ch[2], &xs, &ch[4], &mut cons, false)?;
                top.conditions.push(Condition::Default(Box::new(ante), Box::new(cons)));
                Ok(())
            }
            "conditional" => {
                let mut ante = Drs::default();
                self.clause(&ch[1], &mut ante, false)?;
                let mut cons = Drs::default();
                let consequent = &ch[3];
                let cond = if self.action(consequent) == "abnormal" {
                    let cc = children(consequent);
                    let xs = self.np(&cc[0], &mut cons)?;
                    self.verb(&cc[2], &xs, &cc[4], &mut cons, false)?;
                    Condition::Abnormal(Box::new(ante), Box::new(cons))
                } else {
                    self.clause(consequent, &mut cons, false)?;
                    Condition::Implication(Box::new(ante), Box::new(cons))
                };
                top.conditions.push(cond);
                Ok(())
            }
            _ => self.unsupported(tree),
        }
    }

    fn clause(&mut self, tree: &Tree, drs: &mut Drs, top: bool) -> Result<(), DrsError> {
        let ch = children(tree);
        if self.action(tree) != "clause" {
            return self.unsupported(tree);
        }
        let xs = self.np(&ch[0], drs)?;
        self.vp(&ch[1], &xs, drs, top)
    }

    /// Noun phrases: adds referents and restrictor conditions to `drs` and
    /// returns the terms denoted (several for a coordination of names).
    fn np(&mut self, tree: &Tree, drs: &mut Drs) -> Result<Vec<Term>, DrsError> {
        let ch = children(tree);
        match self.action(tree) {
            "pass" => self.np(&ch[0], drs),
            "name" => {
                let (e, pos) = leaf(&ch[0]).expect("name rules span one word");
                Ok(vec![self.name(e, pos)])
            }
            "names_last" => {
                let (a, pa) = leaf(&ch[0]).expect("proper name");
                let (b, pb) = leaf(&ch[2]).expect("proper name");
                Ok(vec![self.name(a, pa), self.name(b, pb)])
            }
            "names_more" => {
                let (a, pa) = leaf(&ch[0]).expect("proper name");
                let mut out = vec![self.name(a, pa)];
                out.extend(self.np(&ch[2], drs)?);
                Ok(out)
            }
            "indef_noun" | "quant_noun" => {
                let (noun, _) = last_leaf(tree);
                let x = self.new_ref(&noun.base, first_pos(tree), drs);
                drs.conditions.push(Condition::Atom(Atom::new(noun.base.clone(), vec![x.clone()])));
                Ok(vec![x])
            }
            "indef_rel" | "quant_rel" => {
                // [det] relational-noun "of" Object
                let n = ch.len();
                let (noun, _) = leaf(&ch[n - 3]).expect("relational noun");
                let x = self.new_ref(&noun.base, first_pos(tree), drs);
                let at = drs.conditions.len();
                let ys = self.np(&ch[n - 1], drs)?;
                let atom = Atom::new(noun.base.clone(), vec![x.clone(), ys[0].clone()]);
                drs.conditions.insert(at, Condition::Atom(atom));
                Ok(vec![x])
            }
            "definite" => {
                let (noun, _) = leaf(&ch[1]).expect("common noun");
                Ok(vec![Term::Anaphor { noun: noun.base.clone(), pos: first_pos(tree) }])
            }
            _ => self.unsupported(tree),
        }
    }

    fn vp(&mut self, tree: &Tree, subjects: &[Term], drs: &mut Drs, top: bool) -> Result<(), DrsError> {
        let ch = children(tree);
        match self.action(tree) {
            "pass" => self.vp(&ch[0], subjects, drs, top),
            "copula" => self.pred(&ch[1], subjects, drs, top),
            "verb" => self.verb(&ch[0], subjects, &ch[2], drs, false),
            "negated_verb" => self.verb(&ch[2], subjects, &ch[4], drs, true),
            "provably" => {
                let (adj, _) = leaf(&ch[2]).expect("adjective");
                for s in subjects {
                    drs.conditions.push(Condition::Provably(Atom::new(adj.base.clone(), vec![s.clone()])));
                }
                Ok(())
            }
            _ => self.unsupported(tree),
        }
    }

    fn verb(
        &mut self,
        verb: &Tree,
        subjects: &[Term],
        object: &Tree,
        drs: &mut Drs,
        negated: bool,
    ) -> Result<(), DrsError> {
        let (v, _) = leaf(verb).expect("transitive verb");
        let pred = v.base.clone();
        let at = drs.conditions.len();
        let ys = self.np(object, drs)?;
        let atoms: Vec<Condition> = subjects
            .iter()
            .map(|s| Condition::Atom(Atom { pred: pred.clone(), args: vec![s.clone(), ys[0].clone()], negated }))
            .collect();
        // restrictor conditions of an indefinite object follow the verb atom
        drs.conditions.splice(at..at, atoms);
        Ok(())
    }

    fn pred(&mut self, tree: &Tree, subjects: &[Term], drs: &mut Drs, top: bool) -> Result<(), DrsError> {
        let ch = children(tree);
        match self.action(tree) {
            "pred_noun" => {
                let (noun, pos) = last_leaf(tree);
                for s in subjects {
                    if let (true, Term::Const(c)) = (top, s) {
                        self.predications.push(Predication { constant: c.clone(), noun: noun.base.clone(), pos });
                    }
                    drs.conditions.push(Condition::Atom(Atom::new(noun.base.clone(), vec![s.clone()])));
                }
                Ok(())
            }
            "pred_rel" => {
                let n = ch.len();
                let (noun, _) = leaf(&ch[n - 3]).expect("relational noun");
                let at = drs.conditions.len();
                let ys = self.np(&ch[n - 1], drs)?;
                let atoms: Vec<Condition> = subjects
                    .iter()
                    .map(|s| Condition::Atom(Atom::new(noun.base.clone(), vec![s.clone(), ys[0].clone()])))
                    .collect();
                drs.conditions.splice(at..at, atoms);
                Ok(())
            }
            "pred_adj" => {
                let (adj, _) = leaf(&ch[0]).expect("adjective");
                for s in subjects {
                    drs.conditions.push(Condition::Atom(Atom::new(adj.base.clone(), vec![s.clone()])));
                }
                Ok(())
            }
            _ => self.unsupported(tree),
        }
    }
}

/// The entities the discourse makes available, oldest first.
pub fn discourse_entities(discourse: &[ResolvedSentence]) -> impl Iterator<Item = &Entity> {
    discourse.iter().flat_map(|s| s.entities.iter())
}

/// Binds the anaphors of `sentence` and renames its referents apart from
/// those of the discourse.
pub fn resolve(sentence: &SentenceDrs, discourse: &[ResolvedSentence]) -> Result<ResolvedSentence, DrsError> {
    let offset: usize = discourse.iter().map(|s| s.drs.all_referents().len()).sum();
    let mut noun_counts: HashMap<String, usize> = HashMap::new();
    for s in discourse {
        for r in s.drs.all_referents() {
            *noun_counts.entry(r.noun.clone()).or_default() += 1;
        }
    }
    let mut drs = sentence.drs.clone();
    // rename X1.. to discourse-wide names, numbering per noun
    let mut renames: HashMap<String, (String, String)> = HashMap::new();
    {
        let mut locals: Vec<(usize, String, String)> = sentence
            .drs
            .all_referents()
            .into_iter()
            .map(|r| (r.name[1..].parse().expect("local referent names are X<n>"), r.name.clone(), r.noun.clone()))
            .collect();
        locals.sort();
        for (k, local, noun) in locals {
            let n = noun_counts.entry(noun.clone()).or_default();
            *n += 1;
            renames.insert(local, (format!("X{}", offset + k), format!("{noun}#{n}")));
        }
    }
    rename_box(&mut drs, &renames);

    let snum = sentence.snum;
    let mut outer: Vec<Entity> = discourse_entities(discourse).cloned().collect();
    for p in &sentence.predications {
        outer.push(Entity {
            term: Term::Const(p.constant.clone()),
            noun: p.noun.clone(),
            snum,
            pos: p.pos,
            label: p.constant.clone(),
        });
    }
    let mut r = Resolver { snum, tokens: &sentence.tokens, scope: outer, bindings: Vec::new() };
    r.walk(&mut drs)?;
    let mut bindings = r.bindings;
    bindings.sort_by_key(|b| b.pos);

    let mut entities: Vec<Entity> = drs
        .referents
        .iter()
        .map(|rf| Entity {
            term: Term::Ref(rf.name.clone()),
            noun: rf.noun.clone(),
            snum,
            pos: rf.pos,
            label: rf.label(),
        })
        .collect();
    entities.extend(sentence.predications.iter().map(|p| Entity {
        term: Term::Const(p.constant.clone()),
        noun: p.noun.clone(),
        snum,
        pos: p.pos,
        label: p.constant.clone(),
    }));
    entities.sort_by_key(|e| e.pos);

    let known: BTreeSet<&str> = discourse.iter().flat_map(|s| s.constants.iter().map(|c| c.0.as_str())).collect();
    let mut constants = Vec::new();
    for (c, pos) in &sentence.names {
        if !known.contains(c.as_str()) && !constants.iter().any(|(k, _, _): &(String, usize, usize)| k == c) {
            constants.push((c.clone(), snum, *pos));
        }
    }

    Ok(ResolvedSentence { snum, tokens: sentence.tokens.clone(), drs, bindings, entities, constants })
}

fn rename_box(drs: &mut Drs, renames: &HashMap<String, (String, String)>) {
    for r in &mut drs.referents {
        let (name, label) = &renames[&r.name];
        r.name = name.clone();
        r.ordinal = label.rsplit('#').next().and_then(|k| k.parse().ok()).unwrap_or(0);
    }
    for c in &mut drs.conditions {
        match c {
            Condition::Atom(a) | Condition::Provably(a) => rename_atom(a, renames),
            Condition::Implication(a, b) | Condition::Default(a, b) | Condition::Abnormal(a, b) => {
                rename_box(a, renames);
                rename_box(b, renames);
            }
            Condition::Naf(d) => rename_box(d, renames),
        }
    }
}

fn rename_atom(atom: &mut Atom, renames: &HashMap<String, (String, String)>) {
    for t in &mut atom.args {
        if let Term::Ref(n) = t {
            *n = renames[n.as_str()].0.clone();
        }
    }
}

struct Resolver<'a> {
    snum: usize,
    tokens: &'a [String],
    /// Accessible entities, innermost last.
    scope: Vec<Entity>,
    bindings: Vec<AnaphorBinding>,
}

impl Resolver<'_> {
    fn enter(&mut self, drs: &Drs) {
        for r in &drs.referents {
            self.scope.push(Entity {
                term: Term::Ref(r.name.clone()),
                noun: r.noun.clone(),
                snum: self.snum,
                pos: r.pos,
                label: r.label(),
            });
        }
    }

    fn walk(&mut self, drs: &mut Drs) -> Result<(), DrsError> {
        let mark = self.scope.len();
        self.enter(drs);
        for c in &mut drs.conditions {
            match c {
                Condition::Atom(a) | Condition::Provably(a) => self.atom(a)?,
                Condition::Implication(a, b) | Condition::Default(a, b) | Condition::Abnormal(a, b) => {
                    let inner = self.scope.len();
                    self.enter(a);
                    self.conditions_of(a)?;
                    self.walk(b)?;
                    self.scope.truncate(inner);
                }
                Condition::Naf(d) => self.walk(d)?,
            }
        }
        self.scope.truncate(mark);
        Ok(())
    }

    /// Walks the conditions of a box whose referents are already in scope.
    fn conditions_of(&mut self, drs: &mut Drs) -> Result<(), DrsError> {
        let referents = std::mem::take(&mut drs.referents);
        let r = self.walk(drs);
        drs.referents = referents;
        r
    }

    fn atom(&mut self, atom: &mut Atom) -> Result<(), DrsError> {
        for t in &mut atom.args {
            let Term::Anaphor { noun, pos } = t else { continue };
            let (noun, pos) = (noun.clone(), *pos);
            let best = self
                .scope
                .iter()
                .enumerate()
                .filter(|(_, e)| e.noun == noun && (e.snum < self.snum || e.pos < pos))
                .max_by_key(|(i, e)| (e.snum, e.pos, *i))
                .map(|(_, e)| e.clone());
            let the = self.tokens.get(pos - 1).map_or("the", String::as_str);
            let expression = format!("{} {noun}", the.to_lowercase());
            let Some(e) = best else {
                return Err(DrsError::UnresolvedAnaphor { expression, snum: self.snum, pos });
            };
            let antecedent_ref = match &e.term {
                Term::Const(c) | Term::Ref(c) => c.clone(),
                Term::Anaphor { .. } => unreachable!("entities are resolved terms"),
            };
            self.bindings.push(AnaphorBinding {
                expression,
                snum: self.snum,
                pos,
                antecedent_ref,
                antecedent_location: (e.snum, e.pos),
                label: e.label.clone(),
            });
            *t = e.term.clone();
        }
        Ok(())
    }
}

/// Echoes the sentence with each bound anaphor bracketed as `[the child = child#1]`.
pub fn paraphrase<S: AsRef<str>>(tokens: &[S], bindings: &[AnaphorBinding]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let pos = i + 1;
        if let Some(b) = bindings.iter().find(|b| b.pos == pos) {
            let surface = format!("{} {}", tokens[i].as_ref(), tokens.get(i + 1).map_or("", |t| t.as_ref()));
            out.push(format!("[{surface} = {}]", b.label));
            i += 2;
        } else {
            out.push(tokens[i].as_ref().to_string());
            i += 1;
        }
    }
    join_tokens(&out)
}

/// Definite descriptions that may be typed at the current position and
/// would find an antecedent: `"the " + noun`, sorted and distinct.
pub fn anaphoric_expressions(parser: &Parser, discourse: &[ResolvedSentence], state: &ChartState) -> Vec<String> {
    if state.is_complete() {
        return Vec::new();
    }
    let mut nouns: BTreeSet<String> = discourse_entities(discourse).map(|e| e.noun.clone()).collect();
    nouns.extend(sentence_nouns(parser, state));
    let the = if state.next_pos() == 1 { "The" } else { "the" };
    let Ok(Extension::Accepted(after_the, _)) = parser.extend_word(state, the) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for noun in nouns {
        // the surface of the noun's singular common-noun entry
        let surface = parser.lexicon().entries().iter().find(|e| {
            e.category == LexCategory::CommonNoun && e.base == noun && e.number == Some(Number::Sg)
        });
        let Some(entry) = surface else { continue };
        // "the RN" inside a predicate must continue with "of"; a definite
        // noun phrase never does
        if let Ok(Extension::Accepted(_, la)) = parser.extend_word(&after_the, &entry.surface) {
            if la.forms().any(|f| f != "of") {
                out.push(format!("the {}", entry.surface));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Nouns that can serve as antecedents later in the sentence being
/// parsed: indefinites and universals introduce referents, and a proper
/// name classified by a noun outside a conditional ("Sam is a child and
/// ...") becomes an antecedent too.
fn sentence_nouns(parser: &Parser, state: &ChartState) -> Vec<String> {
    let toks: Vec<String> = state.accepted().iter().map(|t| t.surface.clone()).collect();
    let lex = parser.lexicon();
    let nouns_of = |surface: &str, number: Option<Number>| -> Vec<String> {
        lex.lookup(surface)
            .into_iter()
            .filter(|e| matches!(e.category, LexCategory::CommonNoun | LexCategory::RelationalNoun))
            .filter(|e| number.is_none() || e.number == number)
            .map(|e| e.base.clone())
            .collect()
    };
    let word = |i: usize| toks[i].to_lowercase();
    let is_name = |i: usize| lex.lookup(&toks[i]).iter().any(|e| e.category == LexCategory::ProperName);
    let conditional = toks.first().is_some_and(|t| t.eq_ignore_ascii_case("if"));
    let mut out = Vec::new();
    for i in 0..toks.len() {
        let after_copula = i >= 1 && matches!(word(i - 1).as_str(), "is" | "are");
        let named_subject = i >= 2 && is_name(i - 2) && !conditional;
        match word(i).as_str() {
            "every" if i + 1 < toks.len() => out.extend(nouns_of(&toks[i + 1], None)),
            "a" | "an" if i + 1 < toks.len() => {
                let there_is = after_copula && i >= 2 && word(i - 2) == "there";
                if !after_copula || there_is || named_subject {
                    out.extend(nouns_of(&toks[i + 1], None));
                }
            }
            _ if i == 0 => out.extend(nouns_of(&toks[0], Some(Number::Pl))),
            _ if after_copula && named_subject => out.extend(nouns_of(&toks[i], Some(Number::Pl))),
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{tokenize_sentence, EXAMPLE_SENTENCES};

    fn parse(parser: &Parser, snum: usize, s: &str) -> SentenceDrs {
        let state = parser.parse_tokens(snum, &tokenize_sentence(s)).expect("sentence parses");
        drs_of(parser, &state).unwrap()
    }

    fn discourse(parser: &Parser, sentences: &[&str]) -> Result<Vec<ResolvedSentence>, DrsError> {
        let mut out = Vec::new();
        for (i, s) in sentences.iter().enumerate() {
            let d = parse(parser, i + 1, s);
            out.push(resolve(&d, &out)?);
        }
        Ok(out)
    }

    #[test]
    fn simple_fact() {
        let p = Parser::default_fragment();
        let d = parse(&p, 1, "Sam is a child.");
        assert_eq!(d.drs.to_string(), "[ | child(sam)]");
        assert_eq!(d.names, [("sam".to_string(), 1)]);
    }

    #[test]
    fn universal_with_restrictor_anaphor() {
        let p = Parser::default_fragment();
        let d = parse(&p, 3, EXAMPLE_SENTENCES[2]);
        assert_eq!(d.drs.to_string(), "[ | [X1,X2 | father(X1,X2), child(X2)] => [ | parent(X1,the_child@10)]]");
        let r = resolve(&d, &[]).unwrap();
        assert_eq!(r.drs.to_string(), "[ | [X1,X2 | father(X1,X2), child(X2)] => [ | parent(X1,X2)]]");
        assert_eq!(r.bindings.len(), 1);
        assert_eq!(r.bindings[0].expression, "the child");
        assert_eq!(r.bindings[0].antecedent_location, (3, 4));
        assert_eq!(r.paraphrase(), "Every father of a child is a parent of [the child = child#1].");
    }

    #[test]
    fn strong_negation_and_defaults() {
        let p = Parser::default_fragment();
        assert_eq!(parse(&p, 7, EXAMPLE_SENTENCES[6]).drs.to_string(), "[ | -care(john,sam)]");
        let d = discourse(&p, &EXAMPLE_SENTENCES[..8]).unwrap();
        assert_eq!(
            d[4].drs.to_string(),
            "[ | [X5,X6 | parent(X5,X6), child(X6)] =normally=> [ | care(X5,X6)]]"
        );
        assert_eq!(
            d[5].drs.to_string(),
            "[ | [X7,X8 | parent(X7,X8), child(X8), provably absent(X7)] =abnormally=> [ | care(X7,X8)]]"
        );
        assert_eq!(d[1].drs.to_string(), "[ | father(john,sam), mother(alice,sam)]");
        let paraphrases: Vec<String> = d.iter().map(ResolvedSentence::paraphrase).collect();
        assert_eq!(paraphrases[0], "Sam is a child.");
        assert_eq!(paraphrases[3], "Every mother of a child is a parent of [the child = child#2].");
        assert_eq!(
            paraphrases[5],
            "If a parent of a child is provably absent then [the parent = parent#2] abnormally cares about [the child = child#4]."
        );
        assert_eq!(paraphrases[6], "John does not care about Sam.");
    }

    #[test]
    fn constant_antecedent() {
        let p = Parser::default_fragment();
        let d = discourse(&p, &["Sam is a child.", "The child is absent."]).unwrap();
        assert_eq!(d[1].drs.to_string(), "[ | absent(sam)]");
        assert_eq!(d[1].bindings[0].antecedent_location, (1, 4));
        assert_eq!(d[1].paraphrase(), "[The child = sam] is absent.");
    }

    #[test]
    fn unresolved() {
        let p = Parser::default_fragment();
        let err = discourse(&p, &["The child is absent."]).unwrap_err();
        assert_eq!(err, DrsError::UnresolvedAnaphor { expression: "the child".into(), snum: 1, pos: 1 });
    }

    #[test]
    fn recency_and_accessibility() {
        let p = Parser::default_fragment();
        // the referent inside the universal is not accessible afterwards
        let err = discourse(&p, &["Every child is absent.", "The child is absent."]).unwrap_err();
        assert!(matches!(err, DrsError::UnresolvedAnaphor { .. }));
        let d = discourse(&p, &["There is a child.", "Sam is a child.", "The child is absent."]).unwrap();
        assert_eq!(d[2].drs.to_string(), "[ | absent(sam)]");
        let d = discourse(&p, &["Sam is a child.", "There is a child.", "The child is absent."]).unwrap();
        assert_eq!(d[2].drs.to_string(), "[ | absent(X1)]");
        assert_eq!(d[2].paraphrase(), "[The child = child#1] is absent.");
    }

    #[test]
    fn plural_names_distribute() {
        let p = Parser::default_fragment();
        let d = parse(&p, 1, EXAMPLE_SENTENCES[8]);
        assert_eq!(d.drs.to_string(), "[ | parent(john), parent(thelma), parent(pete)]");
    }

    #[test]
    fn offered_anaphora() {
        let p = Parser::default_fragment();
        let d = discourse(&p, &["Sam is a child."]).unwrap();
        let (s, _) = p.init(2);
        assert_eq!(anaphoric_expressions(&p, &d, &s), ["the child"]);
        assert!(anaphoric_expressions(&p, &[], &s).is_empty());
        let s = p.parse_tokens(2, &["John"]).unwrap();
        assert!(anaphoric_expressions(&p, &d, &s).is_empty());
        let s = p.parse_tokens(1, &["Every", "father", "of", "a", "child", "is", "a", "parent", "of"]).unwrap();
        assert_eq!(anaphoric_expressions(&p, &[], &s), ["the child"]);
        let s = p.parse_tokens(1, &["Sam", "is", "a", "child", "and", "John", "cares", "about"]).unwrap();
        assert_eq!(anaphoric_expressions(&p, &[], &s), ["the child"]);
        let s = p.parse_tokens(1, &["John", ",", "Thelma", "and", "Pete", "are", "parents", "and", "Sam", "is"]).unwrap();
        assert_eq!(anaphoric_expressions(&p, &[], &s), Vec::<String>::new());
        let s = p.parse_tokens(1, &["John", ",", "Thelma", "and", "Pete", "are", "parents", "and"]).unwrap();
        assert_eq!(anaphoric_expressions(&p, &[], &s), ["the parent"]);
    }
}
