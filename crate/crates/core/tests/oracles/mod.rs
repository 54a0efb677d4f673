//! Independent reference implementations the production code is checked
//! against. None of these share code with the crate beyond its data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use peng::asp::{AspProgram, AspRule, Literal, Sign};
use peng::chart::{Extension, LookaheadSet, Parser};
use peng::grammar::{FeatVal, Feature, Symbol};
use peng::solver::GroundProgram;
use peng::{ChartState, Grammar, LexCategory, LexEntry, Lexicon};
use rand::Rng;

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// Recognizer: the grammar with its number feature instantiated to sg/pl,
// run as a nondeterministic pushdown automaton. A configuration is the set
// of pending symbol stacks (top last); it fixes every possible continuation.

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GSym {
    Nt(usize, Option<u16>),
    Word(String),
    Cat(LexCategory, Option<u16>),
}

#[derive(Debug)]
struct GRule {
    lhs: usize,
    lhs_num: Option<u16>,
    rhs: Vec<GSym>,
}

pub type Config = BTreeSet<Vec<GSym>>;

pub struct Recognizer {
    rules: Vec<GRule>,
    entries: Vec<LexEntry>,
    values: HashMap<&'static str, u16>,
    start: usize,
}

fn num_of(features: &[Feature], assignment: &[u16]) -> Option<u16> {
    assert!(features.iter().all(|f| f.attr == "num"), "oracle knows only the number feature");
    features.first().map(|f| match f.value {
        FeatVal::Const(c) => c,
        FeatVal::Var(i) => assignment[i as usize],
    })
}

fn upper_first(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

impl Recognizer {
    pub fn new(grammar: &Grammar, lexicon: &Lexicon) -> Recognizer {
        let sg = grammar.value_id("sg").unwrap();
        let pl = grammar.value_id("pl").unwrap();
        let mut rules = Vec::new();
        for r in grammar.rules() {
            for bits in 0..(1u32 << r.vars) {
                let assignment: Vec<u16> = (0..r.vars).map(|i| if bits >> i & 1 == 1 { pl } else { sg }).collect();
                let rhs = r
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::Nonterminal { id, features } => GSym::Nt(*id, num_of(features, &assignment)),
                        Symbol::Category { category, features } => GSym::Cat(*category, num_of(features, &assignment)),
                        Symbol::Word(w) => GSym::Word(w.clone()),
                    })
                    .collect();
                rules.push(GRule { lhs: r.lhs, lhs_num: num_of(&r.lhs_features, &assignment), rhs });
            }
        }
        let values = HashMap::from([("sg", sg), ("pl", pl)]);
        Recognizer { rules, entries: lexicon.entries().to_vec(), values, start: grammar.start() }
    }

    fn expand(&self, stack: Vec<GSym>, out: &mut Config) {
        match stack.last() {
            Some(&GSym::Nt(id, demand)) => {
                for r in self.rules.iter().filter(|r| r.lhs == id) {
                    if let (Some(d), Some(v)) = (demand, r.lhs_num) {
                        if d != v {
                            continue;
                        }
                    }
                    let mut next = stack[..stack.len() - 1].to_vec();
                    next.extend(r.rhs.iter().rev().cloned());
                    self.expand(next, out);
                }
            }
            _ => {
                out.insert(stack);
            }
        }
    }

    pub fn initial(&self) -> Config {
        let mut out = Config::new();
        self.expand(vec![GSym::Nt(self.start, None)], &mut out);
        out
    }

    /// How `token` is spelt as an occurrence of `surface` at `pos`.
    fn spelt(&self, surface: &str, proper: bool, pos: usize) -> String {
        if pos == 1 && !proper {
            upper_first(surface)
        } else {
            surface.to_string()
        }
    }

    fn matches(&self, sym: &GSym, token: &str, pos: usize) -> bool {
        match sym {
            GSym::Word(w) => self.spelt(w, false, pos) == token,
            GSym::Cat(cat, num) => self.entries.iter().any(|e| {
                e.category == *cat
                    && self.spelt(&e.surface, *cat == LexCategory::ProperName, pos) == token
                    && match (num, e.number) {
                        (Some(v), Some(n)) => self.values[n.name()] == *v,
                        _ => true,
                    }
            }),
            GSym::Nt(..) => false,
        }
    }

    pub fn step(&self, config: &Config, token: &str, pos: usize) -> Config {
        let mut out = Config::new();
        for stack in config {
            if let Some(top) = stack.last() {
                if self.matches(top, token, pos) {
                    self.expand(stack[..stack.len() - 1].to_vec(), &mut out);
                }
            }
        }
        out
    }

    pub fn is_complete(config: &Config) -> bool {
        config.iter().any(|s| s.is_empty())
    }

    /// Whether `tokens` is a prefix of some sentence.
    pub fn viable(&self, tokens: &[&str]) -> Option<Config> {
        let mut c = self.initial();
        for (i, t) in tokens.iter().enumerate() {
            c = self.step(&c, t, i + 1);
            if c.is_empty() {
                return None;
            }
        }
        Some(c)
    }
}

// ---------------------------------------------------------------------------
// Stable models by definition: every consistent subset of the atoms that is
// a minimal model of its own reduct.

fn is_model(rules: &[(Vec<usize>, Vec<usize>)], m: u32) -> bool {
    rules.iter().all(|(head, pos)| {
        !pos.iter().all(|&a| m >> a & 1 == 1) || head.iter().any(|&a| m >> a & 1 == 1)
    })
}

/// `(head, positive body)` of the rules whose naf literals `m` does not contain.
fn reduct(g: &GroundProgram, m: u32) -> Vec<(Vec<usize>, Vec<usize>)> {
    g.rules
        .iter()
        .filter(|r| r.naf.iter().all(|&a| m >> a & 1 == 0))
        .map(|r| (r.head.clone(), r.pos.clone()))
        .collect()
}

pub fn is_stable_by_definition(g: &GroundProgram, m: u32) -> bool {
    let consistent = g.atoms.iter().enumerate().all(|(i, l)| {
        m >> i & 1 == 0 || g.atom_index(&l.complement()).is_none_or(|j| m >> j & 1 == 0)
    });
    if !consistent {
        return false;
    }
    let red = reduct(g, m);
    if !is_model(&red, m) {
        return false;
    }
    // no proper subset of m satisfies the reduct
    let mut sub = m;
    while sub != 0 {
        sub = (sub - 1) & m;
        if is_model(&red, sub) {
            return false;
        }
    }
    true
}

pub fn literal_strings(g: &GroundProgram, m: u32) -> BTreeSet<String> {
    (0..g.atoms.len()).filter(|&i| m >> i & 1 == 1).map(|i| g.atoms[i].to_string()).collect()
}

/// All stable models, as sets of rendered literals.
pub fn brute_force_models(g: &GroundProgram) -> BTreeSet<BTreeSet<String>> {
    assert!(g.atoms.len() <= 20);
    (0..1u32 << g.atoms.len())
        .filter(|&m| is_stable_by_definition(g, m))
        .map(|m| literal_strings(g, m))
        .collect()
}

pub fn literal(s: &str) -> Literal {
    match s.strip_prefix('-') {
        Some(p) => Literal { sign: Sign::StrongNeg, pred: p.into(), args: vec![] },
        None => Literal { sign: Sign::Pos, pred: s.into(), args: vec![] },
    }
}

pub fn rule(head: &[&str], pos: &[&str], naf: &[&str]) -> AspRule {
    AspRule {
        head: head.iter().map(|s| literal(s)).collect(),
        body_pos: pos.iter().map(|s| literal(s)).collect(),
        body_naf: naf.iter().map(|s| literal(s)).collect(),
    }
}

// ---------------------------------------------------------------------------
// Spelling: forms one edit away, and edit distance by exhaustive search.

pub fn one_edits(s: &str, alphabet: &[char]) -> BTreeSet<String> {
    let c: Vec<char> = s.chars().collect();
    let mut out = BTreeSet::new();
    for i in 0..=c.len() {
        for &a in alphabet {
            let mut v = c.clone();
            v.insert(i, a);
            out.insert(v.into_iter().collect());
        }
    }
    for i in 0..c.len() {
        let mut v = c.clone();
        v.remove(i);
        out.insert(v.into_iter().collect::<String>());
        for &a in alphabet {
            let mut v = c.clone();
            v[i] = a;
            out.insert(v.into_iter().collect());
        }
        if i + 1 < c.len() {
            let mut v = c.clone();
            v.swap(i, i + 1);
            out.insert(v.into_iter().collect());
        }
    }
    out.remove(s);
    out
}

/// Distances up to `k` from `s`, by breadth-first search over single edits.
pub fn edit_ball(s: &str, k: usize, alphabet: &[char]) -> HashMap<String, usize> {
    let mut dist = HashMap::from([(s.to_string(), 0)]);
    let mut frontier = vec![s.to_string()];
    for d in 1..=k {
        let mut next = Vec::new();
        for x in &frontier {
            for y in one_edits(x, alphabet) {
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    dist
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of the fragment, checking the chart parser against
// the recognizer and its own lookahead at every reachable configuration.
// Prefixes reaching the same configuration have the same continuations, so
// each configuration is expanded once per remaining length.

#[derive(Debug, Default)]
pub struct Exploration {
    /// Configuration -> longest remaining length it was explored with.
    pub visited: HashMap<Config, usize>,
    pub checks: usize,
    pub failures: Vec<String>,
}

pub struct Explorer<'a> {
    pub parser: &'a Parser,
    pub recognizer: Recognizer,
    /// Every lexicon surface, plus capitalised forms of common words.
    pub universe: Vec<String>,
    pub bound: usize,
}

impl<'a> Explorer<'a> {
    pub fn new(parser: &'a Parser, bound: usize) -> Explorer<'a> {
        let recognizer = Recognizer::new(parser.grammar(), parser.lexicon());
        let mut universe: BTreeSet<String> = BTreeSet::new();
        for e in parser.lexicon().entries() {
            universe.insert(e.surface.clone());
            universe.insert(upper_first(&e.surface));
        }
        Explorer { parser, recognizer, universe: universe.into_iter().collect(), bound }
    }

    pub fn run(&self) -> Exploration {
        let mut ex = Exploration::default();
        let (state, la) = self.parser.init(1);
        let config = self.recognizer.initial();
        self.visit(&config, &state, &la, 0, &mut ex);
        ex
    }

    fn accepts(&self, state: &ChartState, word: &str) -> Option<(ChartState, LookaheadSet)> {
        match self.parser.extend_word(state, word).expect("positions are consecutive") {
            Extension::Accepted(s, la) => Some((s, la)),
            Extension::Rejected(_) => None,
        }
    }

    fn visit(&self, config: &Config, state: &ChartState, la: &LookaheadSet, depth: usize, ex: &mut Exploration) {
        let remaining = self.bound - depth;
        if ex.visited.get(config).is_some_and(|&r| r >= remaining) {
            return;
        }
        ex.visited.insert(config.clone(), remaining);
        let pos = depth + 1;
        let prefix = || state.accepted().iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");

        // soundness: each listed form, word by word, is accepted
        for form in la.forms() {
            ex.checks += 1;
            let mut s = state.clone();
            for w in form.split(' ') {
                match self.accepts(&s, w) {
                    Some((next, _)) => s = next,
                    None => {
                        ex.failures.push(format!("listed `{form}` rejected after `{}`", prefix()));
                        break;
                    }
                }
            }
        }

        let mut children: Vec<(Config, ChartState, LookaheadSet)> = Vec::new();
        for u in &self.universe {
            ex.checks += 1;
            let next_config = self.recognizer.step(config, u, pos);
            let chart = self.accepts(state, u);
            match (&chart, next_config.is_empty()) {
                (Some(_), true) => ex.failures.push(format!("`{u}` accepted after `{}` but not viable", prefix())),
                (None, false) => ex.failures.push(format!("`{u}` rejected after `{}` but viable", prefix())),
                _ => {}
            }
            let Some((next, next_la)) = chart else { continue };
            // completeness: what is accepted was offered
            if !la.admits_word(u) {
                ex.failures.push(format!("`{u}` accepted after `{}` but not listed", prefix()));
            }
            if next.is_complete() != Recognizer::is_complete(&next_config) {
                ex.failures.push(format!("completion of `{} {u}` disagrees", prefix()));
            }
            if !next_config.is_empty() && !children.iter().any(|(c, ..)| *c == next_config) {
                children.push((next_config, next, next_la));
            }
        }
        for (c, s, l) in children {
            if s.is_complete() {
                ex.visited.entry(c).or_insert(0);
            } else if depth + 1 < self.bound {
                self.visit(&c, &s, &l, depth + 1, ex);
            }
        }
    }

    /// The class representative standing for each token of `sentence`.
    pub fn representatives(classes: &[Vec<String>], sentence: &str) -> Vec<String> {
        peng::text::tokenize_sentence(sentence)
            .iter()
            .map(|t| classes.iter().find(|c| c.contains(t)).map_or_else(|| t.clone(), |c| c[0].clone()))
            .collect()
    }

    /// Whether every prefix of `sentence` was reached, ending complete.
    pub fn contains(&self, ex: &Exploration, sentence: &str) -> bool {
        let tokens = peng::text::tokenize_sentence(sentence);
        let mut c = self.recognizer.initial();
        for (i, t) in tokens.iter().enumerate() {
            if !ex.visited.contains_key(&c) {
                return false;
            }
            c = self.recognizer.step(&c, t, i + 1);
        }
        Recognizer::is_complete(&c) && ex.visited.contains_key(&c)
    }

    /// Number of distinct sentences of at most `bound` tokens.
    pub fn count_sentences(&self) -> u128 {
        let mut memo: HashMap<(Config, usize), u128> = HashMap::new();
        self.count(&self.recognizer.initial(), 1, &mut memo)
    }

    fn count(&self, config: &Config, pos: usize, memo: &mut HashMap<(Config, usize), u128>) -> u128 {
        if pos > self.bound {
            return 0;
        }
        let key = (config.clone(), self.bound - pos);
        if let Some(&n) = memo.get(&key) {
            return n;
        }
        let mut n = 0;
        for u in &self.universe {
            let next = self.recognizer.step(config, u, pos);
            if Recognizer::is_complete(&next) {
                n += 1;
            } else if !next.is_empty() {
                n += self.count(&next, pos + 1, memo);
            }
        }
        memo.insert(key, n);
        n
    }
}

#[derive(Debug, Default)]
pub struct Enumeration {
    pub prefixes: usize,
    pub sentences: Vec<Vec<String>>,
    pub failures: Vec<String>,
}

impl Explorer<'_> {
    /// Tokens grouped by their transitions over every reached configuration;
    /// members of a class are interchangeable everywhere.
    pub fn classes(&self, ex: &Exploration) -> Vec<Vec<String>> {
        let initial = self.recognizer.initial();
        let mut configs: Vec<&Config> = ex.visited.keys().collect();
        configs.sort();
        let mut by_sig: BTreeMap<Vec<Config>, Vec<String>> = BTreeMap::new();
        for u in &self.universe {
            let sig: Vec<Config> = configs
                .iter()
                .map(|c| self.recognizer.step(c, u, if **c == initial { 1 } else { 2 }))
                .collect();
            by_sig.entry(sig).or_default().push(u.clone());
        }
        by_sig.into_iter().filter(|(sig, _)| sig.iter().any(|c| !c.is_empty())).map(|(_, v)| v).collect()
    }

    /// Every sentence of at most `bound` tokens over one representative per
    /// class, each prefix parsed afresh from its predecessor's chart and
    /// checked against the whole token universe.
    pub fn enumerate(&self, classes: &[Vec<String>]) -> Enumeration {
        let mut en = Enumeration::default();
        let reps: Vec<&str> = classes.iter().map(|c| c[0].as_str()).collect();
        let (state, la) = self.parser.init(1);
        let mut path = Vec::new();
        self.walk(&state, &la, &reps, &mut path, &mut en);
        en
    }

    fn walk(&self, state: &ChartState, la: &LookaheadSet, reps: &[&str], path: &mut Vec<String>, en: &mut Enumeration) {
        en.prefixes += 1;
        let listed: BTreeSet<&str> = la.forms().map(|f| f.split(' ').next().unwrap()).collect();
        let mut accepted: BTreeSet<&str> = BTreeSet::new();
        for u in &self.universe {
            if self.accepts(state, u).is_some() {
                accepted.insert(u);
                if !la.admits_word(u) {
                    en.failures.push(format!("`{u}` accepted after `{}` but not listed", path.join(" ")));
                }
            }
        }
        for f in &listed {
            if !accepted.contains(f) {
                en.failures.push(format!("listed `{f}` rejected after `{}`", path.join(" ")));
            }
        }
        for r in reps {
            let Some((next, next_la)) = self.accepts(state, r) else { continue };
            path.push(r.to_string());
            if next.is_complete() {
                en.sentences.push(path.clone());
            } else if path.len() < self.bound {
                self.walk(&next, &next_la, reps, path, en);
            }
            path.pop();
        }
    }
}

// ---------------------------------------------------------------------------
// Random ground programs over at most 16 literals.

pub fn random_program(rng: &mut impl Rng) -> AspProgram {
    let preds = ["p", "q", "r", "s", "t", "u", "v", "w"];
    let n = rng.random_range(2..=preds.len());
    let with_neg = rng.random_bool(0.6);
    let pool: Vec<String> = preds[..n]
        .iter()
        .flat_map(|p| {
            let mut v = vec![p.to_string()];
            if with_neg {
                v.push(format!("-{p}"));
            }
            v
        })
        .collect();
    let pick = |rng: &mut dyn rand::RngCore, k: usize| -> Vec<Literal> {
        let mut v: Vec<Literal> = (0..k).map(|_| literal(&pool[rng.random_range(0..pool.len())])).collect();
        v.dedup();
        v
    };
    let rules = (0..rng.random_range(1..=20))
        .map(|_| {
            let heads = match rng.random_range(0..20) {
                0 => 0,
                1..=14 => 1,
                _ => rng.random_range(2..=3),
            };
            let (npos, nnaf) = (rng.random_range(0..=2), rng.random_range(0..=2));
            let mut r = AspRule { head: pick(rng, heads), body_pos: pick(rng, npos), body_naf: pick(rng, nnaf) };
            if r.head.is_empty() && r.body_pos.is_empty() && r.body_naf.is_empty() {
                r.body_pos = pick(rng, 1);
            }
            r
        })
        .collect();
    AspProgram::new(rules)
}

/// A random accepted prefix, each word drawn from the lookahead.
pub fn random_prefix(p: &Parser, rng: &mut impl Rng, max: usize) -> Vec<String> {
    let (mut s, mut la) = p.init(1);
    let mut words = Vec::new();
    let len = rng.random_range(1..=max);
    while words.len() < len {
        let forms: Vec<&str> = la.forms().collect();
        let form = forms[rng.random_range(0..forms.len())].to_string();
        for w in form.split(' ') {
            match p.extend_word(&s, w).unwrap() {
                Extension::Accepted(n, l) => {
                    s = n;
                    la = l;
                }
                Extension::Rejected(r) => panic!("listed `{w}` rejected: {r:?}"),
            }
            words.push(w.to_string());
        }
        if s.is_complete() {
            break;
        }
    }
    words
}

