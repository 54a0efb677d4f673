//! Grounding and stable-model enumeration for small programs.
//!
//! Rules are instantiated over the constants of the program and then
//! simplified against the set of possibly derivable literals. Answer sets
//! are found by a DPLL-style search whose leaves are checked for minimality
//! with respect to the Gelfond–Lifschitz reduct. Strongly negated literals
//! are ordinary atoms; a set containing both `p` and `-p` is rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::asp::{AspProgram, AspRule, Literal, Term};

/// Largest atom universe [`answer_sets`] will search.
pub const MAX_UNIVERSE: usize = 24;
pub const DEFAULT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("unsafe rule `{0}`: every variable must occur in the positive body")]
    UnsafeRule(String),
    #[error("{atoms} ground atoms exceed the limit of {MAX_UNIVERSE}")]
    UniverseTooLarge { atoms: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundWarning {
    /// The program has no constants; rules with variables were dropped.
    NoConstants,
}

/// A ground rule over atom indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: Vec<usize>,
    pub pos: Vec<usize>,
    pub naf: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub atoms: Vec<Literal>,
    /// For every atom, the index of its strong-negation complement if present.
    pub complement: Vec<Option<usize>>,
    pub warnings: Vec<GroundWarning>,
}

impl GroundProgram {
    /// Builds the indexed form of variable-free rules, keeping them as given.
    pub fn from_rules(rules: &[AspRule]) -> GroundProgram {
        let mut index: HashMap<Literal, usize> = HashMap::new();
        let mut atoms = Vec::new();
        let mut id = |l: &Literal| -> usize {
            *index.entry(l.clone()).or_insert_with(|| {
                atoms.push(l.clone());
                atoms.len() - 1
            })
        };
        let mut out = Vec::new();
        for r in rules {
            let head = dedup(r.head.iter().map(&mut id).collect());
            let pos = dedup(r.body_pos.iter().map(&mut id).collect());
            let naf = dedup(r.body_naf.iter().map(&mut id).collect());
            out.push(GroundRule { head, pos, naf });
        }
        let lookup: HashMap<&Literal, usize> = atoms.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let complement = atoms.iter().map(|l| lookup.get(&l.complement()).copied()).collect();
        GroundProgram { rules: out, atoms, complement, warnings: Vec::new() }
    }

    pub fn to_rules(&self) -> Vec<AspRule> {
        let lits = |ix: &[usize]| ix.iter().map(|&i| self.atoms[i].clone()).collect::<Vec<_>>();
        self.rules
            .iter()
            .map(|r| AspRule { head: lits(&r.head), body_pos: lits(&r.pos), body_naf: lits(&r.naf) })
            .collect()
    }

    pub fn atom_index(&self, l: &Literal) -> Option<usize> {
        self.atoms.iter().position(|a| a == l)
    }
}

impl PartialOrd for GroundRule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroundRule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.head, &self.pos, &self.naf).cmp(&(&other.head, &other.pos, &other.naf))
    }
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    v.retain(|x| seen.insert(*x));
    v
}

/// Every substitution of the rules' variables by the program's constants.
pub fn instantiate(program: &AspProgram) -> Result<(Vec<AspRule>, Vec<GroundWarning>), SolveError> {
    for r in &program.rules {
        if !r.is_safe() {
            return Err(SolveError::UnsafeRule(r.to_string()));
        }
    }
    let constants = program.constants();
    let mut warnings = Vec::new();
    let mut out = Vec::new();
    for r in &program.rules {
        let vars: Vec<String> = r.vars().into_iter().map(String::from).collect();
        if vars.is_empty() {
            out.push(r.clone());
            continue;
        }
        if constants.is_empty() {
            if !warnings.contains(&GroundWarning::NoConstants) {
                warnings.push(GroundWarning::NoConstants);
            }
            continue;
        }
        let mut choice = vec![0usize; vars.len()];
        loop {
            let map: HashMap<&str, &str> =
                vars.iter().zip(&choice).map(|(v, &c)| (v.as_str(), constants[c].as_str())).collect();
            let subst = |v: &str| map.get(v).map(|c| Term::Const(c.to_string()));
            let ground = |ls: &[Literal]| ls.iter().map(|l| l.substitute(&subst)).collect::<Vec<_>>();
            out.push(AspRule { head: ground(&r.head), body_pos: ground(&r.body_pos), body_naf: ground(&r.body_naf) });
            // odometer over constant choices
            let mut k = vars.len();
            let done = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < constants.len() {
                    break false;
                }
                choice[k] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok((out, warnings))
}

/// Instantiates and simplifies. Instances whose positive body can never
/// hold are dropped, as are their negated literals that can never become
/// true; rules that were variable-free to begin with are kept verbatim.
pub fn ground(program: &AspProgram) -> Result<GroundProgram, SolveError> {
    let (rules, warnings) = instantiate(program)?;
    let verbatim: std::collections::HashSet<&AspRule> =
        program.rules.iter().filter(|r| r.vars().is_empty()).collect();
    let mut derivable: BTreeSet<&Literal> = BTreeSet::new();
    loop {
        let before = derivable.len();
        for r in &rules {
            if r.body_pos.iter().all(|l| derivable.contains(l)) {
                derivable.extend(&r.head);
            }
        }
        if derivable.len() == before {
            break;
        }
    }
    let simplified: Vec<AspRule> = rules
        .iter()
        .filter_map(|r| {
            if verbatim.contains(r) {
                return Some(r.clone());
            }
            r.body_pos.iter().all(|l| derivable.contains(l)).then(|| AspRule {
                head: r.head.clone(),
                body_pos: r.body_pos.clone(),
                body_naf: r.body_naf.iter().filter(|l| derivable.contains(l)).cloned().collect(),
            })
        })
        .collect();
    let mut g = GroundProgram::from_rules(&simplified);
    g.warnings = warnings;
    Ok(g)
}

/// A stable model, literals sorted by their printed form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnswerSet {
    pub literals: Vec<Literal>,
}

impl AnswerSet {
    pub fn new(mut literals: Vec<Literal>) -> AnswerSet {
        literals.sort_by_cached_key(|l| l.to_string());
        literals.dedup();
        AnswerSet { literals }
    }

    fn key(&self) -> (usize, Vec<String>) {
        (self.literals.len(), self.literals.iter().map(|l| l.to_string()).collect())
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.contains(l)
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for l in &self.literals {
            write!(f, " {l}")?;
        }
        f.write_str(" }")
    }
}

/// Sorts answer sets by size, then by their literal lists.
pub fn canonical_order(sets: &mut [AnswerSet]) {
    sets.sort_by_cached_key(AnswerSet::key);
}

/// The stable models of `ground`, at most `limit` of them, in canonical order.
pub fn answer_sets(ground: &GroundProgram, limit: usize) -> Result<Vec<AnswerSet>, SolveError> {
    let n = ground.atoms.len();
    if n > MAX_UNIVERSE {
        return Err(SolveError::UniverseTooLarge { atoms: n });
    }
    let mut head_rules = vec![Vec::new(); n];
    for (i, r) in ground.rules.iter().enumerate() {
        for &h in &r.head {
            head_rules[h].push(i);
        }
    }
    let mut search = Search { g: ground, head_rules, found: Vec::new() };
    search.run(vec![None; n]);
    let mut sets: Vec<AnswerSet> = search
        .found
        .into_iter()
        .map(|m| AnswerSet::new(m.into_iter().map(|i| ground.atoms[i].clone()).collect()))
        .collect();
    canonical_order(&mut sets);
    sets.truncate(limit);
    Ok(sets)
}

/// Grounds and solves in one step.
pub fn solve(program: &AspProgram, limit: usize) -> Result<(Vec<AnswerSet>, Vec<GroundWarning>), SolveError> {
    let g = ground(program)?;
    let sets = answer_sets(&g, limit)?;
    Ok((sets, g.warnings))
}

/// One answer set per line.
pub fn render_answer_sets(sets: &[AnswerSet]) -> String {
    sets.iter().map(|s| format!("{s}\n")).collect()
}

type Assignment = Vec<Option<bool>>;

struct Search<'a> {
    g: &'a GroundProgram,
    head_rules: Vec<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, mut a: Assignment) {
        if !self.propagate(&mut a) {
            return;
        }
        match a.iter().position(Option::is_none) {
            Some(i) => {
                for v in [false, true] {
                    let mut next = a.clone();
                    next[i] = Some(v);
                    self.run(next);
                }
            }
            None => {
                let model: Vec<usize> = (0..a.len()).filter(|&i| a[i] == Some(true)).collect();
                if self.minimal(&model) {
                    self.found.push(model);
                }
            }
        }
    }

    /// Forces the values every answer set extending `a` must have.
    /// Returns false on conflict.
    fn propagate(&self, a: &mut Assignment) -> bool {
        loop {
            let mut changed = false;
            // each rule is the clause  head ∨ ¬pos ∨ naf
            for r in &self.g.rules {
                let lits = r
                    .head
                    .iter()
                    .map(|&h| (h, true))
                    .chain(r.pos.iter().map(|&p| (p, false)))
                    .chain(r.naf.iter().map(|&q| (q, true)));
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for (atom, want) in lits {
                    match a[atom] {
                        Some(v) if v == want => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            // the same atom can occur twice with one polarity
                            if open != Some((atom, want)) {
                                open_count += 1;
                            }
                            open = Some((atom, want));
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some((atom, want))) => {
                        a[atom] = Some(want);
                        changed = true;
                    }
                    _ => {}
                }
            }
            for i in 0..a.len() {
                // consistency
                if a[i] == Some(true) {
                    if let Some(c) = self.g.complement[i] {
                        match a[c] {
                            Some(true) => return false,
                            None => {
                                a[c] = Some(false);
                                changed = true;
                            }
                            Some(false) => {}
                        }
                    }
                }
                // support: a true atom needs a rule whose body can still hold
                if a[i] != Some(false) {
                    let supported = self.head_rules[i].iter().any(|&ri| {
                        let r = &self.g.rules[ri];
                        r.pos.iter().all(|&p| a[p] != Some(false)) && r.naf.iter().all(|&q| a[q] != Some(true))
                    });
                    if !supported {
                        if a[i] == Some(true) {
                            return false;
                        }
                        a[i] = Some(false);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Whether `model`, already a model of the program, is a minimal model
    /// of its reduct.
    fn minimal(&self, model: &[usize]) -> bool {
        let inside: BTreeSet<usize> = model.iter().copied().collect();
        let reduct: Vec<&GroundRule> =
            self.g.rules.iter().filter(|r| r.naf.iter().all(|q| !inside.contains(q))).collect();
        if reduct.iter().all(|r| r.head.len() <= 1) {
            return least_model(&reduct) == inside;
        }
        // look for a proper subset that is still a model of the reduct
        let var: HashMap<usize, usize> = model.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
        for r in &reduct {
            if !r.pos.iter().all(|p| inside.contains(p)) {
                continue;
            }
            let mut c: Vec<(usize, bool)> = r.head.iter().filter_map(|h| var.get(h).map(|&k| (k, true))).collect();
            c.extend(r.pos.iter().map(|p| (var[p], false)));
            clauses.push(c);
        }
        clauses.push((0..model.len()).map(|k| (k, false)).collect());
        !satisfiable(model.len(), &clauses)
    }
}

fn least_model(rules: &[&GroundRule]) -> BTreeSet<usize> {
    let mut m = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in rules {
            if let Some(&h) = r.head.first() {
                if !m.contains(&h) && r.pos.iter().all(|p| m.contains(p)) {
                    m.insert(h);
                    changed = true;
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

/// Plain DPLL over `n` variables; clause literals are (variable, polarity).
fn satisfiable(n: usize, clauses: &[Vec<(usize, bool)>]) -> bool {
    fn go(a: &mut Vec<Option<bool>>, clauses: &[Vec<(usize, bool)>]) -> bool {
        let mut trail = Vec::new();
        loop {
            let mut changed = false;
            for c in clauses {
                let mut open = None;
                let mut count = 0;
                let mut sat = false;
                for &(v, want) in c {
                    match a[v] {
                        Some(x) if x == want => {
                            sat = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            if open != Some((v, want)) {
                                count += 1;
                            }
                            open = Some((v, want));
                        }
                    }
                }
                if sat {
                    continue;
                }
                if count == 0 {
                    for v in trail {
                        a[v] = None;
                    }
                    return false;
                }
                if count == 1 {
                    let (v, want) = open.expect("one open literal");
                    a[v] = Some(want);
                    trail.push(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let Some(v) = a.iter().position(Option::is_none) else { return true };
        for val in [false, true] {
            a[v] = Some(val);
            if go(a, clauses) {
                return true;
            }
        }
        a[v] = None;
        for t in trail {
            a[t] = None;
        }
        false
    }
    go(&mut vec![None; n], clauses)
}

/// Decides stability of `candidate` directly from the definition: it must
/// be consistent, a model of the reduct, and have no proper subset that is
/// also a model of the reduct.
pub fn check_stable(ground: &GroundProgram, candidate: &AnswerSet) -> bool {
    let mut set = 0u64;
    for l in &candidate.literals {
        match ground.atom_index(l) {
            Some(i) if i < 64 => set |= 1 << i,
            _ => return false,
        }
    }
    for (i, c) in ground.complement.iter().enumerate() {
        if let Some(c) = c {
            if set & (1 << i) != 0 && set & (1 << c) != 0 {
                return false;
            }
        }
    }
    let mask = |ix: &[usize]| ix.iter().fold(0u64, |m, &i| m | 1 << i);
    let reduct: Vec<(u64, u64)> = ground
        .rules
        .iter()
        .filter(|r| mask(&r.naf) & set == 0)
        .map(|r| (mask(&r.head), mask(&r.pos)))
        .collect();
    let is_model = |s: u64| reduct.iter().all(|&(head, pos)| pos & !s != 0 || head & s != 0);
    if !is_model(set) {
        return false;
    }
    let members: Vec<u64> = (0..64).filter(|i| set & (1 << i) != 0).map(|i| 1u64 << i).collect();
    // removing a single literal refutes most candidates quickly
    if members.iter().any(|&b| is_model(set & !b)) {
        return false;
    }
    // every proper subset, as a sub-mask walk
    let mut sub = set;
    while sub != 0 {
        sub = (sub - 1) & set;
        if is_model(sub) {
            return false;
        }
    }
    true
}
