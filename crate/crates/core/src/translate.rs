//! Translation of resolved DRSs into answer set programs.
//!
//! Top-level conditions become facts; implications become rules with the
//! consequent atom as head. Defaults are guarded by an abnormality atom and
//! by the strong negation of their head; cancellation axioms derive that
//! abnormality atom. Rule variables are lettered A, B, C, ... in order of
//! first occurrence, continuing across the rules of one translation run.

use std::collections::{HashMap, HashSet};

use crate::asp::{AspProgram, AspRule, Literal, Term};
use crate::drs::{self, Atom, Condition, Drs};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("cannot translate {0}")]
    Untranslatable(String),
}

/// The name of the `n`th fresh variable: A..Z, then A1..Z1, A2, ...
pub fn variable_name(n: usize) -> String {
    let letter = (b'A' + (n % 26) as u8) as char;
    match n / 26 {
        0 => letter.to_string(),
        k => format!("{letter}{k}"),
    }
}

/// Constant standing for a top-level discourse referent.
pub fn skolem_constant(referent: &str) -> String {
    format!("sk{}", referent.trim_start_matches('X'))
}

#[derive(Debug, Default)]
pub struct Translator {
    next_var: usize,
    /// Top-level referents seen so far in the discourse.
    skolem: HashSet<String>,
}

struct RuleVars<'a> {
    next_var: &'a mut usize,
    names: HashMap<String, String>,
}

impl RuleVars<'_> {
    fn name(&mut self, referent: &str) -> String {
        if let Some(v) = self.names.get(referent) {
            return v.clone();
        }
        let v = variable_name(*self.next_var);
        *self.next_var += 1;
        self.names.insert(referent.to_string(), v.clone());
        v
    }
}

fn untranslatable<T>(what: impl Into<String>) -> Result<T, TranslateError> {
    Err(TranslateError::Untranslatable(what.into()))
}

/// A rule whose referents have not been lettered yet.
struct Draft {
    head: Vec<Literal>,
    body_pos: Vec<Literal>,
    body_naf: Vec<Literal>,
}

impl Translator {
    pub fn new() -> Translator {
        Translator::default()
    }

    pub fn translate(&mut self, drs: &Drs) -> Result<Vec<AspRule>, TranslateError> {
        self.skolem.extend(drs.referents.iter().map(|r| r.name.clone()));
        let owned = std::mem::take(&mut self.skolem);
        let result = self.translate_in(drs, &owned.iter().map(String::as_str).collect());
        self.skolem = owned;
        result
    }

    fn translate_in(&mut self, drs: &Drs, skolem: &HashSet<&str>) -> Result<Vec<AspRule>, TranslateError> {
        let mut out = Vec::new();
        for c in &drs.conditions {
            match c {
                Condition::Atom(a) => out.push(AspRule::fact(self.ground_literal(a, skolem)?)),
                Condition::Implication(ante, cons) => {
                    let (body_pos, body_naf) = self.body(ante, skolem)?;
                    for head in self.consequent_atoms(cons, skolem)? {
                        out.push(self.letter(Draft { head: vec![head], body_pos: body_pos.clone(), body_naf: body_naf.clone() })?);
                    }
                }
                Condition::Default(ante, cons) => {
                    let (body_pos, mut body_naf) = self.body(ante, skolem)?;
                    let head = self.single_atom(cons, skolem)?;
                    body_naf.push(abnormality(&head));
                    body_naf.push(head.complement());
                    out.push(self.letter(Draft { head: vec![head], body_pos, body_naf })?);
                }
                Condition::Abnormal(ante, cons) => {
                    let (body_pos, body_naf) = self.body(ante, skolem)?;
                    let p = self.single_atom(cons, skolem)?;
                    out.push(self.letter(Draft { head: vec![abnormality(&p)], body_pos, body_naf })?);
                }
                Condition::Provably(a) => return untranslatable(format!("top-level provably {a}")),
                Condition::Naf(_) => return untranslatable("top-level negation as failure"),
            }
        }
        Ok(out)
    }

    fn term(&self, t: &drs::Term, skolem: &HashSet<&str>) -> Result<Term, TranslateError> {
        match t {
            drs::Term::Const(c) => Ok(Term::Const(c.clone())),
            drs::Term::Ref(r) if skolem.contains(r.as_str()) => Ok(Term::Const(skolem_constant(r))),
            // lettered in `letter`
            drs::Term::Ref(r) => Ok(Term::Var(r.clone())),
            drs::Term::Anaphor { noun, pos } => untranslatable(format!("unresolved `the {noun}` at position {pos}")),
        }
    }

    fn literal(&self, a: &Atom, skolem: &HashSet<&str>) -> Result<Literal, TranslateError> {
        let args = a.args.iter().map(|t| self.term(t, skolem)).collect::<Result<Vec<_>, _>>()?;
        Ok(if a.negated { Literal::negated(a.pred.clone(), args) } else { Literal::new(a.pred.clone(), args) })
    }

    fn ground_literal(&self, a: &Atom, skolem: &HashSet<&str>) -> Result<Literal, TranslateError> {
        let l = self.literal(a, skolem)?;
        if !l.is_ground() {
            return untranslatable(format!("fact {a} with a free referent"));
        }
        Ok(l)
    }

    fn body(&self, ante: &Drs, skolem: &HashSet<&str>) -> Result<(Vec<Literal>, Vec<Literal>), TranslateError> {
        let mut pos = Vec::new();
        let mut naf = Vec::new();
        for c in &ante.conditions {
            match c {
                Condition::Atom(a) => pos.push(self.literal(a, skolem)?),
                // "provably q(x)" is read as `not -q(x)`
                Condition::Provably(a) => naf.push(self.literal(a, skolem)?.complement()),
                Condition::Naf(d) => {
                    for inner in &d.conditions {
                        match inner {
                            Condition::Atom(a) => naf.push(self.literal(a, skolem)?),
                            _ => return untranslatable("nested condition under negation as failure"),
                        }
                    }
                }
                _ => return untranslatable("nested rule in an antecedent"),
            }
        }
        Ok((pos, naf))
    }

    fn consequent_atoms(&self, cons: &Drs, skolem: &HashSet<&str>) -> Result<Vec<Literal>, TranslateError> {
        if !cons.referents.is_empty() {
            return untranslatable("referent introduced in a consequent");
        }
        cons.conditions
            .iter()
            .map(|c| match c {
                Condition::Atom(a) => self.literal(a, skolem),
                _ => untranslatable("complex consequent"),
            })
            .collect()
    }

    fn single_atom(&self, cons: &Drs, skolem: &HashSet<&str>) -> Result<Literal, TranslateError> {
        let mut atoms = self.consequent_atoms(cons, skolem)?;
        if atoms.len() != 1 {
            return untranslatable("default or cancellation with other than one consequent atom");
        }
        Ok(atoms.remove(0))
    }

    fn letter(&mut self, draft: Draft) -> Result<AspRule, TranslateError> {
        let mut vars = RuleVars { next_var: &mut self.next_var, names: HashMap::new() };
        let rule = AspRule { head: draft.head, body_pos: draft.body_pos, body_naf: draft.body_naf };
        let referents: Vec<String> = rule.vars().into_iter().map(String::from).collect();
        for r in &referents {
            vars.name(r);
        }
        let names = vars.names;
        let subst = |v: &str| names.get(v).map(|n| Term::Var(n.clone()));
        let rename = |ls: &[Literal]| ls.iter().map(|l| l.substitute(&subst)).collect::<Vec<_>>();
        let rule = AspRule { head: rename(&rule.head), body_pos: rename(&rule.body_pos), body_naf: rename(&rule.body_naf) };
        if !rule.is_safe() {
            return untranslatable(format!("unsafe rule {rule}"));
        }
        Ok(rule)
    }
}

/// `ab(d_p(args))` for the default concluding `p(args)`.
fn abnormality(head: &Literal) -> Literal {
    Literal::new("ab", vec![Term::Func(format!("d_{}", head.pred), head.args.clone())])
}

/// Translates one DRS with a fresh variable alphabet.
pub fn translate(drs: &Drs) -> Result<Vec<AspRule>, TranslateError> {
    Translator::new().translate(drs)
}

/// Concatenates the translations of a discourse, in sentence order.
pub fn translate_discourse<'a>(discourse: impl IntoIterator<Item = &'a Drs>) -> Result<AspProgram, TranslateError> {
    let mut t = Translator::new();
    let mut rules = Vec::new();
    for drs in discourse {
        rules.extend(t.translate(drs)?);
    }
    Ok(AspProgram::new(rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::render;
    use crate::chart::Parser;
    use crate::drs::{drs_of, resolve, ResolvedSentence};
    use crate::text::{tokenize_sentence, EXAMPLE_SENTENCES};

    fn discourse(sentences: &[&str]) -> Vec<ResolvedSentence> {
        let p = Parser::default_fragment();
        let mut out = Vec::new();
        for (i, s) in sentences.iter().enumerate() {
            let st = p.parse_tokens(i + 1, &tokenize_sentence(s)).unwrap();
            let d = drs_of(&p, &st).unwrap();
            out.push(resolve(&d, &out).unwrap());
        }
        out
    }

    fn program(sentences: &[&str]) -> String {
        render(&translate_discourse(discourse(sentences).iter().map(|s| &s.drs)).unwrap())
    }

    #[test]
    fn variable_names() {
        assert_eq!(variable_name(0), "A");
        assert_eq!(variable_name(25), "Z");
        assert_eq!(variable_name(26), "A1");
        assert_eq!(variable_name(27), "B1");
        assert_eq!(variable_name(52), "A2");
    }

    #[test]
    fn facts() {
        assert_eq!(program(&EXAMPLE_SENTENCES[..1]), "child(sam).\n");
        assert_eq!(program(&EXAMPLE_SENTENCES[..2]), "child(sam).\nfather(john,sam).\nmother(alice,sam).\n");
        assert_eq!(program(&[EXAMPLE_SENTENCES[8]]), "parent(john).\nparent(thelma).\nparent(pete).\n");
        assert_eq!(program(&["There is a child.", "The child is absent."]), "child(sk1).\nabsent(sk1).\n");
        assert_eq!(translate(&Drs::default()).unwrap(), []);
    }

    #[test]
    fn default_and_cancellation() {
        let d = discourse(&EXAMPLE_SENTENCES[..6]);
        assert_eq!(
            render(&AspProgram::new(translate(&d[4].drs).unwrap())),
            "care(A,B) :- parent(A,B), child(B), not ab(d_care(A,B)), not -care(A,B).\n"
        );
        assert_eq!(
            render(&AspProgram::new(translate(&d[5].drs).unwrap())),
            "ab(d_care(A,B)) :- parent(A,B), child(B), not -absent(A).\n"
        );
    }

    #[test]
    fn golden_program() {
        let expected = "child(sam).\nfather(john,sam).\nmother(alice,sam).\n\
parent(A,B) :- father(A,B), child(B).\nparent(C,D) :- mother(C,D), child(D).\n\
care(E,F) :- parent(E,F), child(F), not ab(d_care(E,F)), not -care(E,F).\n\
ab(d_care(G,H)) :- parent(G,H), child(H), not -absent(G).\n-care(john,sam).\nabsent(alice).\n";
        assert_eq!(program(&EXAMPLE_SENTENCES[..8]), expected);
        // idempotent
        assert_eq!(program(&EXAMPLE_SENTENCES[..8]), expected);
    }

    #[test]
    fn conditionals_over_constants() {
        assert_eq!(program(&["If Sam is a child then Sam is absent."]), "absent(sam) :- child(sam).\n");
        assert_eq!(
            program(&["If John is provably absent then John abnormally cares about Sam."]),
            "ab(d_care(john,sam)) :- not -absent(john).\n"
        );
    }

    #[test]
    fn unresolved_anaphor_is_untranslatable() {
        let drs = Drs {
            referents: vec![],
            conditions: vec![Condition::Atom(Atom::new("absent", vec![drs::Term::Anaphor { noun: "child".into(), pos: 1 }]))],
        };
        assert!(translate(&drs).is_err());
    }
}
