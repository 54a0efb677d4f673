mod oracles;

use std::collections::BTreeSet;

use oracles::{edit_ball, one_edits};
use peng::speller::suggest;
use peng::{LexCategory, Lexicon};

fn alphabet(lex: &Lexicon) -> Vec<char> {
    let mut a: BTreeSet<char> = ('a'..='z').chain('A'..='Z').collect();
    a.extend(lex.entries().iter().flat_map(|e| e.surface.chars()));
    a.into_iter().collect()
}

/// Suggestions by exhaustive search of the distance-2 ball.
fn oracle(form: &str, lex: &Lexicon) -> Vec<(usize, String, LexCategory)> {
    let lower: Vec<char> = alphabet(lex).into_iter().filter(|c| !c.is_uppercase()).collect();
    let ball = edit_ball(&form.to_lowercase(), 2, &lower);
    let mut out: Vec<_> = lex
        .entries()
        .iter()
        .filter_map(|e| {
            let d = *ball.get(&e.surface.to_lowercase())?;
            let d = if d == 0 && e.surface != form { 1 } else { d };
            (d >= 1).then(|| (d, e.surface.clone(), e.category))
        })
        .collect();
    out.sort();
    out
}

fn actual(form: &str, lex: &Lexicon) -> Vec<(usize, String, LexCategory)> {
    suggest(form, lex, 2).into_iter().map(|s| (s.distance, s.form, s.category)).collect()
}

#[test]
fn frozen_examples() {
    let lex = Lexicon::seed();
    use LexCategory::*;
    assert_eq!(
        actual("Jon", &lex),
        [(1, "John".into(), ProperName), (2, "an".into(), Determiner), (2, "not".into(), Adverb), (2, "of".into(), Preposition)]
    );
    assert_eq!(actual("chlid", &lex), [(1, "child".into(), CommonNoun)]);
    assert!(actual("qqqqqq", &lex).is_empty());
}

#[test]
fn agrees_with_exhaustive_search() {
    let lex = Lexicon::seed();
    for probe in ["Jon", "chlid", "qqqqqq", "Thelm", "parnets", "abuot", "absnet", "evrey", "Sma", "teh", "caers", "x"] {
        assert_eq!(actual(probe, &lex), oracle(probe, &lex), "{probe}");
    }
}

#[test]
fn every_single_edit_is_recovered() {
    let lex = Lexicon::seed();
    let alpha = alphabet(&lex);
    let mut checked = 0;
    for e in lex.entries() {
        for typo in one_edits(&e.surface, &alpha) {
            if typo.is_empty() || !lex.lookup(&typo).is_empty() {
                continue;
            }
            let s = suggest(&typo, &lex, 2);
            assert!(s.iter().any(|x| x.form == e.surface && x.distance == 1), "{typo} -> {}", e.surface);
            assert!(s.windows(2).all(|w| (w[0].distance, &w[0].form) <= (w[1].distance, &w[1].form)));
            checked += 1;
        }
    }
    assert!(checked > 10_000);
}
