//! Documents: one sentence per line, `#` comments, and
//! `#+lex` lines recording lexicon additions.

use crate::lexicon::{entry_from_line, entry_line, LexEntry, LexiconError};

/// The example text: a default, its cancellation and a strong
/// negation over a small family.
pub const EXAMPLE_SENTENCES: [&str; 9] = [
    "Sam is a child.",
    "John is the father of Sam and Alice is the mother of Sam.",
    "Every father of a child is a parent of the child.",
    "Every mother of a child is a parent of the child.",
    "Parents of a child normally care about the child.",
    "If a parent of a child is provably absent then the parent abnormally cares about the child.",
    "John does not care about Sam.",
    "Alice is absent.",
    "John, Thelma and Pete are parents.",
];

const LEX_DIRECTIVE: &str = "#+lex\t";

/// Splits a sentence into word and punctuation tokens.
pub fn tokenize_sentence(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in sentence.split_whitespace() {
        let word = chunk.trim_end_matches([',', '.', '?']);
        if !word.is_empty() {
            out.push(word.to_string());
        }
        out.extend(chunk[word.len()..].chars().map(String::from));
    }
    out
}

/// Joins tokens back into a sentence, attaching punctuation to the word before it.
pub fn join_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    for t in tokens {
        let t = t.as_ref();
        if !out.is_empty() && !matches!(t, "," | "." | "?") {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub additions: Vec<LexEntry>,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {source}")]
pub struct DocumentError {
    pub line: usize,
    pub source: LexiconError,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        let mut doc = Document::default();
        for (i, raw) in text.lines().enumerate() {
            if let Some(rest) = raw.strip_prefix(LEX_DIRECTIVE) {
                let entry = entry_from_line(rest).map_err(|source| DocumentError { line: i + 1, source })?;
                doc.additions.push(entry);
                continue;
            }
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            doc.sentences.push(line.to_string());
        }
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.additions {
            out.push_str(LEX_DIRECTIVE);
            out.push_str(&entry_line(e));
            out.push('\n');
        }
        for s in &self.sentences {
            out.push_str(s);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{LexCategory, Lexicon};

    #[test]
    fn punctuation_is_split_off() {
        assert_eq!(tokenize_sentence("John, Thelma and Pete are parents."), [
            "John", ",", "Thelma", "and", "Pete", "are", "parents", "."
        ]);
        assert_eq!(tokenize_sentence("Sam is a child ."), ["Sam", "is", "a", "child", "."]);
        assert_eq!(tokenize_sentence("  "), Vec::<String>::new());
    }

    #[test]
    fn join_inverts_tokenize() {
        for s in EXAMPLE_SENTENCES {
            assert_eq!(join_tokens(&tokenize_sentence(s)), s);
        }
    }

    #[test]
    fn documents() {
        let mut lex = Lexicon::empty();
        let zelda = lex.add_entry("Zelda", LexCategory::ProperName).unwrap();
        let doc = Document { additions: vec![zelda], sentences: vec!["Zelda is absent.".into()] };
        let text = doc.to_text();
        assert_eq!(text, "#+lex\tZelda\tproper-name\tzelda\t1\tsg\nZelda is absent.\n");
        assert_eq!(Document::parse(&text).unwrap(), doc);

        let parsed = Document::parse("# comment\n\n  Sam is a child.  \n").unwrap();
        assert_eq!(parsed.sentences, ["Sam is a child."]);
        assert!(Document::parse("#+lex\tbroken\n").is_err());
    }
}
