//! Lexical entries keyed by surface form and category.
//!
//! The lexicon stores closed-class function words and open-class content
//! words. Content words can be added at runtime; function words are fixed.
//! Common words are stored lowercase, proper names keep their capitalisation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The seed lexicon shipped with the crate.
pub const SEED_LEXICON: &str = include_str!("../data/seed.lex");

const FILE_HEADER: &str = "# surface\tcategory\tbase\tarity\tnumber";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexCategory {
    ProperName,
    CommonNoun,
    RelationalNoun,
    Adjective,
    TransitiveVerb,
    Determiner,
    Copula,
    Adverb,
    Conjunction,
    Preposition,
    Punctuation,
    SentenceOpener,
}

impl LexCategory {
    pub const ALL: [LexCategory; 12] = [
        LexCategory::ProperName,
        LexCategory::CommonNoun,
        LexCategory::RelationalNoun,
        LexCategory::Adjective,
        LexCategory::TransitiveVerb,
        LexCategory::Determiner,
        LexCategory::Copula,
        LexCategory::Adverb,
        LexCategory::Conjunction,
        LexCategory::Preposition,
        LexCategory::Punctuation,
        LexCategory::SentenceOpener,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LexCategory::ProperName => "proper-name",
            LexCategory::CommonNoun => "common-noun",
            LexCategory::RelationalNoun => "relational-noun",
            LexCategory::Adjective => "adjective",
            LexCategory::TransitiveVerb => "transitive-verb",
            LexCategory::Determiner => "determiner",
            LexCategory::Copula => "copula",
            LexCategory::Adverb => "adverb",
            LexCategory::Conjunction => "conjunction",
            LexCategory::Preposition => "preposition",
            LexCategory::Punctuation => "punctuation",
            LexCategory::SentenceOpener => "sentence-opener",
        }
    }

    /// Open-class categories accept user additions.
    pub fn is_open(self) -> bool {
        matches!(
            self,
            LexCategory::ProperName
                | LexCategory::CommonNoun
                | LexCategory::RelationalNoun
                | LexCategory::Adjective
                | LexCategory::TransitiveVerb
        )
    }

    /// Semantic arity of content words in this category.
    pub fn arity(self) -> u8 {
        match self {
            LexCategory::RelationalNoun | LexCategory::TransitiveVerb => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for LexCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LexCategory {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LexCategory::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| LexiconError::UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Sg,
    Pl,
}

impl Number {
    pub fn name(self) -> &'static str {
        match self {
            Number::Sg => "sg",
            Number::Pl => "pl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexEntry {
    pub surface: String,
    pub category: LexCategory,
    /// Predicate symbol contributed to the logical form.
    pub base: String,
    pub arity: u8,
    /// Grammatical number, absent for words that do not inflect.
    pub number: Option<Number>,
}

impl LexEntry {
    /// Person is always third in this fragment.
    pub const PERSON: u8 = 3;

    fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.surface,
            self.category,
            self.base,
            self.arity,
            self.number.map_or("-", Number::name)
        )
    }

    fn from_line(line: &str, lineno: usize) -> Result<LexEntry, LexiconError> {
        let bad = |why: &str| LexiconError::BadLine { line: lineno, detail: why.to_string() };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(bad("expected 5 tab-separated fields"));
        }
        let category: LexCategory = fields[1].parse()?;
        let arity: u8 = fields[3].parse().map_err(|_| bad("arity is not an integer"))?;
        let number = match fields[4] {
            "sg" => Some(Number::Sg),
            "pl" => Some(Number::Pl),
            "-" => None,
            _ => return Err(bad("number must be sg, pl or -")),
        };
        let entry = LexEntry {
            surface: fields[0].to_string(),
            category,
            base: fields[2].to_string(),
            arity,
            number,
        };
        entry.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(entry)
    }

    fn validate(&self) -> Result<(), LexiconError> {
        if !valid_surface(&self.surface) {
            return Err(LexiconError::BadSurface(self.surface.clone()));
        }
        if !valid_symbol(&self.base) {
            return Err(LexiconError::BadBase(self.base.clone()));
        }
        if self.arity == 0 {
            return Err(LexiconError::BadArity);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("category `{0}` is closed; only content words can be added")]
    ClosedCategory(LexCategory),
    #[error("`{surface}` is already in the lexicon as {category}")]
    DuplicateEntry { surface: String, category: LexCategory },
    #[error("unknown lexical category `{0}`")]
    UnknownCategory(String),
    #[error("invalid surface form `{0}`")]
    BadSurface(String),
    #[error("invalid predicate symbol `{0}`")]
    BadBase(String),
    #[error("arity must be at least 1")]
    BadArity,
    #[error("line {line}: {detail}")]
    BadLine { line: usize, detail: String },
}

pub(crate) fn valid_surface(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// `[a-z][a-z0-9_]*`
pub fn valid_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

/// Lowercases the first character of `s`.
pub(crate) fn decapitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Uppercases the first character of `s`.
pub(crate) fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
}

impl Lexicon {
    pub fn empty() -> Lexicon {
        Lexicon::default()
    }

    pub fn seed() -> Lexicon {
        Lexicon::parse(SEED_LEXICON).expect("seed lexicon is well-formed")
    }

    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lexicon = Lexicon::empty();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = LexEntry::from_line(line, i + 1)?;
            lexicon.insert(entry)?;
        }
        Ok(lexicon)
    }

    /// Serializes in insertion order, one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from(FILE_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries matching `form`. Proper names match case-sensitively;
    /// a capitalised form also matches lowercase common words.
    pub fn lookup(&self, form: &str) -> Vec<&LexEntry> {
        let lowered = decapitalize(form);
        self.entries
            .iter()
            .filter(|e| {
                e.surface == form
                    || (lowered != form && e.category != LexCategory::ProperName && e.surface == lowered)
            })
            .collect()
    }

    pub fn contains(&self, surface: &str, category: LexCategory) -> bool {
        self.entries.iter().any(|e| e.surface == surface && e.category == category)
    }

    /// Adds a content word, deriving its base form from the surface.
    pub fn add_entry(&mut self, form: &str, category: LexCategory) -> Result<LexEntry, LexiconError> {
        if !category.is_open() {
            return Err(LexiconError::ClosedCategory(category));
        }
        let surface = if category == LexCategory::ProperName {
            form.to_string()
        } else {
            decapitalize(form)
        };
        if !valid_surface(&surface) {
            return Err(LexiconError::BadSurface(form.to_string()));
        }
        let lower = surface.to_lowercase();
        let (base, number) = match category {
            LexCategory::TransitiveVerb => match lower.strip_suffix('s') {
                Some(stem) if !stem.is_empty() => (stem.to_string(), Some(Number::Sg)),
                _ => (lower, Some(Number::Pl)),
            },
            LexCategory::Adjective => (lower, None),
            _ => (lower, Some(Number::Sg)),
        };
        let entry = LexEntry { surface, category, base, arity: category.arity(), number };
        entry.validate()?;
        self.insert(entry.clone())?;
        Ok(entry)
    }

    fn insert(&mut self, entry: LexEntry) -> Result<(), LexiconError> {
        if self.contains(&entry.surface, entry.category) {
            return Err(LexiconError::DuplicateEntry {
                surface: entry.surface,
                category: entry.category,
            });
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Re-inserts an entry verbatim, as recorded in a saved document.
    pub fn restore(&mut self, entry: LexEntry) -> Result<(), LexiconError> {
        entry.validate()?;
        self.insert(entry)
    }

    pub fn forms_for(&self, category: LexCategory) -> Vec<String> {
        let mut forms: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.category == category)
            .map(|e| e.surface.clone())
            .collect();
        forms.sort();
        forms.dedup();
        forms
    }
}

pub(crate) fn entry_line(entry: &LexEntry) -> String {
    entry.to_line()
}

pub(crate) fn entry_from_line(line: &str) -> Result<LexEntry, LexiconError> {
    LexEntry::from_line(line, 1)
}
