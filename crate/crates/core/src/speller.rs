//! Spelling suggestions drawn from the lexicon.

use serde::{Deserialize, Serialize};

use crate::lexicon::{LexCategory, Lexicon};

pub const DEFAULT_MAX_DISTANCE: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub form: String,
    pub distance: usize,
    #[serde(rename = "cat")]
    pub category: LexCategory,
}

/// Edit distance used for ranking, compared case-insensitively. A form that
/// differs from a surface only in case is one edit away, not zero.
pub fn distance(form: &str, surface: &str) -> usize {
    let d = strsim::damerau_levenshtein(&form.to_lowercase(), &surface.to_lowercase());
    if d == 0 && form != surface {
        1
    } else {
        d
    }
}

/// Lexicon surfaces within `max_distance` of `form`, closest first.
pub fn suggest(form: &str, lexicon: &Lexicon, max_distance: usize) -> Vec<Suggestion> {
    let mut out: Vec<Suggestion> = lexicon
        .entries()
        .iter()
        .filter_map(|e| {
            let d = distance(form, &e.surface);
            (d >= 1 && d <= max_distance).then(|| Suggestion {
                form: e.surface.clone(),
                distance: d,
                category: e.category,
            })
        })
        .collect();
    out.sort_by(|a, b| {
        (a.distance, &a.form, a.category).cmp(&(b.distance, &b.form, b.category))
    });
    out
}
