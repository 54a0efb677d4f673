//! JSON messages exchanged between editor clients and the session server.

use serde::{Deserialize, Serialize};

use crate::chart::LookaheadItem;
use crate::lexicon::LexCategory;
use crate::speller::Suggestion;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRequest {
    pub session: String,
    pub token: String,
    pub pos: usize,
    pub snum: usize,
    #[serde(default)]
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractRequest {
    pub session: String,
    pub topos: usize,
    pub snum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddWordRequest {
    pub session: String,
    pub form: String,
    pub category: String,
    pub pos: usize,
    pub snum: usize,
}

/// Body of `/peng/save` and `/peng/load`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRequest {
    pub session: String,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Accepted,
    RejectedUnknown,
    RejectedNoparse,
    SentenceComplete,
    /// A fresh or freshly loaded session.
    Ready,
    Saved,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub detail: String,
}

/// Offered when an unknown word is forced: the open-class categories a new
/// word could take at this position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddWordChallenge {
    pub form: String,
    pub categories: Vec<LexCategory>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub session: String,
    pub status: Status,
    /// Sentence number and position the next token must carry.
    pub snum: usize,
    pub pos: usize,
    pub lookahead: Vec<LookaheadItem>,
    pub ana: Vec<String>,
    /// Accepted tokens of the sentence being entered.
    pub tokens: Vec<String>,
    /// Source text of the completed sentences.
    pub text: Vec<String>,
    pub paraphrases: Vec<String>,
    pub asp: String,
    pub answersets: Vec<String>,
    pub spelling: Vec<Suggestion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub addword: Option<AddWordChallenge>,
    pub error: Option<ErrorBody>,
}

impl Response {
    /// An error reply carrying no session state.
    pub fn bare_error(session: &str, code: &str, detail: impl Into<String>) -> Response {
        Response {
            session: session.to_string(),
            status: Status::Error,
            snum: 0,
            pos: 0,
            lookahead: Vec::new(),
            ana: Vec::new(),
            tokens: Vec::new(),
            text: Vec::new(),
            paraphrases: Vec::new(),
            asp: String::new(),
            answersets: Vec::new(),
            spelling: Vec::new(),
            addword: None,
            error: Some(ErrorBody { code: code.to_string(), detail: detail.into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_names() {
        let req: TokenRequest =
            serde_json::from_str(r#"{"session":"s1","token":"Sam","pos":1,"snum":1}"#).unwrap();
        assert!(!req.force);
        let r: RetractRequest = serde_json::from_str(r#"{"session":"s1","topos":0,"snum":1}"#).unwrap();
        assert_eq!(r.topos, 0);
        let a: AddWordRequest =
            serde_json::from_str(r#"{"session":"s","form":"Zelda","category":"proper-name","pos":1,"snum":1}"#)
                .unwrap();
        assert_eq!(a.category, "proper-name");

        let resp = Response::bare_error("s1", "no-such-session", "unknown session `s1`");
        let v = serde_json::to_value(&resp).unwrap();
        assert_eq!(v["status"], "error");
        assert_eq!(v["error"]["code"], "no-such-session");
        for field in ["lookahead", "ana", "paraphrases", "asp", "answersets", "spelling"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert!(v.get("addword").is_none());
        assert_eq!(serde_json::to_value(Status::RejectedNoparse).unwrap(), "rejected-noparse");
    }
}
