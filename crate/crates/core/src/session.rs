//! Editing sessions: the sentence being entered, the accepted discourse,
//! its program and answer sets.
//!
//! Every operation returns a [`Response`] carrying the full pane state so
//! a client can redraw from any single reply.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::asp::{render, AspProgram};
use crate::chart::{ChartState, Extension, LookaheadCategory, LookaheadSet, Parser, RejectReason, Token, TokenKind};
use crate::drs::{anaphoric_expressions, drs_of, resolve, DrsError, ResolvedSentence};
use crate::lexicon::{LexCategory, LexEntry, LexiconError};
use crate::protocol::{AddWordChallenge, ErrorBody, Response, Status};
use crate::solver::{self, AnswerSet, SolveError, DEFAULT_LIMIT};
use crate::speller::{suggest, Suggestion, DEFAULT_MAX_DISTANCE};
use crate::text::{tokenize_sentence, Document, DocumentError};
use crate::translate::{translate_discourse, TranslateError};

/// Saved documents use this extension.
pub const FILE_EXTENSION: &str = "cnl";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("expected sentence {snum}, position {pos}")]
    PositionMismatch { snum: usize, pos: usize },
    #[error("sentence {0} has already been submitted")]
    SentenceAlreadySubmitted(usize),
    #[error("cannot retract to position {to_pos}: {accepted} tokens accepted")]
    BadPosition { to_pos: usize, accepted: usize },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("a {category} cannot occur at position {pos}")]
    NotAdmissibleHere { category: LexCategory, pos: usize },
    #[error(transparent)]
    Semantics(#[from] DrsError),
    #[error(transparent)]
    Translation(#[from] TranslateError),
    #[error("file names may only contain letters, digits, `_` and `-`: `{0}`")]
    BadName(String),
    #[error("no saved file `{0}`")]
    FileMissing(String),
    #[error("saved text no longer parses at sentence {snum}, position {pos}: {detail}")]
    ReplayFailure { snum: usize, pos: usize, detail: String },
    #[error(transparent)]
    BadFile(#[from] DocumentError),
    #[error("{0}")]
    Io(String),
}

impl SessionError {
    /// Stable error code used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::PositionMismatch { .. } => "position-mismatch",
            SessionError::SentenceAlreadySubmitted(_) => "sentence-already-submitted",
            SessionError::BadPosition { .. } => "bad-position",
            SessionError::Lexicon(e) => match e {
                LexiconError::ClosedCategory(_) => "closed-category",
                LexiconError::DuplicateEntry { .. } => "duplicate-entry",
                LexiconError::UnknownCategory(_) => "unknown-category",
                _ => "bad-word",
            },
            SessionError::NotAdmissibleHere { .. } => "not-admissible-here",
            SessionError::Semantics(DrsError::UnresolvedAnaphor { .. }) => "unresolved-anaphor",
            SessionError::Semantics(_) => "semantics",
            SessionError::Translation(_) => "untranslatable",
            SessionError::BadName(_) => "bad-name",
            SessionError::FileMissing(_) => "file-missing",
            SessionError::ReplayFailure { .. } => "replay-failure",
            SessionError::BadFile(_) => "bad-file",
            SessionError::Io(_) => "io-error",
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { code: self.code().to_string(), detail: self.to_string() }
    }
}

fn solve_error_body(e: &SolveError) -> ErrorBody {
    let code = match e {
        SolveError::UnsafeRule(_) => "unsafe-rule",
        SolveError::UniverseTooLarge { .. } => "universe-too-large",
    };
    ErrorBody { code: code.to_string(), detail: e.to_string() }
}

/// `[A-Za-z0-9_-]+`
pub fn valid_file_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    /// Parser over the seed lexicon, used when a session is reset.
    base: Parser,
    parser: Parser,
    additions: Vec<LexEntry>,
    chart: ChartState,
    lookahead: LookaheadSet,
    discourse: Vec<ResolvedSentence>,
    program: AspProgram,
    answer_sets: Vec<AnswerSet>,
    solve_error: Option<ErrorBody>,
    pending_suggestions: Vec<Suggestion>,
    limit: usize,
}

impl Session {
    pub fn new(id: impl Into<String>, parser: Parser) -> Session {
        let (chart, lookahead) = parser.init(1);
        let mut s = Session {
            id: id.into(),
            base: parser.clone(),
            parser,
            additions: Vec::new(),
            chart,
            lookahead,
            discourse: Vec::new(),
            program: AspProgram::default(),
            answer_sets: Vec::new(),
            solve_error: None,
            pending_suggestions: Vec::new(),
            limit: DEFAULT_LIMIT,
        };
        s.refresh_answer_sets();
        s
    }

    /// Replays a document through the full pipeline.
    pub fn from_document(id: impl Into<String>, parser: Parser, doc: &Document) -> Result<Session, SessionError> {
        Session::new(id, parser).replayed(doc)
    }

    pub fn with_limit(mut self, limit: usize) -> Session {
        self.limit = limit;
        self.refresh_answer_sets();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn parser(&self) -> &Parser {
        &self.parser
    }

    pub fn chart(&self) -> &ChartState {
        &self.chart
    }

    pub fn lookahead(&self) -> &LookaheadSet {
        &self.lookahead
    }

    pub fn discourse(&self) -> &[ResolvedSentence] {
        &self.discourse
    }

    pub fn program(&self) -> &AspProgram {
        &self.program
    }

    pub fn answer_sets(&self) -> &[AnswerSet] {
        &self.answer_sets
    }

    pub fn additions(&self) -> &[LexEntry] {
        &self.additions
    }

    pub fn pending_suggestions(&self) -> &[Suggestion] {
        &self.pending_suggestions
    }

    pub fn document(&self) -> Document {
        Document { additions: self.additions.clone(), sentences: self.discourse.iter().map(|s| s.text()).collect() }
    }

    /// The reply describing the current state.
    pub fn response(&self, status: Status) -> Response {
        Response {
            session: self.id.clone(),
            status,
            snum: self.chart.snum(),
            pos: self.chart.next_pos(),
            lookahead: self.lookahead.items.clone(),
            ana: self.lookahead.ana.clone(),
            tokens: self.chart.accepted().iter().map(|t| t.surface.clone()).collect(),
            text: self.discourse.iter().map(|s| s.text()).collect(),
            paraphrases: self.discourse.iter().map(|s| s.paraphrase()).collect(),
            asp: render(&self.program),
            answersets: self.answer_sets.iter().map(|s| s.to_string()).collect(),
            spelling: Vec::new(),
            addword: None,
            error: self.solve_error.clone(),
        }
    }

    /// An error reply that still shows the (unchanged) panes.
    pub fn error_response(&self, err: &SessionError) -> Response {
        let mut r = self.response(Status::Error);
        r.error = Some(err.body());
        r
    }

    fn check_position(&self, snum: usize, pos: usize) -> Result<(), SessionError> {
        if snum != self.chart.snum() || pos != self.chart.next_pos() {
            return Err(SessionError::PositionMismatch { snum: self.chart.snum(), pos: self.chart.next_pos() });
        }
        Ok(())
    }

    fn set_chart(&mut self, chart: ChartState, mut lookahead: LookaheadSet) {
        lookahead.ana = anaphoric_expressions(&self.parser, &self.discourse, &chart);
        self.chart = chart;
        self.lookahead = lookahead;
    }

    pub fn handle_token(&mut self, token: &str, pos: usize, snum: usize, force: bool) -> Result<Response, SessionError> {
        self.check_position(snum, pos)?;
        let tok = Token::new(token, snum, pos);
        let ext = self
            .parser
            .extend(&self.chart, &tok)
            .map_err(|_| SessionError::PositionMismatch { snum: self.chart.snum(), pos: self.chart.next_pos() })?;
        match ext {
            Extension::Accepted(state, la) => {
                self.pending_suggestions.clear();
                if state.is_complete() {
                    self.complete(state, true)?;
                    Ok(self.response(Status::SentenceComplete))
                } else {
                    self.set_chart(state, la);
                    Ok(self.response(Status::Accepted))
                }
            }
            Extension::Rejected(RejectReason::UnknownWord) => {
                self.pending_suggestions = suggest(token, self.parser.lexicon(), DEFAULT_MAX_DISTANCE);
                let mut r = self.response(Status::RejectedUnknown);
                r.spelling = self.pending_suggestions.clone();
                if force && tok.kind == TokenKind::Word {
                    r.addword = Some(AddWordChallenge { form: token.to_string(), categories: self.addable_categories(token) });
                }
                Ok(r)
            }
            Extension::Rejected(RejectReason::NoParse) => {
                self.pending_suggestions.clear();
                Ok(self.response(Status::RejectedNoparse))
            }
        }
    }

    /// Open-class categories admissible at the next position.
    fn open_categories(&self) -> Vec<LexCategory> {
        self.lookahead
            .categories()
            .filter_map(|c| match c {
                LookaheadCategory::Lex(c) if c.is_open() => Some(c),
                _ => None,
            })
            .collect()
    }

    /// The parser extended with `form` as a `category` word, if the derived
    /// entry fits at the next position.
    fn tentative(&self, form: &str, category: LexCategory) -> Result<Option<(Parser, LexEntry)>, LexiconError> {
        let mut lexicon = (**self.parser.lexicon()).clone();
        let entry = lexicon.add_entry(form, category)?;
        let parser = self.parser.with_lexicon(Arc::new(lexicon));
        let tok = Token::new(form, self.chart.snum(), self.chart.next_pos());
        let fits = matches!(parser.extend(&self.chart, &tok), Ok(Extension::Accepted(..)));
        Ok(fits.then_some((parser, entry)))
    }

    /// Categories under which an unknown `form` could be added here.
    fn addable_categories(&self, form: &str) -> Vec<LexCategory> {
        self.open_categories().into_iter().filter(|&c| matches!(self.tentative(form, c), Ok(Some(_)))).collect()
    }

    /// Finishes the sentence in `state`: semantics, translation and,
    /// if `solve`, the answer sets. Nothing changes on error.
    fn complete(&mut self, state: ChartState, solve: bool) -> Result<(), SessionError> {
        let sentence = drs_of(&self.parser, &state)?;
        let resolved = resolve(&sentence, &self.discourse)?;
        let program = translate_discourse(self.discourse.iter().chain([&resolved]).map(|s| &s.drs))?;
        self.discourse.push(resolved);
        self.program = program;
        if solve {
            self.refresh_answer_sets();
        }
        let (chart, la) = self.parser.init(state.snum() + 1);
        self.set_chart(chart, la);
        Ok(())
    }

    fn refresh_answer_sets(&mut self) {
        match solver::solve(&self.program, self.limit) {
            Ok((sets, _)) => {
                self.answer_sets = sets;
                self.solve_error = None;
            }
            Err(e) => {
                self.answer_sets.clear();
                self.solve_error = Some(solve_error_body(&e));
            }
        }
    }

    pub fn handle_retract(&mut self, to_pos: usize, snum: usize) -> Result<Response, SessionError> {
        if snum < self.chart.snum() {
            return Err(SessionError::SentenceAlreadySubmitted(snum));
        }
        if snum > self.chart.snum() {
            return Err(SessionError::PositionMismatch { snum: self.chart.snum(), pos: self.chart.next_pos() });
        }
        let accepted = self.chart.accepted().len();
        let (chart, la) = self
            .parser
            .retract(&self.chart, to_pos)
            .map_err(|_| SessionError::BadPosition { to_pos, accepted })?;
        self.pending_suggestions.clear();
        self.set_chart(chart, la);
        Ok(self.response(Status::Accepted))
    }

    pub fn handle_add_word(&mut self, form: &str, category: &str, pos: usize, snum: usize) -> Result<Response, SessionError> {
        let category: LexCategory = category.parse()?;
        if !category.is_open() {
            return Err(LexiconError::ClosedCategory(category).into());
        }
        self.check_position(snum, pos)?;
        if !self.open_categories().contains(&category) {
            return Err(SessionError::NotAdmissibleHere { category, pos });
        }
        // the word must fit here with its derived features, e.g. verb number
        let Some((parser, entry)) = self.tentative(form, category)? else {
            return Err(SessionError::NotAdmissibleHere { category, pos });
        };
        self.parser = parser;
        self.additions.push(entry);
        self.handle_token(form, pos, snum, false)
    }

    fn path(dir: &Path, name: &str) -> Result<PathBuf, SessionError> {
        if !valid_file_name(name) {
            return Err(SessionError::BadName(name.to_string()));
        }
        Ok(dir.join(format!("{name}.{FILE_EXTENSION}")))
    }

    pub fn save(&self, dir: &Path, name: &str) -> Result<Response, SessionError> {
        let path = Session::path(dir, name)?;
        let io_err = |e: io::Error| SessionError::Io(e.to_string());
        fs::create_dir_all(dir).map_err(io_err)?;
        fs::write(&path, self.document().to_text()).map_err(io_err)?;
        Ok(self.response(Status::Saved))
    }

    /// Resets the session and replays a saved file. On failure the session
    /// is left as it was.
    pub fn load(&mut self, dir: &Path, name: &str) -> Result<Response, SessionError> {
        let path = Session::path(dir, name)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(SessionError::FileMissing(name.to_string())),
            Err(e) => return Err(SessionError::Io(e.to_string())),
        };
        let doc = Document::parse(&text)?;
        let fresh = Session::new(self.id.clone(), self.base.clone()).with_limit(self.limit);
        *self = fresh.replayed(&doc)?;
        Ok(self.response(Status::Ready))
    }

    fn replayed(mut self, doc: &Document) -> Result<Session, SessionError> {
        if !doc.additions.is_empty() {
            let mut lexicon = (**self.parser.lexicon()).clone();
            for e in &doc.additions {
                lexicon.restore(e.clone())?;
            }
            self.parser = self.parser.with_lexicon(Arc::new(lexicon));
            self.additions = doc.additions.clone();
            let (chart, la) = self.parser.init(1);
            self.set_chart(chart, la);
        }
        for sentence in &doc.sentences {
            self.replay_sentence(sentence)?;
        }
        if !doc.sentences.is_empty() {
            self.refresh_answer_sets();
        }
        Ok(self)
    }

    fn replay_sentence(&mut self, sentence: &str) -> Result<(), SessionError> {
        let snum = self.chart.snum();
        let tokens = tokenize_sentence(sentence);
        let failure = |pos: usize, detail: String| SessionError::ReplayFailure { snum, pos, detail };
        let mut state = self.chart.clone();
        for (i, t) in tokens.iter().enumerate() {
            let pos = i + 1;
            match self.parser.extend(&state, &Token::new(t.clone(), snum, pos)) {
                Ok(Extension::Accepted(next, _)) => state = next,
                Ok(Extension::Rejected(r)) => {
                    let why = match r {
                        RejectReason::UnknownWord => format!("unknown word `{t}`"),
                        RejectReason::NoParse => format!("`{t}` does not fit here"),
                    };
                    return Err(failure(pos, why));
                }
                Err(e) => return Err(failure(pos, e.to_string())),
            }
        }
        if !state.is_complete() {
            return Err(failure(tokens.len() + 1, "sentence is incomplete".to_string()));
        }
        let pos = tokens.len();
        self.complete(state, false).map_err(|e| failure(pos, e.to_string()))
    }

    /// Appends a whole sentence, as typed token by token.
    pub fn submit_sentence(&mut self, sentence: &str) -> Result<Response, SessionError> {
        self.replay_sentence(sentence)?;
        self.refresh_answer_sets();
        Ok(self.response(Status::SentenceComplete))
    }
}
