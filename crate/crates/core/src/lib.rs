//! Controlled natural language processing pipeline.
//!
//! Sentences are parsed incrementally by an Earley chart parser that reports
//! the admissible continuations (lookahead categories) after every token.
//! Complete sentences are composed into discourse representation structures,
//! anaphoric definite noun phrases are resolved across the discourse, and the
//! result is translated into an answer set program which is then solved.

pub mod asp;
pub mod chart;
pub mod drs;
pub mod grammar;
pub mod lexicon;
pub mod protocol;
pub mod session;
pub mod solver;
pub mod speller;
pub mod text;
pub mod translate;

pub use chart::{ChartState, Extension, LookaheadCategory, LookaheadSet, Parser, Token};
pub use grammar::Grammar;
pub use lexicon::{LexCategory, LexEntry, Lexicon};
pub use protocol::{Response, Status};
pub use session::{Session, SessionError};
