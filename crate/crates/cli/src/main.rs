//! `peng`: run a text through the same pipeline as the server, in batch.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser as ClapParser, Subcommand};

use peng::text::{tokenize_sentence, Document};
use peng::{Grammar, Lexicon, Parser, Response, Session, SessionError, Status};

#[derive(ClapParser)]
#[command(name = "peng", version, about = "Translate controlled-language texts to ASP and solve them")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Lexicon file replacing the seed lexicon
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Grammar file replacing the built-in fragment
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Maximum number of answer sets
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Print the session state as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ASP program for a text
    Translate { file: PathBuf },
    /// Print the program followed by its answer sets
    Solve { file: PathBuf },
    /// Print what may follow the given position
    Lookahead {
        file: PathBuf,
        /// Position as `snum:pos`
        #[arg(long, value_parser = parse_at)]
        at: (usize, usize),
    },
}

fn parse_at(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected `snum:pos`")?;
    let snum: usize = a.parse().map_err(|_| format!("bad sentence number `{a}`"))?;
    let pos: usize = b.parse().map_err(|_| format!("bad position `{b}`"))?;
    if snum == 0 || pos == 0 {
        return Err("sentence numbers and positions start at 1".into());
    }
    Ok((snum, pos))
}

/// A failure with its exit code.
struct Failure(u8, String);

fn usage(msg: String) -> Failure {
    Failure(2, msg)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn build_parser(opts: &Opts) -> Result<Parser, Failure> {
    let grammar = match &opts.grammar {
        Some(p) => Grammar::parse(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => Grammar::default_fragment(),
    };
    let lexicon = match &opts.lexicon {
        Some(p) => Lexicon::parse(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => Lexicon::seed(),
    };
    Parser::new(Arc::new(grammar), Arc::new(lexicon)).map_err(|e| usage(e.to_string()))
}

fn load(opts: &Opts, file: &Path) -> Result<(Parser, Document), Failure> {
    let parser = build_parser(opts)?;
    let doc = Document::parse(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    Ok((parser, doc))
}

fn session(opts: &Opts, file: &Path, parser: Parser, doc: &Document) -> Result<Session, Failure> {
    let s = Session::from_document("cli", parser, doc).map_err(|e| parse_failure(file, e))?;
    Ok(match opts.limit {
        Some(limit) => s.with_limit(limit),
        None => s,
    })
}

fn parse_failure(file: &Path, e: SessionError) -> Failure {
    match e {
        SessionError::ReplayFailure { snum, pos, detail } => {
            Failure(1, format!("{}: sentence {snum}, position {pos}: {detail}", file.display()))
        }
        e => Failure(1, format!("{}: {e}", file.display())),
    }
}

fn print_json(r: &Response) {
    println!("{}", serde_json::to_string_pretty(r).expect("responses serialise"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Translate { file } => {
            let (parser, doc) = load(opts, file)?;
            let s = session(opts, file, parser, &doc)?;
            if opts.json {
                print_json(&s.response(Status::Ready));
            } else {
                print!("{}", peng::asp::render(s.program()));
            }
        }
        Command::Solve { file } => {
            let (parser, doc) = load(opts, file)?;
            let s = session(opts, file, parser, &doc)?;
            let r = s.response(Status::Ready);
            if opts.json {
                print_json(&r);
            } else {
                print!("{}", r.asp);
                for set in &r.answersets {
                    println!("{set}");
                }
            }
            if let Some(e) = r.error {
                return Err(Failure(1, format!("{}: {}", file.display(), e.detail)));
            }
        }
        Command::Lookahead { file, at: (snum, pos) } => {
            let (parser, mut doc) = load(opts, file)?;
            let (snum, pos) = (*snum, *pos);
            let current = doc.sentences.get(snum - 1).cloned().unwrap_or_default();
            if snum > doc.sentences.len() + 1 {
                return Err(usage(format!("{}: has only {} sentences", file.display(), doc.sentences.len())));
            }
            doc.sentences.truncate(snum - 1);
            let mut s = session(opts, file, parser, &doc)?;
            let tokens = tokenize_sentence(&current);
            if pos > tokens.len() + 1 {
                return Err(usage(format!("sentence {snum} has only {} tokens", tokens.len())));
            }
            let mut r = s.response(Status::Ready);
            for (i, t) in tokens[..pos - 1].iter().enumerate() {
                r = s.handle_token(t, i + 1, snum, false).map_err(|e| parse_failure(file, e))?;
                if r.status != Status::Accepted {
                    return Err(Failure(
                        1,
                        format!("{}: sentence {snum}, position {}: `{t}` rejected ({:?})", file.display(), i + 1, r.status),
                    ));
                }
            }
            if opts.json {
                print_json(&r);
            } else {
                for item in &r.lookahead {
                    println!("{}: {}", item.category.name(), item.forms.join(", "));
                }
                if !r.ana.is_empty() {
                    println!("anaphora: {}", r.ana.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("peng: {msg}");
            ExitCode::from(code)
        }
    }
}
