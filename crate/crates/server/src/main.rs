use std::net::SocketAddr;
use std::process::ExitCode;
use std::sync::Arc;

use peng::{Grammar, Lexicon, Parser};
use peng_server::{router, AppState, Config};
use tracing_subscriber::EnvFilter;

/// A lexicon file in the data directory replaces the built-in one.
const LEXICON_FILE: &str = "lexicon.lex";

fn parser(config: &Config) -> Result<Parser, String> {
    let path = config.data_dir.join(LEXICON_FILE);
    let lexicon = match std::fs::read_to_string(&path) {
        Ok(text) => Lexicon::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Lexicon::seed(),
        Err(e) => return Err(format!("{}: {e}", path.display())),
    };
    Parser::new(Arc::new(Grammar::default_fragment()), Arc::new(lexicon)).map_err(|e| e.to_string())
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt().with_env_filter(EnvFilter::from_default_env()).init();
    let config = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("peng-server: {e}");
            return ExitCode::from(2);
        }
    };
    let parser = match parser(&config) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("peng-server: {e}");
            return ExitCode::from(2);
        }
    };
    let app = router(Arc::new(AppState::new(parser, config.data_dir.clone())));
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("peng-server: cannot listen on {addr}: {e}");
            return ExitCode::FAILURE;
        }
    };
    tracing::info!(%addr, data_dir = %config.data_dir.display(), "listening");
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = axum::serve(listener, app).with_graceful_shutdown(shutdown).await {
        eprintln!("peng-server: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
