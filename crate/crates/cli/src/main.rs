//! `gdm`: replay session documents, score text and run the session service.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdm_core::affect::{emotion_score, fuse_affect, AffectAnalyzer, AffectWeights, Emotion};
use gdm_core::consensus::FeedbackFis;
use gdm_core::decision::PreferenceFis;
use gdm_core::pipeline::Engine;
use gdm_core::session::{Session, SessionError};
use gdm_core::Execution;
use gdm_service::{AppState, Store};

#[derive(Parser)]
#[command(name = "gdm", version, about = "Fuzzy group decision making")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a session document through the whole pipeline and write a report.
    Run {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        fis: FisArgs,
        /// Override the session's affect weights.
        #[arg(long, value_enum)]
        affect: Option<AffectMode>,
        /// Also print a human-readable rendering to stdout.
        #[arg(long)]
        table: bool,
    },
    /// Print the affect scores of a piece of text.
    Score {
        #[arg(long)]
        text: String,
        #[arg(long)]
        sentiment_lexicon: Option<PathBuf>,
        #[arg(long)]
        emotion_lexicon: Option<PathBuf>,
        #[arg(long, requires = "beta", default_value_t = AffectWeights::FUSED.alpha())]
        alpha: f64,
        #[arg(long, requires = "alpha", default_value_t = AffectWeights::FUSED.beta())]
        beta: f64,
    },
    /// Serve the session HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        #[arg(long, default_value = "gdm-data")]
        data: PathBuf,
        #[command(flatten)]
        fis: FisArgs,
        /// Affect weights for sessions that do not choose their own.
        #[arg(long, value_enum, default_value_t = AffectMode::Fused)]
        affect: AffectMode,
    },
}

#[derive(Args)]
struct FisArgs {
    /// Preference FIS configuration (TOML).
    #[arg(long, visible_alias = "fis-config")]
    fis_pref: Option<PathBuf>,
    /// Feedback FIS configuration (TOML).
    #[arg(long)]
    fis_feedback: Option<PathBuf>,
    /// Run every batch step on the calling thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AffectMode {
    SentimentOnly,
    Fused,
}

impl AffectMode {
    fn weights(self) -> AffectWeights {
        match self {
            AffectMode::SentimentOnly => AffectWeights::SENTIMENT_ONLY,
            AffectMode::Fused => AffectWeights::FUSED,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PANEL: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            session,
            out,
            fis,
            affect,
            table,
        } => run(&session, &out, &fis, affect, table),
        Command::Score {
            text,
            sentiment_lexicon,
            emotion_lexicon,
            alpha,
            beta,
        } => score(
            &text,
            sentiment_lexicon.as_deref(),
            emotion_lexicon.as_deref(),
            alpha,
            beta,
        ),
        Command::Serve {
            addr,
            data,
            fis,
            affect,
        } => serve(&addr, &data, &fis, affect),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gdm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn engine(fis: &FisArgs) -> Result<Engine, Failure> {
    let mut engine = Engine::shipped();
    if let Some(path) = &fis.fis_pref {
        engine.preference = PreferenceFis::load(path)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &fis.fis_feedback {
        engine.feedback = FeedbackFis::load(path)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    if fis.sequential {
        engine.exec = Execution::Sequential;
    }
    Ok(engine)
}

fn run(
    session_path: &Path,
    out: &Path,
    fis: &FisArgs,
    affect: Option<AffectMode>,
    table: bool,
) -> Result<(), Failure> {
    let engine = engine(fis)?;
    let text = std::fs::read_to_string(session_path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", session_path.display())))?;
    let mut session = Session::from_json(&text)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", session_path.display())))?;
    if let Some(mode) = affect {
        session.affect = mode.weights();
    }
    let report = engine.report(&session).map_err(|e| {
        let code = match e {
            SessionError::PanelIncomplete(_) | SessionError::EmptyPanel => EXIT_PANEL,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e)
    })?;
    std::fs::write(out, report.to_json())
        .map_err(|e| Failure::new(EXIT_RUNTIME, format!("{}: {e}", out.display())))?;
    if table {
        print!("{}", report.render_table());
    }
    Ok(())
}

fn score(
    text: &str,
    sentiment: Option<&Path>,
    emotion: Option<&Path>,
    alpha: f64,
    beta: f64,
) -> Result<(), Failure> {
    let weights = AffectWeights::new(alpha, beta).map_err(|e| Failure::new(EXIT_INPUT, e))?;
    let analyzer =
        AffectAnalyzer::load(sentiment, emotion).map_err(|e| Failure::new(EXIT_INPUT, e))?;
    let s = analyzer.sentiment.compound(text);
    let vector = analyzer.emotion.vector(text);
    let e = emotion_score(&vector);
    let fused = fuse_affect(s, e, weights);
    println!("sentiment {s}");
    for emotion in Emotion::ALL {
        println!("{} {}", emotion.as_str(), vector.get(emotion));
    }
    println!("emotion {e}");
    println!("fused {}", fused.fused);
    Ok(())
}

fn serve(addr: &str, data: &Path, fis: &FisArgs, affect: AffectMode) -> Result<(), Failure> {
    let engine = engine(fis)?;
    let store = Store::open(data).map_err(|e| Failure::new(EXIT_RUNTIME, e))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::new(EXIT_RUNTIME, e))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::new(EXIT_RUNTIME, format!("cannot listen on {addr}: {e}")))?;
        let local = listener
            .local_addr()
            .map_err(|e| Failure::new(EXIT_RUNTIME, e))?;
        log::info!("listening on http://{local}");
        let state = AppState::new(store, engine, affect.weights());
        gdm_service::serve(listener, state, shutdown_signal())
            .await
            .map_err(|e| Failure::new(EXIT_RUNTIME, e))?;
        log::info!("stopped");
        Ok(())
    })
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}
