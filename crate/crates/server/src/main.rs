use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use animlens_server::report::{run_report, ReportError, ReportOptions};
use animlens_server::{router, AppState, EngineConfig};

#[derive(Debug, Parser)]
#[command(name = "animlens", version, about = "Compare sets of skeletal animations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Serve the HTTP API (and optionally the built UI).
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory of static UI files served under `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Directory where sessions are saved as JSON documents.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineConfig,
    },
    /// Write a comparison report for a set of BVH or Clip-JSON files.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Camera JSON used for the joint lens.
        #[arg(long)]
        camera: Option<PathBuf>,
        /// Scene JSON: a list of primitives for collision events.
        #[arg(long)]
        scene: Option<PathBuf>,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        /// Also write per-lens SVG timeline strips.
        #[arg(long)]
        svg: bool,
        /// Joint drawn in the joint-lens strip.
        #[arg(long)]
        joint: Option<String>,
        #[command(flatten)]
        engine: EngineConfig,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match Cli::parse().command {
        Command::Serve { port, host, static_dir, data_dir, engine } => serve(&host, port, static_dir, data_dir, engine),
        Command::Report { files, camera, scene, out, svg, joint, engine } => {
            let options = ReportOptions { files, camera, scene, out, svg, joint, config: engine };
            match run_report(&options) {
                Ok(_) => ExitCode::SUCCESS,
                Err(ReportError::Input(e)) => {
                    eprintln!("{}", serde_json::to_string(&e).expect("error payload serializes"));
                    ExitCode::from(2)
                }
                Err(ReportError::Io(e)) => {
                    eprintln!("animlens: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}

fn serve(host: &str, port: u16, static_dir: Option<PathBuf>, data_dir: Option<PathBuf>, engine: EngineConfig) -> ExitCode {
    let run = async move {
        let mut state = AppState::new(engine);
        if let Some(dir) = data_dir {
            state = state.with_data_dir(dir)?;
        }
        let app = router(Arc::new(state), static_dir);
        let addr: SocketAddr = format!("{host}:{port}").parse()?;
        let listener = tokio::net::TcpListener::bind(addr).await?;
        tracing::info!("listening on http://{addr}");
        axum::serve(listener, app).await?;
        anyhow::Ok(())
    };
    let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
    match runtime.block_on(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            tracing::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
