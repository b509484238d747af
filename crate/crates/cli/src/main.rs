//! `coverkit`: build, dualize, extend, verify and render coverings by
//! homothets of a convex polygon.

mod commands;
mod config;
mod polygon;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coverkit", version, about = "Exact non-decomposable coverings by homothets of a convex polygon")]
struct Cli {
    /// Worker threads for parallel checks.
    #[arg(long, global = true, env = "COVERKIT_THREADS")]
    threads: Option<usize>,
    /// TOML file with defaults for threads, delta, epsilon, samples, cap, seed, rounds, max_retries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build T(k,l) for a polygon and write a new scene.
    Build(BuildArgs),
    /// Rebuild T(m,m) with the retry loop and attach its dual scene.
    Dualize(DualizeArgs),
    /// Add avoiding translates until the region is covered m times.
    Extend(ExtendArgs),
    /// Check a property and record the verdict in the scene.
    Verify(VerifyArgs),
    /// Draw one stage of a scene as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// `preset:diamond`, `preset:pentagon`, `preset:trapezoid` or a JSON vertex file.
    #[arg(long)]
    polygon: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    /// Radius of the enclosing disc, e.g. `1/64`.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value = "scene.json")]
    out: PathBuf,
}

#[derive(Args)]
pub struct DualizeArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Also require every inflated scale to lie in [1-eps, 1+eps].
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    max_retries: Option<u32>,
    /// Defaults to overwriting the input scene.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExtendArgs {
    #[arg(long)]
    scene: PathBuf,
    /// `x0,y0,x1,y1` in normalized coordinates.
    #[arg(long, default_value = "-2,-2,2,2", allow_hyphen_values = true)]
    region: String,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Allow repair translates smaller than 1-eps (breaks the scale band).
    #[arg(long)]
    scale_free: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum What {
    Property1,
    Dual,
    Depth,
    Statement1,
    Bands,
    Scale,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Certificate,
    Random,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, value_enum)]
    what: What,
    /// Defaults to `random` for statement1 and `exhaustive` otherwise.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest vertex count for exhaustive enumeration.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum View {
    Polygon,
    Config,
    Dual,
    Extension,
}

#[derive(Args)]
pub struct RenderArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, value_enum)]
    view: View,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    labels: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = config::Config::load(cli.config.as_deref())
        .map_err(commands::Failure::usage)
        .and_then(|cfg| {
            if let Some(n) = cli.threads.or(cfg.threads) {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| commands::Failure::usage(e.to_string()))?;
            }
            match cli.command {
                Command::Build(a) => commands::build(a, &cfg),
                Command::Dualize(a) => commands::dualize(a, &cfg),
                Command::Extend(a) => commands::extend(a, &cfg),
                Command::Verify(a) => commands::verify(a, &cfg),
                Command::Render(a) => commands::render(a),
            }
        });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
