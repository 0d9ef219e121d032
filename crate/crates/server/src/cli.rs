//! Command-line front end: the session server and the offline map tools.

use std::fs::File;
use std::io::BufWriter;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use treasure_hunter::harness::FixtureSet;
use treasure_hunter::pipeline::{
    optimal_score, run_pipeline, self_play_runs, write_fixtures, write_runs_csv, SelectionCriteria,
};
use treasure_hunter::service::{ServiceConfig, SessionManager};
use treasure_hunter::MapSpec;

#[derive(Debug, Parser)]
#[command(name = "treasure-hunter", version, about = "Treasure Hunter testbed")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve participant sessions over HTTP.
    Serve(ServeArgs),
    /// Generate a map pool, evaluate it by self-play and write selected fixtures.
    Mapgen(MapgenArgs),
    /// Let the assistant play one map on its own and write the scores as CSV.
    Selfplay(SelfplayArgs),
    /// Print the best achievable score on a map.
    Optimal(OptimalArgs),
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "TH_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "TH_BIND", default_value = "127.0.0.1")]
    pub bind: std::net::IpAddr,
    /// Directory holding test-*.json and training-*.json.
    #[arg(long, env = "TH_FIXTURES", default_value = "crates/core/fixtures/maps")]
    pub fixtures: PathBuf,
    #[arg(long, env = "TH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Seconds without a request before a session is sealed as abandoned.
    #[arg(long, env = "TH_IDLE_TIMEOUT", default_value_t = 1800)]
    pub idle_timeout: u64,
    #[arg(long, env = "TH_LOG_DIR", default_value = "logs")]
    pub log_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MapgenArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub pool: usize,
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    #[arg(long, default_value_t = 10)]
    pub select: usize,
    /// Maps whose self-play scores spread wider than this are not eligible.
    #[arg(long)]
    pub max_std_dev: Option<f64>,
    #[arg(long, default_value = "maps")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelfplayArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[arg(long)]
    pub map: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Serve(args) => serve(args),
        Command::Mapgen(args) => mapgen(args),
        Command::Selfplay(args) => selfplay(args),
        Command::Optimal(args) => optimal(args),
    }
}

pub fn mapgen(args: MapgenArgs) -> Result<()> {
    let mut criteria = SelectionCriteria {
        pool_size: args.pool,
        runs_per_map: args.runs,
        select_count: args.select,
        ..SelectionCriteria::default()
    };
    if let Some(sd) = args.max_std_dev {
        criteria.max_std_dev = sd;
    }
    let report = run_pipeline(args.seed, &criteria).context("map selection failed")?;
    let manifest = write_fixtures(&report, &args.out)
        .with_context(|| format!("cannot write fixtures to {}", args.out.display()))?;
    for entry in manifest.tests.iter().chain(&manifest.training) {
        println!(
            "{:<11} pool #{:<3} mean {:>7.1}  sd {:>6.2}  optimal {}",
            entry.id, entry.pool_index, entry.mean, entry.std_dev, entry.optimal
        );
    }
    if let Some(ratio) = manifest.mean_ratio {
        println!("mean score / optimal over test maps: {ratio:.3}");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

pub fn selfplay(args: SelfplayArgs) -> Result<()> {
    let map =
        MapSpec::load(&args.map).with_context(|| format!("cannot read {}", args.map.display()))?;
    let map_id = args
        .map
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("map")
        .to_owned();
    let records = self_play_runs(&map_id, &map, args.runs, args.seed);
    match &args.csv {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_runs_csv(&records, BufWriter::new(file))?;
        }
        None => write_runs_csv(&records, std::io::stdout().lock())?,
    }
    Ok(())
}

pub fn optimal(args: OptimalArgs) -> Result<()> {
    let map =
        MapSpec::load(&args.map).with_context(|| format!("cannot read {}", args.map.display()))?;
    println!("{}", optimal_score(&map)?);
    Ok(())
}

pub fn serve(args: ServeArgs) -> Result<()> {
    let fixtures = FixtureSet::load(&args.fixtures)
        .with_context(|| format!("cannot load fixtures from {}", args.fixtures.display()))?;
    std::fs::create_dir_all(&args.log_dir)
        .with_context(|| format!("cannot create log directory {}", args.log_dir.display()))?;
    let idle_timeout = Duration::from_secs(args.idle_timeout);
    let manager = Arc::new(SessionManager::new(
        fixtures,
        ServiceConfig {
            master_seed: args.seed,
            log_dir: Some(args.log_dir.clone()),
            idle_timeout,
        },
    ));
    let addr = SocketAddr::new(args.bind, args.port);
    tokio::runtime::Runtime::new()?.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        tracing::info!(%addr, seed = args.seed, logs = %args.log_dir.display(), "listening");
        tokio::spawn(reap_idle(Arc::clone(&manager), idle_timeout));
        axum::serve(listener, crate::http::router(manager))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

async fn reap_idle(manager: Arc<SessionManager>, timeout: Duration) {
    let period = (timeout / 4).clamp(Duration::from_secs(1), Duration::from_secs(30));
    let mut tick = tokio::time::interval(period);
    loop {
        tick.tick().await;
        for (token, sealed) in manager.expire_idle(Instant::now()) {
            match sealed {
                Ok(()) => tracing::info!(%token, "session expired"),
                Err(e) => {
                    tracing::warn!(%token, error = %e, "session expired but its log could not be sealed")
                }
            }
        }
    }
}
