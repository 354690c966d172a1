use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use polygym::env::{Engine, EngineConfig};
use polygym::eval::{
    check_legality, export_schedule, export_schedule_json, import_measurement, parse_schedule_any, LegalityOptions,
    RewardConfig, COST_MODEL_VERSION,
};
use polygym::explorer::{
    emit_stats, parse_trace, replay_trace, run_explore, ExploreConfig, Heuristic, HeuristicKind, Probability,
    RunSettings,
};
use polygym::scop::{parse_scop, ParamBinding, Scop};

#[derive(Parser)]
#[command(name = "polygym", version, about = "Search legal polyhedral schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct EngineArgs {
    /// SCoP description (JSON).
    #[arg(long)]
    scop: PathBuf,
    /// Largest coefficient weight N.
    #[arg(long, default_value_t = 3)]
    coeff_max: u32,
    /// Cap on schedule dimensions (default 2|D| + 2).
    #[arg(long)]
    max_dims: Option<usize>,
    /// `proxy` or `external:FILE`.
    #[arg(long, default_value = "proxy")]
    reward: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run heuristic episodes and write statistics.
    Explore {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value = "bias_coeff_0")]
        heuristic: HeuristicKind,
        /// Probability of the favored action (`0.9` or `9/10`).
        #[arg(long)]
        bias: Option<Probability>,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record per-episode wall time (reports are then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay a recorded action trace.
    Replay {
        #[command(flatten)]
        engine: EngineArgs,
        /// JSON array of action names and coefficient choices.
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value = "ep1")]
        episode_id: String,
    },
    /// Check a schedule (text or JSON) for legality.
    Check {
        #[arg(long)]
        scop: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Value of every parameter for the enumeration oracle.
        #[arg(long, default_value_t = 5)]
        param: i64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_scop(path: &Path) -> Result<Scop> {
    parse_scop(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn build_engine(args: &EngineArgs) -> Result<(Arc<Engine>, String)> {
    let scop = load_scop(&args.scop)?;
    let reward = if args.reward == "proxy" {
        RewardConfig::proxy(&scop)
    } else if let Some(file) = args.reward.strip_prefix("external:") {
        let measurements = import_measurement(&read(Path::new(file))?)?;
        RewardConfig::external(&scop, measurements)
    } else {
        bail!("--reward must be `proxy` or `external:FILE`, found `{}`", args.reward);
    };
    let cfg = EngineConfig { coeff_max: args.coeff_max, max_dims: args.max_dims, reward };
    Ok((Arc::new(Engine::new(scop, cfg)?), args.reward.clone()))
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("POLYGYM_LOG", "warn")).init();
    match Cli::parse().command {
        Command::Explore { engine, heuristic, bias, iters, seed, timing, out } => {
            if iters == 0 {
                bail!("--iters must be at least 1");
            }
            let (eng, reward_mode) = build_engine(&engine)?;
            let mut h = Heuristic::new(heuristic);
            if let Some(b) = bias {
                h = h.with_bias(b);
            }
            let mut cfg = ExploreConfig::new(h, iters, seed);
            cfg.timing = timing;
            let report = run_explore(&eng, &cfg)?;
            let settings = RunSettings {
                scop: eng.scop().name.clone(),
                heuristic: heuristic.to_string(),
                bias: h.bias.to_string(),
                iterations: iters,
                seed,
                coeff_max: engine.coeff_max,
                max_dims: eng.construction_config().max_dims,
                reward_mode,
                cost_model: COST_MODEL_VERSION.to_string(),
            };
            emit_stats(&report, &settings, eng.scop(), &out)?;
            let counts = report.counts();
            println!("episodes: {}", report.episodes.len());
            for (k, v) in &counts {
                println!("  {k}: {v}");
            }
            if let Some(best) = report.best() {
                println!("best reward: {} ({})", best.outcome.reward, best.id);
            }
            println!("reports written to {}", out.display());
        }
        Command::Replay { engine, trace, episode_id } => {
            let (eng, _) = build_engine(&engine)?;
            let actions = parse_trace(&read(&trace)?)?;
            let result = replay_trace(&eng, &actions, &episode_id)?;
            if let Some(s) = result.episode.construction_state() {
                println!("construction state: {s}");
            }
            if let Some(e) = result.episode.exploration() {
                println!("exploration state: {}", e.state);
            }
            println!("outcome: {}", result.outcome.kind);
            println!("reward: {}", result.outcome.reward);
            if let Some(d) = &result.outcome.detail {
                println!("detail: {d}");
            }
            if let Some(s) = &result.outcome.schedule {
                print!("{}", export_schedule(s, eng.scop())?);
            }
        }
        Command::Check { scop, schedule, param } => {
            let scop = load_scop(&scop)?;
            let sched = parse_schedule_any(&read(&schedule)?, &scop)?;
            let deps = scop.dependences_or_computed();
            let report = check_legality(&sched, &scop, &deps, &LegalityOptions::new(ParamBinding::uniform(&scop, param)))?;
            print!("{report}");
            print!("{}", export_schedule_json(&sched, &scop)?);
            if !report.legal {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
