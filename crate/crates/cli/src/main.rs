//! `clarity-bench`: generate scene datasets, score them with the baseline
//! hearing aid, and verify leaderboard tables.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clarity_core::exec::Execution;
use clarity_core::harness::{score_dataset, write_scores_csv, RunManifest};
use clarity_core::hearing_aid::Audiogram;
use clarity_core::hrtf::HrtfSet;
use clarity_core::metrics::AuditoryConfig;
use clarity_core::scenes::{
    generate_dataset, load_manifest, DatasetConfig, Fidelity, Renderer, MANIFEST_FILE,
};

const THREADS_VAR: &str = "CLARITY_BENCH_THREADS";

#[derive(Parser)]
#[command(name = "clarity-bench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    Simulated,
    #[value(name = "measured_like")]
    MeasuredLike,
}

impl From<FidelityArg> for Fidelity {
    fn from(f: FidelityArg) -> Self {
        match f {
            FidelityArg::Simulated => Fidelity::Simulated,
            FidelityArg::MeasuredLike => Fidelity::MeasuredLike,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Render a seeded batch of scenes with a manifest.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        fidelity: FidelityArg,
        #[arg(long)]
        out: PathBuf,
        /// Scene length in seconds.
        #[arg(long, default_value_t = 3.0)]
        duration: f64,
        /// HRTF set (JSON); spherical-head filters when omitted.
        #[arg(long)]
        hrtf: Option<PathBuf>,
    },
    /// Score a dataset through the baseline hearing aid.
    Score {
        #[arg(long)]
        dataset: PathBuf,
        /// Audiogram (JSON).
        #[arg(long)]
        audiogram: PathBuf,
        /// Output CSV; a run manifest is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify score tables and report correlations.
    Report {
        /// Score CSVs written by `score`, or leaderboard tables.
        #[arg(long, num_args = 1..)]
        scores: Vec<PathBuf>,
        /// Include the bundled leaderboard table, or the table at PATH.
        #[arg(long = "paper-table", num_args = 0..=1, value_name = "PATH", default_missing_value = report::BUNDLED)]
        table: Option<String>,
        /// Write the checked rows, Ave recomputed, to this CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run_manifest_path(out: &Path) -> PathBuf {
    out.with_extension("run.json")
}

fn run(command: Command) -> clarity_core::Result<()> {
    match command {
        Command::Generate {
            n,
            seed,
            fidelity,
            out,
            duration,
            hrtf,
        } => {
            let mut config = DatasetConfig::new(n, fidelity.into(), seed);
            config.duration_s = duration;
            let renderer = match hrtf {
                Some(p) => Renderer::new(&HrtfSet::load(p)?)?,
                None => Renderer::with_default_hrtfs(config.rate)?,
            };
            generate_dataset(&config, &out, &renderer, Execution::Parallel)?;
            println!("{}", out.join(MANIFEST_FILE).display());
        }
        Command::Score {
            dataset,
            audiogram,
            out,
        } => {
            let audiogram = Audiogram::load(&audiogram)?;
            let records = load_manifest(&dataset)?;
            let scores = score_dataset(
                &dataset,
                &audiogram,
                &AuditoryConfig::default(),
                Execution::Parallel,
            )?;
            write_scores_csv(&out, &scores)?;
            let first = records.first();
            let run = RunManifest::new(
                first.map(|r| r.dataset_seed),
                first.map(|r| r.profile.clone()),
                audiogram,
                scores,
            );
            run.save(run_manifest_path(&out))?;
            let m = &run.means;
            println!(
                "scenes {}  haspi_like {:.3}  hasqi_like {:.3}  ave {:.3}",
                m.count, m.haspi_like, m.hasqi_like, m.ave
            );
        }
        Command::Report { scores, table, out } => {
            if scores.is_empty() && table.is_none() {
                return Err(clarity_core::Error::Argument(
                    "nothing to report: pass --scores and/or --paper-table".into(),
                ));
            }
            let text = report::run(&scores, table.as_deref(), out.as_deref())?;
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
