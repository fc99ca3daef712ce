use std::path::PathBuf;

use clap::{Parser, Subcommand};

use tsvf_cli::{cmd_abl, cmd_kcbs_scan, cmd_paradox_search, cmd_three_box, ParadoxOpts, ScanOpts};
use tsvf_core::mc::SimConfig;

#[derive(Parser)]
#[command(
    name = "tsvf",
    version,
    about = "Retrodictive probability assignments on pre/post-selected ensembles: \
             scenario evaluation, exclusivity-constrained cycle scans, paradox search, \
             and Monte-Carlo verification"
)]
struct Cli {
    /// Cap the worker-thread count (default: machine parallelism)
    #[arg(long, global = true, env = "TSVF_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the canonical three-box scenario
    ThreeBox {
        /// Emit a machine-readable JSON report
        #[arg(long)]
        json: bool,
        /// Append a Monte-Carlo verification of each setting
        #[arg(long)]
        mc: bool,
        /// Trials attempted per Monte-Carlo verification
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate a scenario file (JSON): per-setting values and sector label
    Abl {
        /// Path to the scenario JSON document
        scenario: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Exclusivity-constrained scan of K over post-selected states
    KcbsScan {
        #[arg(long, default_value_t = 512)]
        theta_steps: usize,
        #[arg(long, default_value_t = 1024)]
        phi_steps: usize,
        /// Region thresholds; repeatable
        #[arg(long = "k-min", default_values_t = [1.4, 1.5, 1.6, 1.7, 2.0])]
        k_min: Vec<f64>,
        /// Coordinate-descent halvings after the grid pass
        #[arg(long, default_value_t = 40)]
        refine: usize,
        /// Cycle length (odd, 5..=15)
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Also run the coarse two-phase extension of the post-selection
        #[arg(long)]
        phases: bool,
        /// Steps per phase angle for --phases
        #[arg(long, default_value_t = 12)]
        phase_steps: usize,
        /// Also scan the pre-selection over an outer coarse grid
        #[arg(long)]
        scan_pre: bool,
        #[arg(long, default_value_t = 9)]
        pre_theta_steps: usize,
        #[arg(long, default_value_t = 16)]
        pre_phi_steps: usize,
        #[arg(long, default_value = "scan.csv")]
        out_csv: PathBuf,
        #[arg(long, default_value = "summary.json")]
        out_json: PathBuf,
    },
    /// Grid search for paradox witnesses on one adjacent cycle pair
    ParadoxSearch {
        /// Cycle indices of the pair, e.g. --pair 0 1
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        theta_steps: usize,
        #[arg(long, default_value_t = 512)]
        phi_steps: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value = "witnesses.csv")]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // build the global pool before any parallel work
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: could not configure {workers} workers: {e}");
            std::process::exit(1);
        }
    }

    let result = match cli.command {
        Command::ThreeBox {
            json,
            mc,
            samples,
            seed,
        } => cmd_three_box(json, mc.then_some(SimConfig { samples, seed })),
        Command::Abl {
            scenario,
            json,
            mc,
            samples,
            seed,
        } => cmd_abl(&scenario, json, mc.then_some(SimConfig { samples, seed })),
        Command::KcbsScan {
            theta_steps,
            phi_steps,
            k_min,
            refine,
            n,
            phases,
            phase_steps,
            scan_pre,
            pre_theta_steps,
            pre_phi_steps,
            out_csv,
            out_json,
        } => cmd_kcbs_scan(&ScanOpts {
            theta_steps,
            phi_steps,
            k_min,
            refine,
            n,
            phases,
            phase_steps,
            scan_pre,
            pre_theta_steps,
            pre_phi_steps,
            out_csv,
            out_json,
        }),
        Command::ParadoxSearch {
            pair,
            theta_steps,
            phi_steps,
            n,
            out,
        } => cmd_paradox_search(&ParadoxOpts {
            pair: (pair[0], pair[1]),
            theta_steps,
            phi_steps,
            n,
            out,
        }),
    };

    match result {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
