//! hamkac: exact verification of H(2,1;t) and its height-0 Kac modules.
//!
//! Exit codes: 0 all requested checks passed, 1 a mathematical check
//! failed, 2 invalid configuration.

mod config;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::RawOptions;

#[derive(Parser, Debug)]
#[command(
    name = "hamkac",
    about = "Construct the Hamiltonian Lie superalgebra H(2,1;t) over F_p and machine-verify \
             its generalized restricted structure, osp(1|2) zero component, and height-0 Kac \
             module theory (module laws, chi-reduced identities, simplicity, dimensions, \
             isomorphism classification)."
)]
struct Cli {
    /// Prime p > 3
    #[arg(long)]
    p: Option<u64>,

    /// Shape exponents t1,t2 (default 1,1)
    #[arg(long, value_name = "A,B")]
    t: Option<String>,

    /// Characters: comma/semicolon list of I, II, III, custom:d1=..,d2=..
    #[arg(long)]
    chi: Option<String>,

    /// Weights: "all" or a comma list of values in [0, p)
    #[arg(long)]
    lambda: Option<String>,

    /// Checks to run: CSV of gr,osp,module_law,chi_reduced,meataxe,hom,classify,all
    #[arg(long)]
    checks: Option<String>,

    /// Module-law coverage: full or sampled
    #[arg(long)]
    mode: Option<String>,

    /// Master seed; all randomness derives from it by labeled hashing
    #[arg(long)]
    seed: Option<u64>,

    /// Cache directory (the HAMKAC_CACHE environment variable overrides this)
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Report output path (default: hamkac-report-<confighash>.json)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Also print the JSON report to stdout
    #[arg(long)]
    json: bool,

    /// Worker threads for the verification loops (default: all cores)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,

    /// Accept custom characters of height other than 0
    #[arg(long)]
    allow_any_height: bool,

    /// Flat key=value config file; explicit flags take precedence
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let from_cli = RawOptions {
        p: cli.p,
        t: cli.t,
        chi: cli.chi,
        lambda: cli.lambda,
        checks: cli.checks,
        mode: cli.mode,
        seed: cli.seed,
        cache: cli.cache,
        out: cli.out,
        json: if cli.json { Some(true) } else { None },
        workers: cli.workers,
        allow_any_height: if cli.allow_any_height { Some(true) } else { None },
    };
    let raw = match &cli.config {
        Some(path) => match RawOptions::from_file(path) {
            Ok(file_opts) => from_cli.or(file_opts),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => from_cli,
    };
    let job = match raw.resolve().and_then(|j| j.shape().map(|_| j)) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    if let Some(n) = job.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} workers: {e}");
            return ExitCode::from(2);
        }
    }

    let started = std::time::Instant::now();
    let outcome = match pipeline::run(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    // deterministic report, named by the config content hash
    let path = job
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("hamkac-report-{}.json", job.content_hash())));
    let json = match serde_json::to_string_pretty(&outcome.report) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: report serialization failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let must_write = match std::fs::read_to_string(&path) {
        Ok(existing) if existing == json => false,
        Ok(_) => {
            eprintln!(
                "warning: {} exists with different content (stale version?); replacing",
                path.display()
            );
            true
        }
        Err(_) => true,
    };
    if must_write {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                let _ = std::fs::create_dir_all(parent);
            }
        }
        if let Err(e) = std::fs::write(&path, &json) {
            eprintln!("error: cannot write report {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }

    if job.emit_json {
        println!("{json}");
    }
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    eprintln!("report: {} ({} ms)", path.display(), started.elapsed().as_millis());

    if outcome.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
