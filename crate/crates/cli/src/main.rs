use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ghd_core::covering::{det_complexity_bounds, greedy_covering_code};
use ghd_core::experiments::{
    compare_bounds, run_experiment, ExperimentConfig, OutputFormat, ProtocolKind,
};
use ghd_core::streaming::{
    encode_streams, exact_f0, ghd_via_streaming, space_lower_bound, ExactBitmap,
};
use ghd_core::{ball_volume, random_pair_at_distance};

/// Exit status for a report containing a failed bound check.
const VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ghd",
    version,
    about = "Gap Hamming distance protocols and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hamming ball volume V(n, r), exact and as log2.
    Volume { n: usize, r: i64 },
    /// Complexity bounds.
    #[command(subcommand)]
    Bounds(Bounds),
    /// Run an experiment grid and print its report.
    Bench {
        protocol: BenchProtocol,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output format.
        #[arg(long)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair a sampling report and a sketch report on (n, L, U, s).
    Compare { sampling: PathBuf, sketch: PathBuf },
    /// Covering code construction.
    #[command(subcommand)]
    Code(Code),
    /// Walk through a worked example.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Subcommand)]
enum Bounds {
    /// Deterministic sandwich for L = 0, U = t.
    Det { n: usize, t: usize },
    /// Space lower bound for p-pass c-approximate distinct counting.
    Stream { n: usize, c: f64, p: usize },
}

#[derive(Subcommand)]
enum Code {
    /// Greedy covering code of length n and radius r, in text form.
    Greedy { n: usize, r: usize },
}

#[derive(Subcommand)]
enum Demo {
    /// Distinct-count reduction on one random pair.
    Stream {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1.5)]
        c: f64,
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Hamming distance of the generated pair.
        #[arg(long, default_value_t = 50)]
        distance: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory to write the `u.txt` and `v.txt` stream fixtures to.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchProtocol {
    Sampling,
    Sketch,
    Det,
    Stream,
}

impl BenchProtocol {
    fn kind(self) -> ProtocolKind {
        match self {
            BenchProtocol::Sampling => ProtocolKind::Sampling,
            BenchProtocol::Sketch => ProtocolKind::Sketch,
            BenchProtocol::Det => ProtocolKind::Deterministic,
            BenchProtocol::Stream => ProtocolKind::Streaming,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Volume { n, r } => {
            let v = ball_volume(n, r)?;
            println!("V({n}, {r}) = {}", v.value);
            println!("log2 = {:.6}", v.log2());
        }
        Command::Bounds(Bounds::Det { n, t }) => {
            let b = det_complexity_bounds(n, t)?;
            println!("n = {n}, t = {t}");
            println!("lower = {:.6}", b.lower);
            println!("upper = {:.6}", b.upper);
        }
        Command::Bounds(Bounds::Stream { n, c, p }) => {
            let b = space_lower_bound(n, c, p)?;
            println!("n = {n}, c = {c}, p = {p}, t = {}", b.t);
            println!("space >= {:.6} bits", b.exact);
            println!("asymptotic n(2-c)^2/p = {:.6}", b.asymptotic);
        }
        Command::Bench {
            protocol,
            config,
            format,
            out,
        } => return bench(protocol, &config, format, out.as_deref()),
        Command::Compare { sampling, sketch } => compare(&sampling, &sketch)?,
        Command::Code(Code::Greedy { n, r }) => {
            print!("{}", greedy_covering_code(n, r)?.to_text());
        }
        Command::Demo(Demo::Stream {
            n,
            c,
            p,
            distance,
            seed,
            out,
        }) => demo_stream(n, c, p, distance, seed, out.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn bench(
    protocol: BenchProtocol,
    path: &Path,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let config = load_config(path)?;
    if config.protocol != protocol.kind() {
        bail!(
            "{} describes a {} experiment",
            path.display(),
            config.protocol.name()
        );
    }
    let report = run_experiment(&config)?;
    let format = match format {
        Some(Format::Csv) => OutputFormat::Csv,
        Some(Format::Json) => OutputFormat::Json,
        None => config.format,
    };
    let text = match format {
        OutputFormat::Csv => report.to_csv()?,
        OutputFormat::Json => report.to_json()? + "\n",
    };
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    if report.has_violation() {
        let failed = report
            .records
            .iter()
            .filter(|r| r.bound_satisfied == Some(false))
            .count();
        eprintln!("{failed} grid point(s) violated their bound");
        return Ok(ExitCode::from(VIOLATION));
    }
    Ok(ExitCode::SUCCESS)
}

fn compare(sampling: &Path, sketch: &Path) -> Result<()> {
    let mut records = run_experiment(&load_config(sampling)?)?.records;
    records.extend(run_experiment(&load_config(sketch)?)?.records);
    let rows = compare_bounds(&records)?;
    println!(
        "n,L,U,s,sampling_bits,sketch_bits,sampling_rate,sketch_rate,cube_root_exceeds_linear"
    );
    for r in rows {
        println!(
            "{},{},{},{},{},{},{:.3},{:.3},{}",
            r.n,
            r.lower,
            r.upper,
            r.s,
            r.sampling_bits,
            r.sketch_bits,
            r.sampling_rate,
            r.sketch_rate,
            r.cube_root_exceeds_linear
        );
    }
    Ok(())
}

fn demo_stream(
    n: usize,
    c: f64,
    p: usize,
    distance: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let (x, y) = random_pair_at_distance(n, distance, seed)?;
    let (u, v) = encode_streams(&x, &y)?;
    let bound = space_lower_bound(n, c, p)?;
    let (output, run) = ghd_via_streaming(
        || ExactBitmap::new(2 * n, p).expect("valid universe"),
        c,
        &x,
        &y,
    )?;
    println!("x = {x}");
    println!("y = {y}");
    println!("H(x, y) = {}, t = {}", run.distance, run.t);
    println!(
        "F0(u.v) = {} (n + H = {})",
        exact_f0(&u.concat(&v)?),
        n + run.distance
    );
    println!(
        "estimate = {}, threshold n + t = {}",
        run.estimate,
        n + run.t
    );
    println!(
        "state S = {} bits, passes = {}, hand-offs = {}, communication = {} (2pS = {})",
        run.state_bits,
        run.passes,
        run.handoffs,
        run.communication,
        run.budget()
    );
    println!("space lower bound = {:.3} bits", bound.exact);
    println!("output = {}", u8::from(output));
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("u.txt"), u.to_fixture())?;
        std::fs::write(dir.join("v.txt"), v.to_fixture())?;
        println!("fixtures written to {}", dir.display());
    }
    Ok(())
}
