mod render;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qbpd::analysis::{self, cancellation_stats, qbpd_polynomial, with_jobs, SweepOptions};
use qbpd::oracle::{quantum_double_schubert_defining, quantum_double_schubert_transition};
use qbpd::{enumerate_qbpds, enumerate_unpaired, Diagram, Permutation, Poly};

use verify::Check;

#[derive(Parser)]
#[command(name = "qbpd", version, about = "Quantum bumpless pipe dreams and quantum double Schubert polynomials")]
struct Cli {
    /// Worker threads for parallel work; defaults to every core.
    #[arg(long, global = true, env = "QBPD_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the QBPDs of a permutation.
    Enum(EnumArgs),
    /// Print a quantum double Schubert polynomial.
    Poly(PolyArgs),
    /// Cancellation statistics for one permutation or all of S_n.
    Stats(StatsArgs),
    /// Run an invariant check over S_n or a random sample.
    Verify(VerifyArgs),
    /// Draw one diagram.
    Render(RenderArgs),
}

#[derive(Args)]
struct EnumArgs {
    perm: Permutation,
    /// Only diagrams without dominoes.
    #[arg(long)]
    unpaired: bool,
    /// Print only the number of diagrams.
    #[arg(long)]
    count: bool,
    /// Write the diagrams to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Qbpd,
    Oracle,
    Transition,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyFormat {
    Text,
    Json,
}

#[derive(Args)]
struct PolyArgs {
    perm: Permutation,
    #[arg(long, value_enum, default_value = "qbpd")]
    mode: Mode,
    /// Comma-separated variable families to set to zero: y, q.
    #[arg(long, value_delimiter = ',')]
    specialize: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: PolyFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, conflicts_with = "perm", required_unless_present = "perm")]
    n: Option<usize>,
    #[arg(long)]
    perm: Option<Permutation>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// With --n, print one row per permutation instead of the summary.
    #[arg(long)]
    rows: bool,
    /// With --rows, keep only permutations with cancellations.
    #[arg(long)]
    nonzero: bool,
    /// Allow sweeps above the default size limit.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Check this many random permutations instead of all of S_n.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Args)]
struct RenderArgs {
    /// A permutation, or a file holding one serialized diagram.
    target: String,
    #[arg(long, value_enum, default_value = "ascii")]
    format: RenderFormat,
    /// 1-based position in canonical order among the permutation's QBPDs.
    #[arg(long, default_value_t = 1)]
    index: usize,
}

enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let jobs = cli.jobs;
    let job = move |cmd: Command| -> Result<(), Failure> {
        match cmd {
            Command::Enum(a) => cmd_enum(a).map_err(Failure::from),
            Command::Poly(a) => cmd_poly(a).map_err(Failure::from),
            Command::Stats(a) => cmd_stats(a, jobs).map_err(Failure::from),
            Command::Verify(a) => cmd_verify(a),
            Command::Render(a) => cmd_render(a).map_err(Failure::from),
        }
    };
    with_jobs(jobs, || job(cli.command)).map_err(|e| Failure::Usage(e.into()))?
}

fn cmd_enum(a: EnumArgs) -> anyhow::Result<()> {
    let diagrams = if a.unpaired {
        enumerate_unpaired(&a.perm)
    } else {
        enumerate_qbpds(&a.perm)
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{}", diagrams.len())?;
    if a.count {
        return Ok(());
    }
    let listing = diagrams
        .iter()
        .map(|d| d.to_text())
        .collect::<Vec<_>>()
        .join("\n");
    match a.out {
        Some(path) => fs::write(&path, listing).with_context(|| format!("writing {}", path.display()))?,
        None => write!(out, "{listing}")?,
    }
    Ok(())
}

fn cmd_poly(a: PolyArgs) -> anyhow::Result<()> {
    let (mut zero_y, mut zero_q) = (false, false);
    for s in &a.specialize {
        match s.trim() {
            "y" => zero_y = true,
            "q" => zero_q = true,
            other => bail!("cannot specialize {other:?}; expected y or q"),
        }
    }
    let p: Poly = match a.mode {
        Mode::Qbpd => qbpd_polynomial(&a.perm),
        Mode::Oracle => quantum_double_schubert_defining(&a.perm),
        Mode::Transition => quantum_double_schubert_transition(&a.perm),
    };
    let p = p.specialize(zero_y, zero_q);
    match a.format {
        PolyFormat::Text => println!("{p}"),
        PolyFormat::Json => println!("{}", p.to_json()),
    }
    Ok(())
}

const STATS_HEADER: [&str; 5] = ["perm", "poly_monomials", "qbpd_monomials", "cancellations", "qbpd_count"];

fn write_rows(rows: &[analysis::CancellationStats], format: TableFormat) -> anyhow::Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(STATS_HEADER)?;
            for r in rows {
                w.write_record([
                    r.perm.to_string(),
                    r.poly_monomials.to_string(),
                    r.qbpd_monomials.to_string(),
                    r.cancellations.to_string(),
                    r.qbpd_count.to_string(),
                ])?;
            }
            w.flush()?;
        }
        TableFormat::Json => println!("{}", serde_json::to_string_pretty(rows)?),
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs, jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(p) = a.perm {
        let row = cancellation_stats(&p);
        return match a.format {
            TableFormat::Json => {
                println!("{}", serde_json::to_string_pretty(&row)?);
                Ok(())
            }
            TableFormat::Csv => write_rows(&[row], a.format),
        };
    }
    let n = a.n.ok_or_else(|| anyhow!("either --n or --perm is required"))?;
    let summary = analysis::sweep(n, SweepOptions { jobs, allow_large: a.allow_large })?;
    if a.rows {
        let rows: Vec<_> = summary
            .rows
            .into_iter()
            .filter(|r| !a.nonzero || r.cancellations > 0)
            .collect();
        return write_rows(&rows, a.format);
    }
    match a.format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["n", "total", "average", "argmax", "max"])?;
            w.write_record([
                n.to_string(),
                summary.total.to_string(),
                format!("{:.3}", summary.average),
                summary.argmax.map(|p| p.to_string()).unwrap_or_default(),
                summary.max.to_string(),
            ])?;
            w.flush()?;
        }
        TableFormat::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.n == 0 || a.n > a.check.max_n() {
        return Err(Failure::Usage(anyhow!(
            "--n must be between 1 and {} for this check",
            a.check.max_n()
        )));
    }
    let perms = verify::targets(a.n, a.sample, a.seed);
    let report = verify::run(a.check, &perms);
    let name = format!("{:?}", a.check).to_lowercase();
    for (w, msg) in &report.failures {
        println!("FAIL {w}: {msg}");
    }
    if report.failures.is_empty() {
        println!("{name}: pass, {} permutations", report.checked);
        Ok(())
    } else {
        println!("{name}: {} of {} permutations failed", report.failures.len(), report.checked);
        Err(Failure::Verification)
    }
}

fn cmd_render(a: RenderArgs) -> anyhow::Result<()> {
    let diagram = if Path::new(&a.target).is_file() {
        let text = fs::read_to_string(&a.target).with_context(|| format!("reading {}", a.target))?;
        let d = Diagram::from_text(&text)?;
        let v = d.violations();
        if !v.is_empty() {
            let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            bail!("not a QBPD: {}", list.join("; "));
        }
        d
    } else {
        let w: Permutation = a.target.parse()?;
        let mut all = enumerate_qbpds(&w);
        if a.index == 0 || a.index > all.len() {
            bail!("index {} out of range; {w} has {} diagrams", a.index, all.len());
        }
        all.swap_remove(a.index - 1)
    };
    match a.format {
        RenderFormat::Ascii => print!("{}", render::ascii(&diagram)),
        RenderFormat::Svg => print!("{}", render::svg(&diagram)),
    }
    Ok(())
}
