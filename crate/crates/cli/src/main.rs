use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use compact_scs::assemble::{verify_superstring, write_plan_tsv};
use compact_scs::index::write_index;
use compact_scs::oracle::{naive_greedy, naive_preprocess};
use compact_scs::pipeline::{run_pipeline, PipelineOptions};
use compact_scs::text::{parse_input, InputFormat};
use compact_scs::Error;
use log::{info, warn};

#[derive(Parser)]
#[command(name = "compact-scs", version, about = "Greedy shortest common superstring over a compact index")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a greedy superstring of the input strings.
    Superstring(SuperstringArgs),
    /// Check that every input string occurs in a superstring file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Fasta,
    Lines,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum OutputFormat {
    #[default]
    Raw,
    Fasta,
}

#[derive(clap::Args)]
struct SuperstringArgs {
    /// Input file: FASTA records or one string per line.
    input: PathBuf,
    /// Input format; detected from the first byte if omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    output_format: OutputFormat,
    /// Write accepted merges as TSV with original input ids.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Write run statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Also run the brute-force greedy and fail if its plan differs.
    #[arg(long)]
    oracle: bool,
    /// Write every merge attempt as TSV.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Save the index built over the kept strings.
    #[arg(long, value_name = "PATH")]
    keep_index: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// The original input strings.
    input: PathBuf,
    /// File holding the superstring (raw or single-record FASTA).
    superstring: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Failure with the process exit status it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }

    fn internal(err: anyhow::Error) -> Self {
        Failure { code: 2, err }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::Assembly(_) | Error::Internal { .. }) => 2,
            _ => 1,
        };
        Failure { code, err }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Superstring(args) => cmd_superstring(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read_strings(path: &Path, format: Option<Format>) -> anyhow::Result<Vec<Vec<u8>>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let format = match format {
        Some(Format::Fasta) => InputFormat::Fasta,
        Some(Format::Lines) => InputFormat::Lines,
        None => InputFormat::detect(&bytes),
    };
    let parsed = parse_input(&bytes, format).with_context(|| format!("parsing {}", path.display()))?;
    if parsed.skipped_empty > 0 {
        warn!("{} empty strings skipped", parsed.skipped_empty);
    }
    Ok(parsed.strings)
}

fn check_distinct_paths(args: &SuperstringArgs) -> anyhow::Result<()> {
    let named = [
        ("input", Some(&args.input)),
        ("output", args.output.as_ref()),
        ("plan", args.plan.as_ref()),
        ("stats", args.stats.as_ref()),
        ("trace", args.trace.as_ref()),
        ("keep-index", args.keep_index.as_ref()),
    ];
    let given: Vec<(&str, &PathBuf)> = named.iter().filter_map(|(n, p)| p.map(|p| (*n, p))).collect();
    for (a, (na, pa)) in given.iter().enumerate() {
        for (nb, pb) in &given[a + 1..] {
            if pa == pb {
                return Err(anyhow!("--{na} and --{nb} name the same path {}", pa.display()));
            }
        }
    }
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn cmd_superstring(args: SuperstringArgs) -> Result<(), Failure> {
    check_distinct_paths(&args).map_err(Failure::usage)?;
    let strings = read_strings(&args.input, args.format)?;
    info!("read {} strings", strings.len());

    let opts = PipelineOptions {
        keep_index: args.keep_index.is_some(),
        verify: true,
    };
    let mut trace = args.trace.as_deref().map(create).transpose()?;
    let out = run_pipeline(&strings, &opts, trace.as_mut().map(|w| w as &mut dyn Write))
        .map_err(anyhow::Error::from)?;
    if let Some(mut w) = trace {
        w.flush().context("writing trace")?;
    }

    if args.oracle {
        let kept = naive_preprocess(&strings);
        let want = naive_greedy(&kept);
        let got: Vec<(usize, usize, usize)> = out.plan.edges().map(|e| (e.left, e.right, e.overlap)).collect();
        if got != want {
            let first = got.iter().zip(&want).position(|(a, b)| a != b).unwrap_or(got.len().min(want.len()));
            return Err(Failure::internal(anyhow!(
                "oracle check: plans differ at edge {first} ({:?} vs oracle {:?})",
                got.get(first),
                want.get(first)
            )));
        }
        info!("oracle check: {} edges identical", got.len());
    }

    let mut sink: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_superstring(&mut sink, &out.superstring, args.output_format).context("writing superstring")?;
    sink.flush().context("writing superstring")?;

    if let Some(p) = &args.plan {
        let mut w = create(p)?;
        write_plan_tsv(&out.plan, &out.set, &mut w).context("writing plan")?;
        w.flush().context("writing plan")?;
    }
    if let Some(p) = &args.stats {
        let mut w = create(p)?;
        serde_json::to_writer_pretty(&mut w, &out.stats).context("writing stats")?;
        writeln!(w).and_then(|_| w.flush()).context("writing stats")?;
    }
    if let (Some(p), Some(idx)) = (&args.keep_index, &out.index) {
        let w = create(p)?;
        write_index(idx, w).with_context(|| format!("writing index {}", p.display()))?;
    }
    Ok(())
}

fn write_superstring<W: Write + ?Sized>(w: &mut W, s: &[u8], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Raw => {
            if !s.is_empty() {
                w.write_all(s)?;
                w.write_all(b"\n")?;
            }
        }
        OutputFormat::Fasta => {
            writeln!(w, ">superstring length={}", s.len())?;
            for line in s.chunks(80) {
                w.write_all(line)?;
                w.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// The superstring from a raw file (trailing line break ignored) or a
/// single-record FASTA file.
fn read_superstring(path: &Path) -> anyhow::Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.first() == Some(&b'>') {
        let body = bytes.splitn(2, |&b| b == b'\n').nth(1).unwrap_or(&[]);
        return Ok(body.iter().copied().filter(|b| !b.is_ascii_whitespace()).collect());
    }
    let mut s = bytes;
    while matches!(s.last(), Some(b'\n' | b'\r')) {
        s.pop();
    }
    Ok(s)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let strings = read_strings(&args.input, args.format)?;
    let sup = read_superstring(&args.superstring)?;
    let report = verify_superstring(&sup, strings.iter().map(Vec::as_slice));
    if report.is_ok() {
        println!("ok: all {} strings occur", report.checked);
        return Ok(());
    }
    let mut msg = format!("{} of {} strings missing:", report.missing.len(), report.checked);
    for &i in report.missing.iter().take(10) {
        msg.push_str(&format!("\n  #{} {}", i + 1, String::from_utf8_lossy(&strings[i])));
    }
    Err(Failure::usage(anyhow!(msg)))
}
