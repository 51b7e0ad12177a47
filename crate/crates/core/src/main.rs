use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser};

use trace_explain::pipeline::{Level, Pipeline, Trace, DEFAULT_MAX_COUNT};
use trace_explain::render::{render, OutputFormat};
use trace_explain::spec::Spec;

/// Explain a verification trace in controlled natural language.
#[derive(Debug, Parser)]
#[command(name = "explain", version)]
#[command(group(ArgGroup::new("source").required(true).args(["trace", "input", "stdin"])))]
struct Args {
    /// Specification file.
    #[arg(long, value_name = "PATH")]
    spec: PathBuf,

    /// Explanation level, 0 (one sentence per action) to 4 (contextual).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=4))]
    level: u8,

    #[arg(long, default_value = "plain", value_parser = OutputFormat::NAMES)]
    format: String,

    /// Largest count tried for counted abstraction patterns.
    #[arg(long, default_value_t = DEFAULT_MAX_COUNT, value_name = "N")]
    max_count: u32,

    /// The trace itself.
    #[arg(long, value_name = "STRING")]
    trace: Option<String>,

    /// File holding the trace.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Read the trace from standard input (`-`).
    #[arg(value_name = "-", value_parser = parse_dash)]
    stdin: Option<bool>,
}

fn parse_dash(arg: &str) -> Result<bool, String> {
    if arg == "-" {
        Ok(true)
    } else {
        Err(format!("unexpected argument `{arg}`; use `-` to read standard input"))
    }
}

fn run(args: Args) -> Result<String> {
    let spec_text =
        fs::read_to_string(&args.spec).with_context(|| format!("cannot read spec {}", args.spec.display()))?;
    let spec = Spec::load(&spec_text).with_context(|| format!("invalid spec {}", args.spec.display()))?;
    let trace_text = match (&args.trace, &args.input) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).with_context(|| format!("cannot read trace {}", path.display()))?
        }
        (None, None) => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("cannot read standard input")?;
            buf
        }
    };
    let trace = Trace::parse(&trace_text, &spec.alphabet)?;
    let Some(level) = Level::from_number(args.level) else {
        bail!("level {} is out of range", args.level);
    };
    let format: OutputFormat = args.format.parse().map_err(anyhow::Error::msg)?;
    let pipeline = Pipeline::new(&spec, args.max_count)?;
    Ok(render(&pipeline.explain(&trace, level), format))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(args) {
        Ok(text) => {
            let mut out = io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
