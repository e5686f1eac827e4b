use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ltc_core::oracle::{differential_check, Differential};
use ltc_core::stream::{parse_transmitted, transmitted_to_csv};
use ltc_core::{
    compress_stream, generate_synthetic, parse_stream, reconstruct, run, signal_sigma, Backend,
    CompressionStats, LtcError, Mode, Norm, RunConfig, Sample, StreamFile, SyntheticKind,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Compress,
    Reconstruct,
    Roundtrip,
    Stats,
    Generate,
    Verify,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Compress => Mode::Compress,
            ModeArg::Reconstruct => Mode::Reconstruct,
            ModeArg::Roundtrip => Mode::Roundtrip,
            ModeArg::Stats => Mode::Stats,
            ModeArg::Generate => Mode::Generate,
            ModeArg::Verify => Mode::Verify,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Kv,
    Json,
}

/// Error-bounded piecewise-linear compression of CSV sensor streams.
#[derive(Debug, Parser)]
#[command(name = "ltc", version)]
struct Args {
    #[arg(long, value_enum, default_value = "roundtrip")]
    mode: ModeArg,

    /// Maximum reconstruction error, in the input's value units.
    #[arg(long)]
    epsilon: Option<f64>,

    /// infinity or euclidean.
    #[arg(long, default_value = "infinity", value_parser = parse_norm)]
    norm: Norm,

    /// Force a backend (ltc1d, infinity, euclidean). Must bound error in --norm.
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,

    /// Comma-separated value columns to keep, by header name or 0-based index.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<String>>,

    #[arg(long)]
    input: Option<PathBuf>,

    /// Main output file; stdout when omitted (except in roundtrip mode).
    #[arg(long)]
    output: Option<PathBuf>,

    /// Original stream whose timestamps drive reconstruct mode.
    #[arg(long)]
    reference: Option<PathBuf>,

    /// Roundtrip: also write the transmitted points here.
    #[arg(long)]
    transmitted: Option<PathBuf>,

    /// Write stats here instead of stdout.
    #[arg(long)]
    stats: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "kv")]
    format: Format,

    /// Report measured wall time in stats (makes output non-reproducible).
    #[arg(long)]
    timing: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Synthetic stream kind for generate mode.
    #[arg(long, default_value = "random_walk", value_parser = parse_kind)]
    kind: SyntheticKind,

    #[arg(long, default_value_t = 1000)]
    length: usize,

    /// Dimension of generated streams.
    #[arg(long, default_value_t = 3)]
    n: usize,

    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,

    /// Number of seeded cases for verify mode without --input.
    #[arg(long, default_value_t = 100)]
    cases: usize,
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    s.parse().map_err(|e: LtcError| e.to_string())
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: LtcError| e.to_string())
}

fn parse_kind(s: &str) -> Result<SyntheticKind, String> {
    s.parse().map_err(|e: LtcError| e.to_string())
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<LtcError> for Failure {
    fn from(e: LtcError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| input_err(format!("cannot write {}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(format!("stdout: {e}"))),
    }
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    p.as_deref()
        .ok_or_else(|| input_err(format!("{flag} is required in this mode")))
}

fn config(args: &Args) -> Result<RunConfig, Failure> {
    let epsilon = args
        .epsilon
        .ok_or_else(|| input_err("--epsilon is required in this mode"))?;
    let cfg = RunConfig {
        epsilon,
        norm: args.norm,
        backend: args.backend,
        dims: args.dims.clone(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn render_stats(args: &Args, stats: &mut CompressionStats) -> String {
    if !args.timing {
        stats.wall_time = 0.0;
    }
    match args.format {
        Format::Kv => stats.to_key_value(),
        Format::Json => stats.to_json() + "\n",
    }
}

fn load(args: &Args) -> Result<StreamFile, Failure> {
    Ok(parse_stream(require(&args.input, "--input")?)?)
}

fn select(args: &Args, f: StreamFile) -> Result<StreamFile, Failure> {
    Ok(match &args.dims {
        Some(d) => f.select(d)?,
        None => f,
    })
}

fn execute(args: &Args) -> Result<(), Failure> {
    match Mode::from(args.mode) {
        Mode::Generate => {
            let f = generate_synthetic(args.kind, args.n, args.length, args.seed, args.amplitude)?;
            write_out(args.output.as_deref(), &f.to_csv())
        }
        Mode::Compress => {
            let cfg = config(args)?;
            let f = select(args, load(args)?)?;
            let c = compress_stream(&f.samples, cfg.epsilon, cfg.backend())?;
            write_out(
                args.output.as_deref(),
                &transmitted_to_csv(f.header.as_deref(), &c.transmitted),
            )
        }
        Mode::Reconstruct => {
            let tx = parse_transmitted(require(&args.input, "--input")?)?;
            let reference = parse_stream(require(&args.reference, "--reference")?)?;
            let reference = select(args, reference)?;
            if tx.is_empty() {
                return Err(input_err("no transmitted points"));
            }
            if tx[0].xi.len() != reference.dim() {
                return Err(LtcError::DimensionMismatch {
                    expected: reference.dim(),
                    got: tx[0].xi.len(),
                }
                .into());
            }
            let times = reference.times();
            let values = reconstruct(&tx, &times)?;
            let out = StreamFile::new(
                reference.header.clone(),
                times
                    .iter()
                    .zip(values)
                    .map(|(&t, x)| Sample::new(t, x))
                    .collect(),
            );
            write_out(args.output.as_deref(), &out.to_csv())
        }
        Mode::Roundtrip | Mode::Stats => {
            let cfg = config(args)?;
            let mut out = run(&cfg, &load(args)?)?;
            if matches!(args.mode, ModeArg::Roundtrip) {
                if let Some(p) = &args.output {
                    write_out(Some(p), &out.reconstructed.to_csv())?;
                }
                if let Some(p) = &args.transmitted {
                    let csv = transmitted_to_csv(out.stream.header.as_deref(), &out.transmitted);
                    write_out(Some(p), &csv)?;
                }
            }
            let text = render_stats(args, &mut out.stats);
            write_out(args.stats.as_deref(), &text)
        }
        Mode::Verify => verify(args),
    }
}

#[derive(Default)]
struct Tally {
    agree: usize,
    inconclusive: usize,
    disagree: Vec<String>,
}

impl Tally {
    fn record(&mut self, label: String, d: Differential) {
        match d {
            Differential::Agree { .. } => self.agree += 1,
            Differential::Inconclusive(_) => self.inconclusive += 1,
            Differential::Disagree { production, oracle } => self.disagree.push(format!(
                "{label}: production {} points, oracle {}",
                production.len(),
                oracle.len()
            )),
            Differential::ValueRejected { t } => self
                .disagree
                .push(format!("{label}: value at t={t} rejected")),
        }
    }
}

fn backends_for(args: &Args, n: usize) -> Vec<Backend> {
    match args.backend {
        Some(b) => vec![b],
        None if args.input.is_some() => vec![Backend::for_norm(args.norm)],
        None if n == 1 => vec![Backend::Ltc1d, Backend::Infinity, Backend::Euclidean],
        None => vec![Backend::Infinity, Backend::Euclidean],
    }
}

fn verify(args: &Args) -> Result<(), Failure> {
    let mut tally = Tally::default();
    if args.input.is_some() {
        let cfg = config(args)?;
        let f = select(args, load(args)?)?;
        for b in backends_for(args, f.dim()) {
            let d = differential_check(&f.samples, cfg.epsilon, b)?;
            tally.record(format!("{b:?}"), d);
        }
    } else {
        const FACTORS: [f64; 3] = [0.05, 0.5, 5.0];
        let kinds = SyntheticKind::ALL;
        for i in 0..args.cases {
            let seed = args.seed.wrapping_add(i as u64);
            let n = 1 + i % 3;
            let length = 20 + (seed.wrapping_mul(7919) % 281) as usize;
            let kind = kinds[i % kinds.len()];
            let f = generate_synthetic(kind, n, length, seed, args.amplitude)?;
            let sigma = match signal_sigma(&f.samples) {
                s if s > 1e-9 => s,
                _ => 1.0,
            };
            let eps = args
                .epsilon
                .unwrap_or(FACTORS[(i / 3) % FACTORS.len()] * sigma);
            for b in backends_for(args, n) {
                let d = differential_check(&f.samples, eps, b)?;
                tally.record(format!("case {i} {kind:?} n={n} seed={seed} {b:?}"), d);
            }
        }
    }
    let mut text = format!(
        "agree={}\ninconclusive={}\ndisagree={}\n",
        tally.agree,
        tally.inconclusive,
        tally.disagree.len()
    );
    for d in &tally.disagree {
        text.push_str(&format!("# {d}\n"));
    }
    write_out(args.output.as_deref(), &text)?;
    if tally.disagree.is_empty() {
        Ok(())
    } else {
        Err(Failure::Internal(format!(
            "{} runs disagree with the oracle",
            tally.disagree.len()
        )))
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
