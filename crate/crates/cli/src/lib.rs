//! Command-line front end: argument model and the `run` entry point.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use dehornoy::error::Error;
use dehornoy::verify::{
    verify_commutation, verify_ribbon_derivation, Budget, CharPolyRecord, DescentMatrix,
    PolyCache, VerificationReport, Verifier, DEFAULT_COMMUTATION_SAMPLE, DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Degrees from this one up switch `verify commute` to sampling by default.
const SAMPLE_FROM_N: usize = 7;

#[derive(Parser, Debug, Clone)]
#[command(name = "dehornoy", version, about = "Descent/recoil matrices, their characteristic polynomials, and FQSym identity checks")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Where characteristic polynomials are cached.
    #[arg(long, env = "DEHORNOY_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,

    /// Largest n any computation may attempt (overrides the per-task defaults).
    #[arg(long, env = "DEHORNOY_MAX_N", global = true)]
    pub max_n_budget: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Emit M_n (rows and columns in lexicographic order of S_n).
    Matrix {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Emit P_n(x) = det(xI - M_n).
    Charpoly {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Run one of the structural checks.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Check this many randomly chosen basis elements (commute only).
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Number of normal sequences of the given length in S_n.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        length: u32,
    },
    /// Power-iteration estimate of the dominant eigenvalue of M_n.
    Growth {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        iterations: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Divides,
    Commute,
    Surjective,
    Blocks,
    Ribbon,
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Library(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Library(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Library(Error::BudgetExceeded { .. }) => "budget-exceeded",
            Failure::Library(Error::InvalidArgument(_)) => "invalid-argument",
            Failure::Library(_) => "library",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Library(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

impl GlobalOpts {
    fn budget(&self) -> Budget {
        match self.max_n_budget {
            Some(k) => Budget::uniform(k),
            None => Budget::default(),
        }
    }

    fn cache(&self) -> Option<PolyCache> {
        if self.no_cache {
            return None;
        }
        self.cache_dir.clone().or_else(default_cache_dir).map(PolyCache::new)
    }

    fn writer(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|base| base.join("dehornoy"))
}

/// Runs one command and returns the process exit code. Errors are reported on
/// stderr as a single `error[<kind>]: <message>` line.
pub fn run(config: CliConfig) -> i32 {
    let threads = config.global.threads.map_or(0, usize::from);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error[threads]: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&config)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error[{}]: {}", f.kind(), f.message());
            f.exit_code()
        }
    }
}

fn execute(config: &CliConfig) -> Result<i32, Failure> {
    let g = &config.global;
    let verifier = Verifier::new(g.budget(), g.cache());
    match &config.command {
        Command::Matrix { n } => {
            let n = *n as usize;
            verifier.budget().check_matrix(n)?;
            let mut out = g.writer()?;
            write_matrix(&mut out, &DescentMatrix::new(n), g.format)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Charpoly { n } => {
            let n = *n as usize;
            let (p, diag) = verifier.char_poly(n)?;
            info!("charpoly n={n}: {diag:?}");
            let mut out = g.writer()?;
            match g.format {
                Format::Text => writeln!(out, "{p}")?,
                Format::Json => writeln!(out, "{}", CharPolyRecord::new(n, p).to_json())?,
                Format::Csv => {
                    writeln!(out, "degree,coefficient")?;
                    for (k, c) in p.coeffs().iter().enumerate() {
                        writeln!(out, "{k},{c}")?;
                    }
                }
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Verify { check, n, sample } => {
            let n = *n as usize;
            let report = match check {
                Check::Divides => verifier.verify_divisibility(n)?,
                Check::Commute => {
                    let sample = sample.or((n >= SAMPLE_FROM_N).then_some(DEFAULT_COMMUTATION_SAMPLE));
                    verify_commutation(n, sample, g.seed)?
                }
                Check::Surjective => verifier.verify_surjectivity(n)?,
                Check::Blocks => verifier.verify_block_structure(n)?,
                Check::Ribbon => verify_ribbon_derivation(n)?,
            };
            info!("verify {} n={n}: {:?}", report.claim, report.diagnostics);
            let mut out = g.writer()?;
            write_report(&mut out, &report, g.format)?;
            out.flush()?;
            if report.verified {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "error[verification-failed]: {} does not hold for n = {n}",
                    report.claim
                );
                Ok(EXIT_VERIFICATION_FAILED)
            }
        }
        Command::Count { n, length } => {
            let (n, l) = (*n as usize, *length as usize);
            let count = verifier.count_normal_sequences(n, l)?;
            let mut out = g.writer()?;
            match g.format {
                Format::Text => writeln!(out, "{count}")?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"n": n, "length": l, "count": count.to_string()})
                )?,
                Format::Csv => writeln!(out, "n,length,count\n{n},{l},{count}")?,
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Growth {
            n,
            iterations,
            tolerance,
        } => {
            let n = *n as usize;
            let est = verifier.growth_rate(n, *iterations, *tolerance)?;
            let mut out = g.writer()?;
            match g.format {
                Format::Text => writeln!(
                    out,
                    "{}\nresidual {:e}\niterations {}\nconverged {}",
                    est.eigenvalue, est.residual, est.iterations, est.converged
                )?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "n": n,
                        "eigenvalue": est.eigenvalue,
                        "residual": est.residual,
                        "iterations": est.iterations,
                        "converged": est.converged,
                    })
                )?,
                Format::Csv => writeln!(
                    out,
                    "n,eigenvalue,residual,iterations,converged\n{n},{},{:e},{},{}",
                    est.eigenvalue, est.residual, est.iterations, est.converged
                )?,
            }
            out.flush()?;
            if !est.converged {
                eprintln!(
                    "warning[not-converged]: residual {:e} after {} iterations",
                    est.residual, est.iterations
                );
            }
            Ok(EXIT_OK)
        }
    }
}

/// Streams `M_n` one row at a time.
fn write_matrix(out: &mut dyn Write, m: &DescentMatrix, format: Format) -> io::Result<()> {
    let digit = |b: bool| if b { '1' } else { '0' };
    let sep = match format {
        Format::Text => ' ',
        Format::Json | Format::Csv => ',',
    };
    if format == Format::Json {
        write!(out, "[")?;
    }
    let mut line = String::with_capacity(2 * m.dim() + 4);
    for row in 0..m.dim() {
        line.clear();
        if format == Format::Json {
            if row > 0 {
                line.push(',');
            }
            line.push('[');
        }
        for (j, bit) in m.row_bits(row).enumerate() {
            if j > 0 {
                line.push(sep);
            }
            line.push(digit(bit));
        }
        match format {
            Format::Json => {
                line.push(']');
                out.write_all(line.as_bytes())?;
            }
            _ => writeln!(out, "{line}")?,
        }
    }
    if format == Format::Json {
        writeln!(out, "]")?;
    }
    Ok(())
}

fn write_report(out: &mut dyn Write, r: &VerificationReport, format: Format) -> io::Result<()> {
    match format {
        Format::Text => write!(out, "{}", r.to_text()),
        Format::Json => writeln!(out, "{}", r.to_json()),
        Format::Csv => writeln!(out, "claim,n,verified\n{},{},{}", r.claim, r.n, r.verified),
    }
}
