//! Command-line front end.
//!
//! Every command writes JSON (or CSV for `grid`) to standard output, or to
//! `--out FILE`. Errors go to standard error as `{"error": kind, "detail": msg}`
//! with exit code 2 for usage errors, 3 for domain errors and 4 for internal
//! inconsistencies.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, cross_validate, region_grid, write_csv, GridSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lemma_lab::{
    complex_subset_ratio, grothendieck_ratio, grothendieck_search, lemma_battery,
    real_subset_ratio, ComplexMethod,
};
use crate::seqspace::{Exponent, ExponentTriple};
use crate::unconditionality::{
    quotient_lower_bound_search, unconditionality_quotient, Family, Mode,
};
use crate::witness::{hadamard_witness, sylvester, tail_witness, MAX_SYLVESTER_LOG};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "uncond",
    version,
    about = "Unconditional convergence under coordinatewise multiplication"
)]
pub struct Cli {
    /// Worker threads for enumeration, grids and searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TripleArgs {
    /// Multiplier exponent (decimal or "inf").
    #[arg(long, allow_hyphen_values = true)]
    pub p: Exponent,
    /// Series exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Exponent,
    /// Target exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Exponent,
}

impl TripleArgs {
    fn triple(self) -> ExponentTriple {
        ExponentTriple::new(self.p, self.q, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a triple (p, q, r).
    Classify {
        #[command(flatten)]
        triple: TripleArgs,
        /// Back the verdict with witnesses or search evidence.
        #[arg(long, requires = "seed")]
        cross_validate: bool,
        /// Search restarts used by --cross-validate.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify a (p, q) lattice at fixed r; writes CSV.
    Grid {
        #[arg(long, allow_hyphen_values = true)]
        r: Exponent,
        #[arg(long, default_value_t = 1.0)]
        p_min: f64,
        #[arg(long, default_value_t = 4.0)]
        p_max: f64,
        #[arg(long, default_value_t = 1.0)]
        q_min: f64,
        #[arg(long, default_value_t = 4.0)]
        q_max: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Also evaluate p = inf and q = inf.
        #[arg(long)]
        with_inf: bool,
    },
    /// Hadamard counterexample with quotient above C.
    WitnessHadamard {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long = "C", value_name = "C")]
        c: f64,
        /// Include the Sylvester matrix as packed sign bits (hex).
        #[arg(long)]
        packed: bool,
    },
    /// Harmonic tail witness for r < q.
    WitnessTail {
        #[arg(long, allow_hyphen_values = true)]
        q: Exponent,
        #[arg(long, allow_hyphen_values = true)]
        r: Exponent,
        #[arg(long = "B", value_name = "B")]
        b: f64,
    },
    /// Unconditionality quotient of explicit families.
    Quotient {
        #[command(flatten)]
        triple: TripleArgs,
        /// Multiplier family as a JSON array of rows.
        #[arg(long)]
        a: String,
        /// Series family as a JSON array of rows.
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 256)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Seeded search for large unconditionality quotients.
    Search {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Subset-sum constants and the norm sandwich.
    Lemmas {
        #[arg(long)]
        seed: Option<u64>,
        /// Random inputs per check.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Single real sequence (JSON array); skips the random battery.
        #[arg(long, conflicts_with = "complex")]
        real: Option<String>,
        /// Single complex sequence as JSON [[re, im], ...]; skips the battery.
        #[arg(long)]
        complex: Option<String>,
    },
    /// Grothendieck ratio of a family, or a seeded search for a large one.
    Grothendieck {
        /// Family as a JSON array of rows.
        #[arg(long, conflicts_with_all = ["n", "dim", "budget", "seed"])]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Output {
    Json(Value),
    Csv(Vec<u8>),
}

fn to_json<T: Serialize>(v: &T) -> Result<Output> {
    serde_json::to_value(v)
        .map(Output::Json)
        .map_err(|e| Error::InternalInconsistency(format!("serialization failed: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Usage(format!("--{flag}: {e}")))
}

fn parse_family(flag: &str, text: &str) -> Result<Family> {
    Family::from_rows(parse_json(flag, text)?)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Usage(format!("--{flag} is required here")))
}

fn execute(command: Command, cfg: &Config) -> Result<Output> {
    match command {
        Command::Classify {
            triple,
            cross_validate: cv,
            budget,
            seed,
        } => {
            let t = triple.triple();
            if cv {
                to_json(&cross_validate(t, budget, need(seed, "seed")?, cfg)?)
            } else {
                t.require_holder_valid()?;
                to_json(&classify(t)?)
            }
        }
        Command::Grid {
            r,
            p_min,
            p_max,
            q_min,
            q_max,
            step,
            with_inf,
        } => {
            let spec = GridSpec {
                r,
                p_range: (p_min, p_max),
                q_range: (q_min, q_max),
                step,
                include_infinity: with_inf,
            };
            let grid = region_grid(&spec)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &grid)
                .map_err(|e| Error::InternalInconsistency(format!("CSV write failed: {e}")))?;
            Ok(Output::Csv(buf))
        }
        Command::WitnessHadamard { triple, c, packed } => {
            let report = hadamard_witness(triple.triple(), c, cfg)?;
            let mut v = serde_json::to_value(&report)
                .map_err(|e| Error::InternalInconsistency(e.to_string()))?;
            if packed {
                if report.n > MAX_SYLVESTER_LOG {
                    return Err(Error::Precondition(format!(
                        "--packed needs n <= {MAX_SYLVESTER_LOG}, witness has n = {}",
                        report.n
                    )));
                }
                let bits = sylvester(report.n)?.to_packed_bits();
                let hex: String = bits.iter().map(|b| format!("{b:02x}")).collect();
                v["packed_bits"] = Value::String(hex);
            }
            Ok(Output::Json(v))
        }
        Command::WitnessTail { q, r, b } => to_json(&tail_witness(q, r, b)?),
        Command::Quotient {
            triple,
            a,
            x,
            mode,
            budget,
            seed,
        } => {
            let avec = parse_family("a", &a)?;
            let xvec = parse_family("x", &x)?;
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Random => Mode::Randomized {
                    budget,
                    seed: need(seed, "seed")?,
                },
            };
            to_json(&unconditionality_quotient(
                &avec,
                &xvec,
                triple.triple(),
                mode,
                cfg,
            )?)
        }
        Command::Search {
            triple,
            n,
            dim,
            budget,
            seed,
        } => to_json(&quotient_lower_bound_search(
            triple.triple(),
            n,
            dim,
            budget,
            seed,
            cfg,
        )?),
        Command::Lemmas {
            seed,
            trials,
            real,
            complex,
        } => {
            if let Some(text) = real {
                let x: Vec<f64> = parse_json("real", &text)?;
                to_json(&real_subset_ratio(&x)?)
            } else if let Some(text) = complex {
                let pairs: Vec<[f64; 2]> = parse_json("complex", &text)?;
                let z: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                let method = if z.len() <= cfg.n_exh {
                    ComplexMethod::Exact
                } else {
                    ComplexMethod::HalfPlane
                };
                to_json(&complex_subset_ratio(&z, method, cfg)?)
            } else {
                to_json(&lemma_battery(trials, need(seed, "seed")?, cfg)?)
            }
        }
        Command::Grothendieck {
            family,
            n,
            dim,
            budget,
            seed,
        } => {
            if let Some(text) = family {
                to_json(&grothendieck_ratio(&parse_family("family", &text)?, cfg)?)
            } else {
                let found = grothendieck_search(
                    need(n, "n")?,
                    need(dim, "dim")?,
                    need(budget, "budget")?,
                    need(seed, "seed")?,
                    cfg,
                )?;
                to_json(&found)
            }
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        e if e.is_internal() => EXIT_INTERNAL,
        _ => EXIT_DOMAIN,
    }
}

fn report_error(kind: &str, detail: &str) {
    eprintln!("{}", json!({ "error": kind, "detail": detail }));
}

fn emit(out: Output, pretty: bool, path: Option<&PathBuf>) -> std::io::Result<()> {
    let bytes = match out {
        Output::Csv(b) => b,
        Output::Json(v) => {
            let mut s = if pretty {
                serde_json::to_string_pretty(&v)?
            } else {
                serde_json::to_string(&v)?
            };
            s.push('\n');
            s.into_bytes()
        }
    };
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            report_error("usage", e.render().to_string().trim_end());
            return EXIT_USAGE;
        }
    };
    let cfg = Config::from_env();
    let command = cli.command;
    let result = match cli.threads {
        Some(0) => Err(Error::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(command, &cfg)),
            Err(e) => Err(Error::Usage(format!("cannot build thread pool: {e}"))),
        },
        None => execute(command, &cfg),
    };
    match result {
        Ok(out) => match emit(out, cli.pretty, cli.out.as_ref()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                report_error("io", &e.to_string());
                EXIT_USAGE
            }
        },
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            exit_code(&e)
        }
    }
}
