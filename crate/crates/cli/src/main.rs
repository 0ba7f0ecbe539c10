use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use derange::chain::{realize_permutation, DrawStats, RngStream};
use derange::exact::{
    cycle_count_pmf, lambda_altsum, lambda_table, num_cycles_pmf, single_cycle_prob,
};
use derange::harness::{estimate, reproduce_table, Method, Statistic, TableOptions, TableSpec};
use derange::oracle::verify_all;
use derange::{Error, ModelParams};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(
    name = "derange",
    version,
    about = "θ-biased derangements: exact laws and samplers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact quantities
    Exact {
        #[command(subcommand)]
        what: ExactCommand,
    },
    /// Draw derangements
    Sample {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long, env = "DERANGE_SEED")]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Emit::Lengths)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = SampleFormat::Jsonl)]
        format: SampleFormat,
        /// Budget of Bernoulli/Poisson variates for the whole batch
        #[arg(long, default_value_t = derange::chain::DEFAULT_MAX_DRAWS)]
        max_draws: u64,
    },
    /// Monte Carlo estimate of a statistic
    Estimate {
        #[arg(long)]
        stat: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reps: usize,
        #[arg(long, env = "DERANGE_SEED")]
        seed: u64,
    },
    /// Reproduce one of the published tables
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        id: u8,
        /// Defaults to the published run count for the table
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, env = "DERANGE_SEED")]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Leave timing columns blank so output is reproducible byte for byte
        #[arg(long)]
        no_timings: bool,
        #[arg(long, default_value_t = derange::harness::DEFAULT_WORKERS)]
        workers: usize,
    },
    /// Run the exhaustive oracle suite
    Verify {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [0.5, 1.0, 5.0])]
        theta_list: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum ExactCommand {
    /// λ_n(θ), the probability that an ESF(θ) permutation has no fixed point
    Lambda {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = LambdaMethod::Recurrence)]
        method: LambdaMethod,
    },
    /// Point probabilities
    Pmf {
        #[arg(long, value_enum)]
        what: PmfWhat,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        /// Cycle length (cycle-count)
        #[arg(long)]
        j: Option<usize>,
        /// Count value; the number of cycles for num-cycles
        #[arg(long)]
        r: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaMethod {
    Recurrence,
    Altsum,
}

#[derive(Clone, Copy, ValueEnum)]
enum PmfWhat {
    CycleCount,
    NumCycles,
    SingleCycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Chain,
    Feller,
    Poisson,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Chain => Method::Chain,
            MethodArg::Feller => Method::Feller,
            MethodArg::Poisson => Method::Poisson,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Emit {
    Lengths,
    Counts,
    Permutation,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SampleFormat {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum TableFormat {
    Csv,
    Md,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Verify,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e @ Error::AttemptsExhausted { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_GUARD)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// `%.15g`-style formatting.
fn format_g15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.14e}");
        let (mantissa, e) = s.split_once('e').expect("exponent");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Exact {
            what: ExactCommand::Lambda { theta, n, method },
        } => {
            ModelParams::new(n.max(2), theta)?;
            let v = match method {
                LambdaMethod::Recurrence => lambda_table(theta, n)?[n],
                LambdaMethod::Altsum => lambda_altsum(theta, n)?,
            };
            writeln!(out, "{}", format_g15(v))?;
        }
        Command::Exact {
            what:
                ExactCommand::Pmf {
                    what,
                    theta,
                    n,
                    j,
                    r,
                },
        } => {
            let params = ModelParams::new(n, theta)?;
            let v = match what {
                PmfWhat::CycleCount => {
                    let (Some(j), Some(r)) = (j, r) else {
                        return Err(Failure::Usage("cycle-count needs --j and --r".into()));
                    };
                    cycle_count_pmf(params, j, r)?
                }
                PmfWhat::NumCycles => {
                    let Some(k) = r else {
                        return Err(Failure::Usage(
                            "num-cycles needs --r (the number of cycles)".into(),
                        ));
                    };
                    num_cycles_pmf(params, k)?
                }
                PmfWhat::SingleCycle => single_cycle_prob(params),
            };
            writeln!(out, "{}", format_g15(v))?;
        }
        Command::Sample {
            method,
            theta,
            n,
            reps,
            seed,
            emit,
            format,
            max_draws,
        } => {
            let params = ModelParams::new(n, theta)?;
            let sampler = Method::from(method).sampler_with_max_draws(params, max_draws)?;
            let mut spent = DrawStats::default();
            let mut rng = RngStream::new(seed, 0);
            if format == SampleFormat::Csv {
                let header = match emit {
                    Emit::Lengths => "sample,lengths".to_string(),
                    Emit::Permutation => "sample,lengths,perm".to_string(),
                    Emit::Counts => {
                        let cols: Vec<String> = (2..=n).map(|j| format!("c_{j}")).collect();
                        format!("sample,{}", cols.join(","))
                    }
                };
                writeln!(out, "{header}")?;
            }
            for i in 0..reps {
                let (sample, stats) = sampler.sample(&mut rng)?;
                spent += stats;
                if spent.draws > max_draws {
                    return Err(Error::AttemptsExhausted {
                        attempts: spent.attempts,
                        draws: spent.draws,
                    }
                    .into());
                }
                let lengths = sample.ordered_lengths.as_slice();
                let join = |v: &[usize]| {
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                match (emit, format) {
                    (Emit::Lengths, SampleFormat::Jsonl) => {
                        writeln!(out, "{}", serde_json::json!({ "lengths": lengths }))?
                    }
                    (Emit::Lengths, SampleFormat::Csv) => writeln!(out, "{i},{}", join(lengths))?,
                    (Emit::Permutation, _) => {
                        let perm = realize_permutation(&sample.ordered_lengths, &mut rng);
                        if format == SampleFormat::Jsonl {
                            writeln!(
                                out,
                                "{}",
                                serde_json::json!({ "lengths": lengths, "perm": perm })
                            )?
                        } else {
                            writeln!(out, "{i},{},{}", join(lengths), join(&perm))?
                        }
                    }
                    (Emit::Counts, SampleFormat::Jsonl) => {
                        let counts: BTreeMap<String, usize> = sample
                            .cycle_type
                            .counts()
                            .iter()
                            .map(|(j, c)| (j.to_string(), *c))
                            .collect();
                        writeln!(out, "{}", serde_json::json!({ "counts": counts }))?
                    }
                    (Emit::Counts, SampleFormat::Csv) => {
                        let cols: Vec<String> = (2..=n)
                            .map(|j| sample.cycle_type.count(j).to_string())
                            .collect();
                        writeln!(out, "{i},{}", cols.join(","))?
                    }
                }
            }
        }
        Command::Estimate {
            stat,
            method,
            theta,
            n,
            reps,
            seed,
        } => {
            let statistic: Statistic = stat.parse()?;
            let params = ModelParams::new(n, theta)?;
            let e = estimate(statistic, params, method.into(), reps, seed)?;
            writeln!(out, "{}", serde_json::to_string(&e).expect("serialisable"))?;
        }
        Command::Table {
            id,
            reps,
            seed,
            format,
            no_timings,
            workers,
        } => {
            let spec = TableSpec::published(id)?;
            let options = TableOptions {
                reps: reps.unwrap_or_else(|| spec.published_reps()),
                seed,
                workers,
                timings: !no_timings,
            };
            let table = reproduce_table(&spec, &options)?;
            match format {
                TableFormat::Csv => write!(out, "{}", table.to_csv()?)?,
                TableFormat::Md => write!(out, "{}", table.to_markdown())?,
            }
        }
        Command::Verify { max_n, theta_list } => {
            let report = verify_all(max_n, &theta_list)?;
            for c in &report.checks {
                let mark = if c.violations == 0 { "ok  " } else { "FAIL" };
                writeln!(
                    out,
                    "{mark} {:<58} cases={:<8} violations={:<4} max_err={:.2e}",
                    c.name, c.cases, c.violations, c.max_error
                )?;
            }
            writeln!(out, "total violations: {}", report.violations())?;
            out.flush()?;
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
    }
    out.flush()?;
    Ok(())
}
