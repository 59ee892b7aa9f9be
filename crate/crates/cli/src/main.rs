use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use selfsim_cli::problem::{Problem, ProblemOptions};
use selfsim_cli::{
    cmd_decide, cmd_oracle, cmd_render, cmd_sweep, cmd_theta, cmd_witness, exit_code, sweep_csv,
    CliError, SweepParams, EXIT_DECIDED, EXIT_ERROR, EXIT_UNKNOWN,
};
use selfsim_core::algnum::{parse_rational, BetaKind, BetaSpec};
use selfsim_core::theta::BnVerdict;

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Decide self-similarity of unions of translated Cantor sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Flags {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    search_degree: Option<usize>,
    /// Largest level enumeration size.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true)]
    assert_in_bn: Option<bool>,
}

impl Flags {
    fn options(&self) -> ProblemOptions {
        ProblemOptions {
            search_degree: self.search_degree,
            cap: self.cap,
            assert_in_bn: self.assert_in_bn,
            depth: self.depth,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide a problem file and print the JSON report.
    Decide {
        problem: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Report B_N membership and vartheta for the problem's beta.
    Theta {
        problem: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Decide every vector with entries in T_{tau_max} and print CSV rows.
    Sweep {
        /// Take N and beta from a problem file.
        #[arg(long, conflicts_with_all = ["n", "beta", "poly"])]
        problem: Option<PathBuf>,
        #[arg(long = "n")]
        n: Option<u32>,
        /// Rational beta, `p/q`.
        #[arg(long)]
        beta: Option<String>,
        /// Ascending integer coefficients of a polynomial with root beta.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "interval")]
        poly: Option<Vec<String>>,
        /// Isolating interval `lo,hi` for --poly.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        interval: Option<Vec<String>>,
        #[arg(long)]
        tau_max: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[command(flatten)]
        flags: Flags,
    },
    /// Brute-force admissibility and compare with the graph test.
    Oracle {
        problem: PathBuf,
        #[arg(long)]
        max_level: Option<usize>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the witness IFS and check it numerically.
    Witness {
        problem: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Write interval lists (CSV) and a stacked-bar SVG.
    Render {
        problem: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also approximate the witness attractor and write it here.
        #[arg(long)]
        witness_csv: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_beta(
    problem: Option<&Path>,
    n: Option<u32>,
    beta: Option<&str>,
    poly: Option<&[String]>,
    interval: Option<&[String]>,
) -> Result<(BetaSpec, ProblemOptions), CliError> {
    if let Some(p) = problem {
        let p = Problem::load(p)?;
        return Ok((p.beta, p.options));
    }
    let n = n.ok_or_else(|| CliError::Usage("--n is required without --problem".into()))?;
    let usage = |m: &str| CliError::Usage(m.into());
    let kind = match (beta, poly, interval) {
        (Some(b), None, _) => {
            let q = parse_rational(b).ok_or_else(|| usage("--beta must be p/q"))?;
            BetaKind::Rational {
                p: q.numer().clone(),
                q: q.denom().clone(),
            }
        }
        (None, Some(c), Some(iv)) if iv.len() == 2 => BetaKind::Root {
            coeffs: c
                .iter()
                .map(|s| s.trim().parse().map_err(|_| usage("--poly takes integers")))
                .collect::<Result<_, _>>()?,
            lo: parse_rational(&iv[0]).ok_or_else(|| usage("--interval takes rationals"))?,
            hi: parse_rational(&iv[1]).ok_or_else(|| usage("--interval takes rationals"))?,
        },
        _ => return Err(usage("give --beta p/q, or --poly with --interval lo,hi")),
    };
    Ok((BetaSpec { kind, n }, ProblemOptions::default()))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Decide { problem, flags } => {
            let d = cmd_decide(&Problem::load(&problem)?, &flags.options())?;
            emit(flags.out.as_deref(), &(d.file.to_json_string() + "\n"))?;
            Ok(d.exit_code())
        }
        Command::Theta { problem, flags } => {
            let t = cmd_theta(&Problem::load(&problem)?, &flags.options())?;
            emit(flags.out.as_deref(), &t.to_string())?;
            Ok(if t.status.verdict == BnVerdict::Unknown {
                EXIT_UNKNOWN
            } else {
                EXIT_DECIDED
            })
        }
        Command::Sweep {
            problem,
            n,
            beta,
            poly,
            interval,
            tau_max,
            m,
            flags,
        } => {
            let (beta, options) = sweep_beta(
                problem.as_deref(),
                n,
                beta.as_deref(),
                poly.as_deref(),
                interval.as_deref(),
            )?;
            let rows = cmd_sweep(&SweepParams {
                beta,
                tau_max,
                m,
                options: options.overridden_by(&flags.options()),
            })?;
            emit(flags.out.as_deref(), &sweep_csv(&rows))?;
            let unknown = rows.iter().any(|r| exit_code(r.verdict) == EXIT_UNKNOWN);
            Ok(if unknown { EXIT_UNKNOWN } else { EXIT_DECIDED })
        }
        Command::Oracle {
            problem,
            max_level,
            flags,
        } => {
            let o = cmd_oracle(&Problem::load(&problem)?, &flags.options(), max_level)?;
            emit(flags.out.as_deref(), &o.to_string())?;
            Ok(if !o.agrees() {
                EXIT_ERROR
            } else {
                exit_code(o.verdict)
            })
        }
        Command::Witness { problem, flags } => {
            let w = cmd_witness(&Problem::load(&problem)?, &flags.options())?;
            print!("{w}");
            if let Some(out) = &flags.out {
                emit(Some(out), &(w.decide.file.to_json_string() + "\n"))?;
            }
            let failed = w.check.map_or(false, |c| !c.passed);
            Ok(if failed {
                EXIT_ERROR
            } else {
                w.decide.exit_code()
            })
        }
        Command::Render {
            problem,
            svg,
            witness_csv,
            flags,
        } => {
            let r = cmd_render(&Problem::load(&problem)?, &flags.options(), witness_csv.is_some())?;
            emit(flags.out.as_deref(), &r.csv)?;
            if let Some(p) = &svg {
                emit(Some(p), &r.svg)?;
            }
            if let Some(p) = &witness_csv {
                let text = r
                    .witness_csv
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("no witness: the union is not self-similar".into()))?;
                emit(Some(p), text)?;
            }
            Ok(EXIT_DECIDED)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
