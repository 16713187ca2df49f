//! `cirelax`: command-line access to the CI implication checkers.
//!
//! Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cirelax_core::implication::{
    check_marginal, check_recursive, semigraphoid_closure, validate_bound, Refutation,
};
use cirelax_core::lp::{optimal_lambda, separating_point, ConeProgram, LambdaBound, LinearFunctional};
use cirelax_core::triple::{parse_ci_triple_interning, parse_term, Term};
use cirelax_core::value::{format_rational, parse_rational};
use cirelax_core::{
    implies_positive, parse_ci_set, parse_ci_triple, single_atom_polymatroid, CISet, CITriple, Dag,
    JointDistribution, PolymatroidTable, Universe,
};

#[derive(Parser, Debug)]
#[command(name = "cirelax", version, about = "Exact and approximate conditional-independence implication")]
struct Cli {
    /// Output format; only `text` is implemented.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Atoms,
    Lp,
    Graphoid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Recursive,
    Marginal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test d-separation of a query in a DAG.
    Dsep {
        #[arg(long)]
        dag: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Decide whether the antecedents imply the consequent.
    Implies {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: String,
        #[arg(long, value_enum, default_value_t = Mode::Atoms)]
        mode: Mode,
        /// Write the LP (lp mode) as a plain-text listing.
        #[arg(long)]
        dump_program: Option<PathBuf>,
    },
    /// Relaxation certificate for a DAG basis or marginal antecedents.
    Bound {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, required_if_eq("kind", "recursive"))]
        dag: Option<PathBuf>,
        #[arg(long, required_if_eq("kind", "marginal"))]
        sigma: Option<PathBuf>,
        #[arg(long)]
        tau: String,
        /// Where to write the refutation on a negative verdict.
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
    /// Least λ with λ·h(Σ) ≥ h(τ) over the Shannon cone.
    Lambda {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: String,
    },
    /// Write a polymatroid with h(Σ) = 0 and h(τ) = 1, if one exists.
    Counterexample {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate H(...) or I(...) on a distribution or a polymatroid table.
    Entropy {
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        dist: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        term: String,
    },
    /// Semigraphoid closure of a set of triples.
    Closure {
        #[arg(long)]
        sigma: PathBuf,
    },
    /// Check λ·h(Σ) ≥ h(τ) on random distributions.
    Validate {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "CIRELAX_SEED", default_value_t = 0)]
        seed: u64,
        /// Cardinality of every variable.
        #[arg(long, default_value_t = 2)]
        card: usize,
    },
}

/// A verdict plus the text to print.
struct Outcome {
    positive: bool,
    report: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_sigma(path: &Path, tau: &str) -> Result<(Universe, CISet, CITriple)> {
    let mut universe = Universe::default();
    let sigma = parse_ci_set(&read(path)?, &mut universe)
        .with_context(|| format!("in {}", path.display()))?;
    let tau = parse_ci_triple_interning(tau, &mut universe).context("in --tau")?;
    Ok((universe, sigma, tau))
}

fn load_dag(path: &Path) -> Result<Dag> {
    Dag::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn refutation_text(r: &Refutation, universe: &Universe) -> String {
    match r {
        Refutation::Polymatroid(h) => h.to_text(universe),
        Refutation::Distribution(d) => d.to_text(universe),
    }
}

/// 12 significant digits, trailing zeros trimmed, at least one decimal.
fn significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{:.1}", if v == 0.0 { 0.0 } else { v });
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(1, 40) as usize;
    let mut s = format!("{v:.decimals$}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Dsep { dag, query } => {
            let dag = load_dag(&dag)?;
            let t = parse_ci_triple(&query, dag.universe()).context("in --query")?;
            let separated = dag.d_separated(t.x(), t.y(), t.z())?;
            let verdict = if separated { "SEPARATED" } else { "NOT-SEPARATED" };
            Ok(Outcome {
                positive: separated,
                report: format!("{verdict} {}\n", t.display(dag.universe())),
            })
        }
        Command::Implies {
            sigma,
            tau,
            mode,
            dump_program,
        } => {
            let (u, sigma, tau) = load_sigma(&sigma, &tau)?;
            let n = u.len();
            match mode {
                Mode::Atoms => {
                    let v = implies_positive(&sigma, &tau, n)?;
                    let report = match v.witness {
                        None => "IMPLIED\nmode=atoms\n".to_string(),
                        Some(a) => format!("NOT-IMPLIED witness={}\nmode=atoms\n", u.braces(a)),
                    };
                    Ok(Outcome {
                        positive: v.implied,
                        report,
                    })
                }
                Mode::Lp => {
                    if let Some(path) = dump_program {
                        let program = ConeProgram::new(
                            n,
                            LinearFunctional::cmi(&tau),
                            LinearFunctional::sum_cmi(&sigma),
                        )?;
                        write(&path, &program.to_text(&u))?;
                    }
                    Ok(match optimal_lambda(&sigma, &tau, n)? {
                        LambdaBound::Finite(q) => Outcome {
                            positive: true,
                            report: format!("IMPLIED lambda={}\nmode=lp\n", format_rational(&q)),
                        },
                        LambdaBound::Unbounded => Outcome {
                            positive: false,
                            report: "NOT-IMPLIED witness=unbounded-ray\nmode=lp\nlambda=unbounded\n".into(),
                        },
                    })
                }
                Mode::Graphoid => {
                    let closure = semigraphoid_closure(&sigma, n)?;
                    let implied = closure.contains(&tau);
                    let head = if implied { "IMPLIED" } else { "NOT-IMPLIED witness=not-derivable" };
                    Ok(Outcome {
                        positive: implied,
                        report: format!("{head}\nmode=graphoid\nclosure_size={}\n", closure.len()),
                    })
                }
            }
        }
        Command::Bound {
            kind,
            dag,
            sigma,
            tau,
            artifact,
        } => {
            let (universe, cert) = match kind {
                Kind::Recursive => {
                    let dag = load_dag(dag.as_deref().context("--dag is required")?)?;
                    let t = parse_ci_triple(&tau, dag.universe()).context("in --tau")?;
                    (dag.universe().clone(), check_recursive(&dag, &t)?)
                }
                Kind::Marginal => {
                    let (u, sigma, t) = load_sigma(sigma.as_deref().context("--sigma is required")?, &tau)?;
                    if let Some(s) = sigma.iter().find(|s| !s.is_marginal()) {
                        bail!("antecedent {} is not marginal", s.display(&u));
                    }
                    let n = u.len();
                    (u, check_marginal(&sigma, &t, n)?)
                }
            };
            let mut report = cert.report(&universe);
            if let (Some(path), Some(r)) = (artifact, &cert.refutation) {
                write(&path, &refutation_text(r, &universe))?;
                report.push_str(&format!("artifact={}\n", path.display()));
            }
            Ok(Outcome {
                positive: cert.implied,
                report,
            })
        }
        Command::Lambda { sigma, tau } => {
            let (u, sigma, tau) = load_sigma(&sigma, &tau)?;
            let bound = optimal_lambda(&sigma, &tau, u.len())?;
            Ok(Outcome {
                positive: bound != LambdaBound::Unbounded,
                report: format!("lambda={bound}\n"),
            })
        }
        Command::Counterexample { sigma, tau, out } => {
            let (u, sigma, tau) = load_sigma(&sigma, &tau)?;
            let n = u.len();
            let verdict = implies_positive(&sigma, &tau, n)?;
            let (h, source) = match verdict.witness {
                Some(atom) => (Some(single_atom_polymatroid(atom, n)?), format!("atom={}", u.braces(atom))),
                None if n <= cirelax_core::lp::MAX_LP_VARS => {
                    (separating_point(&sigma, &tau, n)?, "source=lp".to_string())
                }
                None => (None, String::new()),
            };
            Ok(match h {
                Some(h) => {
                    write(&out, &h.to_text(&u))?;
                    Outcome {
                        positive: true,
                        report: format!("COUNTEREXAMPLE {source}\nh_sigma=0\nh_tau=1\nartifact={}\n", out.display()),
                    }
                }
                None => Outcome {
                    positive: false,
                    report: "NO-COUNTEREXAMPLE\n".into(),
                },
            })
        }
        Command::Entropy { dist, table, term } => {
            let (exact, value) = match (dist, table) {
                (Some(path), _) => {
                    let (u, d) = JointDistribution::parse(&read(&path)?)
                        .with_context(|| format!("in {}", path.display()))?;
                    let term = parse_term(&term, &u).context("in --term")?;
                    evaluate_on_distribution(&d, &term)
                }
                (None, Some(path)) => {
                    let (u, h) = PolymatroidTable::parse(&read(&path)?)
                        .with_context(|| format!("in {}", path.display()))?;
                    let term = parse_term(&term, &u).context("in --term")?;
                    let q = match term {
                        Term::Mutual(t) => h.cmi(&t),
                        Term::Entropy { target, given } => h.conditional_entropy(target, given),
                    };
                    let v = num_to_f64(&q);
                    (Some(format_rational(&q)), v)
                }
                (None, None) => bail!("one of --dist or --table is required"),
            };
            let mut report = format!("{}\n", significant(value));
            if let Some(q) = exact {
                report.push_str(&format!("exact={q}\n"));
            }
            Ok(Outcome {
                positive: true,
                report,
            })
        }
        Command::Closure { sigma } => {
            let mut u = Universe::default();
            let sigma = parse_ci_set(&read(&sigma)?, &mut u)
                .with_context(|| format!("in {}", sigma.display()))?;
            let closure = semigraphoid_closure(&sigma, u.len())?;
            let mut report = format!("closure_size={}\n", closure.len());
            for t in &closure {
                report.push_str(&format!("{}\n", t.display(&u)));
            }
            Ok(Outcome {
                positive: true,
                report,
            })
        }
        Command::Validate {
            sigma,
            tau,
            lambda,
            trials,
            seed,
            card,
        } => {
            let (u, sigma, tau) = load_sigma(&sigma, &tau)?;
            let lambda = parse_rational(&lambda).with_context(|| format!("bad --lambda `{lambda}`"))?;
            if card < 2 {
                bail!("--card must be at least 2");
            }
            let r = validate_bound(&sigma, &tau, &lambda, &vec![card; u.len()], trials, seed)?;
            Ok(Outcome {
                positive: r.passed,
                report: r.report(),
            })
        }
    }
}

fn num_to_f64<T: cirelax_core::value::Value>(v: &T) -> f64 {
    v.to_f64()
}

/// Exact where the distribution allows it, floating-point otherwise.
fn evaluate_on_distribution(d: &JointDistribution, term: &Term) -> (Option<String>, f64) {
    let exact = match term {
        Term::Mutual(t) => d.exact_cmi(t),
        Term::Entropy { target, given } => d
            .exact_entropy(*target | *given)
            .and_then(|joint| Ok(joint.sub(&d.exact_entropy(*given)?))),
    };
    match exact {
        Ok(v) => (v.to_rational().map(|q| format_rational(&q)), v.to_f64()),
        Err(_) => {
            let v = match term {
                Term::Mutual(t) => d.cmi(t),
                Term::Entropy { target, given } => d.entropy(*target | *given) - d.entropy(*given),
            };
            (None, v)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Text = cli.format;
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if outcome.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("ERROR");
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
