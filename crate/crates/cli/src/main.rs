use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use equivol::commands::{self, parse_range, parse_weight, weights_in_range};
use equivol::corpus::{corpus_scenario, default_corpus};
use equivol::table::{emit, to_json};
use equivol::{load_scenario_file, CliError, Format, NamedScenario, Result, Suite, SuiteConfig};
use equivol_core::asymptotics::FitParams;
use equivol_core::Weight;

#[derive(Debug, Parser)]
#[command(name = "equivol", version, about = "Exact isotypic section counts and equivariant volumes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Weights {
    /// A single weight, e.g. `2` or `1,-1`
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Inclusive range per coordinate, e.g. `-3..3`
    #[arg(long, allow_hyphen_values = true)]
    mu_range: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Isotypic dimension and multiplicity of V_mu in H^0(M, L^k)
    Multiplicity {
        /// Scenario file, or the name of a shipped scenario
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        k: u64,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all_mu")]
        mu: Option<String>,
        /// Emit the full distribution
        #[arg(long)]
        all_mu: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Equivariant volumes vol_mu(L)
    Volume {
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        weights: Weights,
        /// Semigroup horizon used for the G-exponent
        #[arg(long, default_value_t = 60)]
        m_max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// G-semigroup and G-exponent of L and its tensor powers
    Exponent {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 60)]
        m_max: u64,
        #[arg(long, default_value_t = 1)]
        p_max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Stability class, moment image and generic stabilizer
    Classify {
        #[arg(long)]
        scenario: String,
        /// Weights for the vanishing table of unstable scenarios
        #[arg(long, allow_hyphen_values = true, default_value = "-6..6")]
        mu_range: String,
        #[command(flatten)]
        output: Output,
    },
    /// Predicted volumes dim(V_mu)^2 vol_0(L) against counted volumes
    Predict {
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        weights: Weights,
        #[command(flatten)]
        output: Output,
    },
    /// Run verification suites on the shipped corpus or given scenarios
    Verify {
        /// Suite to run (all suites when omitted)
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Scenario files or shipped names (the whole corpus when omitted)
        #[arg(long)]
        scenario: Vec<String>,
        /// Largest level compared against the brute-force oracle
        #[arg(long)]
        k_max: Option<u64>,
        /// Largest tensor power for the exponent law
        #[arg(long)]
        p_max: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        mu_range: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Full isotypic table for k <= k_max
    Table {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 8)]
        k_max: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn resolve(spec: &str) -> Result<NamedScenario> {
    let path = Path::new(spec);
    if path.exists() {
        return load_scenario_file(path);
    }
    corpus_scenario(spec).ok_or_else(|| {
        CliError::Usage(format!("{spec}: no such file and no shipped scenario of that name"))
    })
}

fn selected_weights(s: &equivol_core::Scenario, w: &Weights) -> Result<Vec<Weight>> {
    match (&w.mu, &w.mu_range) {
        (Some(_), Some(_)) => Err(CliError::Usage("give --mu or --mu-range, not both".into())),
        (Some(mu), None) => Ok(vec![parse_weight(mu, s.torus_rank())?]),
        (None, Some(r)) => Ok(weights_in_range(s, parse_range(r)?)),
        (None, None) => Ok(vec![Weight::zero(s.torus_rank())]),
    }
}

/// Runs a command; `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Multiplicity { scenario, k, mu, all_mu, output } => {
            let s = resolve(&scenario)?.scenario;
            let mu = match (mu, all_mu) {
                (_, true) => None,
                (Some(m), false) => Some(parse_weight(&m, s.torus_rank())?),
                (None, false) => Some(Weight::zero(s.torus_rank())),
            };
            let t = commands::multiplicity_table(&s, k, mu.as_ref())?;
            emit(&t.render(output.format.unwrap_or(Format::Csv))?, output.out.as_deref())?;
            Ok(true)
        }
        Command::Volume { scenario, weights, m_max, output } => {
            let s = resolve(&scenario)?.scenario;
            let mus = selected_weights(&s, &weights)?;
            let params = FitParams { m_max, ..FitParams::default() };
            let (t, unstable_fit) = commands::volume_table(&s, &mus, &params)?;
            emit(&t.render(output.format.unwrap_or(Format::Csv))?, output.out.as_deref())?;
            Ok(!unstable_fit)
        }
        Command::Exponent { scenario, m_max, p_max, output } => {
            let s = resolve(&scenario)?.scenario;
            let (t, ok) = commands::exponent_table(&s, m_max, p_max)?;
            emit(&t.render(output.format.unwrap_or(Format::Csv))?, output.out.as_deref())?;
            Ok(ok)
        }
        Command::Classify { scenario, mu_range, output } => {
            let s = resolve(&scenario)?.scenario;
            let report = commands::classify_report(&s, parse_range(&mu_range)?)?;
            let text = match output.format {
                Some(Format::Json) => to_json(&report)?,
                Some(Format::Csv) => {
                    return Err(CliError::Usage("classify supports text (default) or json".into()))
                }
                None => report.to_text(),
            };
            emit(&text, output.out.as_deref())?;
            Ok(true)
        }
        Command::Predict { scenario, weights, output } => {
            let s = resolve(&scenario)?.scenario;
            let mus = selected_weights(&s, &weights)?;
            let (t, ok) = commands::predict_table(&s, &mus, &FitParams::default())?;
            emit(&t.render(output.format.unwrap_or(Format::Csv))?, output.out.as_deref())?;
            Ok(ok)
        }
        Command::Verify { suite, scenario, k_max, p_max, mu_range, output } => {
            let set = if scenario.is_empty() {
                default_corpus()
            } else {
                scenario.iter().map(|s| resolve(s)).collect::<Result<Vec<_>>>()?
            };
            let mut cfg = SuiteConfig::default();
            if let Some(k) = k_max {
                cfg.oracle_k_max = k;
            }
            if let Some(p) = p_max {
                cfg.p_max = p;
            }
            if let Some(r) = mu_range {
                cfg.mu_range = parse_range(&r)?;
            }
            let suites: Vec<Suite> = suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
            let mut reports = Vec::new();
            for suite in suites {
                let report = equivol::run_suite(suite, &set, &cfg);
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                eprintln!(
                    "{verdict} {suite}: {}/{} checks passed",
                    report.summary.passed, report.summary.checks
                );
                for c in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!("  FAIL [{}] {}: {} vs {}", c.scenario, c.claim, c.lhs, c.rhs);
                }
                if let Some(fit) = &report.continuity {
                    eprintln!("  fitted C = {} (norm {})", fit.constant, fit.norm);
                }
                reports.push(report);
            }
            let ok = reports.iter().all(|r| r.passed());
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&reports)?,
                Format::Csv => {
                    let mut t = equivol::Table::new(&["suite", "scenario", "claim", "lhs", "rhs", "passed"]);
                    for r in &reports {
                        for c in &r.checks {
                            t.push(vec![
                                r.suite.to_string(),
                                c.scenario.clone(),
                                c.claim.clone(),
                                c.lhs.clone(),
                                c.rhs.clone(),
                                c.passed.to_string(),
                            ]);
                        }
                    }
                    t.to_csv()?
                }
            };
            if output.out.is_some() {
                emit(&text, output.out.as_deref())?;
            }
            Ok(ok)
        }
        Command::Table { scenario, k_max, output } => {
            let s = resolve(&scenario)?.scenario;
            let t = commands::full_table(&s, k_max)?;
            emit(&t.render(output.format.unwrap_or(Format::Csv))?, output.out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
