//! Batch verification front-end.
//!
//! Every run reads explicit inputs, writes a single JSON document (or a
//! flat table) to stdout, and exits with 0 when the inequality or
//! predicate is verified, 1 when it is violated (the report carries a
//! witness where one exists), and 2 on input or schema errors.

mod ingest;
mod output;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chebcorr::applications::{
    monte_carlo_joint, series_monotonicity, win_probability_bounds, Direction, PowerSeriesSpec,
    TailModel,
};
use chebcorr::input::{ProbBoundFile, SequenceFile, SeriesFile};
use chebcorr::{
    anticorrelated_upper_bound, build_quotient, covariance_gap, product_inequality,
    sequence_lemma, CheckMode, Error, Result, Scalar, Tier, Tolerance, Verdict,
};

use ingest::{load_family, read_input};
use output::{emit, OutputFormat};

#[derive(Parser)]
#[command(
    name = "chebcorr",
    version,
    about = "Verify Chebyshev-type correlation inequalities on finite discrete measure spaces"
)]
struct Cli {
    /// Arithmetic tier: exact rationals or f64 with a tolerance comparator.
    #[arg(long, global = true, value_enum, default_value_t = TierArg::Exact)]
    tier: TierArg,

    /// Relative tolerance for float-tier verdicts (default 1e-9).
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the correlation (or anticorrelation) predicate of a family.
    CheckCorrelated {
        /// Family file: JSON schema or CSV (`point,weight,f1,...`); `-` for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = ModeArg::MuAe)]
        mode: ModeArg,
        /// Check the anticorrelation predicate instead (pairs only).
        #[arg(long)]
        anticorrelated: bool,
    },
    /// Build the quotient of a correlated family: classes, pushforward
    /// weights, representative values, induced order.
    Quotient { input: String },
    /// Verify `mu(X) ∫fg >= ∫f ∫g` for a two-function family.
    VerifyPair {
        input: String,
        /// Verify the reversed bound for an anticorrelated pair instead.
        #[arg(long)]
        reverse: bool,
    },
    /// Verify `mu(X)^(k-1) ∫∏f_i >= ∏∫f_i` for a k-function family.
    VerifyProduct {
        input: String,
        /// Reject negative values at positive-weight points (on by default;
        /// pass `--require-nonneg false` to evaluate signed instances).
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        require_nonneg: bool,
    },
    /// Verify the weighted-sequence inequality on a truncated prefix.
    VerifySequence {
        input: String,
        /// Keep only the first N terms of every sequence and the weights.
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Evaluate `(rho - z) f(z)` and `(rho - z) f(z) / z` on a grid and
    /// certify their monotonicity against the coefficient drift.
    PowerSeries {
        /// Coefficient file, or a builtin generator: `geometric:<q>`,
        /// `constant:<c>`, `monomial:<m>`.
        input: String,
        #[arg(long)]
        rho: String,
        /// Comma-separated grid points in [0, rho), strictly increasing.
        #[arg(long)]
        grid: String,
        /// Truncation length N (coefficient files are cut, builtins generated).
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Lower-bound the joint probability of beating every independent
    /// competitor by the product of pairwise probabilities.
    ProbBound {
        input: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Geq)]
        direction: DirectionArg,
        /// Monte Carlo cross-check sample count (0 skips it).
        #[arg(long, default_value_t = 0)]
        samples: u64,
        /// Seed for the Monte Carlo generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TierArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Everywhere,
    MuAe,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Geq,
    Leq,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckCorrelated { .. } => "check-correlated",
            Command::Quotient { .. } => "quotient",
            Command::VerifyPair { .. } => "verify-pair",
            Command::VerifyProduct { .. } => "verify-product",
            Command::VerifySequence { .. } => "verify-sequence",
            Command::PowerSeries { .. } => "power-series",
            Command::ProbBound { .. } => "prob-bound",
        }
    }
}

fn verdict_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Holds | Verdict::HoldsWithEquality => 0,
        Verdict::Violated => 1,
    }
}

/// Builtin coefficient generators for `power-series`.
fn builtin_series(name: &str, tier: Tier, n: usize, rho: Scalar) -> Result<Option<PowerSeriesSpec>> {
    let Some((kind, arg)) = name.split_once(':') else {
        return Ok(None);
    };
    match kind {
        "geometric" => {
            let q = Scalar::parse(arg, tier)?;
            let mut coeffs = Vec::with_capacity(n);
            let mut cur = Scalar::one(tier);
            for _ in 0..n {
                cur = &cur * &q;
                coeffs.push(cur.clone());
            }
            Ok(Some(PowerSeriesSpec {
                coeffs,
                rho,
                tail: TailModel::ExactGeometric(q),
            }))
        }
        "constant" => {
            let c = Scalar::parse(arg, tier)?;
            Ok(Some(PowerSeriesSpec {
                coeffs: vec![c; n],
                rho,
                tail: TailModel::ExactGeometric(Scalar::one(tier)),
            }))
        }
        "monomial" => {
            let m: usize = arg.parse().map_err(|_| Error::InvalidInput {
                reason: format!("monomial degree `{arg}` is not a positive integer"),
            })?;
            if m == 0 {
                return Err(Error::InvalidInput {
                    reason: "monomial degree must be at least 1".into(),
                });
            }
            let mut coeffs = vec![Scalar::zero(tier); m];
            coeffs[m - 1] = Scalar::one(tier);
            Ok(Some(PowerSeriesSpec {
                coeffs,
                rho,
                tail: TailModel::None,
            }))
        }
        _ => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<(i32, Value)> {
    let tier = match cli.tier {
        TierArg::Exact => Tier::Exact,
        TierArg::Float => Tier::Float,
    };
    let tol = match (tier, cli.tolerance) {
        (Tier::Exact, Some(_)) => {
            return Err(Error::InvalidInput {
                reason: "--tolerance is only meaningful with --tier float".into(),
            })
        }
        (_, Some(rel)) => Tolerance { rel },
        (_, None) => Tolerance::default(),
    };
    let command = cli.command.name();
    let base = |payload: Value| -> Value {
        let mut doc = json!({"command": command, "tier": tier.to_string()});
        doc.as_object_mut()
            .unwrap()
            .extend(payload.as_object().cloned().unwrap_or_default());
        doc
    };

    match &cli.command {
        Command::CheckCorrelated {
            input,
            mode,
            anticorrelated,
        } => {
            let fam = load_family(input, tier)?;
            let mode_val = match mode {
                ModeArg::Everywhere => CheckMode::Everywhere,
                ModeArg::MuAe => CheckMode::MuAe,
            };
            let witness = if *anticorrelated {
                fam.anticorrelation_violation(mode_val)?
            } else {
                fam.correlation_violation(mode_val)
            };
            let holds = witness.is_none();
            let doc = base(json!({
                "predicate": if *anticorrelated { "anticorrelated" } else { "correlated" },
                "mode": match mode { ModeArg::Everywhere => "everywhere", ModeArg::MuAe => "mu_ae" },
                "holds": holds,
                "witness": witness.map(|w| serde_json::to_value(w).unwrap()),
            }));
            Ok((if holds { 0 } else { 1 }, doc))
        }
        Command::Quotient { input } => {
            let fam = load_family(input, tier)?;
            let qs = build_quotient(&fam)?;
            let classes: Vec<Vec<String>> = qs
                .classes()
                .iter()
                .map(|members| {
                    members
                        .iter()
                        .map(|&p| fam.space().label(p).to_string())
                        .collect()
                })
                .collect();
            let rep_values: Value = fam
                .names()
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), serde_json::to_value(&qs.rep_values()[i]).unwrap()))
                .collect::<serde_json::Map<_, _>>()
                .into();
            let order: Vec<usize> = (0..fam.space().len()).map(|p| qs.class_of(p)).collect();
            let doc = base(json!({
                "classes": classes,
                "weights": serde_json::to_value(qs.class_weights()).unwrap(),
                "rep_values": rep_values,
                "order": order,
            }));
            Ok((0, doc))
        }
        Command::VerifyPair { input, reverse } => {
            let fam = load_family(input, tier)?;
            let report = if *reverse {
                anticorrelated_upper_bound(&fam, &tol)?
            } else {
                covariance_gap(&fam, &tol)?
            };
            let code = verdict_exit(report.verdict);
            Ok((code, base(json!({"report": serde_json::to_value(&report).unwrap()}))))
        }
        Command::VerifyProduct {
            input,
            require_nonneg,
        } => {
            let fam = load_family(input, tier)?;
            let report = product_inequality(&fam, *require_nonneg, &tol)?;
            let code = verdict_exit(report.verdict);
            Ok((code, base(json!({"report": serde_json::to_value(&report).unwrap()}))))
        }
        Command::VerifySequence { input, truncate } => {
            let inst = SequenceFile::parse(&read_input(input)?)?.resolve(tier, *truncate)?;
            let report = sequence_lemma(&inst, &tol)?;
            let code = verdict_exit(report.verdict);
            Ok((code, base(json!({"report": serde_json::to_value(&report).unwrap()}))))
        }
        Command::PowerSeries {
            input,
            rho,
            grid,
            truncate,
        } => {
            let rho = Scalar::parse(rho, tier)?;
            let grid: Vec<Scalar> = grid
                .split(',')
                .map(|s| Scalar::parse(s, tier))
                .collect::<Result<_>>()?;
            let spec = match builtin_series(input, tier, truncate.unwrap_or(32), rho.clone())? {
                Some(spec) => spec,
                None => SeriesFile::parse(&read_input(input)?)?.resolve(tier, rho, *truncate)?,
            };
            let report = series_monotonicity(&spec, &grid)?;
            let code = if report.normalized_matches == Some(true) {
                0
            } else {
                1
            };
            Ok((code, base(json!({"report": serde_json::to_value(&report).unwrap()}))))
        }
        Command::ProbBound {
            input,
            direction,
            samples,
            seed,
        } => {
            let (x0, comps) = ProbBoundFile::parse(&read_input(input)?)?.resolve(tier)?;
            let direction = match direction {
                DirectionArg::Geq => Direction::Geq,
                DirectionArg::Leq => Direction::Leq,
            };
            let report = win_probability_bounds(&x0, &comps, direction, &tol)?;
            let mc = if *samples > 0 {
                Some(monte_carlo_joint(&x0, &comps, direction, *samples, *seed)?)
            } else {
                None
            };
            let code = verdict_exit(report.verdict);
            Ok((
                code,
                base(json!({
                    "report": serde_json::to_value(&report).unwrap(),
                    "monte_carlo": mc.map(|m| serde_json::to_value(m).unwrap()),
                })),
            ))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let format = match cli.output {
        OutputArg::Json => OutputFormat::Json,
        OutputArg::Table => OutputFormat::Table,
    };
    let (code, doc) = match run(&cli) {
        Ok(result) => result,
        Err(e) => {
            // Predicate failures carry their witness and exit 1; anything
            // else is an input or schema error and exits 2.
            let witness = match &e {
                Error::NotCorrelated { witness } | Error::NotAnticorrelated { witness } => {
                    Some(serde_json::to_value(witness).unwrap())
                }
                _ => None,
            };
            let code = if witness.is_some() { 1 } else { 2 };
            let doc = json!({
                "command": cli.command.name(),
                "error": e.to_string(),
                "witness": witness,
            });
            (code, doc)
        }
    };
    emit(&doc, format);
    std::process::exit(code);
}
