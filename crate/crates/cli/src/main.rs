//! `costprophet` — tables and simulations for cost-minimization prophet
//! inequalities.
//!
//! Exit codes: 0 success, 2 usage or spec parse failure, 3 numerical
//! failure, 4 unsupported distribution (infinite mean, missing Puiseux
//! head, or non-regular where regularity is required).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use costprophet::counterexamples::{
    equal_revenue_gap, equal_revenue_limit, naive_threshold_curve, non_iid_gap, GapReport,
};
use costprophet::distributions::DistributionSpec;
use costprophet::error::Error;
use costprophet::monte_carlo::{simulate_schedule, SimulationReport};
use costprophet::procurement::{check_regularity, posted_price_schedule, virtual_cost};
use costprophet::prophet::prophet_cost_auto;
use costprophet::quadrature::QuadratureConfig;
use costprophet::single_threshold::{
    best_single_threshold, recommended_threshold, single_threshold_cost,
};
use costprophet::stopping::{limiting_constant, optimal_schedule, ratio_curve, ThresholdSchedule};

/// Default RNG seed for `simulate`, chosen once so runs are reproducible
/// out of the box.
const DEFAULT_SEED: u64 = 12345;

#[derive(Parser)]
#[command(
    name = "costprophet",
    version,
    about = "Cost-minimization prophet inequalities: benchmarks, optimal stopping \
             schedules, single-threshold policies, Monte Carlo validation, and the \
             impossibility counterexamples.",
    after_help = "Distributions are JSON, e.g. \
                  '{\"family\":\"weibull_hazard\",\"params\":{\"a\":1,\"d\":1}}' \
                  (families: weibull_hazard, power_beta, equal_revenue, uniform)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Optimal,
    Single,
    Custom,
}

#[derive(Subcommand)]
enum Command {
    /// Prophet benchmark rows (n, beta_n); closed form when the family
    /// permits, adaptive quadrature otherwise.
    Beta {
        /// Distribution spec as JSON.
        #[arg(long)]
        dist: String,
        /// Single horizon.
        #[arg(long)]
        n: Option<u64>,
        /// Comma-separated horizons.
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
        /// All horizons 1..=n_max.
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Competitive-ratio table n,G,beta,R with the predicted limit
    /// lambda(d1) as a footer row.
    RatioTable {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal acceptance thresholds tau_1..tau_n (tau_n is "inf").
    Thresholds {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-threshold policy rows n,T,cost,beta,R at the recommended
    /// threshold, or at the numerically best one with --optimize.
    SingleThreshold {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
        /// Golden-section search for the best threshold instead of the
        /// display formula.
        #[arg(long)]
        optimize: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo simulation of a stopping policy.
    Simulate {
        #[arg(long)]
        dist: String,
        /// Horizon (number of draws per trial). Ignored for --policy
        /// custom, where the threshold list sets it.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_enum)]
        policy: Policy,
        /// Threshold for --policy single ("inf" allowed).
        #[arg(long)]
        threshold: Option<String>,
        /// Comma-separated thresholds for --policy custom; the last must
        /// be "inf".
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<String>>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The three impossibility demonstrations.
    Counterexamples {
        /// L for the two-point non-identical construction.
        #[arg(long, default_value_t = 100.0)]
        gap_l: f64,
        /// Truncation M for the equal-revenue demonstration.
        #[arg(long, default_value_t = 1e8)]
        truncation_m: f64,
        /// c for the naive threshold T = c/n on the exponential.
        #[arg(long, default_value_t = 1.0)]
        naive_c: f64,
        /// Horizons for the naive-threshold curve.
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1_000, 10_000])]
        naive_n_list: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Virtual costs phi(c) = c + F(c)/f(c), the regularity check, and
    /// (with --n) the posted-price schedule composed through phi^{-1}.
    VirtualCost {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 64)]
        grid_points: usize,
        /// Compose the optimal schedule in virtual-cost space for this
        /// horizon (bounded-support regular specs only).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InfiniteMean(_) | Error::MissingHead(_) | Error::NotRegular(_) => 4,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 3,
            message: format!("i/o error: {e}"),
        }
    }
}

fn parse_dist(text: &str) -> Result<DistributionSpec, Failure> {
    DistributionSpec::from_json(text).map_err(|e| Failure::usage(e.to_string()))
}

/// Floats in CSV output carry exactly 10 significant digits; infinities
/// print as "inf".
fn g10(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.000000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=9).contains(&exp) {
        format!("{:.*}", (9 - exp).max(0) as usize, x)
    } else {
        format!("{:.9e}", x)
    }
}

/// JSON value for a float; infinities become the string "inf"/"-inf".
fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn collect_horizons(
    n: Option<u64>,
    n_list: Option<Vec<u64>>,
    n_max: Option<u64>,
) -> Result<Vec<u64>, Failure> {
    let ns = match (n, n_list, n_max) {
        (Some(v), None, None) => vec![v],
        (None, Some(list), None) => list,
        (None, None, Some(max)) => (1..=max).collect(),
        _ => {
            return Err(Failure::usage(
                "provide exactly one of --n, --n-list, or --n-max",
            ))
        }
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(Failure::usage("horizons must be positive"));
    }
    Ok(ns)
}

fn parse_threshold(text: &str) -> Result<f64, Failure> {
    if text.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    text.parse::<f64>().map_err(|_| {
        Failure::usage(format!(
            "invalid threshold {text:?}; expected a number or \"inf\""
        ))
    })
}

fn run(command: Command) -> Result<(), Failure> {
    let cfg = QuadratureConfig::default();
    match command {
        Command::Beta {
            dist,
            n,
            n_list,
            n_max,
            format,
            out,
        } => {
            let spec = parse_dist(&dist)?;
            let ns = collect_horizons(n, n_list, n_max)?;
            let mut rows = Vec::with_capacity(ns.len());
            for n in ns {
                let (beta, method) = prophet_cost_auto(&spec, n, &cfg)?;
                rows.push((n, beta, method.as_str()));
            }
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("n,beta,method\n");
                    for (n, beta, method) in rows {
                        s.push_str(&format!("{n},{},{method}\n", g10(beta)));
                    }
                    s
                }
                Format::Json => {
                    let arr: Vec<Value> = rows
                        .into_iter()
                        .map(|(n, beta, method)| {
                            json!({"n": n, "beta": jnum(beta), "method": method})
                        })
                        .collect();
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&arr).expect("valid json")
                    )
                }
            };
            emit(&out, &content)
        }

        Command::RatioTable {
            dist,
            n_max,
            format,
            out,
        } => {
            if n_max == 0 {
                return Err(Failure::usage("--n-max must be positive"));
            }
            let spec = parse_dist(&dist)?;
            let curve = ratio_curve(&spec, n_max as usize, &cfg)?;
            let limit = limiting_constant(&spec)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("n,G,beta,R\n");
                    for row in &curve.rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            row.n,
                            g10(row.algorithm_cost),
                            g10(row.prophet_cost),
                            g10(row.ratio)
                        ));
                    }
                    s.push_str(&format!("limit,,,{}\n", g10(limit)));
                    s
                }
                Format::Json => {
                    let rows: Vec<Value> = curve
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "G": jnum(r.algorithm_cost),
                                "beta": jnum(r.prophet_cost),
                                "R": jnum(r.ratio),
                            })
                        })
                        .collect();
                    let v = json!({"rows": rows, "limit": jnum(limit)});
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&v).expect("valid json")
                    )
                }
            };
            emit(&out, &content)
        }

        Command::Thresholds {
            dist,
            n,
            format,
            out,
        } => {
            if n == 0 {
                return Err(Failure::usage("--n must be positive"));
            }
            let spec = parse_dist(&dist)?;
            let schedule = optimal_schedule(&spec, n as usize, &cfg)?;
            emit(&out, &schedule_output(&schedule, format))
        }

        Command::SingleThreshold {
            dist,
            n,
            n_list,
            optimize,
            format,
            out,
        } => {
            let spec = parse_dist(&dist)?;
            let ns = collect_horizons(n, n_list, None)?;
            let mut reports = Vec::with_capacity(ns.len());
            for n in ns {
                let rep = if optimize {
                    best_single_threshold(&spec, n, &cfg)?
                } else {
                    let head = spec.puiseux_head().ok_or_else(|| {
                        Error::MissingHead(format!("{} carries no Puiseux head", spec.name()))
                    })?;
                    let t = recommended_threshold(&head, n)?;
                    let cost = single_threshold_cost(&spec, t, n, &cfg)?;
                    let (beta, _) = prophet_cost_auto(&spec, n, &cfg)?;
                    costprophet::SingleThresholdReport {
                        n,
                        threshold: t,
                        expected_cost: cost,
                        prophet_cost: beta,
                        ratio: cost / beta,
                    }
                };
                reports.push(rep);
            }
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("n,T,cost,beta,R\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.n,
                            g10(r.threshold),
                            g10(r.expected_cost),
                            g10(r.prophet_cost),
                            g10(r.ratio)
                        ));
                    }
                    s
                }
                Format::Json => {
                    let arr: Vec<Value> = reports
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "T": jnum(r.threshold),
                                "cost": jnum(r.expected_cost),
                                "beta": jnum(r.prophet_cost),
                                "R": jnum(r.ratio),
                            })
                        })
                        .collect();
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&arr).expect("valid json")
                    )
                }
            };
            emit(&out, &content)
        }

        Command::Simulate {
            dist,
            n,
            policy,
            threshold,
            thresholds,
            trials,
            seed,
            format,
            out,
        } => {
            let spec = parse_dist(&dist)?;
            if trials == 0 {
                return Err(Failure::usage("--trials must be positive"));
            }
            let schedule = match policy {
                Policy::Optimal => {
                    let n = n.ok_or_else(|| Failure::usage("--policy optimal needs --n"))?;
                    if n == 0 {
                        return Err(Failure::usage("--n must be positive"));
                    }
                    optimal_schedule(&spec, n as usize, &cfg)?
                }
                Policy::Single => {
                    let n = n.ok_or_else(|| Failure::usage("--policy single needs --n"))?;
                    if n == 0 {
                        return Err(Failure::usage("--n must be positive"));
                    }
                    let t = parse_threshold(&threshold.ok_or_else(|| {
                        Failure::usage("--policy single needs --threshold <T|inf>")
                    })?)?;
                    ThresholdSchedule::flat(t, n as usize)
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
                Policy::Custom => {
                    let texts = thresholds.ok_or_else(|| {
                        Failure::usage("--policy custom needs --thresholds t1,...,inf")
                    })?;
                    let taus = texts
                        .iter()
                        .map(|t| parse_threshold(t))
                        .collect::<Result<Vec<_>, _>>()?;
                    ThresholdSchedule::new(taus).map_err(|e| Failure::usage(e.to_string()))?
                }
            };
            let report = simulate_schedule(&spec, &schedule, trials, seed)?;
            emit(&out, &simulation_output(&report, format))
        }

        Command::Counterexamples {
            gap_l,
            truncation_m,
            naive_c,
            naive_n_list,
            format,
            out,
        } => {
            let gap = non_iid_gap(gap_l).map_err(|e| Failure::usage(e.to_string()))?;
            let er = equal_revenue_gap(truncation_m).map_err(|e| Failure::usage(e.to_string()))?;
            let er_limit = equal_revenue_limit();
            let naive = naive_threshold_curve(naive_c, &naive_n_list)
                .map_err(|e| Failure::usage(e.to_string()))?;

            eprintln!(
                "non-identical costs (L = {gap_l}): adversarial ratio {}, random order >= {}",
                g10(gap.adversarial.ratio),
                g10(gap.random_order.ratio)
            );
            eprintln!(
                "equal-revenue truncated at M = {truncation_m}: ratio {} and growing without \
                 bound (prophet -> 2)",
                g10(er.ratio)
            );
            if let (Some(first), Some(last)) = (naive.points.first(), naive.points.last()) {
                eprintln!(
                    "naive threshold c/n on the exponential: ratio {} at n = {} vs {} at n = {}",
                    g10(first.report.ratio),
                    first.n,
                    g10(last.report.ratio),
                    last.n
                );
            }

            let content = match format {
                Format::Csv => {
                    let mut s = String::from("regime,parameter,n,alg_cost,prophet_cost,ratio\n");
                    let mut push = |regime: &str, param: f64, n: Option<u64>, r: &GapReport| {
                        s.push_str(&format!(
                            "{regime},{},{},{},{},{}\n",
                            g10(param),
                            n.map(|v| v.to_string()).unwrap_or_default(),
                            g10(r.alg_cost),
                            g10(r.prophet_cost),
                            g10(r.ratio)
                        ));
                    };
                    push("adversarial", gap_l, None, &gap.adversarial);
                    push("random_order", gap_l, None, &gap.random_order);
                    push("iid_equal_revenue", truncation_m, Some(2), &er);
                    for pt in &naive.points {
                        push("naive_threshold", naive_c, Some(pt.n), &pt.report);
                    }
                    s
                }
                Format::Json => {
                    let naive_points: Vec<Value> = naive
                        .points
                        .iter()
                        .map(|p| {
                            json!({
                                "n": p.n,
                                "alg_cost": jnum(p.report.alg_cost),
                                "prophet_cost": jnum(p.report.prophet_cost),
                                "ratio": jnum(p.report.ratio),
                                "divergent_term": jnum(p.divergent_term),
                            })
                        })
                        .collect();
                    let v = json!({
                        "non_iid": {
                            "L": jnum(gap_l),
                            "adversarial": gap_json(&gap.adversarial),
                            "random_order": gap_json(&gap.random_order),
                        },
                        "equal_revenue": {
                            "truncation_m": jnum(truncation_m),
                            "report": gap_json(&er),
                            "limit": {
                                "prophet_cost": jnum(er_limit.prophet_cost),
                                "alg_cost": jnum(er_limit.alg_cost),
                                "ratio": jnum(er_limit.ratio),
                            },
                        },
                        "naive_threshold": {
                            "c": jnum(naive.c),
                            "first_summand_limit": jnum(naive.first_summand_limit),
                            "points": naive_points,
                        },
                    });
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&v).expect("valid json")
                    )
                }
            };
            emit(&out, &content)
        }

        Command::VirtualCost {
            dist,
            grid_points,
            n,
            format,
            out,
        } => {
            let spec = parse_dist(&dist)?;
            if grid_points < 2 {
                return Err(Failure::usage("--grid-points must be at least 2"));
            }
            let reg = check_regularity(&spec, grid_points)?;
            let lo = spec.support_low();
            let hi = spec.quantile(1.0 - 1e-6)?.min(spec.support_high());
            let mut map_rows = Vec::with_capacity(grid_points + 1);
            for j in 0..=grid_points {
                let c = lo + (hi - lo) * j as f64 / grid_points as f64;
                map_rows.push((c, virtual_cost(&spec, c)?));
            }
            let prices = match n {
                Some(n) if n > 0 => Some(posted_price_schedule(&spec, n as usize, &cfg)?),
                Some(_) => return Err(Failure::usage("--n must be positive")),
                None => None,
            };
            eprintln!(
                "{}: {}",
                spec.name(),
                if reg.is_regular {
                    "regular (virtual cost nondecreasing on the grid)".to_string()
                } else {
                    format!(
                        "NOT regular; witness near {}",
                        g10(reg.witness.unwrap_or(lo))
                    )
                }
            );

            let content = match format {
                Format::Csv => match &prices {
                    Some(schedule) => {
                        let mut s = String::from("i,price\n");
                        for (i, &p) in schedule.thresholds().iter().enumerate() {
                            s.push_str(&format!("{},{}\n", i + 1, g10(p)));
                        }
                        s
                    }
                    None => {
                        let mut s = String::from("c,phi\n");
                        for (c, phi) in &map_rows {
                            s.push_str(&format!("{},{}\n", g10(*c), g10(*phi)));
                        }
                        s
                    }
                },
                Format::Json => {
                    let map: Vec<Value> = map_rows
                        .iter()
                        .map(|(c, phi)| json!({"c": jnum(*c), "phi": jnum(*phi)}))
                        .collect();
                    let mut v = json!({
                        "is_regular": reg.is_regular,
                        "witness": reg.witness.map(jnum).unwrap_or(Value::Null),
                        "map": map,
                    });
                    if let Some(schedule) = &prices {
                        let arr: Vec<Value> =
                            schedule.thresholds().iter().map(|&p| jnum(p)).collect();
                        v["posted_prices"] = Value::Array(arr);
                    }
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&v).expect("valid json")
                    )
                }
            };
            emit(&out, &content)
        }
    }
}

fn gap_json(r: &GapReport) -> Value {
    json!({
        "regime": r.regime.as_str(),
        "alg_cost": jnum(r.alg_cost),
        "prophet_cost": jnum(r.prophet_cost),
        "ratio": jnum(r.ratio),
    })
}

fn schedule_output(schedule: &ThresholdSchedule, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("i,tau\n");
            for (i, &tau) in schedule.thresholds().iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, g10(tau)));
            }
            s
        }
        Format::Json => {
            let taus: Vec<Value> = schedule.thresholds().iter().map(|&t| jnum(t)).collect();
            let v = json!({"n": schedule.horizon(), "thresholds": taus});
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("valid json")
            )
        }
    }
}

fn simulation_output(report: &SimulationReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let hist = report
                .acceptance_index_histogram
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";");
            format!(
                "trials,seed,mean_cost,std_error,prophet_mean,prophet_std_error,histogram\n\
                 {},{},{},{},{},{},{hist}\n",
                report.trials,
                report.seed,
                g10(report.mean_cost),
                g10(report.std_error),
                g10(report.prophet_mean),
                g10(report.prophet_std_error),
            )
        }
        Format::Json => {
            format!(
                "{}\n",
                serde_json::to_string_pretty(report).expect("valid json")
            )
        }
    }
}
