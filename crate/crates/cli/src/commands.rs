//! Command-line surface: argument definitions, scenario loading, and one
//! runner per verb.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use ncv_core::{
    fit_linear, parse_hashrate_csv, rank_factors, GrowthModel, LinearFit, Scenario, ScenarioFile,
    SensitivityOptions, ValuationSummary, DEFAULT_MOORE_DOUBLING_DAYS,
};

use crate::output::emit;
use crate::svg::{render_svg, Series};
use crate::table::{fmt_sig, render_table};

const TABLE_DIGITS: u32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "ncv",
    version,
    about = "Net-coin-value valuation of mining investments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Valuation summary: peak, payback, doubling, ROI, end of life
    Value {
        /// Scenario file
        scenario: PathBuf,
        /// Override the scenario's horizon, in days
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Write the artifact to this path (atomically) instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Accumulated coin flow under each growth law next to the HODL baseline
    Compare {
        scenario: PathBuf,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One summary row per delivery delay
    Delay {
        scenario: PathBuf,
        /// Comma-separated delivery delays in days, e.g. 0,140
        #[arg(long, value_delimiter = ',', required = true)]
        delays: Vec<u32>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Peak day and peak value per electricity tariff
    #[command(name = "sweep-electricity")]
    SweepElectricity {
        scenario: PathBuf,
        /// Comma-separated tariffs in fiat per kWh, e.g. 0,0.09,0.19
        #[arg(long, value_delimiter = ',', required = true)]
        prices: Vec<f64>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Elasticity of ROI and payback per factor, ranked by impact
    Sensitivity {
        scenario: PathBuf,
        /// Relative perturbation in (0, 1)
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Absolute step in days for the delivery-delay factor
        #[arg(long)]
        delay_step: Option<u32>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Highest recoverable card price and the end-of-life cause
    Frontier {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure modes mapped to exit codes: parse and usage errors exit 2,
/// infeasible computations exit 3, output I/O failures exit 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Runs one parsed command to completion.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Value {
            scenario,
            horizon,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let subject = with_horizon(loaded.scenario, horizon)?;
            let artifact = value_artifact(&subject, format)?;
            emit(&artifact, output.as_deref())
        }
        Command::Compare {
            scenario,
            horizon,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let subject = with_horizon(loaded.scenario.clone(), horizon)?;
            let artifact = compare_artifact(&loaded, &subject, format)?;
            emit(&artifact, output.as_deref())
        }
        Command::Delay {
            scenario,
            delays,
            horizon,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let subject = with_horizon(loaded.scenario, horizon)?;
            let artifact = delay_artifact(&subject, &delays, format)?;
            emit(&artifact, output.as_deref())
        }
        Command::SweepElectricity {
            scenario,
            prices,
            horizon,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let subject = with_horizon(loaded.scenario, horizon)?;
            let artifact = sweep_artifact(&subject, &prices, format)?;
            emit(&artifact, output.as_deref())
        }
        Command::Sensitivity {
            scenario,
            delta,
            delay_step,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let artifact = sensitivity_artifact(&loaded.scenario, delta, delay_step, format)?;
            emit(&artifact, output.as_deref())
        }
        Command::Frontier {
            scenario,
            format,
            output,
        } => {
            let loaded = load_scenario(&scenario)?;
            let artifact = frontier_artifact(&loaded.scenario, format)?;
            emit(&artifact, output.as_deref())
        }
    }
}

pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub scenario: Scenario,
    /// Present when the growth model came from a fitted hashrate history.
    pub fit: Option<LinearFit>,
}

/// Reads and validates a scenario file, fitting the referenced hashrate
/// history when the file defers to one.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        message: error.to_string(),
    })?;
    let file = ScenarioFile::parse(&text).map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        message: error.to_string(),
    })?;
    let (scenario, fit) = match file.scenario() {
        Some(scenario) => (scenario, None),
        None => {
            let fit = fit_history(path, &file)?;
            (file.scenario_with_growth(fit.model), Some(fit))
        }
    };
    scenario.validate().map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        message: error.to_string(),
    })?;
    Ok(LoadedScenario { file, scenario, fit })
}

fn fit_history(scenario_path: &Path, file: &ScenarioFile) -> Result<LinearFit, CliError> {
    let relative = file
        .required_history_path()
        .expect("file without a model must name a history");
    let csv_path = scenario_path
        .parent()
        .map(|dir| dir.join(relative))
        .unwrap_or_else(|| PathBuf::from(relative));
    let text = std::fs::read_to_string(&csv_path).map_err(|error| CliError::Parse {
        path: csv_path.display().to_string(),
        message: error.to_string(),
    })?;
    let history = parse_hashrate_csv(&text).map_err(|error| CliError::Parse {
        path: csv_path.display().to_string(),
        message: error.to_string(),
    })?;
    let fit = fit_linear(&history).map_err(|error| CliError::Infeasible(error.to_string()))?;
    if fit.clamped_negative_slope {
        eprintln!(
            "warning: {}: fitted hashrate slope is negative; growth clamped to flat",
            csv_path.display()
        );
    }
    Ok(fit)
}

fn with_horizon(mut scenario: Scenario, horizon: Option<u32>) -> Result<Scenario, CliError> {
    if let Some(horizon) = horizon {
        scenario.horizon_days = horizon;
        scenario
            .validate()
            .map_err(|error| CliError::Infeasible(error.to_string()))?;
    }
    Ok(scenario)
}

fn csv_f64(value: f64) -> String {
    // Shortest representation that parses back to the same double.
    format!("{value}")
}

fn optional_day(day: Option<u32>) -> String {
    day.map_or_else(|| "-".to_string(), |d| d.to_string())
}

fn summary_rows(summary: &ValuationSummary) -> Vec<Vec<String>> {
    vec![
        vec!["peak_day".into(), summary.peak_day.to_string()],
        vec!["peak_ncv".into(), fmt_sig(summary.peak_ncv, TABLE_DIGITS)],
        vec!["payback_day".into(), optional_day(summary.payback_day)],
        vec!["doubling_day".into(), optional_day(summary.doubling_day)],
        vec!["hodl_coins".into(), fmt_sig(summary.hodl_coins, TABLE_DIGITS)],
        vec!["roi".into(), fmt_sig(summary.roi, TABLE_DIGITS)],
        vec!["eol".into(), summary.eol.to_string()],
        vec![
            "peak_ncv_fiat_at_p0".into(),
            fmt_sig(summary.peak_ncv_fiat_at_p0, TABLE_DIGITS),
        ],
    ]
}

fn value_artifact(scenario: &Scenario, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Table => {
            let summary = scenario.summary();
            Ok(render_table(&["metric", "value"], &summary_rows(&summary)))
        }
        OutputFormat::Csv => {
            let series = scenario.ncv_series();
            let mut out = String::from("day,c_i,ncv\n");
            for (day, flow, ncv) in series.iter_days() {
                let _ = writeln!(out, "{day},{},{}", csv_f64(flow), csv_f64(ncv));
            }
            Ok(out)
        }
        OutputFormat::Svg => {
            let series = scenario.ncv_series();
            let hodl = scenario.hodl_baseline();
            let lines = vec![
                Series::new("hodl", 1, vec![hodl; series.len()]),
                Series::new("ncv", 1, series.cumulative().to_vec()),
            ];
            render_svg(&lines).map_err(|error| CliError::Infeasible(error.to_string()))
        }
    }
}

struct ComparisonCurves {
    hodl: f64,
    exponential: Vec<f64>,
    linear: Vec<f64>,
    moore: Vec<f64>,
}

fn comparison_curves(
    loaded: &LoadedScenario,
    subject: &Scenario,
) -> Result<ComparisonCurves, CliError> {
    let file = &loaded.file;
    let rate = file.growth_rate_daily.ok_or_else(|| {
        CliError::Infeasible(
            "compare needs growth_rate_daily for the exponential and linear curves".to_string(),
        )
    })?;
    let linear_model = match &loaded.fit {
        Some(fit) => fit.model,
        None => GrowthModel::Linear { rate },
    };
    let models = [
        GrowthModel::Exponential { rate },
        linear_model,
        GrowthModel::MooreLaw {
            doubling_days: file.moore_doubling_days.unwrap_or(DEFAULT_MOORE_DOUBLING_DAYS),
        },
    ];
    let mut curves: Vec<Vec<f64>> = Vec::with_capacity(3);
    for model in models {
        let mut variant = subject.clone();
        variant.growth = model;
        variant
            .validate()
            .map_err(|error| CliError::Infeasible(error.to_string()))?;
        curves.push(variant.ncv_series().cumulative().to_vec());
    }
    let moore = curves.pop().expect("three curves");
    let linear = curves.pop().expect("two curves");
    let exponential = curves.pop().expect("one curve");
    Ok(ComparisonCurves {
        hodl: subject.hodl_baseline(),
        exponential,
        linear,
        moore,
    })
}

fn compare_artifact(
    loaded: &LoadedScenario,
    subject: &Scenario,
    format: OutputFormat,
) -> Result<String, CliError> {
    let curves = comparison_curves(loaded, subject)?;
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("day,hodl,ncv_exponential,ncv_linear,ncv_moore\n");
            for day in 1..=subject.horizon_days {
                let i = (day - 1) as usize;
                let _ = writeln!(
                    out,
                    "{day},{},{},{},{}",
                    csv_f64(curves.hodl),
                    csv_f64(curves.exponential[i]),
                    csv_f64(curves.linear[i]),
                    csv_f64(curves.moore[i])
                );
            }
            Ok(out)
        }
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = (1..=subject.horizon_days)
                .map(|day| {
                    let i = (day - 1) as usize;
                    vec![
                        day.to_string(),
                        fmt_sig(curves.hodl, TABLE_DIGITS),
                        fmt_sig(curves.exponential[i], TABLE_DIGITS),
                        fmt_sig(curves.linear[i], TABLE_DIGITS),
                        fmt_sig(curves.moore[i], TABLE_DIGITS),
                    ]
                })
                .collect();
            Ok(render_table(
                &["day", "hodl", "ncv_exponential", "ncv_linear", "ncv_moore"],
                &rows,
            ))
        }
        OutputFormat::Svg => {
            let n = curves.exponential.len();
            let lines = vec![
                Series::new("hodl", 1, vec![curves.hodl; n]),
                Series::new("exponential", 1, curves.exponential),
                Series::new("linear", 1, curves.linear),
                Series::new("moore", 1, curves.moore),
            ];
            render_svg(&lines).map_err(|error| CliError::Infeasible(error.to_string()))
        }
    }
}

fn delay_artifact(
    scenario: &Scenario,
    delays: &[u32],
    format: OutputFormat,
) -> Result<String, CliError> {
    let mut summaries: Vec<(u32, ValuationSummary)> = Vec::with_capacity(delays.len());
    let mut curves: Vec<Series> = Vec::with_capacity(delays.len());
    for &delay in delays {
        let mut variant = scenario.clone();
        variant.delay_days = delay;
        variant
            .validate()
            .map_err(|error| CliError::Infeasible(error.to_string()))?;
        summaries.push((delay, variant.summary()));
        if format == OutputFormat::Svg {
            curves.push(Series::new(
                format!("delay {delay}"),
                1,
                variant.ncv_series().cumulative().to_vec(),
            ));
        }
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("delay_days,max_ncv,max_ncv_fiat_at_p0,roi\n");
            for (delay, summary) in &summaries {
                let _ = writeln!(
                    out,
                    "{delay},{},{},{}",
                    csv_f64(summary.peak_ncv),
                    csv_f64(summary.peak_ncv_fiat_at_p0),
                    csv_f64(summary.roi)
                );
            }
            Ok(out)
        }
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = summaries
                .iter()
                .map(|(delay, summary)| {
                    vec![
                        delay.to_string(),
                        fmt_sig(summary.peak_ncv, TABLE_DIGITS),
                        fmt_sig(summary.peak_ncv_fiat_at_p0, TABLE_DIGITS),
                        fmt_sig(summary.roi, TABLE_DIGITS),
                    ]
                })
                .collect();
            Ok(render_table(
                &["delay_days", "max_ncv", "max_ncv_fiat_at_p0", "roi"],
                &rows,
            ))
        }
        OutputFormat::Svg => {
            render_svg(&curves).map_err(|error| CliError::Infeasible(error.to_string()))
        }
    }
}

fn sweep_artifact(
    scenario: &Scenario,
    prices: &[f64],
    format: OutputFormat,
) -> Result<String, CliError> {
    let rig_kw = match scenario.electricity {
        ncv_core::ElectricityCost::PerKwh { rig_kw, .. } => rig_kw,
        ncv_core::ElectricityCost::CoinPerDay(_) => {
            return Err(CliError::Infeasible(
                "sweep-electricity needs a scenario with electricity_kwh_fiat + rig_kw"
                    .to_string(),
            ))
        }
    };
    let mut rows: Vec<(f64, u32, f64)> = Vec::with_capacity(prices.len());
    let mut curves: Vec<Series> = Vec::with_capacity(prices.len());
    for &price in prices {
        let mut variant = scenario.clone();
        variant.electricity = ncv_core::ElectricityCost::PerKwh {
            price_fiat_per_kwh: price,
            rig_kw,
        };
        variant
            .validate()
            .map_err(|error| CliError::Infeasible(error.to_string()))?;
        let (peak_day, peak_ncv) = variant.peak();
        rows.push((price, peak_day, peak_ncv));
        if format == OutputFormat::Svg {
            curves.push(Series::new(
                format!("{price}/kWh"),
                1,
                variant.ncv_series().cumulative().to_vec(),
            ));
        }
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("price,peak_day,peak_ncv\n");
            for (price, peak_day, peak_ncv) in &rows {
                let _ = writeln!(out, "{},{peak_day},{}", csv_f64(*price), csv_f64(*peak_ncv));
            }
            Ok(out)
        }
        OutputFormat::Table => {
            let table_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(price, peak_day, peak_ncv)| {
                    vec![
                        fmt_sig(*price, TABLE_DIGITS),
                        peak_day.to_string(),
                        fmt_sig(*peak_ncv, TABLE_DIGITS),
                    ]
                })
                .collect();
            Ok(render_table(&["price", "peak_day", "peak_ncv"], &table_rows))
        }
        OutputFormat::Svg => {
            render_svg(&curves).map_err(|error| CliError::Infeasible(error.to_string()))
        }
    }
}

fn sensitivity_artifact(
    scenario: &Scenario,
    delta: f64,
    delay_step: Option<u32>,
    format: OutputFormat,
) -> Result<String, CliError> {
    let options = SensitivityOptions {
        delta,
        delay_step_days: delay_step,
    };
    let report = rank_factors(scenario, &options)
        .map_err(|error| CliError::Infeasible(error.to_string()))?;
    match format {
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "baseline_roi          {}", fmt_sig(report.baseline_roi, TABLE_DIGITS));
            let _ = writeln!(
                out,
                "baseline_payback_day  {}",
                optional_day(report.baseline_payback_day)
            );
            let _ = writeln!(out, "delta                 {}", csv_f64(report.delta));
            out.push('\n');
            let rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .enumerate()
                .map(|(rank, entry)| {
                    vec![
                        (rank + 1).to_string(),
                        entry.factor.to_string(),
                        entry
                            .roi_elasticity
                            .map_or_else(|| "-".to_string(), |v| fmt_sig(v, TABLE_DIGITS)),
                        entry
                            .perturbed_roi
                            .map_or_else(|| "-".to_string(), |v| fmt_sig(v, TABLE_DIGITS)),
                        entry
                            .payback_elasticity
                            .map_or_else(|| "-".to_string(), |v| fmt_sig(v, TABLE_DIGITS)),
                        entry.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            out.push_str(&render_table(
                &[
                    "rank",
                    "factor",
                    "roi_elasticity",
                    "perturbed_roi",
                    "payback_elasticity",
                    "note",
                ],
                &rows,
            ));
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut out =
                String::from("rank,factor,roi_elasticity,perturbed_roi,payback_elasticity\n");
            for (rank, entry) in report.entries.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    rank + 1,
                    entry.factor,
                    entry.roi_elasticity.map_or_else(String::new, csv_f64),
                    entry.perturbed_roi.map_or_else(String::new, csv_f64),
                    entry.payback_elasticity.map_or_else(String::new, csv_f64),
                );
            }
            Ok(out)
        }
        OutputFormat::Svg => Err(CliError::Usage(
            "sensitivity reports have no chart form; use --format table or csv".to_string(),
        )),
    }
}

fn frontier_artifact(scenario: &Scenario, format: OutputFormat) -> Result<String, CliError> {
    let frontier = scenario.frontier_card_price();
    let eol = scenario.eol_cause();
    match format {
        OutputFormat::Table => {
            let mut rows = vec![
                vec![
                    "frontier_card_price".to_string(),
                    fmt_sig(frontier, TABLE_DIGITS),
                ],
                vec!["card_lifetime_days".to_string(), scenario.card_lifetime_days.to_string()],
                vec!["eol".to_string(), eol.to_string()],
            ];
            if let Ok(marginal) = scenario.marginal_card_cost() {
                rows.push(vec![
                    "marginal_card_cost".to_string(),
                    fmt_sig(marginal, TABLE_DIGITS),
                ]);
            }
            Ok(render_table(&["metric", "value"], &rows))
        }
        OutputFormat::Csv => {
            let cause = match eol {
                ncv_core::EolCause::Obsolescence { .. } => "obsolescence",
                ncv_core::EolCause::Electricity { .. } => "electricity",
            };
            Ok(format!(
                "frontier_card_price,eol_cause,eol_day\n{},{cause},{}\n",
                csv_f64(frontier),
                eol.day()
            ))
        }
        OutputFormat::Svg => Err(CliError::Usage(
            "frontier reports have no chart form; use --format table or csv".to_string(),
        )),
    }
}
