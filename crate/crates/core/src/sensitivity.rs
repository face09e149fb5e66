//! One-at-a-time elasticity of profitability with respect to the main
//! scenario factors, and a ranking of the factors by impact.
//!
//! Elasticity is the relative change in ROI divided by the relative change
//! in the input: a central difference where both directions keep the
//! scenario valid, a one-sided difference otherwise. A payback-day
//! elasticity is computed alongside, since "sensitivity of profitability"
//! admits either reading.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::growth::GrowthModel;
use crate::valuation::Scenario;

/// The scenario factors ranked by the analysis, in their printed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    DeliveryDelay,
    RigCost,
    GrowthRate,
    ElectricityPrice,
}

impl Factor {
    pub const ALL: [Factor; 4] = [
        Factor::DeliveryDelay,
        Factor::RigCost,
        Factor::GrowthRate,
        Factor::ElectricityPrice,
    ];

    /// Tie-break order for equal elasticities.
    fn printed_rank(self) -> usize {
        match self {
            Factor::DeliveryDelay => 0,
            Factor::RigCost => 1,
            Factor::GrowthRate => 2,
            Factor::ElectricityPrice => 3,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Factor::DeliveryDelay => "delivery-delay",
            Factor::RigCost => "rig-cost",
            Factor::GrowthRate => "growth-rate",
            Factor::ElectricityPrice => "electricity-price",
        };
        f.write_str(name)
    }
}

/// Perturbation settings for the analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityOptions {
    /// Relative perturbation in (0, 1) applied to each factor.
    pub delta: f64,
    /// Absolute step in days for the delivery-delay factor. Defaults to
    /// `delta` of the card lifetime when the baseline delay is zero, or
    /// `delta` of the baseline delay otherwise.
    pub delay_step_days: Option<u32>,
}

impl Default for SensitivityOptions {
    fn default() -> Self {
        SensitivityOptions {
            delta: 0.10,
            delay_step_days: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensitivityError {
    #[error("baseline ROI is zero; elasticities are undefined")]
    ZeroBaselineRoi,
    #[error("delta must be in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("no feasible perturbation for {factor}: {reason}")]
    InfeasiblePerturbation { factor: Factor, reason: String },
}

/// Elasticities of one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSensitivity {
    pub factor: Factor,
    /// ROI elasticity, non-negative; `None` when the factor could not be
    /// perturbed (see `note`).
    pub roi_elasticity: Option<f64>,
    /// ROI after the upward perturbation, when one was feasible.
    pub perturbed_roi: Option<f64>,
    /// Payback-day elasticity; `None` when payback is absent on either side
    /// of the difference.
    pub payback_elasticity: Option<f64>,
    /// Diagnostics: one-sided differences, zero inputs, infeasibilities.
    pub note: Option<String>,
}

/// Elasticities for all factors, sorted by ROI elasticity descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub baseline_roi: f64,
    pub baseline_payback_day: Option<u32>,
    pub delta: f64,
    /// One entry per factor; the order is the ranking.
    pub entries: Vec<FactorSensitivity>,
}

impl SensitivityReport {
    /// The factors in ranked order.
    pub fn ranking(&self) -> Vec<Factor> {
        self.entries.iter().map(|e| e.factor).collect()
    }
}

struct Baseline {
    roi: f64,
    payback: Option<u32>,
}

fn baseline_figures(scenario: &Scenario) -> Baseline {
    let summary = scenario.summary();
    Baseline {
        roi: summary.roi,
        payback: summary.payback_day,
    }
}

/// ROI elasticity of one factor. See the module docs for the difference
/// scheme; the result is always non-negative.
pub fn elasticity(
    scenario: &Scenario,
    factor: Factor,
    delta: f64,
) -> Result<f64, SensitivityError> {
    let options = SensitivityOptions {
        delta,
        delay_step_days: None,
    };
    let baseline = checked_baseline(scenario, delta)?;
    let outcome = evaluate_factor(scenario, &baseline, factor, &options)?;
    Ok(outcome.roi_elasticity)
}

/// Evaluates every factor at the same settings and ranks them by ROI
/// elasticity, ties broken by the printed factor order. A factor whose
/// perturbation is infeasible is ranked last with a diagnostic note.
pub fn rank_factors(
    scenario: &Scenario,
    options: &SensitivityOptions,
) -> Result<SensitivityReport, SensitivityError> {
    let baseline = checked_baseline(scenario, options.delta)?;
    let mut entries: Vec<FactorSensitivity> = Factor::ALL
        .iter()
        .map(|&factor| match evaluate_factor(scenario, &baseline, factor, options) {
            Ok(outcome) => FactorSensitivity {
                factor,
                roi_elasticity: Some(outcome.roi_elasticity),
                perturbed_roi: outcome.perturbed_roi,
                payback_elasticity: outcome.payback_elasticity,
                note: outcome.note,
            },
            Err(error) => FactorSensitivity {
                factor,
                roi_elasticity: None,
                perturbed_roi: None,
                payback_elasticity: None,
                note: Some(error.to_string()),
            },
        })
        .collect();
    entries.sort_by(|a, b| match (a.roi_elasticity, b.roi_elasticity) {
        (Some(x), Some(y)) => y
            .partial_cmp(&x)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.factor.printed_rank().cmp(&b.factor.printed_rank())),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.factor.printed_rank().cmp(&b.factor.printed_rank()),
    });
    Ok(SensitivityReport {
        baseline_roi: baseline.roi,
        baseline_payback_day: baseline.payback,
        delta: options.delta,
        entries,
    })
}

fn checked_baseline(scenario: &Scenario, delta: f64) -> Result<Baseline, SensitivityError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SensitivityError::InvalidDelta(delta));
    }
    let baseline = baseline_figures(scenario);
    if baseline.roi == 0.0 {
        return Err(SensitivityError::ZeroBaselineRoi);
    }
    Ok(baseline)
}

struct Outcome {
    roi_elasticity: f64,
    perturbed_roi: Option<f64>,
    payback_elasticity: Option<f64>,
    note: Option<String>,
}

fn evaluate_factor(
    scenario: &Scenario,
    baseline: &Baseline,
    factor: Factor,
    options: &SensitivityOptions,
) -> Result<Outcome, SensitivityError> {
    match factor {
        Factor::DeliveryDelay => evaluate_delay(scenario, baseline, options),
        Factor::RigCost => evaluate_multiplicative(scenario, baseline, factor, options.delta, |s, f| {
            let mut out = s.clone();
            out.rig_cost_fiat = s.rig_cost_fiat * f;
            Some(out)
        }),
        Factor::GrowthRate => {
            if growth_rate_is_zero(&scenario.growth) {
                return Ok(zero_input_outcome(baseline, "growth rate is zero; the input cannot move"));
            }
            evaluate_multiplicative(scenario, baseline, factor, options.delta, |s, f| {
                scale_growth(&s.growth, f).map(|growth| {
                    let mut out = s.clone();
                    out.growth = growth;
                    out
                })
            })
        }
        Factor::ElectricityPrice => {
            if scenario.electricity_coin_per_day() == 0.0 {
                return Ok(zero_input_outcome(
                    baseline,
                    "electricity cost is zero; the input cannot move",
                ));
            }
            evaluate_multiplicative(scenario, baseline, factor, options.delta, |s, f| {
                let mut out = s.clone();
                out.electricity = s.electricity.scaled(f);
                Some(out)
            })
        }
    }
}

fn zero_input_outcome(baseline: &Baseline, reason: &str) -> Outcome {
    Outcome {
        roi_elasticity: 0.0,
        perturbed_roi: Some(baseline.roi),
        payback_elasticity: baseline.payback.map(|_| 0.0),
        note: Some(reason.to_string()),
    }
}

fn growth_rate_is_zero(model: &GrowthModel) -> bool {
    match *model {
        GrowthModel::Exponential { rate } | GrowthModel::Linear { rate } => rate == 0.0,
        GrowthModel::MooreLaw { .. } => false,
        GrowthModel::Flat => true,
    }
}

/// Scales the model's implied daily growth rate by `factor`. For the
/// doubling-period model the implied rate is ln(2)/T, so the period scales
/// inversely. `None` when there is no rate to scale.
fn scale_growth(model: &GrowthModel, factor: f64) -> Option<GrowthModel> {
    match *model {
        GrowthModel::Exponential { rate } => Some(GrowthModel::Exponential { rate: rate * factor }),
        GrowthModel::Linear { rate } => Some(GrowthModel::Linear { rate: rate * factor }),
        GrowthModel::MooreLaw { doubling_days } => Some(GrowthModel::MooreLaw {
            doubling_days: doubling_days / factor,
        }),
        GrowthModel::Flat => None,
    }
}

fn evaluate_multiplicative(
    scenario: &Scenario,
    baseline: &Baseline,
    factor: Factor,
    delta: f64,
    apply: impl Fn(&Scenario, f64) -> Option<Scenario>,
) -> Result<Outcome, SensitivityError> {
    let up = apply(scenario, 1.0 + delta).filter(|s| s.validate().is_ok());
    let down = apply(scenario, 1.0 - delta).filter(|s| s.validate().is_ok());
    difference(scenario, baseline, factor, up, down, delta, delta, None)
}

fn evaluate_delay(
    scenario: &Scenario,
    baseline: &Baseline,
    options: &SensitivityOptions,
) -> Result<Outcome, SensitivityError> {
    let delay = scenario.delay_days;
    let default_step = |reference: u32| -> u32 {
        ((options.delta * f64::from(reference)).round() as u32).max(1)
    };
    // The relative step is measured against the baseline delay, or against
    // the card lifetime when starting from zero (there is nothing else to
    // normalize an absolute delay by).
    let (step, reference, zero_note) = if delay > 0 {
        let step = options.delay_step_days.unwrap_or_else(|| default_step(delay));
        (step, delay, None)
    } else {
        let step = options
            .delay_step_days
            .unwrap_or_else(|| default_step(scenario.card_lifetime_days));
        (
            step,
            scenario.card_lifetime_days,
            Some("delay step normalized by the card lifetime (zero-delay baseline)".to_string()),
        )
    };
    if step == 0 {
        return Err(SensitivityError::InfeasiblePerturbation {
            factor: Factor::DeliveryDelay,
            reason: "delay step rounds to zero days".to_string(),
        });
    }
    let rel_step = f64::from(step) / f64::from(reference);
    let up = delay.checked_add(step).map(|d| {
        let mut out = scenario.clone();
        out.delay_days = d;
        out
    });
    let up = up.filter(|s| s.validate().is_ok());
    let down = (delay >= step).then(|| {
        let mut out = scenario.clone();
        out.delay_days = delay - step;
        out
    });
    difference(
        scenario,
        baseline,
        Factor::DeliveryDelay,
        up,
        down,
        rel_step,
        rel_step,
        zero_note,
    )
}

#[allow(clippy::too_many_arguments)]
fn difference(
    _scenario: &Scenario,
    baseline: &Baseline,
    factor: Factor,
    up: Option<Scenario>,
    down: Option<Scenario>,
    rel_step_up: f64,
    rel_step_down: f64,
    extra_note: Option<String>,
) -> Result<Outcome, SensitivityError> {
    let up_figures = up.as_ref().map(baseline_figures);
    let down_figures = down.as_ref().map(baseline_figures);
    let (roi_elasticity, payback_elasticity, scheme_note) = match (&up_figures, &down_figures) {
        (Some(hi), Some(lo)) => {
            let span = rel_step_up + rel_step_down;
            let roi = ((hi.roi - lo.roi) / baseline.roi / span).abs();
            let payback = payback_difference(baseline, hi.payback, lo.payback, span);
            (roi, payback, None)
        }
        (Some(hi), None) => {
            let roi = ((hi.roi - baseline.roi) / baseline.roi / rel_step_up).abs();
            let payback = payback_difference(baseline, hi.payback, baseline.payback, rel_step_up);
            (roi, payback, Some("forward difference (downward step infeasible)"))
        }
        (None, Some(lo)) => {
            let roi = ((baseline.roi - lo.roi) / baseline.roi / rel_step_down).abs();
            let payback = payback_difference(baseline, baseline.payback, lo.payback, rel_step_down);
            (roi, payback, Some("backward difference (upward step infeasible)"))
        }
        (None, None) => {
            return Err(SensitivityError::InfeasiblePerturbation {
                factor,
                reason: "neither perturbation direction keeps the scenario valid".to_string(),
            })
        }
    };
    let note = match (extra_note, scheme_note) {
        (Some(a), Some(b)) => Some(format!("{a}; {b}")),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b.to_string()),
        (None, None) => None,
    };
    Ok(Outcome {
        roi_elasticity,
        perturbed_roi: up_figures.as_ref().map(|f| f.roi),
        payback_elasticity,
        note,
    })
}

fn payback_difference(
    baseline: &Baseline,
    hi: Option<u32>,
    lo: Option<u32>,
    span: f64,
) -> Option<f64> {
    let base = baseline.payback? as f64;
    let hi = hi? as f64;
    let lo = lo? as f64;
    Some(((hi - lo) / base / span).abs())
}
