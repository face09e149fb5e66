//! Network hashing-capacity growth laws.
//!
//! A rig's share of the block reward shrinks as the rest of the network adds
//! capacity. Each model here turns a growth law into a per-day decay factor
//! that multiplies the rig's day-0 production.

use thiserror::Error;

/// Default capacity-doubling period for the Moore's-law model, in days
/// (18 months, the typical effective lifetime of a mining card).
pub const DEFAULT_MOORE_DOUBLING_DAYS: f64 = 540.0;

/// A law for how total network hashing capacity grows over time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthModel {
    /// Compound growth at a fixed daily rate: capacity scales as `(1 + rate)^day`.
    Exponential {
        /// Daily growth rate, dimensionless, must be > -1.
        rate: f64,
    },
    /// Capacity grows by a fixed fraction of the day-0 capacity each day.
    Linear {
        /// Daily growth fraction relative to day-0 capacity, must be >= 0.
        rate: f64,
    },
    /// Capacity doubles every `doubling_days` days.
    MooreLaw {
        /// Days per capacity doubling, must be > 0.
        doubling_days: f64,
    },
    /// Static network; production never decays.
    Flat,
}

/// Invalid growth-model parameter.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GrowthModelError {
    #[error("exponential daily growth rate must be > -1 and finite, got {0}")]
    RateTooNegative(f64),
    #[error("linear daily growth fraction must be >= 0 and finite, got {0}")]
    NegativeLinearRate(f64),
    #[error("doubling period must be positive and finite, got {0}")]
    NonPositiveDoubling(f64),
}

impl GrowthModel {
    /// Checks the parameter domain of the model.
    pub fn validate(&self) -> Result<(), GrowthModelError> {
        match *self {
            GrowthModel::Exponential { rate } => {
                if !(rate > -1.0) || !rate.is_finite() {
                    return Err(GrowthModelError::RateTooNegative(rate));
                }
            }
            GrowthModel::Linear { rate } => {
                if !(rate >= 0.0) || !rate.is_finite() {
                    return Err(GrowthModelError::NegativeLinearRate(rate));
                }
            }
            GrowthModel::MooreLaw { doubling_days } => {
                if !(doubling_days > 0.0) || !doubling_days.is_finite() {
                    return Err(GrowthModelError::NonPositiveDoubling(doubling_days));
                }
            }
            GrowthModel::Flat => {}
        }
        Ok(())
    }

    /// Fraction of day-0 production a rig still earns on `day`.
    ///
    /// Always 1 on day 0; monotonically non-increasing in `day` for
    /// non-negative growth rates.
    pub fn decay_factor(&self, day: u32) -> f64 {
        match *self {
            GrowthModel::Exponential { rate } => {
                assert!(day <= i32::MAX as u32, "day index {day} out of range");
                1.0 / (1.0 + rate).powi(day as i32)
            }
            GrowthModel::Linear { rate } => 1.0 / (1.0 + rate * f64::from(day)),
            GrowthModel::MooreLaw { doubling_days } => (-f64::from(day) / doubling_days).exp2(),
            GrowthModel::Flat => 1.0,
        }
    }
}

/// Observed network hashrate samples, ordered by day.
#[derive(Debug, Clone, PartialEq)]
pub struct HashrateHistory {
    samples: Vec<(u32, f64)>,
}

/// Invalid hashrate history.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HistoryError {
    #[error("need at least two hashrate samples, got {0}")]
    TooFewSamples(usize),
    #[error("day indices must be strictly increasing (sample {index})")]
    NonIncreasingDays { index: usize },
    #[error("hashrate must be positive (sample {index}, value {value})")]
    NonPositiveHashrate { index: usize, value: f64 },
}

impl HashrateHistory {
    /// Builds a history from `(day, hashes per second)` samples.
    pub fn new(samples: Vec<(u32, f64)>) -> Result<Self, HistoryError> {
        if samples.len() < 2 {
            return Err(HistoryError::TooFewSamples(samples.len()));
        }
        for (index, &(day, rate)) in samples.iter().enumerate() {
            if !(rate > 0.0) || !rate.is_finite() {
                return Err(HistoryError::NonPositiveHashrate { index, value: rate });
            }
            if index > 0 && day <= samples[index - 1].0 {
                return Err(HistoryError::NonIncreasingDays { index });
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(u32, f64)] {
        &self.samples
    }
}

/// How to fit a straight line to a hashrate history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// Ordinary least squares over all samples. Robust to noise; the default.
    LeastSquares,
    /// Straight line through the first and last samples only.
    Endpoints,
}

/// Result of fitting a linear growth model to observed hashrate.
///
/// The fitted daily fraction is normalized by the capacity at the most
/// recent sample, so that "day 0" of a scenario means today.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// The fitted model, always a [`GrowthModel::Linear`].
    pub model: GrowthModel,
    /// Fitted slope in hashes per second per day.
    pub slope: f64,
    /// Fitted intercept in hashes per second.
    pub intercept: f64,
    /// True when the fitted slope was negative and the growth fraction was
    /// clamped to zero (the model does not represent a shrinking network).
    pub clamped_negative_slope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FitError {
    #[error("degenerate hashrate history: fitted capacity at the last sample is not positive")]
    DegenerateHistory,
}

/// Least-squares fit of a [`GrowthModel::Linear`] to a hashrate history.
pub fn fit_linear(history: &HashrateHistory) -> Result<LinearFit, FitError> {
    fit_linear_with(history, FitMethod::LeastSquares)
}

/// Like [`fit_linear`] but with an explicit fitting method.
pub fn fit_linear_with(history: &HashrateHistory, method: FitMethod) -> Result<LinearFit, FitError> {
    let samples = history.samples();
    let (slope, intercept, capacity_last) = match method {
        FitMethod::LeastSquares => {
            let n = samples.len() as f64;
            let mean_day = samples.iter().map(|&(d, _)| f64::from(d)).sum::<f64>() / n;
            let mean_rate = samples.iter().map(|&(_, h)| h).sum::<f64>() / n;
            let mut covariance = 0.0;
            let mut variance = 0.0;
            for &(day, rate) in samples {
                let dt = f64::from(day) - mean_day;
                covariance += dt * (rate - mean_rate);
                variance += dt * dt;
            }
            if variance == 0.0 {
                return Err(FitError::DegenerateHistory);
            }
            let slope = covariance / variance;
            let intercept = mean_rate - slope * mean_day;
            let last_day = f64::from(samples[samples.len() - 1].0);
            (slope, intercept, intercept + slope * last_day)
        }
        FitMethod::Endpoints => {
            let (first_day, first_rate) = samples[0];
            let (last_day, last_rate) = samples[samples.len() - 1];
            let slope = (last_rate - first_rate) / f64::from(last_day - first_day);
            let intercept = first_rate - slope * f64::from(first_day);
            // The endpoint line passes through the last sample exactly.
            (slope, intercept, last_rate)
        }
    };
    if !(capacity_last > 0.0) {
        return Err(FitError::DegenerateHistory);
    }
    let raw_fraction = slope / capacity_last;
    let clamped = raw_fraction < 0.0;
    let rate = if clamped { 0.0 } else { raw_fraction };
    Ok(LinearFit {
        model: GrowthModel::Linear { rate },
        slope,
        intercept,
        clamped_negative_slope: clamped,
    })
}
