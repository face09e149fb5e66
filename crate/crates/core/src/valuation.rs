//! Net-coin-value (NCV) valuation of a mining investment.
//!
//! All coin-denominated figures are valued at the coin price on the day the
//! equipment is paid for. Day 0 is the purchase day and produces nothing;
//! daily flows run from day 1 to the scenario horizon. The daily net coin
//! flow is the fee-adjusted production under network growth minus the
//! electricity burden:
//!
//! ```text
//! C_i = (1 - k) * m0 * decay(i) - cool * e
//! ```
//!
//! where `e` is the daily electricity bill in coin at the purchase-day price
//! and `cool = 1 + 1/CoP` when a cooling load is modelled. NCV(i) is the
//! running sum of the flows; its peak marks the economic end of life of the
//! equipment.

use thiserror::Error;

use crate::growth::GrowthModel;

/// Default fungible lifetime of a mining card, in days (18 months).
pub const DEFAULT_CARD_LIFETIME_DAYS: u32 = 540;

/// Daily electricity cost, in one of the accepted input forms.
///
/// The form is preserved rather than collapsed to a single number so that
/// scenario files round-trip exactly and coin-denominated inputs stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElectricityCost {
    /// A per-kWh tariff together with the rig's power draw.
    PerKwh {
        /// Tariff in fiat per kWh.
        price_fiat_per_kwh: f64,
        /// Rig draw in kW.
        rig_kw: f64,
    },
    /// Direct daily cost in coin at the purchase-day price.
    CoinPerDay(f64),
}

impl ElectricityCost {
    /// Free electricity.
    pub const FREE: ElectricityCost = ElectricityCost::CoinPerDay(0.0);

    /// Gross daily electricity bill in fiat.
    pub fn fiat_per_day(&self, coin_price_fiat: f64) -> f64 {
        match *self {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            } => price_fiat_per_kwh * rig_kw * 24.0,
            ElectricityCost::CoinPerDay(coin) => coin * coin_price_fiat,
        }
    }

    /// Daily electricity bill in coin at the purchase-day price.
    pub fn coin_per_day(&self, coin_price_fiat: f64) -> f64 {
        match *self {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            } => price_fiat_per_kwh * rig_kw * 24.0 / coin_price_fiat,
            ElectricityCost::CoinPerDay(coin) => coin,
        }
    }

    /// Scales the cost level by `factor` (tariff or coin amount; never the
    /// power draw).
    pub fn scaled(&self, factor: f64) -> ElectricityCost {
        match *self {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            } => ElectricityCost::PerKwh {
                price_fiat_per_kwh: price_fiat_per_kwh * factor,
                rig_kw,
            },
            ElectricityCost::CoinPerDay(coin) => ElectricityCost::CoinPerDay(coin * factor),
        }
    }
}

/// All economic parameters of one mining investment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Combined fee fraction k (pool + mining software + hosting/admin), in [0, 1).
    pub fee_fraction: f64,
    /// Rig production on day 0, in coin per day, before fees and decay.
    pub coin_per_day: f64,
    /// Network capacity growth law driving production decay.
    pub growth: GrowthModel,
    /// Daily electricity cost.
    pub electricity: ElectricityCost,
    /// Coin price in fiat on the equipment purchase day.
    pub coin_price_fiat: f64,
    /// Full capital cost of the equipment, in fiat.
    pub rig_cost_fiat: f64,
    /// Coefficient of performance of the cooling plant; `None` = no cooling load.
    pub cooling_cop: Option<f64>,
    /// Days between payment and the first mined coin.
    pub delay_days: u32,
    /// Last day of the evaluation window, >= 1.
    pub horizon_days: u32,
    /// Price of the mining cards alone, in fiat, when card economics are modelled.
    pub card_cost_fiat: Option<f64>,
    /// Fungible lifetime of the cards, in days.
    pub card_lifetime_days: u32,
}

/// Invalid scenario parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("fee fraction must satisfy 0 <= k < 1, got {0}")]
    FeeOutOfRange(f64),
    #[error("day-0 production must be positive and finite, got {0}")]
    NonPositiveProduction(f64),
    #[error(transparent)]
    Growth(#[from] crate::growth::GrowthModelError),
    #[error("electricity cost must be non-negative and finite")]
    NegativeElectricity,
    #[error("coin price must be positive and finite, got {0}")]
    NonPositivePrice(f64),
    #[error("rig cost must be positive and finite, got {0}")]
    NonPositiveRigCost(f64),
    #[error("cooling CoP must be positive and finite, got {0}")]
    NonPositiveCop(f64),
    #[error("delivery delay ({delay} days) must be shorter than the horizon ({horizon} days)")]
    DelayBeyondHorizon { delay: u32, horizon: u32 },
    #[error("horizon must be at least one day")]
    ZeroHorizon,
    #[error("horizon must be at most {} days", i32::MAX)]
    HorizonTooLarge(u32),
    #[error("card cost must be positive and finite, got {0}")]
    NonPositiveCardCost(f64),
    #[error("card lifetime must be at least one day")]
    ZeroCardLifetime,
}

/// Requested day outside the scenario's evaluation window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("day {day} is outside the evaluation window 1..={horizon}")]
pub struct DayOutOfRange {
    pub day: u32,
    pub horizon: u32,
}

/// Card economics requested on a scenario without card parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("scenario has no card cost; set card_cost_fiat to model card economics")]
pub struct MissingCardParameters;

/// Why the equipment reaches end of life.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EolCause {
    /// Network growth dilutes the card's output past its fungible lifetime.
    Obsolescence { day: u32 },
    /// Electricity overruns production before the lifetime is up; the
    /// effective lifetime shortens to `day`.
    Electricity { day: u32 },
}

impl EolCause {
    pub fn day(&self) -> u32 {
        match *self {
            EolCause::Obsolescence { day } | EolCause::Electricity { day } => day,
        }
    }
}

impl std::fmt::Display for EolCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            EolCause::Obsolescence { day } => write!(f, "obsolescence on day {day}"),
            EolCause::Electricity { day } => write!(f, "electricity overrun on day {day}"),
        }
    }
}

/// Per-day net coin flows and their running sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinFlowSeries {
    start_day: u32,
    flows: Vec<f64>,
    cumulative: Vec<f64>,
}

impl CoinFlowSeries {
    /// Builds a series from daily flows starting at `start_day`; the
    /// cumulative track is the running sum of the flows.
    pub fn from_flows(start_day: u32, flows: Vec<f64>) -> CoinFlowSeries {
        assert!(start_day >= 1, "series must start on day 1 or later");
        assert!(!flows.is_empty(), "series must cover at least one day");
        let mut cumulative = Vec::with_capacity(flows.len());
        let mut running = 0.0f64;
        for &flow in &flows {
            running += flow;
            cumulative.push(running);
        }
        CoinFlowSeries {
            start_day,
            flows,
            cumulative,
        }
    }

    pub fn start_day(&self) -> u32 {
        self.start_day
    }

    pub fn last_day(&self) -> u32 {
        self.start_day + (self.flows.len() as u32 - 1)
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    pub fn flows(&self) -> &[f64] {
        &self.flows
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Flow on an absolute day, if the day is covered.
    pub fn flow_on(&self, day: u32) -> Option<f64> {
        self.index_of(day).map(|i| self.flows[i])
    }

    /// Cumulative NCV through an absolute day; 0 before the series starts.
    pub fn ncv_through(&self, day: u32) -> f64 {
        if day < self.start_day {
            0.0
        } else {
            let i = ((day - self.start_day) as usize).min(self.flows.len() - 1);
            self.cumulative[i]
        }
    }

    pub fn final_ncv(&self) -> f64 {
        *self.cumulative.last().expect("non-empty series")
    }

    /// Day and value of the cumulative maximum. Ties break toward the
    /// earliest day. A series that never goes positive peaks at day 0 with
    /// value 0: the investment is never worth switching on.
    pub fn peak(&self) -> (u32, f64) {
        let mut best_day = 0u32;
        let mut best = 0.0f64;
        for (i, &ncv) in self.cumulative.iter().enumerate() {
            if ncv > best {
                best = ncv;
                best_day = self.start_day + i as u32;
            }
        }
        (best_day, best)
    }

    /// First day whose cumulative value strictly exceeds `threshold`.
    pub fn first_day_above(&self, threshold: f64) -> Option<u32> {
        self.cumulative
            .iter()
            .position(|&ncv| ncv > threshold)
            .map(|i| self.start_day + i as u32)
    }

    /// Iterates `(day, flow, cumulative)` triples.
    pub fn iter_days(&self) -> impl Iterator<Item = (u32, f64, f64)> + '_ {
        self.flows
            .iter()
            .zip(&self.cumulative)
            .enumerate()
            .map(move |(i, (&flow, &ncv))| (self.start_day + i as u32, flow, ncv))
    }

    fn index_of(&self, day: u32) -> Option<usize> {
        if day < self.start_day {
            return None;
        }
        let i = (day - self.start_day) as usize;
        (i < self.flows.len()).then_some(i)
    }
}

/// Headline valuation figures for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationSummary {
    /// Day of the cumulative maximum (0 when the series never goes positive).
    pub peak_day: u32,
    /// Maximum NCV, in coin.
    pub peak_ncv: f64,
    /// First day NCV exceeds the rig cost in coin, if any.
    pub payback_day: Option<u32>,
    /// First day NCV exceeds twice the rig cost in coin, if any.
    pub doubling_day: Option<u32>,
    /// Coins the same capital would have bought outright.
    pub hodl_coins: f64,
    /// Peak NCV over the HODL baseline; above 1 means mining beats holding.
    pub roi: f64,
    /// Why the equipment reaches end of life.
    pub eol: EolCause,
    /// Peak NCV valued at the purchase-day coin price, in fiat.
    pub peak_ncv_fiat_at_p0: f64,
}

/// A fiat price trajectory for the mined coin, plus a daily discount rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FiatPricePath {
    pub path: PricePath,
    /// Daily discount rate applied to fiat cash flows, >= 0.
    pub discount_rate_daily: f64,
}

/// Shape of the price trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum PricePath {
    Constant(f64),
    /// `(day, price)` knots with strictly increasing days; linear between
    /// knots, constant extension outside them.
    PiecewiseLinear(Vec<(u32, f64)>),
}

/// Invalid price path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricePathError {
    #[error("prices must be positive and finite, got {0}")]
    NonPositivePrice(f64),
    #[error("piecewise path needs at least one knot")]
    Empty,
    #[error("knot days must be strictly increasing (knot {0})")]
    NonIncreasingKnots(usize),
    #[error("discount rate must be non-negative and finite, got {0}")]
    NegativeDiscount(f64),
}

impl FiatPricePath {
    pub fn constant(price: f64) -> FiatPricePath {
        FiatPricePath {
            path: PricePath::Constant(price),
            discount_rate_daily: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), PricePathError> {
        if !(self.discount_rate_daily >= 0.0) || !self.discount_rate_daily.is_finite() {
            return Err(PricePathError::NegativeDiscount(self.discount_rate_daily));
        }
        match &self.path {
            PricePath::Constant(price) => {
                if !(*price > 0.0) || !price.is_finite() {
                    return Err(PricePathError::NonPositivePrice(*price));
                }
            }
            PricePath::PiecewiseLinear(knots) => {
                if knots.is_empty() {
                    return Err(PricePathError::Empty);
                }
                for (i, &(day, price)) in knots.iter().enumerate() {
                    if !(price > 0.0) || !price.is_finite() {
                        return Err(PricePathError::NonPositivePrice(price));
                    }
                    if i > 0 && day <= knots[i - 1].0 {
                        return Err(PricePathError::NonIncreasingKnots(i));
                    }
                }
            }
        }
        Ok(())
    }

    /// Coin price on `day`.
    pub fn price_on(&self, day: u32) -> f64 {
        match &self.path {
            PricePath::Constant(price) => *price,
            PricePath::PiecewiseLinear(knots) => {
                let first = knots[0];
                let last = knots[knots.len() - 1];
                if day <= first.0 {
                    return first.1;
                }
                if day >= last.0 {
                    return last.1;
                }
                let segment = knots.windows(2).find(|w| day >= w[0].0 && day <= w[1].0);
                let [(d0, p0), (d1, p1)] = segment.expect("day bracketed by knots") else {
                    unreachable!()
                };
                let t = f64::from(day - d0) / f64::from(d1 - d0);
                p0 + (p1 - p0) * t
            }
        }
    }
}

/// Mining cash flows in discounted fiat next to the HODL alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiatValuation {
    /// Sum of daily flows valued at the path price, discounted daily.
    pub mining_npv_fiat: f64,
    /// Fiat value at the horizon of simply holding the coins the capital
    /// would have bought.
    pub hodl_fiat: f64,
}

impl Scenario {
    /// Checks every scenario invariant.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.fee_fraction >= 0.0 && self.fee_fraction < 1.0) {
            return Err(ScenarioError::FeeOutOfRange(self.fee_fraction));
        }
        if !(self.coin_per_day > 0.0) || !self.coin_per_day.is_finite() {
            return Err(ScenarioError::NonPositiveProduction(self.coin_per_day));
        }
        self.growth.validate()?;
        let electricity_ok = match self.electricity {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            } => price_fiat_per_kwh >= 0.0 && price_fiat_per_kwh.is_finite() && rig_kw >= 0.0 && rig_kw.is_finite(),
            ElectricityCost::CoinPerDay(coin) => coin >= 0.0 && coin.is_finite(),
        };
        if !electricity_ok {
            return Err(ScenarioError::NegativeElectricity);
        }
        if !(self.coin_price_fiat > 0.0) || !self.coin_price_fiat.is_finite() {
            return Err(ScenarioError::NonPositivePrice(self.coin_price_fiat));
        }
        if !(self.rig_cost_fiat > 0.0) || !self.rig_cost_fiat.is_finite() {
            return Err(ScenarioError::NonPositiveRigCost(self.rig_cost_fiat));
        }
        if let Some(cop) = self.cooling_cop {
            if !(cop > 0.0) || !cop.is_finite() {
                return Err(ScenarioError::NonPositiveCop(cop));
            }
        }
        if self.horizon_days == 0 {
            return Err(ScenarioError::ZeroHorizon);
        }
        if self.horizon_days > i32::MAX as u32 {
            return Err(ScenarioError::HorizonTooLarge(self.horizon_days));
        }
        if self.delay_days >= self.horizon_days {
            return Err(ScenarioError::DelayBeyondHorizon {
                delay: self.delay_days,
                horizon: self.horizon_days,
            });
        }
        if let Some(card_cost) = self.card_cost_fiat {
            if !(card_cost > 0.0) || !card_cost.is_finite() {
                return Err(ScenarioError::NonPositiveCardCost(card_cost));
            }
        }
        if self.card_lifetime_days == 0 {
            return Err(ScenarioError::ZeroCardLifetime);
        }
        Ok(())
    }

    /// Daily electricity bill in coin at the purchase-day price.
    pub fn electricity_coin_per_day(&self) -> f64 {
        self.electricity.coin_per_day(self.coin_price_fiat)
    }

    /// Gross daily electricity bill in fiat.
    pub fn electricity_fiat_per_day(&self) -> f64 {
        self.electricity.fiat_per_day(self.coin_price_fiat)
    }

    /// Electricity multiplier for the cooling load: `1 + 1/CoP`, or 1 when no
    /// cooling is modelled.
    pub fn cooling_multiplier(&self) -> f64 {
        match self.cooling_cop {
            Some(cop) => 1.0 + 1.0 / cop,
            None => 1.0,
        }
    }

    /// Net coin mined on `day`: zero through the delivery delay (no
    /// production, no electricity, but the network keeps growing), then
    /// fee-adjusted decayed production minus the electricity burden.
    pub fn daily_coin_flow(&self, day: u32) -> Result<f64, DayOutOfRange> {
        if day < 1 || day > self.horizon_days {
            return Err(DayOutOfRange {
                day,
                horizon: self.horizon_days,
            });
        }
        Ok(self.flow_unchecked(day, self.electricity_coin_per_day(), self.cooling_multiplier()))
    }

    fn flow_unchecked(&self, day: u32, electricity_coin: f64, cooling: f64) -> f64 {
        if day <= self.delay_days {
            0.0
        } else {
            (1.0 - self.fee_fraction) * self.coin_per_day * self.growth.decay_factor(day)
                - cooling * electricity_coin
        }
    }

    /// Daily flows for days 1..=horizon and their running sum. Deterministic:
    /// equal scenarios produce identical series.
    pub fn ncv_series(&self) -> CoinFlowSeries {
        let electricity_coin = self.electricity_coin_per_day();
        let cooling = self.cooling_multiplier();
        let mut flows = Vec::with_capacity(self.horizon_days as usize);
        for day in 1..=self.horizon_days {
            flows.push(self.flow_unchecked(day, electricity_coin, cooling));
        }
        CoinFlowSeries::from_flows(1, flows)
    }

    /// Coins the rig capital would have bought outright on day 0.
    pub fn hodl_baseline(&self) -> f64 {
        self.rig_cost_fiat / self.coin_price_fiat
    }

    /// First day NCV strictly exceeds the rig cost in coin.
    pub fn payback_day(&self) -> Option<u32> {
        self.ncv_series().first_day_above(self.hodl_baseline())
    }

    /// First day NCV strictly exceeds twice the rig cost in coin.
    pub fn doubling_day(&self) -> Option<u32> {
        self.ncv_series().first_day_above(2.0 * self.hodl_baseline())
    }

    /// Day and value of the NCV maximum. See [`CoinFlowSeries::peak`] for the
    /// never-positive convention.
    pub fn peak(&self) -> (u32, f64) {
        self.ncv_series().peak()
    }

    /// Peak NCV over the HODL baseline.
    pub fn roi(&self) -> f64 {
        self.peak().1 / self.hodl_baseline()
    }

    /// Per-day coin cost of card depreciation: the card price in coin spread
    /// over its fungible lifetime.
    pub fn marginal_card_cost(&self) -> Result<f64, MissingCardParameters> {
        let card_cost = self.card_cost_fiat.ok_or(MissingCardParameters)?;
        Ok(card_cost / self.coin_price_fiat / f64::from(self.card_lifetime_days))
    }

    /// Highest card price (in coin at the purchase-day price) recoverable
    /// over the card's lifetime: the NCV accumulated through that lifetime.
    /// Non-positive values mean no card price makes mining profitable.
    pub fn frontier_card_price(&self) -> f64 {
        let electricity_coin = self.electricity_coin_per_day();
        let cooling = self.cooling_multiplier();
        let mut ncv = 0.0f64;
        for day in 1..=self.card_lifetime_days {
            ncv += self.flow_unchecked(day, electricity_coin, cooling);
        }
        ncv
    }

    /// Whether the card dies of obsolescence at its fungible lifetime or of
    /// electricity overrunning production before that. Delay days are
    /// non-operating and are not counted as overruns.
    pub fn eol_cause(&self) -> EolCause {
        let electricity_coin = self.electricity_coin_per_day();
        let cooling = self.cooling_multiplier();
        for day in self.delay_days + 1..self.card_lifetime_days {
            if self.flow_unchecked(day, electricity_coin, cooling) <= 0.0 {
                return EolCause::Electricity { day };
            }
        }
        EolCause::Obsolescence {
            day: self.card_lifetime_days,
        }
    }

    /// Discounted fiat value of the mining flows under a coin price path,
    /// next to the fiat value of holding the coins instead.
    pub fn fiat_npv(&self, path: &FiatPricePath) -> FiatValuation {
        let electricity_coin = self.electricity_coin_per_day();
        let cooling = self.cooling_multiplier();
        let mut mining = 0.0f64;
        for day in 1..=self.horizon_days {
            let flow = self.flow_unchecked(day, electricity_coin, cooling);
            let discount = (1.0 + path.discount_rate_daily).powi(day as i32);
            mining += flow * path.price_on(day) / discount;
        }
        FiatValuation {
            mining_npv_fiat: mining,
            hodl_fiat: self.hodl_baseline() * path.price_on(self.horizon_days),
        }
    }

    /// Computes the full valuation summary from a single series pass.
    pub fn summary(&self) -> ValuationSummary {
        let series = self.ncv_series();
        let hodl = self.hodl_baseline();
        let (peak_day, peak_ncv) = series.peak();
        ValuationSummary {
            peak_day,
            peak_ncv,
            payback_day: series.first_day_above(hodl),
            doubling_day: series.first_day_above(2.0 * hodl),
            hodl_coins: hodl,
            roi: peak_ncv / hodl,
            eol: self.eol_cause(),
            peak_ncv_fiat_at_p0: peak_ncv * self.coin_price_fiat,
        }
    }
}
