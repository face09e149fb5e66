//! Deterministic net-coin-value (NCV) engine for crypto-mining capital
//! decisions.
//!
//! Instead of discounting fiat cash flows, the engine sums the daily net
//! coin flow of a rig, valued at the coin price on the purchase day. On top
//! of that series it locates payback and doubling days, the peak that marks
//! the equipment's economic end of life, the HODL baseline the same capital
//! would have bought, card-price frontiers, and a fiat-NPV comparison that
//! shows how rising coin prices can make a losing rig look profitable.
//!
//! The crate is pure computation: every operation is a deterministic
//! function of immutable inputs and is safe to evaluate concurrently.
//! Parsing of scenario files and hashrate CSVs lives in [`io`]; the
//! command-line front end lives in the companion `ncv-cli` crate.

pub mod growth;
pub mod io;
pub mod sensitivity;
pub mod valuation;

pub use growth::{
    fit_linear, fit_linear_with, FitError, FitMethod, GrowthModel, GrowthModelError,
    HashrateHistory, HistoryError, LinearFit, DEFAULT_MOORE_DOUBLING_DAYS,
};
pub use io::{
    parse_hashrate_csv, parse_scenario, GrowthModelKind, ScenarioErrorKind, ScenarioFile,
    ScenarioFileError,
};
pub use sensitivity::{
    elasticity, rank_factors, Factor, FactorSensitivity, SensitivityError, SensitivityOptions,
    SensitivityReport,
};
pub use valuation::{
    CoinFlowSeries, DayOutOfRange, ElectricityCost, EolCause, FiatPricePath, FiatValuation,
    MissingCardParameters, PricePath, PricePathError, Scenario, ScenarioError, ValuationSummary,
    DEFAULT_CARD_LIFETIME_DAYS,
};
