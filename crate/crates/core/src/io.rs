//! Scenario files and hashrate-history CSV.
//!
//! Scenario files are plain text, one `key = value` per line, `#` starts a
//! comment line, keys are case-sensitive. The hashrate CSV has a mandatory
//! `day,hashrate` header. Parsing is total: every input yields either a
//! validated value or a structured error with a line number.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::growth::{GrowthModel, HashrateHistory, DEFAULT_MOORE_DOUBLING_DAYS};
use crate::valuation::{ElectricityCost, Scenario, DEFAULT_CARD_LIFETIME_DAYS};

/// Recognized scenario-file keys.
pub const SCENARIO_KEYS: [&str; 16] = [
    "admin_fee",
    "coin_per_day",
    "growth_model",
    "growth_rate_daily",
    "moore_doubling_days",
    "electricity_kwh_fiat",
    "rig_kw",
    "electricity_coin_per_day",
    "coin_price_fiat",
    "rig_cost_fiat",
    "cop",
    "delay_days",
    "horizon_days",
    "card_cost_fiat",
    "card_lifetime_days",
    "hashrate_csv",
];

/// What went wrong while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioErrorKind {
    MissingKey,
    DuplicateKey,
    BadNumber,
    UnitViolation,
    InconsistentPair,
}

impl fmt::Display for ScenarioErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ScenarioErrorKind::MissingKey => "missing key",
            ScenarioErrorKind::DuplicateKey => "duplicate key",
            ScenarioErrorKind::BadNumber => "bad number",
            ScenarioErrorKind::UnitViolation => "unit violation",
            ScenarioErrorKind::InconsistentPair => "inconsistent pair",
        };
        f.write_str(name)
    }
}

/// Structured parse error with the offending key and 1-based line.
///
/// Whole-file errors (a key absent everywhere) report line 1.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind} `{key}`: {detail}")]
pub struct ScenarioFileError {
    pub kind: ScenarioErrorKind,
    pub key: String,
    pub line: usize,
    pub detail: String,
}

impl ScenarioFileError {
    fn new(kind: ScenarioErrorKind, key: &str, line: usize, detail: impl Into<String>) -> Self {
        ScenarioFileError {
            kind,
            key: key.to_string(),
            line,
            detail: detail.into(),
        }
    }
}

/// Which growth law a scenario file names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModelKind {
    Exponential,
    Linear,
    Moore,
    Flat,
}

impl GrowthModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GrowthModelKind::Exponential => "exponential",
            GrowthModelKind::Linear => "linear",
            GrowthModelKind::Moore => "moore",
            GrowthModelKind::Flat => "flat",
        }
    }

    fn parse(value: &str) -> Option<GrowthModelKind> {
        match value {
            "exponential" => Some(GrowthModelKind::Exponential),
            "linear" => Some(GrowthModelKind::Linear),
            "moore" => Some(GrowthModelKind::Moore),
            "flat" => Some(GrowthModelKind::Flat),
            _ => None,
        }
    }
}

/// A parsed and validated scenario file.
///
/// Keeps every key as given (including the electricity input form and the
/// growth keys not used by the selected model), so files serialize back
/// without loss and the `compare` front end can build alternative models.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub admin_fee: f64,
    pub coin_per_day: f64,
    pub growth_model: GrowthModelKind,
    pub growth_rate_daily: Option<f64>,
    pub moore_doubling_days: Option<f64>,
    pub electricity: ElectricityCost,
    pub coin_price_fiat: f64,
    pub rig_cost_fiat: f64,
    pub cop: Option<f64>,
    pub delay_days: u32,
    pub horizon_days: u32,
    pub card_cost_fiat: Option<f64>,
    pub card_lifetime_days: u32,
    pub hashrate_csv: Option<String>,
}

struct RawEntry {
    value: String,
    line: usize,
}

impl ScenarioFile {
    /// Parses scenario-file text.
    pub fn parse(text: &str) -> Result<ScenarioFile, ScenarioFileError> {
        let mut entries: BTreeMap<&str, RawEntry> = BTreeMap::new();
        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((raw_key, raw_value)) = trimmed.split_once('=') else {
                return Err(ScenarioFileError::new(
                    ScenarioErrorKind::UnitViolation,
                    trimmed,
                    line,
                    "expected `key = value`",
                ));
            };
            let key = raw_key.trim();
            let value = raw_value.trim();
            let Some(&canonical) = SCENARIO_KEYS.iter().find(|&&k| k == key) else {
                return Err(ScenarioFileError::new(
                    ScenarioErrorKind::UnitViolation,
                    key,
                    line,
                    "unknown key",
                ));
            };
            if let Some(previous) = entries.get(canonical) {
                return Err(ScenarioFileError::new(
                    ScenarioErrorKind::DuplicateKey,
                    key,
                    line,
                    format!("already given on line {}", previous.line),
                ));
            }
            entries.insert(
                canonical,
                RawEntry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        build(&entries)
    }

    /// The growth model selected by the file, or `None` when the file defers
    /// to a hashrate history (`growth_model = linear` without an explicit
    /// rate).
    pub fn growth_model(&self) -> Option<GrowthModel> {
        match self.growth_model {
            GrowthModelKind::Exponential => self
                .growth_rate_daily
                .map(|rate| GrowthModel::Exponential { rate }),
            GrowthModelKind::Linear => self.growth_rate_daily.map(|rate| GrowthModel::Linear { rate }),
            GrowthModelKind::Moore => Some(GrowthModel::MooreLaw {
                doubling_days: self.moore_doubling_days.unwrap_or(DEFAULT_MOORE_DOUBLING_DAYS),
            }),
            GrowthModelKind::Flat => Some(GrowthModel::Flat),
        }
    }

    /// Path of the hashrate CSV the file needs before it can be evaluated,
    /// if any.
    pub fn required_history_path(&self) -> Option<&str> {
        if self.growth_model == GrowthModelKind::Linear && self.growth_rate_daily.is_none() {
            self.hashrate_csv.as_deref()
        } else {
            None
        }
    }

    /// The scenario, when the file is self-contained.
    pub fn scenario(&self) -> Option<Scenario> {
        self.growth_model().map(|growth| self.scenario_with_growth(growth))
    }

    /// The scenario under an explicitly supplied growth model (used after
    /// fitting a hashrate history).
    pub fn scenario_with_growth(&self, growth: GrowthModel) -> Scenario {
        Scenario {
            fee_fraction: self.admin_fee,
            coin_per_day: self.coin_per_day,
            growth,
            electricity: self.electricity,
            coin_price_fiat: self.coin_price_fiat,
            rig_cost_fiat: self.rig_cost_fiat,
            cooling_cop: self.cop,
            delay_days: self.delay_days,
            horizon_days: self.horizon_days,
            card_cost_fiat: self.card_cost_fiat,
            card_lifetime_days: self.card_lifetime_days,
        }
    }

    /// Writes the file back out. Numbers use the shortest representation
    /// that round-trips, so `parse(serialize(f)) == f` exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut push = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        push("admin_fee", format_f64(self.admin_fee));
        push("coin_per_day", format_f64(self.coin_per_day));
        push("growth_model", self.growth_model.as_str().to_string());
        if let Some(rate) = self.growth_rate_daily {
            push("growth_rate_daily", format_f64(rate));
        }
        if let Some(days) = self.moore_doubling_days {
            push("moore_doubling_days", format_f64(days));
        }
        match self.electricity {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            } => {
                push("electricity_kwh_fiat", format_f64(price_fiat_per_kwh));
                push("rig_kw", format_f64(rig_kw));
            }
            ElectricityCost::CoinPerDay(coin) => {
                push("electricity_coin_per_day", format_f64(coin));
            }
        }
        push("coin_price_fiat", format_f64(self.coin_price_fiat));
        push("rig_cost_fiat", format_f64(self.rig_cost_fiat));
        if let Some(cop) = self.cop {
            push("cop", format_f64(cop));
        }
        push("delay_days", self.delay_days.to_string());
        push("horizon_days", self.horizon_days.to_string());
        if let Some(card_cost) = self.card_cost_fiat {
            push("card_cost_fiat", format_f64(card_cost));
        }
        push("card_lifetime_days", self.card_lifetime_days.to_string());
        if let Some(path) = &self.hashrate_csv {
            push("hashrate_csv", path.clone());
        }
        out
    }
}

fn format_f64(value: f64) -> String {
    format!("{value}")
}

fn build(entries: &BTreeMap<&str, RawEntry>) -> Result<ScenarioFile, ScenarioFileError> {
    let admin_fee = require_f64(entries, "admin_fee")?;
    if !(0.0..1.0).contains(&admin_fee) {
        return unit_violation(entries, "admin_fee", "fee fraction must satisfy 0 <= k < 1");
    }
    let coin_per_day = require_f64(entries, "coin_per_day")?;
    if coin_per_day <= 0.0 {
        return unit_violation(entries, "coin_per_day", "day-0 production must be positive");
    }

    let growth_entry = require(entries, "growth_model")?;
    let Some(growth_model) = GrowthModelKind::parse(&growth_entry.value) else {
        return Err(ScenarioFileError::new(
            ScenarioErrorKind::UnitViolation,
            "growth_model",
            growth_entry.line,
            format!(
                "unknown growth model `{}`; expected exponential|linear|moore|flat",
                growth_entry.value
            ),
        ));
    };
    let growth_rate_daily = optional_f64(entries, "growth_rate_daily")?;
    let moore_doubling_days = optional_f64(entries, "moore_doubling_days")?;
    let hashrate_csv = entries.get("hashrate_csv").map(|e| e.value.clone());
    match growth_model {
        GrowthModelKind::Exponential => match growth_rate_daily {
            None => return missing(entries, "growth_rate_daily"),
            Some(rate) if rate <= -1.0 => {
                return unit_violation(entries, "growth_rate_daily", "daily rate must be > -1")
            }
            Some(_) => {}
        },
        GrowthModelKind::Linear => match growth_rate_daily {
            Some(rate) if rate < 0.0 => {
                return unit_violation(
                    entries,
                    "growth_rate_daily",
                    "linear growth fraction must be >= 0",
                )
            }
            Some(_) => {}
            None if hashrate_csv.is_none() => return missing(entries, "hashrate_csv"),
            None => {}
        },
        GrowthModelKind::Moore => {
            if let Some(days) = moore_doubling_days {
                if days <= 0.0 {
                    return unit_violation(
                        entries,
                        "moore_doubling_days",
                        "doubling period must be positive",
                    );
                }
            }
        }
        GrowthModelKind::Flat => {}
    }

    let kwh = optional_f64(entries, "electricity_kwh_fiat")?;
    let rig_kw = optional_f64(entries, "rig_kw")?;
    let coin_per_day_cost = optional_f64(entries, "electricity_coin_per_day")?;
    let electricity = match (kwh, rig_kw, coin_per_day_cost) {
        (Some(_), _, Some(_)) | (_, Some(_), Some(_)) => {
            let line = entries.get("electricity_coin_per_day").map_or(1, |e| e.line);
            return Err(ScenarioFileError::new(
                ScenarioErrorKind::InconsistentPair,
                "electricity_coin_per_day",
                line,
                "give either electricity_kwh_fiat + rig_kw or electricity_coin_per_day, not both",
            ));
        }
        (Some(price), Some(kw), None) => {
            if price < 0.0 {
                return unit_violation(entries, "electricity_kwh_fiat", "tariff must be >= 0");
            }
            if kw < 0.0 {
                return unit_violation(entries, "rig_kw", "power draw must be >= 0");
            }
            ElectricityCost::PerKwh {
                price_fiat_per_kwh: price,
                rig_kw: kw,
            }
        }
        (Some(_), None, None) => return missing(entries, "rig_kw"),
        (None, Some(_), None) => return missing(entries, "electricity_kwh_fiat"),
        (None, None, Some(coin)) => {
            if coin < 0.0 {
                return unit_violation(
                    entries,
                    "electricity_coin_per_day",
                    "daily coin cost must be >= 0",
                );
            }
            ElectricityCost::CoinPerDay(coin)
        }
        (None, None, None) => return missing(entries, "electricity_coin_per_day"),
    };

    let coin_price_fiat = require_f64(entries, "coin_price_fiat")?;
    if coin_price_fiat <= 0.0 {
        return unit_violation(entries, "coin_price_fiat", "coin price must be positive");
    }
    let rig_cost_fiat = require_f64(entries, "rig_cost_fiat")?;
    if rig_cost_fiat <= 0.0 {
        return unit_violation(entries, "rig_cost_fiat", "rig cost must be positive");
    }
    let cop = optional_f64(entries, "cop")?;
    if let Some(cop) = cop {
        if cop <= 0.0 {
            return unit_violation(entries, "cop", "coefficient of performance must be positive");
        }
    }
    let delay_days = require_u32(entries, "delay_days")?;
    let horizon_days = require_u32(entries, "horizon_days")?;
    if horizon_days == 0 {
        return unit_violation(entries, "horizon_days", "horizon must be at least one day");
    }
    if delay_days >= horizon_days {
        return unit_violation(
            entries,
            "delay_days",
            "delivery delay must be shorter than the horizon",
        );
    }
    let card_cost_fiat = optional_f64(entries, "card_cost_fiat")?;
    if let Some(cost) = card_cost_fiat {
        if cost <= 0.0 {
            return unit_violation(entries, "card_cost_fiat", "card cost must be positive");
        }
    }
    let card_lifetime_days = match entries.get("card_lifetime_days") {
        Some(_) => require_u32(entries, "card_lifetime_days")?,
        None => DEFAULT_CARD_LIFETIME_DAYS,
    };
    if card_lifetime_days == 0 {
        return unit_violation(
            entries,
            "card_lifetime_days",
            "card lifetime must be at least one day",
        );
    }

    Ok(ScenarioFile {
        admin_fee,
        coin_per_day,
        growth_model,
        growth_rate_daily,
        moore_doubling_days,
        electricity,
        coin_price_fiat,
        rig_cost_fiat,
        cop,
        delay_days,
        horizon_days,
        card_cost_fiat,
        card_lifetime_days,
        hashrate_csv,
    })
}

fn require<'a>(
    entries: &'a BTreeMap<&str, RawEntry>,
    key: &str,
) -> Result<&'a RawEntry, ScenarioFileError> {
    entries.get(key).ok_or_else(|| {
        ScenarioFileError::new(ScenarioErrorKind::MissingKey, key, 1, "required key not found")
    })
}

fn require_f64(entries: &BTreeMap<&str, RawEntry>, key: &str) -> Result<f64, ScenarioFileError> {
    let entry = require(entries, key)?;
    parse_f64(key, &entry.value, entry.line)
}

fn optional_f64(
    entries: &BTreeMap<&str, RawEntry>,
    key: &str,
) -> Result<Option<f64>, ScenarioFileError> {
    entries
        .get(key)
        .map(|entry| parse_f64(key, &entry.value, entry.line))
        .transpose()
}

fn require_u32(entries: &BTreeMap<&str, RawEntry>, key: &str) -> Result<u32, ScenarioFileError> {
    let entry = require(entries, key)?;
    let value: i64 = entry.value.parse().map_err(|_| {
        ScenarioFileError::new(
            ScenarioErrorKind::BadNumber,
            key,
            entry.line,
            format!("cannot parse `{}` as an integer", entry.value),
        )
    })?;
    if value < 0 {
        return Err(ScenarioFileError::new(
            ScenarioErrorKind::UnitViolation,
            key,
            entry.line,
            "must be non-negative",
        ));
    }
    u32::try_from(value).map_err(|_| {
        ScenarioFileError::new(ScenarioErrorKind::UnitViolation, key, entry.line, "too large")
    })
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ScenarioFileError> {
    let parsed: f64 = value.parse().map_err(|_| {
        ScenarioFileError::new(
            ScenarioErrorKind::BadNumber,
            key,
            line,
            format!("cannot parse `{value}` as a number"),
        )
    })?;
    if !parsed.is_finite() {
        return Err(ScenarioFileError::new(
            ScenarioErrorKind::BadNumber,
            key,
            line,
            "value must be finite",
        ));
    }
    Ok(parsed)
}

fn unit_violation<T>(
    entries: &BTreeMap<&str, RawEntry>,
    key: &str,
    detail: &str,
) -> Result<T, ScenarioFileError> {
    let line = entries.get(key).map_or(1, |e| e.line);
    Err(ScenarioFileError::new(
        ScenarioErrorKind::UnitViolation,
        key,
        line,
        detail,
    ))
}

fn missing<T>(entries: &BTreeMap<&str, RawEntry>, key: &str) -> Result<T, ScenarioFileError> {
    let _ = entries;
    Err(ScenarioFileError::new(
        ScenarioErrorKind::MissingKey,
        key,
        1,
        "required key not found",
    ))
}

/// Parses a self-contained scenario file straight to a [`Scenario`].
///
/// Files whose linear growth model defers to a hashrate CSV cannot be
/// resolved from text alone; parse with [`ScenarioFile::parse`], load the
/// history, and use [`ScenarioFile::scenario_with_growth`] instead.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioFileError> {
    let file = ScenarioFile::parse(text)?;
    file.scenario().ok_or_else(|| {
        ScenarioFileError::new(
            ScenarioErrorKind::MissingKey,
            "growth_rate_daily",
            1,
            "linear growth defers to a hashrate history; fit it first",
        )
    })
}

/// Parses hashrate-history CSV: a `day,hashrate` header, then one sample per
/// line. Blank lines are skipped.
pub fn parse_hashrate_csv(text: &str) -> Result<HashrateHistory, ScenarioFileError> {
    let mut samples: Vec<(u32, f64)> = Vec::new();
    let mut header_seen = false;
    let mut last_line = 1;
    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() {
            continue;
        }
        last_line = line;
        if !header_seen {
            if trimmed != "day,hashrate" {
                return Err(ScenarioFileError::new(
                    ScenarioErrorKind::MissingKey,
                    "day,hashrate",
                    line,
                    "expected the header `day,hashrate`",
                ));
            }
            header_seen = true;
            continue;
        }
        let Some((day_text, rate_text)) = trimmed.split_once(',') else {
            return Err(ScenarioFileError::new(
                ScenarioErrorKind::BadNumber,
                "hashrate",
                line,
                "expected `day,hashrate`",
            ));
        };
        let day: u32 = day_text.trim().parse().map_err(|_| {
            ScenarioFileError::new(
                ScenarioErrorKind::BadNumber,
                "day",
                line,
                format!("cannot parse `{}` as a non-negative integer", day_text.trim()),
            )
        })?;
        let rate: f64 = rate_text.trim().parse().map_err(|_| {
            ScenarioFileError::new(
                ScenarioErrorKind::BadNumber,
                "hashrate",
                line,
                format!("cannot parse `{}` as a number", rate_text.trim()),
            )
        })?;
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(ScenarioFileError::new(
                ScenarioErrorKind::UnitViolation,
                "hashrate",
                line,
                "hashrate must be positive",
            ));
        }
        if let Some(&(previous_day, _)) = samples.last() {
            if day <= previous_day {
                return Err(ScenarioFileError::new(
                    ScenarioErrorKind::UnitViolation,
                    "day",
                    line,
                    "day indices must be strictly increasing",
                ));
            }
        }
        samples.push((day, rate));
    }
    if !header_seen {
        return Err(ScenarioFileError::new(
            ScenarioErrorKind::MissingKey,
            "day,hashrate",
            1,
            "expected the header `day,hashrate`",
        ));
    }
    if samples.len() < 2 {
        return Err(ScenarioFileError::new(
            ScenarioErrorKind::UnitViolation,
            "day",
            last_line,
            "at least two samples required",
        ));
    }
    HashrateHistory::new(samples).map_err(|error| {
        ScenarioFileError::new(ScenarioErrorKind::UnitViolation, "day", last_line, error.to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::fit_linear;

    const S9_DIRECT: &str = "\
# Antminer S9, coin-denominated electricity
admin_fee = 0.1
coin_per_day = 0.01702
growth_model = exponential
growth_rate_daily = 0.0045
electricity_coin_per_day = 0.00045
coin_price_fiat = 2350
rig_cost_fiat = 2800
delay_days = 0
horizon_days = 1000
card_lifetime_days = 540
";

    const S9_KWH: &str = "\
admin_fee = 0.1
coin_per_day = 0.01702
growth_model = exponential
growth_rate_daily = 0.0045
electricity_kwh_fiat = 0.03
rig_kw = 1.6
coin_price_fiat = 2350
rig_cost_fiat = 2800
delay_days = 0
horizon_days = 1000
";

    #[test]
    fn parses_the_reference_file() {
        let scenario = parse_scenario(S9_DIRECT).unwrap();
        assert_eq!(scenario.fee_fraction, 0.1);
        assert_eq!(scenario.coin_per_day, 0.01702);
        assert_eq!(scenario.growth, GrowthModel::Exponential { rate: 0.0045 });
        assert_eq!(scenario.electricity_coin_per_day(), 0.00045);
        assert_eq!(scenario.coin_price_fiat, 2350.0);
        assert_eq!(scenario.rig_cost_fiat, 2800.0);
        assert_eq!(scenario.card_lifetime_days, 540);
        assert!(scenario.validate().is_ok());
    }

    #[test]
    fn kwh_form_reconciles_with_the_direct_form() {
        let scenario = parse_scenario(S9_KWH).unwrap();
        let coin = scenario.electricity_coin_per_day();
        // 0.03 * 1.6 * 24 / 2350 = 0.00049..., the direct form's 0.00045 is
        // the same figure under coarser rounding.
        assert!((coin - 0.03 * 1.6 * 24.0 / 2350.0).abs() < 1e-18);
        assert!((coin - 0.00045).abs() < 5e-5);
        assert_eq!(scenario.card_lifetime_days, DEFAULT_CARD_LIFETIME_DAYS);
    }

    #[test]
    fn missing_required_key() {
        let text = S9_DIRECT.replace("coin_price_fiat = 2350\n", "");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        assert_eq!(error.key, "coin_price_fiat");
    }

    #[test]
    fn fee_unit_violation() {
        let text = S9_DIRECT.replace("admin_fee = 0.1", "admin_fee = 1.0");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.key, "admin_fee");
    }

    #[test]
    fn duplicate_key_reports_the_second_line() {
        let text = format!("{S9_DIRECT}admin_fee = 0.2\n");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::DuplicateKey);
        assert_eq!(error.key, "admin_fee");
        assert_eq!(error.line, 12);
    }

    #[test]
    fn both_electricity_forms_conflict() {
        let text = format!("{S9_KWH}electricity_coin_per_day = 0.00045\n");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::InconsistentPair);
        assert_eq!(error.key, "electricity_coin_per_day");
    }

    #[test]
    fn half_of_the_kwh_pair_is_missing() {
        let text = S9_KWH.replace("rig_kw = 1.6\n", "");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        assert_eq!(error.key, "rig_kw");

        let text = S9_KWH.replace("electricity_kwh_fiat = 0.03\n", "");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        assert_eq!(error.key, "electricity_kwh_fiat");
    }

    #[test]
    fn bad_number_reports_line() {
        let text = S9_DIRECT.replace("coin_per_day = 0.01702", "coin_per_day = lots");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::BadNumber);
        assert_eq!(error.key, "coin_per_day");
        assert_eq!(error.line, 3);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{S9_DIRECT}admin_fe = 0.2\n");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.key, "admin_fe");
    }

    #[test]
    fn delay_must_stay_inside_the_horizon() {
        let text = S9_DIRECT.replace("delay_days = 0", "delay_days = 1000");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.key, "delay_days");
    }

    #[test]
    fn growth_key_requirements() {
        let text = S9_DIRECT.replace("growth_rate_daily = 0.0045\n", "");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        assert_eq!(error.key, "growth_rate_daily");

        let text = S9_DIRECT
            .replace("growth_model = exponential", "growth_model = linear")
            .replace("growth_rate_daily = 0.0045\n", "");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        assert_eq!(error.key, "hashrate_csv");

        let text = S9_DIRECT.replace("growth_model = exponential", "growth_model = moore");
        let scenario = parse_scenario(&text).unwrap();
        assert_eq!(
            scenario.growth,
            GrowthModel::MooreLaw { doubling_days: DEFAULT_MOORE_DOUBLING_DAYS }
        );

        let text = S9_DIRECT.replace("growth_model = exponential", "growth_model = sideways");
        let error = parse_scenario(&text).unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.key, "growth_model");
    }

    #[test]
    fn linear_file_with_csv_defers_to_the_history() {
        let text = S9_DIRECT
            .replace("growth_model = exponential", "growth_model = linear")
            .replace("growth_rate_daily = 0.0045", "hashrate_csv = rates.csv");
        let file = ScenarioFile::parse(&text).unwrap();
        assert_eq!(file.required_history_path(), Some("rates.csv"));
        assert!(file.scenario().is_none());
        assert!(parse_scenario(&text).is_err());
    }

    #[test]
    fn round_trip_is_lossless() {
        for text in [S9_DIRECT, S9_KWH] {
            let parsed = ScenarioFile::parse(text).unwrap();
            let reparsed = ScenarioFile::parse(&parsed.serialize()).unwrap();
            assert_eq!(parsed, reparsed);
            assert_eq!(parsed.serialize(), reparsed.serialize());
        }
    }

    #[test]
    fn round_trip_keeps_every_optional() {
        let text = format!(
            "{S9_DIRECT}cop = 2.5\ncard_cost_fiat = 1999.99\nmoore_doubling_days = 547.5\n"
        );
        let parsed = ScenarioFile::parse(&text).unwrap();
        let reparsed = ScenarioFile::parse(&parsed.serialize()).unwrap();
        assert_eq!(parsed, reparsed);
    }

    #[test]
    fn crlf_and_spacing_are_tolerated() {
        let text = "admin_fee=0.1\r\ncoin_per_day =0.01702\r\ngrowth_model= exponential\r\n\
                    growth_rate_daily = 0.0045\r\nelectricity_coin_per_day = 0.00045\r\n\
                    coin_price_fiat = 2350\r\nrig_cost_fiat = 2800\r\ndelay_days = 0\r\n\
                    horizon_days = 1000\r\n";
        assert!(parse_scenario(text).is_ok());
    }

    #[test]
    fn csv_happy_path() {
        let history = parse_hashrate_csv("day,hashrate\n0,100\n1,102\n").unwrap();
        assert_eq!(history.samples(), &[(0, 100.0), (1, 102.0)]);
    }

    #[test]
    fn csv_negative_hashrate() {
        let error = parse_hashrate_csv("day,hashrate\n0,-5\n").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.line, 2);
    }

    #[test]
    fn csv_missing_header() {
        let error = parse_hashrate_csv("0,100\n1,102\n").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
        let error = parse_hashrate_csv("").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::MissingKey);
    }

    #[test]
    fn csv_bad_day_and_disorder() {
        let error = parse_hashrate_csv("day,hashrate\nten,100\n").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::BadNumber);
        assert_eq!(error.key, "day");

        let error = parse_hashrate_csv("day,hashrate\n5,100\n5,101\n").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
        assert_eq!(error.key, "day");
        assert_eq!(error.line, 3);
    }

    #[test]
    fn csv_needs_two_samples() {
        let error = parse_hashrate_csv("day,hashrate\n0,100\n").unwrap_err();
        assert_eq!(error.kind, ScenarioErrorKind::UnitViolation);
    }

    #[test]
    fn csv_blank_lines_are_skipped() {
        let history = parse_hashrate_csv("\nday,hashrate\n\n0,100\n\n1,102\n\n").unwrap();
        assert_eq!(history.samples().len(), 2);
    }

    #[test]
    fn synthetic_year_of_linear_data_recovers_the_slope() {
        let mut text = String::from("day,hashrate\n");
        for day in 0..365u32 {
            let rate = 100.0 + 0.35 * f64::from(day);
            text.push_str(&format!("{day},{rate}\n"));
        }
        let history = parse_hashrate_csv(&text).unwrap();
        let fit = fit_linear(&history).unwrap();
        assert!((fit.slope - 0.35).abs() / 0.35 <= 1e-9);
    }
}
