//! Property tests for the valuation invariants and the file-format
//! round-trips.

use proptest::prelude::*;

use ncv_core::{
    fit_linear, parse_hashrate_csv, ElectricityCost, GrowthModel, GrowthModelKind,
    HashrateHistory, Scenario, ScenarioFile,
};

fn growth_strategy() -> impl Strategy<Value = GrowthModel> {
    prop_oneof![
        (1e-5..0.02f64).prop_map(|rate| GrowthModel::Exponential { rate }),
        (0.0..0.02f64).prop_map(|rate| GrowthModel::Linear { rate }),
        (60.0..2000.0f64).prop_map(|doubling_days| GrowthModel::MooreLaw { doubling_days }),
        Just(GrowthModel::Flat),
    ]
}

/// Scenarios with non-negative network growth (production never rises), the
/// regime all delay/electricity orderings are stated for. Electricity spans
/// free through never-profitable.
fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    (
        (
            0.0..0.5f64,
            1e-4..10.0f64,
            growth_strategy(),
            0.0..1.2f64,
            1.0..50_000.0f64,
        ),
        (
            0.05..5.0f64,
            prop::option::of(1.5..4.0f64),
            0u32..200,
            200u32..2000,
            prop::option::of(0.1..100.0f64),
            100u32..1000,
        ),
    )
        .prop_map(
            |(
                (fee, production, growth, electricity_fraction, price),
                (hodl_coins, cop, delay, extra_days, card_coins, card_lifetime),
            )| {
                Scenario {
                    fee_fraction: fee,
                    coin_per_day: production,
                    growth,
                    electricity: ElectricityCost::CoinPerDay(
                        electricity_fraction * (1.0 - fee) * production,
                    ),
                    coin_price_fiat: price,
                    rig_cost_fiat: hodl_coins * price,
                    cooling_cop: cop,
                    delay_days: delay,
                    horizon_days: delay + extra_days,
                    card_cost_fiat: card_coins.map(|c| c * price),
                    card_lifetime_days: card_lifetime,
                }
            },
        )
}

proptest! {
    #[test]
    fn generated_scenarios_are_valid(scenario in scenario_strategy()) {
        prop_assert!(scenario.validate().is_ok());
    }

    #[test]
    fn decay_factor_is_one_on_day_zero(model in growth_strategy()) {
        prop_assert_eq!(model.decay_factor(0), 1.0);
    }

    #[test]
    fn free_electricity_caps_every_day(scenario in scenario_strategy()) {
        let mut free = scenario.clone();
        free.electricity = ElectricityCost::FREE;
        let capped = scenario.ncv_series();
        let cap = free.ncv_series();
        for (bounded, bound) in capped.cumulative().iter().zip(cap.cumulative()) {
            prop_assert!(bounded <= bound);
        }
    }

    #[test]
    fn longer_delays_never_raise_the_peak(
        scenario in scenario_strategy(),
        d1 in 0u32..150,
        gap in 1u32..50,
    ) {
        let d2 = d1 + gap;
        prop_assume!(d2 < scenario.horizon_days);
        let mut early = scenario.clone();
        early.delay_days = d1;
        let mut late = scenario.clone();
        late.delay_days = d2;
        prop_assert!(early.peak().1 >= late.peak().1);
    }

    #[test]
    fn doubling_never_precedes_payback(scenario in scenario_strategy()) {
        if let (Some(payback), Some(doubling)) = (scenario.payback_day(), scenario.doubling_day()) {
            prop_assert!(doubling >= payback);
        }
    }

    #[test]
    fn power_of_two_scaling_is_bit_exact(
        scenario in scenario_strategy(),
        exponent in -3i32..4,
    ) {
        let factor = 2.0f64.powi(exponent);
        let mut scaled = scenario.clone();
        scaled.coin_per_day *= factor;
        scaled.electricity = scenario.electricity.scaled(factor);
        scaled.rig_cost_fiat *= factor;
        let base_series = scenario.ncv_series();
        let scaled_series = scaled.ncv_series();
        for ((_, flow, ncv), (_, scaled_flow, scaled_ncv)) in
            base_series.iter_days().zip(scaled_series.iter_days())
        {
            prop_assert_eq!(scaled_flow, factor * flow);
            prop_assert_eq!(scaled_ncv, factor * ncv);
        }
        prop_assert_eq!(scenario.payback_day(), scaled.payback_day());
        prop_assert_eq!(scenario.doubling_day(), scaled.doubling_day());
    }

    #[test]
    fn huge_cop_reduces_to_no_cooling(scenario in scenario_strategy()) {
        let mut cooled = scenario.clone();
        cooled.cooling_cop = Some(1e13);
        let mut plain = scenario.clone();
        plain.cooling_cop = None;
        let bound = 1e-12 * scenario.electricity_coin_per_day();
        for (a, b) in cooled.ncv_series().flows().iter().zip(plain.ncv_series().flows()) {
            prop_assert!((a - b).abs() <= bound);
        }
    }

    #[test]
    fn running_sum_telescopes(scenario in scenario_strategy()) {
        let series = scenario.ncv_series();
        let flows = series.flows();
        let cumulative = series.cumulative();
        prop_assert_eq!(cumulative[0], flows[0]);
        for t in 1..flows.len() {
            prop_assert_eq!(cumulative[t], cumulative[t - 1] + flows[t]);
        }
    }

    #[test]
    fn roi_is_inverse_linear_in_rig_cost(
        scenario in scenario_strategy(),
        exponent in -2i32..3,
        odd_factor in 0.1..10.0f64,
    ) {
        let base_roi = scenario.roi();
        let factor = 2.0f64.powi(exponent);
        let mut scaled = scenario.clone();
        scaled.rig_cost_fiat = scenario.rig_cost_fiat * factor;
        prop_assert_eq!(scaled.roi(), base_roi / factor);
        // General factors hold to rounding error.
        let mut odd = scenario.clone();
        odd.rig_cost_fiat = scenario.rig_cost_fiat * odd_factor;
        let expected = base_roi / odd_factor;
        if expected != 0.0 {
            prop_assert!(((odd.roi() - expected) / expected).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_sum_matches_the_geometric_closed_form(
        fee in 0.0..0.9f64,
        production in 1e-6..100.0f64,
        rate in 1e-5..0.05f64,
        horizon in 1u32..10_000,
    ) {
        let scenario = Scenario {
            fee_fraction: fee,
            coin_per_day: production,
            growth: GrowthModel::Exponential { rate },
            electricity: ElectricityCost::FREE,
            coin_price_fiat: 1.0,
            rig_cost_fiat: 1.0,
            cooling_cop: None,
            delay_days: 0,
            horizon_days: horizon,
            card_cost_fiat: None,
            card_lifetime_days: 540,
        };
        let iterated = scenario.ncv_series().final_ncv();
        let closed = (1.0 - fee) * production * (1.0 - (1.0 + rate).powi(-(horizon as i32))) / rate;
        prop_assert!(((iterated - closed) / closed).abs() <= 1e-9);
    }

    #[test]
    fn halving_typical_electricity_gains_less_than_double(
        scenario in scenario_strategy(),
    ) {
        // Typical-range regime: the lifetime electricity spend stays within
        // 1.5x of the value the rig peaks at. Thin-margin rigs violate the
        // sub-proportional bound (see the unit test on the thin-margin case).
        let (_, peak) = scenario.peak();
        prop_assume!(peak > 0.0);
        let operating_days = f64::from(scenario.horizon_days - scenario.delay_days);
        let total_electricity =
            scenario.cooling_multiplier() * scenario.electricity_coin_per_day() * operating_days;
        prop_assume!(total_electricity <= 1.5 * peak);
        let mut halved = scenario.clone();
        halved.electricity = scenario.electricity.scaled(0.5);
        prop_assert!(halved.peak().1 < 2.0 * peak);
    }

    #[test]
    fn collinear_histories_fit_exactly(
        intercept in 1.0..1e6f64,
        slope in 0.0..5.0f64,
        days in 3u32..400,
    ) {
        let samples: Vec<(u32, f64)> = (0..days)
            .map(|d| (d, intercept + slope * f64::from(d)))
            .collect();
        let history = HashrateHistory::new(samples).unwrap();
        let fit = fit_linear(&history).unwrap();
        if slope == 0.0 {
            prop_assert_eq!(fit.slope, 0.0);
        } else {
            prop_assert!(((fit.slope - slope) / slope).abs() <= 1e-9);
        }
    }
}

fn scenario_file_strategy() -> impl Strategy<Value = ScenarioFile> {
    let growth = prop_oneof![
        (Just(GrowthModelKind::Exponential), (-0.5..0.05f64).prop_map(Some), Just(None)),
        (Just(GrowthModelKind::Linear), (0.0..0.05f64).prop_map(Some), Just(None)),
        (
            Just(GrowthModelKind::Moore),
            Just(None),
            prop::option::of(1.0..5000.0f64)
        ),
        (Just(GrowthModelKind::Flat), Just(None), Just(None)),
    ];
    let electricity = prop_oneof![
        (0.0..10.0f64, 0.0..50.0f64).prop_map(|(price_fiat_per_kwh, rig_kw)| {
            ElectricityCost::PerKwh {
                price_fiat_per_kwh,
                rig_kw,
            }
        }),
        (0.0..10.0f64).prop_map(ElectricityCost::CoinPerDay),
    ];
    (
        (growth, electricity),
        (
            0.0..0.999f64,
            1e-9..1e6f64,
            1e-6..1e9f64,
            1e-6..1e9f64,
            prop::option::of(0.1..20.0f64),
            0u32..500,
            1u32..5000,
            prop::option::of(1e-3..1e7f64),
            1u32..5000,
            prop::option::of("[a-z]{1,12}\\.csv"),
        ),
    )
        .prop_map(
            |(
                ((growth_model, growth_rate_daily, moore_doubling_days), electricity),
                (
                    admin_fee,
                    coin_per_day,
                    coin_price_fiat,
                    rig_cost_fiat,
                    cop,
                    delay_days,
                    extra,
                    card_cost_fiat,
                    card_lifetime_days,
                    hashrate_csv,
                ),
            )| ScenarioFile {
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
                horizon_days: delay_days + extra,
                card_cost_fiat,
                card_lifetime_days,
                hashrate_csv,
            },
        )
        .prop_filter("linear files need a rate or a csv", |file| {
            !(file.growth_model == GrowthModelKind::Linear
                && file.growth_rate_daily.is_none()
                && file.hashrate_csv.is_none())
        })
}

proptest! {
    #[test]
    fn scenario_files_round_trip_bit_exactly(file in scenario_file_strategy()) {
        let text = file.serialize();
        let reparsed = ScenarioFile::parse(&text).unwrap();
        prop_assert_eq!(&reparsed, &file);
        prop_assert_eq!(reparsed.serialize(), text);
    }

    #[test]
    fn hashrate_csv_round_trips(
        raw in prop::collection::vec((0u32..100_000, 1e-3..1e18f64), 2..50)
    ) {
        let mut samples: Vec<(u32, f64)> = raw;
        samples.sort_by_key(|&(day, _)| day);
        samples.dedup_by_key(|&mut (day, _)| day);
        prop_assume!(samples.len() >= 2);
        let mut text = String::from("day,hashrate\n");
        for &(day, rate) in &samples {
            text.push_str(&format!("{day},{rate}\n"));
        }
        let history = parse_hashrate_csv(&text).unwrap();
        prop_assert_eq!(history.samples(), &samples[..]);
    }
}
