//! Self-contained SVG line charts.
//!
//! Output is deterministic: the same series produce byte-identical
//! documents, so charts can be archived and diffed.

use thiserror::Error;

use crate::table::fmt_sig;

/// One named line: consecutive daily values starting at `start_day`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub start_day: u32,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, start_day: u32, values: Vec<f64>) -> Series {
        Series {
            label: label.into(),
            start_day,
            values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("nothing to draw: need at least one nonempty series")]
    EmptySeries,
    #[error("all series must share one day range")]
    MismatchedDayRange,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const PLOT_LEFT: f64 = 70.0;
const PLOT_RIGHT: f64 = 640.0;
const PLOT_TOP: f64 = 24.0;
const PLOT_BOTTOM: f64 = 460.0;
const LEGEND_X: f64 = 660.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Renders one polyline per series on linear axes auto-scaled to the data
/// extrema with a 5% margin, labelled "days" and "coin", with a legend.
pub fn render_svg(series: &[Series]) -> Result<String, SvgError> {
    if series.is_empty() || series.iter().any(|s| s.values.is_empty()) {
        return Err(SvgError::EmptySeries);
    }
    let day_range = (series[0].start_day, series[0].values.len());
    if series
        .iter()
        .any(|s| (s.start_day, s.values.len()) != day_range)
    {
        return Err(SvgError::MismatchedDayRange);
    }

    let day_min = f64::from(day_range.0);
    let day_max = f64::from(day_range.0) + (day_range.1 as f64 - 1.0);
    let value_min = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let value_max = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);

    let (x_lo, x_hi) = padded(day_min, day_max);
    let (y_lo, y_hi) = padded(value_min, value_max);

    let x_of = |day: f64| PLOT_LEFT + (day - x_lo) / (x_hi - x_lo) * (PLOT_RIGHT - PLOT_LEFT);
    let y_of = |value: f64| PLOT_BOTTOM - (value - y_lo) / (y_hi - y_lo) * (PLOT_BOTTOM - PLOT_TOP);

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="monospace" font-size="12">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    ));
    svg.push('\n');

    // Axes.
    svg.push_str(&format!(
        r#"<line x1="{PLOT_LEFT}" y1="{PLOT_BOTTOM}" x2="{PLOT_RIGHT}" y2="{PLOT_BOTTOM}" stroke="black"/>"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<line x1="{PLOT_LEFT}" y1="{PLOT_TOP}" x2="{PLOT_LEFT}" y2="{PLOT_BOTTOM}" stroke="black"/>"#
    ));
    svg.push('\n');

    // Ticks and grid values.
    for i in 0..=4u32 {
        let t = f64::from(i) / 4.0;
        let day = x_lo + t * (x_hi - x_lo);
        let x = x_of(day);
        svg.push_str(&format!(
            r#"<line x1="{x:.2}" y1="{PLOT_BOTTOM}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            PLOT_BOTTOM + 5.0
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            PLOT_BOTTOM + 18.0,
            fmt_sig(day, 5)
        ));
        svg.push('\n');

        let value = y_lo + t * (y_hi - y_lo);
        let y = y_of(value);
        svg.push_str(&format!(
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{PLOT_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            PLOT_LEFT - 5.0
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            PLOT_LEFT - 8.0,
            fmt_sig(value, 5)
        ));
        svg.push('\n');
    }

    // Axis captions.
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">days</text>"#,
        (PLOT_LEFT + PLOT_RIGHT) / 2.0,
        PLOT_BOTTOM + 38.0
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{PLOT_LEFT}" y="{:.2}" text-anchor="start">coin</text>"#,
        PLOT_TOP - 8.0
    ));
    svg.push('\n');

    // Data.
    for (index, line) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let mut points = String::new();
        for (offset, &value) in line.values.iter().enumerate() {
            if offset > 0 {
                points.push(' ');
            }
            let day = f64::from(line.start_day) + offset as f64;
            points.push_str(&format!("{:.2},{:.2}", x_of(day), y_of(value)));
        }
        svg.push_str(&format!(
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>"#
        ));
        svg.push('\n');
    }

    // Legend.
    for (index, line) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let y = PLOT_TOP + 10.0 + 18.0 * index as f64;
        svg.push_str(&format!(
            r#"<line x1="{LEGEND_X}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            LEGEND_X + 24.0
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
            LEGEND_X + 30.0,
            y + 4.0,
            escape(&line.label)
        ));
        svg.push('\n');
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn padded(low: f64, high: f64) -> (f64, f64) {
    let span = high - low;
    let pad = if span > 0.0 {
        span * 0.05
    } else if low != 0.0 {
        low.abs() * 0.05
    } else {
        1.0
    };
    (low - pad, high + pad)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
