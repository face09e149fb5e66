//! Command-line front end for the net-coin-value engine: valuation
//! summaries, growth-model comparisons, delay and electricity studies,
//! sensitivity rankings, and card-price frontiers, emitted as aligned
//! tables, CSV, or self-contained SVG charts.

pub mod commands;
pub mod output;
pub mod svg;
pub mod table;

pub use commands::{load_scenario, run, Cli, CliError, Command, OutputFormat};
pub use svg::{render_svg, Series, SvgError};
