//! Applications of the inequality engine: monotonicity of weighted power
//! series and joint-probability lower bounds for independent random
//! variables.

mod prob;
mod series;

pub use prob::{
    monte_carlo_joint, win_probability_bounds, Direction, DiscreteDistribution, MonteCarloReport,
    WinProbabilityReport,
};
pub use series::{
    series_comparison_family, series_monotonicity, Bracket, Drift, MonotoneObservation,
    PowerSeriesSpec, SeriesGridPoint, SeriesMonotonicityReport, TailModel,
};
