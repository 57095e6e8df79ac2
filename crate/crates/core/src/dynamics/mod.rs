//! Time- and temperature-dependent observables of the dressed particle.

mod observables;
mod series;
mod thermal;

pub use observables::{
    f_element, fluctuation_sum, mean_p0, mean_q0, survival_probability, uncertainty_product,
    uncertainty_product_expanded, var_p0, var_q0, CoherentAmplitude,
};
pub use series::{
    plateau_estimate, scan_extrema, series, series_multi, Extremum, ExtremumKind, ObservableSeries,
    PlateauEstimate, TimeGrid, GRID_CAP,
};
pub use thermal::{
    auto_truncation, occupations, thermal_tail_bound, ThermalConfig, THERMAL_TAIL_TOLERANCE,
};
