//! Design toolbox for small vertical-axis wind turbines.
//!
//! [`aero`] holds the forward model: actuator-disc power, swept area,
//! tip-speed ratio and the empirical Cp(λ, β) surface. [`solver`] inverts it
//! for rotor height or radius, [`sweep`] explores it over grids and
//! [`table`] generates fixed-tip-speed design tables.
//!
//! Grid evaluations run on rayon when the default `parallel` feature is
//! enabled; see [`Execution`].

pub mod aero;
pub mod error;
pub mod exec;
pub mod search;
pub mod solver;
pub mod sweep;
pub mod table;
pub mod units;

pub use aero::{
    actuator_power, available_power, average_wind_speed, lambda_i, performance,
    performance_with_coefficients, power_coefficient, shaft_torque, swept_area, tip_speed_ratio,
    Axis, CpCoefficients, Environment, OperatingPoint, PerformancePoint, RotorGeometry,
    DEFAULT_AIR_DENSITY, DEFAULT_BLADE_COUNT, DEFAULT_PITCH_DEG, MAX_TIP_SPEED_RATIO,
};
pub use error::{Result, VawtError};
pub use exec::Execution;
pub use solver::{
    optimal_tip_speed_ratio, optimal_tip_speed_ratio_with_coefficients, solve_height,
    solve_radius, DesignRequest, HeightSolution, KnownDimension, RadiusSearch, TsrOptimum,
};
pub use sweep::{
    iso_power_locus, iso_power_locus_with, stepped_grid, sweep, sweep_with, Locus, LocusPoint, SkippedRadius,
    SweepRow, SweepSpec, SweepVariable,
};
pub use table::{design_table, DesignTableRow};
pub use units::{rad_per_s_to_rpm, rpm_to_rad_per_s};
