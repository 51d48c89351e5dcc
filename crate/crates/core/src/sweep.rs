//! One-dimensional parameter sweeps and iso-power (R, H) loci.

use serde::{Deserialize, Serialize};

use crate::aero::{
    performance_with_coefficients, swept_area, tip_speed_ratio, CpCoefficients, Environment,
    OperatingPoint, PerformancePoint, RotorGeometry,
};
use crate::error::{require_non_negative, require_positive, Result, VawtError};
use crate::exec::Execution;
use crate::solver::{solve_height, DesignRequest, KnownDimension};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// rad/s
    AngularSpeed,
    /// m
    Radius,
    /// m
    Height,
    /// m/s
    WindSpeed,
    /// dimensionless; realized by adjusting the angular speed
    TipSpeedRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub geometry: RotorGeometry,
    pub environment: Environment,
    pub operating_point: OperatingPoint,
    #[serde(default)]
    pub coefficients: CpCoefficients,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(VawtError::validation("from", "sweep bounds must be finite"));
        }
        if self.from >= self.to {
            return Err(VawtError::validation(
                "from",
                format!("lower bound {} must be below upper bound {}", self.from, self.to),
            ));
        }
        if self.steps < 2 {
            return Err(VawtError::validation("steps", "a sweep needs at least 2 steps"));
        }
        // the fixed context, minus whatever is being swept
        require_positive("air_density", self.environment.air_density)?;
        require_non_negative("pitch_angle", self.operating_point.pitch_angle)?;
        if self.variable != SweepVariable::WindSpeed {
            require_positive("wind_speed", self.environment.wind_speed)?;
        }
        if self.variable != SweepVariable::Radius {
            require_positive("radius", self.geometry.radius)?;
        }
        Ok(())
    }

    /// Uniform grid of `steps` points including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + span * i as f64 / last as f64
                }
            })
            .collect()
    }

    fn context_at(&self, value: f64) -> (RotorGeometry, Environment, OperatingPoint) {
        let (mut geom, mut env, mut op) = (self.geometry, self.environment, self.operating_point);
        match self.variable {
            SweepVariable::AngularSpeed => op.angular_speed = value,
            SweepVariable::Radius => geom.radius = value,
            SweepVariable::Height => geom.height = value,
            SweepVariable::WindSpeed => env.wind_speed = value,
            SweepVariable::TipSpeedRatio => op.angular_speed = value * env.wind_speed / geom.radius,
        }
        (geom, env, op)
    }
}

/// One grid point of a sweep. Points that fail evaluation carry a zero-power
/// entry and the reason in `flag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(flatten)]
    pub point: PerformancePoint,
    pub flag: Option<String>,
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    sweep_with(spec, Execution::default())
}

pub fn sweep_with(spec: &SweepSpec, execution: Execution) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let grid = spec.grid();
    Ok(execution.map_slice(&grid, |&value| evaluate(spec, value)))
}

fn evaluate(spec: &SweepSpec, value: f64) -> SweepRow {
    let (geom, env, op) = spec.context_at(value);
    match performance_with_coefficients(&geom, &env, &op, &spec.coefficients) {
        Ok(point) => SweepRow { value, point, flag: None },
        Err(err) => {
            let tsr = tip_speed_ratio(geom.radius, op.angular_speed, env.wind_speed)
                .ok()
                .filter(|t| t.is_finite())
                .unwrap_or(0.0);
            let area = if geom.validate().is_ok() { swept_area(&geom) } else { 0.0 };
            SweepRow {
                value,
                point: PerformancePoint {
                    tip_speed_ratio: tsr,
                    power_coefficient: 0.0,
                    swept_area: area,
                    available_power: 0.0,
                    mechanical_power: 0.0,
                    shaft_torque: 0.0,
                    cp_clamped: false,
                    stationary: false,
                },
                flag: Some(err.to_string()),
            }
        }
    }
}

/// Inclusive grid `from, from + step, …` up to `to`, tolerating rounding in
/// `(to - from) / step`.
pub fn stepped_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(VawtError::validation("from", "grid bounds must be finite"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(VawtError::validation("step", format!("grid step must be positive, got {step}")));
    }
    if to < from {
        return Err(VawtError::validation("to", format!("grid end {to} lies below its start {from}")));
    }
    let intervals = (to - from) / step;
    if intervals > 1.0e7 {
        return Err(VawtError::validation("step", "grid has more than 10^7 points"));
    }
    let count = (intervals + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    /// m
    pub radius: f64,
    /// m
    pub height: f64,
    pub tip_speed_ratio: f64,
    pub power_coefficient: f64,
}

/// (R, H) pairs producing the same mechanical power at fixed ω and V.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Locus {
    pub points: Vec<LocusPoint>,
    /// grid radii with no feasible height, with the reason
    pub skipped: Vec<SkippedRadius>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRadius {
    pub radius: f64,
    pub reason: String,
}

impl Locus {
    /// Feasible point of least height.
    pub fn minimum(&self) -> Option<&LocusPoint> {
        self.points.iter().min_by(|a, b| a.height.total_cmp(&b.height))
    }
}

pub fn iso_power_locus(
    target_power: f64,
    env: &Environment,
    angular_speed: f64,
    pitch: f64,
    radius_grid: &[f64],
) -> Result<Locus> {
    iso_power_locus_with(target_power, env, angular_speed, pitch, radius_grid, Execution::default())
}

pub fn iso_power_locus_with(
    target_power: f64,
    env: &Environment,
    angular_speed: f64,
    pitch: f64,
    radius_grid: &[f64],
    execution: Execution,
) -> Result<Locus> {
    if radius_grid.is_empty() {
        return Err(VawtError::validation("radii", "radius grid is empty"));
    }
    let base = DesignRequest::new(target_power, *env, KnownDimension::Radius(1.0), angular_speed)
        .with_pitch(pitch);
    base.validate()?;

    let solved = execution.map_slice(radius_grid, |&radius| {
        let req = DesignRequest { known: KnownDimension::Radius(radius), ..base };
        (radius, solve_height(&req))
    });

    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for (radius, outcome) in solved {
        match outcome {
            Ok(sol) => points.push(LocusPoint {
                radius,
                height: sol.height,
                tip_speed_ratio: sol.tip_speed_ratio,
                power_coefficient: sol.power_coefficient,
            }),
            Err(err) => skipped.push(SkippedRadius { radius, reason: err.to_string() }),
        }
    }
    if points.is_empty() {
        return Err(VawtError::infeasible(format!(
            "no radius in the grid yields a positive power coefficient at {angular_speed} rad/s and {} m/s",
            env.wind_speed
        )));
    }
    Ok(Locus { points, skipped })
}
