//! Actuator-disc power, swept area, tip-speed ratio and the empirical
//! power-coefficient surface Cp(λ, β).
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Result, VawtError};

/// Sea-level standard air density, kg/m³.
pub const DEFAULT_AIR_DENSITY: f64 = 1.225;
/// Fixed-pitch rotor, degrees.
pub const DEFAULT_PITCH_DEG: f64 = 0.0;
pub const DEFAULT_BLADE_COUNT: u32 = 3;
/// Upper end of the tip-speed ratio range on which Cp is evaluated.
pub const MAX_TIP_SPEED_RATIO: f64 = 20.0;

/// Rotor axis orientation; selects the swept-area formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[default]
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorGeometry {
    /// m
    pub radius: f64,
    /// m, ignored for horizontal-axis rotors
    #[serde(default)]
    pub height: f64,
    #[serde(default = "default_blade_count")]
    pub blade_count: u32,
    #[serde(default)]
    pub axis: Axis,
}

fn default_blade_count() -> u32 {
    DEFAULT_BLADE_COUNT
}

impl RotorGeometry {
    pub fn vertical(radius: f64, height: f64) -> Self {
        RotorGeometry {
            radius,
            height,
            blade_count: DEFAULT_BLADE_COUNT,
            axis: Axis::Vertical,
        }
    }

    pub fn horizontal(radius: f64) -> Self {
        RotorGeometry {
            radius,
            height: 0.0,
            blade_count: DEFAULT_BLADE_COUNT,
            axis: Axis::Horizontal,
        }
    }

    pub fn with_blade_count(mut self, blade_count: u32) -> Self {
        self.blade_count = blade_count;
        self
    }

    /// Checks the geometry and returns advisory warnings.
    ///
    /// Blade count has no numerical effect; counts outside 3..=4 only
    /// produce a warning.
    pub fn validate(&self) -> Result<Vec<String>> {
        require_positive("radius", self.radius)?;
        if self.axis == Axis::Vertical {
            require_positive("height", self.height)?;
        }
        if self.blade_count == 0 {
            return Err(VawtError::validation("blade_count", "must be at least 1"));
        }
        let mut warnings = Vec::new();
        if !(3..=4).contains(&self.blade_count) {
            warnings.push(format!(
                "blade_count {} is outside the recommended range 3..=4",
                self.blade_count
            ));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// kg/m³
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    /// free-stream speed, m/s
    pub wind_speed: f64,
}

fn default_air_density() -> f64 {
    DEFAULT_AIR_DENSITY
}

impl Environment {
    pub fn new(wind_speed: f64) -> Self {
        Environment {
            air_density: DEFAULT_AIR_DENSITY,
            wind_speed,
        }
    }

    pub fn with_air_density(mut self, air_density: f64) -> Self {
        self.air_density = air_density;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("air_density", self.air_density)?;
        require_positive("wind_speed", self.wind_speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// rad/s
    pub angular_speed: f64,
    /// degrees
    #[serde(default)]
    pub pitch_angle: f64,
}

impl OperatingPoint {
    pub fn new(angular_speed: f64) -> Self {
        OperatingPoint {
            angular_speed,
            pitch_angle: DEFAULT_PITCH_DEG,
        }
    }

    pub fn with_pitch(mut self, pitch_angle: f64) -> Self {
        self.pitch_angle = pitch_angle;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("angular_speed", self.angular_speed)?;
        require_non_negative("pitch_angle", self.pitch_angle)
    }
}

/// Coefficients of the empirical Cp(λ, β) curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for CpCoefficients {
    fn default() -> Self {
        CpCoefficients {
            c1: 0.5176,
            c2: 116.0,
            c3: 0.4,
            c4: 5.0,
            c5: 21.0,
            c6: 0.0068,
        }
    }
}

/// Derived quantities for one (geometry, environment, operating point).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformancePoint {
    pub tip_speed_ratio: f64,
    /// Raw curve value, possibly negative. Zero for a stationary rotor.
    pub power_coefficient: f64,
    /// m²
    pub swept_area: f64,
    /// W
    pub available_power: f64,
    /// W, computed from max(Cp, 0)
    pub mechanical_power: f64,
    /// N·m
    pub shaft_torque: f64,
    /// Raw Cp was negative and clamped to zero for the power computation.
    pub cp_clamped: bool,
    /// ω = 0: no Cp evaluation, power and torque are zero.
    pub stationary: bool,
}

/// Mean of inlet and outlet stream speeds.
pub fn average_wind_speed(v_in: f64, v_out: f64) -> Result<f64> {
    require_positive("v_in", v_in)?;
    require_non_negative("v_out", v_out)?;
    Ok((v_in + v_out) / 2.0)
}

/// Power an actuator disc of `area` extracts when slowing the stream from
/// `env.wind_speed` to `v_out`.
pub fn actuator_power(env: &Environment, v_out: f64, area: f64) -> Result<f64> {
    require_positive("air_density", env.air_density)?;
    let v_in = env.wind_speed;
    require_positive("v_in", v_in)?;
    require_non_negative("v_out", v_out)?;
    require_positive("area", area)?;
    if v_out > v_in {
        return Err(VawtError::domain(
            "v_out",
            format!("outlet speed {v_out} exceeds inlet speed {v_in}; the rotor cannot accelerate the stream"),
        ));
    }
    Ok(env.air_density / 4.0 * (v_in * v_in - v_out * v_out) * (v_in + v_out) * area)
}

/// Kinetic power flux of the free stream through `area`.
pub fn available_power(env: &Environment, area: f64) -> f64 {
    let v = env.wind_speed;
    0.5 * env.air_density * area * v * v * v
}

pub fn swept_area(geom: &RotorGeometry) -> f64 {
    match geom.axis {
        Axis::Vertical => 2.0 * geom.radius * geom.height,
        Axis::Horizontal => PI * geom.radius * geom.radius,
    }
}

/// Blade tip speed over wind speed, Rω/V.
pub fn tip_speed_ratio(radius: f64, angular_speed: f64, wind_speed: f64) -> Result<f64> {
    if !(wind_speed.is_finite() && wind_speed > 0.0) {
        return Err(VawtError::domain(
            "wind_speed",
            format!("tip-speed ratio is singular for wind speed {wind_speed}"),
        ));
    }
    Ok(radius * angular_speed / wind_speed)
}

/// Auxiliary λ_i of the Cp curve:
/// 1/λ_i = 1/(λ + 0.08β) − 0.035/(β³ + 1).
pub fn lambda_i(tsr: f64, pitch: f64) -> Result<f64> {
    require_positive("tip_speed_ratio", tsr)?;
    require_non_negative("pitch_angle", pitch)?;
    let base = 1.0 / (tsr + 0.08 * pitch);
    let reciprocal = base - 0.035 / (pitch.powi(3) + 1.0);
    // Cancellation leaves a few ulps of noise at the singular point.
    if reciprocal <= base * 1e-12 {
        let singular = 1.0 / (0.035 / (pitch.powi(3) + 1.0)) - 0.08 * pitch;
        return Err(VawtError::domain(
            "tip_speed_ratio",
            format!(
                "lambda_i is singular or negative at tip-speed ratio {tsr} (pitch {pitch}°); \
                 the singularity lies at {singular:.6}"
            ),
        ));
    }
    Ok(1.0 / reciprocal)
}

/// Raw empirical power coefficient; may be negative at high λ.
///
/// Restricted to λ ∈ (0, 20].
pub fn power_coefficient(tsr: f64, pitch: f64, coeffs: &CpCoefficients) -> Result<f64> {
    if !(tsr > 0.0 && tsr <= MAX_TIP_SPEED_RATIO) {
        return Err(VawtError::domain(
            "tip_speed_ratio",
            format!("{tsr} is outside the valid range (0, {MAX_TIP_SPEED_RATIO}]"),
        ));
    }
    let li = lambda_i(tsr, pitch)?;
    let CpCoefficients { c1, c2, c3, c4, c5, c6 } = *coeffs;
    Ok(c1 * (c2 / li - c3 * pitch - c4) * (-c5 / li).exp() + c6 * tsr)
}

/// Full operating-point evaluation with the default Cp coefficients.
pub fn performance(
    geom: &RotorGeometry,
    env: &Environment,
    op: &OperatingPoint,
) -> Result<PerformancePoint> {
    performance_with_coefficients(geom, env, op, &CpCoefficients::default())
}

pub fn performance_with_coefficients(
    geom: &RotorGeometry,
    env: &Environment,
    op: &OperatingPoint,
    coeffs: &CpCoefficients,
) -> Result<PerformancePoint> {
    geom.validate()?;
    env.validate()?;
    op.validate()?;

    let tsr = tip_speed_ratio(geom.radius, op.angular_speed, env.wind_speed)?;
    let area = swept_area(geom);
    let available = available_power(env, area);

    if op.angular_speed == 0.0 {
        return Ok(PerformancePoint {
            tip_speed_ratio: tsr,
            power_coefficient: 0.0,
            swept_area: area,
            available_power: available,
            mechanical_power: 0.0,
            shaft_torque: 0.0,
            cp_clamped: false,
            stationary: true,
        });
    }

    let cp = power_coefficient(tsr, op.pitch_angle, coeffs)?;
    let mechanical = available * cp.max(0.0);
    Ok(PerformancePoint {
        tip_speed_ratio: tsr,
        power_coefficient: cp,
        swept_area: area,
        available_power: available,
        mechanical_power: mechanical,
        shaft_torque: mechanical / op.angular_speed,
        cp_clamped: cp < 0.0,
        stationary: false,
    })
}

/// Shaft torque delivering `power` at `angular_speed`.
pub fn shaft_torque(power: f64, angular_speed: f64) -> Result<f64> {
    if !(angular_speed.is_finite() && angular_speed > 0.0) {
        return Err(VawtError::domain(
            "angular_speed",
            format!("torque is undefined at angular speed {angular_speed}"),
        ));
    }
    Ok(power / angular_speed)
}
