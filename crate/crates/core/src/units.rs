//! Rotational speed conversions.

use std::f64::consts::PI;

const RAD_PER_S_PER_RPM: f64 = 2.0 * PI / 60.0;

/// Revolutions per minute to radians per second.
pub fn rpm_to_rad_per_s(rpm: f64) -> f64 {
    rpm * RAD_PER_S_PER_RPM
}

/// Radians per second to revolutions per minute.
pub fn rad_per_s_to_rpm(rad_per_s: f64) -> f64 {
    rad_per_s * 60.0 / (2.0 * PI)
}
