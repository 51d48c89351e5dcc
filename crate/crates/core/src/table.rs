//! Fixed-tip-speed design table over a list of rotor diameters.
//!
//! Each row keeps the blade tip speed constant and holds `height · radius`
//! at a fixed sizing constant. The `torque_paper_units` column is target
//! power divided by speed in rpm, which is not a torque in N·m; it is kept
//! for comparison with published tables. `torque_si` is the real shaft
//! torque.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};
use crate::units::{rad_per_s_to_rpm, rpm_to_rad_per_s};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignTableRow {
    pub diameter: f64,
    pub radius: f64,
    pub speed_rpm: f64,
    pub height: f64,
    pub torque_paper_units: f64,
    pub torque_si: f64,
}

pub fn design_table(
    target_power: f64,
    tip_speed: f64,
    sizing_constant: f64,
    diameters: &[f64],
) -> Result<Vec<DesignTableRow>> {
    require_positive("target_power", target_power)?;
    require_positive("tip_speed", tip_speed)?;
    require_positive("sizing_constant", sizing_constant)?;
    diameters
        .iter()
        .map(|&diameter| {
            require_positive("diameter", diameter)?;
            let radius = diameter / 2.0;
            let speed_rpm = rad_per_s_to_rpm(tip_speed / radius);
            Ok(DesignTableRow {
                diameter,
                radius,
                speed_rpm,
                height: sizing_constant / radius,
                torque_paper_units: target_power / speed_rpm,
                torque_si: target_power / rpm_to_rad_per_s(speed_rpm),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_rows() {
        let rows = design_table(3500.0, 15.0, 3.45535, &[1.0, 1.2, 1.7]).unwrap();
        let expected = [
            (0.5, 286.4789, 6.9107, 12.2173),
            (0.6, 238.7324, 5.7589, 14.6608),
            (0.85, 168.517, 4.0651, 20.7694),
        ];
        for (row, (r, rpm, h, t)) in rows.iter().zip(expected) {
            assert_eq!(row.radius, r);
            assert!((row.speed_rpm - rpm).abs() < 1e-3, "{row:?}");
            assert!((row.height - h).abs() < 1e-4, "{row:?}");
            assert!((row.torque_paper_units - t).abs() < 1e-4, "{row:?}");
        }
        assert!((rows[0].torque_si - 3500.0 / 30.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(design_table(0.0, 15.0, 1.0, &[1.0]).is_err());
        assert!(design_table(1.0, 15.0, 1.0, &[1.0, -1.0]).is_err());
        assert!(design_table(1.0, 15.0, 1.0, &[]).unwrap().is_empty());
    }
}
