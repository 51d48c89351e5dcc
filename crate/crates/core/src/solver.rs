//! Inverse design: rotor height or radius for a target mechanical power, and
//! the tip-speed ratio maximizing the power coefficient.

use serde::{Deserialize, Serialize};

use crate::aero::{
    performance_with_coefficients, power_coefficient, tip_speed_ratio, CpCoefficients,
    Environment, OperatingPoint, RotorGeometry, DEFAULT_PITCH_DEG,
};
use crate::error::{require_non_negative, require_positive, Result, VawtError};
use crate::exec::Execution;
use crate::search::{bisect, golden_section_max};

/// The rotor dimension held fixed while solving for the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnownDimension {
    Radius(f64),
    Height(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRequest {
    /// W
    pub target_power: f64,
    pub environment: Environment,
    pub known: KnownDimension,
    /// rad/s
    pub angular_speed: f64,
    /// degrees
    pub pitch: f64,
    pub coefficients: CpCoefficients,
}

impl DesignRequest {
    pub fn new(
        target_power: f64,
        environment: Environment,
        known: KnownDimension,
        angular_speed: f64,
    ) -> Self {
        DesignRequest {
            target_power,
            environment,
            known,
            angular_speed,
            pitch: DEFAULT_PITCH_DEG,
            coefficients: CpCoefficients::default(),
        }
    }

    pub fn with_pitch(mut self, pitch: f64) -> Self {
        self.pitch = pitch;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("target_power", self.target_power)?;
        self.environment.validate()?;
        require_non_negative("angular_speed", self.angular_speed)?;
        require_non_negative("pitch_angle", self.pitch)?;
        match self.known {
            KnownDimension::Radius(r) => require_positive("radius", r),
            KnownDimension::Height(h) => require_positive("height", h),
        }
    }

    fn operating_point(&self) -> OperatingPoint {
        OperatingPoint::new(self.angular_speed).with_pitch(self.pitch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightSolution {
    /// m
    pub height: f64,
    pub tip_speed_ratio: f64,
    pub power_coefficient: f64,
}

/// Height of a vertical-axis rotor of known radius that delivers the target
/// power: H = P / (ρ·R·V³·Cp).
pub fn solve_height(req: &DesignRequest) -> Result<HeightSolution> {
    req.validate()?;
    let radius = match req.known {
        KnownDimension::Radius(r) => r,
        KnownDimension::Height(_) => {
            return Err(VawtError::validation("radius", "height solver needs a known radius"))
        }
    };
    let env = &req.environment;
    let tsr = tip_speed_ratio(radius, req.angular_speed, env.wind_speed)?;
    if tsr == 0.0 {
        return Err(VawtError::infeasible(
            "a stationary rotor (tip-speed ratio 0) produces no power",
        ));
    }
    let cp = power_coefficient(tsr, req.pitch, &req.coefficients)?;
    if cp <= 0.0 {
        return Err(VawtError::infeasible(format!(
            "power coefficient {cp:.6} at tip-speed ratio {tsr:.6} is not positive; no height reaches the target"
        )));
    }
    let v = env.wind_speed;
    let height = req.target_power / (env.air_density * radius * v * v * v * cp);
    Ok(HeightSolution {
        height,
        tip_speed_ratio: tsr,
        power_coefficient: cp,
    })
}

/// Bracket and tolerances for [`solve_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSearch {
    /// m
    pub min_radius: f64,
    /// m
    pub max_radius: f64,
    pub grid_points: usize,
    /// bracket width at which bisection may stop, m
    pub radius_tol: f64,
    /// residual at which bisection may stop, relative to the target
    pub power_rtol: f64,
    pub execution: Execution,
}

impl Default for RadiusSearch {
    fn default() -> Self {
        RadiusSearch {
            min_radius: 0.01,
            max_radius: 10.0,
            grid_points: 1000,
            radius_tol: 1e-6,
            power_rtol: 1e-9,
            execution: Execution::default(),
        }
    }
}

impl RadiusSearch {
    fn validate(&self) -> Result<()> {
        require_positive("min_radius", self.min_radius)?;
        require_positive("max_radius", self.max_radius)?;
        if self.min_radius >= self.max_radius {
            return Err(VawtError::validation("min_radius", "must be below max_radius"));
        }
        if self.grid_points < 2 {
            return Err(VawtError::validation("grid_points", "need at least 2 grid points"));
        }
        require_positive("radius_tol", self.radius_tol)?;
        require_positive("power_rtol", self.power_rtol)
    }
}

/// All radii in the search bracket at which a vertical-axis rotor of known
/// height delivers the target power, ascending.
///
/// Power is non-monotonic in radius, so zero, one or two roots are typical.
/// The bracket is scanned on a uniform grid for sign changes of
/// `P(R) − P_target`; grid cells holding a local maximum that stays below the
/// target are refined with a golden-section search so that a narrow pair of
/// roots near the optimum is not missed. Each bracket is then bisected.
pub fn solve_radius(req: &DesignRequest, search: &RadiusSearch) -> Result<Vec<f64>> {
    req.validate()?;
    search.validate()?;
    let height = match req.known {
        KnownDimension::Height(h) => h,
        KnownDimension::Radius(_) => {
            return Err(VawtError::validation("height", "radius solver needs a known height"))
        }
    };
    let env = req.environment;
    let op = req.operating_point();
    let coeffs = req.coefficients;
    let target = req.target_power;
    // Outside the Cp domain the rotor is treated as producing nothing.
    let power = move |r: f64| {
        performance_with_coefficients(&RotorGeometry::vertical(r, height), &env, &op, &coeffs)
            .map(|p| p.mechanical_power)
            .unwrap_or(0.0)
    };
    let residual = |r: f64| power(r) - target;

    let n = search.grid_points;
    let span = search.max_radius - search.min_radius;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                search.max_radius
            } else {
                search.min_radius + span * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let values = search.execution.map_slice(&grid, |&r| residual(r));

    let mut brackets = Vec::new();
    let mut roots = Vec::new();
    for i in 0..n {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < n && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            brackets.push((grid[i], grid[i + 1]));
        }
        if i > 0 && i + 1 < n {
            let (prev, here, next) = (values[i - 1], values[i], values[i + 1]);
            let is_peak = (here > prev && here >= next) || (here >= prev && here > next);
            if here < 0.0 && prev < 0.0 && next < 0.0 && is_peak {
                let (peak_r, peak_f) =
                    golden_section_max(residual, grid[i - 1], grid[i + 1], search.radius_tol * 1e-3);
                if peak_f > 0.0 {
                    brackets.push((grid[i - 1], peak_r));
                    brackets.push((peak_r, grid[i + 1]));
                } else if peak_f == 0.0 {
                    roots.push(peak_r);
                }
            }
        }
    }

    let f_tol = search.power_rtol * target;
    roots.extend(
        brackets
            .into_iter()
            .map(|(lo, hi)| bisect(residual, lo, hi, search.radius_tol, f_tol)),
    );
    roots.sort_by(f64::total_cmp);
    roots.dedup();

    if roots.is_empty() {
        let (best_i, _) = values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let lo = grid[best_i.saturating_sub(1)];
        let hi = grid[(best_i + 1).min(n - 1)];
        let (best_r, _) = golden_section_max(power, lo, hi, search.radius_tol);
        return Err(VawtError::infeasible(format!(
            "target {target} W is unreachable for radius in [{}, {}] m; maximum achievable power is {:.6} W at radius {:.6} m",
            search.min_radius,
            search.max_radius,
            power(best_r),
            best_r
        )));
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsrOptimum {
    pub tip_speed_ratio: f64,
    pub power_coefficient: f64,
}

const OPTIMUM_TSR_RANGE: (f64, f64) = (0.5, 15.0);

/// Tip-speed ratio in (0.5, 15] maximizing Cp at the given pitch.
pub fn optimal_tip_speed_ratio(pitch: f64) -> Result<TsrOptimum> {
    optimal_tip_speed_ratio_with_coefficients(pitch, &CpCoefficients::default())
}

pub fn optimal_tip_speed_ratio_with_coefficients(
    pitch: f64,
    coeffs: &CpCoefficients,
) -> Result<TsrOptimum> {
    require_non_negative("pitch_angle", pitch)?;
    // surface the domain error, if any, before searching
    power_coefficient(OPTIMUM_TSR_RANGE.1, pitch, coeffs)?;
    let (tsr, cp) = golden_section_max(
        |l| power_coefficient(l, pitch, coeffs).unwrap_or(f64::NEG_INFINITY),
        OPTIMUM_TSR_RANGE.0,
        OPTIMUM_TSR_RANGE.1,
        1e-6,
    );
    Ok(TsrOptimum {
        tip_speed_ratio: tsr,
        power_coefficient: cp,
    })
}
