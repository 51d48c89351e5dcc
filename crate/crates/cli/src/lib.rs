//! `vawt` command-line front end.
//!
//! [`run`] parses an argument vector, dispatches to `vawt-core` and returns
//! the exit code together with the stdout document and stderr diagnostics,
//! so the binary and tests share one code path.

pub mod format;

use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use vawt_core::{
    design_table, iso_power_locus, lambda_i, optimal_tip_speed_ratio, performance,
    power_coefficient, rpm_to_rad_per_s, solve_height, solve_radius, stepped_grid, sweep, Axis, CpCoefficients,
    DesignRequest, Environment, KnownDimension, OperatingPoint, RadiusSearch, RotorGeometry,
    SweepSpec, SweepVariable, VawtError, DEFAULT_AIR_DENSITY, DEFAULT_BLADE_COUNT,
    DEFAULT_PITCH_DEG,
};

pub use format::{format_sig, round_sig, Cell, Document, Format};

pub const DEFAULT_PRECISION: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "vawt", version, about = "Vertical-axis wind turbine design toolbox")]
#[command(allow_negative_numbers = true, propagate_version = true)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits for numeric fields
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION,
          value_parser = parse_precision)]
    pub precision: usize,

    /// Air density, kg/m³
    #[arg(long, global = true, default_value_t = DEFAULT_AIR_DENSITY)]
    pub rho: f64,

    /// Blade pitch angle, degrees
    #[arg(long, global = true, default_value_t = DEFAULT_PITCH_DEG)]
    pub beta: f64,

    /// Print the default model parameters and exit
    #[arg(long)]
    pub show_defaults: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power coefficient at a tip-speed ratio
    Cp {
        #[arg(long)]
        tsr: f64,
    },
    /// Performance of a rotor at one operating point
    Power {
        #[command(flatten)]
        rotor: RotorArgs,
        #[command(flatten)]
        speed: Speed,
        /// Wind speed, m/s
        #[arg(long)]
        wind: f64,
    },
    /// Solve for a rotor dimension delivering a target power
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Tip-speed ratio maximizing the power coefficient
    Optimum,
    /// Evaluate performance over a one-dimensional grid
    Sweep(SweepArgs),
    /// Heights delivering a target power over a radius grid
    Locus {
        /// Target mechanical power, W
        #[arg(long)]
        power: f64,
        #[command(flatten)]
        speed: Speed,
        #[arg(long)]
        wind: f64,
        /// Radius grid, from:to:step in m
        #[arg(long)]
        radii: Range,
    },
    /// Fixed-tip-speed design table over diameters
    Table {
        #[arg(long)]
        power: f64,
        /// Blade tip speed, m/s
        #[arg(long)]
        tip_speed: f64,
        /// Height × radius, m²
        #[arg(long)]
        sizing_constant: f64,
        /// Diameter grid, from:to:step in m
        #[arg(long)]
        dia: Range,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Height for a known radius
    Height {
        #[arg(long)]
        power: f64,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        speed: Speed,
        #[arg(long)]
        wind: f64,
    },
    /// Radii for a known height
    Radius {
        #[arg(long)]
        power: f64,
        #[arg(long)]
        height: f64,
        #[command(flatten)]
        speed: Speed,
        #[arg(long)]
        wind: f64,
        #[arg(long, default_value_t = 0.01)]
        r_min: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
pub struct RotorArgs {
    /// Rotor radius, m
    #[arg(long)]
    pub radius: f64,
    /// Rotor height, m (vertical axis only)
    #[arg(long, default_value_t = 0.0)]
    pub height: f64,
    #[arg(long, default_value_t = DEFAULT_BLADE_COUNT)]
    pub blades: u32,
    #[arg(long, value_enum, default_value_t = AxisArg::Vertical)]
    pub axis: AxisArg,
}

impl RotorArgs {
    fn geometry(&self) -> RotorGeometry {
        RotorGeometry {
            radius: self.radius,
            height: self.height,
            blade_count: self.blades,
            axis: self.axis.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Vertical,
    Horizontal,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Vertical => Axis::Vertical,
            AxisArg::Horizontal => Axis::Horizontal,
        }
    }
}

/// Rotor speed, given either in rad/s or rpm.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Speed {
    /// Angular speed, rad/s
    #[arg(long)]
    pub omega: Option<f64>,
    /// Rotor speed, rpm
    #[arg(long)]
    pub rpm: Option<f64>,
}

impl Speed {
    fn rad_per_s(&self) -> f64 {
        match (self.omega, self.rpm) {
            (Some(w), _) => w,
            (None, Some(n)) => rpm_to_rad_per_s(n),
            (None, None) => 0.0,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept variable
    #[arg(long = "var", value_enum)]
    pub variable: SweepVar,
    /// Grid as from:to:step
    #[arg(long, conflicts_with_all = ["from", "to", "steps"], required_unless_present_all = ["from", "to", "steps"])]
    pub range: Option<Range>,
    #[arg(long, requires_all = ["to", "steps"])]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points including both endpoints
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.0)]
    pub height: f64,
    #[arg(long, default_value_t = DEFAULT_BLADE_COUNT)]
    pub blades: u32,
    #[arg(long, value_enum, default_value_t = AxisArg::Vertical)]
    pub axis: AxisArg,
    #[arg(long, conflicts_with = "rpm")]
    pub omega: Option<f64>,
    #[arg(long)]
    pub rpm: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub wind: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Omega,
    Radius,
    Height,
    Wind,
    Tsr,
}

impl From<SweepVar> for SweepVariable {
    fn from(v: SweepVar) -> Self {
        match v {
            SweepVar::Omega => SweepVariable::AngularSpeed,
            SweepVar::Radius => SweepVariable::Radius,
            SweepVar::Height => SweepVariable::Height,
            SweepVar::Wind => SweepVariable::WindSpeed,
            SweepVar::Tsr => SweepVariable::TipSpeedRatio,
        }
    }
}

fn parse_precision(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (1..=17).contains(&n) => Ok(n),
        _ => Err(format!("precision must be an integer in 1..=17, got '{s}'")),
    }
}

/// Inclusive grid `from:to:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        stepped_grid(self.from, self.to, self.step).unwrap_or_default()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [from, to, step] = parts.as_slice() else {
            return Err(format!("expected from:to:step, got '{s}'"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let range = Range {
            from: num(from)?,
            to: num(to)?,
            step: num(step)?,
        };
        stepped_grid(range.from, range.to, range.step).map_err(|e| e.message().to_owned())?;
        Ok(range)
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Model(VawtError),
    Usage(String),
    Internal(String),
}

impl From<VawtError> for Failure {
    fn from(e: VawtError) -> Self {
        Failure::Model(e)
    }
}

fn error_line(code: &str, message: &str, field: Option<&str>) -> String {
    let mut line = json!({ "code": code, "message": message, "field": field }).to_string();
    line.push('\n');
    line
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: err.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let message = err.to_string();
                    let summary = message
                        .lines()
                        .map(str::trim)
                        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                        .filter(|l| !l.is_empty())
                        .collect::<Vec<_>>()
                        .join(" ");
                    let first = summary.strip_prefix("error: ").unwrap_or(&summary);
                    Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: error_line("usage_error", first, None),
                    }
                }
            };
        }
    };

    let outcome = execute(&cli).and_then(|doc| {
        doc.render(cli.format, cli.precision).map_err(Failure::Internal)
    });
    match outcome {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Model(e)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: error_line(e.code(), e.message(), e.field()),
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: error_line("usage_error", &m, None),
        },
        Err(Failure::Internal(m)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: error_line("internal_error", &m, None),
        },
    }
}

fn execute(cli: &Cli) -> Result<Document, Failure> {
    if cli.show_defaults {
        return Ok(defaults_document());
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Usage("a subcommand is required (see --help)".into()));
    };
    let rho = cli.rho;
    let beta = cli.beta;
    let doc = match command {
        Command::Cp { tsr } => {
            let coeffs = CpCoefficients::default();
            let cp = power_coefficient(*tsr, beta, &coeffs)?;
            let li = lambda_i(*tsr, beta)?;
            Document::single(
                vec!["tsr", "beta", "lambda_i", "cp"],
                vec![(*tsr).into(), beta.into(), li.into(), cp.into()],
            )
            .with_inputs(vec![("tsr", (*tsr).into()), ("beta", beta.into())])
        }
        Command::Power { rotor, speed, wind } => {
            let geom = rotor.geometry();
            let env = Environment::new(*wind).with_air_density(rho);
            let omega = speed.rad_per_s();
            let op = OperatingPoint::new(omega).with_pitch(beta);
            let p = performance(&geom, &env, &op)?;
            let mut doc = Document::single(
                vec![
                    "tsr",
                    "cp",
                    "cp_clamped",
                    "stationary",
                    "swept_area",
                    "available_power",
                    "mechanical_power",
                    "shaft_torque",
                ],
                vec![
                    p.tip_speed_ratio.into(),
                    p.power_coefficient.into(),
                    p.cp_clamped.into(),
                    p.stationary.into(),
                    p.swept_area.into(),
                    p.available_power.into(),
                    p.mechanical_power.into(),
                    p.shaft_torque.into(),
                ],
            )
            .with_inputs(vec![
                ("radius", geom.radius.into()),
                ("height", geom.height.into()),
                ("blades", Cell::Int(geom.blade_count.into())),
                ("axis", if geom.axis == Axis::Vertical { "vertical" } else { "horizontal" }.into()),
                ("omega", omega.into()),
                ("wind", (*wind).into()),
                ("rho", rho.into()),
                ("beta", beta.into()),
            ]);
            doc.warnings = geom.validate()?;
            if p.cp_clamped {
                doc.warnings.push(format!(
                    "raw power coefficient {} is negative; mechanical power clamped to 0",
                    p.power_coefficient
                ));
            }
            doc
        }
        Command::Solve(SolveCommand::Height { power, radius, speed, wind }) => {
            let omega = speed.rad_per_s();
            let env = Environment::new(*wind).with_air_density(rho);
            let req = DesignRequest::new(*power, env, KnownDimension::Radius(*radius), omega)
                .with_pitch(beta);
            let sol = solve_height(&req)?;
            Document::single(
                vec!["height", "tsr", "cp"],
                vec![sol.height.into(), sol.tip_speed_ratio.into(), sol.power_coefficient.into()],
            )
            .with_inputs(vec![
                ("power", (*power).into()),
                ("radius", (*radius).into()),
                ("omega", omega.into()),
                ("wind", (*wind).into()),
                ("rho", rho.into()),
                ("beta", beta.into()),
            ])
        }
        Command::Solve(SolveCommand::Radius { power, height, speed, wind, r_min, r_max, grid }) => {
            let omega = speed.rad_per_s();
            let env = Environment::new(*wind).with_air_density(rho);
            let req = DesignRequest::new(*power, env, KnownDimension::Height(*height), omega)
                .with_pitch(beta);
            let search = RadiusSearch {
                min_radius: *r_min,
                max_radius: *r_max,
                grid_points: *grid,
                ..Default::default()
            };
            let roots = solve_radius(&req, &search)?;
            let op = OperatingPoint::new(omega).with_pitch(beta);
            let rows = roots
                .iter()
                .map(|&r| {
                    let p = performance(&RotorGeometry::vertical(r, *height), &env, &op)?;
                    Ok(vec![
                        r.into(),
                        p.tip_speed_ratio.into(),
                        p.power_coefficient.into(),
                        p.mechanical_power.into(),
                    ])
                })
                .collect::<Result<Vec<_>, VawtError>>()?;
            Document::table(vec!["radius", "tsr", "cp", "mechanical_power"], rows).with_inputs(vec![
                ("power", (*power).into()),
                ("height", (*height).into()),
                ("omega", omega.into()),
                ("wind", (*wind).into()),
                ("rho", rho.into()),
                ("beta", beta.into()),
            ])
        }
        Command::Optimum => {
            let opt = optimal_tip_speed_ratio(beta)?;
            Document::single(
                vec!["tsr", "cp"],
                vec![opt.tip_speed_ratio.into(), opt.power_coefficient.into()],
            )
            .with_inputs(vec![("beta", beta.into())])
        }
        Command::Sweep(args) => sweep_document(args, rho, beta)?,
        Command::Locus { power, speed, wind, radii } => {
            let omega = speed.rad_per_s();
            let env = Environment::new(*wind).with_air_density(rho);
            let locus = iso_power_locus(*power, &env, omega, beta, &radii.values())?;
            let min_radius = locus.minimum().map(|p| p.radius);
            let rows = locus
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.radius.into(),
                        p.height.into(),
                        p.tip_speed_ratio.into(),
                        p.power_coefficient.into(),
                        (Some(p.radius) == min_radius).into(),
                    ]
                })
                .collect();
            let mut doc = Document::table(vec!["radius", "height", "tsr", "cp", "is_minimum"], rows)
                .with_inputs(vec![
                    ("power", (*power).into()),
                    ("omega", omega.into()),
                    ("wind", (*wind).into()),
                    ("rho", rho.into()),
                    ("beta", beta.into()),
                ]);
            doc.warnings = locus
                .skipped
                .iter()
                .map(|s| format!("radius {} skipped: {}", s.radius, s.reason))
                .collect();
            doc
        }
        Command::Table { power, tip_speed, sizing_constant, dia } => {
            let rows = design_table(*power, *tip_speed, *sizing_constant, &dia.values())?
                .into_iter()
                .map(|r| {
                    vec![
                        r.diameter.into(),
                        r.radius.into(),
                        r.speed_rpm.into(),
                        r.height.into(),
                        r.torque_paper_units.into(),
                        r.torque_si.into(),
                    ]
                })
                .collect();
            let mut doc = Document::table(
                vec!["diameter", "radius", "speed_rpm", "height", "torque_paper_units", "torque_si"],
                rows,
            )
            .with_inputs(vec![
                ("power", (*power).into()),
                ("tip_speed", (*tip_speed).into()),
                ("sizing_constant", (*sizing_constant).into()),
            ]);
            doc.warnings.push(
                "torque_paper_units is power divided by speed in rpm; torque_si is the shaft torque in N·m".into(),
            );
            doc
        }
    };
    Ok(doc)
}

fn sweep_document(args: &SweepArgs, rho: f64, beta: f64) -> Result<Document, Failure> {
    let (from, to, steps) = match (args.range, args.from, args.to, args.steps) {
        (Some(r), ..) => {
            let values = r.values();
            (r.from, *values.last().unwrap_or(&r.from), values.len())
        }
        (None, Some(f), Some(t), Some(n)) => (f, t, n),
        _ => return Err(Failure::Usage("sweep needs --range or --from/--to/--steps".into())),
    };
    let omega = match (args.omega, args.rpm) {
        (Some(w), _) => w,
        (None, Some(n)) => rpm_to_rad_per_s(n),
        (None, None) => 0.0,
    };
    let spec = SweepSpec {
        variable: args.variable.into(),
        from,
        to,
        steps,
        geometry: RotorGeometry {
            radius: args.radius,
            height: args.height,
            blade_count: args.blades,
            axis: args.axis.into(),
        },
        environment: Environment::new(args.wind).with_air_density(rho),
        operating_point: OperatingPoint::new(omega).with_pitch(beta),
        coefficients: CpCoefficients::default(),
    };
    let rows = sweep(&spec)?;
    let flagged = rows.iter().filter(|r| r.flag.is_some()).count();
    let clamped = rows.iter().filter(|r| r.point.cp_clamped).count();
    let table = rows
        .into_iter()
        .map(|r| {
            vec![
                r.value.into(),
                r.point.tip_speed_ratio.into(),
                r.point.power_coefficient.into(),
                r.point.cp_clamped.into(),
                r.point.stationary.into(),
                r.point.swept_area.into(),
                r.point.mechanical_power.into(),
                r.point.shaft_torque.into(),
                r.flag.into(),
            ]
        })
        .collect();
    let mut doc = Document::table(
        vec![
            "value",
            "tsr",
            "cp",
            "cp_clamped",
            "stationary",
            "swept_area",
            "mechanical_power",
            "shaft_torque",
            "flag",
        ],
        table,
    )
    .with_inputs(vec![
        ("var", args.variable.to_possible_value().map_or(String::new(), |v| v.get_name().to_owned()).as_str().into()),
        ("from", from.into()),
        ("to", to.into()),
        ("steps", Cell::Int(steps as i64)),
        ("radius", args.radius.into()),
        ("height", args.height.into()),
        ("omega", omega.into()),
        ("wind", args.wind.into()),
        ("rho", rho.into()),
        ("beta", beta.into()),
    ]);
    if flagged > 0 {
        doc.warnings.push(format!("{flagged} grid points are outside the model domain and report zero power"));
    }
    if clamped > 0 {
        doc.warnings.push(format!("{clamped} grid points have negative raw Cp clamped to zero power"));
    }
    if spec.variable != SweepVariable::Radius {
        doc.warnings.extend(spec.geometry.validate().unwrap_or_default());
    }
    Ok(doc)
}

fn defaults_document() -> Document {
    let c = CpCoefficients::default();
    Document::single(
        vec!["rho", "beta", "blades", "precision", "format", "c1", "c2", "c3", "c4", "c5", "c6"],
        vec![
            DEFAULT_AIR_DENSITY.into(),
            DEFAULT_PITCH_DEG.into(),
            Cell::Int(DEFAULT_BLADE_COUNT.into()),
            Cell::Int(DEFAULT_PRECISION as i64),
            "csv".into(),
            c.c1.into(),
            c.c2.into(),
            c.c3.into(),
            c.c4.into(),
            c.c5.into(),
            c.c6.into(),
        ],
    )
}
