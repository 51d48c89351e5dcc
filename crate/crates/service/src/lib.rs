//! Stateless JSON-over-HTTP facade over `vawt-core`.
//!
//! Every response is an envelope `{inputs, result | error, warnings}`.
//! Handlers call library functions only; values are passed through
//! unrounded.

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Json, Query};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;
use vawt_core::{
    design_table, iso_power_locus, lambda_i, optimal_tip_speed_ratio, performance,
    power_coefficient, rpm_to_rad_per_s, solve_height, solve_radius, stepped_grid, sweep, Axis,
    CpCoefficients, DesignRequest, Environment, KnownDimension, OperatingPoint, RadiusSearch,
    RotorGeometry, SweepSpec, SweepVariable, VawtError, DEFAULT_AIR_DENSITY, DEFAULT_BLADE_COUNT,
};

/// Largest grid a single request may evaluate.
pub const MAX_GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    pub field: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiEnvelope {
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ApiError>,
}

#[derive(Debug)]
enum Failure {
    Model(VawtError),
    Malformed(String),
    TooLarge(String),
}

impl From<VawtError> for Failure {
    fn from(e: VawtError) -> Self {
        Failure::Model(e)
    }
}

struct Success {
    result: Value,
    warnings: Vec<String>,
}

impl Success {
    fn new(result: impl Serialize) -> Self {
        Success {
            result: serde_json::to_value(result).unwrap_or(Value::Null),
            warnings: Vec::new(),
        }
    }

    fn warn(mut self, warnings: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}

fn reply(inputs: Value, outcome: Result<Success, Failure>) -> Response {
    let (status, result, warnings, error) = match outcome {
        Ok(s) => (StatusCode::OK, Some(s.result), s.warnings, None),
        Err(failure) => {
            let (status, code, message, field) = match failure {
                Failure::Model(e) => (
                    StatusCode::UNPROCESSABLE_ENTITY,
                    e.code().to_owned(),
                    e.message().to_owned(),
                    e.field().map(str::to_owned),
                ),
                Failure::Malformed(m) => (StatusCode::BAD_REQUEST, "malformed_request".into(), m, None),
                Failure::TooLarge(m) => (StatusCode::PAYLOAD_TOO_LARGE, "payload_too_large".into(), m, None),
            };
            (status, None, Vec::new(), Some(ApiError { code, message, field }))
        }
    };
    let envelope = ApiEnvelope {
        inputs,
        result,
        warnings,
        error,
    };
    (status, Json(envelope)).into_response()
}

/// Runs `op` on a successfully parsed body, echoing the parsed request.
fn handle<T: Serialize>(
    body: Result<T, String>,
    op: impl FnOnce(&T) -> Result<Success, Failure>,
) -> Response {
    match body {
        Ok(req) => {
            let inputs = serde_json::to_value(&req).unwrap_or(Value::Null);
            reply(inputs, op(&req))
        }
        Err(message) => reply(Value::Null, Err(Failure::Malformed(message))),
    }
}

fn json_body<T>(body: Result<Json<T>, JsonRejection>) -> Result<T, String> {
    body.map(|Json(v)| v).map_err(|e| e.body_text())
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, String> {
    q.map(|Query(v)| v).map_err(|e| e.body_text())
}

fn default_air_density() -> f64 {
    DEFAULT_AIR_DENSITY
}

fn default_blade_count() -> u32 {
    DEFAULT_BLADE_COUNT
}

/// Exactly one of `angular_speed` (rad/s) and `rpm`.
fn angular_speed(omega: Option<f64>, rpm: Option<f64>) -> Result<f64, Failure> {
    match (omega, rpm) {
        (Some(w), None) => Ok(w),
        (None, Some(n)) => Ok(rpm_to_rad_per_s(n)),
        _ => Err(VawtError::validation("angular_speed", "give exactly one of angular_speed (rad/s) or rpm").into()),
    }
}

fn check_grid_size(field: &str, n: usize) -> Result<(), Failure> {
    if n > MAX_GRID_POINTS {
        Err(Failure::TooLarge(format!(
            "{field} has {n} points; at most {MAX_GRID_POINTS} are evaluated per request"
        )))
    } else {
        Ok(())
    }
}

/// An explicit list of values or an inclusive stepped range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { from: f64, to: f64, step: f64 },
}

impl Grid {
    fn values(&self, field: &str) -> Result<Vec<f64>, Failure> {
        let values = match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { from, to, step } => {
                let intervals = (to - from) / step;
                if intervals.is_finite() && intervals > MAX_GRID_POINTS as f64 {
                    return Err(Failure::TooLarge(format!(
                        "{field} spans more than {MAX_GRID_POINTS} points"
                    )));
                }
                stepped_grid(*from, *to, *step)?
            }
        };
        check_grid_size(field, values.len())?;
        Ok(values)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpQuery {
    pub tsr: f64,
    #[serde(default)]
    pub beta: f64,
}

async fn cp_handler(q: Result<Query<CpQuery>, QueryRejection>) -> Response {
    handle(query(q), |req| {
        let cp = power_coefficient(req.tsr, req.beta, &CpCoefficients::default())?;
        let li = lambda_i(req.tsr, req.beta)?;
        Ok(Success::new(json!({ "tsr": req.tsr, "beta": req.beta, "lambda_i": li, "cp": cp })))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerformanceRequest {
    pub radius: f64,
    #[serde(default)]
    pub height: f64,
    #[serde(default = "default_blade_count")]
    pub blade_count: u32,
    #[serde(default)]
    pub axis: Axis,
    pub wind_speed: f64,
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rpm: Option<f64>,
    #[serde(default)]
    pub beta: f64,
}

async fn performance_handler(body: Result<Json<PerformanceRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        let geom = RotorGeometry {
            radius: req.radius,
            height: req.height,
            blade_count: req.blade_count,
            axis: req.axis,
        };
        let env = Environment::new(req.wind_speed).with_air_density(req.air_density);
        let op = OperatingPoint::new(angular_speed(req.angular_speed, req.rpm)?).with_pitch(req.beta);
        let point = performance(&geom, &env, &op)?;
        let mut warnings = geom.validate()?;
        if point.cp_clamped {
            warnings.push(format!(
                "raw power coefficient {} is negative; mechanical power clamped to 0",
                point.power_coefficient
            ));
        }
        Ok(Success::new(point).warn(warnings))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveHeightRequest {
    pub target_power: f64,
    pub radius: f64,
    pub wind_speed: f64,
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rpm: Option<f64>,
    #[serde(default)]
    pub beta: f64,
}

async fn solve_height_handler(body: Result<Json<SolveHeightRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        let env = Environment::new(req.wind_speed).with_air_density(req.air_density);
        let omega = angular_speed(req.angular_speed, req.rpm)?;
        let design = DesignRequest::new(req.target_power, env, KnownDimension::Radius(req.radius), omega)
            .with_pitch(req.beta);
        Ok(Success::new(solve_height(&design)?))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRadiusRequest {
    pub target_power: f64,
    pub height: f64,
    pub wind_speed: f64,
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rpm: Option<f64>,
    #[serde(default)]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
}

async fn solve_radius_handler(body: Result<Json<SolveRadiusRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        let defaults = RadiusSearch::default();
        let search = RadiusSearch {
            min_radius: req.min_radius.unwrap_or(defaults.min_radius),
            max_radius: req.max_radius.unwrap_or(defaults.max_radius),
            grid_points: req.grid_points.unwrap_or(defaults.grid_points),
            ..defaults
        };
        check_grid_size("grid_points", search.grid_points)?;
        let env = Environment::new(req.wind_speed).with_air_density(req.air_density);
        let omega = angular_speed(req.angular_speed, req.rpm)?;
        let design = DesignRequest::new(req.target_power, env, KnownDimension::Height(req.height), omega)
            .with_pitch(req.beta);
        let op = OperatingPoint::new(omega).with_pitch(req.beta);
        let roots = solve_radius(&design, &search)?
            .into_iter()
            .map(|r| {
                let p = performance(&RotorGeometry::vertical(r, req.height), &env, &op)?;
                Ok(json!({
                    "radius": r,
                    "tip_speed_ratio": p.tip_speed_ratio,
                    "power_coefficient": p.power_coefficient,
                    "mechanical_power": p.mechanical_power,
                }))
            })
            .collect::<Result<Vec<_>, VawtError>>()?;
        Ok(Success::new(json!({ "roots": roots })))
    })
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimumRequest {
    #[serde(default)]
    pub beta: f64,
}

fn optimum(req: &OptimumRequest) -> Result<Success, Failure> {
    Ok(Success::new(optimal_tip_speed_ratio(req.beta)?))
}

async fn optimum_get(q: Result<Query<OptimumRequest>, QueryRejection>) -> Response {
    handle(query(q), optimum)
}

async fn optimum_post(body: Result<Json<OptimumRequest>, JsonRejection>) -> Response {
    handle(json_body(body), optimum)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRequest {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    #[serde(default)]
    pub radius: f64,
    #[serde(default)]
    pub height: f64,
    #[serde(default = "default_blade_count")]
    pub blade_count: u32,
    #[serde(default)]
    pub axis: Axis,
    #[serde(default)]
    pub wind_speed: f64,
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rpm: Option<f64>,
    #[serde(default)]
    pub beta: f64,
}

async fn sweep_handler(body: Result<Json<SweepRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        check_grid_size("steps", req.steps)?;
        let omega = match (req.angular_speed, req.rpm) {
            (None, None) => 0.0,
            (w, n) => angular_speed(w, n)?,
        };
        let spec = SweepSpec {
            variable: req.variable,
            from: req.from,
            to: req.to,
            steps: req.steps,
            geometry: RotorGeometry {
                radius: req.radius,
                height: req.height,
                blade_count: req.blade_count,
                axis: req.axis,
            },
            environment: Environment::new(req.wind_speed).with_air_density(req.air_density),
            operating_point: OperatingPoint::new(omega).with_pitch(req.beta),
            coefficients: CpCoefficients::default(),
        };
        let rows = sweep(&spec)?;
        let flagged = rows.iter().filter(|r| r.flag.is_some()).count();
        let mut warnings = Vec::new();
        if flagged > 0 {
            warnings.push(format!("{flagged} grid points are outside the model domain and report zero power"));
        }
        Ok(Success::new(json!({ "rows": rows })).warn(warnings))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusRequest {
    pub target_power: f64,
    pub wind_speed: f64,
    #[serde(default = "default_air_density")]
    pub air_density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rpm: Option<f64>,
    #[serde(default)]
    pub beta: f64,
    pub radii: Grid,
}

async fn locus_handler(body: Result<Json<LocusRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        let radii = req.radii.values("radii")?;
        let env = Environment::new(req.wind_speed).with_air_density(req.air_density);
        let omega = angular_speed(req.angular_speed, req.rpm)?;
        let locus = iso_power_locus(req.target_power, &env, omega, req.beta, &radii)?;
        let warnings = locus
            .skipped
            .iter()
            .map(|s| format!("radius {} skipped: {}", s.radius, s.reason))
            .collect::<Vec<_>>();
        Ok(Success::new(json!({
            "points": locus.points,
            "skipped": locus.skipped,
            "minimum": locus.minimum(),
        }))
        .warn(warnings))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRequest {
    pub target_power: f64,
    pub tip_speed: f64,
    pub sizing_constant: f64,
    pub diameters: Grid,
}

async fn table_handler(body: Result<Json<TableRequest>, JsonRejection>) -> Response {
    handle(json_body(body), |req| {
        let diameters = req.diameters.values("diameters")?;
        let rows = design_table(req.target_power, req.tip_speed, req.sizing_constant, &diameters)?;
        Ok(Success::new(json!({ "rows": rows })).warn([
            "torque_paper_units is power divided by speed in rpm; torque_si is the shaft torque in N·m".to_owned(),
        ]))
    })
}

async fn healthz() -> Response {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") })).into_response()
}

async fn not_found() -> Response {
    let envelope = ApiEnvelope {
        inputs: Value::Null,
        result: None,
        warnings: Vec::new(),
        error: Some(ApiError {
            code: "not_found".into(),
            message: "no such route".into(),
            field: None,
        }),
    };
    (StatusCode::NOT_FOUND, Json(envelope)).into_response()
}

/// All routes, without CORS.
pub fn routes() -> Router {
    let api = Router::new()
        .route("/cp", get(cp_handler))
        .route("/performance", post(performance_handler))
        .route("/solve/height", post(solve_height_handler))
        .route("/solve/radius", post(solve_radius_handler))
        .route("/optimum", get(optimum_get).post(optimum_post))
        .route("/sweep", post(sweep_handler))
        .route("/locus", post(locus_handler))
        .route("/table", post(table_handler));
    Router::new()
        .route("/healthz", get(healthz))
        .nest("/api/v1", api)
        .fallback(not_found)
}

/// Routes with CORS for the given origins. An empty list disables CORS.
pub fn router(cors_origins: &[String]) -> Result<Router, String> {
    if cors_origins.is_empty() {
        return Ok(routes());
    }
    let origins = cors_origins
        .iter()
        .map(|o| HeaderValue::from_str(o).map_err(|e| format!("invalid CORS origin '{o}': {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let cors = CorsLayer::new()
        .allow_origin(origins)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    Ok(routes().layer(cors))
}
