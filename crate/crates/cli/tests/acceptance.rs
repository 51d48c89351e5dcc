//! Acceptance criteria. Each test writes one `[PASS]`/`[FAIL]` line to
//! stderr (unaffected by output capture) before asserting.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use axum::body::{to_bytes, Body};
use axum::http::{header, Request};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;
use vawt_cli::round_sig;
use vawt_core::*;

fn report(criterion: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] {criterion}: {detail}");
    assert!(pass, "{criterion}: {detail}");
}

fn within(actual: f64, expected: f64, abs_tol: f64) -> bool {
    (actual - expected).abs() <= abs_tol
}

fn rel_err(actual: f64, expected: f64) -> f64 {
    ((actual - expected) / expected).abs()
}

fn model_point() -> PerformancePoint {
    performance(
        &RotorGeometry::vertical(0.2, 0.3),
        &Environment::new(5.0).with_air_density(1.225),
        &OperatingPoint::new(73.3).with_pitch(0.0),
    )
    .unwrap()
}

#[test]
fn worked_model() {
    let start = Instant::now();
    let p = model_point();
    let elapsed = start.elapsed();
    let pass = within(p.tip_speed_ratio, 2.932, 0.001)
        && within(p.power_coefficient, 0.0455, 0.001)
        && rel_err(p.mechanical_power, 0.4177) <= 0.01
        && rel_err(p.shaft_torque, 0.0057) <= 0.02;
    report(
        "worked model (R=0.2, H=0.3, ω=73.3, V=5)",
        pass,
        format!(
            "λ={:.4} Cp={:.5} Pm={:.5} W Tm={:.6} N·m in {elapsed:?}",
            p.tip_speed_ratio, p.power_coefficient, p.mechanical_power, p.shaft_torque
        ),
    );
}

const PUBLISHED_TABLE: [(f64, f64, f64, f64, f64); 8] = [
    (1.0, 0.5, 286.4789, 6.9107, 12.2173),
    (1.1, 0.55, 260.4354, 6.2825, 13.439),
    (1.2, 0.6, 238.7324, 5.7589, 14.6608),
    (1.3, 0.65, 220.3684, 5.3159, 15.8825),
    (1.4, 0.7, 204.6278, 4.9362, 17.1042),
    (1.5, 0.75, 190.9859, 4.6071, 18.326),
    (1.6, 0.8, 179.0493, 4.3192, 19.5477),
    (1.7, 0.85, 168.517, 4.0651, 20.7694),
];

fn table_diameters() -> Vec<f64> {
    stepped_grid(1.0, 1.7, 0.1).unwrap()
}

#[test]
fn design_table_regression() {
    let rows = design_table(3500.0, 15.0, 3.45535, &table_diameters()).unwrap();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut pass = rows.len() == PUBLISHED_TABLE.len();
    for (row, &(d, r, rpm, h, t)) in rows.iter().zip(&PUBLISHED_TABLE) {
        pass &= within(row.diameter, d, 1e-9) && within(row.radius, r, 1e-9);
        pass &= within(row.speed_rpm, rpm, 0.001);
        pass &= within(row.height, h, 0.0001);
        pass &= within(row.torque_paper_units, t, 0.0001);
        worst.0 = worst.0.max((row.speed_rpm - rpm).abs());
        worst.1 = worst.1.max((row.height - h).abs());
        worst.2 = worst.2.max((row.torque_paper_units - t).abs());
    }
    report(
        "design table reproduces all 8 published rows",
        pass,
        format!(
            "{} rows; max |Δspeed|={:.2e} rpm, |Δheight|={:.2e} m, |Δtorque|={:.2e}",
            rows.len(),
            worst.0,
            worst.1,
            worst.2
        ),
    );
}

#[test]
fn unit_conversion_anchor() {
    let w = rpm_to_rad_per_s(250.0);
    report("250 rpm → 26.18 rad/s", within(w, 26.18, 0.005), format!("{w:.6} rad/s"));
}

#[test]
fn betz_property() {
    let env = Environment::new(6.0).with_air_density(1.225);
    let area = 3.0;
    let available = available_power(&env, area);
    let steps = 100_000;
    let (mut best_ratio, mut best_frac) = (f64::NEG_INFINITY, 0.0);
    for i in 0..=steps {
        let frac = i as f64 / steps as f64;
        let ratio = actuator_power(&env, 6.0 * frac, area).unwrap() / available;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_frac = frac;
        }
    }
    let pass = within(best_ratio, 16.0 / 27.0, 1e-5) && within(best_frac, 1.0 / 3.0, 1e-3);
    report(
        "Betz limit by 1e5-step scan",
        pass,
        format!("max ratio {best_ratio:.8} (16/27 = {:.8}) at v_out/v_in = {best_frac:.5}", 16.0 / 27.0),
    );
}

#[test]
fn optimum_search() {
    let start = Instant::now();
    let opt = optimal_tip_speed_ratio(0.0).unwrap();
    let elapsed = start.elapsed();

    // independent grid-scan oracle
    let c = CpCoefficients::default();
    let mut oracle = (0.0, f64::NEG_INFINITY);
    let n = ((15.0 - 0.5) / 1e-4) as usize;
    for i in 0..=n {
        let tsr = 0.5 + i as f64 * 1e-4;
        let cp = power_coefficient(tsr, 0.0, &c).unwrap();
        if cp > oracle.1 {
            oracle = (tsr, cp);
        }
    }
    let pass = within(opt.tip_speed_ratio, 8.10, 0.05)
        && within(opt.power_coefficient, 0.480, 0.002)
        && within(opt.tip_speed_ratio, oracle.0, 1e-3)
        && within(opt.power_coefficient, oracle.1, 1e-6)
        && elapsed.as_secs_f64() < 1.0;
    report(
        "optimal tip-speed ratio at β=0",
        pass,
        format!(
            "λ*={:.5} Cp*={:.6}; grid oracle λ={:.4} Cp={:.6}; {elapsed:?}",
            opt.tip_speed_ratio, opt.power_coefficient, oracle.0, oracle.1
        ),
    );
}

#[test]
fn iso_power_locus_minimum() {
    let (v, omega) = (2.0, 26.18);
    let radii = stepped_grid(0.3, 1.2, 0.001).unwrap();
    let locus = iso_power_locus(3500.0, &Environment::new(v), omega, 0.0, &radii).unwrap();
    let min = *locus.minimum().unwrap();
    let i = locus.points.iter().position(|p| *p == min).unwrap();
    let unique = locus.points[..=i].windows(2).all(|w| w[1].height < w[0].height)
        && locus.points[i..].windows(2).all(|w| w[1].height > w[0].height);

    // brute-force argmax of R·Cp(Rω/V)
    let c = CpCoefficients::default();
    let brute = radii
        .iter()
        .filter_map(|&r| power_coefficient(r * omega / v, 0.0, &c).ok().map(|cp| (r, r * cp)))
        .fold((0.0, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best });

    let pass = unique && within(min.radius, 0.70, 0.02) && within(min.radius, brute.0, 1e-9);
    report(
        "iso-power locus minimum near R = 0.70 m",
        pass,
        format!(
            "minimum at R={:.3} m (H={:.1} m), brute-force argmax R={:.3} m, unique={unique}",
            min.radius, min.height, brute.0
        ),
    );
}

#[test]
fn solver_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let c = CpCoefficients::default();
    let start = Instant::now();
    let (mut worst_height, mut worst_radius) = (0.0f64, 0.0f64);
    let mut recovered = 0usize;
    let mut failures = Vec::new();
    let mut designs = 0;
    while designs < 1000 {
        let r = rng.random_range(0.1..1.0);
        let omega = rng.random_range(5.0..80.0);
        let v = rng.random_range(2.0..10.0);
        let tsr = r * omega / v;
        if tsr > MAX_TIP_SPEED_RATIO || power_coefficient(tsr, 0.0, &c).unwrap() <= 0.0 {
            continue;
        }
        designs += 1;
        let power = rng.random_range(1.0..5000.0);
        let env = Environment::new(v);
        let op = OperatingPoint::new(omega);

        let h = solve_height(&DesignRequest::new(power, env, KnownDimension::Radius(r), omega)).unwrap().height;
        let p = performance(&RotorGeometry::vertical(r, h), &env, &op).unwrap().mechanical_power;
        worst_height = worst_height.max(rel_err(p, power));

        let req = DesignRequest::new(power, env, KnownDimension::Height(h), omega);
        match solve_radius(&req, &RadiusSearch::default()) {
            Ok(roots) => {
                for &root in &roots {
                    let p = performance(&RotorGeometry::vertical(root, h), &env, &op).unwrap().mechanical_power;
                    worst_radius = worst_radius.max(rel_err(p, power));
                }
                if roots.iter().any(|&root| (root - r).abs() < 1e-4) {
                    recovered += 1;
                }
            }
            Err(e) => failures.push(format!("R={r} ω={omega} V={v}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_height <= 1e-9
        && worst_radius <= 1e-6
        && failures.is_empty()
        && recovered == designs
        && elapsed.as_secs_f64() < 5.0;
    report(
        "1000 randomized solver round trips",
        pass,
        format!(
            "height max rel err {worst_height:.2e}, radius max rel err {worst_radius:.2e}, \
             original radius recovered {recovered}/{designs}, failures {}, {elapsed:?}",
            failures.len()
        ),
    );
}

#[test]
fn property_cp_ceiling() {
    let c = CpCoefficients::default();
    let max = (1..=200)
        .map(|i| power_coefficient(i as f64 * 0.1, 0.0, &c).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    report("property: Cp ≤ 0.481 on λ ∈ {0.1..20}", max <= 0.481, format!("max Cp {max:.6}"));
}

#[test]
fn property_pitch_monotonicity() {
    let c = CpCoefficients::default();
    let pitches = [0.0, 2.0, 5.0, 10.0, 15.0, 20.0];
    let mut violations = Vec::new();
    for i in 0..=16 {
        let tsr = 2.0 + 0.5 * i as f64;
        for w in pitches.windows(2) {
            let lo = power_coefficient(tsr, w[0], &c).unwrap();
            let hi = power_coefficient(tsr, w[1], &c).unwrap();
            if hi > lo {
                violations.push(format!("λ={tsr} β {}→{}", w[0], w[1]));
            }
        }
    }
    report(
        "property: Cp non-increasing in β on λ ∈ [2, 10]",
        violations.is_empty(),
        format!("{} violations: {}", violations.len(), violations.join(", ")),
    );
}

#[test]
fn property_height_linearity() {
    let env = Environment::new(5.0);
    let mut worst = 0.0f64;
    for (r, h, omega) in [(0.2, 0.3, 73.3), (0.5, 2.0, 20.0), (1.0, 4.0, 40.0), (0.7, 1121.0, 26.18)] {
        let op = OperatingPoint::new(omega);
        let p1 = performance(&RotorGeometry::vertical(r, h), &env, &op).unwrap().mechanical_power;
        let p2 = performance(&RotorGeometry::vertical(r, 2.0 * h), &env, &op).unwrap().mechanical_power;
        worst = worst.max((p2 - 2.0 * p1).abs());
    }
    report("property: Pm(2H) = 2·Pm(H)", worst == 0.0, format!("max |Pm(2H) − 2Pm(H)| = {worst:e}"));
}

#[test]
fn property_tsr_scale_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (r, w, v, k) = (
            rng.random_range(0.01..5.0),
            rng.random_range(0.0..100.0),
            rng.random_range(0.5..20.0),
            rng.random_range(0.1..10.0),
        );
        let a = tip_speed_ratio(r, w, v).unwrap();
        let b = tip_speed_ratio(k * r, w / k, v).unwrap();
        if a != 0.0 {
            worst = worst.max(rel_err(b, a));
        }
    }
    report("property: λ(kR, ω/k, V) = λ(R, ω, V)", worst <= 1e-14, format!("max rel err {worst:.2e}"));
}

#[test]
fn property_torque_power_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = rng.random_range(1e-3..1e5);
        let w = rng.random_range(1e-3..500.0);
        worst = worst.max(rel_err(shaft_torque(p, w).unwrap() * w, p));
    }
    report("property: T(P, ω)·ω = P", worst <= 1e-14, format!("max rel err {worst:.2e}"));
}

#[test]
fn property_sweep_determinism() {
    let spec = SweepSpec {
        variable: SweepVariable::AngularSpeed,
        from: 1.0,
        to: 75.0,
        steps: 10_000,
        geometry: RotorGeometry::vertical(0.7, 4.9362),
        environment: Environment::new(2.0),
        operating_point: OperatingPoint::new(0.0),
        coefficients: CpCoefficients::default(),
    };
    let a = serde_json::to_vec(&sweep(&spec).unwrap()).unwrap();
    let b = serde_json::to_vec(&sweep(&spec).unwrap()).unwrap();
    let c = serde_json::to_vec(&sweep_with(&spec, Execution::Sequential).unwrap()).unwrap();
    report(
        "property: sweep output bit-identical across runs",
        a == b && a == c,
        format!("{} bytes serialized", a.len()),
    );
}

/// Index of the single interior maximum if `values` rises then falls.
/// Steps within 1e-12 of the peak count as flat (low-λ torque plateau).
fn rise_then_fall(values: &[f64]) -> Option<usize> {
    let (peak, &top) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    let eps = top.abs() * 1e-12;
    let rises = values[..=peak].windows(2).all(|w| w[1] >= w[0] - eps);
    let falls = values[peak..].windows(2).all(|w| w[1] <= w[0] + eps);
    (peak > 0 && peak + 1 < values.len() && rises && falls).then_some(peak)
}

#[test]
fn property_power_and_torque_shape() {
    // rated-design context: fixed R and H, V = 2 m/s, ω swept past the Cp peak
    let spec = SweepSpec {
        variable: SweepVariable::AngularSpeed,
        from: 1.0,
        to: 50.0,
        steps: 491,
        geometry: RotorGeometry::vertical(0.7, 4.9362),
        environment: Environment::new(2.0),
        operating_point: OperatingPoint::new(0.0),
        coefficients: CpCoefficients::default(),
    };
    let rows = sweep(&spec).unwrap();
    let power: Vec<f64> = rows.iter().map(|r| r.point.mechanical_power).collect();
    let torque: Vec<f64> = rows.iter().map(|r| r.point.shaft_torque).collect();
    let p_peak = rise_then_fall(&power);
    let t_peak = rise_then_fall(&torque);
    let pass = p_peak.is_some() && t_peak.is_some() && t_peak <= p_peak;
    report(
        "property: Pm and Tm vs ω rise then fall",
        pass,
        format!(
            "Pm peak at ω={:?} rad/s, Tm peak at ω={:?} rad/s",
            p_peak.map(|i| rows[i].value),
            t_peak.map(|i| rows[i].value)
        ),
    );
}

fn cli(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_vawt")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

async fn service(method: &str, uri: &str, body: Option<Value>) -> Value {
    let builder = Request::builder().method(method).uri(uri).header(header::CONTENT_TYPE, "application/json");
    let req = builder.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = vawt_service::routes().oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    serde_json::from_slice(&to_bytes(resp.into_body(), usize::MAX).await.unwrap()).unwrap()
}

/// CSV single-row output as (column, value) pairs.
fn csv_record(stdout: &str, row: usize) -> Vec<(String, f64)> {
    let mut lines = stdout.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let line = lines.nth(row).unwrap();
    header
        .into_iter()
        .zip(line.split(','))
        .filter_map(|(k, v)| v.parse::<f64>().ok().map(|x| (k, x)))
        .collect()
}

#[tokio::test]
async fn cli_service_parity() {
    const P: usize = vawt_cli::DEFAULT_PRECISION;
    let mut mismatches = Vec::new();
    let mut compared = 0;
    let mut check = |what: &str, cli_value: f64, service_value: f64, lib_value: f64| {
        compared += 1;
        let (s, l) = (round_sig(service_value, P), round_sig(lib_value, P));
        if !(cli_value == s && s == l) {
            mismatches.push(format!("{what}: cli {cli_value} service {s} lib {l}"));
        }
    };

    // worked model
    let lib = model_point();
    let out = cli(&["power", "--radius", "0.2", "--height", "0.3", "--omega", "73.3", "--wind", "5"]);
    let rec = csv_record(&out, 0);
    let svc = service(
        "POST",
        "/api/v1/performance",
        Some(json!({ "radius": 0.2, "height": 0.3, "angular_speed": 73.3, "wind_speed": 5.0 })),
    )
    .await;
    let lib_values = [
        ("tsr", "tip_speed_ratio", lib.tip_speed_ratio),
        ("cp", "power_coefficient", lib.power_coefficient),
        ("swept_area", "swept_area", lib.swept_area),
        ("mechanical_power", "mechanical_power", lib.mechanical_power),
        ("shaft_torque", "shaft_torque", lib.shaft_torque),
    ];
    for (cli_name, svc_name, value) in lib_values {
        let c = rec.iter().find(|(k, _)| k == cli_name).unwrap().1;
        check(cli_name, c, svc["result"][svc_name].as_f64().unwrap(), value);
    }

    let cp_lib = power_coefficient(2.93, 0.0, &CpCoefficients::default()).unwrap();
    let rec = csv_record(&cli(&["cp", "--tsr", "2.93", "--beta", "0"]), 0);
    let svc = service("GET", "/api/v1/cp?tsr=2.93&beta=0", None).await;
    check("cp(2.93)", rec[3].1, svc["result"]["cp"].as_f64().unwrap(), cp_lib);

    // design table, JSON on the CLI side this time
    let lib_rows = design_table(3500.0, 15.0, 3.45535, &table_diameters()).unwrap();
    let out: Value = serde_json::from_str(&cli(&[
        "table", "--power", "3500", "--tip-speed", "15", "--sizing-constant", "3.45535", "--dia", "1.0:1.7:0.1",
        "--format", "json",
    ]))
    .unwrap();
    let svc = service(
        "POST",
        "/api/v1/table",
        Some(json!({
            "target_power": 3500.0, "tip_speed": 15.0, "sizing_constant": 3.45535,
            "diameters": { "from": 1.0, "to": 1.7, "step": 0.1 }
        })),
    )
    .await;
    for (i, row) in lib_rows.iter().enumerate() {
        for (name, value) in [
            ("speed_rpm", row.speed_rpm),
            ("height", row.height),
            ("torque_paper_units", row.torque_paper_units),
            ("torque_si", row.torque_si),
        ] {
            check(
                &format!("table row {} {name}", i + 1),
                out["rows"][i][name].as_f64().unwrap(),
                svc["result"]["rows"][i][name].as_f64().unwrap(),
                value,
            );
        }
    }

    report(
        "CLI / service / library parity at 6 significant digits",
        mismatches.is_empty() && compared == 38,
        format!("{compared} values compared, {} mismatches {:?}", mismatches.len(), mismatches),
    );
}
