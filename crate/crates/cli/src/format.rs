//! Output documents: one header plus rows, rendered as CSV or JSON.

use serde_json::{Map, Value};

/// Rounds to `digits` significant digits. Non-finite values pass through.
pub fn round_sig(value: f64, digits: usize) -> f64 {
    if !value.is_finite() || value == 0.0 {
        return value;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, value)
        .parse()
        .unwrap_or(value)
}

/// Decimal rendering of `value` at `digits` significant digits, without
/// exponent notation or trailing zeros.
pub fn format_sig(value: f64, digits: usize) -> String {
    if value.is_nan() {
        return "NaN".to_owned();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    let rounded = round_sig(value, digits);
    if rounded == 0.0 {
        // drops the sign of -0
        return "0".to_owned();
    }
    format!("{rounded}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<Option<String>> for Cell {
    fn from(v: Option<String>) -> Self {
        v.map_or(Cell::Empty, Cell::Text)
    }
}

impl Cell {
    fn to_csv(&self, precision: usize) -> String {
        match self {
            Cell::Num(v) => format_sig(*v, precision),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self, precision: usize) -> Value {
        match self {
            Cell::Num(v) => {
                let r = round_sig(*v, precision);
                // -0 renders as 0, like the CSV path
                let r = if r == 0.0 { 0.0 } else { r };
                serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
            }
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Result of one subcommand: echoed inputs, a table, and advisories.
///
/// A document flagged `single` holds exactly one row and renders as a JSON
/// `result` object rather than a `rows` array.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub inputs: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single: bool,
    pub warnings: Vec<String>,
}

impl Document {
    pub fn single(columns: Vec<&'static str>, row: Vec<Cell>) -> Self {
        Document {
            columns,
            rows: vec![row],
            single: true,
            ..Default::default()
        }
    }

    pub fn table(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        Document {
            columns,
            rows,
            ..Default::default()
        }
    }

    pub fn with_inputs(mut self, inputs: Vec<(&'static str, Cell)>) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn render(&self, format: Format, precision: usize) -> Result<String, String> {
        match format {
            Format::Csv => self.render_csv(precision),
            Format::Json => Ok(self.render_json(precision)),
        }
    }

    fn render_csv(&self, precision: usize) -> Result<String, String> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.columns).map_err(|e| e.to_string())?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|c| c.to_csv(precision)))
                .map_err(|e| e.to_string())?;
        }
        let bytes = writer.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }

    fn render_json(&self, precision: usize) -> String {
        let object = |row: &Vec<Cell>| -> Value {
            Value::Object(
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| ((*k).to_owned(), c.to_json(precision)))
                    .collect(),
            )
        };
        let mut top = Map::new();
        top.insert(
            "inputs".into(),
            Value::Object(
                self.inputs
                    .iter()
                    .map(|(k, c)| ((*k).to_owned(), c.to_json(precision)))
                    .collect(),
            ),
        );
        if self.single {
            let result = self.rows.first().map_or(Value::Null, object);
            top.insert("result".into(), result);
        } else {
            top.insert("rows".into(), Value::Array(self.rows.iter().map(object).collect()));
        }
        top.insert(
            "warnings".into(),
            Value::Array(self.warnings.iter().cloned().map(Value::String).collect()),
        );
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).unwrap_or_default();
        out.push('\n');
        out
    }
}
