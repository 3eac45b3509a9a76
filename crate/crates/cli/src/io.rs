//! Wire formats: fixed-precision JSON, trajectory CSV, structured errors.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;

use contactify::contact::{SpherePoint, S2Point};
use contactify::lie::CVector;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;

pub const CSV_HEADER: [&str; 9] = ["t", "re_z1", "im_z1", "re_z2", "im_z2", "x", "y", "z", "Hhat"];

/// Floats as `{:.16e}`: 17 significant digits, exact round trip.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with fixed float formatting.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Failure reported to the caller as `{code, message, location}`.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub location: String,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn new(code: &str, message: impl fmt::Display, location: impl Into<String>) -> Self {
        Self {
            code: code.to_string(),
            message: message.to_string(),
            location: location.into(),
            exit: 1,
        }
    }

    pub fn domain(err: contactify::Error, location: impl Into<String>) -> Self {
        Self::new(err.code(), err, location)
    }

    pub fn json(err: serde_json::Error, source: &str) -> Self {
        let code = if err.is_syntax() || err.is_eof() { "malformed_json" } else { "invalid_input" };
        Self::new(code, &err, format!("{source}:{}:{}", err.line(), err.column()))
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    let source = path.display().to_string();
    let mut text = String::new();
    let result = if source == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    result.map_err(|e| CliError::new("io", e, source))?;
    Ok(text)
}

/// One CSV row per trajectory sample.
pub fn write_trajectory<W: Write>(
    out: W,
    times: &[f64],
    states: &[SpherePoint],
    projected: &[S2Point],
    hhat: &[f64],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (((t, x), p), h) in times.iter().zip(states).zip(projected).zip(hhat) {
        let z = x.vector();
        let [px, py, pz] = p.coords();
        let row = [*t, z[0].re, z[0].im, z[1].re, z[1].im, px, py, pz, *h];
        w.write_record(row.iter().map(|v| float(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns of a trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub projected: Vec<[f64; 3]>,
    pub hhat: Vec<f64>,
}

pub fn read_trajectory(text: &str, source: &str) -> Result<TrajectoryTable, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::new("malformed_csv", e, format!("{source}:1")))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::new(
            "malformed_csv",
            format!("expected header '{}'", CSV_HEADER.join(",")),
            format!("{source}:1"),
        ));
    }
    let mut table = TrajectoryTable {
        times: Vec::new(),
        states: Vec::new(),
        projected: Vec::new(),
        hhat: Vec::new(),
    };
    for (k, record) in reader.records().enumerate() {
        let line = format!("{source}:{}", k + 2);
        let record = record.map_err(|e| CliError::new("malformed_csv", e, line.clone()))?;
        let mut v = [0.0f64; 9];
        for (slot, (field, name)) in v.iter_mut().zip(record.iter().zip(CSV_HEADER)) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| CliError::new("malformed_csv", format!("column {name}: '{field}' is not a number"), line.clone()))?;
        }
        table.times.push(v[0]);
        table
            .states
            .push(CVector::from_vec(vec![Complex64::new(v[1], v[2]), Complex64::new(v[3], v[4])]));
        table.projected.push([v[5], v[6], v[7]]);
        table.hhat.push(v[8]);
    }
    Ok(table)
}
