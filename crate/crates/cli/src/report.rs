//! Report envelope and its CSV / JSON renderings.

use num_complex::Complex64;
use qca_walk::amplitudes::Distribution;
use qca_walk::linalg::Mat2;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// A single reported quantity.
#[derive(Clone, Debug)]
pub enum Field {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Complex(Complex64),
    Matrix(Mat2),
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Int(v) => json!(v),
            Field::Real(v) => json!(v),
            Field::Text(v) => json!(v),
            Field::Bool(v) => json!(v),
            Field::Complex(z) => json!([z.re, z.im]),
            Field::Matrix(m) => Value::Array(
                m.0.iter()
                    .map(|row| Value::Array(row.iter().map(|z| json!([z.re, z.im])).collect()))
                    .collect(),
            ),
        }
    }

    /// Flattened `(key, value)` CSV rows.
    fn csv_rows(&self, key: &str, out: &mut Vec<(String, String)>) {
        match self {
            Field::Int(v) => out.push((key.to_string(), v.to_string())),
            Field::Real(v) => out.push((key.to_string(), fmt_num(*v))),
            Field::Text(v) => out.push((key.to_string(), v.clone())),
            Field::Bool(v) => out.push((key.to_string(), v.to_string())),
            Field::Complex(z) => {
                out.push((format!("{key}.re"), fmt_num(z.re)));
                out.push((format!("{key}.im"), fmt_num(z.im)));
            }
            Field::Matrix(m) => {
                for r in 0..2 {
                    for c in 0..2 {
                        Field::Complex(m.get(r, c)).csv_rows(&format!("{key}[{r}][{c}]"), out);
                    }
                }
            }
        }
    }
}

/// Scientific notation with exactly 17 significant digits, enough to parse
/// back to the same `f64`. Negative zero prints as zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Clone, Debug)]
pub enum Payload {
    Distribution(Distribution),
    Fields(Vec<(String, Field)>),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, Field)>,
    pub result: Payload,
    pub residuals: Vec<(String, f64)>,
    pub duration_ms: Option<f64>,
}

#[derive(Serialize)]
struct Envelope {
    command: String,
    params: Map<String, Value>,
    result: Value,
    residuals: Map<String, Value>,
    duration_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let result = match &self.result {
            Payload::Distribution(d) => {
                Value::Array(d.iter().map(|(k, m)| json!([k, m])).collect())
            }
            Payload::Fields(fields) => Value::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect(),
            ),
        };
        let residuals = self
            .residuals
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let envelope = Envelope {
            command: self.command.clone(),
            params,
            result,
            residuals,
            duration_ms: self.duration_ms,
        };
        let mut s = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
        s.push('\n');
        s
    }

    /// Distributions render as `site,probability`; everything else as
    /// `key,value` rows covering the result and the residuals.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.result {
            Payload::Distribution(d) => {
                s.push_str("site,probability\n");
                for (k, m) in d.iter() {
                    s.push_str(&format!("{k},{}\n", fmt_num(m)));
                }
            }
            Payload::Fields(fields) => {
                let mut rows = Vec::new();
                for (k, v) in fields {
                    v.csv_rows(k, &mut rows);
                }
                for (k, v) in &self.residuals {
                    rows.push((format!("residual.{k}"), fmt_num(*v)));
                }
                s.push_str("key,value\n");
                for (k, v) in rows {
                    s.push_str(&format!("{k},{v}\n"));
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.25,
            1.0 / 3.0,
            1e-20,
            -0.5,
            0.1 + 0.2,
            12_345.678_901_234_5,
        ] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17, "{s}");
        }
        assert_eq!(fmt_num(-0.0), fmt_num(0.0));
    }

    #[test]
    fn csv_distribution_layout() {
        let r = Report {
            command: "simulate-qca".into(),
            params: vec![],
            result: Payload::Distribution(Distribution::from_entries([(1, 0.5), (-1, 0.5)])),
            residuals: vec![],
            duration_ms: None,
        };
        assert_eq!(
            r.to_csv(),
            "site,probability\n-1,5.0000000000000000e-1\n1,5.0000000000000000e-1\n"
        );
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["result"], json!([[-1, 0.5], [1, 0.5]]));
        assert!(v["duration_ms"].is_null());
    }
}
