//! CSV text, `%.12g` number formatting and the run manifest.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Formats like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    const PREC: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // Round to PREC significant digits first; the exponent of the rounded
    // value picks the notation.
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (PREC - 1 - exp) as usize, x))
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `# key=value` header lines, a column line, then one row per record.
pub fn csv_table(meta: &BTreeMap<String, String>, columns: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_g(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub duration_seconds: f64,
    pub warnings: Vec<String>,
    pub diagnostics: BTreeMap<String, Value>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (1.0 / 3.0, "0.333333333333"),
            (100.0 / 111.0, "0.900900900901"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-4, "0.0001"),
            (1.5e-5, "1.5e-05"),
            (-2.5e-10, "-2.5e-10"),
            (999999999999.5, "1e+12"),
            (1e100, "1e+100"),
            (0.000123456789012345, "0.000123456789012"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }

    #[test]
    fn table_layout() {
        let mut meta = BTreeMap::new();
        meta.insert("model".to_string(), "beta:a=1,b=1".to_string());
        let s = csv_table(
            &meta,
            &["m", "risk"],
            &[vec![0.0, 0.5], vec![10.0, 1.0 / 12.0]],
        );
        assert_eq!(
            s,
            "# model=beta:a=1,b=1\nm,risk\n0,0.5\n10,0.0833333333333\n"
        );
    }
}
