use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use cycdec_core::exact_lp::{parse_rational, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;

/// Output of one command: a line-oriented document, its structured twin, and
/// whether the verdict was positive.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub positive: bool,
}

impl Report {
    pub fn new(text: String, json: Value, positive: bool) -> Self {
        Self { text, json, positive }
    }
}

/// `q` rounded half away from zero to `digits` decimals.
pub fn round_decimal(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let num: BigInt = q.numer().abs() * &scale * 2 + q.denom();
    let scaled: BigInt = num / (q.denom() * 2);
    let sign = if q.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{scaled}");
    }
    let int_part = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    format!("{sign}{int_part}.{frac:0>digits$}")
}

/// Append rounded values of every `num/den` token as a trailing comment.
pub fn annotate_decimals(text: &str, digits: usize) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        out.push_str(line);
        if !line.starts_with('#') {
            let body = line.split('#').next().unwrap_or("");
            let decimals: Vec<String> = body
                .split_whitespace()
                .filter(|t| t.contains('/'))
                .filter_map(|t| parse_rational(t).ok())
                .map(|q| round_decimal(&q, digits))
                .collect();
            if !decimals.is_empty() {
                out.push_str("  # ");
                out.push_str(&decimals.join(" "));
            }
        }
        out.push('\n');
    }
    out
}

pub fn emit(report: &Report, json: bool, decimal: Option<usize>, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let body = if json {
        let mut s = serde_json::to_string_pretty(&report.json)?;
        s.push('\n');
        s
    } else {
        match decimal {
            Some(k) => annotate_decimals(&report.text, k),
            None => report.text.clone(),
        }
    };
    match output {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cycdec_core::exact_lp::rat;

    #[test]
    fn rounding() {
        assert_eq!(round_decimal(&rat(1, 3), 3), "0.333");
        assert_eq!(round_decimal(&rat(2, 3), 2), "0.67");
        assert_eq!(round_decimal(&rat(-1, 2), 0), "-1");
        assert_eq!(round_decimal(&rat(-1, 1000), 2), "0.00");
        assert_eq!(round_decimal(&rat(21, 2), 1), "10.5");
        assert_eq!(
            annotate_decimals("# c 1/3\ncycle 1/3 a b\n", 2),
            "# c 1/3\ncycle 1/3 a b  # 0.33\n"
        );
    }
}
