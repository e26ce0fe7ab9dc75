use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Envelope printed by every solving command.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub result: Value,
    /// Only present with `--timing`, since it breaks byte-for-byte reruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Rounds every non-integer number in place.
pub fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Serializes with rounded numbers. `indent == 0` gives one compact line.
pub fn render(value: &impl Serialize, indent: usize) -> Result<String, CliError> {
    let mut tree = serde_json::to_value(value).map_err(|e| CliError::internal(e.to_string()))?;
    round_numbers(&mut tree);
    let mut out = Vec::new();
    let written = if indent == 0 {
        serde_json::to_writer(&mut out, &tree)
    } else {
        let pad = vec![b' '; indent];
        let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
        let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
        tree.serialize(&mut ser)
    };
    written.map_err(|e| CliError::internal(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| CliError::internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(7.499999999999999), 7.5);
        assert_eq!(round_sig(1.234567890123456e-8), 1.23456789012e-8);
        assert_eq!(round_sig(-2.0), -2.0);
        assert!(round_sig(-0.0).is_sign_positive());
    }

    #[test]
    fn integers_untouched_and_compact_mode() {
        let v = json!({"a": 1, "b": [0.30000000000000004, u64::MAX]});
        assert_eq!(
            render(&v, 0).unwrap(),
            format!("{{\"a\":1,\"b\":[0.3,{}]}}\n", u64::MAX)
        );
        assert!(render(&v, 3).unwrap().contains("\n   \"a\": 1"));
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
