//! Reports, exit codes and JSON with fixed nine-decimal numbers.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const INPUT: u8 = 2;
pub const BUDGET: u8 = 3;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(e: impl std::fmt::Display) -> Failure {
        Failure::new(INPUT, e)
    }

    pub fn new(code: u8, e: impl std::fmt::Display) -> Failure {
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced.
pub struct Report {
    pub code: u8,
    pub json: Value,
    pub text: String,
    /// A file body (complex, decomposition, ...) for `-o` or stdout.
    pub artifact: Option<Value>,
}

impl Report {
    pub fn new(ok: bool, json: Value, text: impl Into<String>) -> Report {
        Report {
            code: if ok { OK } else { NEGATIVE },
            json,
            text: text.into(),
            artifact: None,
        }
    }

    pub fn artifact(json: Value, text: impl Into<String>, body: Value) -> Report {
        Report {
            code: OK,
            json,
            text: text.into(),
            artifact: Some(body),
        }
    }
}

struct Fixed9;

impl Formatter for Fixed9 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.9}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write!(w, "{v:.9}")
    }
}

/// Compact JSON; floats always carry nine decimals.
pub fn to_json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed9);
    v.serialize(&mut ser).expect("in-memory write");
    String::from_utf8(out).expect("utf-8")
}

pub fn num(x: f64) -> String {
    format!("{x:.9}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_padded() {
        assert_eq!(
            to_json(&json!({"d": 2.0, "n": 3, "v": [0.5]})),
            r#"{"d":2.000000000,"n":3,"v":[0.500000000]}"#
        );
    }
}
