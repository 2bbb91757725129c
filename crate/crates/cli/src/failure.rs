//! Errors surfaced on stderr as `{"error": {"code", "op", "message"}}`.

use std::fmt::Display;

use serde_json::json;

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub op: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, op: impl Into<String>, message: impl Display) -> Self {
        CliError {
            code,
            op: op.into(),
            message: message.to_string(),
        }
    }

    pub fn input(op: impl Into<String>, message: impl Display) -> Self {
        Self::new("invalid_input", op, message)
    }

    pub fn output(err: impl Display) -> Self {
        Self::new("io_error", "cli::output", err)
    }

    pub fn to_json(&self) -> String {
        json!({"error": {"code": self.code, "op": self.op, "message": self.message}}).to_string()
    }
}

impl From<cohscat::Error> for CliError {
    fn from(e: cohscat::Error) -> Self {
        CliError {
            code: e.code(),
            op: e.op().to_string(),
            message: e.message().to_string(),
        }
    }
}
