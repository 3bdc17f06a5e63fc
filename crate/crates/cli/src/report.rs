use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// What went wrong, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable files, inputs outside the supported range.
    Input(String),
    /// An integrity check that the theory says cannot fail.
    Violation(String),
}

pub fn input(msg: impl ToString) -> Failure {
    Failure::Input(msg.to_string())
}

pub fn violation(msg: impl ToString) -> Failure {
    Failure::Violation(msg.to_string())
}

/// One run. Wall time goes to stderr so the JSON is byte-identical across
/// runs.
#[derive(Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pass: bool,
    pub counters: BTreeMap<&'static str, u64>,
    pub result: Value,
}

impl RunReport {
    pub fn new(command: &'static str, parameters: Value) -> Self {
        RunReport { command, parameters, seed: None, pass: true, counters: BTreeMap::new(), result: Value::Null }
    }

    pub fn count(mut self, key: &'static str, value: impl TryInto<u64>) -> Self {
        self.counters.insert(key, value.try_into().unwrap_or(u64::MAX));
        self
    }

    pub fn result(mut self, result: impl Serialize) -> Result<Self, Failure> {
        self.result = serde_json::to_value(result).map_err(input)?;
        Ok(self)
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Prints a line to stdout; a closed pipe is not an error.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}
