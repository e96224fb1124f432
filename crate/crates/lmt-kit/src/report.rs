use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::Format;

/// Errors that stop a command before it produces a report.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input.
    Input(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => f.write_str(m),
        }
    }
}

pub fn input(m: impl fmt::Display) -> Failure {
    Failure::Input(m.to_string())
}

/// Ordered key/value lines, free-form blocks and an optional DOT graph.
pub struct Report {
    command: String,
    entries: Vec<(String, Value)>,
    json_only: Vec<(String, Value)>,
    blocks: Vec<String>,
    dot: Option<String>,
    failed: bool,
    exhausted: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), entries: Vec::new(), json_only: Vec::new(), blocks: Vec::new(), dot: None, failed: false, exhausted: false }
    }

    pub fn field(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(v).unwrap_or(Value::Null);
        self.entries.push((key.into(), v));
        self
    }

    /// Structured detail left out of the text rendering.
    pub fn detail(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(v).unwrap_or(Value::Null);
        self.json_only.push((key.into(), v));
        self
    }

    /// Marks the report failed without adding a line.
    pub fn fail(&mut self) -> &mut Self {
        self.failed = true;
        self
    }

    /// A checked property; a false one makes the exit code 1.
    pub fn check(&mut self, key: &str, holds: bool) -> &mut Self {
        self.failed |= !holds;
        self.field(key, holds)
    }

    pub fn block(&mut self, text: impl Into<String>) -> &mut Self {
        self.blocks.push(text.into());
        self
    }

    pub fn dot(&mut self, g: String) -> &mut Self {
        self.dot = Some(g);
        self
    }

    /// The prover ran out of budget.
    pub fn exhausted(&mut self) -> &mut Self {
        self.exhausted = true;
        self
    }

    pub fn exit_code(&self) -> u8 {
        if self.exhausted {
            4
        } else if self.failed {
            1
        } else {
            0
        }
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.entries {
                    out.push_str(k);
                    out.push_str(": ");
                    out.push_str(&text_value(v));
                    out.push('\n');
                }
                for b in &self.blocks {
                    out.push_str(b);
                    if !b.ends_with('\n') {
                        out.push('\n');
                    }
                }
                Ok(out)
            }
            Format::Json => {
                let mut m = Map::new();
                m.insert("schema".into(), Value::from(1));
                m.insert("command".into(), Value::from(self.command.clone()));
                for (k, v) in self.entries.iter().chain(&self.json_only) {
                    m.insert(k.clone(), v.clone());
                }
                if !self.blocks.is_empty() {
                    m.insert("output".into(), Value::from(self.blocks.clone()));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
                s.push('\n');
                Ok(s)
            }
            Format::Dot => self.dot.clone().ok_or_else(|| input(format!("`{}` has no DOT output", self.command))),
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        _ => v.to_string(),
    }
}
