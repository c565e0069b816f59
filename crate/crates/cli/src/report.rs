use serde_json::{Map, Value};

/// Ordered key/value report with an overall verdict.
#[derive(Clone, Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
    failed: bool,
    input: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Records a verdict; any failing verdict fails the report.
    pub fn verdict(&mut self, key: impl Into<String>, pass: bool) {
        self.failed |= !pass;
        self.push(key, if pass { "pass" } else { "fail" });
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn set_input(&mut self, text: String) {
        self.input = Some(text);
    }

    pub fn render(&self, machine: bool) -> String {
        if machine {
            let mut map = Map::new();
            for (k, v) in &self.entries {
                map.insert(k.clone(), Value::String(v.clone()));
            }
            if let Some(input) = &self.input {
                map.insert("input".into(), Value::String(input.clone()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for (k, v) in &self.entries {
                s.push_str(k);
                s.push_str(": ");
                s.push_str(v);
                s.push('\n');
            }
            if let Some(input) = &self.input {
                s.push_str("--- input ---\n");
                s.push_str(input);
            }
            s
        }
    }
}

/// Extracts the echoed input from a human-readable report.
#[cfg(test)]
pub fn echoed_input(report: &str) -> Option<&str> {
    report.split_once("--- input ---\n").map(|(_, rest)| rest)
}
