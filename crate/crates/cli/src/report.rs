//! The JSON envelope every command prints.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Refuted,
    Certified,
    Indirect,
    Inconclusive,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Proved | Status::Certified => 0,
            Status::Refuted => 2,
            Status::Indirect | Status::Inconclusive => 3,
            Status::Error => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Certified => "certified",
            Status::Indirect => "indirect",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub status: Status,
    pub payload: Value,
    #[serde(default)]
    pub residuals: Vec<Residual>,
    pub wall_clock_ms: u64,
}

/// What a command hands back before the envelope is filled in.
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub residuals: Vec<Residual>,
}

impl Outcome {
    pub fn new(status: Status, payload: Value) -> Self {
        Outcome { status, payload, residuals: vec![] }
    }
}

pub fn tool() -> String {
    format!("halfsph {}", env!("CARGO_PKG_VERSION"))
}

impl Report {
    pub fn error(command: Vec<String>, seed: u64, msg: &str) -> Self {
        Report {
            schema: SCHEMA,
            tool: tool(),
            command,
            seed,
            status: Status::Error,
            payload: serde_json::json!({ "kind": "error", "error": msg }),
            residuals: vec![],
            wall_clock_ms: 0,
        }
    }

    pub fn kind(&self) -> &str {
        self.payload.get("kind").and_then(Value::as_str).unwrap_or("unknown")
    }

    /// Human-readable digest.
    pub fn to_markdown(&self) -> String {
        if self.kind() == "diagram" {
            if let Ok(d) = serde_json::from_value::<halfsph::lattice::DiagramReport>(self.payload["report"].clone()) {
                return format!("{}\nStatus: **{}**\n", d.to_markdown(), self.status.as_str());
            }
        }
        let mut s = format!("# `{}`\n\n", self.command.join(" "));
        let _ = writeln!(s, "- status: **{}**", self.status.as_str());
        let _ = writeln!(s, "- tool: {}", self.tool);
        let _ = writeln!(s, "- seed: {}", self.seed);
        let _ = writeln!(s, "- wall clock: {} ms", self.wall_clock_ms);
        s.push('\n');
        let p = &self.payload;
        match self.kind() {
            "check" => {
                let _ = writeln!(s, "Target `{}` in `{}`.\n", p["target"].as_str().unwrap_or(""), p["presentation"]["name"].as_str().unwrap_or(""));
                s.push_str("| instance | proved | steps |\n|---|---|---|\n");
                for i in p["instances"].as_array().into_iter().flatten() {
                    let steps = i["trace"]["steps"].as_array().map_or("-".to_string(), |a| a.len().to_string());
                    let _ = writeln!(s, "| `{}` | {} | {steps} |", i["polynomial"].as_str().unwrap_or(""), i["proved"]);
                }
            }
            "qisom" => {
                let _ = writeln!(s, "Sphere {}, mode {}.", p["sphere"].as_str().unwrap_or(""), p["mode"].as_str().unwrap_or(""));
                if let Some(stages) = p["pipeline"]["stages"].as_array() {
                    for st in stages {
                        let sat = &st["saturation"];
                        let _ = writeln!(
                            s,
                            "- shape {}: {} families, {} statements, global vanishing {}",
                            st["shape"],
                            st["families"].as_array().map_or(0, |a| a.len()),
                            sat["steps"].as_array().map_or(0, |a| a.len()),
                            sat["global"]
                        );
                    }
                }
                if let Some(a) = p["pipeline"]["conditional_on"].as_array().filter(|a| !a.is_empty()) {
                    let names: Vec<&str> = a.iter().filter_map(Value::as_str).collect();
                    let _ = writeln!(s, "- conditional on: {}", names.join(", "));
                }
            }
            "error" => {
                let _ = writeln!(s, "Error: {}", p["error"].as_str().unwrap_or(""));
            }
            _ => {
                let _ = writeln!(s, "```json\n{}\n```", serde_json::to_string_pretty(p).unwrap_or_default());
            }
        }
        if !self.residuals.is_empty() {
            s.push_str("\n| residual | value |\n|---|---|\n");
            for r in &self.residuals {
                let _ = writeln!(s, "| {} | {:.3e} |", r.label, r.value);
            }
        }
        s
    }
}
