use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::check::{InclusionVerdict, IntersectionVerdict, ProperStatus, ProperVerdict, RealVerdict, TransitivityVerdict};

/// Outcome of every claim of one diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub diagram: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub nodes: Vec<String>,
    pub inclusions: Vec<InclusionVerdict>,
    pub intersections: Vec<IntersectionVerdict>,
    pub reals: Vec<RealVerdict>,
    pub properness: Vec<ProperVerdict>,
    pub transitivity: Vec<TransitivityVerdict>,
}

impl DiagramReport {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn inclusions_proved(&self) -> usize {
        self.inclusions.iter().filter(|v| v.proved).count()
    }

    pub fn certified(&self) -> usize {
        self.properness.iter().filter(|v| v.status == ProperStatus::Certified).count()
    }

    /// Every inclusion, intersection, real-version and composed edge is
    /// proved and no properness claim is left unknown.
    pub fn ok(&self) -> bool {
        self.inclusions.iter().all(|v| v.proved)
            && self.intersections.iter().all(|v| v.proved)
            && self.reals.iter().all(|v| v.proved)
            && self.transitivity.iter().all(|v| v.proved)
            && self.properness.iter().all(|v| v.status != ProperStatus::Unknown)
    }

    pub fn to_markdown(&self) -> String {
        let yes = |b: bool| if b { "proved" } else { "open" };
        let mut s = format!("# Diagram `{}` (N = {})\n\n", self.diagram, self.n);
        if self.is_empty() {
            s.push_str("Empty diagram.\n");
            return s;
        }
        let _ = writeln!(s, "Nodes: {}\n", self.nodes.join(", "));
        if !self.inclusions.is_empty() {
            s.push_str("## Inclusions\n\n| edge | verdict | relations | steps |\n|---|---|---|---|\n");
            for v in &self.inclusions {
                let steps: usize = v.relations.iter().filter_map(|r| r.trace.as_ref()).map(|t| t.steps.len()).sum();
                let kind = if v.syntactic { " (syntactic)" } else { "" };
                let _ = writeln!(s, "| {} ⊂ {} | {}{kind} | {} | {steps} |", v.smaller, v.larger, yes(v.proved), v.relations.len());
            }
            s.push('\n');
        }
        if !self.intersections.is_empty() {
            s.push_str("## Intersections\n\n");
            for v in &self.intersections {
                let _ = write!(s, "- {} = {} ∩ {}: {} ({})", v.node, v.left, v.right, yes(v.proved), v.method);
                if let (Some(n), Some(m)) = (v.samples, v.members) {
                    let _ = write!(s, ", {n} samples, {m} in the meet, {} disagreements", v.disagreements.len());
                }
                s.push('\n');
            }
            s.push('\n');
        }
        if !self.reals.is_empty() {
            s.push_str("## Real versions\n\n");
            for v in &self.reals {
                let _ = writeln!(s, "- {} = real({}): {}", v.node, v.of, yes(v.proved));
            }
            s.push('\n');
        }
        if !self.properness.is_empty() {
            s.push_str("## Properness\n\n| edge | status | witness | residual |\n|---|---|---|---|\n");
            for v in &self.properness {
                let status = match v.status {
                    ProperStatus::Certified => "certified",
                    ProperStatus::Indirect => "indirect",
                    ProperStatus::Unknown => "unknown",
                };
                let witness = v.digest.clone().unwrap_or_else(|| v.note.clone());
                let res = v.residual.map_or("-".to_string(), |r| format!("{r:.6}"));
                let _ = writeln!(s, "| {} ⊊ {} | {status} | {witness} | {res} |", v.smaller, v.larger);
            }
            s.push('\n');
        }
        if !self.transitivity.is_empty() {
            let ok = self.transitivity.iter().filter(|t| t.proved).count();
            let _ = writeln!(s, "## Composed edges\n\n{ok} of {} composed inclusions proved directly.", self.transitivity.len());
        }
        s
    }
}
