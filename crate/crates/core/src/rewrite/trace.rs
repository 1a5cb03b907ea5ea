//! Certificate steps and the independent replayer.
//!
//! The replayer deliberately shares no code with the search: it re-reads the
//! relation list, re-locates each word and re-does the arithmetic.

use serde::{Deserialize, Serialize};

use super::DerivationTrace;
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::presentations::Presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// the pivot is the relation's leading word
    Forward,
    /// any other pivot
    Backward,
}

/// One rewrite step. `term` indexes the words of the current polynomial in
/// ascending canonical order; `pivot` indexes the relation's terms likewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub step: usize,
    pub term: usize,
    pub position: usize,
    pub rule: usize,
    pub pivot: usize,
    pub direction: Direction,
}

/// Walks `steps` from `start` and returns the final polynomial.
pub fn replay(p: &Presentation, start: &NCPolynomial, steps: &[Step]) -> Result<NCPolynomial> {
    let bad = |k: usize, why: &str| Error::Invalid(format!("step {k}: {why}"));
    let mut cur = start.clone();
    for (k, s) in steps.iter().enumerate() {
        if s.step != k {
            return Err(bad(k, "out of order"));
        }
        let (word, coef) = cur.terms().nth(s.term).ok_or_else(|| bad(k, "no such term"))?;
        let rel = &p.relation(s.rule).ok_or_else(|| bad(k, "no such relation"))?.poly;
        let nterms = rel.len();
        let (piv, rho) = rel.terms().nth(s.pivot).ok_or_else(|| bad(k, "no such pivot"))?;
        let forward = s.pivot + 1 == nterms;
        if forward != (s.direction == Direction::Forward) {
            return Err(bad(k, "direction disagrees with pivot"));
        }
        if piv.is_empty() || !word.matches_at(piv.letters(), s.position) {
            return Err(bad(k, "pivot does not occur at position"));
        }
        let (u, v) = word.split_around(s.position, piv.len());
        let lambda = coef / rho;
        let next = &cur - &rel.sandwich(&u, &v).scale(&lambda);
        cur = next;
    }
    Ok(cur)
}

/// Replays a trace and checks it lands on its recorded end.
pub fn verify_trace(p: &Presentation, t: &DerivationTrace) -> Result<()> {
    let end = replay(p, &t.start, &t.steps)?;
    if end != t.end {
        return Err(Error::Invalid(format!("replay ends at {end}, trace claims {}", t.end)));
    }
    Ok(())
}

/// Serializable form of a trace; polynomials in canonical text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub start: String,
    pub end: String,
    pub steps: Vec<Step>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axioms: Vec<String>,
}

impl From<&DerivationTrace> for TraceDoc {
    fn from(t: &DerivationTrace) -> Self {
        TraceDoc {
            start: t.start.to_string(),
            end: t.end.to_string(),
            steps: t.steps.clone(),
            axioms: t.axioms.clone(),
        }
    }
}
