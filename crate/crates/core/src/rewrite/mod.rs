//! Bounded derivation engine.
//!
//! A step picks a word `w = u·m·v` of the current polynomial, where `m` is a
//! chosen term (the pivot) of relation `r`, and subtracts `(c/ρ)·u·r·v`, `c`
//! being the coefficient of `w` and `ρ` that of `m` in `r`. This kills `w`.
//! The engine only ever reports `Proved` with a certificate; it never claims
//! non-derivability.

mod trace;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPolynomial, Word};
use crate::par::Exec;
use crate::presentations::Presentation;
use crate::scalar::Scalar;

pub use trace::{replay, verify_trace, Direction, Step, TraceDoc};

/// Default number of node expansions (and of reduction steps).
pub const DEFAULT_BUDGET: usize = 10_000;

/// A replayable certificate that `start` reduces to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub start: NCPolynomial,
    pub end: NCPolynomial,
    pub steps: Vec<Step>,
    /// Labels of flagged axiom relations the steps rely on.
    pub axioms: Vec<String>,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Result of a derivation query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(DerivationTrace),
    Inconclusive { expansions: usize, residue: NCPolynomial },
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }

    pub fn trace(&self) -> Option<&DerivationTrace> {
        match self {
            Outcome::Proved(t) => Some(t),
            Outcome::Inconclusive { .. } => None,
        }
    }
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node expansions for the deepening phase, and reduction steps for the
    /// fallback phase.
    pub budget: usize,
    pub max_depth: usize,
    pub reduce_fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, max_depth: 6, reduce_fallback: true }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: usize) -> Self {
        SearchConfig { budget, ..Default::default() }
    }
}

/// Oriented view of one relation: `lhs → lhs − r/ρ`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: NCPolynomial,
    pub origin: usize,
    pub bidirectional: bool,
}

#[derive(Clone, Debug)]
struct Rel {
    terms: Vec<(Word, Scalar)>,
    poly: NCPolynomial,
    flagged: Option<String>,
}

/// Rule index built once per presentation and shared by queries.
#[derive(Clone, Debug)]
pub struct Prover {
    rels: Vec<Rel>,
    /// subword → (relation id, pivot) for every non-constant term.
    any: HashMap<Vec<Letter>, Vec<(usize, usize)>>,
    /// subword → relation id for leading terms.
    lead: HashMap<Vec<Letter>, Vec<usize>>,
    lengths: BTreeSet<usize>,
    lead_lengths: BTreeSet<usize>,
    alphabet: crate::ncpoly::Alphabet,
}

/// Outcome of a plain reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub result: NCPolynomial,
    pub trace: DerivationTrace,
    /// Set when the step budget ran out before a normal form was reached.
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
struct Move {
    term: usize,
    position: usize,
    rule: usize,
    pivot: usize,
}

impl Prover {
    pub fn new(p: &Presentation) -> Self {
        let mut rels = Vec::with_capacity(p.len());
        let mut any: HashMap<Vec<Letter>, Vec<(usize, usize)>> = HashMap::new();
        let mut lead: HashMap<Vec<Letter>, Vec<usize>> = HashMap::new();
        let mut lengths = BTreeSet::new();
        let mut lead_lengths = BTreeSet::new();
        for (id, r) in p.relations().iter().enumerate() {
            let terms: Vec<(Word, Scalar)> = r.poly.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
            let last = terms.len() - 1;
            for (k, (w, _)) in terms.iter().enumerate() {
                if w.is_empty() {
                    continue;
                }
                any.entry(w.letters().to_vec()).or_default().push((id, k));
                lengths.insert(w.len());
                if k == last {
                    lead.entry(w.letters().to_vec()).or_default().push(id);
                    lead_lengths.insert(w.len());
                }
            }
            let flagged = r.label.starts_with("axiom:").then(|| r.label.clone());
            rels.push(Rel { terms, poly: r.poly.clone(), flagged });
        }
        Prover { rels, any, lead, lengths, lead_lengths, alphabet: p.alphabet() }
    }

    pub fn relation_count(&self) -> usize {
        self.rels.len()
    }

    /// Oriented rules, one per relation with a nonconstant leading word.
    pub fn rules(&self) -> Vec<RewriteRule> {
        self.rels
            .iter()
            .enumerate()
            .filter_map(|(id, r)| {
                let (lhs, rho) = r.terms.last()?;
                if lhs.is_empty() {
                    return None;
                }
                let rhs = &NCPolynomial::word(lhs.clone()) - &r.poly.scale(&rho.inv()?);
                Some(RewriteRule { lhs: lhs.clone(), rhs, origin: id, bidirectional: r.terms.len() == 2 })
            })
            .collect()
    }

    fn apply(&self, p: &NCPolynomial, word: &Word, coef: &Scalar, m: &Move) -> NCPolynomial {
        let rel = &self.rels[m.rule];
        let (piv, rho) = &rel.terms[m.pivot];
        let (u, v) = word.split_around(m.position, piv.len());
        let lambda = coef / rho;
        p - &rel.poly.sandwich(&u, &v).scale(&lambda)
    }

    fn step_of(&self, k: usize, m: &Move) -> Step {
        let last = self.rels[m.rule].terms.len() - 1;
        Step {
            step: k,
            term: m.term,
            position: m.position,
            rule: m.rule,
            pivot: m.pivot,
            direction: if m.pivot == last { Direction::Forward } else { Direction::Backward },
        }
    }

    /// All moves on `p` in tie-break order: larger words first, then lowest
    /// (position, rule id, pivot).
    fn moves(&self, p: &NCPolynomial) -> Vec<Move> {
        let n = p.len();
        let mut out = Vec::new();
        for (rev, w) in p.words().rev().enumerate() {
            let term = n - 1 - rev;
            let ls = w.letters();
            let mut local = Vec::new();
            for pos in 0..ls.len() {
                for &len in self.lengths.range(..=ls.len() - pos) {
                    if let Some(hits) = self.any.get(&ls[pos..pos + len]) {
                        for &(rule, pivot) in hits {
                            local.push(Move { term, position: pos, rule, pivot });
                        }
                    }
                }
            }
            local.sort_by_key(|m| (m.position, m.rule, m.pivot));
            out.extend(local);
        }
        out
    }

    /// Leftmost forward move on the largest reducible word.
    fn first_forward(&self, p: &NCPolynomial) -> Option<Move> {
        let n = p.len();
        for (rev, w) in p.words().rev().enumerate() {
            let ls = w.letters();
            for pos in 0..ls.len() {
                let mut best: Option<usize> = None;
                for &len in self.lead_lengths.range(..=ls.len() - pos) {
                    if let Some(ids) = self.lead.get(&ls[pos..pos + len]) {
                        let id = ids[0];
                        best = Some(best.map_or(id, |b: usize| b.min(id)));
                    }
                }
                if let Some(rule) = best {
                    return Some(Move {
                        term: n - 1 - rev,
                        position: pos,
                        rule,
                        pivot: self.rels[rule].terms.len() - 1,
                    });
                }
            }
        }
        None
    }

    fn word_at(p: &NCPolynomial, term: usize) -> (Word, Scalar) {
        let (w, c) = p.terms().nth(term).expect("term index in range");
        (w.clone(), c.clone())
    }

    fn axioms_of(&self, steps: &[Step]) -> Vec<String> {
        let set: BTreeSet<String> = steps.iter().filter_map(|s| self.rels[s.rule].flagged.clone()).collect();
        set.into_iter().collect()
    }

    /// Deterministic leftmost reduction by leading-term rules.
    pub fn reduce(&self, p: &NCPolynomial, budget: usize) -> Reduction {
        let mut cur = p.clone();
        let mut steps = Vec::new();
        let mut exhausted = false;
        while let Some(m) = self.first_forward(&cur) {
            if steps.len() >= budget {
                exhausted = true;
                break;
            }
            let (w, c) = Self::word_at(&cur, m.term);
            cur = self.apply(&cur, &w, &c, &m);
            steps.push(self.step_of(steps.len(), &m));
        }
        let axioms = self.axioms_of(&steps);
        Reduction {
            result: cur.clone(),
            trace: DerivationTrace { start: p.clone(), end: cur, steps, axioms },
            exhausted,
        }
    }

    /// Proves `target ∈ ideal` or gives up.
    pub fn check(&self, target: &NCPolynomial, cfg: &SearchConfig) -> Result<Outcome> {
        self.alphabet.check(target).map_err(|e| Error::Invalid(format!("ill-formed target: {e}")))?;
        Ok(self.check_unchecked(target, cfg))
    }

    fn check_unchecked(&self, target: &NCPolynomial, cfg: &SearchConfig) -> Outcome {
        let mut search = Search { prover: self, expansions: 0, budget: cfg.budget, memo: HashMap::new(), path: Vec::new() };
        for depth in 0..=cfg.max_depth {
            search.memo.clear();
            match search.dfs(target, depth) {
                Dfs::Found => {
                    let steps: Vec<Step> = search
                        .path
                        .iter()
                        .rev()
                        .enumerate()
                        .map(|(k, m)| self.step_of(k, m))
                        .collect();
                    let axioms = self.axioms_of(&steps);
                    return Outcome::Proved(DerivationTrace {
                        start: target.clone(),
                        end: NCPolynomial::zero(),
                        steps,
                        axioms,
                    });
                }
                Dfs::Budget => break,
                Dfs::Exhausted => {}
            }
        }
        let mut residue = target.clone();
        if cfg.reduce_fallback {
            let r = self.reduce(target, cfg.budget);
            if r.result.is_zero() {
                return Outcome::Proved(r.trace);
            }
            residue = r.result;
        }
        Outcome::Inconclusive { expansions: search.expansions, residue }
    }
}

enum Dfs {
    Found,
    Budget,
    Exhausted,
}

struct Search<'a> {
    prover: &'a Prover,
    expansions: usize,
    budget: usize,
    /// canonical polynomial → largest remaining depth already explored
    memo: HashMap<NCPolynomial, usize>,
    /// moves of the found proof, innermost first
    path: Vec<Move>,
}

impl Search<'_> {
    fn dfs(&mut self, p: &NCPolynomial, depth: usize) -> Dfs {
        if p.is_zero() {
            return Dfs::Found;
        }
        if depth == 0 {
            return Dfs::Exhausted;
        }
        if self.expansions >= self.budget {
            return Dfs::Budget;
        }
        self.expansions += 1;
        for m in self.prover.moves(p) {
            let (w, c) = Prover::word_at(p, m.term);
            let child = self.prover.apply(p, &w, &c, &m);
            let key = child.monic();
            if self.memo.get(&key).is_some_and(|&d| d >= depth - 1) {
                continue;
            }
            self.memo.insert(key, depth - 1);
            match self.dfs(&child, depth - 1) {
                Dfs::Found => {
                    self.path.push(m);
                    return Dfs::Found;
                }
                Dfs::Budget => return Dfs::Budget,
                Dfs::Exhausted => {}
            }
        }
        Dfs::Exhausted
    }
}

/// `reduce` against a presentation.
pub fn reduce(p: &NCPolynomial, pres: &Presentation, budget: usize) -> Reduction {
    Prover::new(pres).reduce(p, budget)
}

/// `check_implication` with the default depth limit and reduce fallback.
pub fn check_implication(pres: &Presentation, target: &NCPolynomial, budget: usize) -> Result<Outcome> {
    Prover::new(pres).check(target, &SearchConfig::with_budget(budget))
}

/// Verdict for one relation in an equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub relation: String,
    pub proved: bool,
    pub steps: Option<usize>,
}

/// Both directions of a presentation comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// relations of Q derived from P
    pub q_from_p: Vec<RelationVerdict>,
    /// relations of P derived from Q
    pub p_from_q: Vec<RelationVerdict>,
}

impl EquivalenceReport {
    pub fn forward_all(&self) -> bool {
        self.q_from_p.iter().all(|v| v.proved)
    }

    pub fn backward_all(&self) -> bool {
        self.p_from_q.iter().all(|v| v.proved)
    }
}

/// Derives each relation of one presentation from the other, both ways.
pub fn derive_all(from: &Presentation, to: &Presentation, cfg: &SearchConfig, exec: Exec) -> Vec<(NCPolynomial, Outcome)> {
    let prover = Prover::new(from);
    let targets: Vec<NCPolynomial> = to.relations().iter().map(|r| r.poly.clone()).collect();
    let outs = exec.map_slice(&targets, |t| prover.check_unchecked(t, cfg));
    targets.into_iter().zip(outs).collect()
}

pub fn check_presentation_equivalence(
    p: &Presentation,
    q: &Presentation,
    cfg: &SearchConfig,
    exec: Exec,
) -> Result<EquivalenceReport> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{} vs {}", p.name, q.name)));
    }
    let verdicts = |v: Vec<(NCPolynomial, Outcome)>| {
        v.into_iter()
            .map(|(r, o)| RelationVerdict {
                relation: r.to_string(),
                proved: o.is_proved(),
                steps: o.trace().map(|t| t.len()),
            })
            .collect()
    };
    Ok(EquivalenceReport {
        q_from_p: verdicts(derive_all(p, q, cfg, exec)),
        p_from_q: verdicts(derive_all(q, p, cfg, exec)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{make_sphere, word_poly, SphereKind};

    fn z(i: usize) -> Letter {
        Letter::z(i)
    }

    #[test]
    fn empty_presentation_leaves_input() {
        let p = Presentation::new("empty", vec![crate::presentations::GeneratorDecl::Sphere(2)]);
        let x = &word_poly(&[z(1), z(2)]) - &word_poly(&[z(2)]);
        let r = reduce(&x, &p, 100);
        assert_eq!(r.result, x);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn sharp_chain() {
        let p = make_sphere(SphereKind::CSharp, 3).unwrap();
        let t = &word_poly(&[z(1), z(2).star(), z(3)]) - &word_poly(&[z(3), z(2).star(), z(1)]);
        let o = check_implication(&p, &t, DEFAULT_BUDGET).unwrap();
        let tr = o.trace().expect("proved");
        assert!(tr.len() <= 3, "{} steps", tr.len());
        assert!(replay(&p, &tr.start, &tr.steps).unwrap().is_zero());
    }

    #[test]
    fn plain_triple_not_derivable_from_cstar() {
        let p = make_sphere(SphereKind::CStar, 3).unwrap();
        let t = &word_poly(&[z(1), z(2), z(3)]) - &word_poly(&[z(3), z(2), z(1)]);
        let o = check_implication(&p, &t, 2_000).unwrap();
        assert!(!o.is_proved());
    }

    #[test]
    fn ill_formed_target_rejected() {
        let p = make_sphere(SphereKind::CStar, 2).unwrap();
        assert!(check_implication(&p, &word_poly(&[z(5)]), 10).is_err());
    }

    #[test]
    fn rules_are_decreasing() {
        let p = make_sphere(SphereKind::CStarStar, 2).unwrap();
        for r in Prover::new(&p).rules() {
            assert!(r.rhs.words().all(|w| *w < r.lhs));
        }
    }

    #[test]
    fn deterministic_traces() {
        let p = make_sphere(SphereKind::CSharp, 2).unwrap();
        let t = &word_poly(&[z(1), z(2).star(), z(2)]) - &word_poly(&[z(2), z(2).star(), z(1)]);
        let a = check_implication(&p, &t, 500).unwrap();
        let b = check_implication(&p, &t, 500).unwrap();
        assert_eq!(a, b);
    }
}
