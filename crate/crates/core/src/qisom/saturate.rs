//! Breadth-first closure of class-wise statements under antipode,
//! involution and relabelling, with exact per-class linear spans.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{antipode, de_poly, expand_coaction, instantiate, proportional, relabel, ser_poly, Collected, EqualityPattern, Shape};
use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPolynomial, Word};
use crate::par::Exec;
use crate::scalar::Scalar;

/// Default cap on derived statements.
pub const DEFAULT_SAT_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SatOp {
    /// a collected family on its own class
    Given { family: usize },
    /// a collected family merged onto a coarser class
    Specialize { family: usize },
    Antipode,
    Involution,
    /// label `x` becomes `rows[x]` (rows) and `cols[x]` (columns), 0-based
    Relabel { rows: Vec<usize>, cols: Vec<usize> },
    /// output = Σ coeffs[t] · inputs[t]
    Combine {
        #[serde(serialize_with = "ser_scalars", deserialize_with = "de_scalars")]
        coeffs: Vec<Scalar>,
    },
}

fn ser_scalars<S: serde::Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn de_scalars<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
    let empty = crate::ncpoly::Alphabet::new([]);
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|t| {
            let p = crate::dsl::parse_polynomial(t, &empty).map_err(serde::de::Error::custom)?;
            Ok(p.coefficient(&Word::empty()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatItem {
    pub class: EqualityPattern,
    #[serde(serialize_with = "ser_poly", deserialize_with = "de_poly")]
    pub statement: NCPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatStep {
    pub id: usize,
    #[serde(flatten)]
    pub op: SatOp,
    pub inputs: Vec<usize>,
    pub output: SatItem,
}

/// Result of [`saturate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    pub shape: Shape,
    pub steps: Vec<SatStep>,
    /// class → id of the combine step deriving the target there
    pub proofs: BTreeMap<String, Option<usize>>,
    /// target derived on every class
    pub global: bool,
    /// the statement budget ran out
    pub exhausted: bool,
    /// statements other than combine steps
    pub derived: usize,
}

impl Saturation {
    pub fn proved_classes(&self) -> usize {
        self.proofs.values().filter(|p| p.is_some()).count()
    }
}

type Combo = BTreeMap<usize, Scalar>;

fn combo_axpy(acc: &mut Combo, c: &Scalar, x: &Combo) {
    for (id, v) in x {
        let e = acc.entry(*id).or_insert_with(Scalar::zero);
        *e += &(c * v);
        if e.is_zero() {
            acc.remove(id);
        }
    }
}

/// Reduced rows keyed by pivot (leading word), with provenance.
#[derive(Default)]
struct Span {
    rows: BTreeMap<Word, (NCPolynomial, Combo)>,
}

impl Span {
    /// `(p − Σ c·row, Σ c·combo(row))`
    fn reduce(&self, p: &NCPolynomial) -> (NCPolynomial, Combo) {
        let mut cur = p.clone();
        let mut acc = Combo::new();
        loop {
            let hit = cur.terms().rev().find(|(w, _)| self.rows.contains_key(*w)).map(|(w, c)| (w.clone(), c.clone()));
            let Some((w, c)) = hit else { break };
            let (row, combo) = &self.rows[&w];
            cur = &cur - &row.scale(&c);
            combo_axpy(&mut acc, &c, combo);
        }
        (cur, acc)
    }

    /// Inserts item `id` unless it already lies in the span.
    fn insert(&mut self, id: usize, p: &NCPolynomial) -> bool {
        let (rem, acc) = self.reduce(p);
        let Some((lead, lc)) = rem.leading().map(|(w, c)| (w.clone(), c.clone())) else {
            return false;
        };
        let mut combo = Combo::from([(id, Scalar::one())]);
        combo_axpy(&mut combo, &-Scalar::one(), &acc);
        let inv = lc.inv().expect("nonzero leading coefficient");
        let combo = combo.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        self.rows.insert(lead, (rem.scale(&inv), combo));
        true
    }
}

fn transpositions(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let id: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    for x in 0..k - 1 {
        let mut t = id.clone();
        t.swap(x, x + 1);
        out.push((t.clone(), id.clone()));
        out.push((id.clone(), t));
    }
    out
}

fn apply_op(op: &SatOp, input: &SatItem) -> SatItem {
    let (class, statement) = match op {
        SatOp::Antipode => (input.class.transpose(), antipode(&input.statement)),
        SatOp::Involution => (input.class.clone(), input.statement.star()),
        SatOp::Relabel { rows, cols } => (input.class.permute(rows, cols), relabel(&input.statement, rows, cols)),
        _ => unreachable!("unary transformations only"),
    };
    SatItem { statement: class.canonicalize(&statement), class }
}

struct Engine {
    spans: HashMap<EqualityPattern, Span>,
    steps: Vec<SatStep>,
    queue: VecDeque<usize>,
}

impl Engine {
    fn add(&mut self, op: SatOp, inputs: Vec<usize>, output: SatItem) {
        let id = self.steps.len();
        if self.spans.entry(output.class.clone()).or_default().insert(id, &output.statement) {
            self.steps.push(SatStep { id, op, inputs, output });
            self.queue.push_back(id);
        }
    }

    fn expresses(&self, class: &EqualityPattern, t: &NCPolynomial) -> Option<Combo> {
        if t.is_zero() {
            return Some(Combo::new());
        }
        let (rem, acc) = self.spans.get(class)?.reduce(t);
        rem.is_zero().then_some(acc)
    }
}

/// Closes the collected families and tries to express the target bracket
/// on every equality class.
pub fn saturate(collected: &Collected, budget: usize) -> Result<Saturation> {
    if budget == 0 {
        return Err(Error::Invalid("saturation budget must be at least 1".into()));
    }
    let shape = collected.shape;
    let k = shape.degree();
    let targets: BTreeMap<EqualityPattern, NCPolynomial> =
        EqualityPattern::all(k).into_iter().map(|c| (c.clone(), c.canonicalize(&shape.target()))).collect();
    let mut eng = Engine { spans: HashMap::new(), steps: Vec::new(), queue: VecDeque::new() };
    for (fid, f) in collected.families.iter().enumerate() {
        for c in &f.scope {
            let op = if *c == f.pattern { SatOp::Given { family: fid } } else { SatOp::Specialize { family: fid } };
            eng.add(op, vec![], SatItem { class: c.clone(), statement: c.canonicalize(&f.statement) });
        }
    }
    let mut ops = vec![SatOp::Antipode, SatOp::Involution];
    ops.extend(transpositions(k).into_iter().map(|(rows, cols)| SatOp::Relabel { rows, cols }));
    let mut exhausted = false;
    let mut pending: Vec<&EqualityPattern> = targets.keys().collect();
    'bfs: while let Some(id) = eng.queue.pop_front() {
        pending.retain(|c| eng.expresses(c, &targets[*c]).is_none());
        if pending.is_empty() {
            break;
        }
        for op in &ops {
            if eng.steps.len() >= budget {
                exhausted = true;
                break 'bfs;
            }
            let out = apply_op(op, &eng.steps[id].output);
            eng.add(op.clone(), vec![id], out);
        }
    }
    let derived = eng.steps.len();
    let mut proofs = BTreeMap::new();
    for (c, t) in &targets {
        let proof = eng.expresses(c, t).map(|acc| {
            let id = eng.steps.len();
            let (inputs, coeffs): (Vec<usize>, Vec<Scalar>) = acc.into_iter().unzip();
            eng.steps.push(SatStep {
                id,
                op: SatOp::Combine { coeffs },
                inputs,
                output: SatItem { class: c.clone(), statement: t.clone() },
            });
            id
        });
        proofs.insert(c.to_string(), proof);
    }
    let global = proofs.values().all(|p| p.is_some());
    Ok(Saturation { shape, steps: eng.steps, proofs, global, exhausted: exhausted && !global, derived })
}

/// Re-derives every step from its inputs and the collected families.
pub fn replay_saturation(collected: &Collected, sat: &Saturation) -> Result<()> {
    let bad = |id: usize, why: &str| Err(Error::Invalid(format!("saturation step {id}: {why}")));
    for (pos, s) in sat.steps.iter().enumerate() {
        if s.id != pos {
            return bad(pos, "ids out of order");
        }
        if s.inputs.iter().any(|&i| i >= pos || matches!(sat.steps[i].op, SatOp::Combine { .. })) {
            return bad(pos, "input is not an earlier statement");
        }
        let want = match &s.op {
            SatOp::Given { family } | SatOp::Specialize { family } => {
                let Some(f) = collected.families.get(*family) else { return bad(pos, "unknown family") };
                if !f.scope.contains(&s.output.class) || (matches!(s.op, SatOp::Given { .. }) != (f.pattern == s.output.class)) {
                    return bad(pos, "class outside the family scope");
                }
                SatItem { class: s.output.class.clone(), statement: s.output.class.canonicalize(&f.statement) }
            }
            SatOp::Combine { coeffs } => {
                if coeffs.len() != s.inputs.len() {
                    return bad(pos, "coefficient count");
                }
                let mut acc = NCPolynomial::zero();
                for (c, &i) in coeffs.iter().zip(&s.inputs) {
                    if sat.steps[i].output.class != s.output.class {
                        return bad(pos, "combining across classes");
                    }
                    acc = &acc + &sat.steps[i].output.statement.scale(c);
                }
                if s.output.class.canonicalize(&sat.shape.target()) != s.output.statement {
                    return bad(pos, "combine does not state the target");
                }
                SatItem { class: s.output.class.clone(), statement: acc }
            }
            op => {
                if s.inputs.len() != 1 {
                    return bad(pos, "unary step needs one input");
                }
                apply_op(op, &sat.steps[s.inputs[0]].output)
            }
        };
        if want != s.output {
            return bad(pos, "output does not match its derivation");
        }
    }
    for (class, proof) in &sat.proofs {
        if let Some(id) = proof {
            match sat.steps.get(*id) {
                Some(SatStep { op: SatOp::Combine { .. }, output, .. }) if output.class.to_string() == *class => {}
                _ => return bad(*id, "proof pointer is not a combine step for its class"),
            }
        }
    }
    Ok(())
}

/// Concrete antipode `u_ij^s → u_ji^{!s}`, order reversed.
fn concrete_antipode(p: &NCPolynomial) -> NCPolynomial {
    antipode(p)
}

/// Left coefficient of the basis word at `cols`, merged with its reversal,
/// straight from the raw expansion.
fn oracle_coefficient(shape: Shape, expansion: &BTreeMap<Word, NCPolynomial>, cols: &[usize]) -> NCPolynomial {
    let word = |cs: &[usize]| {
        Word::new(cs.iter().zip(shape.stars()).map(|(&c, s)| Letter::z(c).with_star(s)).collect())
    };
    let rev: Vec<usize> = cols.iter().rev().cloned().collect();
    let mut out = expansion.get(&word(cols)).cloned().unwrap_or_default();
    if rev != cols {
        out = &out + &expansion.get(&word(&rev)).cloned().unwrap_or_default();
    }
    out
}

/// Instantiates every step at all index tuples of its class with `N = 3`:
/// collected statements must match the raw expansion coefficients, and every
/// transformation must map concrete inputs to concrete outputs.
pub fn check_step_instances(collected: &Collected, sat: &Saturation, exec: Exec) -> Result<usize> {
    let shape = sat.shape;
    let n = 3;
    let rows_all = super::index_tuples(n, shape.degree());
    let expansions: BTreeMap<Vec<usize>, BTreeMap<Word, NCPolynomial>> = exec
        .map_slice(&rows_all, |r| expand_coaction(&shape.sphere_relation(r), n).map(|t| (r.clone(), t.by_right())))
        .into_iter()
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, Vec<usize>, Vec<usize>)> = sat
        .steps
        .iter()
        .flat_map(|s| s.output.class.tuples(n).into_iter().map(move |(r, c)| (s.id, r, c)))
        .collect();
    let verdicts = exec.map_slice(&jobs, |(id, rows, cols)| {
        let s = &sat.steps[*id];
        let got = instantiate(&s.output.statement, rows, cols);
        let input = |t: usize, r: &[usize], c: &[usize]| instantiate(&sat.steps[s.inputs[t]].output.statement, r, c);
        let ok = match &s.op {
            SatOp::Given { .. } | SatOp::Specialize { .. } => {
                proportional(&got, &oracle_coefficient(shape, &expansions[rows], cols))
            }
            SatOp::Antipode => got == concrete_antipode(&input(0, cols, rows)),
            SatOp::Involution => got == input(0, rows, cols).star(),
            SatOp::Relabel { rows: rp, cols: cp } => {
                let r: Vec<usize> = (0..rows.len()).map(|x| rows[rp[x]]).collect();
                let c: Vec<usize> = (0..cols.len()).map(|x| cols[cp[x]]).collect();
                got == input(0, &r, &c)
            }
            SatOp::Combine { coeffs } => {
                let mut acc = NCPolynomial::zero();
                for (t, c) in coeffs.iter().enumerate() {
                    acc = &acc + &input(t, rows, cols).scale(c);
                }
                got == acc
            }
        };
        (ok, *id)
    });
    if let Some((_, id)) = verdicts.iter().find(|(ok, _)| !ok) {
        return Err(Error::Invalid(format!("step {id} fails its concrete instantiation at N = 3")));
    }
    let _ = collected;
    Ok(jobs.len())
}
