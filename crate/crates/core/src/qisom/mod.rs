//! Quantum isometries: coaction expansion, coefficient conditions over
//! equality patterns, and their saturation under antipode, involution and
//! relabelling.
//!
//! Abstract statements are polynomials in `u_{r,c}` where the row index
//! `r ∈ 1..=k` stands for the abstract letters `i, j, k` and the column
//! index `c` for `a, b, c`. A statement is tied to an exact equality class
//! of the indices; inside one class, distinct abstract letters always denote
//! distinct concrete indices, so class-wise linear algebra is sound.

mod coaction;
mod saturate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{Family, Letter, NCPolynomial, TensorPolynomial, Word};
use crate::presentations::{make_sphere, SphereKind};
use crate::scalar::Scalar;

pub use coaction::{
    isometry_pipeline, verify_coaction_numeric, verify_coaction_symbolic, Closure, CoactionVerdict,
    LeftCoefficient, PipelineReport, PipelineStage, RelationCoaction,
};
pub use saturate::{
    check_step_instances, replay_saturation, saturate, SatItem, SatOp, SatStep, Saturation, DEFAULT_SAT_BUDGET,
};

/// Which coordinate products a condition family talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    /// `z_a z_b^× z_c` with `×` plain (`false`) or starred (`true`)
    Triple { star: bool },
    /// `z_a z_b*`
    PairRight,
    /// `z_a* z_b`
    PairLeft,
}

impl Shape {
    pub fn degree(self) -> usize {
        match self {
            Shape::Triple { .. } => 3,
            _ => 2,
        }
    }

    /// Star flag per position.
    pub fn stars(self) -> Vec<bool> {
        match self {
            Shape::Triple { star } => vec![false, star, false],
            Shape::PairRight => vec![false, true],
            Shape::PairLeft => vec![true, false],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Triple { star: false } => "abc",
            Shape::Triple { star: true } => "ab*c",
            Shape::PairRight => "ab*",
            Shape::PairLeft => "a*b",
        }
    }

    /// Word `x_1^{e_1} ... x_k^{e_k}` in the given letters.
    fn word(self, ls: &[Letter]) -> Word {
        Word::new(ls.iter().zip(self.stars()).map(|(&l, s)| l.with_star(s)).collect())
    }

    /// `w(x) − w(reversed x)`: the bracket `[x_1, .., x_k]` of this shape.
    pub fn bracket(self, ls: &[Letter]) -> NCPolynomial {
        let rev: Vec<Letter> = ls.iter().rev().cloned().collect();
        &NCPolynomial::word(self.word(ls)) - &NCPolynomial::word(self.word(&rev))
    }

    /// The sphere relation on rows `r`.
    pub fn sphere_relation(self, rows: &[usize]) -> NCPolynomial {
        self.bracket(&rows.iter().map(|&i| Letter::z(i)).collect::<Vec<_>>())
    }

    /// The abstract target `[u_{1,1}, u_{2,2}, ...]`.
    pub fn target(self) -> NCPolynomial {
        let k = self.degree();
        self.bracket(&(1..=k).map(|r| Letter::u(r, r)).collect::<Vec<_>>())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sphere/shape pairs whose `first ≤ last` monomials are declared
/// independent; the numerical evidence is `models::gram_rank`.
pub fn declared_basis(sphere: SphereKind, shape: Shape) -> bool {
    use SphereKind::*;
    matches!(
        (sphere, shape),
        (CStarStar, Shape::Triple { .. })
            | (CStar, Shape::Triple { star: true })
            | (CCirc, Shape::Triple { star: false })
            | (CCirc, Shape::PairRight | Shape::PairLeft)
            | (CSharp, Shape::PairRight | Shape::PairLeft)
    )
}

/// Restricted-growth string of a tuple: `[5, 2, 5] → [0, 1, 0]`.
pub fn rgs<T: PartialEq>(t: &[T]) -> Vec<u8> {
    let mut seen: Vec<&T> = Vec::new();
    t.iter()
        .map(|x| match seen.iter().position(|y| *y == x) {
            Some(p) => p as u8,
            None => {
                seen.push(x);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

fn all_rgs(k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8]];
    for _ in 1..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                let m = *v.iter().max().unwrap();
                (0..=m + 1).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Exact equality class of row and column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqualityPattern {
    pub rows: Vec<u8>,
    pub cols: Vec<u8>,
}

impl EqualityPattern {
    pub fn new(rows: Vec<u8>, cols: Vec<u8>) -> Self {
        EqualityPattern { rows: rgs(&rows), cols: rgs(&cols) }
    }

    /// All `B_k²` classes at degree `k`.
    pub fn all(k: usize) -> Vec<EqualityPattern> {
        let parts = all_rgs(k);
        parts
            .iter()
            .flat_map(|r| parts.iter().map(move |c| EqualityPattern { rows: r.clone(), cols: c.clone() }))
            .collect()
    }

    pub fn of_tuple(rows: &[usize], cols: &[usize]) -> Self {
        EqualityPattern { rows: rgs(rows), cols: rgs(cols) }
    }

    pub fn degree(&self) -> usize {
        self.rows.len()
    }

    /// 1-based position of the first member of `p`'s block.
    fn rep(part: &[u8], p: usize) -> usize {
        part.iter().position(|&b| b == part[p - 1]).unwrap() + 1
    }

    /// Maps abstract letters onto block representatives of this class.
    pub fn canonicalize(&self, p: &NCPolynomial) -> NCPolynomial {
        p.map_letters(|l| {
            debug_assert_eq!(l.family, Family::U);
            Letter::u(Self::rep(&self.rows, l.i()), Self::rep(&self.cols, l.j())).with_star(l.starred)
        })
    }

    /// Whether every equality of `finer` also holds here.
    pub fn coarsens(&self, finer: &EqualityPattern) -> bool {
        let ok = |coarse: &[u8], fine: &[u8]| {
            (0..fine.len()).all(|x| (0..fine.len()).all(|y| fine[x] != fine[y] || coarse[x] == coarse[y]))
        };
        ok(&self.rows, &finer.rows) && ok(&self.cols, &finer.cols)
    }

    pub fn transpose(&self) -> EqualityPattern {
        EqualityPattern { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// Pattern after moving position `x` to `perm[x]` (0-based images).
    pub fn permute(&self, rperm: &[usize], cperm: &[usize]) -> EqualityPattern {
        let apply = |part: &[u8], perm: &[usize]| {
            let mut out = vec![0u8; part.len()];
            for (x, &b) in part.iter().enumerate() {
                out[perm[x]] = b;
            }
            rgs(&out)
        };
        EqualityPattern { rows: apply(&self.rows, rperm), cols: apply(&self.cols, cperm) }
    }

    /// Concrete index tuples at size `n` realising this class exactly.
    pub fn tuples(&self, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let assign = |part: &[u8]| -> Vec<Vec<usize>> {
            let blocks = *part.iter().max().unwrap() as usize + 1;
            let mut vals: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..blocks {
                vals = vals
                    .into_iter()
                    .flat_map(|v| {
                        let free: Vec<usize> = (1..=n).filter(|x| !v.contains(x)).collect();
                        free.into_iter().map(move |x| [v.clone(), vec![x]].concat())
                    })
                    .collect();
            }
            vals.into_iter().map(|v| part.iter().map(|&b| v[b as usize]).collect()).collect()
        };
        let rows = assign(&self.rows);
        let cols = assign(&self.cols);
        rows.iter().flat_map(|r| cols.iter().map(move |c| (r.clone(), c.clone()))).collect()
    }
}

const ROW_NAMES: [char; 3] = ['i', 'j', 'k'];
const COL_NAMES: [char; 3] = ['a', 'b', 'c'];

impl fmt::Display for EqualityPattern {
    /// `iik/aba`: each position shows its block representative.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.rows.len() {
            write!(f, "{}", ROW_NAMES[Self::rep(&self.rows, p) - 1])?;
        }
        write!(f, "/")?;
        for p in 1..=self.cols.len() {
            write!(f, "{}", COL_NAMES[Self::rep(&self.cols, p) - 1])?;
        }
        Ok(())
    }
}

fn letter_name(l: Letter) -> String {
    let s = if l.starred { "*" } else { "" };
    format!("u_{}{}{s}", ROW_NAMES[l.i() - 1], COL_NAMES[l.j() - 1])
}

/// One signed bracket of a statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketTerm {
    pub coeff: String,
    /// `(row, col)` per factor, 1-based abstract labels
    pub factors: Vec<(usize, usize)>,
}

/// Splits an abstract statement into brackets of `shape`, if possible.
pub fn as_brackets(p: &NCPolynomial, shape: Shape) -> Option<Vec<BracketTerm>> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    while let Some((w, c)) = rest.leading().map(|(w, c)| (w.clone(), c.clone())) {
        let mut ls: Vec<Letter> = w.letters().iter().map(|l| l.base()).collect();
        if shape.word(&ls) != w {
            return None;
        }
        // orient so the first factor has the smaller (column, row)
        let key = |l: &Letter| (l.j(), l.i());
        if key(ls.last().unwrap()) < key(&ls[0]) {
            ls.reverse();
        }
        let b = shape.bracket(&ls);
        if b.is_zero() {
            return None;
        }
        // the leading word of `b` is either w or its reversal
        let lead_coeff = b.coefficient(&w);
        let lambda = &c / &lead_coeff;
        rest = &rest - &b.scale(&lambda);
        out.push(BracketTerm { coeff: lambda.to_string(), factors: ls.iter().map(|l| (l.i(), l.j())).collect() });
    }
    Some(out)
}

/// Renders a statement as `[u_ia,u_jb,u_kc] - [u_ka,u_jb,u_ic]` when it is
/// a combination of brackets, else as a plain polynomial over `u_ia` names.
pub fn render_statement(p: &NCPolynomial, shape: Shape) -> String {
    if p.is_zero() {
        return "0".into();
    }
    if let Some(bs) = as_brackets(p, shape) {
        let mut s = String::new();
        for (k, b) in bs.iter().enumerate() {
            let inner: Vec<String> = b
                .factors
                .iter()
                .map(|&(r, c)| format!("u_{}{}", ROW_NAMES[r - 1], COL_NAMES[c - 1]))
                .collect();
            let (sign, mag) = match b.coeff.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", b.coeff.clone()),
            };
            let mag = if mag == "1" { String::new() } else { format!("{mag} ") };
            match (k, sign) {
                (0, "+") => {}
                (0, _) => s.push('-'),
                (_, sg) => s.push_str(&format!(" {sg} ")),
            }
            s.push_str(&format!("{mag}[{}]", inner.join(",")));
        }
        return s;
    }
    let mut s = String::new();
    for (k, (w, c)) in p.terms().rev().enumerate() {
        if k > 0 {
            s.push_str(" + ");
        }
        let names: Vec<String> = w.letters().iter().map(|&l| letter_name(l)).collect();
        s.push_str(&format!("({c}) {}", names.join(" ")));
    }
    s
}

/// `z_i → Σ_a u_ia ⊗ z_a` applied to a sphere polynomial.
pub fn expand_coaction(rel: &NCPolynomial, n: usize) -> Result<TensorPolynomial> {
    if rel.degree() > 3 {
        return Err(Error::Invalid(format!("coaction expansion supports degree ≤ 3, got {}", rel.degree())));
    }
    let image = |l: Letter| -> Result<TensorPolynomial> {
        if l.family != Family::Z || l.i() > n {
            return Err(Error::Undeclared(l.to_string()));
        }
        let mut t = TensorPolynomial::zero();
        for a in 1..=n {
            t.add_term(Word::new(vec![Letter::u(l.i(), a).with_star(l.starred)]), Word::new(vec![Letter::z(a).with_star(l.starred)]), &Scalar::one());
        }
        Ok(t)
    };
    let mut out = TensorPolynomial::zero();
    for (w, c) in rel.terms() {
        let mut acc = TensorPolynomial::one();
        for &l in w.letters() {
            acc = &acc * &image(l)?;
        }
        out = &out + &acc.scale(c);
    }
    Ok(out)
}

/// Right-leg normal forms for one shape over `z_1..z_n`, using only the
/// sphere's homogeneous binomial relations of that degree.
pub struct RightNormalizer {
    rules: BTreeMap<Word, Word>,
}

impl RightNormalizer {
    pub fn new(sphere: &crate::presentations::Presentation, degree: usize) -> Self {
        let mut rules = BTreeMap::new();
        for r in sphere.relations() {
            let ts: Vec<(&Word, &Scalar)> = r.poly.terms().collect();
            if ts.len() == 2 && ts.iter().all(|(w, _)| w.len() == degree) && (ts[0].1 + ts[1].1).is_zero() {
                // monic: the larger word rewrites to the smaller
                rules.insert(ts[1].0.clone(), ts[0].0.clone());
            }
        }
        RightNormalizer { rules }
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        while let Some(next) = self.rules.get(&cur) {
            cur = next.clone();
        }
        cur
    }
}

fn is_basis_word(w: &Word) -> bool {
    let ls = w.letters();
    ls.first().map(|l| l.i()) <= ls.last().map(|l| l.i())
}

/// Left coefficient of every basis right word, after normalising right legs.
pub fn normalized_coefficients(t: &TensorPolynomial, norm: &RightNormalizer) -> BTreeMap<Word, NCPolynomial> {
    let mut out: BTreeMap<Word, NCPolynomial> = BTreeMap::new();
    for (l, r, c) in t.terms() {
        out.entry(norm.normal_form(r)).or_default().add_term(l.clone(), c);
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// A condition family: one abstract statement valid on a set of classes.
#[derive(Clone, Debug, Serialize)]
pub struct SchemaRelation {
    pub id: usize,
    pub shape: Shape,
    #[serde(serialize_with = "ser_poly")]
    pub statement: NCPolynomial,
    pub rendered: String,
    /// the column pattern the statement is written in
    pub pattern: EqualityPattern,
    pub scope: Vec<EqualityPattern>,
    pub origin: String,
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &NCPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Reads a statement over `u_rc`, `r, c ≤ 3`.
pub(crate) fn de_poly<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<NCPolynomial, D::Error> {
    let alphabet = crate::ncpoly::Alphabet::new(crate::presentations::Coordinates::Matrix(3).letters());
    crate::dsl::parse_polynomial(&String::deserialize(d)?, &alphabet).map_err(serde::de::Error::custom)
}

/// Per-class conditions and the merged families.
#[derive(Clone, Debug, Serialize)]
pub struct Collected {
    pub shape: Shape,
    pub sphere: String,
    /// the independence axiom the read-off depends on
    pub basis_axiom: String,
    #[serde(skip)]
    pub per_class: BTreeMap<EqualityPattern, NCPolynomial>,
    pub families: Vec<SchemaRelation>,
}

/// Abstracts a concrete coefficient at `(rows, cols)` to canonical letters.
fn abstract_coefficient(p: &NCPolynomial, rows: &[usize], cols: &[usize]) -> NCPolynomial {
    let rpos = |v: usize| rows.iter().position(|&x| x == v).expect("row value from tuple") + 1;
    let cpos = |v: usize| cols.iter().position(|&x| x == v).expect("column value from tuple") + 1;
    p.map_letters(|l| Letter::u(rpos(l.i()), cpos(l.j())).with_star(l.starred))
}

/// Instantiates an abstract statement at concrete indices.
pub fn instantiate(p: &NCPolynomial, rows: &[usize], cols: &[usize]) -> NCPolynomial {
    p.map_letters(|l| Letter::u(rows[l.i() - 1], cols[l.j() - 1]).with_star(l.starred))
}

/// Whether `a` is a nonzero multiple of `b` or both vanish.
fn proportional(a: &NCPolynomial, b: &NCPolynomial) -> bool {
    match (a.leading(), b.leading()) {
        (None, None) => true,
        (Some((wa, ca)), Some((wb, cb))) if wa == wb => a == &b.scale(&(ca / cb)),
        _ => false,
    }
}

/// Reads the coefficient conditions off the expanded sphere relations at
/// `N = 3` and merges them into families over column patterns.
pub fn collect_conditions(shape: Shape, sphere: SphereKind) -> Result<Collected> {
    let k = shape.degree();
    if !declared_basis(sphere, shape) {
        return Err(Error::NoBasis(format!("{} has no declared {} monomial basis", sphere.name(), shape.name())));
    }
    let n = 3;
    let pres = make_sphere(sphere, n)?;
    let norm = RightNormalizer::new(&pres, k);
    // every shape word must normalise into the declared basis and basis words must be normal
    for cols in index_tuples(n, k) {
        let w = shape.word(&cols.iter().map(|&a| Letter::z(a)).collect::<Vec<_>>());
        let nf = norm.normal_form(&w);
        if !is_basis_word(&nf) || (is_basis_word(&w) && nf != w) {
            return Err(Error::NoBasis(format!("{}: {w} normalises to {nf}", sphere.name())));
        }
    }
    let mut per_class: BTreeMap<EqualityPattern, NCPolynomial> = BTreeMap::new();
    for rows in index_tuples(n, k) {
        let t = expand_coaction(&shape.sphere_relation(&rows), n)?;
        let coeffs = normalized_coefficients(&t, &norm);
        for cols in index_tuples(n, k) {
            let w = shape.word(&cols.iter().map(|&a| Letter::z(a)).collect::<Vec<_>>());
            if !is_basis_word(&w) {
                continue;
            }
            let coeff = coeffs.get(&w).cloned().unwrap_or_default();
            let class = EqualityPattern::of_tuple(&rows, &cols);
            let abs = abstract_coefficient(&coeff, &rows, &cols);
            match per_class.get(&class) {
                Some(prev) if prev != &abs => {
                    return Err(Error::Invalid(format!("class {class} read off inconsistently: {prev} vs {abs}")));
                }
                Some(_) => {}
                None => {
                    per_class.insert(class, abs);
                }
            }
        }
    }
    // one candidate family per column partition, written with distinct rows
    let distinct_rows: Vec<u8> = (0..k as u8).collect();
    let classes = EqualityPattern::all(k);
    let mut families: Vec<SchemaRelation> = Vec::new();
    let mut parts = all_rgs(k);
    // finest column patterns first, so the generic statement leads
    parts.sort_by_key(|p| std::cmp::Reverse(*p.iter().max().unwrap()));
    for cols in parts {
        let home = EqualityPattern { rows: distinct_rows.clone(), cols: cols.clone() };
        let statement = per_class[&home].clone();
        if statement.is_zero() {
            continue;
        }
        let scope: Vec<EqualityPattern> = classes
            .iter()
            .filter(|c| c.coarsens(&home))
            .filter(|c| proportional(&c.canonicalize(&statement), &per_class[*c]))
            .cloned()
            .collect();
        // the generic family is kept to its own class here: merged boundary
        // cases stay separate families unless a non-generic one absorbs them
        let covered = scope.iter().all(|c| {
            let mine = c.canonicalize(&statement);
            families
                .iter()
                .skip(1)
                .any(|f| f.scope.contains(c) && proportional(&mine, &c.canonicalize(&f.statement)))
        });
        let relabelled = families.iter().any(|f| relabel_equivalent(&f.statement, &f.pattern, &statement, &home));
        if covered || relabelled {
            continue;
        }
        families.push(SchemaRelation {
            id: families.len(),
            shape,
            rendered: render_statement(&statement, shape),
            statement,
            pattern: home,
            scope,
            origin: format!("coefficient read-off over {}", sphere.name()),
        });
    }
    // every class must be accounted for by some family up to relabelling
    for (c, p) in &per_class {
        let ok = p.is_zero()
            || families.iter().any(|f| {
                permutations(k).iter().any(|rp| {
                    permutations(k).iter().any(|cp| {
                        let moved = f.pattern.permute(rp, cp);
                        let s = relabel(&f.statement, rp, cp);
                        c.coarsens(&moved) && proportional(&c.canonicalize(&s), p)
                    })
                })
            });
        if !ok {
            return Err(Error::Invalid(format!("class {c} not covered by any family")));
        }
    }
    Ok(Collected {
        shape,
        sphere: sphere.name().to_string(),
        basis_axiom: format!("independence of {{{}: first ≤ last}} over {}", shape.name(), sphere.name()),
        per_class,
        families,
    })
}

/// All `k`-tuples over `1..=n`.
pub(crate) fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::presentations::tuples(n, k).into_iter().map(|t| t.into_iter().map(|x| x + 1).collect()).collect()
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let free: Vec<usize> = (0..k).filter(|x| !v.contains(x)).collect();
                free.into_iter().map(move |x| [v.clone(), vec![x]].concat())
            })
            .collect();
    }
    out
}

/// Renames abstract letters: row `r` becomes `rperm[r-1]+1`, likewise columns.
pub fn relabel(p: &NCPolynomial, rperm: &[usize], cperm: &[usize]) -> NCPolynomial {
    p.map_letters(|l| Letter::u(rperm[l.i() - 1] + 1, cperm[l.j() - 1] + 1).with_star(l.starred))
}

fn relabel_equivalent(a: &NCPolynomial, pa: &EqualityPattern, b: &NCPolynomial, pb: &EqualityPattern) -> bool {
    let k = pa.degree();
    permutations(k).iter().any(|rp| {
        permutations(k).iter().any(|cp| pa.permute(rp, cp) == *pb && proportional(&pb.canonicalize(&relabel(a, rp, cp)), b))
    })
}

/// Antipode on abstract statements: `u_{r,c} → u_{c,r}*`, order reversed.
pub fn antipode(p: &NCPolynomial) -> NCPolynomial {
    let mut out = NCPolynomial::zero();
    for (w, c) in p.terms() {
        let ls: Vec<Letter> =
            w.letters().iter().rev().map(|l| Letter::u(l.j(), l.i()).with_star(!l.starred)).collect();
        out.add_term(Word::new(ls), c);
    }
    out
}

/// The concrete classes whose target is not yet derived.
pub fn classes_of(k: usize) -> BTreeSet<EqualityPattern> {
    EqualityPattern::all(k).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        assert_eq!(EqualityPattern::all(3).len(), 25);
        assert_eq!(EqualityPattern::all(2).len(), 4);
        assert_eq!(rgs(&[5, 2, 5]), vec![0, 1, 0]);
    }

    #[test]
    fn tuples_realise_their_class() {
        for c in EqualityPattern::all(3) {
            let ts = c.tuples(3);
            assert!(!ts.is_empty());
            for (r, col) in ts {
                assert_eq!(EqualityPattern::of_tuple(&r, &col), c);
            }
        }
    }

    #[test]
    fn expansion_of_triple_bracket() {
        let rel = Shape::Triple { star: true }.sphere_relation(&[1, 2, 3]);
        let t = expand_coaction(&rel, 3).unwrap();
        // 27 right words, two left terms each
        assert_eq!(t.len(), 54);
        let z = Letter::z;
        let right = Word::new(vec![z(1), z(2).star(), z(1)]);
        let u = Letter::u;
        let want = &NCPolynomial::from_letters(&[u(1, 1), u(2, 2).star(), u(3, 1)])
            - &NCPolynomial::from_letters(&[u(3, 1), u(2, 2).star(), u(1, 1)]);
        assert_eq!(t.by_right()[&right], want);
        assert!(expand_coaction(&NCPolynomial::zero(), 3).unwrap().is_zero());
        let deg4 = NCPolynomial::from_letters(&[z(1); 4]);
        assert!(expand_coaction(&deg4, 2).is_err());
    }

    #[test]
    fn degree_three_families() {
        for (sphere, star) in [(SphereKind::CStar, true), (SphereKind::CCirc, false), (SphereKind::CStarStar, true)] {
            let c = collect_conditions(Shape::Triple { star }, sphere).unwrap();
            assert_eq!(c.families.len(), 3, "{sphere}: {:#?}", c.families);
            let cols: Vec<String> = c.families.iter().map(|f| f.pattern.to_string()).collect();
            assert_eq!(cols, ["ijk/abc", "ijk/aac", "ijk/aba"]);
            let sh = Shape::Triple { star };
            let u = Letter::u;
            let br = |a: [(usize, usize); 3]| sh.bracket(&a.map(|(r, c)| u(r, c)));
            assert_eq!(c.families[0].statement, &br([(1, 1), (2, 2), (3, 3)]) - &br([(3, 1), (2, 2), (1, 3)]));
            assert_eq!(c.families[1].statement, &br([(1, 1), (2, 1), (3, 3)]) - &br([(3, 1), (2, 1), (1, 3)]));
            assert_eq!(c.families[2].statement, br([(1, 1), (2, 2), (3, 1)]));
        }
    }

    #[test]
    fn degree_two_families() {
        let c = collect_conditions(Shape::PairRight, SphereKind::CSharp).unwrap();
        assert_eq!(c.families.len(), 2);
        let u = Letter::u;
        let d = |x: Letter, y: Letter| Shape::PairRight.bracket(&[x, y]);
        assert_eq!(c.families[0].statement, &d(u(1, 1), u(2, 2)) - &d(u(2, 1), u(1, 2)));
        assert_eq!(c.families[1].statement, d(u(1, 1), u(2, 1)));
    }

    #[test]
    fn no_basis_is_an_error() {
        assert!(matches!(collect_conditions(Shape::Triple { star: false }, SphereKind::C), Err(Error::NoBasis(_))));
        assert!(matches!(collect_conditions(Shape::PairRight, SphereKind::CStar), Err(Error::NoBasis(_))));
    }

    #[test]
    fn rendering() {
        let c = collect_conditions(Shape::Triple { star: true }, SphereKind::CStar).unwrap();
        assert_eq!(c.families[0].rendered, "[u_ia,u_jb,u_kc] - [u_ka,u_jb,u_ic]");
        assert_eq!(c.families[2].rendered, "[u_ia,u_jb,u_ka]");
    }

    #[test]
    fn antipode_is_an_involution_up_to_star() {
        let p = Shape::Triple { star: true }.target();
        assert_eq!(antipode(&antipode(&p)), p);
    }
}
