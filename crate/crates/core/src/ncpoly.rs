//! Free *-algebra: letters, words, exact polynomials and two-leg tensors.
//!
//! Terms are kept in a `BTreeMap` keyed by words under graded lexicographic
//! order, so equal polynomials are structurally equal and hash alike.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Generator families. The derived order is the family part of the letter order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    /// sphere coordinate `z_i`
    Z,
    /// self-adjoint real part `x_i`
    X,
    /// self-adjoint imaginary part `y_i`
    Y,
    /// group coordinate `u_ij`
    U,
    /// free circle generator `c`
    C,
    /// projective symbol `p_xy = z_x z_y*`
    P,
    /// projective symbol `q_xy = z_y* z_x`
    Q,
}

impl Family {
    pub fn self_adjoint(self) -> bool {
        matches!(self, Family::X | Family::Y)
    }

    /// Families whose adjoint is an index swap rather than a star flag.
    pub fn swaps_on_star(self) -> bool {
        matches!(self, Family::P | Family::Q)
    }
}

/// A starred or plain generator.
///
/// Index layout: `Z`, `X`, `Y` use `[i,0,0,0]`; `U` uses `[i,j,0,0]`; `C` is
/// all zeros. `P` and `Q` hold two coordinates `[x1,x2,y1,y2]`, where a
/// sphere coordinate `i` is `(i,0)` and a matrix coordinate `ij` is `(i,j)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub family: Family,
    pub index: [u8; 4],
    pub starred: bool,
}

impl Letter {
    pub const fn new(family: Family, index: [u8; 4], starred: bool) -> Self {
        Letter { family, index, starred }
    }

    pub fn z(i: usize) -> Self {
        Letter::new(Family::Z, [i as u8, 0, 0, 0], false)
    }

    pub fn x(i: usize) -> Self {
        Letter::new(Family::X, [i as u8, 0, 0, 0], false)
    }

    pub fn y(i: usize) -> Self {
        Letter::new(Family::Y, [i as u8, 0, 0, 0], false)
    }

    pub fn u(i: usize, j: usize) -> Self {
        Letter::new(Family::U, [i as u8, j as u8, 0, 0], false)
    }

    pub fn c() -> Self {
        Letter::new(Family::C, [0; 4], false)
    }

    /// `p_ij = z_i z_j*` over sphere coordinates.
    pub fn p(i: usize, j: usize) -> Self {
        Letter::new(Family::P, [i as u8, 0, j as u8, 0], false)
    }

    /// `q_ij = z_j* z_i` over sphere coordinates.
    pub fn q(i: usize, j: usize) -> Self {
        Letter::new(Family::Q, [i as u8, 0, j as u8, 0], false)
    }

    /// `p_{ab,cd} = u_ab u_cd*` over matrix coordinates.
    pub fn p2(a: usize, b: usize, c: usize, d: usize) -> Self {
        Letter::new(Family::P, [a as u8, b as u8, c as u8, d as u8], false)
    }

    /// `q_{ab,cd} = u_cd* u_ab` over matrix coordinates.
    pub fn q2(a: usize, b: usize, c: usize, d: usize) -> Self {
        Letter::new(Family::Q, [a as u8, b as u8, c as u8, d as u8], false)
    }

    pub fn with_star(mut self, starred: bool) -> Self {
        self.starred = starred;
        self
    }

    /// Adjoint letter.
    pub fn star(self) -> Self {
        if self.family.self_adjoint() {
            self
        } else if self.family.swaps_on_star() {
            let [a, b, c, d] = self.index;
            Letter::new(self.family, [c, d, a, b], false)
        } else {
            Letter::new(self.family, self.index, !self.starred)
        }
    }

    /// The unstarred representative, used as matrix-model key.
    pub fn base(self) -> Self {
        Letter { starred: false, ..self }
    }

    pub fn i(self) -> usize {
        self.index[0] as usize
    }

    pub fn j(self) -> usize {
        self.index[1] as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.index;
        match self.family {
            Family::Z => write!(f, "z{a}")?,
            Family::X => write!(f, "x{a}")?,
            Family::Y => write!(f, "y{a}")?,
            Family::U => write!(f, "u{a}_{b}")?,
            Family::C => write!(f, "c")?,
            Family::P | Family::Q => {
                let tag = if self.family == Family::P { 'p' } else { 'q' };
                if b == 0 && d == 0 {
                    write!(f, "{tag}{a}_{c}")?
                } else {
                    write!(f, "{tag}{a}_{b}_{c}_{d}")?
                }
            }
        }
        if self.starred {
            write!(f, "*")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    /// Parses the rendered form: `z3`, `u1_2*`, `c`, `x1`, `p1_2`, `q1_1_2_1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("not a letter: `{s}`"));
        let (body, starred) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let tag = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let nums: Vec<u8> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split('_').map(|t| t.parse::<u8>().map_err(|_| bad())).collect::<Result<_>>()?
        };
        if nums.iter().any(|&k| k == 0) {
            return Err(bad());
        }
        let l = match (tag, nums.as_slice()) {
            ('z', [i]) => Letter::new(Family::Z, [*i, 0, 0, 0], false),
            ('x', [i]) => Letter::new(Family::X, [*i, 0, 0, 0], false),
            ('y', [i]) => Letter::new(Family::Y, [*i, 0, 0, 0], false),
            ('u', [i, j]) => Letter::new(Family::U, [*i, *j, 0, 0], false),
            ('c', []) => Letter::c(),
            ('p', [i, j]) => Letter::new(Family::P, [*i, 0, *j, 0], false),
            ('q', [i, j]) => Letter::new(Family::Q, [*i, 0, *j, 0], false),
            ('p', [a, b, c, d]) => Letter::new(Family::P, [*a, *b, *c, *d], false),
            ('q', [a, b, c, d]) => Letter::new(Family::Q, [*a, *b, *c, *d], false),
            _ => return Err(bad()),
        };
        if starred {
            if l.family.self_adjoint() || l.family.swaps_on_star() {
                return Err(bad());
            }
            Ok(l.star())
        } else {
            Ok(l)
        }
    }
}

/// A finite sequence of letters; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }

    /// Whether `pat` occurs at `pos`.
    pub fn matches_at(&self, pat: &[Letter], pos: usize) -> bool {
        pos + pat.len() <= self.len() && &self.0[pos..pos + pat.len()] == pat
    }

    /// `(prefix, suffix)` around a subword of length `len` at `pos`.
    pub fn split_around(&self, pos: usize, len: usize) -> (Word, Word) {
        (Word(self.0[..pos].to_vec()), Word(self.0[pos + len..].to_vec()))
    }
}

impl Ord for Word {
    /// Graded lexicographic: shorter words first, then letterwise.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Exact linear combination of words. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        NCPolynomial::default()
    }

    pub fn one() -> Self {
        NCPolynomial::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        NCPolynomial::monomial(Word::empty(), c)
    }

    pub fn letter(l: Letter) -> Self {
        NCPolynomial::monomial(Word(vec![l]), Scalar::one())
    }

    pub fn word(w: Word) -> Self {
        NCPolynomial::monomial(w, Scalar::one())
    }

    pub fn from_letters(ls: &[Letter]) -> Self {
        NCPolynomial::word(Word(ls.to_vec()))
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut p = NCPolynomial::zero();
        p.add_term(w, &c);
        p
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut p = NCPolynomial::zero();
        for (w, c) in it {
            p.add_term(w, &c);
        }
        p
    }

    /// `self += c·w`, pruning a cancelled term.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn words(&self) -> impl DoubleEndedIterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn monic(&self) -> NCPolynomial {
        match self.leading() {
            None => NCPolynomial::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &Scalar) -> NCPolynomial {
        if c.is_zero() {
            return NCPolynomial::zero();
        }
        NCPolynomial { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Words reversed, letters adjointed, coefficients conjugated.
    pub fn star(&self) -> NCPolynomial {
        NCPolynomial::from_terms(self.terms.iter().map(|(w, c)| (w.star(), c.conj())))
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    /// `u · self · v` for words `u`, `v`.
    pub fn sandwich(&self, u: &Word, v: &Word) -> NCPolynomial {
        NCPolynomial {
            terms: self.terms.iter().map(|(w, c)| (u.concat(w).concat(v), c.clone())).collect(),
        }
    }

    /// Homomorphic image under a letter map. `map` is consulted for every
    /// letter as it occurs, starred ones included.
    pub fn substitute<F>(&self, mut map: F) -> Result<NCPolynomial>
    where
        F: FnMut(Letter) -> Option<NCPolynomial>,
    {
        let mut out = NCPolynomial::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPolynomial::constant(c.clone());
            for &l in w.letters() {
                let img = map(l).ok_or_else(|| Error::Unmapped(l.to_string()))?;
                acc = &acc * &img;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Substitution driven by images of unstarred letters only; starred
    /// letters map to the adjoint image, which keeps the map star-compatible.
    pub fn substitute_star_closed<F>(&self, mut map: F) -> Result<NCPolynomial>
    where
        F: FnMut(Letter) -> Option<NCPolynomial>,
    {
        self.substitute(|l| {
            if l.starred {
                map(l.star()).map(|p| p.star())
            } else {
                map(l)
            }
        })
    }

    /// Relabels letters one for one.
    pub fn map_letters<F: FnMut(Letter) -> Letter>(&self, mut f: F) -> NCPolynomial {
        NCPolynomial::from_terms(
            self.terms.iter().map(|(w, c)| (Word(w.0.iter().map(|&l| f(l)).collect()), c.clone())),
        )
    }

    /// Product that insists both factors live in `alphabet`.
    pub fn multiply_in(&self, other: &NCPolynomial, alphabet: &Alphabet) -> Result<NCPolynomial> {
        alphabet.check(self)?;
        alphabet.check(other)?;
        Ok(self * other)
    }
}

impl<'a> Add<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, o: &NCPolynomial) -> NCPolynomial {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (w, c) in &small.terms {
            big.add_term(w.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, o: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, o: &NCPolynomial) -> NCPolynomial {
        let mut out = NCPolynomial::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        self.scale(&Scalar::int(-1))
    }
}

macro_rules! owned_poly_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_poly_ops!(NCPolynomial);

fn write_terms<'a, I, T>(f: &mut fmt::Formatter<'_>, terms: I, mut body: T) -> fmt::Result
where
    I: Iterator<Item = (&'a Scalar, bool)>,
    T: FnMut(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
{
    let mut any = false;
    for (k, (c, is_unit_word)) in terms.enumerate() {
        let neg_real = c.is_real() && c.re < num_rational::BigRational::from_integer(0.into());
        let neg_imag = c.re == num_rational::BigRational::from_integer(0.into())
            && c.im < num_rational::BigRational::from_integer(0.into());
        let negative = neg_real || neg_imag;
        let mag = if negative { -c } else { c.clone() };
        if k == 0 {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if negative { " - " } else { " + " })?;
        }
        if is_unit_word {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            body(f, k)?;
        }
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

/// Canonical text, largest word first: `2 z1 z2* - i z3`.
impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(&Word, &Scalar)> = self.terms.iter().rev().collect();
        write_terms(f, terms.iter().map(|(w, c)| (*c, w.is_empty())), |f, k| write!(f, "{}", terms[k].0))
    }
}

/// Declared generator families of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    letters: BTreeSet<Letter>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut letters = BTreeSet::new();
        for l in it {
            letters.insert(l.base());
            letters.insert(l.star().base());
        }
        Alphabet { letters }
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.letters.contains(&l.base())
    }

    pub fn check(&self, p: &NCPolynomial) -> Result<()> {
        for l in p.letters() {
            if !self.contains(l) {
                return Err(Error::Undeclared(l.to_string()));
            }
        }
        Ok(())
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet { letters: self.letters.union(&other.letters).copied().collect() }
    }
}

/// Element of `A ⊗ B` with the group leg first and the sphere leg second.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TensorPolynomial {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        TensorPolynomial::default()
    }

    pub fn one() -> Self {
        TensorPolynomial::pure(&NCPolynomial::one(), &NCPolynomial::one())
    }

    /// `a ⊗ x`.
    pub fn pure(a: &NCPolynomial, x: &NCPolynomial) -> Self {
        let mut t = TensorPolynomial::zero();
        for (w1, c1) in a.terms() {
            for (w2, c2) in x.terms() {
                t.add_term(w1.clone(), w2.clone(), &(c1 * c2));
            }
        }
        t
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn scale(&self, c: &Scalar) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for ((l, r), v) in &self.terms {
            t.add_term(l.clone(), r.clone(), &(v * c));
        }
        t
    }

    /// Leg-wise adjoint.
    pub fn star(&self) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for ((l, r), c) in &self.terms {
            t.add_term(l.star(), r.star(), &c.conj());
        }
        t
    }

    /// Left-leg coefficient of each right word: `self = Σ_r L_r ⊗ r`.
    pub fn by_right(&self) -> BTreeMap<Word, NCPolynomial> {
        let mut m: BTreeMap<Word, NCPolynomial> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            m.entry(r.clone()).or_default().add_term(l.clone(), c);
        }
        m.retain(|_, p| !p.is_zero());
        m
    }

    /// Right-leg coefficient of each left word: `self = Σ_l l ⊗ R_l`.
    pub fn by_left(&self) -> BTreeMap<Word, NCPolynomial> {
        let mut m: BTreeMap<Word, NCPolynomial> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            m.entry(l.clone()).or_default().add_term(r.clone(), c);
        }
        m.retain(|_, p| !p.is_zero());
        m
    }

    /// Rebuild from right-word coefficients.
    pub fn from_right(m: &BTreeMap<Word, NCPolynomial>) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for (r, p) in m {
            for (l, c) in p.terms() {
                t.add_term(l.clone(), r.clone(), c);
            }
        }
        t
    }

    /// Applies a linear map to the right leg word by word.
    pub fn map_right<F: FnMut(&Word) -> NCPolynomial>(&self, mut f: F) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for ((l, r), c) in &self.terms {
            for (w, d) in f(r).terms() {
                t.add_term(l.clone(), w.clone(), &(c * d));
            }
        }
        t
    }

    /// Applies a linear map to the left leg word by word.
    pub fn map_left<F: FnMut(&Word) -> NCPolynomial>(&self, mut f: F) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for ((l, r), c) in &self.terms {
            for (w, d) in f(l).terms() {
                t.add_term(w.clone(), r.clone(), &(c * d));
            }
        }
        t
    }
}

impl<'a> Add<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;
    fn add(self, o: &TensorPolynomial) -> TensorPolynomial {
        let mut t = self.clone();
        for ((l, r), c) in &o.terms {
            t.add_term(l.clone(), r.clone(), c);
        }
        t
    }
}

impl<'a> Sub<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;
    fn sub(self, o: &TensorPolynomial) -> TensorPolynomial {
        let mut t = self.clone();
        for ((l, r), c) in &o.terms {
            t.add_term(l.clone(), r.clone(), &-c);
        }
        t
    }
}

impl<'a> Mul<&'a TensorPolynomial> for &'a TensorPolynomial {
    type Output = TensorPolynomial;
    fn mul(self, o: &TensorPolynomial) -> TensorPolynomial {
        let mut t = TensorPolynomial::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &o.terms {
                t.add_term(l1.concat(l2), r1.concat(r2), &(c1 * c2));
            }
        }
        t
    }
}

impl Neg for &TensorPolynomial {
    type Output = TensorPolynomial;
    fn neg(self) -> TensorPolynomial {
        self.scale(&Scalar::int(-1))
    }
}
owned_poly_ops!(TensorPolynomial);

impl fmt::Display for TensorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(&(Word, Word), &Scalar)> = self.terms.iter().rev().collect();
        write_terms(f, terms.iter().map(|(_, c)| (*c, false)), |f, k| {
            let (l, r) = terms[k].0;
            write!(f, "[{l}] ⊗ [{r}]")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> NCPolynomial {
        NCPolynomial::letter(Letter::z(i))
    }
    fn zs(i: usize) -> NCPolynomial {
        NCPolynomial::letter(Letter::z(i).star())
    }

    #[test]
    fn product_of_letters() {
        let p = &z(1) * &zs(2);
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "z1 z2*");
    }

    #[test]
    fn free_product_keeps_all_four_words() {
        let p = &(&z(1) + &z(2)) * &(&z(1) - &z(2));
        assert_eq!(p.len(), 4);
        assert_eq!(p.coefficient(&Word(vec![Letter::z(2), Letter::z(1)])), Scalar::one());
        assert_eq!(p.coefficient(&Word(vec![Letter::z(2), Letter::z(2)])), Scalar::int(-1));
    }

    #[test]
    fn i_times_i() {
        let iz = z(1).scale(&Scalar::i());
        let p = &iz * &iz;
        assert_eq!(p, (&z(1) * &z(1)).scale(&Scalar::int(-1)));
    }

    #[test]
    fn star_examples() {
        assert_eq!((&z(1) * &zs(2)).star(), &z(2) * &zs(1));
        assert_eq!(z(1).scale(&Scalar::i()).star(), zs(1).scale(&-Scalar::i()));
    }

    #[test]
    fn counit_substitution() {
        let p = &NCPolynomial::letter(Letter::c()) * &z(1);
        let q = p
            .substitute_star_closed(|l| {
                Some(if l.family == Family::C { NCPolynomial::one() } else { NCPolynomial::letter(l) })
            })
            .unwrap();
        assert_eq!(q, z(1));
    }

    #[test]
    fn real_imaginary_split() {
        let x1 = NCPolynomial::letter(Letter::x(1));
        let y1 = NCPolynomial::letter(Letter::y(1));
        let map = |l: Letter| {
            if l == Letter::z(1) {
                Some(&x1 + &y1.scale(&Scalar::i()))
            } else {
                None
            }
        };
        assert_eq!(z(1).substitute_star_closed(map).unwrap().to_string(), "i y1 + x1");
        // adjoint goes to x1 - i y1 because x, y are self-adjoint
        let s = zs(1).substitute_star_closed(map).unwrap();
        assert_eq!(s, &x1 - &y1.scale(&Scalar::i()));
        assert!(z(2).substitute_star_closed(map).is_err());
    }

    #[test]
    fn rendering() {
        let p = &(&z(1) * &zs(2)).scale(&Scalar::int(2)) - &z(3).scale(&Scalar::i());
        assert_eq!(p.to_string(), "2 z1 z2* - i z3");
        assert_eq!(NCPolynomial::zero().to_string(), "0");
        assert_eq!((&z(1) - &NCPolynomial::one()).to_string(), "z1 - 1");
        assert_eq!(NCPolynomial::letter(Letter::u(1, 2).star()).to_string(), "u1_2*");
        assert_eq!(NCPolynomial::letter(Letter::p2(1, 2, 1, 3)).to_string(), "p1_2_1_3");
    }

    #[test]
    fn graded_lex_order() {
        let a = Word(vec![Letter::z(2)]);
        let b = Word(vec![Letter::z(1), Letter::z(1)]);
        assert!(a < b);
        assert!(Word(vec![Letter::z(1)]) < Word(vec![Letter::z(1).star()]));
        assert!(Word(vec![Letter::z(1).star()]) < Word(vec![Letter::z(2)]));
    }

    #[test]
    fn letter_parse_roundtrip() {
        for l in [Letter::z(3), Letter::u(1, 2).star(), Letter::c().star(), Letter::p(1, 2), Letter::q2(1, 1, 2, 1), Letter::y(4)] {
            assert_eq!(l.to_string().parse::<Letter>().unwrap(), l);
        }
        for bad in ["z", "z0", "u1", "x1*", "w1", "p1_2*"] {
            assert!(bad.parse::<Letter>().is_err(), "{bad}");
        }
    }

    #[test]
    fn projective_star_swaps() {
        assert_eq!(Letter::p(1, 2).star(), Letter::p(2, 1));
        assert_eq!(Letter::x(1).star(), Letter::x(1));
    }

    #[test]
    fn alphabet_check() {
        let a = Alphabet::new([Letter::z(1), Letter::z(2)]);
        assert!(z(1).multiply_in(&zs(2), &a).is_ok());
        assert!(z(1).multiply_in(&z(3), &a).is_err());
    }

    #[test]
    fn tensor_legwise() {
        let a = NCPolynomial::letter(Letter::u(1, 1));
        let b = NCPolynomial::letter(Letter::u(1, 2).star());
        let t = &TensorPolynomial::pure(&a, &z(1)) * &TensorPolynomial::pure(&b, &zs(2));
        assert_eq!(t, TensorPolynomial::pure(&(&a * &b), &(&z(1) * &zs(2))));
        assert_eq!(t.star(), TensorPolynomial::pure(&(&a * &b).star(), &(&z(1) * &zs(2)).star()));
    }
}
