//! Catalog of sphere and quantum group presentations, plus the transformers
//! between them (real version, free complexification, projective lifts).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ncpoly::{Alphabet, Family, Letter, NCPolynomial, Word};
use crate::scalar::Scalar;

/// Coordinate system a sphere-type presentation lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coordinates {
    /// `z_1..z_N` with `Σ z_i z_i* = 1`.
    Sphere(usize),
    /// `u_11..u_NN` with `Σ u_ij u_ij* = N`, the rescaled matrix sphere.
    Matrix(usize),
}

impl Coordinates {
    pub fn n(self) -> usize {
        match self {
            Coordinates::Sphere(n) | Coordinates::Matrix(n) => n,
        }
    }

    pub fn letters(self) -> Vec<Letter> {
        match self {
            Coordinates::Sphere(n) => (1..=n).map(Letter::z).collect(),
            Coordinates::Matrix(n) => {
                (1..=n).flat_map(|i| (1..=n).map(move |j| Letter::u(i, j))).collect()
            }
        }
    }

    /// Value of `Σ a a*` on the unit sphere of these coordinates.
    pub fn radius(self) -> Scalar {
        match self {
            Coordinates::Sphere(_) => Scalar::one(),
            Coordinates::Matrix(n) => Scalar::int(n as i64),
        }
    }

    pub fn decl(self) -> GeneratorDecl {
        match self {
            Coordinates::Sphere(n) => GeneratorDecl::Sphere(n),
            Coordinates::Matrix(n) => GeneratorDecl::Matrix(n),
        }
    }
}

/// One generator family declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorDecl {
    Sphere(usize),
    Matrix(usize),
    Circle,
    RealParts(usize),
}

impl GeneratorDecl {
    pub fn letters(self) -> Vec<Letter> {
        match self {
            GeneratorDecl::Sphere(n) => Coordinates::Sphere(n).letters(),
            GeneratorDecl::Matrix(n) => Coordinates::Matrix(n).letters(),
            GeneratorDecl::Circle => vec![Letter::c()],
            GeneratorDecl::RealParts(n) => (1..=n).flat_map(|i| [Letter::x(i), Letter::y(i)]).collect(),
        }
    }
}

/// A relation asserted to vanish, with a short origin label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub poly: NCPolynomial,
    pub label: String,
}

/// Generators plus a star-closed, deduplicated list of monic relations.
/// Relation ids are positions in `relations()`.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<GeneratorDecl>,
    relations: Vec<Relation>,
    pub notes: Vec<String>,
    seen: HashSet<NCPolynomial>,
}

impl PartialEq for Presentation {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name && self.generators == o.generators && self.relations == o.relations
    }
}

impl Presentation {
    pub fn new(name: impl Into<String>, generators: Vec<GeneratorDecl>) -> Self {
        Presentation { name: name.into(), generators, ..Default::default() }
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, id: usize) -> Option<&Relation> {
        self.relations.get(id)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.generators.iter().flat_map(|g| g.letters()))
    }

    /// Sphere or matrix coordinates, whichever is declared first.
    pub fn coordinates(&self) -> Option<Coordinates> {
        self.generators.iter().find_map(|g| match *g {
            GeneratorDecl::Sphere(n) => Some(Coordinates::Sphere(n)),
            GeneratorDecl::Matrix(n) => Some(Coordinates::Matrix(n)),
            _ => None,
        })
    }

    pub fn contains(&self, p: &NCPolynomial) -> bool {
        self.seen.contains(&p.monic())
    }

    /// Adds `p` and its adjoint, both monic. Zero and repeated relations are
    /// dropped. Returns whether anything was added.
    pub fn push(&mut self, p: &NCPolynomial, label: &str) -> bool {
        let mut added = false;
        for q in [p.monic(), p.star().monic()] {
            if q.is_zero() || self.seen.contains(&q) {
                continue;
            }
            self.seen.insert(q.clone());
            self.relations.push(Relation { poly: q, label: label.to_string() });
            added = true;
        }
        added
    }

    pub fn extend<'a, I: IntoIterator<Item = &'a NCPolynomial>>(&mut self, it: I, label: &str) {
        for p in it {
            self.push(p, label);
        }
    }

    /// Declares an extra generator family if absent.
    pub fn declare(&mut self, g: GeneratorDecl) {
        if !self.generators.contains(&g) {
            self.generators.push(g);
        }
    }

    /// Copy under a new name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Presentation { name: name.into(), ..self.clone() }
    }

    /// Every relation letter is declared.
    pub fn validate(&self) -> Result<()> {
        let a = self.alphabet();
        self.relations.iter().try_for_each(|r| a.check(&r.poly))
    }

    /// Adds the `abc* = c*ba` schema over matrix coordinates as a flagged
    /// axiom. The implication it encodes is categorical and is not derived.
    pub fn with_star_transfer_axiom(&self) -> Presentation {
        let mut p = self.renamed(format!("{}+star-transfer", self.name));
        if let Some(Coordinates::Matrix(n)) = self.coordinates() {
            let ls = Coordinates::Matrix(n).letters();
            for &a in &ls {
                for &b in &ls {
                    for &c in &ls {
                        let lhs = NCPolynomial::from_letters(&[a, b, c.star()]);
                        let rhs = NCPolynomial::from_letters(&[c.star(), b, a]);
                        p.push(&(&lhs - &rhs), AXIOM_STAR_TRANSFER);
                    }
                }
            }
            p.notes.push("axiom star-transfer: abc* = c*ba imposed, not derived".into());
        }
        p
    }
}

/// Label carried by relations from the flagged star-transfer axiom schema.
pub const AXIOM_STAR_TRANSFER: &str = "axiom:star-transfer";

/// The ten sphere presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SphereKind {
    R,
    RStar,
    RPlus,
    C,
    CStarStar,
    CStar,
    CSharp,
    CCirc,
    Tsr,
    CPlus,
}

impl SphereKind {
    pub const ALL: [SphereKind; 10] = [
        SphereKind::R,
        SphereKind::RStar,
        SphereKind::RPlus,
        SphereKind::C,
        SphereKind::CStarStar,
        SphereKind::CStar,
        SphereKind::CSharp,
        SphereKind::CCirc,
        SphereKind::Tsr,
        SphereKind::CPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SphereKind::R => "R",
            SphereKind::RStar => "R*",
            SphereKind::RPlus => "R+",
            SphereKind::C => "C",
            SphereKind::CStarStar => "C**",
            SphereKind::CStar => "C*",
            SphereKind::CSharp => "C#",
            SphereKind::CCirc => "Ccirc",
            SphereKind::Tsr => "TSR",
            SphereKind::CPlus => "C+",
        }
    }

    /// Identifier-safe spelling used by the DSL and the command line.
    pub fn ident(self) -> &'static str {
        match self {
            SphereKind::R => "R",
            SphereKind::RStar => "Rstar",
            SphereKind::RPlus => "Rplus",
            SphereKind::C => "C",
            SphereKind::CStarStar => "Csstar",
            SphereKind::CStar => "Cstar",
            SphereKind::CSharp => "Csharp",
            SphereKind::CCirc => "Ccirc",
            SphereKind::Tsr => "TSR",
            SphereKind::CPlus => "Cplus",
        }
    }
}

impl fmt::Display for SphereKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SphereKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SphereKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || k.ident().eq_ignore_ascii_case(s))
            .or(match s {
                "Css" | "C**" => Some(SphereKind::CStarStar),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// The quantum group presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    UN,
    UNStarStar,
    UNStar,
    UNSharp,
    UNCirc,
    TON,
    KN,
}

impl GroupKind {
    pub const ALL: [GroupKind; 7] = [
        GroupKind::UN,
        GroupKind::UNStarStar,
        GroupKind::UNStar,
        GroupKind::UNSharp,
        GroupKind::UNCirc,
        GroupKind::TON,
        GroupKind::KN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::UN => "UN",
            GroupKind::UNStarStar => "UN**",
            GroupKind::UNStar => "UN*",
            GroupKind::UNSharp => "UN#",
            GroupKind::UNCirc => "UNcirc",
            GroupKind::TON => "TON",
            GroupKind::KN => "KN",
        }
    }

    pub fn ident(self) -> &'static str {
        match self {
            GroupKind::UN => "UN",
            GroupKind::UNStarStar => "UNsstar",
            GroupKind::UNStar => "UNstar",
            GroupKind::UNSharp => "UNsharp",
            GroupKind::UNCirc => "UNcirc",
            GroupKind::TON => "TON",
            GroupKind::KN => "KN",
        }
    }

    /// The sphere acted on in the six-fold correspondence.
    pub fn sphere(self) -> Option<SphereKind> {
        Some(match self {
            GroupKind::UN => SphereKind::C,
            GroupKind::UNStarStar => SphereKind::CStarStar,
            GroupKind::UNStar => SphereKind::CStar,
            GroupKind::UNSharp => SphereKind::CSharp,
            GroupKind::UNCirc => SphereKind::CCirc,
            GroupKind::TON => SphereKind::Tsr,
            GroupKind::KN => return None,
        })
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || k.ident().eq_ignore_ascii_case(s))
            .or(match s {
                "KN-family" | "KN+" => Some(GroupKind::KN),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Exponent in a schema: plain or starred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exp {
    One,
    Star,
}

impl Exp {
    pub fn apply(self, l: Letter) -> Letter {
        match self {
            Exp::One => l,
            Exp::Star => l.star(),
        }
    }

    pub fn all() -> [Exp; 2] {
        [Exp::One, Exp::Star]
    }
}

/// Relation family `x_{i1}^{e1}…x_{ik}^{ek} = x_{iσ(1)}^{d1}…x_{iσ(k)}^{dk}`,
/// quantified over all index tuples. `sigma` is one-line notation, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSchema {
    pub sigma: Vec<usize>,
    pub e: Vec<Exp>,
    pub d: Vec<Exp>,
}

impl RelationSchema {
    pub fn new(sigma: Vec<usize>, e: Vec<Exp>, d: Vec<Exp>) -> Result<Self> {
        let k = sigma.len();
        if e.len() != k || d.len() != k {
            return Err(Error::Arity(format!("|sigma|={k}, |e|={}, |d|={}", e.len(), d.len())));
        }
        let mut seen = vec![false; k];
        for &s in &sigma {
            if s == 0 || s > k || seen[s - 1] {
                return Err(Error::Arity(format!("{sigma:?} is not a permutation")));
            }
            seen[s - 1] = true;
        }
        Ok(RelationSchema { sigma, e, d })
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    /// The relation for one concrete tuple of coordinate letters.
    pub fn instance(&self, tuple: &[Letter]) -> NCPolynomial {
        let lhs: Vec<Letter> = tuple.iter().zip(&self.e).map(|(&l, e)| e.apply(l)).collect();
        let rhs: Vec<Letter> =
            self.sigma.iter().zip(&self.d).map(|(&s, d)| d.apply(tuple[s - 1])).collect();
        &NCPolynomial::from_letters(&lhs) - &NCPolynomial::from_letters(&rhs)
    }

    /// All `|letters|^k` instances, zero polynomials included, in
    /// lexicographic order of the index tuple.
    pub fn expand(&self, letters: &[Letter]) -> Vec<NCPolynomial> {
        tuples(letters.len(), self.degree())
            .into_iter()
            .map(|t| {
                let tuple: Vec<Letter> = t.iter().map(|&k| letters[k]).collect();
                self.instance(&tuple)
            })
            .collect()
    }
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Instances of a schema over `z_1..z_N`.
pub fn make_schema_relation(sigma: &[usize], e: &[Exp], d: &[Exp], n: usize) -> Result<Vec<NCPolynomial>> {
    let s = RelationSchema::new(sigma.to_vec(), e.to_vec(), d.to_vec())?;
    Ok(s.expand(&Coordinates::Sphere(n).letters()))
}

/// `ab*c = cb*a` over the coordinate letters.
pub fn half_commutation_star(ls: &[Letter]) -> Vec<NCPolynomial> {
    RelationSchema::new(vec![3, 2, 1], vec![Exp::One, Exp::Star, Exp::One], vec![Exp::One, Exp::Star, Exp::One])
        .expect("valid schema")
        .expand(ls)
}

/// `abc = cba` over the coordinate letters and their adjoints.
pub fn half_commutation_all(ls: &[Letter]) -> Vec<NCPolynomial> {
    let mut out = Vec::new();
    for e1 in Exp::all() {
        for e2 in Exp::all() {
            for e3 in Exp::all() {
                let s = RelationSchema::new(vec![3, 2, 1], vec![e1, e2, e3], vec![e3, e2, e1]).expect("valid schema");
                out.extend(s.expand(ls));
            }
        }
    }
    out
}

/// `ab* = ba*` and `a*b = b*a`.
pub fn sharp_relations(ls: &[Letter]) -> Vec<NCPolynomial> {
    let mut out = RelationSchema::new(vec![2, 1], vec![Exp::One, Exp::Star], vec![Exp::One, Exp::Star])
        .expect("valid schema")
        .expand(ls);
    out.extend(
        RelationSchema::new(vec![2, 1], vec![Exp::Star, Exp::One], vec![Exp::Star, Exp::One])
            .expect("valid schema")
            .expand(ls),
    );
    out
}

/// `ab = ba` over the coordinate letters and their adjoints.
pub fn commutation_all(ls: &[Letter]) -> Vec<NCPolynomial> {
    let mut out = Vec::new();
    for e1 in Exp::all() {
        for e2 in Exp::all() {
            let s = RelationSchema::new(vec![2, 1], vec![e1, e2], vec![e2, e1]).expect("valid schema");
            out.extend(s.expand(ls));
        }
    }
    out
}

/// `ab = ba` over the coordinate letters only.
pub fn commutation_plain(ls: &[Letter]) -> Vec<NCPolynomial> {
    RelationSchema::new(vec![2, 1], vec![Exp::One, Exp::One], vec![Exp::One, Exp::One])
        .expect("valid schema")
        .expand(ls)
}

/// `abc = cba` over the coordinate letters only.
pub fn half_commutation_plain(ls: &[Letter]) -> Vec<NCPolynomial> {
    RelationSchema::new(vec![3, 2, 1], vec![Exp::One; 3], vec![Exp::One; 3]).expect("valid schema").expand(ls)
}

/// `a = a*`.
pub fn reality(ls: &[Letter]) -> Vec<NCPolynomial> {
    ls.iter().map(|&l| &NCPolynomial::letter(l) - &NCPolynomial::letter(l.star())).collect()
}

/// `Σ a a* = r` and `Σ a* a = r`.
pub fn unit_relations(c: Coordinates) -> Vec<NCPolynomial> {
    let ls = c.letters();
    let r = NCPolynomial::constant(c.radius());
    let s1 = ls.iter().fold(NCPolynomial::zero(), |acc, &l| &acc + &NCPolynomial::from_letters(&[l, l.star()]));
    let s2 = ls.iter().fold(NCPolynomial::zero(), |acc, &l| &acc + &NCPolynomial::from_letters(&[l.star(), l]));
    vec![&s1 - &r, &s2 - &r]
}

/// The `4N²` contraction relations of a biunitary matrix.
pub fn biunitarity(n: usize) -> Vec<NCPolynomial> {
    let u = |i: usize, j: usize| Letter::u(i, j);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let delta = NCPolynomial::constant(Scalar::int((i == j) as i64));
            let sum = |f: &dyn Fn(usize) -> [Letter; 2]| {
                (1..=n).fold(NCPolynomial::zero(), |acc, k| &acc + &NCPolynomial::from_letters(&f(k)))
            };
            out.push(&sum(&|k| [u(i, k), u(j, k).star()]) - &delta);
            out.push(&sum(&|k| [u(k, i).star(), u(k, j)]) - &delta);
            out.push(&sum(&|k| [u(k, i), u(k, j).star()]) - &delta);
            out.push(&sum(&|k| [u(i, k).star(), u(j, k)]) - &delta);
        }
    }
    out
}

/// Half-liberation relations of a sphere kind on arbitrary coordinates,
/// without the unit relations.
fn sphere_relations(kind: SphereKind, ls: &[Letter]) -> Vec<(Vec<NCPolynomial>, &'static str)> {
    use SphereKind::*;
    match kind {
        CPlus => vec![],
        C => vec![(commutation_all(ls), "commutation")],
        CStarStar => vec![(half_commutation_all(ls), "abc=cba")],
        CStar => vec![(half_commutation_star(ls), "ab*c=cb*a")],
        CSharp => vec![(sharp_relations(ls), "#")],
        CCirc => vec![(half_commutation_all(ls), "abc=cba"), (sharp_relations(ls), "#")],
        Tsr => vec![
            (half_commutation_all(ls), "abc=cba"),
            (sharp_relations(ls), "#"),
            (commutation_all(ls), "commutation"),
        ],
        R => vec![(commutation_plain(ls), "ab=ba"), (reality(ls), "real")],
        RStar => vec![(half_commutation_plain(ls), "abc=cba"), (reality(ls), "real")],
        RPlus => vec![(reality(ls), "real")],
    }
}

/// A sphere preset on the given coordinates.
pub fn make_sphere_on(kind: SphereKind, c: Coordinates) -> Presentation {
    let name = match c {
        Coordinates::Sphere(_) => kind.name().to_string(),
        Coordinates::Matrix(_) => format!("{}[matrix]", kind.name()),
    };
    let mut p = Presentation::new(name, vec![c.decl()]);
    p.extend(&unit_relations(c), "unit");
    let ls = c.letters();
    for (rels, label) in sphere_relations(kind, &ls) {
        p.extend(&rels, label);
    }
    if kind == SphereKind::Tsr {
        p.notes.push("point set: classical membership predicate in models; relations are Ccirc plus commutativity".into());
    }
    p
}

pub fn make_sphere(kind: SphereKind, n: usize) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    Ok(make_sphere_on(kind, Coordinates::Sphere(n)))
}

/// Looks a sphere preset up by name.
pub fn make_sphere_named(name: &str, n: usize) -> Result<Presentation> {
    make_sphere(name.parse()?, n)
}

/// Row/column annihilation relations of the free reflection family.
pub fn annihilation(n: usize) -> Vec<NCPolynomial> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if j == k {
                    continue;
                }
                let (a, b) = (Letter::u(i, j), Letter::u(i, k));
                let (c, d) = (Letter::u(j, i), Letter::u(k, i));
                out.push(NCPolynomial::from_letters(&[a, b.star()]));
                out.push(NCPolynomial::from_letters(&[a.star(), b]));
                out.push(NCPolynomial::from_letters(&[c, d.star()]));
                out.push(NCPolynomial::from_letters(&[c.star(), d]));
            }
        }
    }
    out
}

pub fn make_group(kind: GroupKind, n: usize) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let c = Coordinates::Matrix(n);
    let mut p = Presentation::new(kind.name(), vec![c.decl()]);
    p.extend(&biunitarity(n), "biunitary");
    let ls = c.letters();
    match kind.sphere() {
        Some(s) => {
            for (rels, label) in sphere_relations(s, &ls) {
                p.extend(&rels, label);
            }
        }
        None => p.extend(&annihilation(n), "annihilation"),
    }
    Ok(p)
}

pub fn make_group_named(name: &str, n: usize) -> Result<Presentation> {
    make_group(name.parse()?, n)
}

/// Adds `a = a*` for every coordinate letter.
pub fn real_version(p: &Presentation) -> Presentation {
    let mut q = p.renamed(format!("real({})", p.name));
    if let Some(c) = p.coordinates() {
        q.extend(&reality(&c.letters()), "real");
    }
    q
}

/// Adjoins a unitary circle generator `c`; derived generators are `w_i = c z_i`.
pub fn free_complexification(p: &Presentation) -> Presentation {
    let mut q = p.renamed(format!("fc({})", p.name));
    q.declare(GeneratorDecl::Circle);
    let c = Letter::c();
    let one = NCPolynomial::one();
    q.push(&(&NCPolynomial::from_letters(&[c, c.star()]) - &one), "circle");
    q.push(&(&NCPolynomial::from_letters(&[c.star(), c]) - &one), "circle");
    q
}

/// `w_i = c z_i` in a free complexification.
pub fn w(i: usize) -> NCPolynomial {
    NCPolynomial::from_letters(&[Letter::c(), Letter::z(i)])
}

/// Counit map `c → 1`.
pub fn counit(p: &NCPolynomial) -> NCPolynomial {
    p.substitute_star_closed(|l| {
        Some(if l.family == Family::C { NCPolynomial::one() } else { NCPolynomial::letter(l) })
    })
    .expect("total map")
}

/// Which projective embedding a lift uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftVariant {
    /// `p_xy → a_x a_y*`
    P,
    /// `q_xy → a_y* a_x`
    Q,
}

fn coordinate(x: [u8; 2], matrix: bool) -> Letter {
    if matrix {
        Letter::u(x[0] as usize, x[1] as usize)
    } else {
        Letter::z(x[0] as usize)
    }
}

/// Substitutes projective symbols by their coordinate expressions.
pub fn lift_polynomial(g: &NCPolynomial, variant: LiftVariant, matrix: bool) -> Result<NCPolynomial> {
    let want = match variant {
        LiftVariant::P => Family::P,
        LiftVariant::Q => Family::Q,
    };
    g.substitute(|l| {
        if l.family != want {
            return None;
        }
        let [a, b, c, d] = l.index;
        let (x, y) = (coordinate([a, b], matrix), coordinate([c, d], matrix));
        Some(match variant {
            LiftVariant::P => NCPolynomial::from_letters(&[x, y.star()]),
            LiftVariant::Q => NCPolynomial::from_letters(&[y.star(), x]),
        })
    })
    .map_err(|_| {
        Error::Invalid(format!("lift generator {g} has a symbol outside the {want:?} family"))
    })
}

/// Appends the lifted ideal generators to the target sphere presentation.
pub fn lift_projective(ideal: &[NCPolynomial], target: &Presentation, variant: LiftVariant) -> Result<Presentation> {
    let matrix = matches!(target.coordinates(), Some(Coordinates::Matrix(_)));
    let mut p = target.renamed(format!("lift({})", target.name));
    for g in ideal {
        p.push(&lift_polynomial(g, variant, matrix)?, "lift");
    }
    Ok(p)
}

/// A lift built from both the p-ideal and the q-ideal.
#[derive(Clone, Debug)]
pub struct Lift {
    pub presentation: Presentation,
    /// Set when one of the two ideals was missing.
    pub one_sided: bool,
}

pub fn lift_conjugation_stable(p_ideal: &[NCPolynomial], q_ideal: &[NCPolynomial], target: &Presentation) -> Result<Lift> {
    let first = lift_projective(p_ideal, target, LiftVariant::P)?;
    let mut both = lift_projective(q_ideal, &first, LiftVariant::Q)?;
    both.name = format!("lift({})", target.name);
    let one_sided = p_ideal.is_empty() != q_ideal.is_empty();
    if one_sided {
        both.notes.push("one-sided lift: only one of the p/q ideals was supplied".into());
    }
    Ok(Lift { presentation: both, one_sided })
}

/// `{p_ii − 1/N}` (or the q version) for the rescaled torus.
pub fn torus_ideal(n: usize, variant: LiftVariant) -> Vec<NCPolynomial> {
    (1..=n)
        .map(|i| {
            let l = match variant {
                LiftVariant::P => Letter::p(i, i),
                LiftVariant::Q => Letter::q(i, i),
            };
            &NCPolynomial::letter(l) - &NCPolynomial::constant(Scalar::ratio(1, n as i64))
        })
        .collect()
}

/// The four contraction families of `N·PU_N` in projective symbols.
/// The p-ideal holds the `p` families and the q-ideal the `q` ones.
pub fn pu_ideals(n: usize) -> (Vec<NCPolynomial>, Vec<NCPolynomial>) {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let delta = NCPolynomial::constant(Scalar::int((i == j) as i64));
            let sum = |f: &dyn Fn(usize) -> Letter| {
                (1..=n).fold(NCPolynomial::zero(), |acc, k| &acc + &NCPolynomial::letter(f(k)))
            };
            ps.push(&sum(&|k| Letter::p2(i, k, j, k)) - &delta);
            ps.push(&sum(&|k| Letter::p2(k, i, k, j)) - &delta);
            qs.push(&sum(&|k| Letter::q2(k, i, k, j)) - &delta);
            qs.push(&sum(&|k| Letter::q2(i, k, j, k)) - &delta);
        }
    }
    (ps, qs)
}

/// Vanishing of `p_{ij,ik}`, `p_{ji,ki}` (and q versions) for `j ≠ k`.
pub fn pk_ideals(n: usize) -> (Vec<NCPolynomial>, Vec<NCPolynomial>) {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    ps.push(NCPolynomial::letter(Letter::p2(i, j, i, k)));
                    ps.push(NCPolynomial::letter(Letter::p2(j, i, k, i)));
                    qs.push(NCPolynomial::letter(Letter::q2(i, j, i, k)));
                    qs.push(NCPolynomial::letter(Letter::q2(j, i, k, i)));
                }
            }
        }
    }
    (ps, qs)
}

/// `p_ij = z_i z_j*` as a polynomial.
pub fn p_elem(i: usize, j: usize) -> NCPolynomial {
    NCPolynomial::from_letters(&[Letter::z(i), Letter::z(j).star()])
}

/// The word `a_1 … a_k` as a polynomial.
pub fn word_poly(ls: &[Letter]) -> NCPolynomial {
    NCPolynomial::word(Word::new(ls.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> Letter {
        Letter::z(i)
    }

    #[test]
    fn csharp_contains_sharp_pair() {
        let p = make_sphere(SphereKind::CSharp, 2).unwrap();
        assert!(p.contains(&(&word_poly(&[z(1), z(2).star()]) - &word_poly(&[z(2), z(1).star()]))));
        assert!(p.contains(&(&word_poly(&[z(1).star(), z(2)]) - &word_poly(&[z(2).star(), z(1)]))));
    }

    #[test]
    fn free_sphere_has_two_relations() {
        let p = make_sphere(SphereKind::CPlus, 3).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.relations().iter().all(|r| r.label == "unit"));
    }

    #[test]
    fn star_closed() {
        for k in SphereKind::ALL {
            let p = make_sphere(k, 2).unwrap();
            for r in p.relations() {
                assert!(p.contains(&r.poly.star()), "{k}: {}", r.poly);
            }
            p.validate().unwrap();
        }
        for k in GroupKind::ALL {
            let p = make_group(k, 2).unwrap();
            for r in p.relations() {
                assert!(p.contains(&r.poly.star()), "{k}: {}", r.poly);
            }
        }
    }

    #[test]
    fn schema_counts() {
        let e = [Exp::One, Exp::Star, Exp::One];
        let v = make_schema_relation(&[3, 2, 1], &e, &e, 2).unwrap();
        assert_eq!(v.len(), 8);
        assert!(v.iter().any(|p| *p == &word_poly(&[z(1), z(2).star(), z(2)]) - &word_poly(&[z(2), z(2).star(), z(1)])));
        let v = make_schema_relation(&[2, 1], &[Exp::One, Exp::Star], &[Exp::One, Exp::Star], 2).unwrap();
        assert_eq!(v.len(), 4);
        let v = make_schema_relation(&[1, 2, 3], &e, &e, 3).unwrap();
        assert_eq!(v.len(), 27);
        assert!(v.iter().all(|p| p.is_zero()));
        assert!(make_schema_relation(&[2, 1], &e, &e, 2).is_err());
    }

    #[test]
    fn groups() {
        let p = make_group(GroupKind::UNSharp, 2).unwrap();
        let u = Letter::u;
        assert!(p.contains(&(&word_poly(&[u(1, 1), u(1, 2).star()]) - &word_poly(&[u(1, 2), u(1, 1).star()]))));
        assert_eq!(biunitarity(2).len(), 16);
        let k = make_group(GroupKind::KN, 2).unwrap();
        assert!(k.contains(&word_poly(&[u(1, 1), u(1, 2).star()])));
        let un = make_group(GroupKind::UN, 2).unwrap();
        assert!(un.contains(&(&word_poly(&[u(1, 1), u(2, 2).star()]) - &word_poly(&[u(2, 2).star(), u(1, 1)]))));
    }

    #[test]
    fn names_parse() {
        for k in SphereKind::ALL {
            assert_eq!(k.name().parse::<SphereKind>().unwrap(), k);
            assert_eq!(k.ident().parse::<SphereKind>().unwrap(), k);
        }
        assert_eq!("KN-family".parse::<GroupKind>().unwrap(), GroupKind::KN);
        assert!("C%".parse::<SphereKind>().is_err());
    }

    #[test]
    fn complexification_and_counit() {
        let p = free_complexification(&make_sphere(SphereKind::CStar, 2).unwrap());
        assert!(p.generators.contains(&GeneratorDecl::Circle));
        assert_eq!(counit(&(&w(1) * &w(2).star())), word_poly(&[z(1), z(2).star()]));
        assert_eq!(real_version(&make_sphere(SphereKind::R, 2).unwrap()).len(), make_sphere(SphereKind::R, 2).unwrap().len());
    }

    #[test]
    fn lifts() {
        let target = make_sphere(SphereKind::CStar, 2).unwrap();
        let lifted = lift_projective(&torus_ideal(2, LiftVariant::P), &target, LiftVariant::P).unwrap();
        let half = NCPolynomial::constant(Scalar::ratio(1, 2));
        assert!(lifted.contains(&(&word_poly(&[z(1), z(1).star()]) - &half)));
        let same = lift_projective(&[], &target, LiftVariant::P).unwrap();
        assert_eq!(same.relations(), target.relations());
        assert!(lift_projective(&torus_ideal(2, LiftVariant::Q), &target, LiftVariant::P).is_err());
        let one = lift_conjugation_stable(&torus_ideal(2, LiftVariant::P), &[], &target).unwrap();
        assert!(one.one_sided);
        let (pk, qk) = pk_ideals(2);
        let m = make_sphere_on(SphereKind::CStar, Coordinates::Matrix(2));
        let l = lift_conjugation_stable(&pk, &qk, &m).unwrap();
        assert!(!l.one_sided);
        assert!(l.presentation.contains(&word_poly(&[Letter::u(1, 1), Letter::u(1, 2).star()])));
    }
}
