//! Text format for presentations and relation targets.
//!
//! ```text
//! presentation Csharp {
//!   generators z 1..2;
//!   relation forall a,b in z: a b* = b a*;
//!   relation forall a,b in z: a* b = b* a;
//!   unit sphere;
//! }
//! ```
//!
//! Terms are juxtaposed factors: letters (`z1`, `u1_2*`, `c`), bound
//! variables, numbers (`2`, `1/3`), `i`, and parenthesised sums with an
//! optional trailing `*` for the adjoint. `forall a,b in z|z*:` ranges over
//! the letters and their adjoints. Relation labels are optional strings
//! after `relation`. Comments run from `#` to the end of the line.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ncpoly::{Alphabet, Letter, NCPolynomial};
use crate::presentations::{biunitarity, unit_relations, Coordinates, GeneratorDecl, Presentation};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Str(String),
    Sym(char),
    DotDot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    let err = |line, col, msg: String| Error::Parse { line, col, msg };
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, k: &mut usize| {
            for _ in 0..n {
                if chars[*k] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *k += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut k);
        } else if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                advance(1, &mut k);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            let mut end = k;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                end += 1;
            }
            advance(end - start, &mut k);
            out.push(Token { tok: Tok::Ident(chars[start..end].iter().collect()), line: l0, col: c0 });
        } else if c.is_ascii_digit() {
            let start = k;
            let mut end = k;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let s: String = chars[start..end].iter().collect();
            advance(end - start, &mut k);
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), line: l0, col: c0 });
        } else if c == '"' {
            let mut end = k + 1;
            while end < chars.len() && chars[end] != '"' && chars[end] != '\n' {
                end += 1;
            }
            if end >= chars.len() || chars[end] != '"' {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            let s: String = chars[k + 1..end].iter().collect();
            advance(end + 1 - k, &mut k);
            out.push(Token { tok: Tok::Str(s), line: l0, col: c0 });
        } else if c == '.' && chars.get(k + 1) == Some(&'.') {
            advance(2, &mut k);
            out.push(Token { tok: Tok::DotDot, line: l0, col: c0 });
        } else if "{}();:,=*+-/|".contains(c) {
            advance(1, &mut k);
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Factor {
    Num(BigRational),
    I,
    Name { name: String, star: bool, line: usize, col: usize },
    Paren { expr: Expr, star: bool },
}

/// `Σ ± Π factors`
#[derive(Clone, Debug)]
struct Expr(Vec<(bool, Vec<Factor>)>);

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let toks = lex(text)?;
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser { toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected an identifier"),
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("expected a number"),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Num(_) | Tok::Sym('(')))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            let mut factors = Vec::new();
            while self.starts_factor() {
                factors.push(self.factor()?);
            }
            if factors.is_empty() {
                return self.fail("expected a term");
            }
            terms.push((negative, factors));
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(Expr(terms))
    }

    fn factor(&mut self) -> Result<Factor> {
        let (line, col) = self.here();
        match self.next().map(|t| t.tok) {
            Some(Tok::Num(n)) => {
                let d = if self.eat('/') { self.number()? } else { BigInt::from(1) };
                if d == BigInt::from(0) {
                    return Err(Error::Parse { line, col, msg: "zero denominator".into() });
                }
                Ok(Factor::Num(BigRational::new(n, d)))
            }
            Some(Tok::Ident(s)) if s == "i" => Ok(Factor::I),
            Some(Tok::Ident(name)) => Ok(Factor::Name { name, star: self.eat('*'), line, col }),
            Some(Tok::Sym('(')) => {
                let expr = self.expr()?;
                self.expect(')')?;
                Ok(Factor::Paren { expr, star: self.eat('*') })
            }
            _ => Err(Error::Parse { line, col, msg: "expected a factor".into() }),
        }
    }

    /// `lhs [= rhs]` as `lhs − rhs`
    fn equation(&mut self) -> Result<(Expr, Option<Expr>)> {
        let lhs = self.expr()?;
        let rhs = if self.eat('=') { Some(self.expr()?) } else { None };
        Ok((lhs, rhs))
    }
}

fn looks_like_letter(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some('z' | 'x' | 'y' | 'u' | 'p' | 'q'))
        && !cs.as_str().is_empty()
        && cs.all(|c| c.is_ascii_digit() || c == '_')
}

fn eval(e: &Expr, env: &BTreeMap<String, Letter>, alphabet: &Alphabet) -> Result<NCPolynomial> {
    let mut out = NCPolynomial::zero();
    for (negative, factors) in &e.0 {
        let mut term = NCPolynomial::one();
        for f in factors {
            let v = match f {
                Factor::Num(r) => NCPolynomial::constant(Scalar::new(r.clone(), BigRational::from_integer(0.into()))),
                Factor::I => NCPolynomial::constant(Scalar::i()),
                Factor::Paren { expr, star } => {
                    let p = eval(expr, env, alphabet)?;
                    if *star {
                        p.star()
                    } else {
                        p
                    }
                }
                Factor::Name { name, star, line, col } => {
                    let l = match env.get(name) {
                        Some(&l) => l,
                        None => match name.parse::<Letter>() {
                            Ok(l) if alphabet.contains(l.base()) => l,
                            Ok(_) => return Err(Error::Undeclared(format!("{name} at {line}:{col}"))),
                            Err(_) if looks_like_letter(name) || name == "c" => {
                                return Err(Error::Arity(format!("wrong index count in `{name}` at {line}:{col}")))
                            }
                            Err(_) => return Err(Error::Undeclared(format!("{name} at {line}:{col}"))),
                        },
                    };
                    let l = if *star {
                        if l.family.self_adjoint() {
                            l
                        } else {
                            l.star()
                        }
                    } else {
                        l
                    };
                    NCPolynomial::letter(l)
                }
            };
            term = &term * &v;
        }
        out = if *negative { &out - &term } else { &out + &term };
    }
    Ok(out)
}

fn difference(eq: &(Expr, Option<Expr>), env: &BTreeMap<String, Letter>, alphabet: &Alphabet) -> Result<NCPolynomial> {
    let lhs = eval(&eq.0, env, alphabet)?;
    Ok(match &eq.1 {
        Some(r) => &lhs - &eval(r, env, alphabet)?,
        None => lhs,
    })
}

/// Every assignment of `vars` to letters of `range`, in lexicographic order.
fn assignments(vars: &[String], range: &[Letter]) -> Vec<BTreeMap<String, Letter>> {
    crate::presentations::tuples(range.len(), vars.len())
        .into_iter()
        .map(|t| vars.iter().cloned().zip(t.into_iter().map(|x| range[x])).collect())
        .collect()
}

fn free_names(e: &Expr, alphabet: &Alphabet, out: &mut Vec<String>) {
    for (_, fs) in &e.0 {
        for f in fs {
            match f {
                Factor::Name { name, .. }
                    if !name.parse::<Letter>().is_ok_and(|l| alphabet.contains(l.base()))
                        && !looks_like_letter(name)
                        && !out.contains(name) =>
                {
                    out.push(name.clone())
                }
                Factor::Paren { expr, .. } => free_names(expr, alphabet, out),
                _ => {}
            }
        }
    }
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Parser::new(text)?;
    if !p.keyword("presentation") {
        return p.fail("expected `presentation`");
    }
    let name = match p.next().map(|t| t.tok) {
        Some(Tok::Ident(s) | Tok::Str(s)) => s,
        _ => {
            p.pos -= 1;
            return p.fail("expected a presentation name");
        }
    };
    p.expect('{')?;
    let mut pres = Presentation::new(name, vec![]);
    loop {
        if p.eat('}') {
            break;
        }
        if p.peek().is_none() {
            return p.fail("expected `}`");
        }
        let (line, col) = p.here();
        if p.keyword("generators") {
            let fam = p.ident()?;
            let decl = if fam == "c" {
                GeneratorDecl::Circle
            } else {
                let lo = p.number()?;
                if lo != BigInt::from(1) {
                    return Err(Error::Parse { line, col, msg: "index ranges start at 1".into() });
                }
                if p.peek() != Some(&Tok::DotDot) {
                    return p.fail("expected `..`");
                }
                p.pos += 1;
                let hi: usize = p.number()?.try_into().map_err(|_| Error::Parse { line, col, msg: "range too large".into() })?;
                if hi == 0 || hi > 255 {
                    return Err(Error::Parse { line, col, msg: "range must be 1..N with 1 ≤ N ≤ 255".into() });
                }
                match fam.as_str() {
                    "z" => GeneratorDecl::Sphere(hi),
                    "u" => GeneratorDecl::Matrix(hi),
                    "xy" => GeneratorDecl::RealParts(hi),
                    _ => return Err(Error::Parse { line, col, msg: format!("unknown generator family `{fam}`") }),
                }
            };
            pres.declare(decl);
            p.expect(';')?;
        } else if p.keyword("unit") {
            let what = p.ident()?;
            let coords = pres
                .coordinates()
                .ok_or_else(|| Error::Parse { line, col, msg: "unit relations need declared coordinates".into() })?;
            match (what.as_str(), coords) {
                ("sphere", c) => pres.extend(&unit_relations(c), "unit"),
                ("biunitary", Coordinates::Matrix(n)) => pres.extend(&biunitarity(n), "biunitary"),
                _ => return Err(Error::Parse { line, col, msg: format!("unknown unit clause `{what}`") }),
            }
            p.expect(';')?;
        } else if p.keyword("relation") {
            let label = match p.peek() {
                Some(Tok::Str(s)) => {
                    let s = s.clone();
                    p.pos += 1;
                    s
                }
                _ => "dsl".to_string(),
            };
            let mut vars = Vec::new();
            let mut range = Vec::new();
            if p.keyword("forall") {
                loop {
                    let v = p.ident()?;
                    if v == "i" || looks_like_letter(&v) {
                        return p.fail(format!("`{v}` cannot be a variable"));
                    }
                    vars.push(v);
                    if !p.eat(',') {
                        break;
                    }
                }
                if !p.keyword("in") {
                    return p.fail("expected `in`");
                }
                let (rl, rc) = p.here();
                let fam = p.ident()?;
                let letters: Vec<Letter> = match fam.as_str() {
                    "z" => pres.generators.iter().find_map(|g| matches!(g, GeneratorDecl::Sphere(_)).then(|| g.letters())),
                    "u" => pres.generators.iter().find_map(|g| matches!(g, GeneratorDecl::Matrix(_)).then(|| g.letters())),
                    _ => None,
                }
                .ok_or_else(|| Error::Undeclared(format!("generator family `{fam}` at {rl}:{rc}")))?;
                range.extend(letters.iter().cloned());
                if p.eat('|') {
                    let again = p.ident()?;
                    if again != fam || !p.eat('*') {
                        return p.fail(format!("expected `{fam}*`"));
                    }
                    range.extend(letters.iter().map(|l| l.star()));
                }
                p.expect(':')?;
            }
            let eq = p.equation()?;
            p.expect(';')?;
            let alphabet = pres.alphabet();
            if vars.is_empty() {
                pres.push(&difference(&eq, &BTreeMap::new(), &alphabet)?, &label);
            } else {
                for env in assignments(&vars, &range) {
                    pres.push(&difference(&eq, &env, &alphabet)?, &label);
                }
            }
        } else {
            return p.fail("expected `generators`, `relation`, `unit` or `}`");
        }
    }
    if p.peek().is_some() {
        return p.fail("trailing input after the closing brace");
    }
    Ok(pres)
}

/// Parses `lhs = rhs` (or a bare expression) with every letter declared.
pub fn parse_polynomial(text: &str, alphabet: &Alphabet) -> Result<NCPolynomial> {
    let mut p = Parser::new(text)?;
    let eq = p.equation()?;
    if p.peek().is_some() {
        return p.fail("trailing input");
    }
    difference(&eq, &BTreeMap::new(), alphabet)
}

/// One instance of a target with free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub binding: Vec<(String, Letter)>,
    pub poly: NCPolynomial,
}

/// Parses a target whose free names (`a`, `b`, ...) range over `range`.
/// Instances come in lexicographic order of the assignment, and zero
/// instances are dropped.
pub fn parse_schema(text: &str, alphabet: &Alphabet, range: &[Letter]) -> Result<Vec<Instance>> {
    let mut p = Parser::new(text)?;
    let eq = p.equation()?;
    if p.peek().is_some() {
        return p.fail("trailing input");
    }
    let mut vars = Vec::new();
    free_names(&eq.0, alphabet, &mut vars);
    if let Some(r) = &eq.1 {
        free_names(r, alphabet, &mut vars);
    }
    let mut out = Vec::new();
    for env in assignments(&vars, range) {
        let poly = difference(&eq, &env, alphabet)?;
        if !poly.is_zero() {
            let binding = vars.iter().map(|v| (v.clone(), env[v])).collect();
            out.push(Instance { binding, poly });
        }
    }
    Ok(out)
}

fn render_decl(g: &GeneratorDecl) -> String {
    match g {
        GeneratorDecl::Sphere(n) => format!("generators z 1..{n};"),
        GeneratorDecl::Matrix(n) => format!("generators u 1..{n};"),
        GeneratorDecl::RealParts(n) => format!("generators xy 1..{n};"),
        GeneratorDecl::Circle => "generators c;".to_string(),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "'"))
}

/// Renders a presentation so that [`parse_presentation`] rebuilds it.
pub fn render_presentation(p: &Presentation) -> String {
    let mut s = format!("presentation {} {{\n", quote(&p.name));
    for g in &p.generators {
        s.push_str(&format!("  {}\n", render_decl(g)));
    }
    for r in p.relations() {
        s.push_str(&format!("  relation {} {} = 0;\n", quote(&r.label), r.poly));
    }
    s.push_str("}\n");
    s
}
