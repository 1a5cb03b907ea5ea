//! Finite matrix models: evaluation, residuals and refutation.
//!
//! A [`ModelPoint`] assigns a complex `d×d` matrix to every unstarred letter;
//! starred letters evaluate to the conjugate transpose, so star-compatibility
//! holds by construction.

mod exact;
mod gram;
mod refute;
mod sample;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{Family, Letter, NCPolynomial, Word};
use crate::presentations::Presentation;

pub use exact::sign_pattern_determinants as prop23_determinants;
pub use exact::{det_exact, sign_pattern_determinants, sign_pattern_matrices, u2n_group_identities, CommPoly, U2nIdentityReport};
pub use gram::{gram_family, gram_rank, GramFamily, GramResult};
pub use refute::{refute_implication, RefuteConfig, Refutation, Sampler};
pub use sample::{
    complex_doubling, ddots_from_pq, defining_residual, doubling, group_model, haar_orthogonal, haar_unitary,
    canonical_preset, membership, preset, sample, sample_udiag, Manifold, PRESETS,
};

pub type CMat = DMatrix<Complex64>;

/// Strict tolerance for "relation holds".
pub const TOL_STRICT: f64 = 1e-9;
/// A violation must exceed this to count as a refutation.
pub const MARGIN: f64 = 1e-3;
/// Relative singular-value cut-off for numerical rank.
pub const SVD_TOL: f64 = 1e-8;

/// Largest singular value; the C*-norm of a matrix.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub(crate) fn to_c64(s: &crate::scalar::Scalar) -> Complex64 {
    let (re, im) = s.to_f64_pair();
    Complex64::new(re, im)
}

/// An assignment of matrices to letters, with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    pub manifold: String,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
    /// keyed by unstarred letters
    pub matrices: BTreeMap<Letter, CMat>,
    /// parameter blocks: `x`, `y` as columns, `A`, `B` as square matrices
    pub blocks: BTreeMap<String, CMat>,
}

impl ModelPoint {
    pub fn new(manifold: impl Into<String>, n: usize, dim: usize, seed: u64) -> Self {
        ModelPoint {
            manifold: manifold.into(),
            n,
            dim,
            seed,
            params: BTreeMap::new(),
            matrices: BTreeMap::new(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, l: Letter, m: CMat) {
        assert_eq!((m.nrows(), m.ncols()), (self.dim, self.dim), "matrix size");
        self.matrices.insert(l.base(), m);
    }

    fn base(&self, l: Letter) -> Result<&CMat> {
        self.matrices.get(&l.base()).ok_or_else(|| Error::MissingLetter(l.base().to_string()))
    }

    /// Matrix of a letter. Projective symbols are evaluated through their
    /// coordinate expressions.
    pub fn matrix(&self, l: Letter) -> Result<CMat> {
        match l.family {
            Family::P | Family::Q => {
                let [a, b, c, d] = l.index;
                let matrix = b != 0 || d != 0;
                let coord = |x: u8, y: u8| if matrix { Letter::u(x as usize, y as usize) } else { Letter::z(x as usize) };
                let first = self.base(coord(a, b))?;
                let second = self.base(coord(c, d))?;
                Ok(if l.family == Family::P { first * second.adjoint() } else { second.adjoint() * first })
            }
            f if f.self_adjoint() => self.base(l).cloned(),
            _ => {
                let m = self.base(l)?;
                Ok(if l.starred { m.adjoint() } else { m.clone() })
            }
        }
    }

    pub fn eval_word(&self, w: &Word) -> Result<CMat> {
        let mut acc = CMat::identity(self.dim, self.dim);
        for &l in w.letters() {
            acc = acc * self.matrix(l)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, p: &NCPolynomial) -> Result<CMat> {
        let mut acc = CMat::zeros(self.dim, self.dim);
        for (w, c) in p.terms() {
            acc += self.eval_word(w)? * to_c64(c);
        }
        Ok(acc)
    }

    /// Operator norm of `p` at this point.
    pub fn residual(&self, p: &NCPolynomial) -> Result<f64> {
        Ok(op_norm(&self.eval(p)?))
    }

    /// Whether every letter is a 1×1 matrix.
    pub fn is_scalar(&self) -> bool {
        self.dim == 1
    }

    /// Sphere coordinates `z_1..z_N` as scalars.
    pub fn scalars(&self) -> Result<Vec<Complex64>> {
        if !self.is_scalar() {
            return Err(Error::Dimension(format!("expected a scalar point, got dim {}", self.dim)));
        }
        (1..=self.n).map(|i| self.base(Letter::z(i)).map(|m| m[(0, 0)])).collect()
    }

    pub fn block(&self, name: &str) -> Result<&CMat> {
        self.blocks
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("point on `{}` has no `{name}` block", self.manifold)))
    }

    pub fn to_doc(&self) -> PointDoc {
        let flat = |m: &CMat| {
            let mut v = Vec::with_capacity(m.len());
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    v.push([m[(r, c)].re, m[(r, c)].im]);
                }
            }
            v
        };
        PointDoc {
            manifold: self.manifold.clone(),
            n: self.n,
            dim: self.dim,
            seed: self.seed,
            params: self.params.clone(),
            matrices: self.matrices.iter().map(|(l, m)| LetterMatrix { letter: l.to_string(), data: flat(m) }).collect(),
            blocks: self
                .blocks
                .iter()
                .map(|(k, m)| BlockDoc { name: k.clone(), rows: m.nrows(), cols: m.ncols(), data: flat(m) })
                .collect(),
        }
    }

    pub fn from_doc(d: &PointDoc) -> Result<Self> {
        let unflat = |rows: usize, cols: usize, data: &[[f64; 2]]| -> Result<CMat> {
            if data.len() != rows * cols {
                return Err(Error::Dimension(format!("expected {} entries, got {}", rows * cols, data.len())));
            }
            Ok(CMat::from_row_iterator(rows, cols, data.iter().map(|[re, im]| Complex64::new(*re, *im))))
        };
        let mut p = ModelPoint::new(d.manifold.clone(), d.n, d.dim, d.seed);
        p.params = d.params.clone();
        for lm in &d.matrices {
            let l: Letter = lm.letter.parse()?;
            p.matrices.insert(l.base(), unflat(d.dim, d.dim, &lm.data)?);
        }
        for b in &d.blocks {
            p.blocks.insert(b.name.clone(), unflat(b.rows, b.cols, &b.data)?);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LetterMatrix {
    pub letter: String,
    /// row-major `[re, im]` pairs
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

/// JSON form of a [`ModelPoint`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub manifold: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub matrices: Vec<LetterMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockDoc>,
}

impl Serialize for ModelPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PointDoc::deserialize(d)?;
        ModelPoint::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

/// Per-relation residuals of a presentation at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub residuals: Vec<f64>,
    pub max: f64,
    /// `(relation id, residual)` of the worst relation above tolerance
    pub violation: Option<(usize, f64)>,
}

impl SampleReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Evaluates every relation of `p` at `point`.
pub fn check_relations(p: &Presentation, point: &ModelPoint, tol: f64) -> Result<SampleReport> {
    let residuals = p.relations().iter().map(|r| point.residual(&r.poly)).collect::<Result<Vec<_>>>()?;
    let (arg, max) = residuals
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(ka, a), (k, &r)| if r > a { (k, r) } else { (ka, a) });
    Ok(SampleReport { violation: (max > tol).then_some((arg, max)), residuals, max })
}
