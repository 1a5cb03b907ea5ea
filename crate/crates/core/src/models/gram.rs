//! Numerical linear independence of monomial families over sampled models.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use super::ModelPoint;
use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPolynomial};
use crate::par::Exec;
use crate::presentations::word_poly;

/// Index-constrained monomial families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramFamily {
    /// `z_a z_b*`, `a ≤ b`
    ZZs,
    /// `z_a z_b z_c`, `a ≤ c`
    ZZZ,
    /// `z_a z_b* z_c`, `a ≤ c`
    ZZsZ,
    /// `z_1` alone
    Single,
}

impl GramFamily {
    pub fn name(self) -> &'static str {
        match self {
            GramFamily::ZZs => "zz*",
            GramFamily::ZZZ => "zzz",
            GramFamily::ZZsZ => "zz*z",
            GramFamily::Single => "z1",
        }
    }

    /// Size of the family at `N`.
    pub fn expected_size(self, n: usize) -> usize {
        match self {
            GramFamily::ZZs => n * (n + 1) / 2,
            GramFamily::ZZZ | GramFamily::ZZsZ => n * n * (n + 1) / 2,
            GramFamily::Single => 1,
        }
    }
}

impl fmt::Display for GramFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GramFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zz*" | "1" => GramFamily::ZZs,
            "zzz" | "2" => GramFamily::ZZZ,
            "zz*z" | "3" => GramFamily::ZZsZ,
            "z1" | "single" => GramFamily::Single,
            _ => return Err(Error::Invalid(format!("unknown monomial family `{s}`"))),
        })
    }
}

/// The monomials of a family over `z_1..z_N`.
pub fn gram_family(f: GramFamily, n: usize) -> Vec<NCPolynomial> {
    let z = Letter::z;
    let mut out = Vec::new();
    match f {
        GramFamily::ZZs => {
            for a in 1..=n {
                for b in a..=n {
                    out.push(word_poly(&[z(a), z(b).star()]));
                }
            }
        }
        GramFamily::ZZZ | GramFamily::ZZsZ => {
            let star = f == GramFamily::ZZsZ;
            for a in 1..=n {
                for b in 1..=n {
                    for c in a..=n {
                        out.push(word_poly(&[z(a), z(b).with_star(star), z(c)]));
                    }
                }
            }
        }
        GramFamily::Single => out.push(word_poly(&[z(1)])),
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GramResult {
    pub rank: usize,
    pub family_size: usize,
    pub samples: usize,
    /// descending
    pub singular_values: Vec<f64>,
    /// all sample points coincide
    pub degenerate: bool,
}

/// Numerical rank of the evaluation matrix `monomial × (sample, entry, re/im)`.
pub fn gram_rank(monomials: &[NCPolynomial], points: &[ModelPoint], svd_tol: f64, exec: Exec) -> Result<GramResult> {
    if points.len() < monomials.len() {
        return Err(Error::Invalid(format!(
            "{} samples for a family of {}; need at least as many samples",
            points.len(),
            monomials.len()
        )));
    }
    let evals = exec.map_slice(points, |pt| monomials.iter().map(|m| pt.eval(m)).collect::<Result<Vec<_>>>());
    let evals = evals.into_iter().collect::<Result<Vec<_>>>()?;
    let width: usize = evals.iter().map(|row| row.first().map_or(0, |m| 2 * m.len())).sum();
    let mut feat = DMatrix::<f64>::zeros(monomials.len(), width);
    let mut off = 0;
    for row in &evals {
        let w = row.first().map_or(0, |m| 2 * m.len());
        for (k, m) in row.iter().enumerate() {
            for (e, v) in m.iter().enumerate() {
                feat[(k, off + 2 * e)] = v.re;
                feat[(k, off + 2 * e + 1)] = v.im;
            }
        }
        off += w;
    }
    let mut sv: Vec<f64> = feat.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().cloned().unwrap_or(0.0);
    let rank = if top == 0.0 { 0 } else { sv.iter().filter(|&&s| s > svd_tol * top).count() };
    let degenerate = points.windows(2).all(|w| w[0].matrices == w[1].matrices);
    Ok(GramResult { rank, family_size: monomials.len(), samples: points.len(), singular_values: sv, degenerate })
}
