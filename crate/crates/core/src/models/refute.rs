//! Sound refutation: a point satisfying every relation of a presentation
//! while violating the target by a clear margin.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{check_relations, complex_doubling, doubling, group_model, preset, sample, Manifold, ModelPoint};
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::par::Exec;
use crate::presentations::Presentation;

/// How a trial point is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// a fixed named point; every trial is the same
    Preset(String),
    /// classical (or udiag) point used as is
    Direct(Manifold),
    /// `[[0, x + iy], [x̄ + iȳ, 0]]` over an `(x, y)` manifold
    ComplexDoubling(Manifold),
    /// `[[0, z], [z*, 0]]` over a sphere manifold
    Doubling(Manifold),
    /// two-block group model over an `(A, B)` manifold
    GroupModel(Manifold),
}

impl Sampler {
    pub fn draw(&self, n: usize, seed: u64) -> Result<ModelPoint> {
        match self {
            Sampler::Preset(name) => preset(name, n),
            Sampler::Direct(m) => sample(*m, n, seed),
            Sampler::ComplexDoubling(m) => complex_doubling(&sample(*m, n, seed)?),
            Sampler::Doubling(m) => doubling(&sample(*m, n, seed)?),
            Sampler::GroupModel(m) => group_model(&sample(*m, n, seed)?),
        }
    }

    pub fn is_preset(&self) -> bool {
        matches!(self, Sampler::Preset(_))
    }
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::Preset(p) => write!(f, "preset:{p}"),
            Sampler::Direct(Manifold::Udiag { d }) => write!(f, "udiag:{d}"),
            Sampler::Direct(m) => write!(f, "{m}"),
            Sampler::ComplexDoubling(m) => write!(f, "cd:{m}"),
            Sampler::Doubling(m) => write!(f, "double:{m}"),
            Sampler::GroupModel(m) => write!(f, "gm:{m}"),
        }
    }
}

impl FromStr for Sampler {
    type Err = Error;

    /// `preset:NAME`, `cd:M`, `double:M`, `gm:M`, `pq-doubling`, or a bare
    /// manifold name.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(p) = s.strip_prefix("preset:") {
            return super::canonical_preset(p)
                .map(|c| Sampler::Preset(c.to_string()))
                .ok_or_else(|| Error::UnknownPreset(p.to_string()));
        }
        if s == "pq-doubling" {
            return Ok(Sampler::ComplexDoubling(Manifold::DdotsSub));
        }
        for (prefix, make) in [
            ("cd:", Sampler::ComplexDoubling as fn(Manifold) -> Sampler),
            ("double:", Sampler::Doubling),
            ("gm:", Sampler::GroupModel),
        ] {
            if let Some(m) = s.strip_prefix(prefix) {
                return Ok(make(m.parse()?));
            }
        }
        Ok(Sampler::Direct(s.parse()?))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    Counterexample {
        point: ModelPoint,
        trial: usize,
        /// operator norm of the target at the point
        residual: f64,
        /// largest relation residual of the presentation at the point
        presentation_residual: f64,
    },
    NotFound {
        trials: usize,
        /// largest target residual seen among valid points
        best_residual: f64,
    },
}

impl Refutation {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Refutation::Counterexample { .. })
    }
}

/// Parameters for [`refute_implication`].
#[derive(Clone, Debug)]
pub struct RefuteConfig {
    pub trials: usize,
    pub tol_strict: f64,
    pub margin: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig { trials: 500, tol_strict: super::TOL_STRICT, margin: super::MARGIN, seed: 0, exec: Exec::Parallel }
    }
}

/// Searches for a point of `p` at which `target` does not vanish.
/// Trial `t` uses seed `seed + t`; the lowest successful trial wins, so
/// the answer does not depend on the execution arm.
pub fn refute_implication(
    p: &Presentation,
    target: &NCPolynomial,
    sampler: &Sampler,
    cfg: &RefuteConfig,
) -> Result<Refutation> {
    if cfg.margin <= cfg.tol_strict {
        return Err(Error::Invalid(format!("margin {} must exceed tolerance {}", cfg.margin, cfg.tol_strict)));
    }
    let n = p
        .coordinates()
        .ok_or_else(|| Error::Invalid(format!("presentation `{}` has no coordinate block", p.name)))?
        .n();
    let trials = if sampler.is_preset() { cfg.trials.min(1) } else { cfg.trials };
    let attempt = |t: usize| -> Result<(Option<(ModelPoint, f64, f64)>, f64)> {
        let pt = sampler.draw(n, cfg.seed.wrapping_add(t as u64))?;
        let rep = check_relations(p, &pt, cfg.tol_strict)?;
        if !rep.holds() {
            return Ok((None, 0.0));
        }
        let r = pt.residual(target)?;
        Ok(if r > cfg.margin { (Some((pt, r, rep.max)), r) } else { (None, r) })
    };
    // surface errors from the first trial instead of swallowing them
    if trials > 0 {
        attempt(0)?;
    }
    let found = cfg.exec.find_first(trials, |t| attempt(t).ok().and_then(|(hit, _)| hit));
    Ok(match found {
        Some((trial, (point, residual, presentation_residual))) => {
            assert!(presentation_residual <= cfg.tol_strict, "unsound counterexample");
            Refutation::Counterexample { point, trial, residual, presentation_residual }
        }
        None => {
            let best = cfg
                .exec
                .map_range(trials, |t| attempt(t).map(|(_, r)| r).unwrap_or(0.0))
                .into_iter()
                .fold(0.0, f64::max);
            Refutation::NotFound { trials, best_residual: best }
        }
    })
}
