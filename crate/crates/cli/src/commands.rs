//! One function per verb.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use halfsph::dsl::{parse_polynomial, parse_presentation, parse_schema, render_presentation};
use halfsph::lattice::{builtin, projective_version_check, verify_diagram, Diagram, LatticeConfig};
use halfsph::models::{
    check_relations, defining_residual, gram_family, gram_rank, refute_implication, GramFamily, Manifold, RefuteConfig,
    Refutation, Sampler, MARGIN, SVD_TOL,
};
use halfsph::presentations::{Presentation, SphereKind};
use halfsph::qisom::{collect_conditions, isometry_pipeline, saturate, verify_coaction_symbolic, Shape, DEFAULT_SAT_BUDGET};
use halfsph::rewrite::{Prover, SearchConfig, TraceDoc};
use halfsph::Exec;

use crate::report::{Outcome, Residual, Status};

/// Settings shared by every verb.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub tol: f64,
    pub budget: usize,
    pub exec: Exec,
}

/// Where a presentation comes from.
#[derive(Clone, Debug, clap::Args)]
pub struct Source {
    /// preset sphere or group name (`Csharp`, `Cstar`, `UN`, ...)
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,
    /// presentation file in the DSL
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// number of coordinates
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
}

impl Source {
    pub fn load(&self) -> Result<Presentation> {
        match (&self.preset, &self.file) {
            (Some(name), None) => Ok(name.parse::<halfsph::lattice::NodeKind>()?.presentation(self.n)?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(parse_presentation(&text)?)
            }
            _ => bail!("give exactly one of --preset and --file"),
        }
    }
}

fn presentation_doc(p: &Presentation) -> Value {
    json!({ "name": p.name, "text": render_presentation(p) })
}

/// `preset-NAME` is accepted as a spelling of `preset:NAME`.
pub fn sampler(name: &str) -> Result<Sampler> {
    let name = match name.strip_prefix("preset-") {
        Some(rest) => format!("preset:{rest}"),
        None => name.to_string(),
    };
    Ok(name.parse()?)
}

fn refute_cfg(ctx: &Ctx, trials: usize) -> RefuteConfig {
    RefuteConfig { trials, tol_strict: ctx.tol, margin: MARGIN, seed: ctx.seed, exec: ctx.exec }
}

fn witness_residuals(p: &Presentation, point: &halfsph::models::ModelPoint, tol: f64) -> Result<Vec<Residual>> {
    let rep = check_relations(p, point, tol)?;
    Ok(p.relations()
        .iter()
        .zip(rep.residuals)
        .enumerate()
        .map(|(k, (r, v))| Residual { label: format!("{k}: {} ({})", r.poly, r.label), value: v })
        .collect())
}

fn counterexample(p: &Presentation, target: &halfsph::NCPolynomial, r: Refutation, ctx: &Ctx) -> Result<Option<(Value, Vec<Residual>)>> {
    match r {
        Refutation::Counterexample { point, trial, residual, presentation_residual } => {
            let residuals = witness_residuals(p, &point, ctx.tol)?;
            Ok(Some((
                json!({
                    "target": target.to_string(),
                    "trial": trial,
                    "residual": residual,
                    "presentation_residual": presentation_residual,
                    "witness": point.to_doc(),
                }),
                residuals,
            )))
        }
        Refutation::NotFound { .. } => Ok(None),
    }
}

pub fn check(ctx: &Ctx, src: &Source, target: &str, refute_with: Option<&str>, trials: usize) -> Result<Outcome> {
    let p = src.load()?;
    let range = p.coordinates().ok_or_else(|| anyhow!("{} declares no coordinates", p.name))?.letters();
    let instances = parse_schema(target, &p.alphabet(), &range)?;
    let prover = Prover::new(&p);
    let cfg = SearchConfig::with_budget(ctx.budget);
    let outs = ctx.exec.map_slice(&instances, |i| prover.check(&i.poly, &cfg));
    let mut docs = Vec::new();
    let mut open = Vec::new();
    for (inst, o) in instances.iter().zip(outs) {
        let o = o?;
        let binding: serde_json::Map<String, Value> =
            inst.binding.iter().map(|(v, l)| (v.clone(), Value::String(l.to_string()))).collect();
        let mut d = json!({ "binding": binding, "polynomial": inst.poly.to_string(), "proved": o.is_proved() });
        match o.trace() {
            Some(t) => d["trace"] = serde_json::to_value(TraceDoc::from(t))?,
            None => open.push(inst.poly.clone()),
        }
        docs.push(d);
    }
    let mut payload = json!({
        "kind": "check",
        "presentation": presentation_doc(&p),
        "target": target,
        "instances": docs,
    });
    if open.is_empty() {
        return Ok(Outcome::new(Status::Proved, payload));
    }
    if let Some(name) = refute_with {
        let s = sampler(name)?;
        for t in &open {
            let r = refute_implication(&p, t, &s, &refute_cfg(ctx, trials))?;
            if let Some((doc, residuals)) = counterexample(&p, t, r, ctx)? {
                payload["counterexample"] = doc;
                payload["sampler"] = json!(s.to_string());
                return Ok(Outcome { status: Status::Refuted, payload, residuals });
            }
        }
    }
    Ok(Outcome::new(Status::Inconclusive, payload))
}

pub fn refute(ctx: &Ctx, src: &Source, target: &str, sampler_name: &str, trials: usize) -> Result<Outcome> {
    let p = src.load()?;
    let t = parse_polynomial(target, &p.alphabet())?;
    let s = sampler(sampler_name)?;
    let r = refute_implication(&p, &t, &s, &refute_cfg(ctx, trials))?;
    let mut payload = json!({
        "kind": "refute",
        "presentation": presentation_doc(&p),
        "sampler": s.to_string(),
        "trials": trials,
    });
    match counterexample(&p, &t, r.clone(), ctx)? {
        Some((doc, residuals)) => {
            payload["counterexample"] = doc;
            Ok(Outcome { status: Status::Certified, payload, residuals })
        }
        None => {
            payload["target"] = json!(t.to_string());
            payload["search"] = serde_json::to_value(&r)?;
            Ok(Outcome::new(Status::Inconclusive, payload))
        }
    }
}

pub fn diagram(ctx: &Ctx, name: Option<&str>, file: Option<&PathBuf>, n: Option<usize>, trials: usize) -> Result<Outcome> {
    let mut d = match (name, file) {
        (Some(name), None) => builtin(name)?,
        (None, Some(path)) => Diagram::parse(&std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?,
        _ => bail!("give exactly one of --name and --file"),
    };
    if let Some(n) = n {
        d.n = n;
    }
    let cfg = LatticeConfig { budget: ctx.budget, trials, seed: ctx.seed, tol: ctx.tol, margin: MARGIN, exec: ctx.exec };
    let r = verify_diagram(&d, &cfg)?;
    let status = if r.ok() { Status::Proved } else { Status::Inconclusive };
    let residuals = r
        .properness
        .iter()
        .filter_map(|v| v.residual.map(|x| Residual { label: format!("{} < {}", v.smaller, v.larger), value: x }))
        .collect();
    Ok(Outcome { status, payload: json!({ "kind": "diagram", "report": r }), residuals })
}

fn default_gram_sampler(f: GramFamily) -> &'static str {
    match f {
        GramFamily::ZZsZ => "cd:dotS",
        _ => "pq-doubling",
    }
}

pub fn gram(ctx: &Ctx, family: &str, n: usize, sampler_name: Option<&str>, samples: usize) -> Result<Outcome> {
    let f: GramFamily = family.parse()?;
    let s = sampler(sampler_name.unwrap_or(default_gram_sampler(f)))?;
    let points = (0..samples).map(|k| s.draw(n, ctx.seed + k as u64)).collect::<halfsph::Result<Vec<_>>>()?;
    let r = gram_rank(&gram_family(f, n), &points, SVD_TOL, ctx.exec)?;
    let full = r.rank == f.expected_size(n) && !r.degenerate;
    let status = if full { Status::Certified } else { Status::Inconclusive };
    let residuals = r
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, v)| Residual { label: format!("sigma_{k}"), value: *v })
        .collect();
    let payload = json!({
        "kind": "gram",
        "family": f.name(),
        "N": n,
        "sampler": s.to_string(),
        "samples": samples,
        "svd_tol": SVD_TOL,
        "rank": r.rank,
        "family_size": r.family_size,
        "degenerate": r.degenerate,
    });
    Ok(Outcome { status, payload, residuals })
}

const SHAPES: [Shape; 4] = [Shape::Triple { star: true }, Shape::Triple { star: false }, Shape::PairRight, Shape::PairLeft];

fn shape(name: &str) -> Result<Shape> {
    SHAPES
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| anyhow!("unknown shape `{name}`; expected one of abc, ab*c, ab*, a*b"))
}

pub fn qisom(ctx: &Ctx, sphere: &str, mode: &str, shape_name: Option<&str>, n: usize, sat_budget: usize) -> Result<Outcome> {
    let k: SphereKind = sphere.parse()?;
    let mut payload = json!({ "kind": "qisom", "sphere": k.name(), "mode": mode });
    let status = match mode {
        "closure" => {
            let r = isometry_pipeline(k, sat_budget, ctx.exec)?;
            // basis assumptions carry numerical rank evidence; flagged axioms do not
            let flagged = r.conditional_on.iter().any(|a| a.starts_with("axiom:"));
            let status = match (r.proved, flagged) {
                (true, false) => Status::Proved,
                (true, true) => Status::Indirect,
                _ => Status::Inconclusive,
            };
            payload["pipeline"] = serde_json::to_value(&r)?;
            status
        }
        "coaction" => {
            let g = halfsph::presentations::GroupKind::ALL
                .into_iter()
                .find(|g| g.sphere() == Some(k))
                .ok_or_else(|| anyhow!("{} has no group in the six-fold correspondence", k.name()))?;
            let v = verify_coaction_symbolic(k, g, n, ctx.budget, ctx.exec)?;
            payload["coaction"] = serde_json::to_value(&v)?;
            if v.proved {
                Status::Proved
            } else {
                Status::Inconclusive
            }
        }
        "collect" | "saturate" => {
            let sh = shape(shape_name.ok_or_else(|| anyhow!("--shape is required for mode {mode}"))?)?;
            let c = collect_conditions(sh, k)?;
            payload["collected"] = serde_json::to_value(&c)?;
            if mode == "collect" {
                Status::Proved
            } else {
                let s = saturate(&c, sat_budget)?;
                let status = if s.global { Status::Proved } else { Status::Inconclusive };
                payload["saturation"] = serde_json::to_value(&s)?;
                status
            }
        }
        _ => bail!("unknown mode `{mode}`; expected closure, coaction, collect or saturate"),
    };
    Ok(Outcome::new(status, payload))
}

pub fn sample(ctx: &Ctx, sampler_name: &str, n: usize, against: Option<&str>) -> Result<Outcome> {
    let s = sampler(sampler_name)?;
    let point = s.draw(n, ctx.seed)?;
    let mut payload = json!({ "kind": "sample", "sampler": s.to_string(), "point": point.to_doc() });
    let mut status = Status::Certified;
    if let Sampler::Direct(m) = &s {
        if !matches!(m, Manifold::Udiag { .. }) {
            let r = defining_residual(*m, &point)?;
            payload["defining_residual"] = json!(r);
            if r > ctx.tol {
                status = Status::Inconclusive;
            }
        }
    }
    let mut residuals = vec![];
    if let Some(name) = against {
        let p = name.parse::<halfsph::lattice::NodeKind>()?.presentation(n)?;
        let rep = check_relations(&p, &point, ctx.tol)?;
        payload["satisfies"] = json!({ "presentation": p.name, "holds": rep.holds(), "max": rep.max });
        residuals = witness_residuals(&p, &point, ctx.tol)?;
        if !rep.holds() {
            status = Status::Inconclusive;
        }
    }
    Ok(Outcome { status, payload, residuals })
}

pub fn projective(ctx: &Ctx, src: &Source) -> Result<Outcome> {
    let p = src.load()?;
    let cfg = LatticeConfig { budget: ctx.budget, seed: ctx.seed, tol: ctx.tol, exec: ctx.exec, ..Default::default() };
    let r = projective_version_check(&p, &cfg)?;
    let all = [&r.commute, &r.adjoint, &r.transpose, &r.idempotent, &r.trace].iter().all(|t| t.holds());
    let status = if all { Status::Proved } else { Status::Inconclusive };
    Ok(Outcome::new(status, json!({ "kind": "projective", "report": r })))
}

pub const DEFAULT_QISOM_BUDGET: usize = DEFAULT_SAT_BUDGET;
