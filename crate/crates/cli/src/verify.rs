//! Re-checks the certificates inside a report using only its JSON.
//!
//! Nothing here calls the search or the sampler: traces are replayed step
//! by step, witnesses are re-evaluated from their serialized matrices, and
//! saturation traces are re-derived from freshly collected conditions.

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde_json::Value;

use halfsph::dsl::{parse_polynomial, parse_presentation};
use halfsph::lattice::{reverify_witness, DiagramReport, ProperStatus};
use halfsph::models::{ModelPoint, MARGIN};
use halfsph::presentations::{make_group, GroupKind, Presentation, SphereKind};
use halfsph::qisom::{collect_conditions, replay_saturation, Saturation, Shape};
use halfsph::rewrite::{replay, TraceDoc};

use crate::report::{Report, Status};

fn replay_doc(p: &Presentation, start: &str, doc: &TraceDoc) -> Result<()> {
    let a = p.alphabet();
    let claimed = parse_polynomial(start, &a)?;
    let s = parse_polynomial(&doc.start, &a)?;
    ensure!(s == claimed, "trace starts at `{}`, expected `{start}`", doc.start);
    let end = replay(p, &s, &doc.steps)?;
    ensure!(end == parse_polynomial(&doc.end, &a)?, "replay ends at `{end}`, trace claims `{}`", doc.end);
    ensure!(end.is_zero(), "trace ends at nonzero `{end}`");
    Ok(())
}

fn presentation(payload: &Value) -> Result<Presentation> {
    let text = payload["presentation"]["text"].as_str().ok_or_else(|| anyhow!("payload has no presentation text"))?;
    Ok(parse_presentation(text)?)
}

fn witness(p: &Presentation, cx: &Value, tol: f64) -> Result<()> {
    let target = parse_polynomial(cx["target"].as_str().ok_or_else(|| anyhow!("counterexample has no target"))?, &p.alphabet())?;
    let json = serde_json::to_string(&cx["witness"])?;
    reverify_witness(p, &target, &json, tol, MARGIN)?;
    Ok(())
}

fn check(r: &Report, tol: f64) -> Result<usize> {
    let p = presentation(&r.payload)?;
    let mut n = 0;
    for inst in r.payload["instances"].as_array().ok_or_else(|| anyhow!("no instances"))? {
        let proved = inst["proved"].as_bool().unwrap_or(false);
        match inst.get("trace") {
            Some(t) => {
                let doc: TraceDoc = serde_json::from_value(t.clone())?;
                replay_doc(&p, inst["polynomial"].as_str().unwrap_or(""), &doc)?;
                n += 1;
            }
            None => ensure!(!proved, "proved instance without a trace"),
        }
    }
    if r.status == Status::Proved {
        ensure!(r.payload["instances"].as_array().unwrap().iter().all(|i| i.get("trace").is_some()), "proved report with open instances");
    }
    if let Some(cx) = r.payload.get("counterexample") {
        witness(&p, cx, tol)?;
        n += 1;
    }
    Ok(n)
}

fn refute(r: &Report, tol: f64) -> Result<usize> {
    let p = presentation(&r.payload)?;
    match r.payload.get("counterexample") {
        Some(cx) => witness(&p, cx, tol).map(|_| 1),
        None => {
            ensure!(r.status != Status::Certified, "certified report without a counterexample");
            Ok(0)
        }
    }
}

fn diagram(r: &Report, tol: f64) -> Result<usize> {
    let d: DiagramReport = serde_json::from_value(r.payload["report"].clone())?;
    let node = |name: &str| -> Result<Presentation> { Ok(name.parse::<halfsph::lattice::NodeKind>()?.presentation(d.n)?) };
    let mut n = 0;
    for inc in &d.inclusions {
        // presentation names carry the display spelling; nodes carry identifiers
        let smaller = d.nodes.iter().find(|x| node(x).map(|p| p.name == inc.smaller).unwrap_or(false));
        let smaller = node(smaller.ok_or_else(|| anyhow!("unknown node {}", inc.smaller))?)?;
        for rel in &inc.relations {
            match &rel.trace {
                Some(t) => {
                    replay_doc(&smaller, &rel.relation, t).with_context(|| format!("{} < {}", inc.smaller, inc.larger))?;
                    n += 1;
                }
                None => ensure!(!rel.proved, "proved relation without a trace"),
            }
        }
    }
    for v in &d.properness {
        if v.status != ProperStatus::Certified {
            continue;
        }
        let large = node(&v.larger)?;
        let target = parse_polynomial(v.target.as_deref().ok_or_else(|| anyhow!("certified claim without a target"))?, &large.alphabet())?;
        let point = ModelPoint::from_doc(v.witness.as_ref().ok_or_else(|| anyhow!("certified claim without a witness"))?)?;
        reverify_witness(&large, &target, &serde_json::to_string(&point)?, tol, MARGIN)
            .with_context(|| format!("{} < {}", v.smaller, v.larger))?;
        n += 1;
    }
    Ok(n)
}

fn saturation(sphere: SphereKind, shape: &Value, sat: &Value) -> Result<()> {
    let shape: Shape = serde_json::from_value(shape.clone())?;
    let sat: Saturation = serde_json::from_value(sat.clone())?;
    ensure!(sat.shape == shape, "saturation is for another shape");
    let collected = collect_conditions(shape, sphere)?;
    replay_saturation(&collected, &sat)?;
    Ok(())
}

fn qisom(r: &Report) -> Result<usize> {
    let sphere: SphereKind = r.payload["sphere"].as_str().ok_or_else(|| anyhow!("no sphere"))?.parse()?;
    let mut n = 0;
    if let Some(stages) = r.payload["pipeline"]["stages"].as_array() {
        for st in stages {
            saturation(sphere, &st["shape"], &st["saturation"])?;
            n += 1;
        }
    }
    if let Some(sat) = r.payload.get("saturation") {
        saturation(sphere, &sat["shape"], sat)?;
        n += 1;
    }
    if let Some(co) = r.payload.get("coaction") {
        n += coaction(co)?;
    }
    Ok(n)
}

/// Replays every left-coefficient derivation in the group presentation.
fn coaction(co: &Value) -> Result<usize> {
    let g: GroupKind = co["group"].as_str().ok_or_else(|| anyhow!("no group"))?.parse()?;
    let n = co["N"].as_u64().ok_or_else(|| anyhow!("no N"))? as usize;
    let p = make_group(g, n)?;
    let mut count = 0;
    for rel in co["relations"].as_array().ok_or_else(|| anyhow!("no relations"))? {
        for c in rel["coefficients"].as_array().into_iter().flatten() {
            let proved = c["proved"].as_bool().unwrap_or(false);
            match c.get("trace") {
                Some(t) => {
                    let doc: TraceDoc = serde_json::from_value(t.clone())?;
                    replay_doc(&p, c["left"].as_str().unwrap_or(""), &doc)
                        .with_context(|| format!("coefficient of {}", c["right"]))?;
                    count += 1;
                }
                None => ensure!(!proved, "proved coefficient without a trace"),
            }
        }
    }
    Ok(count)
}

/// Returns how many certificates were re-checked.
pub fn verify_report(r: &Report, tol: f64) -> Result<usize> {
    match r.kind() {
        "check" => check(r, tol),
        "refute" => refute(r, tol),
        "diagram" => diagram(r, tol),
        "qisom" => qisom(r),
        "gram" | "sample" | "projective" => Ok(0),
        k => bail!("cannot verify a report of kind `{k}`"),
    }
}
