//! Edge, intersection, real-version and properness checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Diagram, MeetClaim, MeetMethod, ProperClaim, RealClaim, Witness};
use crate::dsl::parse_polynomial;
use crate::error::{Error, Result};
use crate::models::{
    check_relations, haar_unitary, membership, refute_implication, sample, CMat, Manifold, ModelPoint, PointDoc,
    RefuteConfig, Refutation, Sampler, MARGIN, TOL_STRICT,
};
use crate::ncpoly::{Letter, NCPolynomial};
use crate::par::Exec;
use crate::presentations::{
    biunitarity, lift_conjugation_stable, make_sphere, make_sphere_on, p_elem, pu_ideals, real_version, Coordinates,
    Presentation, SphereKind,
};
use crate::rewrite::{derive_all, Outcome, Prover, SearchConfig, TraceDoc, DEFAULT_BUDGET};

/// Limits and tolerances shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct LatticeConfig {
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub exec: Exec,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { budget: DEFAULT_BUDGET, trials: 200, seed: 0, tol: TOL_STRICT, margin: MARGIN, exec: Exec::default() }
    }
}

impl LatticeConfig {
    fn search(&self) -> SearchConfig {
        SearchConfig::with_budget(self.budget)
    }
}

/// One relation of the larger presentation and how it was derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationProof {
    pub relation: String,
    pub label: String,
    pub proved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionVerdict {
    pub smaller: String,
    pub larger: String,
    pub proved: bool,
    /// every relation of the larger node is literally one of the smaller's
    pub syntactic: bool,
    pub relations: Vec<RelationProof>,
}

/// `X ⊂ Y`: every relation of `larger` derives from `smaller`.
pub fn verify_inclusion(smaller: &Presentation, larger: &Presentation, cfg: &LatticeConfig) -> Result<InclusionVerdict> {
    if smaller.alphabet() != larger.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{} vs {}", smaller.name, larger.name)));
    }
    let outs = derive_all(smaller, larger, &cfg.search(), cfg.exec);
    let relations: Vec<RelationProof> = larger
        .relations()
        .iter()
        .zip(outs)
        .map(|(r, (_, o))| RelationProof {
            relation: r.poly.to_string(),
            label: r.label.clone(),
            proved: o.is_proved(),
            trace: o.trace().map(TraceDoc::from),
        })
        .collect();
    Ok(InclusionVerdict {
        smaller: smaller.name.clone(),
        larger: larger.name.clone(),
        proved: relations.iter().all(|r| r.proved),
        syntactic: larger.relations().iter().all(|r| smaller.contains(&r.poly)),
        relations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionVerdict {
    pub node: String,
    pub left: String,
    pub right: String,
    pub method: String,
    pub proved: bool,
    /// the meet's relations are exactly the union of the parents'
    #[serde(skip_serializing_if = "Option::is_none")]
    pub syntactic: Option<bool>,
    /// meet ⊢ every parent relation
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forward: Option<bool>,
    /// parents ⊢ every meet relation
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// sampled points lying in the meet
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub disagreements: Vec<String>,
}

fn union(a: &Presentation, b: &Presentation) -> Presentation {
    let mut u = a.renamed(format!("{} & {}", a.name, b.name));
    for r in b.relations() {
        u.push(&r.poly, &r.label);
    }
    u
}

/// Classical manifold whose membership predicate stands for a node.
fn classical_manifold(node: &str) -> Result<Manifold> {
    match node.parse::<SphereKind>()? {
        SphereKind::Tsr => Ok(Manifold::Tsr),
        SphereKind::C => Ok(Manifold::SC),
        SphereKind::R => Ok(Manifold::SR),
        k => Err(Error::UnsupportedManifold(format!("no classical membership test for {k}"))),
    }
}

fn scalar_point(z: &[Complex64], seed: u64) -> ModelPoint {
    let mut p = ModelPoint::new("probe", z.len(), 1, seed);
    for (k, &v) in z.iter().enumerate() {
        p.insert(Letter::z(k + 1), CMat::from_element(1, 1, v));
    }
    p
}

/// Trial `k` of the classical comparison. Cycles through generic sphere
/// points, members of the meet, members with a vanishing coordinate, and
/// members with one coordinate's phase nudged off.
fn probe(meet: Manifold, n: usize, k: usize, seed: u64) -> Result<ModelPoint> {
    let s = seed.wrapping_add(k as u64);
    let base = |m| sample(m, n, s).and_then(|p| p.scalars());
    let mut z = match k % 4 {
        0 => base(Manifold::SC)?,
        _ => base(meet)?,
    };
    match k % 4 {
        2 => {
            z[k / 4 % n] = Complex64::new(0.0, 0.0);
            let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-9 {
                z.iter_mut().for_each(|v| *v /= norm);
            }
        }
        3 => z[k / 4 % n] *= Complex64::from_polar(1.0, 1e-2 * PI),
        _ => {}
    }
    Ok(scalar_point(&z, s))
}

/// Symbolic or classical check of `node = left ∩ right`.
pub fn verify_intersection(d: &Diagram, claim: &MeetClaim, cfg: &LatticeConfig) -> Result<IntersectionVerdict> {
    let (meet, l, r) = (d.presentation(&claim.node)?, d.presentation(&claim.left)?, d.presentation(&claim.right)?);
    let both = union(&l, &r);
    let mut v = IntersectionVerdict {
        node: claim.node.clone(),
        left: claim.left.clone(),
        right: claim.right.clone(),
        method: String::new(),
        proved: false,
        syntactic: None,
        forward: None,
        backward: None,
        samples: None,
        members: None,
        disagreements: vec![],
    };
    match claim.method {
        MeetMethod::Symbolic => {
            v.method = "symbolic".into();
            let all = |from: &Presentation, to: &Presentation| {
                derive_all(from, to, &cfg.search(), cfg.exec).iter().all(|(_, o)| o.is_proved())
            };
            let same = meet.relations().iter().all(|x| both.contains(&x.poly))
                && both.relations().iter().all(|x| meet.contains(&x.poly));
            v.syntactic = Some(same);
            v.forward = Some(all(&meet, &both));
            v.backward = Some(all(&both, &meet));
            v.proved = v.forward == Some(true) && v.backward == Some(true);
        }
        MeetMethod::Classical { samples } => {
            v.method = "classical".into();
            let m = classical_manifold(&claim.node)?;
            let n = d.n;
            let outcomes = cfg.exec.map_range(samples, |k| -> Result<(bool, bool)> {
                let pt = probe(m, n, k, cfg.seed)?;
                let inside = membership(m, &pt, cfg.tol)?;
                let parents = check_relations(&l, &pt, cfg.tol)?.holds() && check_relations(&r, &pt, cfg.tol)?.holds();
                Ok((inside, parents))
            });
            let mut members = 0;
            for (k, o) in outcomes.into_iter().enumerate() {
                let (inside, parents) = o?;
                members += inside as usize;
                if inside != parents && v.disagreements.len() < 5 {
                    v.disagreements.push(format!("sample {k}: member {inside}, parents {parents}"));
                }
            }
            v.samples = Some(samples);
            v.members = Some(members);
            // the symbolic half: the node's relations are the union's
            v.backward = Some(derive_all(&both, &meet, &cfg.search(), cfg.exec).iter().all(|(_, o)| o.is_proved()));
            v.proved = v.disagreements.is_empty() && v.backward == Some(true);
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealVerdict {
    pub node: String,
    pub of: String,
    /// real version ⊢ node
    pub forward: bool,
    /// node ⊢ real version
    pub backward: bool,
    pub proved: bool,
}

/// `node ⊣⊢ real_version(of)`.
pub fn verify_real_version(d: &Diagram, claim: &RealClaim, cfg: &LatticeConfig) -> Result<RealVerdict> {
    let node = d.presentation(&claim.node)?;
    let real = real_version(&d.presentation(&claim.of)?);
    let rep = crate::rewrite::check_presentation_equivalence(&real, &node, &cfg.search(), cfg.exec)?;
    Ok(RealVerdict {
        node: claim.node.clone(),
        of: claim.of.clone(),
        forward: rep.forward_all(),
        backward: rep.backward_all(),
        proved: rep.forward_all() && rep.backward_all(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProperStatus {
    Certified,
    Indirect,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProperVerdict {
    pub smaller: String,
    pub larger: String,
    pub status: ProperStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// the target is derivable in the smaller node
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_holds_below: Option<bool>,
    /// operator norm of the target at the witness
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// worst relation residual of the larger node at the witness
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation_residual: Option<f64>,
    /// the serialized witness passed a fresh evaluation
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointDoc>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

/// Re-reads a serialized point and returns `(presentation residual,
/// target residual)`; fails unless the first is below `tol` and the second
/// above `margin`.
pub fn reverify_witness(larger: &Presentation, target: &NCPolynomial, json: &str, tol: f64, margin: f64) -> Result<(f64, f64)> {
    let point: ModelPoint = serde_json::from_str(json).map_err(|e| Error::Invalid(format!("witness does not parse: {e}")))?;
    let rep = check_relations(larger, &point, tol)?;
    let res = point.residual(target)?;
    if !rep.holds() {
        return Err(Error::Invalid(format!("witness leaves {} with residual {:.3e}", larger.name, rep.max)));
    }
    if res <= margin {
        return Err(Error::Invalid(format!("target residual {res:.3e} is within the margin {margin}")));
    }
    Ok((rep.max, res))
}

/// Certifies `smaller ⊊ larger` with a model point of `larger` at which a
/// consequence of `smaller` fails.
pub fn verify_properness(d: &Diagram, claim: &ProperClaim, cfg: &LatticeConfig) -> Result<ProperVerdict> {
    let mut v = ProperVerdict {
        smaller: claim.smaller.clone(),
        larger: claim.larger.clone(),
        status: ProperStatus::Unknown,
        sampler: None,
        target: None,
        target_holds_below: None,
        residual: None,
        presentation_residual: None,
        reverified: None,
        digest: None,
        witness: None,
        note: String::new(),
    };
    let (sampler_name, target_text) = match &claim.witness {
        Witness::Indirect { reason } => {
            v.status = ProperStatus::Indirect;
            v.note = reason.clone();
            return Ok(v);
        }
        Witness::Model { sampler, target } => (sampler, target),
    };
    let (small, large) = (d.presentation(&claim.smaller)?, d.presentation(&claim.larger)?);
    let target = parse_polynomial(target_text, &large.alphabet())?;
    let sampler: Sampler = sampler_name.parse()?;
    v.sampler = Some(sampler.to_string());
    v.target = Some(target.to_string());
    let below = Prover::new(&small).check(&target, &cfg.search())?.is_proved();
    v.target_holds_below = Some(below);
    if !below {
        v.note = format!("target not derived in {}", claim.smaller);
        return Ok(v);
    }
    if sampler.is_preset() && d.n > 2 {
        v.note = format!("coordinates 3..{} of the preset are zero", d.n);
    }
    let rcfg = RefuteConfig { trials: cfg.trials, tol_strict: cfg.tol, margin: cfg.margin, seed: cfg.seed, exec: cfg.exec };
    match refute_implication(&large, &target, &sampler, &rcfg)? {
        Refutation::Counterexample { point, trial, residual, presentation_residual } => {
            let json = serde_json::to_string(&point).map_err(|e| Error::Invalid(e.to_string()))?;
            let again = reverify_witness(&large, &target, &json, cfg.tol, cfg.margin);
            v.residual = Some(residual);
            v.presentation_residual = Some(presentation_residual);
            v.reverified = Some(again.is_ok());
            v.digest = Some(format!("{} dim {} seed {} trial {trial}", point.manifold, point.dim, point.seed));
            v.witness = Some(point.to_doc());
            if again.is_ok() {
                v.status = ProperStatus::Certified;
            } else if let Err(e) = again {
                v.note = e.to_string();
            }
        }
        Refutation::NotFound { trials, best_residual } => {
            v.note = format!("no witness in {trials} trials; best target residual {best_residual:.3e}");
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitivityVerdict {
    pub path: [String; 3],
    pub proved: bool,
}

fn compose_checks(d: &Diagram, proved: &[(String, String)], cfg: &LatticeConfig) -> Result<Vec<TransitivityVerdict>> {
    let mut paths = Vec::new();
    for (a, b) in proved {
        for (b2, c) in proved {
            if b == b2 && a != c {
                paths.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let wide = LatticeConfig { budget: 2 * cfg.budget, ..*cfg };
    paths
        .into_iter()
        .map(|path| {
            let v = verify_inclusion(&d.presentation(&path[0])?, &d.presentation(&path[2])?, &wide)?;
            Ok(TransitivityVerdict { path, proved: v.proved })
        })
        .collect()
}

/// Runs every claim of a diagram.
pub fn verify_diagram(d: &Diagram, cfg: &LatticeConfig) -> Result<super::DiagramReport> {
    d.validate()?;
    let inclusions = cfg
        .exec
        .map_slice(&d.edges, |(a, b)| verify_inclusion(&d.presentation(a)?, &d.presentation(b)?, cfg))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let proved: Vec<(String, String)> = d
        .edges
        .iter()
        .zip(&inclusions)
        .filter(|(_, v)| v.proved)
        .map(|(e, _)| e.clone())
        .collect();
    let intersections = d.meets.iter().map(|m| verify_intersection(d, m, cfg)).collect::<Result<Vec<_>>>()?;
    let reals = d.reals.iter().map(|r| verify_real_version(d, r, cfg)).collect::<Result<Vec<_>>>()?;
    let properness =
        cfg.exec.map_slice(&d.proper, |p| verify_properness(d, p, cfg)).into_iter().collect::<Result<Vec<_>>>()?;
    let transitivity = compose_checks(d, &proved, cfg)?;
    Ok(super::DiagramReport {
        diagram: d.name.clone(),
        n: d.n,
        nodes: d.nodes.clone(),
        inclusions,
        intersections,
        reals,
        properness,
        transitivity,
    })
}

/// Count of proved items in one family of projective identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub total: usize,
    pub proved: usize,
    /// first few items left open
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub open: Vec<String>,
}

impl ClaimTally {
    pub fn holds(&self) -> bool {
        self.proved == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveReport {
    pub sphere: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// `p_ij p_kl = p_kl p_ij`
    pub commute: ClaimTally,
    /// `p_ij = p_ji*`
    pub adjoint: ClaimTally,
    /// `p_ij = p_ji`
    pub transpose: ClaimTally,
    /// `Σ_j p_ij p_jk = p_ik`
    pub idempotent: ClaimTally,
    /// `Σ_i p_ii = 1`
    pub trace: ClaimTally,
}

fn tally(prover: &Prover, items: Vec<(String, NCPolynomial)>, cfg: &LatticeConfig) -> Result<ClaimTally> {
    let outs = cfg.exec.map_slice(&items, |(_, p)| prover.check(p, &cfg.search()));
    let mut t = ClaimTally { total: items.len(), proved: 0, open: vec![] };
    for ((name, _), o) in items.iter().zip(outs) {
        match o? {
            Outcome::Proved(_) => t.proved += 1,
            Outcome::Inconclusive { .. } if t.open.len() < 5 => t.open.push(name.clone()),
            Outcome::Inconclusive { .. } => {}
        }
    }
    Ok(t)
}

/// Tries to derive the projective identities for `p_ij = z_i z_j*`.
pub fn projective_version_check(sphere: &Presentation, cfg: &LatticeConfig) -> Result<ProjectiveReport> {
    let n = match sphere.coordinates() {
        Some(crate::presentations::Coordinates::Sphere(n)) => n,
        _ => return Err(Error::Invalid(format!("{} is not a sphere presentation", sphere.name))),
    };
    let prover = Prover::new(sphere);
    let p = p_elem;
    let idx: Vec<usize> = (1..=n).collect();
    let mut commute = Vec::new();
    let (mut adjoint, mut transpose, mut idempotent) = (Vec::new(), Vec::new(), Vec::new());
    for &i in &idx {
        for &j in &idx {
            adjoint.push((format!("p{i}{j} = p{j}{i}*"), &p(i, j) - &p(j, i).star()));
            if i < j {
                transpose.push((format!("p{i}{j} = p{j}{i}"), &p(i, j) - &p(j, i)));
            }
            for &k in &idx {
                for &l in &idx {
                    if (i, j) < (k, l) {
                        commute.push((format!("[p{i}{j}, p{k}{l}]"), &(&p(i, j) * &p(k, l)) - &(&p(k, l) * &p(i, j))));
                    }
                }
            }
        }
        for &k in &idx {
            let sum = idx.iter().fold(NCPolynomial::zero(), |acc, &j| &acc + &(&p(i, j) * &p(j, k)));
            idempotent.push((format!("(p²){i}{k} = p{i}{k}"), &sum - &p(i, k)));
        }
    }
    let tr = idx.iter().fold(NCPolynomial::zero(), |acc, &i| &acc + &p(i, i));
    Ok(ProjectiveReport {
        sphere: sphere.name.clone(),
        n,
        commute: tally(&prover, commute, cfg)?,
        adjoint: tally(&prover, adjoint, cfg)?,
        transpose: tally(&prover, transpose, cfg)?,
        idempotent: tally(&prover, idempotent, cfg)?,
        trace: tally(&prover, vec![("tr p = 1".into(), &tr - &NCPolynomial::one())], cfg)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescalingReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub samples: usize,
    /// worst unit-relation residual over all samples
    pub max_residual: f64,
}

/// Evaluates the unit relations of the sphere in `N²` coordinates at
/// `z_ij = u_ij / √N` for Haar unitaries `u`.
pub fn rescaling_check(n: usize, samples: usize, seed: u64, exec: Exec) -> Result<RescalingReport> {
    let sphere = make_sphere(SphereKind::C, n * n)?;
    let scale = 1.0 / (n as f64).sqrt();
    let residuals = exec.map_range(samples, |k| -> Result<f64> {
        let u = haar_unitary(n, seed.wrapping_add(k as u64));
        let z: Vec<Complex64> = (0..n * n).map(|x| u[(x / n, x % n)] * scale).collect();
        Ok(check_relations(&sphere, &scalar_point(&z, k as u64), f64::INFINITY)?.max)
    });
    let max_residual = residuals.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    Ok(RescalingReport { n, samples, max_residual })
}

/// Biunitarity relations derived from a lift of projective contraction ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCheckReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub one_sided: bool,
    pub biunitarity: ClaimTally,
    /// replayable derivations, one per proved relation
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub traces: Vec<TraceDoc>,
}

impl LiftCheckReport {
    pub fn holds(&self) -> bool {
        self.biunitarity.holds()
    }
}

/// Lifts the given p- and q-ideals onto the free sphere in matrix
/// coordinates and tries to derive every biunitarity relation there.
pub fn lift_check_with(n: usize, p_ideal: &[NCPolynomial], q_ideal: &[NCPolynomial], cfg: &LatticeConfig) -> Result<LiftCheckReport> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let target = make_sphere_on(SphereKind::CPlus, Coordinates::Matrix(n));
    let lift = lift_conjugation_stable(p_ideal, q_ideal, &target)?;
    let prover = Prover::new(&lift.presentation);
    let rels = biunitarity(n);
    let outs = cfg.exec.map_slice(&rels, |r| prover.check(r, &cfg.search()));
    let mut t = ClaimTally { total: rels.len(), proved: 0, open: vec![] };
    let mut traces = Vec::new();
    for (r, o) in rels.iter().zip(outs) {
        match o? {
            Outcome::Proved(tr) => {
                t.proved += 1;
                traces.push(TraceDoc::from(&tr));
            }
            Outcome::Inconclusive { .. } if t.open.len() < 5 => t.open.push(r.to_string()),
            Outcome::Inconclusive { .. } => {}
        }
    }
    Ok(LiftCheckReport { n, one_sided: lift.one_sided, biunitarity: t, traces })
}

/// The lift of the rescaled projective unitary group lands inside the
/// biunitarity presentation.
pub fn unitary_group_lift_check(n: usize, cfg: &LatticeConfig) -> Result<LiftCheckReport> {
    let (p, q) = pu_ideals(n);
    lift_check_with(n, &p, &q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin;

    #[test]
    fn sharp_inside_star() {
        let cfg = LatticeConfig::default();
        let v = verify_inclusion(&make_sphere(SphereKind::CSharp, 3).unwrap(), &make_sphere(SphereKind::CStar, 3).unwrap(), &cfg)
            .unwrap();
        assert!(v.proved && !v.syntactic);
        let v = verify_inclusion(&make_sphere(SphereKind::CCirc, 2).unwrap(), &make_sphere(SphereKind::CSharp, 2).unwrap(), &cfg)
            .unwrap();
        assert!(v.proved && v.syntactic);
        let back = verify_inclusion(&make_sphere(SphereKind::CStar, 2).unwrap(), &make_sphere(SphereKind::CSharp, 2).unwrap(), &cfg)
            .unwrap();
        assert!(!back.proved);
    }

    #[test]
    fn alphabets_must_agree() {
        let g = crate::presentations::make_group(crate::presentations::GroupKind::UN, 2).unwrap();
        assert!(matches!(
            verify_inclusion(&make_sphere(SphereKind::C, 2).unwrap(), &g, &LatticeConfig::default()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn projective_identities() {
        let cfg = LatticeConfig::default();
        let star = projective_version_check(&make_sphere(SphereKind::CStar, 2).unwrap(), &cfg).unwrap();
        assert!(star.commute.holds() && star.idempotent.holds() && star.trace.holds() && star.adjoint.holds());
        let sharp = projective_version_check(&make_sphere(SphereKind::CSharp, 2).unwrap(), &cfg).unwrap();
        assert!(sharp.transpose.holds());
        let free = projective_version_check(&make_sphere(SphereKind::CPlus, 2).unwrap(), &cfg).unwrap();
        assert!(free.idempotent.holds() && !free.transpose.holds());
    }

    #[test]
    fn rescaled_unitaries_lie_on_the_sphere() {
        let r = rescaling_check(3, 20, 7, Exec::Sequential).unwrap();
        assert!(r.max_residual < 1e-12, "{}", r.max_residual);
    }

    #[test]
    fn witness_tampering_is_caught() {
        let d = builtin("six-spheres").unwrap();
        let claim = d.proper.iter().find(|p| p.smaller == "TSR" && p.larger == "Ccirc").unwrap();
        let v = verify_properness(&d, claim, &LatticeConfig::default()).unwrap();
        assert_eq!(v.status, ProperStatus::Certified);
        let large = make_sphere(SphereKind::CCirc, 2).unwrap();
        let target = parse_polynomial("z1 z2* = z2* z1", &large.alphabet()).unwrap();
        let mut doc = v.witness.unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        reverify_witness(&large, &target, &json, TOL_STRICT, MARGIN).unwrap();
        doc.matrices[0].data[0][0] += 0.1;
        let json = serde_json::to_string(&doc).unwrap();
        assert!(reverify_witness(&large, &target, &json, TOL_STRICT, MARGIN).is_err());
    }

    #[test]
    fn indirect_claims_are_not_certified() {
        let d = builtin("ten-spheres").unwrap();
        let claim = d.proper.iter().find(|p| matches!(p.witness, Witness::Indirect { .. })).unwrap();
        assert_eq!(verify_properness(&d, claim, &LatticeConfig::default()).unwrap().status, ProperStatus::Indirect);
    }

    #[test]
    fn unitary_lift() {
        let cfg = LatticeConfig::default();
        for n in 1..=2 {
            let r = unitary_group_lift_check(n, &cfg).unwrap();
            assert!(r.holds() && !r.one_sided, "{r:?}");
            assert_eq!(r.biunitarity.total, 4 * n * n);
        }
        let one = unitary_group_lift_check(1, &cfg).unwrap();
        assert_eq!(one.traces.len(), 4);
        let empty = lift_check_with(2, &[], &[], &cfg).unwrap();
        assert!(!empty.holds());
    }
}
