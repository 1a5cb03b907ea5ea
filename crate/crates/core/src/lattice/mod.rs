//! Inclusion diagrams of spheres and quantum groups.
//!
//! A diagram is a text file listing nodes (preset names), inclusion edges,
//! intersection claims, real-version claims and properness claims. The
//! shipped figures live in `data/` and are compiled in.
//!
//! ```text
//! diagram "six-spheres"
//! N 2
//! node C
//! node Csstar
//! edge C < Csstar
//! meet TSR = C & Ccirc classical 1000
//! real R = Csharp
//! proper C < Csstar by pq-doubling target "z1 z2* = z2* z1"
//! proper Rstar < Rplus indirect "why"
//! ```

mod check;
mod report;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::{make_group, make_sphere, GroupKind, Presentation, SphereKind};

pub use check::{
    lift_check_with, projective_version_check, rescaling_check, reverify_witness, unitary_group_lift_check,
    verify_diagram, verify_inclusion, verify_intersection, verify_properness, verify_real_version, ClaimTally,
    InclusionVerdict, IntersectionVerdict, LatticeConfig, LiftCheckReport, ProjectiveReport, ProperStatus,
    ProperVerdict, RealVerdict, RelationProof, RescalingReport, TransitivityVerdict,
};
pub use report::DiagramReport;

pub const SIX_SPHERES: &str = include_str!("../../data/six_spheres.diagram");
pub const TEN_SPHERES: &str = include_str!("../../data/ten_spheres.diagram");
pub const GROUPS: &str = include_str!("../../data/groups.diagram");

/// Names accepted by [`builtin`].
pub const BUILTIN: [&str; 3] = ["six-spheres", "ten-spheres", "groups"];

/// One of the shipped diagrams.
pub fn builtin(name: &str) -> Result<Diagram> {
    let text = match name {
        "six-spheres" | "six" => SIX_SPHERES,
        "ten-spheres" | "ten" => TEN_SPHERES,
        "groups" => GROUPS,
        _ => return Err(Error::UnknownPreset(format!("diagram `{name}`"))),
    };
    Diagram::parse(text)
}

/// A preset a node refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Sphere(#[serde(with = "kind_name")] SphereKind),
    Group(#[serde(with = "kind_name")] GroupKind),
}

mod kind_name {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(k: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(k)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error>
    where
        T::Err: Display,
    {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for NodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.parse()
            .map(NodeKind::Sphere)
            .or_else(|_| s.parse().map(NodeKind::Group))
            .map_err(|_| Error::UnknownPreset(s.to_string()))
    }
}

impl NodeKind {
    pub fn presentation(self, n: usize) -> Result<Presentation> {
        match self {
            NodeKind::Sphere(k) => make_sphere(k, n),
            NodeKind::Group(g) => make_group(g, n),
        }
    }
}

/// How an intersection claim is checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MeetMethod {
    /// relations of the meet and of the union of the parents derive each other
    Symbolic,
    /// the meet's classical membership agrees with the parents' relations on
    /// sampled scalar points
    Classical { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetClaim {
    pub node: String,
    pub left: String,
    pub right: String,
    #[serde(flatten)]
    pub method: MeetMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// a sampler for the larger node and a relation of the smaller one
    Model { sampler: String, target: String },
    /// no finite witness; the text says why the edge is believed strict
    Indirect { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperClaim {
    pub smaller: String,
    pub larger: String,
    pub witness: Witness,
}

/// `node` is the real version of `of`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealClaim {
    pub node: String,
    pub of: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub name: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub nodes: Vec<String>,
    /// `(smaller, larger)`
    pub edges: Vec<(String, String)>,
    pub meets: Vec<MeetClaim>,
    pub reals: Vec<RealClaim>,
    pub proper: Vec<ProperClaim>,
}

impl Diagram {
    pub fn empty(name: impl Into<String>, n: usize) -> Self {
        Diagram { name: name.into(), n, nodes: vec![], edges: vec![], meets: vec![], reals: vec![], proper: vec![] }
    }

    pub fn kind(&self, node: &str) -> Result<NodeKind> {
        if !self.nodes.iter().any(|x| x == node) {
            return Err(Error::Invalid(format!("`{node}` is not a node of `{}`", self.name)));
        }
        node.parse()
    }

    pub fn presentation(&self, node: &str) -> Result<Presentation> {
        self.kind(node)?.presentation(self.n)
    }

    pub fn has_edge(&self, smaller: &str, larger: &str) -> bool {
        self.edges.iter().any(|(a, b)| a == smaller && b == larger)
    }

    /// Checks that every claim refers to declared nodes and edges.
    pub fn validate(&self) -> Result<()> {
        for n in &self.nodes {
            n.parse::<NodeKind>()?;
        }
        let node = |x: &str| self.kind(x).map(|_| ());
        for (a, b) in &self.edges {
            node(a)?;
            node(b)?;
        }
        for m in &self.meets {
            node(&m.node)?;
            node(&m.left)?;
            node(&m.right)?;
        }
        for r in &self.reals {
            node(&r.node)?;
            node(&r.of)?;
        }
        for p in &self.proper {
            if !self.has_edge(&p.smaller, &p.larger) {
                return Err(Error::Invalid(format!("properness claim on missing edge {} < {}", p.smaller, p.larger)));
            }
        }
        Ok(())
    }

    /// Parses the diagram text format; see the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = Diagram::empty("", 2);
        let mut named = false;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let err = |msg: String| Error::Parse { line, col: 1, msg };
            let body = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if body.is_empty() {
                continue;
            }
            let w = shlex::split(body).ok_or_else(|| err("unbalanced quotes".into()))?;
            let w: Vec<&str> = w.iter().map(String::as_str).collect();
            match w.as_slice() {
                ["diagram", name] => {
                    d.name = name.to_string();
                    named = true;
                }
                ["N", n] => d.n = n.parse().map_err(|_| err(format!("bad N `{n}`")))?,
                ["node", name] => {
                    name.parse::<NodeKind>().map_err(|e| err(e.to_string()))?;
                    d.nodes.push(name.to_string());
                }
                ["edge", a, "<", b] => d.edges.push((a.to_string(), b.to_string())),
                ["meet", x, "=", a, "&", b, "symbolic"] => {
                    d.meets.push(MeetClaim { node: x.to_string(), left: a.to_string(), right: b.to_string(), method: MeetMethod::Symbolic })
                }
                ["meet", x, "=", a, "&", b, "classical", s] => d.meets.push(MeetClaim {
                    node: x.to_string(),
                    left: a.to_string(),
                    right: b.to_string(),
                    method: MeetMethod::Classical { samples: s.parse().map_err(|_| err(format!("bad sample count `{s}`")))? },
                }),
                ["real", x, "=", y] => d.reals.push(RealClaim { node: x.to_string(), of: y.to_string() }),
                ["proper", a, "<", b, "by", sampler, "target", t] => d.proper.push(ProperClaim {
                    smaller: a.to_string(),
                    larger: b.to_string(),
                    witness: Witness::Model { sampler: sampler.to_string(), target: t.to_string() },
                }),
                ["proper", a, "<", b, "indirect", why] => d.proper.push(ProperClaim {
                    smaller: a.to_string(),
                    larger: b.to_string(),
                    witness: Witness::Indirect { reason: why.to_string() },
                }),
                _ => return Err(err(format!("cannot read `{body}`"))),
            }
        }
        if !named {
            return Err(Error::Parse { line: 1, col: 1, msg: "missing `diagram NAME` line".into() });
        }
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_diagrams_parse() {
        let six = builtin("six-spheres").unwrap();
        assert_eq!((six.nodes.len(), six.edges.len(), six.meets.len(), six.proper.len()), (6, 7, 2, 7));
        let ten = builtin("ten-spheres").unwrap();
        assert_eq!((ten.nodes.len(), ten.reals.len()), (10, 3));
        assert_eq!(builtin("groups").unwrap().edges.len(), 7);
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(matches!(Diagram::parse("diagram x\nnode Nope\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Diagram::parse("diagram x\nnode C\nedge C < Cstar\n"), Err(Error::Invalid(_))));
        assert!(matches!(Diagram::parse("diagram x\nnode C\nnode Cstar\nproper C < Cstar indirect \"x\"\n"), Err(Error::Invalid(_))));
        assert!(matches!(Diagram::parse("node C\n"), Err(Error::Parse { .. })));
        assert!(matches!(Diagram::parse("diagram x\nwhat\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn json_round_trip() {
        let d = builtin("ten-spheres").unwrap();
        let back: Diagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
