//! JSON file formats for polytopes, symmetry groups and height vectors.
//!
//! Rationals are written as strings `"p/q"` in lowest terms (integers without
//! the denominator). All writers produce deterministic pretty-printed output.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::envelope::HeightVector;
use crate::error::{Error, Result};
use crate::polytope::{LatticePoint, LatticeSet, Polytope2D};
use crate::solver::{heights_from_entries, HeightEntry};
use crate::symmetry::{group_closure, IntMatrix, WeylGroup};

/// A polygon given by its vertices, with optional symmetry generators.
///
/// ```json
/// { "name": "square", "vertices": [[0,0],[1,0],[1,1],[0,1]],
///   "generators": [[[0,-1],[1,0]]] }
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<[i64; 2]>,
    #[serde(default)]
    pub generators: Vec<[[i64; 2]; 2]>,
}

impl PolytopeFile {
    pub fn from_parts(p: &Polytope2D, group: &WeylGroup) -> Self {
        PolytopeFile {
            name: p.name().map(str::to_string),
            vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
            generators: group.generators().iter().map(|g| g.0).collect(),
        }
    }

    /// The polygon and the group generated by the listed matrices (trivial
    /// when none are given). Each generator must preserve the polygon.
    pub fn build(&self) -> Result<(Polytope2D, WeylGroup)> {
        let vertices = self.vertices.iter().map(|&[x, y]| LatticePoint::new(x, y)).collect();
        let p = Polytope2D::new(vertices, self.name.clone())?;
        let group = if self.generators.is_empty() {
            WeylGroup::trivial()
        } else {
            let gens: Vec<IntMatrix> = self.generators.iter().map(|&m| IntMatrix(m)).collect();
            group_closure(&gens, &p, "custom")?
        };
        Ok((p, group))
    }
}

pub fn parse_polytope(json: &str) -> Result<(Polytope2D, WeylGroup)> {
    let file: PolytopeFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}

pub fn polytope_to_json(p: &Polytope2D, group: &WeylGroup) -> String {
    to_json(&PolytopeFile::from_parts(p, group))
}

/// Lattice heights on `k·P`, one entry per lattice point.
///
/// ```json
/// { "k": 1, "values": [ { "x": [0,0], "v": "1/2" }, ... ] }
/// ```
///
/// A single stability report is accepted as well; its certificate is read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    pub values: Vec<HeightEntry>,
}

impl HeightsFile {
    pub fn from_heights(phi: &HeightVector) -> Self {
        let values = phi
            .lattice()
            .points()
            .iter()
            .zip(phi.values())
            .map(|(p, v)| HeightEntry { x: [p.x, p.y], v: v.clone() })
            .collect();
        HeightsFile { k: Some(phi.lattice().k()), values }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HeightsInput {
    Plain(HeightsFile),
    Report { k: i64, certificate: HeightsFile },
}

/// Reads heights for `lattice`. A stated `k` must match the lattice.
pub fn parse_heights(json: &str, lattice: Arc<LatticeSet>) -> Result<HeightVector> {
    let input: HeightsInput = serde_json::from_str(json)
        .map_err(|_| Error::Parse("expected a heights object or a stability report with a certificate".into()))?;
    let file = match input {
        HeightsInput::Plain(f) => f,
        HeightsInput::Report { k, certificate } => HeightsFile { k: Some(k), values: certificate.values },
    };
    if let Some(k) = file.k {
        if k != lattice.k() {
            return Err(Error::Parse(format!("heights are for k = {k}, expected k = {}", lattice.k())));
        }
    }
    heights_from_entries(lattice, &file.values)
}

pub fn heights_to_json(phi: &HeightVector) -> String {
    to_json(&HeightsFile::from_heights(phi))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polytope::lattice_points;
    use crate::rat::Rat;

    #[test]
    fn catalog_polytopes_round_trip() {
        for e in catalog::entries() {
            let json = polytope_to_json(&e.polytope, &e.weyl);
            let (p, g) = parse_polytope(&json).unwrap();
            assert_eq!(p, e.polytope);
            assert_eq!(g.elements(), e.weyl.elements());
        }
    }

    #[test]
    fn polytope_without_group() {
        let (p, g) = parse_polytope(r#"{"vertices": [[0,0],[2,0],[0,2]]}"#).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(g.is_trivial());
    }

    #[test]
    fn bad_polytopes_are_rejected() {
        assert!(matches!(parse_polytope("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_polytope(r#"{"vertices": [[0,0],[1,1],[2,2]]}"#), Err(Error::InvalidPolytope(_))));
        let rot = r#"{"vertices": [[0,0],[2,0],[0,1]], "generators": [[[0,-1],[1,0]]]}"#;
        assert!(matches!(parse_polytope(rot), Err(Error::NotASymmetry(_))));
        assert!(parse_polytope(r#"{"vertices": [[0,0],[1,0],[0,1]], "extra": 1}"#).is_err());
    }

    #[test]
    fn heights_round_trip() {
        let l = Arc::new(lattice_points(&catalog::delta2(), 1).unwrap());
        let phi = HeightVector::from_fn(l.clone(), |p| Rat::new(p.x * p.x - 3, 7));
        let json = heights_to_json(&phi);
        assert!(json.contains("\"-3/7\""));
        assert_eq!(parse_heights(&json, l.clone()).unwrap(), phi);

        let other = Arc::new(lattice_points(&catalog::delta2(), 2).unwrap());
        assert!(matches!(parse_heights(&json, other), Err(Error::Parse(_))));
        let missing = r#"{"values": [{"x": [0,0], "v": "1"}]}"#;
        assert!(matches!(parse_heights(missing, l), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn heights_from_a_report() {
        let e = catalog::entry("X2").unwrap();
        let r = crate::solver::decide_stability(&e.polytope, &e.weyl, 1, &Default::default()).unwrap();
        let l = Arc::new(lattice_points(&e.polytope, 1).unwrap());
        let phi = parse_heights(&to_json(&r), l.clone()).unwrap();
        assert_eq!(phi, r.certificate.unwrap().to_heights(l).unwrap());
    }
}
