//! The four built-in toric surfaces and their symmetry groups.

use crate::error::{Error, Result};
use crate::polytope::Polytope2D;
use crate::symmetry::{group_closure, IntMatrix, WeylGroup};

/// Rotation of order 3 preserving `△₃`.
pub const SIGMA3: IntMatrix = IntMatrix([[0, -1], [1, -1]]);
/// Rotation of order 4 preserving `△₄`.
pub const SIGMA4: IntMatrix = IntMatrix([[0, -1], [1, 0]]);

/// A named polytope with its group and a short description of the surface.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub polytope: Polytope2D,
    pub weyl: WeylGroup,
    pub note: &'static str,
}

pub fn delta1() -> Polytope2D {
    Polytope2D::from_pairs(&[(1, 2), (2, 1), (-3, -3)], "X1").expect("valid polytope")
}

pub fn delta2() -> Polytope2D {
    Polytope2D::from_pairs(&[(-2, 0), (2, 0), (0, 1), (0, -1)], "X2").expect("valid polytope")
}

pub fn delta3() -> Polytope2D {
    Polytope2D::from_pairs(&[(0, 3), (3, 0), (-3, -3)], "X3").expect("valid polytope")
}

pub fn delta4() -> Polytope2D {
    Polytope2D::from_pairs(&[(3, 0), (0, 3), (-3, 0), (0, -3)], "X4").expect("valid polytope")
}

/// The catalog polytopes in order `X1..X4`.
pub fn polytopes() -> Vec<Polytope2D> {
    vec![delta1(), delta2(), delta3(), delta4()]
}

/// All catalog entries. Each group is closed and checked against its
/// polytope on construction.
pub fn entries() -> Vec<CatalogEntry> {
    let flips = [IntMatrix([[-1, 0], [0, 1]]), IntMatrix([[1, 0], [0, -1]])];
    let table: [(&'static str, Polytope2D, Vec<IntMatrix>, &'static str, &'static str); 4] = [
        (
            "X1",
            delta1(),
            vec![IntMatrix::SWAP],
            "Z/2",
            "P^2/(Z/9), polarized by -3K, embedded in P^6",
        ),
        (
            "X2",
            delta2(),
            flips.to_vec(),
            "Z/2 x Z/2",
            "(P^1 x P^1)/(Z/4), polarized by -2K, embedded in P^6; group realized as axis sign flips",
        ),
        (
            "X3",
            delta3(),
            vec![SIGMA3, IntMatrix::SWAP],
            "D3",
            "cubic surface xyz = w^3 in P^3, polarized by -K; vertices read off the standard figure",
        ),
        (
            "X4",
            delta4(),
            vec![SIGMA4, IntMatrix::SWAP],
            "D4",
            "intersection of two quadrics in P^4, polarized by -K; vertices read off the standard figure",
        ),
    ];
    table.into_iter()
        .map(|(id, polytope, gens, group_name, note)| {
            let weyl = group_closure(&gens, &polytope, group_name).expect("catalog group preserves its polytope");
            CatalogEntry { id, polytope, weyl, note }
        })
        .collect()
}

/// Case-insensitive lookup of `X1..X4`.
pub fn entry(id: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownPolytope(id.to_string()))
}
