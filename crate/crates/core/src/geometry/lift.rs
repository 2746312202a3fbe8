//! Upper hull of a lifted planar point set.
//!
//! The upper boundary of `conv{(x, t) : t ≤ h(x)}` is found by walking across
//! facets: from an edge `(a, b)` of a known facet, the plane through the lifted
//! edge is rotated downward into the unexplored side until it first touches a
//! lifted point. Every point lying on the resulting plane belongs to the facet,
//! so coplanar lifts merge into a single polygonal facet.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{convex_hull_2d, orient2d, polygon_area, AffineFn2, Point2, Point3};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// One facet of the upper hull: its projected vertex cycle (counterclockwise,
/// starting at the lexicographically smallest vertex) as indices into the input,
/// and the affine function whose graph contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperFacet {
    pub vertices: Vec<usize>,
    pub affine: AffineFn2,
}

struct Lifted {
    xy: Point2,
    h: Rat,
    index: usize,
}

/// `orient2d(a, b, ·)` as an affine function of the third point.
fn orient_affine(a: &Point2, b: &Point2) -> AffineFn2 {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let c = &dy * &a.x - &dx * &a.y;
    AffineFn2::new(-dy, dx, c)
}

/// Facets of the upper hull of `lifted`, sorted by their vertex coordinates.
///
/// Points sharing a projection keep only the highest lift. Every input point
/// lies on or below every returned facet's affine function.
pub fn upper_hull_3d(lifted: &[Point3]) -> Result<Vec<UpperFacet>> {
    if lifted.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut best: BTreeMap<Point2, usize> = BTreeMap::new();
    for (i, p) in lifted.iter().enumerate() {
        let key = p.xy();
        match best.get(&key) {
            Some(&j) if lifted[j].z >= p.z => {}
            _ => {
                best.insert(key, i);
            }
        }
    }
    let pts: Vec<Lifted> = best
        .into_iter()
        .map(|(xy, i)| Lifted { xy, h: lifted[i].z.clone(), index: i })
        .collect();
    let by_xy: BTreeMap<&Point2, usize> = pts.iter().enumerate().map(|(i, p)| (&p.xy, i)).collect();

    let xy: Vec<Point2> = pts.iter().map(|p| p.xy.clone()).collect();
    let domain = convex_hull_2d(&xy)?;
    if domain.len() < 3 {
        return Err(Error::DegenerateLift);
    }

    // Seed: the first segment of the 1D upper hull along the domain edge
    // d0 -> d1. Among points of maximal slope from d0 take the farthest.
    let (d0, d1) = (&domain[0], &domain[1]);
    let dir = d1.sub(d0);
    let start = by_xy[d0];
    let mut seed: Option<(usize, Rat, Rat)> = None;
    for (i, p) in pts.iter().enumerate() {
        if i == start || !orient2d(d0, d1, &p.xy).is_zero() {
            continue;
        }
        let t = p.xy.sub(d0).dot(&dir);
        if !t.is_positive() {
            continue;
        }
        let slope = (&p.h - &pts[start].h) / &t;
        let better = match &seed {
            None => true,
            Some((_, s, bt)) => slope > *s || (slope == *s && t > *bt),
        };
        if better {
            seed = Some((i, slope, t));
        }
    }
    let (b, _, _) = seed.ok_or_else(|| Error::Invariant("domain edge without endpoint".into()))?;
    let (a_xy, b_xy) = (&pts[start].xy, &pts[b].xy);
    let ab = b_xy.sub(a_xy);
    let ab2 = ab.dot(&ab);
    // Any affine extension of the lifted segment works for the seed edge.
    let slope = (&pts[b].h - &pts[start].h) / &ab2;
    let seed_fn = AffineFn2::new(
        &ab.x * &slope,
        &ab.y * &slope,
        &pts[start].h - &slope * ab.dot(a_xy),
    );

    let mut queue: VecDeque<(usize, usize, AffineFn2)> = VecDeque::new();
    queue.push_back((start, b, seed_fn));
    let mut seen: BTreeSet<AffineFn2> = BTreeSet::new();
    let mut facets: Vec<UpperFacet> = Vec::new();

    while let Some((a, b, base)) = queue.pop_front() {
        let (pa, pb) = (&pts[a].xy, &pts[b].xy);
        let turn = orient_affine(pa, pb);
        let mut best_slope: Option<Rat> = None;
        for p in &pts {
            let o = turn.eval(&p.xy);
            if !o.is_positive() {
                continue;
            }
            let s = (&p.h - base.eval(&p.xy)) / o;
            if best_slope.as_ref().is_none_or(|bs| s > *bs) {
                best_slope = Some(s);
            }
        }
        let Some(s) = best_slope else { continue };
        let plane = base.add(&turn.scale(&s));
        if !seen.insert(plane.clone()) {
            continue;
        }
        let on_plane: Vec<Point2> = pts
            .iter()
            .filter(|p| plane.eval(&p.xy) == p.h)
            .map(|p| p.xy.clone())
            .collect();
        let cell = convex_hull_2d(&on_plane)?;
        if cell.len() < 3 {
            return Err(Error::Invariant("upper hull facet is not two-dimensional".into()));
        }
        let ids: Vec<usize> = cell.iter().map(|q| by_xy[q]).collect();
        for i in 0..ids.len() {
            let (u, v) = (ids[i], ids[(i + 1) % ids.len()]);
            queue.push_back((v, u, plane.clone()));
        }
        facets.push(UpperFacet {
            vertices: ids.iter().map(|&i| pts[i].index).collect(),
            affine: plane,
        });
    }

    // The projected facets must tile the domain.
    let covered: Rat = facets
        .iter()
        .map(|f| {
            let poly: Vec<Point2> = f.vertices.iter().map(|&i| lifted[i].xy()).collect();
            polygon_area(&poly)
        })
        .sum();
    if covered != polygon_area(&domain) {
        return Err(Error::Invariant(format!(
            "upper hull facets cover area {covered}, domain has {}",
            polygon_area(&domain)
        )));
    }
    for f in &facets {
        for p in lifted {
            if f.affine.eval(&p.xy()) < p.z {
                return Err(Error::Invariant("lifted point above an upper hull facet".into()));
            }
        }
    }
    facets.sort_by(|f, g| {
        let fk: Vec<Point2> = f.vertices.iter().map(|&i| lifted[i].xy()).collect();
        let gk: Vec<Point2> = g.vertices.iter().map(|&i| lifted[i].xy()).collect();
        fk.cmp(&gk)
    });
    Ok(facets)
}
