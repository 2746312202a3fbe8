//! SVG drawings of dilated polygons: the outline, the lattice points and the
//! cells of a regular subdivision.
//!
//! Boundary points are filled, interior points are hollow. The output depends
//! only on the input and is byte-for-byte reproducible.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::envelope::RegularSubdivision;
use crate::geometry::orient2d;
use crate::polytope::{LatticePoint, LatticeSet};

/// Pixels per lattice unit.
pub const UNIT: i64 = 40;
const MARGIN: i64 = 24;

/// Draws `lattice`, with the interior edges of `subdivision` when given.
pub fn render(lattice: &LatticeSet, subdivision: Option<&RegularSubdivision>) -> String {
    let pts = lattice.points();
    let (min_x, max_x) = (pts.iter().map(|p| p.x).min().unwrap_or(0), pts.iter().map(|p| p.x).max().unwrap_or(0));
    let (min_y, max_y) = (pts.iter().map(|p| p.y).min().unwrap_or(0), pts.iter().map(|p| p.y).max().unwrap_or(0));
    let width = (max_x - min_x) * UNIT + 2 * MARGIN;
    let height = (max_y - min_y) * UNIT + 2 * MARGIN;
    let sx = |p: &LatticePoint| (p.x - min_x) * UNIT + MARGIN;
    let sy = |p: &LatticePoint| (max_y - p.y) * UNIT + MARGIN;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    if let Some(sub) = subdivision {
        let _ = writeln!(out, r#"<g stroke="red" stroke-width="2.5" stroke-linecap="round">"#);
        for (a, b) in interior_edges(lattice, sub) {
            let (p, q) = (&pts[a], &pts[b]);
            let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, sx(p), sy(p), sx(q), sy(q));
        }
        let _ = writeln!(out, "</g>");
    }

    let outline: Vec<String> = lattice.dilated().vertices().iter().map(|v| format!("{},{}", sx(v), sy(v))).collect();
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="gray" stroke-width="2.5" stroke-linejoin="round"/>"#,
        outline.join(" ")
    );

    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5">"#);
    for (i, p) in pts.iter().enumerate() {
        let fill = if lattice.is_boundary(i) { "black" } else { "white" };
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="4" fill="{fill}"/>"#, sx(p), sy(p));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

/// Cell edges not contained in the outline, as sorted index pairs.
fn interior_edges(lattice: &LatticeSet, sub: &RegularSubdivision) -> BTreeSet<(usize, usize)> {
    let pts = lattice.points();
    let verts: Vec<_> = lattice.dilated().vertex_points();
    let n = verts.len();
    let on_outline = |a: usize, b: usize| {
        let (p, q) = (pts[a].to_point(), pts[b].to_point());
        (0..n).any(|i| {
            let (u, v) = (&verts[i], &verts[(i + 1) % n]);
            orient2d(u, v, &p).is_zero() && orient2d(u, v, &q).is_zero()
        })
    };
    let mut edges = BTreeSet::new();
    for cell in sub.cells() {
        let v = &cell.vertices;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            if !on_outline(a, b) {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    edges
}
