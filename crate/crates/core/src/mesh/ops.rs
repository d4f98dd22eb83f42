//! Topology and vertex-placement operations: refinement, equiangulation and
//! vertex averaging.

use std::collections::HashMap;

use super::{edge_key, ConstraintSet, Facet, SurfaceMesh, Vertex, TOL_DEG};
use crate::Vec3;

/// An edge flip happens when the opposite angles sum past π by this margin.
pub const TOL_FLIP: f64 = 1e-9;

/// Kind of an edge, from the facets that contain it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EdgeKind {
    /// On a mirror plane, one facet.
    Boundary,
    /// Between a surface facet and a CLEAR facet.
    Interface,
    /// Between CLEAR facets lying on different face spheres.
    SphereSeam,
    /// Between two CLEAR facets on the same sphere.
    ClearInterior,
    /// Between two surface facets.
    Interior,
}

impl EdgeKind {
    pub(crate) fn is_feature(self) -> bool {
        matches!(self, EdgeKind::Boundary | EdgeKind::Interface | EdgeKind::SphereSeam)
    }
}

/// Face spheres shared by all three vertices of a facet.
pub(crate) fn facet_spheres(mesh: &SurfaceMesh, f: &Facet) -> ConstraintSet {
    let [a, b, c] = f.v.map(|i| mesh.vertices[i].constraints);
    a.intersection(b).intersection(c).spheres()
}

pub(crate) fn edge_kind(mesh: &SurfaceMesh, facets: &[usize]) -> EdgeKind {
    match facets {
        [_] => EdgeKind::Boundary,
        [f, g] => {
            let (f, g) = (&mesh.facets[*f], &mesh.facets[*g]);
            match (f.clear, g.clear) {
                (false, false) => EdgeKind::Interior,
                (true, true) => {
                    if facet_spheres(mesh, f) == facet_spheres(mesh, g) {
                        EdgeKind::ClearInterior
                    } else {
                        EdgeKind::SphereSeam
                    }
                }
                _ => EdgeKind::Interface,
            }
        }
        _ => EdgeKind::Interior,
    }
}

/// Constraints a new point on edge `(a, b)` should carry.
fn edge_constraints(mesh: &SurfaceMesh, a: usize, b: usize, kind: EdgeKind) -> ConstraintSet {
    let common = mesh.vertices[a].constraints.intersection(mesh.vertices[b].constraints);
    match kind {
        EdgeKind::Interior => ConstraintSet::EMPTY,
        _ => common,
    }
}

/// Split every facet into four at its edge midpoints. Midpoints inherit the
/// constraints that the edge lies on and are projected onto them.
pub fn refine(mesh: &mut SurfaceMesh) {
    let ef = mesh.edge_facets();
    let mut keys: Vec<(usize, usize)> = ef.keys().copied().collect();
    keys.sort_unstable();
    let mut mid: HashMap<(usize, usize), usize> = HashMap::with_capacity(keys.len());
    for (a, b) in keys {
        let kind = edge_kind(mesh, &ef[&(a, b)]);
        let cons = edge_constraints(mesh, a, b, kind);
        let p = 0.5 * (mesh.vertices[a].pos + mesh.vertices[b].pos);
        mid.insert((a, b), mesh.vertices.len());
        mesh.vertices.push(Vertex::new(cons.project(&p), cons));
    }
    let mut facets = Vec::with_capacity(mesh.facets.len() * 4);
    for f in &mesh.facets {
        let [a, b, c] = f.v;
        let ab = mid[&edge_key(a, b)];
        let bc = mid[&edge_key(b, c)];
        let ca = mid[&edge_key(c, a)];
        for v in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
            facets.push(Facet { v, clear: f.clear });
        }
    }
    mesh.facets = facets;
}

/// The vertex of `f` not on edge `(a, b)`.
fn apex(f: &Facet, a: usize, b: usize) -> usize {
    *f.v.iter().find(|&&v| v != a && v != b).expect("facet has three distinct vertices")
}

/// Rotate `f` so that it starts with the directed edge `a → b`, if present.
fn starts_with(f: &Facet, a: usize, b: usize) -> bool {
    f.edges().contains(&(a, b))
}

fn opposite_angle(la: f64, lb: f64, lc: f64) -> f64 {
    // angle opposite the side of length lc
    ((la * la + lb * lb - lc * lc) / (2.0 * la * lb)).clamp(-1.0, 1.0).acos()
}

/// Flip edges until every interior edge satisfies the Delaunay angle
/// criterion in Riemannian edge lengths. Returns the number of flips.
pub fn equiangulate(mesh: &mut SurfaceMesh) -> usize {
    let mut total = 0;
    for _ in 0..100 {
        let flips = equiangulate_pass(mesh);
        total += flips;
        if flips == 0 {
            break;
        }
    }
    total
}

fn equiangulate_pass(mesh: &mut SurfaceMesh) -> usize {
    let mut ef = mesh.edge_facets();
    let mut keys: Vec<(usize, usize)> = ef.keys().copied().collect();
    keys.sort_unstable();
    let mut degree = vec![0usize; mesh.vertices.len()];
    for &(a, b) in &keys {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut touched = vec![false; mesh.facets.len()];
    let mut flips = 0;
    for (a, b) in keys {
        let Some(fs) = ef.get(&(a, b)).cloned() else { continue };
        if fs.len() != 2 || touched[fs[0]] || touched[fs[1]] {
            continue;
        }
        let kind = edge_kind(mesh, &fs);
        if kind.is_feature() {
            continue;
        }
        let (mut f1, mut f2) = (fs[0], fs[1]);
        if !starts_with(&mesh.facets[f1], a, b) {
            std::mem::swap(&mut f1, &mut f2);
        }
        let c = apex(&mesh.facets[f1], a, b);
        let d = apex(&mesh.facets[f2], a, b);
        if c == d || ef.contains_key(&edge_key(c, d)) || degree[a] <= 3 || degree[b] <= 3 {
            continue;
        }
        let l = |x, y| mesh.riemannian_length(x, y);
        let (lab, lac, lbc, lad, lbd) = (l(a, b), l(a, c), l(b, c), l(a, d), l(b, d));
        let gamma = opposite_angle(lac, lbc, lab);
        let delta = opposite_angle(lad, lbd, lab);
        if gamma + delta <= std::f64::consts::PI + TOL_FLIP {
            continue;
        }
        // the new edge must not run along a constraint the surface only
        // touches at isolated vertices
        let cons = |i: usize| mesh.vertices[i].constraints;
        let new_common = cons(c).intersection(cons(d));
        let allowed = match kind {
            EdgeKind::Interior => new_common.is_empty(),
            _ => new_common.planes().is_empty(),
        };
        if !allowed {
            continue;
        }
        let clear = mesh.facets[f1].clear;
        let n1 = Facet { v: [a, d, c], clear };
        let n2 = Facet { v: [d, b, c], clear };
        let old = mesh.facet_normal(&mesh.facets[f1]) + mesh.facet_normal(&mesh.facets[f2]);
        let (m1, m2) = (mesh.facet_normal(&n1), mesh.facet_normal(&n2));
        if 0.5 * m1.norm() < TOL_DEG || 0.5 * m2.norm() < TOL_DEG || m1.dot(&old) <= 0.0 || m2.dot(&old) <= 0.0 {
            continue;
        }
        mesh.facets[f1] = n1;
        mesh.facets[f2] = n2;
        touched[f1] = true;
        touched[f2] = true;
        ef.remove(&(a, b));
        ef.insert(edge_key(c, d), vec![f1, f2]);
        // (b, c) moved from f1 to f2, (a, d) from f2 to f1
        replace_owner(&mut ef, edge_key(b, c), f1, f2);
        replace_owner(&mut ef, edge_key(a, d), f2, f1);
        degree[a] -= 1;
        degree[b] -= 1;
        degree[c] += 1;
        degree[d] += 1;
        flips += 1;
    }
    flips
}

fn replace_owner(ef: &mut HashMap<(usize, usize), Vec<usize>>, e: (usize, usize), from: usize, to: usize) {
    if let Some(v) = ef.get_mut(&e) {
        for f in v.iter_mut() {
            if *f == from {
                *f = to;
            }
        }
    }
}

/// Move vertices toward the centroid of their stars, within the tangent
/// plane.
///
/// Vertices on feature curves (mirror boundaries, CLEAR interfaces, seams
/// between face spheres) average only with their two feature neighbours;
/// junctions and vertices with three constraints stay put. When
/// `clear_only` is set, only vertices surrounded entirely by CLEAR facets
/// move, which leaves the area functional unchanged.
pub fn vertex_average(mesh: &mut SurfaceMesh, clear_only: bool) {
    let ef = mesh.edge_facets();
    let nv = mesh.vertices.len();
    let mut feature_nb: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut keys: Vec<(usize, usize)> = ef.keys().copied().collect();
    keys.sort_unstable();
    for (a, b) in keys {
        if edge_kind(mesh, &ef[&(a, b)]).is_feature() {
            feature_nb[a].push(b);
            feature_nb[b].push(a);
        }
    }
    let vf = mesh.vertex_facets();
    let mut new_pos: Vec<Vec3> = mesh.positions();
    for i in 0..nv {
        let v = &mesh.vertices[i];
        if v.is_fixed() || vf[i].is_empty() {
            continue;
        }
        if clear_only && vf[i].iter().any(|&f| !mesh.facets[f].clear) {
            continue;
        }
        let target = match feature_nb[i].len() {
            0 => {
                let mut acc = Vec3::zeros();
                let mut w = 0.0;
                let mut normal = Vec3::zeros();
                for &fi in &vf[i] {
                    let f = &mesh.facets[fi];
                    let [p, q, r] = mesh.corners(f);
                    let a = mesh.euclidean_area(f);
                    acc += a * (p + q + r) / 3.0;
                    w += a;
                    normal += mesh.facet_normal(f);
                }
                if w == 0.0 {
                    continue;
                }
                // tangential part only, so the surface does not shrink
                let shift = acc / w - v.pos;
                let n = normal.try_normalize(0.0).unwrap_or_else(Vec3::zeros);
                v.pos + shift - n * n.dot(&shift)
            }
            2 => {
                let (p, q) = (feature_nb[i][0], feature_nb[i][1]);
                let along_p = v.constraints.intersection(mesh.vertices[p].constraints);
                let along_q = v.constraints.intersection(mesh.vertices[q].constraints);
                if along_p.intersection(along_q).is_empty() {
                    // corner between two different feature curves
                    continue;
                }
                0.5 * (mesh.vertices[p].pos + mesh.vertices[q].pos)
            }
            _ => continue,
        };
        new_pos[i] = v.constraints.project(&target);
    }
    mesh.set_positions(&new_pos);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Constraint;

    fn planar_patch() -> SurfaceMesh {
        // a quad in the plane x3 = 0.1 split along its long diagonal
        let p = [
            Vec3::new(0.0, 0.0, 0.1),
            Vec3::new(0.2, 0.0, 0.1),
            Vec3::new(0.21, 0.02, 0.1),
            Vec3::new(0.0, 0.01, 0.1),
        ];
        let vertices = p.iter().map(|x| Vertex::free(*x)).collect();
        SurfaceMesh::new(vertices, vec![Facet::new([0, 1, 2]), Facet::new([0, 2, 3])])
    }

    #[test]
    fn refine_quadruples_and_keeps_euler() {
        let mut m = crate::mesh::tests::tetra();
        refine(&mut m);
        assert_eq!(m.facets.len(), 16);
        assert_eq!(m.euler_characteristic(), 2);
        m.validate().unwrap();
    }

    #[test]
    fn refine_midpoint_inherits_boundary_plane() {
        let g = crate::hyperbolic::cell();
        let on = |p: Vec3, cs: &[Constraint]| Vertex::new(p, cs.iter().copied().collect());
        let vertices = vec![
            on(Vec3::new(0.1, 0.0, 0.0), &[Constraint::Plane(1), Constraint::Plane(2)]),
            on(Vec3::new(0.0, 0.1, 0.0), &[Constraint::Plane(0), Constraint::Plane(2)]),
            on(Vec3::new(0.0, 0.0, 0.1), &[Constraint::Plane(0), Constraint::Plane(1)]),
        ];
        let mut m = SurfaceMesh::new(vertices, vec![Facet::new([0, 1, 2])]);
        refine(&mut m);
        for v in &m.vertices[3..] {
            assert_eq!(v.constraints.len(), 1);
            assert!(v.constraints.max_residual(&v.pos) < 1e-15);
        }
        assert!(g.eps_max > 0.1);
        m.validate().unwrap();
    }

    #[test]
    fn flip_needs_degree_above_three() {
        let mut m = planar_patch();
        // boundary edges make every edge but the diagonal a feature, and the
        // corner degrees are 2 or 3, so nothing flips
        assert_eq!(equiangulate(&mut m), 0);
    }

    #[test]
    fn equiangulate_repairs_sheared_grid() {
        // 5x5 grid sheared so the chosen diagonals are the long ones
        let n = 5;
        let mut vertices = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (i as f64 + 0.9 * j as f64, 0.3 * j as f64);
                vertices.push(Vertex::free(Vec3::new(0.02 * x, 0.02 * y, 0.2)));
            }
        }
        let id = |i: usize, j: usize| j * n + i;
        let mut facets = Vec::new();
        for j in 0..n - 1 {
            for i in 0..n - 1 {
                facets.push(Facet::new([id(i, j), id(i + 1, j), id(i + 1, j + 1)]));
                facets.push(Facet::new([id(i, j), id(i + 1, j + 1), id(i, j + 1)]));
            }
        }
        let mut m = SurfaceMesh::new(vertices, facets);
        let chi = m.euler_characteristic();
        let flips = equiangulate(&mut m);
        assert!(flips > 0);
        assert_eq!(m.euler_characteristic(), chi);
        assert!(m.edge_facets().values().all(|f| f.len() <= 2));
        assert!(m.facets.iter().all(|f| m.facet_normal(f).z > 0.0));
        assert_eq!(equiangulate(&mut m), 0);
    }

    #[test]
    fn clear_only_average_leaves_surface_vertices() {
        let mut m = crate::mesh::tests::tetra();
        let before = m.positions();
        vertex_average(&mut m, true);
        assert_eq!(before, m.positions());
        vertex_average(&mut m, false);
        assert_ne!(before, m.positions());
    }
}
