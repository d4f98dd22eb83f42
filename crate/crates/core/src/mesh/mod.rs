//! Oriented triangulated surfaces inside the eighth `ℬ`, with per-vertex
//! constraint bindings and CLEAR facets.
//!
//! A facet `[a, b, c]` has outward normal `(b − a) × (c − a)`, pointing away
//! from the enclosed region. CLEAR facets close the flux surface on face
//! spheres: they count for volume but not for area.

mod constraint;
mod degeneracy;
mod off;
mod ops;
mod reflect;
mod shapes;

use std::collections::HashMap;

pub use constraint::{Constraint, ConstraintSet, TOL_CON};
pub use degeneracy::{degeneracy_report, DegeneracyReport, DegeneracyStatus, TOL_DEG_EDGE, TOL_NECK};
pub use off::{read_off, write_off};
pub use ops::{equiangulate, refine, vertex_average, TOL_FLIP};

/// Face spheres common to all three vertices of facet `f`.
pub fn facet_spheres_of(mesh: &SurfaceMesh, f: usize) -> ConstraintSet {
    ops::facet_spheres(mesh, &mesh.facets[f])
}
pub use reflect::reflect_to_full_cell;
pub use shapes::{icosphere, icosphere_at};

use crate::error::{Error, Result};
use crate::hyperbolic::{self, metric_scale};
use crate::Vec3;

/// Facets with Euclidean area below this are degenerate.
pub const TOL_DEG: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub pos: Vec3,
    pub constraints: ConstraintSet,
}

impl Vertex {
    pub fn new(pos: Vec3, constraints: ConstraintSet) -> Self {
        Vertex { pos, constraints }
    }

    pub fn free(pos: Vec3) -> Self {
        Vertex { pos, constraints: ConstraintSet::EMPTY }
    }

    /// Three independent constraints pin a vertex.
    pub fn is_fixed(&self) -> bool {
        self.constraints.len() >= 3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facet {
    pub v: [usize; 3],
    pub clear: bool,
}

impl Facet {
    pub fn new(v: [usize; 3]) -> Self {
        Facet { v, clear: false }
    }

    pub fn clear(v: [usize; 3]) -> Self {
        Facet { v, clear: true }
    }

    pub fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.v;
        [(a, b), (b, c), (c, a)]
    }
}

/// Undirected edge key.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vertex>,
    pub facets: Vec<Facet>,
    /// Prescribed hyperbolic volume, when the mesh is being evolved.
    pub target_volume: Option<f64>,
}

impl SurfaceMesh {
    pub fn new(vertices: Vec<Vertex>, facets: Vec<Facet>) -> Self {
        SurfaceMesh { vertices, facets, target_volume: None }
    }

    pub fn with_target(mut self, volume: f64) -> Self {
        self.target_volume = Some(volume);
        self
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn area_facet_count(&self) -> usize {
        self.facets.iter().filter(|f| !f.clear).count()
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.vertices.iter().map(|v| v.pos).collect()
    }

    pub fn set_positions(&mut self, pos: &[Vec3]) {
        for (v, p) in self.vertices.iter_mut().zip(pos) {
            v.pos = *p;
        }
    }

    pub fn corners(&self, f: &Facet) -> [Vec3; 3] {
        f.v.map(|i| self.vertices[i].pos)
    }

    /// Euclidean normal `(b − a) × (c − a)` (twice the area vector).
    pub fn facet_normal(&self, f: &Facet) -> Vec3 {
        let [a, b, c] = self.corners(f);
        (b - a).cross(&(c - a))
    }

    pub fn euclidean_area(&self, f: &Facet) -> f64 {
        0.5 * self.facet_normal(f).norm()
    }

    /// Map from undirected edge to the facets containing it.
    pub fn edge_facets(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::with_capacity(self.facets.len() * 2);
        for (fi, f) in self.facets.iter().enumerate() {
            for (a, b) in f.edges() {
                map.entry(edge_key(a, b)).or_default().push(fi);
            }
        }
        map
    }

    /// Sorted list of undirected edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self.edge_facets().into_keys().collect();
        e.sort_unstable();
        e
    }

    /// Vertex neighbours, sorted.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.edges() {
            nb[a].push(b);
            nb[b].push(a);
        }
        for n in &mut nb {
            n.sort_unstable();
        }
        nb
    }

    /// Facets incident to each vertex.
    pub fn vertex_facets(&self) -> Vec<Vec<usize>> {
        let mut vf = vec![Vec::new(); self.vertices.len()];
        for (fi, f) in self.facets.iter().enumerate() {
            for &v in &f.v {
                vf[v].push(fi);
            }
        }
        vf
    }

    pub fn euler_characteristic(&self) -> i64 {
        let used = self.used_vertices();
        used.iter().filter(|u| **u).count() as i64 - self.edges().len() as i64 + self.facets.len() as i64
    }

    fn used_vertices(&self) -> Vec<bool> {
        let mut used = vec![false; self.vertices.len()];
        for f in &self.facets {
            for &v in &f.v {
                used[v] = true;
            }
        }
        used
    }

    /// Every edge belongs to exactly two facets.
    pub fn is_watertight(&self) -> bool {
        self.edge_facets().values().all(|f| f.len() == 2)
    }

    /// Riemannian length of an edge: Euclidean length scaled by the metric at
    /// the edge midpoint.
    pub fn riemannian_length(&self, a: usize, b: usize) -> f64 {
        let pa = self.vertices[a].pos;
        let pb = self.vertices[b].pos;
        let mid = 0.5 * (pa + pb);
        let scale = 2.0 / (1.0 - mid.norm_squared());
        (pa - pb).norm() * scale
    }

    /// Ratio of hyperbolic area to area-counting facet count.
    pub fn area_per_facet(&self, area: f64) -> f64 {
        area / self.area_facet_count().max(1) as f64
    }

    /// Project every vertex onto its constraints, and push vertices that
    /// crossed a wall of `ℬ` they are not bound to back onto that wall.
    pub fn project_constraints(&mut self) {
        for v in &mut self.vertices {
            if !v.constraints.is_empty() {
                v.pos = v.constraints.project(&v.pos);
            }
            for _ in 0..3 {
                let mut walls = v.constraints;
                for c in Constraint::ALL {
                    if !v.constraints.contains(c) && crossed(c, &v.pos) {
                        walls.insert(c);
                    }
                }
                if walls == v.constraints {
                    break;
                }
                v.pos = walls.project(&v.pos);
            }
        }
    }

    /// Largest constraint residual over all vertices.
    pub fn max_constraint_residual(&self) -> f64 {
        self.vertices.iter().map(|v| v.constraints.max_residual(&v.pos)).fold(0.0, f64::max)
    }

    /// Reverse every facet.
    pub fn flip_orientation(&mut self) {
        for f in &mut self.facets {
            f.v.swap(1, 2);
        }
    }

    /// Drop vertices not referenced by any facet.
    pub fn compact(&mut self) {
        let used = self.used_vertices();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut kept = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(v.clone());
            }
        }
        self.vertices = kept;
        for f in &mut self.facets {
            f.v = f.v.map(|i| remap[i]);
        }
    }

    /// Orient every connected component consistently by propagation.
    /// Returns an error when a component is non-orientable or an edge has
    /// more than two facets.
    pub fn orient_consistently(&mut self) -> Result<()> {
        let ef = self.edge_facets();
        if let Some((e, _)) = ef.iter().find(|(_, f)| f.len() > 2) {
            return Err(Error::InvalidMesh(format!("edge {e:?} has more than two facets")));
        }
        let n = self.facets.len();
        let mut state: Vec<Option<bool>> = vec![None; n];
        for seed in 0..n {
            if state[seed].is_some() {
                continue;
            }
            state[seed] = Some(false);
            let mut stack = vec![seed];
            while let Some(fi) = stack.pop() {
                let flipped = state[fi].expect("visited");
                let mut f = self.facets[fi];
                if flipped {
                    f.v.swap(1, 2);
                }
                for (a, b) in f.edges() {
                    for &g in &ef[&edge_key(a, b)] {
                        if g == fi {
                            continue;
                        }
                        // neighbour must traverse the edge as b → a
                        let gf = self.facets[g];
                        let same_dir = gf.edges().contains(&(a, b));
                        let want = same_dir;
                        match state[g] {
                            None => {
                                state[g] = Some(want);
                                stack.push(g);
                            }
                            Some(s) if s != want => {
                                return Err(Error::InvalidMesh("non-orientable surface".into()));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        for (fi, s) in state.into_iter().enumerate() {
            if s == Some(true) {
                self.facets[fi].v.swap(1, 2);
            }
        }
        Ok(())
    }

    /// Structural and geometric validation.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (fi, f) in self.facets.iter().enumerate() {
            if f.v.iter().any(|&i| i >= nv) {
                return Err(Error::InvalidMesh(format!("facet {fi} references a missing vertex")));
            }
            if f.v[0] == f.v[1] || f.v[1] == f.v[2] || f.v[0] == f.v[2] {
                return Err(Error::InvalidMesh(format!("facet {fi} repeats a vertex")));
            }
            if self.euclidean_area(f) < TOL_DEG {
                return Err(Error::DegenerateFacet(fi));
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            hyperbolic::check_inside(&v.pos)?;
            let res = v.constraints.max_residual(&v.pos);
            if res > 1e3 * TOL_CON {
                return Err(Error::InvalidMesh(format!("vertex {i} violates its constraints by {res:e}")));
            }
        }
        let ef = self.edge_facets();
        for (&(a, b), fs) in &ef {
            match fs.len() {
                1 => {
                    let common = self.vertices[a].constraints.intersection(self.vertices[b].constraints);
                    if !common.has_plane() {
                        return Err(Error::InvalidMesh(format!("boundary edge ({a}, {b}) is not on a mirror plane")));
                    }
                }
                2 => {
                    let [f, g] = [self.facets[fs[0]], self.facets[fs[1]]];
                    let fd = f.edges().contains(&(a, b));
                    let gd = g.edges().contains(&(a, b));
                    if fd == gd {
                        return Err(Error::InvalidMesh(format!("inconsistent orientation across edge ({a}, {b})")));
                    }
                }
                _ => return Err(Error::InvalidMesh(format!("edge ({a}, {b}) has {} facets", fs.len()))),
            }
        }
        Ok(())
    }

    /// Smallest Riemannian edge length.
    pub fn min_edge_length(&self) -> f64 {
        self.edges().into_iter().map(|(a, b)| self.riemannian_length(a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Metric scale at a vertex (the vertex must be inside the ball).
    pub fn metric_at(&self, i: usize) -> Result<f64> {
        metric_scale(&self.vertices[i].pos)
    }
}

/// Whether `x` lies on the far side of a wall of `ℬ`.
fn crossed(c: Constraint, x: &Vec3) -> bool {
    match c {
        Constraint::Plane(_) => c.residual(x) < 0.0,
        // only the part of the face sphere that bounds the eighth counts
        Constraint::FaceSphere(i) => c.residual(x) < 0.0 && x[i] > 0.0 && x[i] < hyperbolic::cell().c,
    }
}

/// Largest edge-length over inradius-style aspect ratio of a triangle:
/// longest edge divided by the altitude onto it.
pub fn aspect_ratio(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let e = [(b - a).norm(), (c - b).norm(), (a - c).norm()];
    let longest = e.iter().copied().fold(0.0, f64::max);
    let twice_area = (b - a).cross(&(c - a)).norm();
    if twice_area == 0.0 {
        return f64::INFINITY;
    }
    longest * longest / twice_area
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tetra() -> SurfaceMesh {
        let p = [
            Vec3::new(0.1, 0.1, 0.1),
            Vec3::new(-0.1, -0.1, 0.1),
            Vec3::new(-0.1, 0.1, -0.1),
            Vec3::new(0.1, -0.1, -0.1),
        ];
        let vertices = p.iter().map(|x| Vertex::free(*x)).collect();
        let facets = vec![Facet::new([0, 1, 2]), Facet::new([0, 3, 1]), Facet::new([0, 2, 3]), Facet::new([1, 3, 2])];
        SurfaceMesh::new(vertices, facets)
    }

    #[test]
    fn tetrahedron_is_closed_and_valid() {
        let m = tetra();
        m.validate().unwrap();
        assert!(m.is_watertight());
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn orientation_repair() {
        let mut m = tetra();
        m.facets[2].v.swap(0, 1);
        assert!(m.validate().is_err());
        m.orient_consistently().unwrap();
        m.validate().unwrap();
    }

    #[test]
    fn boundary_edge_off_constraint_is_rejected() {
        let vertices = vec![
            Vertex::free(Vec3::new(0.1, 0.0, 0.0)),
            Vertex::free(Vec3::new(0.0, 0.1, 0.0)),
            Vertex::free(Vec3::new(0.0, 0.0, 0.1)),
        ];
        let m = SurfaceMesh::new(vertices, vec![Facet::new([0, 1, 2])]);
        assert!(matches!(m.validate(), Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn degenerate_facet_detected() {
        let vertices = vec![
            Vertex::free(Vec3::new(0.1, 0.0, 0.0)),
            Vertex::free(Vec3::new(0.2, 0.0, 0.0)),
            Vertex::free(Vec3::new(0.3, 0.0, 0.0)),
        ];
        let m = SurfaceMesh::new(vertices, vec![Facet::new([0, 1, 2])]);
        assert!(matches!(m.validate(), Err(Error::DegenerateFacet(0))));
    }
}
