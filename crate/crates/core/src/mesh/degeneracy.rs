use super::{aspect_ratio, SurfaceMesh};

/// Riemannian edge length below which the mesh counts as collapsed.
pub const TOL_DEG_EDGE: f64 = 1e-6;
/// Riemannian perimeter of a vertex link below which a neck has pinched.
pub const TOL_NECK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegeneracyStatus {
    Ok,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    pub status: DegeneracyStatus,
    pub min_edge: f64,
    pub min_link: f64,
    pub max_aspect: f64,
}

impl DegeneracyReport {
    pub fn is_degenerate(&self) -> bool {
        self.status == DegeneracyStatus::Degenerate
    }
}

/// Scan surface facets for collapsing edges and pinching vertex stars.
pub fn degeneracy_report(mesh: &SurfaceMesh) -> DegeneracyReport {
    let mut min_edge = f64::INFINITY;
    let mut link = vec![0.0; mesh.vertices.len()];
    let mut touched = vec![false; mesh.vertices.len()];
    let mut max_aspect: f64 = 0.0;
    for f in mesh.facets.iter().filter(|f| !f.clear) {
        let [a, b, c] = f.v;
        for (x, y, opp) in [(a, b, c), (b, c, a), (c, a, b)] {
            let l = mesh.riemannian_length(x, y);
            min_edge = min_edge.min(l);
            link[opp] += l;
            touched[opp] = true;
        }
        let [p, q, r] = mesh.corners(f);
        max_aspect = max_aspect.max(aspect_ratio(&p, &q, &r));
    }
    let min_link = link
        .iter()
        .zip(&touched)
        .filter(|(_, t)| **t)
        .map(|(l, _)| *l)
        .fold(f64::INFINITY, f64::min);
    let status = if min_edge < TOL_DEG_EDGE || min_link < TOL_NECK {
        DegeneracyStatus::Degenerate
    } else {
        DegeneracyStatus::Ok
    };
    DegeneracyReport { status, min_edge, min_link, max_aspect }
}
