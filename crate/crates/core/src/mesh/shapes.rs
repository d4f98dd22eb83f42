use std::collections::HashMap;

use super::{Facet, SurfaceMesh, Vertex};
use crate::error::{Error, Result};
use crate::Vec3;

/// Closed origin-centred sphere of Euclidean radius `radius`, from an
/// icosahedron subdivided `level` times (`20 · 4^level` facets).
pub fn icosphere(radius: f64, level: usize) -> Result<SurfaceMesh> {
    icosphere_at(Vec3::zeros(), radius, level)
}

/// [`icosphere`] centred at `center`, outward oriented, without constraints.
pub fn icosphere_at(center: Vec3, radius: f64, level: usize) -> Result<SurfaceMesh> {
    if !(radius > 0.0) || center.norm() + radius >= 1.0 {
        return Err(Error::Domain(format!("sphere of radius {radius} at {center:?} leaves the ball")));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<Vec3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vec3::new(p[0], p[1], p[2]).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut split = |a: usize, b: usize, pts: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                pts.push(((pts[a] + pts[b]) / 2.0).normalize());
                pts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = split(a, b, &mut pts);
            let bc = split(b, c, &mut pts);
            let ca = split(c, a, &mut pts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    let vertices = pts.into_iter().map(|p| Vertex::free(center + p * radius)).collect();
    Ok(SurfaceMesh::new(vertices, tris.into_iter().map(Facet::new).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_outward_sphere() {
        let m = icosphere(0.3, 2).unwrap();
        assert_eq!(m.facets.len(), 320);
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.is_watertight());
        m.validate().unwrap();
        let c = m.corners(&m.facets[0]);
        let n = m.facet_normal(&m.facets[0]);
        assert!(n.dot(&((c[0] + c[1] + c[2]) / 3.0)) > 0.0);
    }
}
