use std::collections::HashMap;

use super::{ConstraintSet, Facet, SurfaceMesh, Vertex};
use crate::Vec3;

fn key(p: &Vec3) -> [u64; 3] {
    // +0.0 and -0.0 must merge
    [p.x, p.y, p.z].map(|c| if c == 0.0 { 0u64 } else { c.to_bits() })
}

/// Unfold a surface in the eighth into the full cell by the eight
/// coordinate-sign images. Vertices that coincide exactly are merged;
/// facets of odd images are reversed so the result stays outward-oriented.
/// Constraint bindings are dropped.
pub fn reflect_to_full_cell(mesh: &SurfaceMesh) -> SurfaceMesh {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut index: HashMap<[u64; 3], usize> = HashMap::new();
    let mut facets = Vec::with_capacity(mesh.facets.len() * 8);
    for image in 0..8u32 {
        let s = Vec3::new(
            if image & 1 != 0 { -1.0 } else { 1.0 },
            if image & 2 != 0 { -1.0 } else { 1.0 },
            if image & 4 != 0 { -1.0 } else { 1.0 },
        );
        let odd = image.count_ones() % 2 == 1;
        let map: Vec<usize> = mesh
            .vertices
            .iter()
            .map(|v| {
                let p = v.pos.component_mul(&s);
                *index.entry(key(&p)).or_insert_with(|| {
                    vertices.push(Vertex::new(p, ConstraintSet::EMPTY));
                    vertices.len() - 1
                })
            })
            .collect();
        for f in &mesh.facets {
            let mut v = f.v.map(|i| map[i]);
            if odd {
                v.swap(1, 2);
            }
            facets.push(Facet { v, clear: f.clear });
        }
    }
    let mut out = SurfaceMesh::new(vertices, facets);
    out.target_volume = mesh.target_volume.map(|t| 8.0 * t);
    out.compact();
    out
}
