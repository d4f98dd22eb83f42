//! Hyperbolic area and enclosed volume of a triangulated surface, with exact
//! gradients of their discretisations.
//!
//! Volume is the flux of a field `q` with `div q = 8 / (1 − |x|²)³` through
//! the surface. `q` is odd in each coordinate, so its flux through the
//! mirror planes vanishes and those facets never need to be stored.

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::mesh::{Facet, SurfaceMesh};
use crate::Vec3;

/// Meshes below this many facets are evaluated on one thread.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Edge midpoints, exact for quadratics.
    #[default]
    Midpoint3,
    /// Six-point rule exact for quartics.
    Degree4,
}

const MIDPOINT3: [([f64; 3], f64); 3] = [
    ([0.5, 0.5, 0.0], 1.0 / 3.0),
    ([0.0, 0.5, 0.5], 1.0 / 3.0),
    ([0.5, 0.0, 0.5], 1.0 / 3.0),
];

const D4_A: f64 = 0.445_948_490_915_965;
const D4_B: f64 = 0.091_576_213_509_771;
const D4_WA: f64 = 0.223_381_589_678_011;
const D4_WB: f64 = 0.109_951_743_655_322;

const DEGREE4: [([f64; 3], f64); 6] = [
    ([1.0 - 2.0 * D4_A, D4_A, D4_A], D4_WA),
    ([D4_A, 1.0 - 2.0 * D4_A, D4_A], D4_WA),
    ([D4_A, D4_A, 1.0 - 2.0 * D4_A], D4_WA),
    ([1.0 - 2.0 * D4_B, D4_B, D4_B], D4_WB),
    ([D4_B, 1.0 - 2.0 * D4_B, D4_B], D4_WB),
    ([D4_B, D4_B, 1.0 - 2.0 * D4_B], D4_WB),
];

impl QuadratureRule {
    /// Barycentric nodes and weights; the weights sum to one.
    pub fn nodes(self) -> &'static [([f64; 3], f64)] {
        match self {
            QuadratureRule::Midpoint3 => &MIDPOINT3,
            QuadratureRule::Degree4 => &DEGREE4,
        }
    }

    pub fn parse(s: &str) -> Option<QuadratureRule> {
        match s {
            "midpoint3" | "3" => Some(QuadratureRule::Midpoint3),
            "degree4" | "6" => Some(QuadratureRule::Degree4),
            _ => None,
        }
    }
}

/// Area density `4 / (1 − |x|²)²` of the ball metric.
pub fn area_density(x: &Vec3) -> f64 {
    let d = 1.0 - x.norm_squared();
    4.0 / (d * d)
}

pub fn area_density_gradient(x: &Vec3) -> Vec3 {
    let d = 1.0 - x.norm_squared();
    x * (16.0 / (d * d * d))
}

/// Volume density `8 / (1 − |x|²)³`.
pub fn volume_density(x: &Vec3) -> f64 {
    let d = 1.0 - x.norm_squared();
    8.0 / (d * d * d)
}

/// Antiderivative in `t` of `8 / (u − t²)³`, vanishing at `t = 0`.
fn antiderivative(t: f64, u: f64) -> f64 {
    let d = u - t * t;
    let su = u.sqrt();
    2.0 * t / (d * d * u) + 3.0 * t / (d * u * u) + 3.0 * (t / su).atanh() / (u * u * su)
}

/// `∂/∂u` of [`antiderivative`] at fixed `t`.
fn antiderivative_du(t: f64, u: f64) -> f64 {
    let d = u - t * t;
    let su = u.sqrt();
    let l = (t / su).atanh();
    2.0 * t * (-2.0 / (d * d * d * u) - 1.0 / (d * d * u * u))
        + 3.0 * t * (-1.0 / (d * d * u * u) - 2.0 / (d * u * u * u))
        - 7.5 * l / (u * u * u * su)
        - 1.5 * t / (u * u * u * d)
}

/// The flux field. Component `i` integrates the volume density along `x_i`
/// from the plane `x_i = 0`, divided by three.
pub fn flux_field(x: &Vec3) -> Vec3 {
    let r2 = x.norm_squared();
    Vec3::from_fn(|i, _| {
        let t = x[i];
        antiderivative(t, 1.0 - r2 + t * t) / 3.0
    })
}

/// Jacobian `J[(i, l)] = ∂q_i / ∂x_l`.
pub fn flux_jacobian(x: &Vec3) -> Matrix3<f64> {
    let r2 = x.norm_squared();
    let diag = volume_density(x) / 3.0;
    let mut j = Matrix3::zeros();
    for i in 0..3 {
        let t = x[i];
        let du = antiderivative_du(t, 1.0 - r2 + t * t) / 3.0;
        for l in 0..3 {
            j[(i, l)] = if l == i { diag } else { -2.0 * x[l] * du };
        }
    }
    j
}

fn node_point(p: &[Vec3; 3], lambda: &[f64; 3]) -> Vec3 {
    p[0] * lambda[0] + p[1] * lambda[1] + p[2] * lambda[2]
}

/// Hyperbolic area of one facet.
pub fn facet_area(p: &[Vec3; 3], rule: QuadratureRule) -> f64 {
    let n = (p[1] - p[0]).cross(&(p[2] - p[0])).norm();
    let s: f64 = rule.nodes().iter().map(|(l, w)| w * area_density(&node_point(p, l))).sum();
    0.5 * n * s
}

/// Flux of the volume field through one facet.
pub fn facet_flux(p: &[Vec3; 3], rule: QuadratureRule) -> f64 {
    let n = (p[1] - p[0]).cross(&(p[2] - p[0]));
    let q: Vec3 = rule.nodes().iter().map(|(l, w)| flux_field(&node_point(p, l)) * *w).sum();
    0.5 * n.dot(&q)
}

fn facet_area_grad(p: &[Vec3; 3], rule: QuadratureRule) -> [Vec3; 3] {
    let nv = (p[1] - p[0]).cross(&(p[2] - p[0]));
    let len = nv.norm();
    let nh = nv / len;
    let mut s = 0.0;
    let mut ds = [Vec3::zeros(); 3];
    for (l, w) in rule.nodes() {
        let x = node_point(p, l);
        s += w * area_density(&x);
        let g = area_density_gradient(&x) * *w;
        for i in 0..3 {
            ds[i] += g * l[i];
        }
    }
    let dlen = [(p[1] - p[2]).cross(&nh), (p[2] - p[0]).cross(&nh), (p[0] - p[1]).cross(&nh)];
    [0, 1, 2].map(|i| 0.5 * (dlen[i] * s + ds[i] * len))
}

fn facet_flux_grad(p: &[Vec3; 3], rule: QuadratureRule) -> [Vec3; 3] {
    let nv = (p[1] - p[0]).cross(&(p[2] - p[0]));
    let mut q = Vec3::zeros();
    let mut dq = [Vec3::zeros(); 3];
    for (l, w) in rule.nodes() {
        let x = node_point(p, l);
        q += flux_field(&x) * *w;
        let jt_n = flux_jacobian(&x).transpose() * nv * *w;
        for i in 0..3 {
            dq[i] += jt_n * l[i];
        }
    }
    let dn = [(p[1] - p[2]).cross(&q), (p[2] - p[0]).cross(&q), (p[0] - p[1]).cross(&q)];
    [0, 1, 2].map(|i| 0.5 * (dn[i] + dq[i]))
}

fn per_facet<T, F>(mesh: &SurfaceMesh, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Facet) -> T + Sync + Send,
{
    if mesh.facets.len() >= PAR_THRESHOLD {
        mesh.facets.par_iter().map(f).collect()
    } else {
        mesh.facets.iter().map(f).collect()
    }
}

/// Area of the non-CLEAR facets. Summation runs in facet order, so results
/// do not depend on thread count.
pub fn area(mesh: &SurfaceMesh, rule: QuadratureRule) -> f64 {
    per_facet(mesh, |f| if f.clear { 0.0 } else { facet_area(&mesh.corners(f), rule) }).into_iter().sum()
}

/// Enclosed volume: flux through every facet, CLEAR ones included.
pub fn volume(mesh: &SurfaceMesh, rule: QuadratureRule) -> f64 {
    per_facet(mesh, |f| facet_flux(&mesh.corners(f), rule)).into_iter().sum()
}

fn scatter(mesh: &SurfaceMesh, parts: Vec<Option<[Vec3; 3]>>) -> Vec<Vec3> {
    let mut g = vec![Vec3::zeros(); mesh.vertices.len()];
    for (f, part) in mesh.facets.iter().zip(parts) {
        if let Some(part) = part {
            for k in 0..3 {
                g[f.v[k]] += part[k];
            }
        }
    }
    g
}

/// Gradient of [`area`] with respect to every vertex position.
pub fn area_gradient(mesh: &SurfaceMesh, rule: QuadratureRule) -> Vec<Vec3> {
    let parts = per_facet(mesh, |f| (!f.clear).then(|| facet_area_grad(&mesh.corners(f), rule)));
    scatter(mesh, parts)
}

/// Gradient of [`volume`] with respect to every vertex position.
pub fn volume_gradient(mesh: &SurfaceMesh, rule: QuadratureRule) -> Vec<Vec3> {
    let parts = per_facet(mesh, |f| Some(facet_flux_grad(&mesh.corners(f), rule)));
    scatter(mesh, parts)
}
