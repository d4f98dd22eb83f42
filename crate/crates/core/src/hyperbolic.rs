//! Exact geometry of the Poincaré ball: conformal metric, the cubic cell
//! with dihedral angle 2π/5, its isometries and closed-form reference
//! surfaces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::Vec3;

/// Points with `‖p‖ ≥ 1 − BALL_GUARD` are rejected.
pub const BALL_GUARD: f64 = 1e-9;

/// A point of the open unit ball in Euclidean chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(Vec3);

impl Point {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        Self::from_vec(Vec3::new(x1, x2, x3))
    }

    pub fn from_vec(v: Vec3) -> Result<Self> {
        check_inside(&v)?;
        Ok(Point(v))
    }

    pub fn coords(&self) -> Vec3 {
        self.0
    }
}

pub(crate) fn check_inside(v: &Vec3) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) && v.norm() < 1.0 - BALL_GUARD {
        Ok(())
    } else {
        Err(Error::OutsideBall([v.x, v.y, v.z]))
    }
}

/// Length scale `2 / (1 − ‖p‖²)` of the conformal metric.
pub fn metric_scale(p: &Vec3) -> Result<f64> {
    check_inside(p)?;
    Ok(2.0 / (1.0 - p.norm_squared()))
}

/// Hyperbolic distance between two points of the ball.
pub fn distance(p: &Vec3, q: &Vec3) -> f64 {
    let num = 2.0 * (p - q).norm_squared();
    let den = (1.0 - p.norm_squared()) * (1.0 - q.norm_squared());
    (1.0 + num / den).acosh()
}

fn check_radius(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("sphere radius {eps} not in (0, 1)")))
    }
}

/// Hyperbolic area of the origin-centred sphere of Euclidean radius `eps`.
pub fn sphere_area_exact(eps: f64) -> Result<f64> {
    check_radius(eps)?;
    let d = 1.0 - eps * eps;
    Ok(16.0 * PI * eps * eps / (d * d))
}

/// Hyperbolic volume enclosed by the origin-centred sphere of Euclidean
/// radius `eps`.
pub fn sphere_volume_exact(eps: f64) -> Result<f64> {
    check_radius(eps)?;
    let d = 1.0 - eps * eps;
    // ln((1-ε)/(1+ε)) = -2 artanh ε
    Ok(2.0 * PI * (2.0 * eps * (1.0 + eps * eps) / (d * d) - 2.0 * eps.atanh()))
}

/// Inverse of [`sphere_volume_exact`] by bisection.
pub fn sphere_radius_for_volume(volume: f64) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::Domain(format!("volume {volume} must be positive")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sphere_volume_exact(mid)? < volume {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Constants of the cube `𝒞` and its positive-octant eighth `ℬ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry {
    /// Distance of each face-sphere centre from the origin.
    pub c: f64,
    /// Euclidean radius of the face spheres.
    pub r: f64,
    /// Coordinate of the square corner `(𝔠, 𝔠, 0)`.
    pub corner: f64,
    /// Largest admissible origin-centred sphere radius, `c − r`.
    pub eps_max: f64,
    /// Coordinate of the cube vertex `(w, w, w)`.
    pub vertex: f64,
}

impl CellGeometry {
    pub fn face_center(&self, axis: usize, sign: f64) -> Vec3 {
        let mut v = Vec3::zeros();
        v[axis] = sign * self.c;
        v
    }

    /// Upper bound of coordinate `axis` imposed by face sphere `axis` at the
    /// given values of the other two coordinates.
    pub fn face_bound(&self, axis: usize, x: &Vec3) -> f64 {
        let (j, k) = others(axis);
        let s = self.r * self.r - x[j] * x[j] - x[k] * x[k];
        self.c - s.max(0.0).sqrt()
    }

    /// Whether `x` lies in the closed eighth `ℬ` up to `tol`.
    pub fn contains_eighth(&self, x: &Vec3, tol: f64) -> bool {
        (0..3).all(|i| x[i] >= -tol && (x - self.face_center(i, 1.0)).norm() >= self.r - tol)
    }

    /// Chart of the eighth by the unit cube: `u_i = 0` maps to the mirror
    /// plane `x_i = 0` and `u_i = 1` to face sphere `i`.
    ///
    /// Solves `x_i = u_i (c − √(r² − x_j² − x_k²))` by fixed-point iteration.
    /// Negative `u_i` give the mirror images, so `[−1, 1]³` covers `𝒞`.
    pub fn chart_point(&self, u: [f64; 3]) -> Vec3 {
        let mut x = Vec3::new(u[0], u[1], u[2]) * self.eps_max;
        for _ in 0..200 {
            let mut next = Vec3::zeros();
            for i in 0..3 {
                let (j, k) = others(i);
                let g = self.c - (self.r * self.r - x[j] * x[j] - x[k] * x[k]).sqrt();
                next[i] = u[i] * g;
            }
            let change = (next - x).amax();
            x = next;
            if change < 1e-17 {
                break;
            }
        }
        x
    }

    /// Determinant of the chart Jacobian `∂x/∂u` at `u`.
    pub fn chart_jacobian_det(&self, u: [f64; 3]) -> f64 {
        let x = self.chart_point(u);
        let mut g = [0.0; 3];
        let mut m = nalgebra::Matrix3::<f64>::identity();
        for i in 0..3 {
            let (j, k) = others(i);
            let s = (self.r * self.r - x[j] * x[j] - x[k] * x[k]).sqrt();
            g[i] = self.c - s;
            m[(i, j)] = -u[i] * x[j] / s;
            m[(i, k)] = -u[i] * x[k] / s;
        }
        g[0] * g[1] * g[2] / m.determinant()
    }
}

/// The two coordinate indices other than `axis`, in cyclic order.
pub fn others(axis: usize) -> (usize, usize) {
    ((axis + 1) % 3, (axis + 2) % 3)
}

/// Constants of the unique non-ideal cubic tesselation, from their radical
/// expressions.
pub fn cell_geometry() -> CellGeometry {
    cell().clone()
}

/// Shared instance of [`cell_geometry`].
pub fn cell() -> &'static CellGeometry {
    static CELL: std::sync::OnceLock<CellGeometry> = std::sync::OnceLock::new();
    CELL.get_or_init(compute_cell)
}

fn compute_cell() -> CellGeometry {
    let s5 = 5f64.sqrt();
    let c = (s5 + 2.0).sqrt();
    let r = (s5 + 1.0).sqrt();
    let corner = ((s5 + 2.0).sqrt() - 5f64.powf(0.25)) / 2.0;
    let vertex = (c - (c * c - 3.0).sqrt()) / 3.0;
    CellGeometry { c, r, corner, eps_max: c - r, vertex }
}

/// Interior dihedral angle between two adjacent faces of the cube whose face
/// spheres have Euclidean radius `r_face` (and centre distance
/// `√(1 + r_face²)` so they are orthogonal to the unit sphere).
pub fn dihedral_angle(r_face: f64) -> Result<f64> {
    if !(r_face > std::f64::consts::SQRT_2) || !r_face.is_finite() {
        return Err(Error::Domain(format!("face radius {r_face} must exceed √2")));
    }
    Ok(PI - (-1.0 / (r_face * r_face)).acos())
}

/// Face-sphere radius whose cube has the given dihedral angle.
pub fn solve_cube_radius(target_angle: f64) -> Result<f64> {
    if !(target_angle > FRAC_PI_3 && target_angle < FRAC_PI_2) {
        return Err(Error::Domain(format!("target angle {target_angle} not in (π/3, π/2)")));
    }
    let (mut lo, mut hi) = (std::f64::consts::SQRT_2 + 1e-6, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        // the angle increases with the face radius
        if dihedral_angle(mid)? < target_angle {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Isometries of the ball generated by coordinate mirrors and inversions in
/// spheres orthogonal to the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum Isometry {
    /// Reflection `x_axis ↦ −x_axis`.
    Mirror(usize),
    /// Inversion `q ↦ ρ²(q − z)/‖q − z‖² + z`.
    Inversion { center: Vec3, radius: f64 },
    /// Maps applied in sequence, first element first.
    Composition(Vec<Isometry>),
}

impl Isometry {
    pub fn apply(&self, p: &Vec3) -> Result<Vec3> {
        match self {
            Isometry::Mirror(axis) => {
                let mut q = *p;
                q[*axis] = -q[*axis];
                Ok(q)
            }
            Isometry::Inversion { center, radius } => {
                let d = p - center;
                let n2 = d.norm_squared();
                if n2 < 1e-300 {
                    return Err(Error::Domain("point coincides with the inversion centre".into()));
                }
                Ok(d * (radius * radius / n2) + center)
            }
            Isometry::Composition(parts) => parts.iter().try_fold(*p, |q, g| g.apply(&q)),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Composition(parts) => Isometry::Composition(parts.iter().rev().map(Isometry::inverse).collect()),
            g => g.clone(),
        }
    }

    /// Whether the map reverses orientation (odd number of reflections).
    pub fn reverses_orientation(&self) -> bool {
        match self {
            Isometry::Composition(parts) => parts.iter().filter(|g| g.reverses_orientation()).count() % 2 == 1,
            _ => true,
        }
    }
}

/// Inversion in face sphere `axis` (the face reflection `σ`).
pub fn face_inversion(axis: usize) -> Result<Isometry> {
    if axis > 2 {
        return Err(Error::Domain(format!("axis {axis} not in 0..3")));
    }
    let g = cell_geometry();
    Ok(Isometry::Inversion { center: g.face_center(axis, 1.0), radius: g.r })
}

/// Lattice translation `T = τ ∘ σ`: face inversion followed by the mirror in
/// the coordinate plane perpendicular to `axis`.
pub fn lattice_translation(axis: usize) -> Result<Isometry> {
    Ok(Isometry::Composition(vec![face_inversion(axis)?, Isometry::Mirror(axis)]))
}

/// Reflection in the geodesic plane halfway between the mirror plane
/// `x_axis = 0` and face sphere `axis`; it swaps the two.
pub fn midplane_inversion(axis: usize) -> Result<Isometry> {
    if axis > 2 {
        return Err(Error::Domain(format!("axis {axis} not in 0..3")));
    }
    let g = cell_geometry();
    let mut center = Vec3::zeros();
    center[axis] = g.c + g.r;
    Ok(Isometry::Inversion { center, radius: (2.0 * g.r * (g.c + g.r)).sqrt() })
}

/// Closed-form reference surfaces inside the eighth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactFamily {
    /// Origin-centred sphere of Euclidean radius `ε`.
    Sphere(f64),
    /// Surface of revolution about `Ox₃` of the hypercircle through `(ε, 0, 0)`.
    VerticalUnduloid(f64),
    /// Equidistant surface to `x₃ = 0` through `(0, 0, ε)`.
    Hypersphere(f64),
}

/// Offset `(1/ε − ε)/2` and radius `(1/ε + ε)/2` of the hypercircle through ε.
pub fn hypercircle(eps: f64) -> (f64, f64) {
    ((1.0 / eps - eps) / 2.0, (1.0 / eps + eps) / 2.0)
}

impl ExactFamily {
    pub fn eps(&self) -> f64 {
        match *self {
            ExactFamily::Sphere(e) | ExactFamily::VerticalUnduloid(e) | ExactFamily::Hypersphere(e) => e,
        }
    }

    /// Point of the surface at chart parameters `(s, t)`:
    /// sphere `(polar, azimuth)`, unduloid `(x₃, azimuth)`,
    /// hypersphere `(x₁, x₂)`.
    pub fn point(&self, s: f64, t: f64) -> Result<Vec3> {
        let g = cell_geometry();
        let eps = self.eps();
        let in_quarter = |a: f64| (0.0..=FRAC_PI_2).contains(&a);
        let p = match *self {
            ExactFamily::Sphere(e) => {
                if !(e > 0.0 && e < g.eps_max) || !in_quarter(s) || !in_quarter(t) {
                    return Err(Error::Domain(format!("sphere parameters ({e}, {s}, {t})")));
                }
                Vec3::new(s.sin() * t.cos(), s.sin() * t.sin(), s.cos()) * e
            }
            ExactFamily::VerticalUnduloid(e) => {
                if !(e > 0.0 && e < g.eps_max) || !in_quarter(t) || s < 0.0 {
                    return Err(Error::Domain(format!("unduloid parameters ({e}, {s}, {t})")));
                }
                let (d, rad) = hypercircle(e);
                let rho = (rad * rad - s * s).sqrt() - d;
                if !(rho >= 0.0) || s >= g.c - (g.r * g.r - rho * rho).sqrt() {
                    return Err(Error::Domain(format!("height {s} beyond the top face")));
                }
                Vec3::new(rho * t.cos(), rho * t.sin(), s)
            }
            ExactFamily::Hypersphere(e) => {
                if !(e > 0.0 && e < 1.0) || s < 0.0 || t < 0.0 {
                    return Err(Error::Domain(format!("hypersphere parameters ({e}, {s}, {t})")));
                }
                let (d, rad) = hypercircle(e);
                let h = (rad * rad - s * s - t * t).sqrt() - d;
                let p = Vec3::new(s, t, h);
                if !(h >= 0.0) || !g.contains_eighth(&p, 1e-12) {
                    return Err(Error::Domain(format!("({s}, {t}) outside the quarter square")));
                }
                p
            }
        };
        debug_assert!(eps > 0.0);
        check_inside(&p)?;
        Ok(p)
    }

    /// Signed deviation of `p` from the surface, measured as Euclidean
    /// distance to the generating sphere, circle of revolution or plane.
    pub fn deviation(&self, p: &Vec3) -> f64 {
        match *self {
            ExactFamily::Sphere(e) => p.norm() - e,
            ExactFamily::VerticalUnduloid(e) => {
                let (d, rad) = hypercircle(e);
                let rho = (p.x * p.x + p.y * p.y).sqrt();
                ((rho + d).powi(2) + p.z * p.z).sqrt() - rad
            }
            ExactFamily::Hypersphere(e) => {
                let (d, rad) = hypercircle(e);
                (p.x * p.x + p.y * p.y + (p.z + d).powi(2)).sqrt() - rad
            }
        }
    }

    /// Hyperbolic area of the part of the surface inside `ℬ`.
    pub fn area_in_eighth(&self) -> Result<f64> {
        let g = cell_geometry();
        match *self {
            ExactFamily::Sphere(e) => Ok(sphere_area_exact(e)? / 8.0),
            ExactFamily::VerticalUnduloid(e) => {
                let rho = 2.0 * e.atanh();
                let len = 2.0 * g.eps_max.atanh();
                Ok(FRAC_PI_2 * rho.sinh() * rho.cosh() * len)
            }
            ExactFamily::Hypersphere(e) => {
                let t = 2.0 * e.atanh();
                Ok(quarter_square_area()? * t.cosh().powi(2))
            }
        }
    }

    /// Hyperbolic volume of the region of `ℬ` bounded by the surface and
    /// containing the origin.
    pub fn volume_in_eighth(&self) -> Result<f64> {
        let g = cell_geometry();
        match *self {
            ExactFamily::Sphere(e) => Ok(sphere_volume_exact(e)? / 8.0),
            ExactFamily::VerticalUnduloid(e) => {
                let rho = 2.0 * e.atanh();
                let len = 2.0 * g.eps_max.atanh();
                Ok(FRAC_PI_4 * rho.sinh().powi(2) * len)
            }
            ExactFamily::Hypersphere(e) => {
                let t = 2.0 * e.atanh();
                Ok(quarter_square_area()? * (t / 2.0 + (2.0 * t).sinh() / 4.0))
            }
        }
    }

    /// Member of the same family enclosing `volume` inside `ℬ`.
    pub fn with_volume(&self, volume: f64) -> Result<ExactFamily> {
        let make = |e: f64| match self {
            ExactFamily::Sphere(_) => ExactFamily::Sphere(e),
            ExactFamily::VerticalUnduloid(_) => ExactFamily::VerticalUnduloid(e),
            ExactFamily::Hypersphere(_) => ExactFamily::Hypersphere(e),
        };
        let hi = cell_geometry().eps_max;
        let v_hi = make(hi * (1.0 - 1e-12)).volume_in_eighth()?;
        if !(volume > 0.0 && volume < v_hi) {
            return Err(Error::Domain(format!("volume {volume} outside (0, {v_hi})")));
        }
        let (mut lo, mut up) = (0.0, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + up);
            if make(mid).volume_in_eighth()? < volume {
                lo = mid;
            } else {
                up = mid;
            }
        }
        Ok(make(0.5 * (lo + up)))
    }
}

/// Integrand of the polar-coordinate area integral of the quarter square.
pub fn quarter_square_integrand(theta: f64) -> f64 {
    let c = cell_geometry().c;
    let k = c * theta.cos();
    2.0 / (1.0 - k * k + k * (k * k - 1.0).sqrt())
}

/// Hyperbolic area of one quarter of the central square of the {4,5} tiling
/// (the section of `ℬ` by `x₃ = 0`); the closed form is π/10.
pub fn quarter_square_area() -> Result<f64> {
    Ok(quadrature::integrate(quarter_square_integrand, 0.0, FRAC_PI_4, 1e-13)? - PI)
}
