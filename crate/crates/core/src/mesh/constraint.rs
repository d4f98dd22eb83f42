//! Constraint surfaces of the eighth `ℬ`: the three mirror planes and the
//! three face spheres.

use std::fmt;

use crate::hyperbolic::cell;
use crate::Vec3;

/// Vertices are projected until every residual is below this.
pub const TOL_CON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// The mirror plane `x_axis = 0`.
    Plane(usize),
    /// Face sphere centred at `c e_axis` with radius `r`.
    FaceSphere(usize),
}

impl Constraint {
    pub const ALL: [Constraint; 6] = [
        Constraint::Plane(0),
        Constraint::Plane(1),
        Constraint::Plane(2),
        Constraint::FaceSphere(0),
        Constraint::FaceSphere(1),
        Constraint::FaceSphere(2),
    ];

    pub fn id(self) -> u8 {
        match self {
            Constraint::Plane(i) => i as u8,
            Constraint::FaceSphere(i) => 3 + i as u8,
        }
    }

    pub fn from_id(id: u8) -> Option<Constraint> {
        Constraint::ALL.get(id as usize).copied()
    }

    /// Signed residual; for spheres this is the Euclidean distance to the
    /// sphere (positive outside).
    pub fn residual(self, x: &Vec3) -> f64 {
        match self {
            Constraint::Plane(i) => x[i],
            Constraint::FaceSphere(i) => {
                let g = cell();
                (x - g.face_center(i, 1.0)).norm() - g.r
            }
        }
    }

    /// Unit normal at `x` (gradient of the residual).
    pub fn normal(self, x: &Vec3) -> Vec3 {
        match self {
            Constraint::Plane(i) => {
                let mut n = Vec3::zeros();
                n[i] = 1.0;
                n
            }
            Constraint::FaceSphere(i) => (x - cell().face_center(i, 1.0)).normalize(),
        }
    }

    /// Closest-point projection onto this single surface.
    pub fn project(self, x: &Vec3) -> Vec3 {
        match self {
            Constraint::Plane(i) => {
                let mut y = *x;
                y[i] = 0.0;
                y
            }
            Constraint::FaceSphere(i) => {
                let g = cell();
                let z = g.face_center(i, 1.0);
                z + (x - z).normalize() * g.r
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            Constraint::Plane(i) => format!("P{}", i + 1),
            Constraint::FaceSphere(i) => format!("F{}", i + 1),
        }
    }

    pub fn parse(s: &str) -> Option<Constraint> {
        let (kind, idx) = s.split_at(1);
        let i: usize = idx.parse().ok()?;
        if !(1..=3).contains(&i) {
            return None;
        }
        match kind {
            "P" => Some(Constraint::Plane(i - 1)),
            "F" => Some(Constraint::FaceSphere(i - 1)),
            _ => None,
        }
    }
}

/// Set of constraints bound to a vertex, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConstraintSet(u8);

impl ConstraintSet {
    pub const EMPTY: ConstraintSet = ConstraintSet(0);

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, c: Constraint) {
        self.0 |= 1 << c.id();
    }

    pub fn contains(self, c: Constraint) -> bool {
        self.0 & (1 << c.id()) != 0
    }

    pub fn intersection(self, other: ConstraintSet) -> ConstraintSet {
        ConstraintSet(self.0 & other.0)
    }

    pub fn union(self, other: ConstraintSet) -> ConstraintSet {
        ConstraintSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: ConstraintSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Constraint> {
        Constraint::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn has_plane(self) -> bool {
        self.0 & 0b111 != 0
    }

    pub fn planes(self) -> ConstraintSet {
        ConstraintSet(self.0 & 0b111)
    }

    pub fn spheres(self) -> ConstraintSet {
        ConstraintSet(self.0 & 0b111000)
    }

    /// Map every member through `f`.
    pub fn map(self, f: impl Fn(Constraint) -> Constraint) -> ConstraintSet {
        ConstraintSet::from_iter(self.iter().map(f))
    }

    /// Largest residual magnitude at `x`.
    pub fn max_residual(self, x: &Vec3) -> f64 {
        self.iter().map(|c| c.residual(x).abs()).fold(0.0, f64::max)
    }

    /// Project `x` onto the intersection of all member surfaces.
    ///
    /// A single surface uses its closed-form projection; intersections use
    /// Gauss–Newton on the stacked residuals, which converges quadratically
    /// for transversal intersections.
    pub fn project(self, x: &Vec3) -> Vec3 {
        let members: Vec<Constraint> = self.iter().collect();
        match members.len() {
            0 => *x,
            1 => members[0].project(x),
            _ => {
                let mut y = *x;
                // planes first: exact and orthogonal to every face sphere
                // whose centre lies in them
                for c in &members {
                    if let Constraint::Plane(_) = c {
                        y = c.project(&y);
                    }
                }
                for _ in 0..30 {
                    let res: Vec<f64> = members.iter().map(|c| c.residual(&y)).collect();
                    if res.iter().all(|r| r.abs() <= 0.05 * TOL_CON) {
                        break;
                    }
                    let k = members.len().min(3);
                    let rows: Vec<Vec3> = members.iter().map(|c| c.normal(&y)).collect();
                    // minimum-norm correction: y -= Jᵀ (J Jᵀ)⁻¹ res
                    let mut gram = nalgebra::DMatrix::<f64>::zeros(k, k);
                    for a in 0..k {
                        for b in 0..k {
                            gram[(a, b)] = rows[a].dot(&rows[b]);
                        }
                    }
                    let rhs = nalgebra::DVector::from_iterator(k, res.iter().take(k).copied());
                    let Some(sol) = gram.lu().solve(&rhs) else { break };
                    for a in 0..k {
                        y -= rows[a] * sol[a];
                    }
                }
                y
            }
        }
    }

    /// Remove the components of `g` normal to every member surface at `x`.
    pub fn tangent_projection(self, x: &Vec3, g: &Vec3) -> Vec3 {
        let mut basis: Vec<Vec3> = Vec::with_capacity(3);
        for c in self.iter() {
            let mut n = c.normal(x);
            for b in &basis {
                n -= b * b.dot(&n);
            }
            let len = n.norm();
            if len > 1e-12 {
                basis.push(n / len);
            }
        }
        let mut out = *g;
        for b in &basis {
            out -= b * b.dot(&out);
        }
        out
    }
}

impl FromIterator<Constraint> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Constraint>>(items: I) -> Self {
        let mut s = ConstraintSet(0);
        for c in items {
            s.insert(c);
        }
        s
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.iter().map(Constraint::label).collect();
        write!(f, "{}", labels.join(" "))
    }
}
