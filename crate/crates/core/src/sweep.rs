//! V×A sweeps over candidate families and the reports built from them.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::candidates::{initial_mesh, CandidateSpec, Case};
use crate::error::{Error, Result};
use crate::evolve::{evolve_to_convergence, EvolveConfig, EvolveResult, Status};
use crate::hyperbolic::cell;
use crate::quadrature::integrate_box;

pub const CSV_HEADER: &str = "case,epsilon,volume_target,volume,area,facets,iterations,status,ortho_deficit";

/// Fewest converged records per family accepted by [`isop_curve`].
pub const MIN_FAMILY_RECORDS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub case: Case,
    pub eps: f64,
    pub volume_target: f64,
    pub volume: f64,
    pub area: f64,
    pub facets: usize,
    pub iterations: usize,
    pub status: Status,
    pub ortho_deficit: f64,
}

impl SweepRecord {
    pub fn from_result(spec: &CandidateSpec, r: &EvolveResult) -> SweepRecord {
        SweepRecord {
            case: spec.case,
            eps: spec.eps,
            volume_target: spec.target_volume,
            volume: r.volume,
            area: r.area,
            facets: r.mesh.area_facet_count(),
            iterations: r.iterations,
            status: r.status,
            ortho_deficit: r.orthogonality_deficit,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` points spanning the admissible range of `case`; interior points
/// only for the open aaa range.
pub fn default_grid(case: Case, n: usize) -> Vec<f64> {
    let (lo, hi) = case.admissible_range();
    if case == Case::Aaa {
        (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
    } else {
        linspace(lo, hi, n)
    }
}

/// Evolve one candidate per `ε` in `grid`, concurrently, returning records
/// in grid order. Runs that fail inside the evolution are kept as
/// DEGENERATE records with NaN measurements.
pub fn run_sweep(case: Case, grid: &[f64], cfg: &EvolveConfig) -> Result<Vec<SweepRecord>> {
    if grid.is_empty() {
        return Err(Error::Domain("empty ε grid".into()));
    }
    cfg.validate()?;
    let specs = grid.iter().map(|&e| CandidateSpec::new(case, e)).collect::<Result<Vec<_>>>()?;
    Ok(specs.par_iter().map(|spec| run_one(spec, cfg)).collect())
}

/// Evolve a single candidate, folding evolution failures into the record.
pub fn run_one(spec: &CandidateSpec, cfg: &EvolveConfig) -> SweepRecord {
    let result = initial_mesh(spec).and_then(|m| evolve_to_convergence(&m, cfg));
    match result {
        Ok(r) => SweepRecord::from_result(spec, &r),
        Err(_) => SweepRecord {
            case: spec.case,
            eps: spec.eps,
            volume_target: spec.target_volume,
            volume: f64::NAN,
            area: f64::NAN,
            facets: 0,
            iterations: 0,
            status: Status::Degenerate,
            ortho_deficit: f64::NAN,
        },
    }
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{:.12e},{:.12e},{:.12e},{:.12e},{},{},{},{:.6e}",
            r.case, r.eps, r.volume_target, r.volume, r.area, r.facets, r.iterations, r.status, r.ortho_deficit
        )?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if idx == 0 {
            if line.trim() != CSV_HEADER {
                return Err(Error::Parse { line: 1, msg: format!("unexpected header `{line}`") });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 9 {
            return Err(err("expected 9 fields"));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|_| err("bad number"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| err("bad integer"));
        let status = match f[7] {
            "CONVERGED" => Status::Converged,
            "DEGENERATE" => Status::Degenerate,
            "MAX_ITER" => Status::MaxIter,
            _ => return Err(err("bad status")),
        };
        out.push(SweepRecord {
            case: f[0].parse().map_err(|_| err("unknown case"))?,
            eps: real(f[1])?,
            volume_target: real(f[2])?,
            volume: real(f[3])?,
            area: real(f[4])?,
            facets: int(f[5])?,
            iterations: int(f[6])?,
            status,
            ortho_deficit: real(f[8])?,
        });
    }
    Ok(out)
}

/// Piecewise-linear V×A curve of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub case: Case,
    /// `(V, A)` with strictly increasing `V`.
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    /// Converged records of `case`, sorted by achieved volume.
    pub fn from_records(records: &[SweepRecord], case: Case) -> Curve {
        let mut points: Vec<(f64, f64)> =
            records.iter().filter(|r| r.case == case && r.converged()).map(|r| (r.volume, r.area)).collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        points.dedup_by(|b, a| b.0 <= a.0);
        Curve { case, points }
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        Some((self.points.first()?.0, self.points.last()?.0))
    }

    /// Interpolated area at `v`, if `v` lies within the sampled range.
    pub fn at(&self, v: f64) -> Option<f64> {
        let i = self.segment(v)?;
        if i + 1 == self.points.len() {
            return Some(self.points[i].1);
        }
        let (v0, a0) = self.points[i];
        let (v1, a1) = self.points[i + 1];
        Some(a0 + (a1 - a0) * (v - v0) / (v1 - v0))
    }

    /// Index of the sample starting the segment containing `v`.
    fn segment(&self, v: f64) -> Option<usize> {
        let (lo, hi) = self.range()?;
        if !(v >= lo && v <= hi) {
            return None;
        }
        let i = self.points.partition_point(|p| p.0 <= v);
        Some(i.saturating_sub(1).min(self.points.len() - 1))
    }

    /// Length of the sampled segment containing `v`.
    fn spacing_at(&self, v: f64) -> f64 {
        match self.segment(v) {
            Some(i) if i + 1 < self.points.len() => self.points[i + 1].0 - self.points[i].0,
            Some(i) if i > 0 => self.points[i].0 - self.points[i - 1].0,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsopPoint {
    pub volume: f64,
    pub area: f64,
    pub winner: Case,
}

/// Pointwise minimum of the aaa, abb and bbe curves.
#[derive(Debug, Clone, PartialEq)]
pub struct IsopCurve {
    pub points: Vec<IsopPoint>,
}

impl IsopCurve {
    pub fn range(&self) -> Option<(f64, f64)> {
        Some((self.points.first()?.volume, self.points.last()?.volume))
    }

    pub fn at(&self, v: f64) -> Option<f64> {
        let c = Curve { case: Case::Aaa, points: self.points.iter().map(|p| (p.volume, p.area)).collect() };
        c.at(v)
    }

    /// Family with the least area at the sample nearest to `v`.
    pub fn winner_at(&self, v: f64) -> Option<Case> {
        let (lo, hi) = self.range()?;
        if !(v >= lo && v <= hi) {
            return None;
        }
        self.points.iter().min_by(|a, b| (a.volume - v).abs().total_cmp(&(b.volume - v).abs())).map(|p| p.winner)
    }
}

pub fn isop_curve(records: &[SweepRecord]) -> Result<IsopCurve> {
    let families: Vec<Curve> =
        [Case::Aaa, Case::Abb, Case::Bbe].iter().map(|&c| Curve::from_records(records, c)).collect();
    for f in &families {
        if f.points.len() < MIN_FAMILY_RECORDS {
            return Err(Error::Domain(format!(
                "{} has {} converged records, need {MIN_FAMILY_RECORDS}",
                f.case,
                f.points.len()
            )));
        }
    }
    // the union of ranges must be connected
    let mut ranges: Vec<(f64, f64)> = families.iter().filter_map(Curve::range).collect();
    ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = ranges[0].1;
    for r in &ranges[1..] {
        if r.0 > reach {
            return Err(Error::Domain("family volume ranges do not overlap".into()));
        }
        reach = reach.max(r.1);
    }
    let mut vs: Vec<f64> = families.iter().flat_map(|f| f.points.iter().map(|p| p.0)).collect();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let points = vs
        .into_iter()
        .map(|v| {
            let (winner, area) = families
                .iter()
                .filter_map(|f| f.at(v).map(|a| (f.case, a)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("connected union covers every sample");
            IsopPoint { volume: v, area, winner }
        })
        .collect();
    Ok(IsopCurve { points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    pub volume: f64,
    /// Half the local grid spacing in V.
    pub uncertainty: f64,
    /// Merged samples bracketing the crossing.
    pub bracket: (f64, f64),
}

/// Crossings of the linear interpolants of `a` and `b` over their overlap.
pub fn turning_points(a: &Curve, b: &Curve) -> Result<Vec<TurningPoint>> {
    let (a_lo, a_hi) = a.range().ok_or_else(|| Error::Domain(format!("{} curve is empty", a.case)))?;
    let (b_lo, b_hi) = b.range().ok_or_else(|| Error::Domain(format!("{} curve is empty", b.case)))?;
    let (lo, hi) = (a_lo.max(b_lo), a_hi.min(b_hi));
    if !(lo < hi) {
        return Err(Error::Domain(format!("{} and {} do not overlap in V", a.case, b.case)));
    }
    let mut vs: Vec<f64> =
        a.points.iter().chain(&b.points).map(|p| p.0).filter(|&v| v > lo && v < hi).chain([lo, hi]).collect();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let diff = |v: f64| a.at(v).unwrap() - b.at(v).unwrap();
    let mut out = Vec::new();
    for w in vs.windows(2) {
        let (v0, v1) = (w[0], w[1]);
        let (d0, d1) = (diff(v0), diff(v1));
        let crossing = if d0 == 0.0 && d1 == 0.0 {
            0.5 * (v0 + v1)
        } else if d0 * d1 < 0.0 || d1 == 0.0 {
            v0 + (v1 - v0) * d0 / (d0 - d1)
        } else {
            continue;
        };
        let uncertainty = 0.5 * a.spacing_at(crossing).max(b.spacing_at(crossing));
        out.push(TurningPoint { volume: crossing, uncertainty, bracket: (v0, v1) });
    }
    Ok(out)
}

/// Least and greatest `A_num(V) / A_den(V)` over the overlap, evaluated at
/// every sample of either curve inside it, with the volumes attaining them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRange {
    pub min: f64,
    pub min_at: f64,
    pub max: f64,
    pub max_at: f64,
    pub samples: usize,
}

pub fn ratio_range(num: &Curve, den: &dyn Fn(f64) -> Option<f64>, den_samples: &[f64]) -> Result<RatioRange> {
    let vs = num.points.iter().map(|p| p.0).chain(den_samples.iter().copied());
    let mut out: Option<RatioRange> = None;
    for v in vs {
        let (Some(n), Some(d)) = (num.at(v), den(v)) else { continue };
        let q = n / d;
        let r = out.get_or_insert(RatioRange { min: q, min_at: v, max: q, max_at: v, samples: 0 });
        r.samples += 1;
        if q < r.min {
            (r.min, r.min_at) = (q, v);
        }
        if q > r.max {
            (r.max, r.max_at) = (q, v);
        }
    }
    out.ok_or_else(|| Error::Domain(format!("{} does not overlap the reference curve", num.case)))
}

/// Ratio of a family's area to the isop-curve over their overlap.
pub fn gap_report(bbd: &Curve, isop: &IsopCurve) -> Result<RatioRange> {
    let samples: Vec<f64> = isop.points.iter().map(|p| p.volume).collect();
    ratio_range(bbd, &|v| isop.at(v), &samples)
}

/// Ratio of one family's area to another's over their overlap.
pub fn family_ratio(num: &Curve, den: &Curve) -> Result<RatioRange> {
    let samples: Vec<f64> = den.points.iter().map(|p| p.0).collect();
    ratio_range(num, &|v| den.at(v), &samples)
}

/// Hyperbolic volume density at `u` in the chart of `ℬ` (or `𝒞` for
/// negative coordinates).
fn chart_volume_density(u: [f64; 3]) -> f64 {
    let g = cell();
    let x = g.chart_point(u);
    let d = 1.0 - x.norm_squared();
    8.0 / (d * d * d) * g.chart_jacobian_det(u).abs()
}

/// `(V(ℬ), V(𝒞))` by adaptive cubature in the unit-cube chart, with `V(𝒞)`
/// taken as `8 V(ℬ)`.
pub fn cell_volume() -> Result<(f64, f64)> {
    let vb = integrate_box(chart_volume_density, [0.0; 3], [1.0; 3], 1e-9)?;
    Ok((vb, 8.0 * vb))
}

/// `V(𝒞)` integrated over the whole chart `[−1, 1]³`.
pub fn cube_volume_direct() -> Result<f64> {
    let mut total = 0.0;
    // split at the mirror planes so each sub-box has a smooth integrand
    for s in 0..8 {
        let lo = [0, 1, 2].map(|i| if s >> i & 1 == 1 { -1.0 } else { 0.0 });
        let hi = lo.map(|l| l + 1.0);
        total += integrate_box(chart_volume_density, lo, hi, 1e-9)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Check {
        Check { name, residual, tolerance, passed: residual <= tolerance }
    }
}

/// Closed-form oracles of the geometry, flux field and discretisation.
pub fn validate() -> Result<Vec<Check>> {
    use crate::functionals::{self, QuadratureRule};
    use crate::hyperbolic::{self, ExactFamily};
    use crate::mesh::icosphere;
    use crate::Vec3;
    use std::f64::consts::PI;

    let g = cell();
    let mut out = Vec::new();
    let r = hyperbolic::solve_cube_radius(2.0 * PI / 5.0)?;
    out.push(Check::new("cube radius r² = 1 + √5", (r * r - (1.0 + 5f64.sqrt())).abs(), 1e-10));
    out.push(Check::new("dihedral angle at r = √2 + 1e-9 is π/3", (hyperbolic::dihedral_angle(2f64.sqrt() + 1e-9)? - PI / 3.0).abs(), 1e-4));
    out.push(Check::new("quarter square area = π/10", (hyperbolic::quarter_square_area()? - PI / 10.0).abs(), 1e-8));

    // cell isometries keep the unit sphere
    let mut sphere_err: f64 = 0.0;
    for axis in 0..3 {
        for iso in [hyperbolic::face_inversion(axis)?, hyperbolic::lattice_translation(axis)?] {
            for k in 0..16 {
                let t = k as f64 * 0.37;
                let p = Vec3::new(t.cos() * (0.7 * t).sin(), t.sin() * (0.7 * t).sin(), (0.7 * t).cos()) * (1.0 - 1e-9);
                if let Ok(q) = iso.apply(&p) {
                    sphere_err = sphere_err.max((q.norm() - p.norm()).abs());
                }
            }
        }
    }
    out.push(Check::new("cell isometries keep the ideal boundary", sphere_err, 1e-6));

    // divergence of the flux field against the volume density
    let mut div_err: f64 = 0.0;
    for k in 0..50 {
        let t = k as f64;
        let p = Vec3::new(0.02 + 0.2 * (0.3 * t).sin().abs(), 0.02 + 0.2 * (0.7 * t).cos().abs(), 0.02 + 0.2 * (1.1 * t).sin().abs());
        let h = 1e-5;
        let divergence: f64 = (0..3)
            .map(|i| {
                let mut e = Vec3::zeros();
                e[i] = h;
                (functionals::flux_field(&(p + e))[i] - functionals::flux_field(&(p - e))[i]) / (2.0 * h)
            })
            .sum();
        let density = functionals::volume_density(&p);
        div_err = div_err.max((divergence - density).abs() / density);
    }
    out.push(Check::new("flux field divergence = volume density", div_err, 1e-6));

    // Taylor expansion of the sphere area at small radius
    let eps = 1e-3;
    let rho = 2.0 * f64::atanh(eps);
    let taylor = 4.0 * PI * rho * rho * (1.0 + rho * rho / 3.0);
    out.push(Check::new("sphere area matches its Taylor expansion", (hyperbolic::sphere_area_exact(eps)? - taylor).abs() / taylor, 1e-8));

    // closed sphere: flux volume and area against the closed forms
    let eps = 0.2;
    let exact_v = hyperbolic::sphere_volume_exact(eps)?;
    let exact_a = hyperbolic::sphere_area_exact(eps)?;
    let mut errs = Vec::new();
    for level in [4, 5] {
        let m = icosphere(eps, level)?;
        let v = functionals::volume(&m, QuadratureRule::Midpoint3);
        let a = functionals::area(&m, QuadratureRule::Midpoint3);
        errs.push(((v - exact_v).abs() / exact_v, (a - exact_a).abs() / exact_a));
    }
    out.push(Check::new("icosphere flux volume within 1e-3", errs[1].0, 1e-3));
    let order = (errs[0].1 / errs[1].1).log2();
    out.push(Check::new("sphere area converges at order ≥ 2", (2.0 - order).max(0.0), 0.1));

    // exact families inside the eighth
    let fam_err = [ExactFamily::Sphere(0.2), ExactFamily::VerticalUnduloid(0.15), ExactFamily::Hypersphere(0.1)]
        .iter()
        .map(|f| {
            let v = f.volume_in_eighth()?;
            let back = f.with_volume(v)?;
            Ok((back.eps() - f.eps()).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check::new("exact families invert volume to ε", fam_err, 1e-9));
    out.push(Check::new("largest sphere radius c − r", (g.eps_max - 0.2593).abs(), 1e-4));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(case: Case, volume: f64, area: f64) -> SweepRecord {
        SweepRecord {
            case,
            eps: 0.1,
            volume_target: volume,
            volume,
            area,
            facets: 100,
            iterations: 10,
            status: Status::Converged,
            ortho_deficit: 0.0,
        }
    }

    fn line(case: Case, vs: &[f64], a0: f64, slope: f64) -> Vec<SweepRecord> {
        vs.iter().map(|&v| rec(case, v, a0 + slope * v)).collect()
    }

    #[test]
    fn curve_interpolates_and_skips_unconverged() {
        let mut rs = line(Case::Abb, &[0.01, 0.02, 0.04], 1.0, 10.0);
        rs.push(SweepRecord { status: Status::Degenerate, ..rec(Case::Abb, 0.03, 9.0) });
        let c = Curve::from_records(&rs, Case::Abb);
        assert_eq!(c.points.len(), 3);
        assert!((c.at(0.03).unwrap() - 1.3).abs() < 1e-12);
        assert_eq!(c.at(0.005), None);
        assert_eq!(c.at(0.04), Some(1.4));
    }

    #[test]
    fn isop_winners_and_turning_points() {
        let vs: Vec<f64> = linspace(0.0, 0.1, 11);
        let mut rs = line(Case::Aaa, &vs, 0.0, 10.0);
        rs.extend(line(Case::Abb, &vs, 0.1, 5.0));
        rs.extend(line(Case::Bbe, &vs, 0.3, 0.0));
        let isop = isop_curve(&rs).unwrap();
        assert_eq!(isop.winner_at(0.01), Some(Case::Aaa));
        assert_eq!(isop.winner_at(0.03), Some(Case::Abb));
        assert_eq!(isop.winner_at(0.09), Some(Case::Bbe));
        let t = turning_points(&Curve::from_records(&rs, Case::Aaa), &Curve::from_records(&rs, Case::Abb)).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0].volume - 0.02).abs() < 1e-12);
        assert!((t[0].uncertainty - 0.005).abs() < 1e-12);
        let t = turning_points(&Curve::from_records(&rs, Case::Abb), &Curve::from_records(&rs, Case::Bbe)).unwrap();
        assert!((t[0].volume - 0.04).abs() < 1e-12);
    }

    #[test]
    fn identical_curves_cross_everywhere() {
        let vs = linspace(0.01, 0.05, 5);
        let a = Curve::from_records(&line(Case::Aaa, &vs, 0.1, 1.0), Case::Aaa);
        let b = Curve { case: Case::Abb, ..a.clone() };
        assert_eq!(turning_points(&a, &b).unwrap().len(), 4);
    }

    #[test]
    fn isop_needs_enough_overlapping_records() {
        let mut rs = line(Case::Aaa, &[0.01, 0.02, 0.03, 0.04, 0.05], 0.0, 10.0);
        rs.extend(line(Case::Abb, &[0.01, 0.02], 0.1, 5.0));
        rs.extend(line(Case::Bbe, &[0.01, 0.02, 0.03, 0.04, 0.05], 0.3, 0.0));
        assert!(isop_curve(&rs).is_err());
        let mut rs = line(Case::Aaa, &linspace(0.0, 0.01, 5), 0.0, 10.0);
        rs.extend(line(Case::Abb, &linspace(0.02, 0.03, 5), 0.1, 5.0));
        rs.extend(line(Case::Bbe, &linspace(0.02, 0.03, 5), 0.3, 0.0));
        assert!(isop_curve(&rs).is_err());
    }

    #[test]
    fn disjoint_curves_have_no_turning_points() {
        let a = Curve::from_records(&line(Case::Aaa, &[0.01, 0.02], 0.0, 1.0), Case::Aaa);
        let b = Curve::from_records(&line(Case::Abb, &[0.03, 0.04], 0.0, 1.0), Case::Abb);
        assert!(turning_points(&a, &b).is_err());
    }

    #[test]
    fn ratio_over_overlap() {
        let vs = linspace(0.02, 0.06, 5);
        let num = Curve::from_records(&line(Case::Acc, &vs, 1.0, 0.0), Case::Acc);
        let den = Curve::from_records(&line(Case::Bbd, &linspace(0.0, 0.04, 5), 1.0, -5.0), Case::Bbd);
        let r = family_ratio(&num, &den).unwrap();
        assert!((r.min - 1.0 / 0.9).abs() < 1e-12 && (r.min_at - 0.02).abs() < 1e-15);
        assert!((r.max - 1.0 / 0.8).abs() < 1e-12 && (r.max_at - 0.04).abs() < 1e-15);
    }

    #[test]
    fn csv_keeps_header_and_rejects_bad_lines() {
        let rs = vec![rec(Case::AaDisconnected, 0.04, 0.33), SweepRecord { status: Status::MaxIter, ..rec(Case::Bbd, 0.05, 0.3) }];
        let mut buf = Vec::new();
        write_csv(&rs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].status, Status::MaxIter);
        assert!((back[0].area - 0.33).abs() < 1e-12);
        let bad = format!("{CSV_HEADER}\naaa,1,2,3\n");
        assert!(matches!(read_csv(bad.as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn default_grids_stay_admissible() {
        for case in Case::ALL {
            for e in default_grid(case, 7) {
                CandidateSpec::new(case, e).unwrap();
            }
        }
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(run_sweep(Case::Aaa, &[], &EvolveConfig::default()).is_err());
    }

    #[test]
    fn cube_volume_matches_eight_eighths() {
        let (vb, vc) = cell_volume().unwrap();
        assert!((cube_volume_direct().unwrap() - vc).abs() < 1e-8 * vc);
        assert!((vc - 8.0 * vb).abs() < 1e-15);
    }
}
