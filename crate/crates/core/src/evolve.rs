//! Area minimisation at fixed hyperbolic volume.
//!
//! Each iteration moves vertices against the area gradient with the volume
//! gradient component removed, re-projects onto the constraints, and pulls
//! the volume back to the target by Newton steps along the volume gradient.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::functionals::{self, QuadratureRule};
use crate::hyperbolic::cell;
use crate::mesh::{
    degeneracy_report, equiangulate, refine, vertex_average, write_off, Constraint, SurfaceMesh,
};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// Constant `s`, halved only when a step fails.
    Fixed(f64),
    /// Quadratic fit through trial steps at `s` and `2s`.
    Optimizing,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefineSchedule {
    /// Refine before the listed iterations.
    AtIterations(Vec<usize>),
    /// Refine when progress stalls while area per facet exceeds the bound.
    AreaPerFacet(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub max_iterations: usize,
    pub step_policy: StepPolicy,
    pub volume_tolerance: f64,
    /// Convergence window length in iterations.
    pub window: usize,
    /// Relative area decrease over the window below which progress stalls.
    pub window_threshold: f64,
    pub refine: RefineSchedule,
    /// Keep refining on stall until at least this many area facets exist.
    pub min_facets: usize,
    /// Refine the start mesh until it has at least this many area facets.
    pub start_facets: usize,
    /// Never refine past this many facets.
    pub max_facets: usize,
    /// Every this many iterations, equiangulate and tangentially average
    /// if the mesh quality has dropped (0: only after refinement and on a
    /// stall).
    pub tidy_every: usize,
    /// Relax vertices inside CLEAR regions as part of every step.
    pub relax_clear: bool,
    pub rule: QuadratureRule,
    /// Check for degeneration every this many iterations.
    pub degeneracy_every: usize,
    /// Write an OFF snapshot every this many iterations into `snapshot_dir`.
    pub snapshot_every: usize,
    pub snapshot_dir: Option<PathBuf>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            max_iterations: 20_000,
            step_policy: StepPolicy::Optimizing,
            volume_tolerance: 1e-9,
            window: 50,
            window_threshold: 1e-8,
            refine: RefineSchedule::AreaPerFacet(0.01),
            min_facets: 0,
            start_facets: 64,
            max_facets: 200_000,
            tidy_every: 50,
            relax_clear: true,
            rule: QuadratureRule::Midpoint3,
            degeneracy_every: 10,
            snapshot_every: 0,
            snapshot_dir: None,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.volume_tolerance > 0.0 && self.window_threshold > 0.0 && self.window > 0;
        let step_ok = match self.step_policy {
            StepPolicy::Fixed(s) => s > 0.0,
            StepPolicy::Optimizing => true,
        };
        let refine_ok = match &self.refine {
            RefineSchedule::AreaPerFacet(t) => *t > 0.0,
            RefineSchedule::AtIterations(_) => true,
        };
        if positive && step_ok && refine_ok && self.degeneracy_every > 0 {
            Ok(())
        } else {
            Err(Error::Config("tolerances, window and cadences must be positive".into()))
        }
    }
}

impl EvolveConfig {
    /// Parse `key = value` lines over the defaults. `#` starts a comment;
    /// unknown keys and malformed values are errors.
    ///
    /// Value syntax: `step = optimizing | fixed:<s>`,
    /// `refine = af:<a/f> | at:<i>,<i>,...`, `rule = midpoint3 | degree4`,
    /// booleans `true | false`.
    pub fn parse(text: &str) -> Result<EvolveConfig> {
        let mut cfg = EvolveConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let bad = |what: &str| err(format!("invalid {what} `{value}` for `{key}`"));
            let int = || value.parse::<usize>().map_err(|_| bad("integer"));
            let real = || value.parse::<f64>().map_err(|_| bad("number"));
            match key {
                "max_iterations" => cfg.max_iterations = int()?,
                "volume_tolerance" => cfg.volume_tolerance = real()?,
                "window" => cfg.window = int()?,
                "window_threshold" => cfg.window_threshold = real()?,
                "min_facets" => cfg.min_facets = int()?,
                "start_facets" => cfg.start_facets = int()?,
                "max_facets" => cfg.max_facets = int()?,
                "tidy_every" => cfg.tidy_every = int()?,
                "degeneracy_every" => cfg.degeneracy_every = int()?,
                "snapshot_every" => cfg.snapshot_every = int()?,
                "snapshot_dir" => cfg.snapshot_dir = Some(PathBuf::from(value)),
                "relax_clear" => cfg.relax_clear = value.parse().map_err(|_| bad("boolean"))?,
                "rule" => cfg.rule = QuadratureRule::parse(value).ok_or_else(|| bad("rule"))?,
                "step" => {
                    cfg.step_policy = match value.split_once(':') {
                        None if value == "optimizing" => StepPolicy::Optimizing,
                        Some(("fixed", s)) => StepPolicy::Fixed(s.trim().parse().map_err(|_| bad("step"))?),
                        _ => return Err(bad("step policy")),
                    }
                }
                "refine" => {
                    cfg.refine = match value.split_once(':') {
                        Some(("af", t)) => RefineSchedule::AreaPerFacet(t.trim().parse().map_err(|_| bad("A/F"))?),
                        Some(("at", list)) => RefineSchedule::AtIterations(
                            list.split(',')
                                .filter(|x| !x.trim().is_empty())
                                .map(|x| x.trim().parse().map_err(|_| bad("iteration list")))
                                .collect::<Result<_>>()?,
                        ),
                        _ => return Err(bad("refine schedule")),
                    }
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    Degenerate,
    MaxIter,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "CONVERGED",
            Status::Degenerate => "DEGENERATE",
            Status::MaxIter => "MAX_ITER",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub area: f64,
    pub volume: f64,
    pub area_per_facet: f64,
    /// Set on the first point after the mesh was refined, flipped or
    /// averaged, which may raise the area.
    pub remeshed: bool,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub mesh: SurfaceMesh,
    pub area: f64,
    pub volume: f64,
    pub iterations: usize,
    pub status: Status,
    pub orthogonality_deficit: f64,
    pub trace: Vec<TracePoint>,
    /// Why the run ended degenerate, when it did.
    pub reason: Option<String>,
}

impl EvolveResult {
    /// Whether no descent step ever increased the area.
    pub fn area_monotone(&self, slack: f64) -> bool {
        self.trace.windows(2).all(|w| w[1].remeshed || w[1].area <= w[0].area + slack)
    }
}

/// Gradients projected onto each vertex's constraint tangent space.
fn projected(mesh: &SurfaceMesh, g: Vec<Vec3>) -> Vec<Vec3> {
    mesh.vertices.iter().zip(g).map(|(v, g)| v.constraints.tangent_projection(&v.pos, &g)).collect()
}

fn dot(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

/// Newton iteration on the volume along the projected volume gradient.
pub fn restore_volume(mesh: &mut SurfaceMesh, target: f64, cfg: &EvolveConfig) -> Result<()> {
    let mut residual = functionals::volume(mesh, cfg.rule) - target;
    for it in 0..=20 {
        if residual.abs() <= cfg.volume_tolerance {
            return Ok(());
        }
        if it == 20 {
            break;
        }
        let g = projected(mesh, functionals::volume_gradient(mesh, cfg.rule));
        let gg = dot(&g, &g);
        if !(gg > 1e-30) {
            break;
        }
        let t = -residual / gg;
        for (v, d) in mesh.vertices.iter_mut().zip(&g) {
            v.pos += d * t;
        }
        mesh.project_constraints();
        residual = functionals::volume(mesh, cfg.rule) - target;
        if !residual.is_finite() {
            break;
        }
    }
    Err(Error::VolumeRestore { iterations: 20, residual })
}

/// Descent direction `−(gA − λ gV)` with both gradients projected.
pub fn descent_direction(mesh: &SurfaceMesh, rule: QuadratureRule) -> Vec<Vec3> {
    let ga = projected(mesh, functionals::area_gradient(mesh, rule));
    let gv = projected(mesh, functionals::volume_gradient(mesh, rule));
    let vv = dot(&gv, &gv);
    let lambda = if vv < 1e-30 { 0.0 } else { dot(&ga, &gv) / vv };
    ga.iter().zip(&gv).map(|(a, v)| -(a - v * lambda)).collect()
}

/// Apply a step of length `s` along `dir`, project, relax CLEAR vertices
/// when asked, and restore the volume.
fn trial(
    mesh: &SurfaceMesh,
    dir: &[Vec3],
    s: f64,
    relax: bool,
    target: f64,
    cfg: &EvolveConfig,
) -> Option<(SurfaceMesh, f64)> {
    let mut m = mesh.clone();
    for (v, d) in m.vertices.iter_mut().zip(dir) {
        v.pos += d * s;
    }
    m.project_constraints();
    if relax {
        vertex_average(&mut m, true);
    }
    if m.vertices.iter().any(|v| !(v.pos.norm_squared() < 1.0 - 1e-9)) {
        return None;
    }
    restore_volume(&mut m, target, cfg).ok()?;
    let area = functionals::area(&m, cfg.rule);
    area.is_finite().then_some((m, area))
}

/// One accepted descent step. Returns the new mesh, its area, and the step
/// length to try next.
pub fn constrained_step(
    mesh: &SurfaceMesh,
    s: f64,
    relax: bool,
    cfg: &EvolveConfig,
) -> Result<(SurfaceMesh, f64, f64)> {
    let target = mesh.target_volume.ok_or_else(|| Error::InvalidMesh("no target volume".into()))?;
    let a0 = functionals::area(mesh, cfg.rule);
    let dir = descent_direction(mesh, cfg.rule);
    let accept = |a: f64| a <= a0 + 1e-12;
    let mut s = s;
    for _ in 0..30 {
        match cfg.step_policy {
            StepPolicy::Fixed(_) => {
                if let Some((m, a)) = trial(mesh, &dir, s, relax, target, cfg) {
                    if accept(a) {
                        return Ok((m, a, s));
                    }
                }
            }
            StepPolicy::Optimizing => {
                let t1 = trial(mesh, &dir, s, relax, target, cfg);
                let t2 = t1.as_ref().and_then(|_| trial(mesh, &dir, 2.0 * s, relax, target, cfg));
                if let Some((m1, a1)) = t1 {
                    let mut best = (m1, a1, s);
                    if let Some((m2, a2)) = t2 {
                        let curv = a2 - 2.0 * a1 + a0;
                        if a2 < best.1 {
                            best = (m2, a2, 2.0 * s);
                        }
                        if curv > 0.0 {
                            let opt = s * (3.0 * a0 - 4.0 * a1 + a2) / (2.0 * curv);
                            let opt = opt.clamp(0.25 * s, 4.0 * s);
                            if (opt - s).abs() > 1e-3 * s && (opt - 2.0 * s).abs() > 1e-3 * s {
                                if let Some((m3, a3)) = trial(mesh, &dir, opt, relax, target, cfg) {
                                    if a3 < best.1 {
                                        best = (m3, a3, opt);
                                    }
                                }
                            }
                        } else if best.2 == 2.0 * s {
                            // still descending at 2s: be bolder next time
                            best.2 = 4.0 * s;
                        }
                    }
                    if accept(best.1) {
                        return Ok(best);
                    }
                }
            }
        }
        s *= 0.5;
    }
    Err(Error::StepFailure(30))
}

/// Largest deviation from a right angle between a surface facet and the
/// constraint surface along each boundary or CLEAR-interface edge.
/// Conformality makes the Euclidean angle the hyperbolic one.
pub fn orthogonality_check(mesh: &SurfaceMesh) -> f64 {
    let ef = mesh.edge_facets();
    let mut worst: f64 = 0.0;
    for (&(a, b), fs) in &ef {
        let surface: Vec<usize> = fs.iter().copied().filter(|&f| !mesh.facets[f].clear).collect();
        let boundary = fs.len() == 1 || (fs.len() == 2 && surface.len() == 1);
        if !boundary || surface.len() != 1 {
            continue;
        }
        let common = mesh.vertices[a].constraints.intersection(mesh.vertices[b].constraints);
        let candidates: Vec<Constraint> = if fs.len() == 1 {
            common.planes().iter().collect()
        } else {
            let clear = fs.iter().copied().find(|&f| mesh.facets[f].clear).expect("one clear facet");
            let on = crate::mesh::facet_spheres_of(mesh, clear);
            common.intersection(on).iter().collect()
        };
        let n = mesh.facet_normal(&mesh.facets[surface[0]]).normalize();
        let mid = 0.5 * (mesh.vertices[a].pos + mesh.vertices[b].pos);
        let dev = candidates
            .iter()
            .map(|c| c.normal(&mid).normalize().dot(&n).abs().min(1.0).asin())
            .fold(f64::INFINITY, f64::min);
        if dev.is_finite() {
            worst = worst.max(dev);
        }
    }
    worst
}

fn initial_step(mesh: &SurfaceMesh, rule: QuadratureRule) -> f64 {
    let dir = descent_direction(mesh, rule);
    let dmax = dir.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let h = mesh
        .edges()
        .into_iter()
        .map(|(a, b)| (mesh.vertices[a].pos - mesh.vertices[b].pos).norm())
        .fold(f64::INFINITY, f64::min);
    if dmax > 0.0 {
        0.1 * h / dmax
    } else {
        1e-3
    }
}

fn outside_cell(mesh: &SurfaceMesh) -> bool {
    let g = cell();
    mesh.vertices.iter().any(|v| !g.contains_eighth(&v.pos, 1e-6))
}

/// Whether some area facet lies flat on a wall that one of its vertices is
/// not bound to, meaning the surface has run into its own mirror image.
fn touches_wall(mesh: &SurfaceMesh) -> bool {
    mesh.facets.iter().filter(|f| !f.clear).any(|f| {
        Constraint::ALL.iter().any(|&c| {
            let vs = f.v.map(|i| &mesh.vertices[i]);
            vs.iter().all(|v| c.residual(&v.pos).abs() <= 1e-9) && vs.iter().any(|v| !v.constraints.contains(c))
        })
    })
}

fn refine_and_tidy(mesh: &mut SurfaceMesh) {
    refine(mesh);
    equiangulate(mesh);
    vertex_average(mesh, false);
}

/// Refine until the volume target becomes reachable, for starts like a
/// single flat facet.
fn reach_target(mesh: &mut SurfaceMesh, target: f64, cfg: &EvolveConfig) -> Result<()> {
    while mesh.area_facet_count() < cfg.start_facets {
        refine_and_tidy(mesh);
    }
    for _ in 0..6 {
        if restore_volume(mesh, target, cfg).is_ok() {
            return Ok(());
        }
        refine_and_tidy(mesh);
    }
    restore_volume(mesh, target, cfg)
}

/// Whether the triangulation has short edges or slivers worth repairing.
pub fn needs_tidy(mesh: &SurfaceMesh) -> bool {
    let lengths: Vec<f64> = mesh.edges().into_iter().map(|(a, b)| mesh.riemannian_length(a, b)).collect();
    if lengths.is_empty() {
        return false;
    }
    let mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
    let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    min < 0.2 * mean || degeneracy_report(mesh).max_aspect > 6.0
}

/// Equiangulate and tangentially average, then restore the volume.
fn tidy(mesh: &mut SurfaceMesh, target: f64, cfg: &EvolveConfig) -> Result<()> {
    equiangulate(mesh);
    vertex_average(mesh, false);
    restore_volume(mesh, target, cfg)
}

const TIDIES_PER_LEVEL: usize = 4;

/// A stalled surface whose contact angle is this far from a right angle is
/// pinned against the walls rather than at a free-boundary optimum.
pub const JAMMED_CONTACT: f64 = 1.0;

pub fn evolve_to_convergence(mesh: &SurfaceMesh, cfg: &EvolveConfig) -> Result<EvolveResult> {
    cfg.validate()?;
    let target = mesh.target_volume.ok_or_else(|| Error::InvalidMesh("no target volume".into()))?;
    if !(target > 0.0) {
        return Err(Error::Domain(format!("target volume {target} must be positive")));
    }
    mesh.validate()?;
    let mut m = mesh.clone();
    reach_target(&mut m, target, cfg)?;
    let mut area = functionals::area(&m, cfg.rule);
    let mut trace = vec![TracePoint {
        iteration: 0,
        area,
        volume: functionals::volume(&m, cfg.rule),
        area_per_facet: m.area_per_facet(area),
        remeshed: false,
    }];
    let mut s = match cfg.step_policy {
        StepPolicy::Fixed(s) => s,
        StepPolicy::Optimizing => initial_step(&m, cfg.rule),
    };
    // trace index where the current convergence window may start
    let mut level_start = 0usize;
    let mut status = Status::MaxIter;
    let mut reason = None;
    let mut it = 0usize;
    let mut remeshed = false;
    // a stall right after tidying means this resolution is exhausted
    let mut just_tidied = false;
    // the relaxed optimum of a level can itself look untidy, so cap tidies per level
    let mut tidies_left = TIDIES_PER_LEVEL;
    let degenerate = |why: String| (Status::Degenerate, Some(why));
    while it < cfg.max_iterations {
        let scheduled = matches!(&cfg.refine, RefineSchedule::AtIterations(list) if list.contains(&it));
        let remesh_result = if scheduled && m.facet_count() * 4 <= cfg.max_facets {
            refine_and_tidy(&mut m);
            tidies_left = TIDIES_PER_LEVEL;
            Some(restore_volume(&mut m, target, cfg))
        } else if it > 0 && cfg.tidy_every > 0 && it % cfg.tidy_every == 0 && tidies_left > 0 && needs_tidy(&m) {
            tidies_left -= 1;
            Some(tidy(&mut m, target, cfg))
        } else {
            None
        };
        if let Some(r) = remesh_result {
            if let Err(e) = r {
                (status, reason) = degenerate(format!("volume lost after remeshing: {e}"));
                break;
            }
            area = functionals::area(&m, cfg.rule);
            s = initial_step(&m, cfg.rule);
            level_start = trace.len();
            remeshed = true;
        }
        let stalled_step;
        match constrained_step(&m, s, cfg.relax_clear, cfg) {
            Ok((next, a, s_next)) => {
                m = next;
                area = a;
                s = s_next;
                stalled_step = false;
            }
            Err(Error::StepFailure(_)) => stalled_step = true,
            Err(e) => return Err(e),
        }
        it += 1;
        if !stalled_step {
            trace.push(TracePoint {
                iteration: it,
                area,
                volume: functionals::volume(&m, cfg.rule),
                area_per_facet: m.area_per_facet(area),
                remeshed: std::mem::take(&mut remeshed),
            });
        }
        if cfg.snapshot_every > 0 && it % cfg.snapshot_every == 0 {
            if let Some(dir) = &cfg.snapshot_dir {
                let file = std::fs::File::create(dir.join(format!("iter_{it:06}.off")))?;
                write_off(&m, std::io::BufWriter::new(file))?;
            }
        }
        if it % cfg.degeneracy_every == 0 || stalled_step {
            let rep = degeneracy_report(&m);
            if rep.is_degenerate() {
                (status, reason) = degenerate(format!(
                    "collapse: min edge {:.3e}, min vertex link {:.3e}",
                    rep.min_edge, rep.min_link
                ));
                break;
            }
            if outside_cell(&m) {
                (status, reason) = degenerate("surface left the cell".into());
                break;
            }
            if touches_wall(&m) {
                (status, reason) = degenerate("surface lies on a wall of the cell".into());
                break;
            }
        }
        let level_len = trace.len() - level_start;
        let stalled = stalled_step
            || (level_len > cfg.window && {
                let old = trace[trace.len() - 1 - cfg.window].area;
                old - area <= cfg.window_threshold * area.abs()
            });
        if !stalled {
            continue;
        }
        if !just_tidied && needs_tidy(&m) {
            if let Err(e) = tidy(&mut m, target, cfg) {
                (status, reason) = degenerate(format!("volume lost after remeshing: {e}"));
                break;
            }
            area = functionals::area(&m, cfg.rule);
            s = initial_step(&m, cfg.rule);
            level_start = trace.len();
            remeshed = true;
            just_tidied = true;
            continue;
        }
        let wants_refine = match &cfg.refine {
            RefineSchedule::AreaPerFacet(t) => {
                m.area_per_facet(area) > *t || m.area_facet_count() < cfg.min_facets
            }
            RefineSchedule::AtIterations(list) => list.iter().any(|&l| l > it),
        };
        if !wants_refine {
            status = Status::Converged;
            break;
        }
        if matches!(cfg.refine, RefineSchedule::AreaPerFacet(_)) && m.facet_count() * 4 <= cfg.max_facets {
            refine_and_tidy(&mut m);
            tidies_left = TIDIES_PER_LEVEL;
            if let Err(e) = restore_volume(&mut m, target, cfg) {
                (status, reason) = degenerate(format!("volume lost after refinement: {e}"));
                break;
            }
            area = functionals::area(&m, cfg.rule);
            s = initial_step(&m, cfg.rule);
            level_start = trace.len();
            remeshed = true;
            just_tidied = false;
        } else if stalled_step {
            status = Status::Converged;
            break;
        }
    }
    let volume = functionals::volume(&m, cfg.rule);
    if status == Status::Converged && (volume - target).abs() > cfg.volume_tolerance {
        status = Status::MaxIter;
    }
    let orthogonality_deficit = orthogonality_check(&m);
    if status == Status::Converged && orthogonality_deficit > JAMMED_CONTACT {
        status = Status::Degenerate;
        reason = Some(format!("boundary jammed in a corner: contact angle off by {orthogonality_deficit:.3} rad"));
    }
    Ok(EvolveResult { area, volume, iterations: it, status, orthogonality_deficit, trace, reason, mesh: m })
}

/// Checkpoint CSV: iteration, area, volume, A/F, status.
pub fn write_trace_csv<W: Write>(result: &EvolveResult, mut w: W) -> Result<()> {
    writeln!(w, "iteration,area,volume,area_per_facet,status")?;
    let last = result.trace.len().saturating_sub(1);
    for (i, p) in result.trace.iter().enumerate() {
        let status = if i == last { result.status.as_str() } else { "RUNNING" };
        writeln!(w, "{},{:.12},{:.12},{:.6e},{}", p.iteration, p.area, p.volume, p.area_per_facet, status)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_over_defaults() {
        let cfg = EvolveConfig::parse(
            "# sweep settings\nmax_iterations = 500\nstep = fixed:0.01  # small\nrefine = at:10, 20\nrule = degree4\n\n",
        )
        .unwrap();
        assert_eq!(cfg.max_iterations, 500);
        assert_eq!(cfg.step_policy, StepPolicy::Fixed(0.01));
        assert_eq!(cfg.refine, RefineSchedule::AtIterations(vec![10, 20]));
        assert_eq!(cfg.rule, QuadratureRule::Degree4);
        assert_eq!(cfg.window, EvolveConfig::default().window);
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        assert!(matches!(EvolveConfig::parse("a = 1\nfoo = 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(EvolveConfig::parse("window = -3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(EvolveConfig::parse("\nrefine = sometimes"), Err(Error::Parse { line: 2, .. })));
        assert!(EvolveConfig::parse("volume_tolerance = 0").is_err());
    }
}
