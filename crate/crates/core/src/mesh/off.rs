//! OFF import and export. Vertex lines may carry a trailing comment listing
//! constraint labels (`# P1 F3`); facet lines may end in `# clear`. A
//! `# target_volume <v>` comment records the prescribed volume.

use std::io::{BufRead, Write};

use super::{Constraint, ConstraintSet, Facet, SurfaceMesh, Vertex};
use crate::error::{Error, Result};
use crate::Vec3;

pub fn write_off<W: Write>(mesh: &SurfaceMesh, mut w: W) -> Result<()> {
    writeln!(w, "OFF")?;
    if let Some(t) = mesh.target_volume {
        writeln!(w, "# target_volume {t:.17e}")?;
    }
    writeln!(w, "{} {} 0", mesh.vertices.len(), mesh.facets.len())?;
    for v in &mesh.vertices {
        let p = v.pos;
        if v.constraints.is_empty() {
            writeln!(w, "{:.17e} {:.17e} {:.17e}", p.x, p.y, p.z)?;
        } else {
            writeln!(w, "{:.17e} {:.17e} {:.17e} # {}", p.x, p.y, p.z, v.constraints)?;
        }
    }
    for f in &mesh.facets {
        let [a, b, c] = f.v;
        if f.clear {
            writeln!(w, "3 {a} {b} {c} # clear")?;
        } else {
            writeln!(w, "3 {a} {b} {c}")?;
        }
    }
    Ok(())
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn read_off<R: BufRead>(r: R) -> Result<SurfaceMesh> {
    let mut target = None;
    let mut lines = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b.trim().to_string(), Some(c.trim().to_string())),
            None => (line.trim().to_string(), None),
        };
        if body.is_empty() {
            if let Some(rest) = comment.as_deref().and_then(|c| c.strip_prefix("target_volume")) {
                target = Some(rest.trim().parse::<f64>().map_err(|e| perr(i + 1, e.to_string()))?);
            }
            continue;
        }
        lines.push((i + 1, body, comment));
    }
    let mut it = lines.into_iter();
    let (ln, head, _) = it.next().ok_or_else(|| perr(0, "empty file"))?;
    if head != "OFF" {
        return Err(perr(ln, "missing OFF header"));
    }
    let (ln, counts, _) = it.next().ok_or_else(|| perr(ln, "missing counts"))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| perr(ln, e.to_string())))
        .collect::<Result<_>>()?;
    if counts.len() < 2 {
        return Err(perr(ln, "expected vertex and facet counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, body, comment) = it.next().ok_or_else(|| perr(0, "truncated vertex list"))?;
        let xs: Vec<f64> = body
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| perr(ln, e.to_string())))
            .collect::<Result<_>>()?;
        if xs.len() != 3 {
            return Err(perr(ln, "vertex needs three coordinates"));
        }
        let mut cons = ConstraintSet::EMPTY;
        for label in comment.iter().flat_map(|c| c.split_whitespace()) {
            cons.insert(Constraint::parse(label).ok_or_else(|| perr(ln, format!("unknown constraint {label}")))?);
        }
        vertices.push(Vertex::new(Vec3::new(xs[0], xs[1], xs[2]), cons));
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, body, comment) = it.next().ok_or_else(|| perr(0, "truncated facet list"))?;
        let xs: Vec<usize> = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| perr(ln, e.to_string())))
            .collect::<Result<_>>()?;
        if xs.len() != 4 || xs[0] != 3 {
            return Err(perr(ln, "only triangular facets are supported"));
        }
        if xs[1..].iter().any(|&i| i >= nv) {
            return Err(perr(ln, "facet index out of range"));
        }
        let clear = comment.as_deref() == Some("clear");
        facets.push(Facet { v: [xs[1], xs[2], xs[3]], clear });
    }
    let mut mesh = SurfaceMesh::new(vertices, facets);
    mesh.target_volume = target;
    Ok(mesh)
}
