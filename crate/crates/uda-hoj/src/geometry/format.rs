//! Minimal ASCII mesh interchange format.
//!
//! Header line `HOM1 <nv> <nf>`, then `nv` lines `v x y z` (mm) and `nf`
//! lines `f i j k` (zero-based). Round-trips bit-exactly: floats are written
//! in shortest form that parses back to the identical f64.

use super::{GeometryError, TriMesh};
use std::fmt::Write as _;

/// Hard cap on declared counts so hostile headers cannot drive allocation.
const MAX_COUNT: usize = 16_777_216;

pub fn write_mesh(mesh: &TriMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "HOM1 {} {}", mesh.vertices.len(), mesh.faces.len());
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0], f[1], f[2]);
    }
    out
}

pub fn parse_mesh(text: &str) -> Result<TriMesh, GeometryError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| GeometryError::Format("empty input".into()))?;
    let mut parts = header.split_ascii_whitespace();
    if parts.next() != Some("HOM1") {
        return Err(GeometryError::Format("missing HOM1 magic".into()));
    }
    let nv: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| GeometryError::Format("bad vertex count".into()))?;
    let nf: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| GeometryError::Format("bad face count".into()))?;
    if parts.next().is_some() {
        return Err(GeometryError::Format("trailing tokens in header".into()));
    }
    if nv > MAX_COUNT || nf > MAX_COUNT {
        return Err(GeometryError::Format("count exceeds limit".into()));
    }
    let mut vertices = Vec::new();
    for i in 0..nv {
        let line = lines
            .next()
            .ok_or_else(|| GeometryError::Format(format!("missing vertex line {i}")))?;
        let mut p = line.split_ascii_whitespace();
        if p.next() != Some("v") {
            return Err(GeometryError::Format(format!("vertex line {i} must start with 'v'")));
        }
        let mut v = [0.0f64; 3];
        for c in &mut v {
            *c = p
                .next()
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| GeometryError::Format(format!("bad coordinate on vertex {i}")))?;
        }
        if p.next().is_some() {
            return Err(GeometryError::Format(format!("trailing tokens on vertex {i}")));
        }
        vertices.push(v);
    }
    let mut faces = Vec::new();
    for i in 0..nf {
        let line = lines
            .next()
            .ok_or_else(|| GeometryError::Format(format!("missing face line {i}")))?;
        let mut p = line.split_ascii_whitespace();
        if p.next() != Some("f") {
            return Err(GeometryError::Format(format!("face line {i} must start with 'f'")));
        }
        let mut f = [0usize; 3];
        for c in &mut f {
            *c = p
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| GeometryError::Format(format!("bad index on face {i}")))?;
        }
        if p.next().is_some() {
            return Err(GeometryError::Format(format!("trailing tokens on face {i}")));
        }
        faces.push(f);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(GeometryError::Format("trailing data after faces".into()));
    }
    TriMesh::new(vertices, faces)
}
