//! Procedural watertight meshes: icospheres, cuboids and capped tubes.

use super::TriMesh;
use std::collections::HashMap;

/// Icosphere with `10*4^subdiv + 2` vertices (subdiv 3 gives 642), outward
/// winding, centered at the origin.
pub fn icosphere(radius: f64, subdiv: usize) -> TriMesh {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdiv {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for (k, (a, b)) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])].into_iter().enumerate() {
                let key = (a.min(b), a.max(b));
                mid[k] = *midpoint.entry(key).or_insert_with(|| {
                    let m = [
                        (verts[a][0] + verts[b][0]) / 2.0,
                        (verts[a][1] + verts[b][1]) / 2.0,
                        (verts[a][2] + verts[b][2]) / 2.0,
                    ];
                    verts.push(m);
                    verts.len() - 1
                });
            }
            new_faces.push([f[0], mid[0], mid[2]]);
            new_faces.push([f[1], mid[1], mid[0]]);
            new_faces.push([f[2], mid[2], mid[1]]);
            new_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = new_faces;
    }
    for v in &mut verts {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        for c in v.iter_mut() {
            *c = *c / n * radius;
        }
    }
    TriMesh::new(verts, faces).expect("icosphere construction is valid")
}

/// Axis-aligned cuboid spanning [lo, hi], outward winding.
pub fn cuboid(lo: [f64; 3], hi: [f64; 3]) -> TriMesh {
    let v = vec![
        [lo[0], lo[1], lo[2]],
        [hi[0], lo[1], lo[2]],
        [hi[0], hi[1], lo[2]],
        [lo[0], hi[1], lo[2]],
        [lo[0], lo[1], hi[2]],
        [hi[0], lo[1], hi[2]],
        [hi[0], hi[1], hi[2]],
        [lo[0], hi[1], hi[2]],
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2], // z = lo (normal -z)
        [4, 5, 6],
        [4, 6, 7], // z = hi (+z)
        [0, 1, 5],
        [0, 5, 4], // y = lo (-y)
        [3, 6, 2],
        [3, 7, 6], // y = hi (+y)
        [0, 4, 7],
        [0, 7, 3], // x = lo (-x)
        [1, 2, 6],
        [1, 6, 5], // x = hi (+x)
    ];
    TriMesh::new(v, faces).expect("cuboid construction is valid")
}

/// Closed tube between `p0` and `p1`: `rings` cross-section rings of
/// `radial` vertices each, plus two apex cap vertices. Vertex count is
/// `rings * radial + 2`. Returns (mesh, ring parameter in [0,1] per vertex).
pub fn capped_tube(
    p0: [f64; 3],
    p1: [f64; 3],
    radius: f64,
    rings: usize,
    radial: usize,
) -> (TriMesh, Vec<f64>) {
    assert!(rings >= 2 && radial >= 3);
    let axis = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
    let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let a = [axis[0] / len, axis[1] / len, axis[2] / len];
    // Any stable frame orthogonal to a.
    let helper = if a[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = super::tri::cross(a, helper);
    let un = super::tri::norm2(u).sqrt();
    let u = [u[0] / un, u[1] / un, u[2] / un];
    let w = super::tri::cross(a, u);

    let mut verts = Vec::with_capacity(rings * radial + 2);
    let mut tparam = Vec::with_capacity(rings * radial + 2);
    for r in 0..rings {
        let t = r as f64 / (rings - 1) as f64;
        let center = [
            p0[0] + axis[0] * t,
            p0[1] + axis[1] * t,
            p0[2] + axis[2] * t,
        ];
        for s in 0..radial {
            let ang = 2.0 * std::f64::consts::PI * s as f64 / radial as f64;
            let (cs, sn) = (ang.cos(), ang.sin());
            verts.push([
                center[0] + radius * (cs * u[0] + sn * w[0]),
                center[1] + radius * (cs * u[1] + sn * w[1]),
                center[2] + radius * (cs * u[2] + sn * w[2]),
            ]);
            tparam.push(t);
        }
    }
    let cap0 = verts.len();
    verts.push([p0[0] - a[0] * radius, p0[1] - a[1] * radius, p0[2] - a[2] * radius]);
    tparam.push(0.0);
    let cap1 = verts.len();
    verts.push([p1[0] + a[0] * radius, p1[1] + a[1] * radius, p1[2] + a[2] * radius]);
    tparam.push(1.0);

    let mut faces = Vec::new();
    for r in 0..rings - 1 {
        for s in 0..radial {
            let s1 = (s + 1) % radial;
            let i00 = r * radial + s;
            let i01 = r * radial + s1;
            let i10 = (r + 1) * radial + s;
            let i11 = (r + 1) * radial + s1;
            faces.push([i00, i01, i11]);
            faces.push([i00, i11, i10]);
        }
    }
    for s in 0..radial {
        let s1 = (s + 1) % radial;
        faces.push([cap0, s1, s]);
        faces.push([cap1, (rings - 1) * radial + s, (rings - 1) * radial + s1]);
    }
    (
        TriMesh::new(verts, faces).expect("tube construction is valid"),
        tparam,
    )
}
