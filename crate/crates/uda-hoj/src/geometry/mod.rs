//! Pure geometric kernels used by losses and metrics: distances, signed
//! distance, voxelization, projection.
//!
//! All geometry is in millimeters internally; cubic centimeters appear only
//! at the [`intersection_volume`] boundary. Every operation here is a pure
//! function over immutable inputs and safe to call concurrently.

mod bvh;
pub mod diff;
pub mod format;
mod kdtree;
mod metrics;
pub mod primitives;
mod tri;

pub use bvh::TriBvh;
pub use kdtree::KdTree3;
pub use metrics::{
    chamfer_distance, intersection_volume, penetration_depth, signed_distance, SignedDistanceField,
};
pub use tri::closest_point_on_triangle;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("point set must be non-empty")]
    EmptyPointSet,
    #[error("non-finite coordinate encountered")]
    NonFinite,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("mesh is not watertight; containment is undefined")]
    NotWatertight,
    #[error("point has non-positive depth z={0}")]
    NonPositiveDepth(f64),
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("voxel edge must be positive, got {0}")]
    InvalidVoxelSize(f64),
    #[error("mesh format error: {0}")]
    Format(String),
}

/// Triangle mesh in millimeters, camera frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    /// Per-vertex correspondence id, when the mesh tracks a template.
    pub correspondence: Option<Vec<u32>>,
}

impl TriMesh {
    /// Builds a mesh and checks the structural invariants: all face indices
    /// in range, no degenerate face, finite coordinates.
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self, GeometryError> {
        for v in &vertices {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(GeometryError::NonFinite);
            }
        }
        let nv = vertices.len();
        for (i, f) in faces.iter().enumerate() {
            if f.iter().any(|&k| k >= nv) {
                return Err(GeometryError::InvalidMesh(format!(
                    "face {i} references vertex out of range (nv={nv})"
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(GeometryError::InvalidMesh(format!("face {i} is degenerate")));
            }
        }
        Ok(Self {
            vertices,
            faces,
            correspondence: None,
        })
    }

    pub fn with_correspondence(mut self, ids: Vec<u32>) -> Result<Self, GeometryError> {
        if ids.len() != self.vertices.len() {
            return Err(GeometryError::InvalidMesh(
                "correspondence length must match vertex count".into(),
            ));
        }
        self.correspondence = Some(ids);
        Ok(self)
    }

    pub fn aabb(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Every undirected edge must be shared by exactly two faces with
    /// opposite orientation.
    pub fn is_watertight(&self) -> bool {
        use std::collections::HashMap;
        let mut dir: HashMap<(usize, usize), i64> = HashMap::new();
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *dir.entry((a, b)).or_insert(0) += 1;
            }
        }
        for (&(a, b), &n) in &dir {
            if n != 1 {
                return false;
            }
            if dir.get(&(b, a)).copied().unwrap_or(0) != 1 {
                return false;
            }
        }
        true
    }

    pub fn translated(&self, t: [f64; 3]) -> TriMesh {
        TriMesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| [v[0] + t[0], v[1] + t[1], v[2] + t[2]])
                .collect(),
            faces: self.faces.clone(),
            correspondence: self.correspondence.clone(),
        }
    }

    pub fn max_edge_length(&self) -> f64 {
        let mut m: f64 = 0.0;
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let va = self.vertices[a];
                let vb = self.vertices[b];
                let d = ((va[0] - vb[0]).powi(2) + (va[1] - vb[1]).powi(2)
                    + (va[2] - vb[2]).powi(2))
                .sqrt();
                m = m.max(d);
            }
        }
        m
    }
}

/// Pinhole camera: focal lengths and principal point in pixels.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Camera {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl Camera {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: usize,
        height: usize,
    ) -> Result<Self, GeometryError> {
        if fx <= 0.0 || fy <= 0.0 {
            return Err(GeometryError::InvalidCamera(format!(
                "focal must be positive, got fx={fx} fy={fy}"
            )));
        }
        if cx < 0.0 || cx >= width as f64 || cy < 0.0 || cy >= height as f64 {
            return Err(GeometryError::InvalidCamera(format!(
                "principal point ({cx},{cy}) outside {width}x{height} image"
            )));
        }
        Ok(Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        })
    }

    /// Pinhole projection of camera-frame points. Fails on non-positive depth.
    pub fn project(&self, points: &[[f64; 3]]) -> Result<Vec<[f64; 2]>, GeometryError> {
        points
            .iter()
            .map(|p| {
                if p[2] <= 0.0 {
                    return Err(GeometryError::NonPositiveDepth(p[2]));
                }
                Ok(self.project_one(*p))
            })
            .collect()
    }

    #[inline]
    pub fn project_one(&self, p: [f64; 3]) -> [f64; 2] {
        [
            self.fx * p[0] / p[2] + self.cx,
            self.fy * p[1] / p[2] + self.cy,
        ]
    }

    /// 2x3 Jacobian of the projection of one point.
    pub fn projection_jacobian(&self, p: [f64; 3]) -> [[f64; 3]; 2] {
        let z = p[2];
        [
            [self.fx / z, 0.0, -self.fx * p[0] / (z * z)],
            [0.0, self.fy / z, -self.fy * p[1] / (z * z)],
        ]
    }
}

/// Occupancy of mesh interiors on a regular lattice. The lattice origin is
/// snapped to a multiple of the voxel edge and the bounds cover the meshes
/// handed to [`VoxelGrid::from_meshes`].
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    pub origin: [f64; 3],
    pub edge: f64,
    pub dims: [usize; 3],
    pub occupied: Vec<bool>,
}

impl VoxelGrid {
    /// Lattice covering the union of the AABBs, origin snapped down to a
    /// multiple of `edge`.
    pub fn lattice_for(
        meshes: &[&TriMesh],
        edge: f64,
    ) -> Result<([f64; 3], [usize; 3]), GeometryError> {
        if edge <= 0.0 {
            return Err(GeometryError::InvalidVoxelSize(edge));
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for m in meshes {
            let (l, h) = m.aabb();
            for k in 0..3 {
                lo[k] = lo[k].min(l[k]);
                hi[k] = hi[k].max(h[k]);
            }
        }
        let mut origin = [0.0; 3];
        let mut dims = [0; 3];
        for k in 0..3 {
            origin[k] = (lo[k] / edge).floor() * edge;
            dims[k] = (((hi[k] - origin[k]) / edge).ceil() as usize).max(1);
        }
        Ok((origin, dims))
    }

    /// Occupancy of `mesh`'s interior sampled at voxel centers over the
    /// given lattice.
    pub fn from_mesh_on_lattice(
        mesh: &TriMesh,
        edge: f64,
        origin: [f64; 3],
        dims: [usize; 3],
    ) -> Result<Self, GeometryError> {
        let sdf = SignedDistanceField::new(mesh)?;
        let mut occupied = vec![false; dims[0] * dims[1] * dims[2]];
        for ix in 0..dims[0] {
            for iy in 0..dims[1] {
                for iz in 0..dims[2] {
                    let c = [
                        origin[0] + (ix as f64 + 0.5) * edge,
                        origin[1] + (iy as f64 + 0.5) * edge,
                        origin[2] + (iz as f64 + 0.5) * edge,
                    ];
                    if sdf.contains(c) {
                        occupied[(ix * dims[1] + iy) * dims[2] + iz] = true;
                    }
                }
            }
        }
        Ok(Self {
            origin,
            edge,
            dims,
            occupied,
        })
    }

    pub fn count_occupied(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }
}
