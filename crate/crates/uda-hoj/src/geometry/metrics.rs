//! Chamfer distance, signed distance, penetration depth and intersection
//! volume.

use super::bvh::{ClosestHit, TriBvh};
use super::kdtree::KdTree3;
use super::{GeometryError, TriMesh, VoxelGrid};

/// Symmetric Chamfer distance in mm²: sum of the two directional means of
/// squared nearest-neighbor distances.
pub fn chamfer_distance(a: &[[f64; 3]], b: &[[f64; 3]]) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    for p in a.iter().chain(b.iter()) {
        if !p.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
    }
    let ta = KdTree3::build(a);
    let tb = KdTree3::build(b);
    let ab: f64 = a.iter().map(|&p| tb.nearest_dist2(p)).sum::<f64>() / a.len() as f64;
    let ba: f64 = b.iter().map(|&p| ta.nearest_dist2(p)).sum::<f64>() / b.len() as f64;
    Ok(ab + ba)
}

/// Fixed jittered ray directions for the parity containment test. Three
/// directions, majority vote; irrational-ish components avoid grazing
/// axis-aligned geometry.
const PARITY_DIRS: [[f64; 3]; 3] = [
    [0.577_215_664_9, 0.618_033_988_7, 0.533_905_932_7],
    [-0.414_213_562_4, 0.693_147_180_6, 0.577_350_269_2],
    [0.301_029_995_7, -0.434_294_481_9, 0.847_213_084_7],
];

/// Watertight-mesh signed distance queries (negative inside). Precomputes a
/// BVH; construction fails on non-watertight input.
pub struct SignedDistanceField {
    bvh: TriBvh,
}

impl SignedDistanceField {
    pub fn new(mesh: &TriMesh) -> Result<Self, GeometryError> {
        if !mesh.is_watertight() {
            return Err(GeometryError::NotWatertight);
        }
        Ok(Self {
            bvh: TriBvh::build(mesh),
        })
    }

    /// Winding-number parity via ray casting with 3 jittered ray directions,
    /// majority vote.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        let mut inside_votes = 0;
        for dir in PARITY_DIRS {
            if self.bvh.ray_crossings(p, dir) % 2 == 1 {
                inside_votes += 1;
            }
        }
        inside_votes >= 2
    }

    pub fn closest(&self, p: [f64; 3]) -> ClosestHit {
        self.bvh.closest_point(p)
    }

    /// Signed distance in mm, negative inside.
    pub fn signed_distance(&self, p: [f64; 3]) -> f64 {
        let d = self.bvh.closest_point(p).distance;
        if d == 0.0 {
            0.0
        } else if self.contains(p) {
            -d
        } else {
            d
        }
    }
}

/// Signed distance from `p` to the surface of a watertight mesh (negative
/// inside). One-shot convenience over [`SignedDistanceField`].
pub fn signed_distance(mesh: &TriMesh, p: [f64; 3]) -> Result<f64, GeometryError> {
    Ok(SignedDistanceField::new(mesh)?.signed_distance(p))
}

/// Maximum distance-to-surface over hand vertices inside the object; 0 when
/// no hand vertex is inside.
pub fn penetration_depth(hand: &TriMesh, obj: &TriMesh) -> Result<f64, GeometryError> {
    let sdf = SignedDistanceField::new(obj)?;
    // Vertices outside the object's AABB cannot be inside it.
    let (lo, hi) = obj.aabb();
    let mut depth: f64 = 0.0;
    for &v in &hand.vertices {
        if (0..3).any(|k| v[k] < lo[k] || v[k] > hi[k]) {
            continue;
        }
        let d = sdf.signed_distance(v);
        if d < 0.0 {
            depth = depth.max(-d);
        }
    }
    Ok(depth)
}

/// Voxel-counted overlap volume in cm³ at the given voxel edge (mm).
/// Voxel centers decide occupancy; the lattice origin is snapped to a
/// multiple of `voxel_mm`.
pub fn intersection_volume(
    hand: &TriMesh,
    obj: &TriMesh,
    voxel_mm: f64,
) -> Result<f64, GeometryError> {
    if voxel_mm <= 0.0 {
        return Err(GeometryError::InvalidVoxelSize(voxel_mm));
    }
    // Only the overlap of the two AABBs can contain doubly-occupied voxels.
    let (alo, ahi) = hand.aabb();
    let (blo, bhi) = obj.aabb();
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for k in 0..3 {
        lo[k] = alo[k].max(blo[k]);
        hi[k] = ahi[k].min(bhi[k]);
        if lo[k] > hi[k] {
            return Ok(0.0);
        }
    }
    let sdf_h = SignedDistanceField::new(hand)?;
    let sdf_o = SignedDistanceField::new(obj)?;
    let mut origin = [0.0; 3];
    let mut dims = [0usize; 3];
    for k in 0..3 {
        origin[k] = (lo[k] / voxel_mm).floor() * voxel_mm;
        dims[k] = (((hi[k] - origin[k]) / voxel_mm).ceil() as usize).max(1);
    }
    let mut count = 0usize;
    for ix in 0..dims[0] {
        for iy in 0..dims[1] {
            for iz in 0..dims[2] {
                let c = [
                    origin[0] + (ix as f64 + 0.5) * voxel_mm,
                    origin[1] + (iy as f64 + 0.5) * voxel_mm,
                    origin[2] + (iz as f64 + 0.5) * voxel_mm,
                ];
                if sdf_h.contains(c) && sdf_o.contains(c) {
                    count += 1;
                }
            }
        }
    }
    Ok(count as f64 * voxel_mm.powi(3) / 1000.0)
}

/// Occupancy grid of one mesh over the union lattice of several meshes.
pub fn voxelize(
    mesh: &TriMesh,
    others: &[&TriMesh],
    voxel_mm: f64,
) -> Result<VoxelGrid, GeometryError> {
    let mut all: Vec<&TriMesh> = vec![mesh];
    all.extend_from_slice(others);
    let (origin, dims) = VoxelGrid::lattice_for(&all, voxel_mm)?;
    VoxelGrid::from_mesh_on_lattice(mesh, voxel_mm, origin, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::primitives::{cuboid, icosphere};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_points(n: usize, seed: u64, scale: f64) -> Vec<[f64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                [
                    rng.gen::<f64>() * scale,
                    rng.gen::<f64>() * scale,
                    rng.gen::<f64>() * scale,
                ]
            })
            .collect()
    }

    fn chamfer_brute(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
        let d2 = |p: [f64; 3], q: [f64; 3]| {
            (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)
        };
        let ab: f64 = a
            .iter()
            .map(|&p| b.iter().map(|&q| d2(p, q)).fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / a.len() as f64;
        let ba: f64 = b
            .iter()
            .map(|&q| a.iter().map(|&p| d2(p, q)).fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / b.len() as f64;
        ab + ba
    }

    #[test]
    fn chamfer_identity_is_zero() {
        let a = rand_points(17, 5, 10.0);
        assert_eq!(chamfer_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn chamfer_singletons() {
        let a = [[0.0, 0.0, 0.0]];
        let b = [[3.0, 0.0, 0.0]];
        assert!((chamfer_distance(&a, &b).unwrap() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn chamfer_matches_brute_force_seed7() {
        let a = rand_points(32, 7, 20.0);
        let b = rand_points(32, 707, 20.0);
        let fast = chamfer_distance(&a, &b).unwrap();
        let brute = chamfer_brute(&a, &b);
        assert_eq!(fast, brute);
    }

    #[test]
    fn chamfer_empty_rejected() {
        let a: Vec<[f64; 3]> = vec![];
        let b = rand_points(4, 1, 1.0);
        assert!(matches!(
            chamfer_distance(&a, &b),
            Err(GeometryError::EmptyPointSet)
        ));
    }

    #[test]
    fn sdf_sphere_interior_point() {
        let m = icosphere(10.0, 3);
        let d = signed_distance(&m, [0.0, 0.0, 4.0]).unwrap();
        // Discretization makes the surface slightly inside radius 10.
        assert!(
            (d + 6.0).abs() < 0.05,
            "expected about -6mm, got {d}"
        );
    }

    #[test]
    fn sdf_on_vertex_is_zero() {
        let m = icosphere(10.0, 2);
        let v = m.vertices[17];
        assert_eq!(signed_distance(&m, v).unwrap(), 0.0);
    }

    #[test]
    fn sdf_dense_sampling_oracle() {
        // |unsigned distance| must be within 2*max edge of the distance to a
        // dense sample of the surface.
        let m = icosphere(10.0, 2);
        let max_edge = m.max_edge_length();
        let sdf = SignedDistanceField::new(&m).unwrap();
        // Dense surface samples: barycentric grid per face.
        let mut samples = Vec::new();
        for f in &m.faces {
            let (a, b, c) = (m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]);
            for i in 0..4 {
                for j in 0..4 - i {
                    let u = i as f64 / 3.0;
                    let v = j as f64 / 3.0;
                    let w = 1.0 - u - v;
                    samples.push([
                        a[0] * w + b[0] * u + c[0] * v,
                        a[1] * w + b[1] * u + c[1] * v,
                        a[2] * w + b[2] * u + c[2] * v,
                    ]);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let p = [
                rng.gen::<f64>() * 30.0 - 15.0,
                rng.gen::<f64>() * 30.0 - 15.0,
                rng.gen::<f64>() * 30.0 - 15.0,
            ];
            let d = sdf.signed_distance(p).abs();
            let oracle = samples
                .iter()
                .map(|s| {
                    ((p[0] - s[0]).powi(2) + (p[1] - s[1]).powi(2) + (p[2] - s[2]).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(
                (d - oracle).abs() < 2.0 * max_edge,
                "sdf {d} vs sampling oracle {oracle}"
            );
        }
    }

    #[test]
    fn sdf_requires_watertight() {
        let mut m = icosphere(5.0, 1);
        m.faces.pop();
        assert!(matches!(
            signed_distance(&m, [0.0; 3]),
            Err(GeometryError::NotWatertight)
        ));
    }

    #[test]
    fn penetration_outside_is_zero() {
        let hand = icosphere(5.0, 1).translated([30.0, 0.0, 0.0]);
        let obj = icosphere(10.0, 2);
        assert_eq!(penetration_depth(&hand, &obj).unwrap(), 0.0);
    }

    #[test]
    fn penetration_sphere_vertex() {
        // One "hand" vertex at (0,0,4) inside a radius-10 sphere.
        let mut hand = icosphere(1.0, 1).translated([40.0, 0.0, 0.0]);
        hand.vertices[0] = [0.0, 0.0, 4.0];
        let obj = icosphere(10.0, 3);
        let d = penetration_depth(&hand, &obj).unwrap();
        assert!((d - 6.0).abs() < 0.05, "expected about 6mm, got {d}");
    }

    #[test]
    fn penetration_matches_per_vertex_sdf_oracle_seed3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obj = icosphere(12.0, 2);
        let hand = {
            let mut m = icosphere(8.0, 2);
            let shift = [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 6.0, rng.gen::<f64>() * 4.0];
            m = m.translated(shift);
            m
        };
        let fast = penetration_depth(&hand, &obj).unwrap();
        let sdf = SignedDistanceField::new(&obj).unwrap();
        let oracle = hand
            .vertices
            .iter()
            .map(|&v| -sdf.signed_distance(v))
            .fold(0.0f64, f64::max);
        assert_eq!(fast, oracle);
    }

    #[test]
    fn intersection_disjoint_is_zero() {
        let a = icosphere(5.0, 1);
        let b = icosphere(5.0, 1).translated([50.0, 0.0, 0.0]);
        assert_eq!(intersection_volume(&a, &b, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn intersection_aligned_cubes_exact() {
        // Two 10mm cubes overlapping in a 5x10x10 mm slab on a grid-aligned
        // lattice: exactly 0.5 cm³.
        let a = cuboid([0.0, 0.0, 0.0], [10.0, 10.0, 10.0]);
        let b = cuboid([5.0, 0.0, 0.0], [15.0, 10.0, 10.0]);
        let v = intersection_volume(&a, &b, 5.0).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn intersection_spheres_vs_monte_carlo() {
        let a = icosphere(10.0, 3);
        let b = icosphere(10.0, 3).translated([8.0, 0.0, 0.0]);
        let est = intersection_volume(&a, &b, 2.5).unwrap();
        let mc = monte_carlo_intersection(&a, &b, 1_000_000, 99);
        assert!(
            (est - mc).abs() / mc < 0.10,
            "voxel {est} cm³ vs MC {mc} cm³"
        );
    }

    fn monte_carlo_intersection(a: &TriMesh, b: &TriMesh, n: usize, seed: u64) -> f64 {
        let sa = SignedDistanceField::new(a).unwrap();
        let sb = SignedDistanceField::new(b).unwrap();
        let (alo, ahi) = a.aabb();
        let (blo, bhi) = b.aabb();
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for k in 0..3 {
            lo[k] = alo[k].max(blo[k]);
            hi[k] = ahi[k].min(bhi[k]);
        }
        let vol_box: f64 = (0..3).map(|k| hi[k] - lo[k]).product();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut count = 0usize;
        for _ in 0..n {
            let p = [
                lo[0] + rng.gen::<f64>() * (hi[0] - lo[0]),
                lo[1] + rng.gen::<f64>() * (hi[1] - lo[1]),
                lo[2] + rng.gen::<f64>() * (hi[2] - lo[2]),
            ];
            if sa.contains(p) && sb.contains(p) {
                count += 1;
            }
        }
        vol_box * count as f64 / n as f64 / 1000.0
    }

    #[test]
    fn volume_refinement_toward_monte_carlo() {
        let a = icosphere(10.0, 2);
        let b = icosphere(10.0, 2).translated([9.0, 0.0, 0.0]);
        let mc = monte_carlo_intersection(&a, &b, 400_000, 42);
        let mut prev_err = f64::INFINITY;
        for voxel in [8.0, 4.0, 2.0] {
            let est = intersection_volume(&a, &b, voxel).unwrap();
            let err = (est - mc).abs();
            assert!(
                err <= prev_err + 1e-12,
                "refinement must not increase error: {err} after {prev_err} at voxel {voxel}"
            );
            prev_err = err;
        }
    }

    #[test]
    fn camera_projection_trivials() {
        let cam = crate::geometry::Camera::new(60.0, 60.0, 16.0, 16.0, 32, 32).unwrap();
        let p = cam.project(&[[0.0, 0.0, 123.0]]).unwrap();
        assert_eq!(p[0], [16.0, 16.0]);
        let p = cam.project(&[[10.0, 0.0, 100.0]]).unwrap();
        assert!((p[0][0] - (60.0 * 10.0 / 100.0 + 16.0)).abs() < 1e-12);
        assert_eq!(p[0][1], 16.0);
        assert!(matches!(
            cam.project(&[[0.0, 0.0, -1.0]]),
            Err(GeometryError::NonPositiveDepth(_))
        ));
    }
}
