//! Median-split bounding volume hierarchy over triangles, for closest-point
//! and ray-crossing queries.

use super::tri::{self, ray_triangle};
use super::TriMesh;

#[derive(Debug, Clone, Copy)]
struct Aabb {
    lo: [f64; 3],
    hi: [f64; 3],
}

impl Aabb {
    fn empty() -> Self {
        Self {
            lo: [f64::INFINITY; 3],
            hi: [f64::NEG_INFINITY; 3],
        }
    }

    fn grow(&mut self, p: [f64; 3]) {
        for k in 0..3 {
            self.lo[k] = self.lo[k].min(p[k]);
            self.hi[k] = self.hi[k].max(p[k]);
        }
    }

    fn merge(&mut self, o: &Aabb) {
        for k in 0..3 {
            self.lo[k] = self.lo[k].min(o.lo[k]);
            self.hi[k] = self.hi[k].max(o.hi[k]);
        }
    }

    /// Squared distance from p to the box (0 inside).
    fn dist2(&self, p: [f64; 3]) -> f64 {
        let mut d = 0.0;
        for k in 0..3 {
            let v = if p[k] < self.lo[k] {
                self.lo[k] - p[k]
            } else if p[k] > self.hi[k] {
                p[k] - self.hi[k]
            } else {
                0.0
            };
            d += v * v;
        }
        d
    }

    /// Slab test; returns true when the ray can intersect the box.
    fn hit_by_ray(&self, orig: [f64; 3], inv_dir: [f64; 3]) -> bool {
        let mut tmin = 0.0f64;
        let mut tmax = f64::INFINITY;
        for k in 0..3 {
            let t1 = (self.lo[k] - orig[k]) * inv_dir[k];
            let t2 = (self.hi[k] - orig[k]) * inv_dir[k];
            let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            tmin = tmin.max(t1);
            tmax = tmax.min(t2);
            if tmin > tmax {
                return false;
            }
        }
        true
    }
}

enum Node {
    Leaf {
        aabb: Aabb,
        tris: Vec<usize>,
    },
    Inner {
        aabb: Aabb,
        left: usize,
        right: usize,
    },
}

/// Result of a closest-point query.
#[derive(Debug, Clone, Copy)]
pub struct ClosestHit {
    pub distance: f64,
    pub point: [f64; 3],
    pub face: usize,
    pub barycentric: [f64; 3],
}

pub struct TriBvh {
    nodes: Vec<Node>,
    root: usize,
    verts: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

const LEAF_SIZE: usize = 4;

impl TriBvh {
    pub fn build(mesh: &TriMesh) -> Self {
        let centroids: Vec<[f64; 3]> = mesh
            .faces
            .iter()
            .map(|f| {
                let mut c = [0.0; 3];
                for &i in f {
                    for k in 0..3 {
                        c[k] += mesh.vertices[i][k] / 3.0;
                    }
                }
                c
            })
            .collect();
        let mut bvh = TriBvh {
            nodes: Vec::new(),
            root: 0,
            verts: mesh.vertices.clone(),
            faces: mesh.faces.clone(),
        };
        let mut indices: Vec<usize> = (0..mesh.faces.len()).collect();
        bvh.root = bvh.build_rec(&mut indices, &centroids);
        bvh
    }

    fn tri_aabb(&self, t: usize) -> Aabb {
        let mut b = Aabb::empty();
        for &i in &self.faces[t] {
            b.grow(self.verts[i]);
        }
        b
    }

    fn build_rec(&mut self, tris: &mut [usize], centroids: &[[f64; 3]]) -> usize {
        let mut aabb = Aabb::empty();
        for &t in tris.iter() {
            aabb.merge(&self.tri_aabb(t));
        }
        if tris.len() <= LEAF_SIZE {
            self.nodes.push(Node::Leaf {
                aabb,
                tris: tris.to_vec(),
            });
            return self.nodes.len() - 1;
        }
        // Split on the widest centroid axis at the median.
        let mut cb = Aabb::empty();
        for &t in tris.iter() {
            cb.grow(centroids[t]);
        }
        let axis = (0..3)
            .max_by(|&a, &b| {
                (cb.hi[a] - cb.lo[a])
                    .partial_cmp(&(cb.hi[b] - cb.lo[b]))
                    .unwrap()
            })
            .unwrap();
        let mid = tris.len() / 2;
        tris.select_nth_unstable_by(mid, |&a, &b| {
            centroids[a][axis].partial_cmp(&centroids[b][axis]).unwrap()
        });
        let (l, r) = tris.split_at_mut(mid);
        let left = self.build_rec(l, centroids);
        let right = self.build_rec(r, centroids);
        self.nodes.push(Node::Inner { aabb, left, right });
        self.nodes.len() - 1
    }

    /// Exact closest point on the mesh surface (branch and bound).
    pub fn closest_point(&self, p: [f64; 3]) -> ClosestHit {
        let mut best = ClosestHit {
            distance: f64::INFINITY,
            point: [0.0; 3],
            face: usize::MAX,
            barycentric: [0.0; 3],
        };
        let mut best_d2 = f64::INFINITY;
        self.closest_rec(self.root, p, &mut best, &mut best_d2);
        best.distance = best_d2.sqrt();
        best
    }

    fn closest_rec(&self, node: usize, p: [f64; 3], best: &mut ClosestHit, best_d2: &mut f64) {
        match &self.nodes[node] {
            Node::Leaf { aabb, tris } => {
                if aabb.dist2(p) > *best_d2 {
                    return;
                }
                for &t in tris {
                    let [a, b, c] = self.faces[t];
                    let (q, bary) = tri::closest_point_on_triangle(
                        p,
                        self.verts[a],
                        self.verts[b],
                        self.verts[c],
                    );
                    let d2 = tri::norm2(tri::sub(p, q));
                    if d2 < *best_d2 {
                        *best_d2 = d2;
                        best.point = q;
                        best.face = t;
                        best.barycentric = bary;
                    }
                }
            }
            Node::Inner { aabb, left, right } => {
                if aabb.dist2(p) > *best_d2 {
                    return;
                }
                // Visit the nearer child first for tighter pruning.
                let (dl, dr) = (
                    self.node_aabb(*left).dist2(p),
                    self.node_aabb(*right).dist2(p),
                );
                let (first, second) = if dl <= dr {
                    (*left, *right)
                } else {
                    (*right, *left)
                };
                self.closest_rec(first, p, best, best_d2);
                self.closest_rec(second, p, best, best_d2);
            }
        }
    }

    fn node_aabb(&self, node: usize) -> &Aabb {
        match &self.nodes[node] {
            Node::Leaf { aabb, .. } => aabb,
            Node::Inner { aabb, .. } => aabb,
        }
    }

    /// Number of triangles crossed by the ray from `orig` along `dir`.
    pub fn ray_crossings(&self, orig: [f64; 3], dir: [f64; 3]) -> usize {
        let inv_dir = [1.0 / dir[0], 1.0 / dir[1], 1.0 / dir[2]];
        let mut count = 0;
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            match &self.nodes[n] {
                Node::Leaf { aabb, tris } => {
                    if !aabb.hit_by_ray(orig, inv_dir) {
                        continue;
                    }
                    for &t in tris {
                        let [a, b, c] = self.faces[t];
                        if ray_triangle(orig, dir, self.verts[a], self.verts[b], self.verts[c])
                            .is_some()
                        {
                            count += 1;
                        }
                    }
                }
                Node::Inner { aabb, left, right } => {
                    if aabb.hit_by_ray(orig, inv_dir) {
                        stack.push(*left);
                        stack.push(*right);
                    }
                }
            }
        }
        count
    }
}
