//! Small 3D kd-tree for nearest-neighbor queries (used by the Chamfer
//! distance). Exact: returns the same squared distance as an exhaustive scan.

pub struct KdTree3 {
    points: Vec<[f64; 3]>,
    // node layout: implicit balanced tree over `order`
    order: Vec<usize>,
}

impl KdTree3 {
    pub fn build(points: &[[f64; 3]]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let points = points.to_vec();
        build_rec(&points, &mut order, 0);
        Self { points, order }
    }

    /// Squared distance to the nearest point in the set.
    pub fn nearest_dist2(&self, q: [f64; 3]) -> f64 {
        let mut best = f64::INFINITY;
        self.search(&self.order, 0, q, &mut best);
        best
    }

    fn search(&self, slice: &[usize], depth: usize, q: [f64; 3], best: &mut f64) {
        if slice.is_empty() {
            return;
        }
        let mid = slice.len() / 2;
        let p = self.points[slice[mid]];
        let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2);
        if d2 < *best {
            *best = d2;
        }
        let axis = depth % 3;
        let delta = q[axis] - p[axis];
        let (near, far) = if delta < 0.0 {
            (&slice[..mid], &slice[mid + 1..])
        } else {
            (&slice[mid + 1..], &slice[..mid])
        };
        self.search(near, depth + 1, q, best);
        if delta * delta < *best {
            self.search(far, depth + 1, q, best);
        }
    }
}

fn build_rec(points: &[[f64; 3]], slice: &mut [usize], depth: usize) {
    if slice.len() <= 1 {
        return;
    }
    let axis = depth % 3;
    let mid = slice.len() / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis].partial_cmp(&points[b][axis]).unwrap()
    });
    let (l, rest) = slice.split_at_mut(mid);
    build_rec(points, l, depth + 1);
    build_rec(points, &mut rest[1..], depth + 1);
}
