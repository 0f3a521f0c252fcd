//! Convex hulls of small point sets: incremental in 3D, monotone chain for
//! coplanar input, extreme pair for collinear input.

use std::collections::BTreeSet;

use crate::metric::segments::point_segment_distance;
use crate::{Error, Result, Vec3};

/// Relative coplanarity/collinearity tolerance.
pub const HULL_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullShape {
    Point,
    Segment,
    /// Coplanar input.
    Polygon,
    Polytope,
}

/// Convex hull of a point set. Indices refer to `points`.
#[derive(Clone, Debug)]
pub struct HullSet {
    pub points: Vec<Vec3>,
    pub shape: HullShape,
    /// Hull vertex indices (for polygons, in boundary order).
    pub vertices: Vec<usize>,
    /// Outward-oriented triangles (polytopes only).
    pub faces: Vec<[usize; 3]>,
    /// Undirected hull edges with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

/// Absolute tolerance scaled to the extent of the input.
fn tolerance(points: &[Vec3]) -> f64 {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let scale = (hi - lo).norm().max(lo.abs().max()).max(hi.abs().max());
    HULL_EPS * scale.max(f64::MIN_POSITIVE)
}

pub fn convex_hull(points: &[Vec3]) -> Result<HullSet> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let tol = tolerance(points);
    let pts = points;

    // Seed with an approximate diameter: lexicographic minimum, then two
    // farthest-point hops.
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(pts[a].y.total_cmp(&pts[b].y)))
        .unwrap_or(0);
    let i1 = farthest(pts, |p| (p - pts[i0]).norm());
    if (pts[i1] - pts[i0]).norm() <= tol {
        return Ok(HullSet {
            points: points.to_vec(),
            shape: HullShape::Point,
            vertices: vec![i0],
            faces: vec![],
            edges: vec![],
        });
    }
    let i0 = farthest(pts, |p| (p - pts[i1]).norm());
    let i2 = farthest(pts, |p| point_line_distance(p, &pts[i0], &pts[i1]));
    if point_line_distance(&pts[i2], &pts[i0], &pts[i1]) <= tol {
        let (a, b) = (i0.min(i1), i0.max(i1));
        return Ok(HullSet {
            points: points.to_vec(),
            shape: HullShape::Segment,
            vertices: vec![a, b],
            faces: vec![],
            edges: vec![(a, b)],
        });
    }
    let n = (pts[i1] - pts[i0]).cross(&(pts[i2] - pts[i0])).normalize();
    let i3 = farthest(pts, |p| (p - pts[i0]).dot(&n).abs());
    if (pts[i3] - pts[i0]).dot(&n).abs() <= tol {
        return Ok(planar_hull(points, i0, i1, n, tol));
    }
    Ok(polytope(points, [i0, i1, i2, i3], tol))
}

fn farthest(pts: &[Vec3], f: impl Fn(&Vec3) -> f64) -> usize {
    let mut best = 0;
    let mut val = f64::NEG_INFINITY;
    for (i, p) in pts.iter().enumerate() {
        let d = f(p);
        if d > val {
            val = d;
            best = i;
        }
    }
    best
}

fn point_line_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let d = (b - a).normalize();
    let w = p - a;
    (w - d * w.dot(&d)).norm()
}

fn planar_hull(points: &[Vec3], i0: usize, i1: usize, normal: Vec3, tol: f64) -> HullSet {
    let u = (points[i1] - points[i0]).normalize();
    let v = normal.cross(&u);
    let o = points[i0];
    let uv: Vec<(f64, f64)> = points.iter().map(|p| ((p - o).dot(&u), (p - o).dot(&v))).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| uv[a].0.total_cmp(&uv[b].0).then(uv[a].1.total_cmp(&uv[b].1)));
    let cross = |o: usize, a: usize, b: usize| {
        (uv[a].0 - uv[o].0) * (uv[b].1 - uv[o].1) - (uv[a].1 - uv[o].1) * (uv[b].0 - uv[o].0)
    };
    // Turns with |cross| below tol·|ab| count as straight and are dropped.
    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in iter {
            while h.len() >= 2 {
                let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
                let span = ((uv[i].0 - uv[a].0).powi(2) + (uv[i].1 - uv[a].1).powi(2)).sqrt();
                if cross(a, b, i) <= tol * span {
                    h.pop();
                } else {
                    break;
                }
            }
            h.push(i);
        }
        h
    };
    let mut lower = chain(&mut order.iter().copied());
    let mut upper = chain(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let vertices = lower;
    let m = vertices.len();
    let edges = (0..m)
        .map(|k| {
            let (a, b) = (vertices[k], vertices[(k + 1) % m]);
            (a.min(b), a.max(b))
        })
        .collect();
    HullSet {
        points: points.to_vec(),
        shape: HullShape::Polygon,
        vertices,
        faces: vec![],
        edges,
    }
}

fn face_normal(pts: &[Vec3], f: &[usize; 3]) -> Vec3 {
    (pts[f[1]] - pts[f[0]]).cross(&(pts[f[2]] - pts[f[0]]))
}

fn polytope(points: &[Vec3], seed: [usize; 4], tol: f64) -> HullSet {
    let pts = points;
    let [a, b, c, d] = seed;
    let mut faces: Vec<[usize; 3]> = vec![[a, b, c], [a, c, d], [a, d, b], [b, d, c]];
    let centroid = (pts[a] + pts[b] + pts[c] + pts[d]) / 4.0;
    for f in faces.iter_mut() {
        if face_normal(pts, f).dot(&(centroid - pts[f[0]])) > 0.0 {
            f.swap(1, 2);
        }
    }
    let visible = |f: &[usize; 3], p: &Vec3| {
        let n = face_normal(pts, f);
        n.dot(&(p - pts[f[0]])) > tol * n.norm()
    };
    for (i, p) in pts.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let (seen, kept): (Vec<[usize; 3]>, Vec<[usize; 3]>) = faces.iter().partition(|f| visible(f, p));
        if seen.is_empty() {
            continue;
        }
        let directed: BTreeSet<(usize, usize)> = seen
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        faces = kept;
        for &(u, w) in &directed {
            if !directed.contains(&(w, u)) {
                faces.push([u, w, i]);
            }
        }
    }
    let mut edges = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for f in &faces {
        for k in 0..3 {
            let (u, w) = (f[k], f[(k + 1) % 3]);
            edges.insert((u.min(w), u.max(w)));
            verts.insert(f[k]);
        }
    }
    HullSet {
        points: points.to_vec(),
        shape: HullShape::Polytope,
        vertices: verts.into_iter().collect(),
        faces,
        edges: edges.into_iter().collect(),
    }
}

impl HullSet {
    pub fn vertex_points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.vertices.iter().map(|&i| self.points[i])
    }

    pub fn edge_midpoints(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.edges.iter().map(|&(a, b)| 0.5 * (self.points[a] + self.points[b]))
    }

    /// Euclidean distance from `q` to the hull solid (0 inside).
    pub fn distance_to(&self, q: &Vec3) -> f64 {
        let p = &self.points;
        match self.shape {
            HullShape::Point => (q - p[self.vertices[0]]).norm(),
            HullShape::Segment => point_segment_distance(q, &p[self.edges[0].0], &p[self.edges[0].1]),
            HullShape::Polygon => {
                let vs: Vec<Vec3> = self.vertex_points().collect();
                let n = (vs[1] - vs[0]).cross(&(vs[2] - vs[0])).normalize();
                let inside = (0..vs.len()).all(|k| {
                    let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
                    (b - a).cross(&(q - a)).dot(&n) >= 0.0
                });
                if inside {
                    (q - vs[0]).dot(&n).abs()
                } else {
                    self.edges
                        .iter()
                        .map(|&(a, b)| point_segment_distance(q, &p[a], &p[b]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            HullShape::Polytope => {
                let outside = self.faces.iter().any(|f| face_normal(p, f).dot(&(q - p[f[0]])) > 0.0);
                if !outside {
                    return 0.0;
                }
                self.faces
                    .iter()
                    .map(|f| point_triangle_distance(q, &p[f[0]], &p[f[1]], &p[f[2]]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

fn point_triangle_distance(q: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let n = (b - a).cross(&(c - a));
    let inside = [(a, b), (b, c), (c, a)]
        .iter()
        .all(|(u, w)| (*w - *u).cross(&(q - *u)).dot(&n) >= 0.0);
    if inside && n.norm() > 0.0 {
        return (q - a).dot(&n).abs() / n.norm();
    }
    point_segment_distance(q, a, b)
        .min(point_segment_distance(q, b, c))
        .min(point_segment_distance(q, c, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn tetrahedron() {
        let h = convex_hull(&[v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(0., 0., 1.)]).unwrap();
        assert_eq!(h.shape, HullShape::Polytope);
        assert_eq!(h.faces.len(), 4);
        assert_eq!(h.edges.len(), 6);
    }

    #[test]
    fn cube_excludes_center() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(v((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64));
        }
        pts.push(v(0.5, 0.5, 0.5));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert!(!h.vertices.contains(&8));
        assert_eq!(h.distance_to(&v(0.5, 0.5, 0.5)), 0.0);
        assert!((h.distance_to(&v(0.5, 0.5, 3.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let line: Vec<_> = (0..5).map(|i| v(i as f64, 2.0 * i as f64, 0.0)).collect();
        let h = convex_hull(&line).unwrap();
        assert_eq!(h.shape, HullShape::Segment);
        let mut ends = h.vertices.clone();
        ends.sort();
        assert_eq!(ends, vec![0, 4]);
        let h = convex_hull(&[v(1., 1., 1.)]).unwrap();
        assert_eq!(h.shape, HullShape::Point);
        let sq = [v(0., 0., 0.), v(1., 0., 0.), v(1., 1., 0.), v(0., 1., 0.), v(0.5, 0.5, 0.)];
        let h = convex_hull(&sq).unwrap();
        assert_eq!(h.shape, HullShape::Polygon);
        assert_eq!(h.vertices.len(), 4);
        assert!((h.distance_to(&v(0.5, 0.5, 2.0)) - 2.0).abs() < 1e-12);
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn random_points_lie_in_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(4..80);
            let pts: Vec<Vec3> = (0..n)
                .map(|_| v(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let h = convex_hull(&pts).unwrap();
            for p in &pts {
                assert!(h.distance_to(p) <= 1e-9);
            }
            // Euler characteristic of a triangulated sphere.
            let (vv, e, f) = (h.vertices.len() as i64, h.edges.len() as i64, h.faces.len() as i64);
            assert_eq!(vv - e + f, 2);
        }
    }
}
