#![allow(dead_code)]

use std::f64::consts::PI;

use isoknot::curve::Polyline;
use isoknot::Vec3;
use nalgebra::{Rotation3, Unit};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// A unit vector orthogonal to `v`.
pub fn orthogonal(rng: &mut impl Rng, v: &Vec3) -> Vec3 {
    loop {
        let w = unit_vector(rng);
        let p = w - v * v.dot(&w);
        if p.norm() > 1e-3 {
            return p.normalize();
        }
    }
}

pub fn random_rotation(rng: &mut impl Rng) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(unit_vector(rng)), rng.random_range(0.0..2.0 * PI))
}

/// Random points in `[-1, 1]^3`.
pub fn random_cloud(rng: &mut impl Rng, n: usize) -> Vec<Vec3> {
    (0..n)
        .map(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_polyline(rng: &mut impl Rng, n: usize, closed: bool) -> Polyline {
    Polyline::uniform(random_cloud(rng, n), closed).unwrap()
}

/// An open polyline with exactly prescribed exterior angles: each edge
/// direction is the previous one turned by `angles[k]` about a random
/// perpendicular axis.
pub fn polyline_with_turns(rng: &mut impl Rng, angles: &[f64]) -> Polyline {
    let mut dir = unit_vector(rng);
    let mut p = Vec3::zeros();
    let mut pts = vec![p];
    p += dir * rng.random_range(0.1..2.0);
    pts.push(p);
    for &a in angles {
        let axis = Unit::new_normalize(orthogonal(rng, &dir));
        dir = Rotation3::from_axis_angle(&axis, a) * dir;
        p += dir * rng.random_range(0.1..2.0);
        pts.push(p);
    }
    Polyline::uniform(pts, false).unwrap()
}

/// Random exterior angles with sum `total`.
pub fn split_total(rng: &mut impl Rng, k: usize, total: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s * total).collect()
}
