//! Seeded property checks over random polylines.

use std::f64::consts::{PI, TAU};

use isoknot::curvature::{pl_total_curvature, vertex_chain_curvature};
use isoknot::curve::Polyline;
use isoknot::metric::{polyline_is_simple_oracle, DEFAULT_CLEARANCE};
use isoknot::pl_ops::push_monotone_check;
use isoknot::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PropertyName {
    /// Closed polylines turn by at least 2π.
    Fenchel,
    /// Planar convex polygons turn by exactly 2π.
    Convex,
    /// Open polylines turning by less than π are simple.
    Simplicity,
    /// Median pushes never increase total curvature.
    Push,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Worst value of the checked quantity, relative to its bound (positive
    /// means violated).
    pub worst_excess: f64,
    pub passed: bool,
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

/// Rotates `v` by `angle` about the unit vector `axis`.
pub fn rotate(v: &Vec3, axis: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * axis.dot(v) * (1.0 - c)
}

pub fn random_cloud(rng: &mut impl Rng, n: usize) -> Vec<Vec3> {
    (0..n)
        .map(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// An open polyline whose exterior angles are exactly `turns`.
pub fn polyline_with_turns(rng: &mut impl Rng, turns: &[f64]) -> Polyline {
    let mut dir = unit_vector(rng);
    let mut p = Vec3::zeros();
    let mut pts = vec![p];
    p += dir * rng.random_range(0.1..2.0);
    pts.push(p);
    for &a in turns {
        let w = unit_vector(rng);
        let axis = (w - dir * dir.dot(&w)).normalize();
        dir = rotate(&dir, &axis, a);
        p += dir * rng.random_range(0.1..2.0);
        pts.push(p);
    }
    Polyline::uniform(pts, false).expect("edges have positive length")
}

/// `k` positive angles summing to `total`.
pub fn split_total(rng: &mut impl Rng, k: usize, total: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s * total).collect()
}

/// Vertices of a convex polygon inscribed in a random ellipse, placed in a
/// random plane. `None` when random angles collide.
pub fn convex_polygon(rng: &mut impl Rng, n: usize) -> Option<Vec<Vec3>> {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    if angles.len() < 3 {
        return None;
    }
    let (a, b) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
    let axis = unit_vector(rng);
    let spin = rng.random_range(0.0..TAU);
    let shift = Vec3::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    Some(
        angles
            .iter()
            .map(|t| rotate(&Vec3::new(a * t.cos(), b * t.sin(), 0.0), &axis, spin) + shift)
            .collect(),
    )
}

pub fn run(name: PropertyName, trials: usize, seed: u64) -> Result<PropertyReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    while done < trials {
        let excess = match name {
            PropertyName::Fenchel => {
                let n = rng.random_range(3..24);
                let pts = random_cloud(&mut rng, n);
                TAU - 1e-9 - vertex_chain_curvature(&pts, true)?
            }
            PropertyName::Convex => {
                let n = rng.random_range(3..40);
                match convex_polygon(&mut rng, n) {
                    Some(pts) => (vertex_chain_curvature(&pts, true)? - TAU).abs() - 1e-9,
                    None => continue,
                }
            }
            PropertyName::Simplicity => {
                let k = rng.random_range(1..14);
                let total = rng.random_range(0.5..PI - 1e-6);
                let turns = split_total(&mut rng, k, total);
                let p = polyline_with_turns(&mut rng, &turns);
                let t = pl_total_curvature(&p)?.value;
                if t >= PI - 1e-6 {
                    continue;
                }
                if polyline_is_simple_oracle(&p, DEFAULT_CLEARANCE) {
                    t - PI
                } else {
                    1.0
                }
            }
            PropertyName::Push => {
                let p = Polyline::uniform(random_cloud(&mut rng, 10), false)?;
                let v = rng.random_range(1..9);
                push_monotone_check(&p, v, isoknot::pl_ops::DEFAULT_FRAMES)?.max_violation - 1e-9
            }
        };
        if excess > 0.0 {
            failures += 1;
        }
        worst = worst.max(excess);
        done += 1;
    }
    Ok(PropertyReport {
        property: format!("{name:?}").to_lowercase(),
        seed,
        trials,
        failures,
        worst_excess: worst,
        passed: failures == 0,
    })
}
