mod common;

use std::f64::consts::FRAC_PI_2;

use isoknot::curvature::vertex_chain_curvature;
use isoknot::metric::{polyline_is_simple_oracle, DEFAULT_CLEARANCE};
use isoknot::pl_ops::{median_push, push_monotone_check, reduce_to_chord, DEFAULT_FRAMES};
use rand::Rng;

#[test]
fn median_pushes_never_add_curvature() {
    let mut rng = common::rng(17);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = common::random_polyline(&mut rng, 10, false);
        let v = rng.random_range(1..9);
        let report = push_monotone_check(&p, v, DEFAULT_FRAMES).unwrap();
        assert_eq!(report.curvatures.len(), DEFAULT_FRAMES);
        worst = worst.max(report.max_violation);
        assert!(report.monotone, "violation {}", report.max_violation);
    }
    assert!(worst <= 1e-9);
}

#[test]
fn pushes_move_only_the_pushed_vertex() {
    let mut rng = common::rng(19);
    for _ in 0..100 {
        let closed = rng.random_bool(0.5);
        let p = common::random_polyline(&mut rng, 7, closed);
        let v = if closed { rng.random_range(0..7) } else { rng.random_range(1..6) };
        let s = rng.random_range(0.0..=1.0);
        let q = median_push(&p, v, s).unwrap();
        for (k, (a, b)) in p.vertices().iter().zip(q.vertices()).enumerate() {
            if k != v {
                assert_eq!(a, b);
            }
        }
        assert_eq!(q.params(), p.params());
    }
}

#[test]
fn chord_reduction_of_low_budget_chains() {
    let mut rng = common::rng(23);
    let mut done = 0;
    while done < 200 {
        let k = rng.random_range(1..8);
        let total = rng.random_range(0.1..FRAC_PI_2 - 1e-3);
        let turns = common::split_total(&mut rng, k, total);
        let p = common::polyline_with_turns(&mut rng, &turns);
        let n = p.len();
        let j = rng.random_range(0..n - 1);
        let end = rng.random_range(j + 1..n);
        assert!(vertex_chain_curvature(&p.vertices()[j..=end], false).unwrap() < FRAC_PI_2);
        let trace = reduce_to_chord(&p, j, end, 10).unwrap();
        if end == j + 1 {
            assert!(trace.is_empty());
            continue;
        }
        let last = trace.frames.last().unwrap();
        assert_eq!(last.len(), n - (end - j - 1));
        for f in &trace.frames {
            assert!(polyline_is_simple_oracle(f, DEFAULT_CLEARANCE));
            assert_eq!(f.vertices()[0], p.vertices()[0]);
            assert_eq!(f.vertices()[j], p.vertices()[j]);
            assert_eq!(f.vertices().last(), p.vertices().last());
        }
        done += 1;
    }
}
