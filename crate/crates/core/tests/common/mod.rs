#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_nurbs::{CurveSpec, LiftingFunction, Point};

pub fn lift(values: &[f64]) -> LiftingFunction {
    LiftingFunction::new(values.to_vec()).unwrap()
}

/// Quadratic, five control points, interior knots 1/4 and 3/4.
pub fn arch() -> CurveSpec {
    CurveSpec::from_parts(
        2,
        vec![0.0, 0.0, 0.0, 0.25, 0.75, 1.0, 1.0, 1.0],
        vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 3.0),
            Point::xy(3.0, 4.0),
            Point::xy(5.0, 2.0),
            Point::xy(6.0, 0.0),
        ],
        vec![3.0, 2.0, 3.0, 2.0, 5.0],
    )
    .unwrap()
}

/// Quadratic, four control points, one interior knot at 1/4.
pub fn hook() -> CurveSpec {
    CurveSpec::from_parts(
        2,
        vec![0.0, 0.0, 0.0, 0.25, 1.0, 1.0, 1.0],
        vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 2.0),
            Point::xy(3.0, 2.0),
            Point::xy(4.0, 0.0),
        ],
        vec![3.0, 1.0, 2.0, 2.0],
    )
    .unwrap()
}

/// Cubic, five control points, one interior knot at 1/3.
pub fn wave() -> CurveSpec {
    CurveSpec::from_parts(
        3,
        vec![0.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 1.0, 1.0, 1.0, 1.0],
        vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 3.0),
            Point::xy(2.5, 4.0),
            Point::xy(4.0, 3.5),
            Point::xy(5.0, 0.5),
        ],
        vec![1.0, 4.0, 1.0, 4.0, 1.0],
    )
    .unwrap()
}

/// Bézier curve of degree `points.len() - 1` (no interior knots).
pub fn bezier(points: Vec<Point>, weights: Vec<f64>) -> CurveSpec {
    let p = points.len() - 1;
    let mut knots = vec![0.0; p + 1];
    knots.extend(vec![1.0; p + 1]);
    CurveSpec::from_parts(p, knots, points, weights).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n - 1` distinct interior knots in `(0.05, 0.95)`, at least 0.02 apart.
pub fn random_interior(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut interior: Vec<f64> = Vec::new();
    while interior.len() + 1 < n {
        let u: f64 = rng.random_range(0.05..0.95);
        if interior.iter().all(|v| (v - u).abs() > 0.02) {
            interior.push(u);
        }
    }
    interior.sort_by(f64::total_cmp);
    interior
}

/// Degree in `1..=max_p`, `1..=max_n` segments, weights in `[0.5, 5]`,
/// points in the unit square and integer lifts in `0..=4`.
pub fn random_case(
    rng: &mut ChaCha8Rng,
    max_p: usize,
    max_n: usize,
) -> (CurveSpec, LiftingFunction) {
    let p = rng.random_range(1..=max_p);
    let n = rng.random_range(1..=max_n);
    let mut knots = vec![0.0; p + 1];
    knots.extend(random_interior(rng, n));
    knots.extend(vec![1.0; p + 1]);
    let count = n + p;
    let points = (0..count)
        .map(|_| Point::xy(rng.random(), rng.random()))
        .collect();
    let weights = (0..count).map(|_| rng.random_range(0.5..5.0)).collect();
    let lifting = (0..count).map(|_| rng.random_range(0..=4) as f64).collect();
    (
        CurveSpec::from_parts(p, knots, points, weights).unwrap(),
        LiftingFunction::new(lifting).unwrap(),
    )
}

pub fn shuffled(rng: &mut ChaCha8Rng, values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.shuffle(rng);
    v
}

pub fn uniform(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            if k + 1 == count {
                1.0
            } else {
                k as f64 / (count - 1) as f64
            }
        })
        .collect()
}

/// Distance from `q` to the polyline through `poly`.
pub fn distance_to_polyline(q: &Point, poly: &[Point]) -> f64 {
    poly.windows(2)
        .map(|w| q.distance_to_segment(&w[0], &w[1]))
        .fold(f64::INFINITY, f64::min)
}
