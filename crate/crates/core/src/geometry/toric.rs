use super::lattice::{binomial, LatticeSet};
use super::point::Point;
use crate::error::{Error, Result};

/// A rational curve over an integer lattice set, possibly with gaps.
///
/// With `A = {a_0 < … < a_m}` the basis is
/// `β_a(x) = c_a (x − a_0)^(a − a_0) (a_m − x)^(a_m − a)` on `[a_0, a_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricBezierPiece {
    lattice: LatticeSet,
    coeffs: Vec<f64>,
    weights: Vec<f64>,
    points: Vec<Point>,
}

impl ToricBezierPiece {
    pub fn new(
        lattice: LatticeSet,
        coeffs: Vec<f64>,
        weights: Vec<f64>,
        points: Vec<Point>,
    ) -> Result<Self> {
        let m = lattice.len();
        if coeffs.len() != m || weights.len() != m || points.len() != m {
            return Err(Error::Degenerate(format!(
                "toric piece over {m} lattice points has {} coefficients, {} weights, {} points",
                coeffs.len(),
                weights.len(),
                points.len()
            )));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::validation(
                format!("coefficients[{k}]"),
                "coefficients must be positive",
            ));
        }
        if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::validation(
                format!("weights[{k}]"),
                "weights must be positive",
            ));
        }
        Ok(ToricBezierPiece {
            lattice,
            coeffs,
            weights,
            points,
        })
    }

    /// Coefficients `C(a_m − a_0, a − a_0)`, the Bernstein normalisation on
    /// gap-free lattices.
    pub fn with_hull_binomials(
        lattice: LatticeSet,
        weights: Vec<f64>,
        points: Vec<Point>,
    ) -> Result<Self> {
        let (a0, am) = lattice.hull();
        let coeffs = lattice.iter().map(|a| binomial(am - a0, a - a0)).collect();
        ToricBezierPiece::new(lattice, coeffs, weights, points)
    }

    pub fn lattice(&self) -> &LatticeSet {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Parameter interval `[a_0, a_m]`.
    pub fn domain(&self) -> (f64, f64) {
        let (a0, am) = self.lattice.hull();
        (a0 as f64, am as f64)
    }

    pub fn first_point(&self) -> Point {
        self.points[0]
    }

    pub fn last_point(&self) -> Point {
        self.points[self.points.len() - 1]
    }
}

/// Evaluates a toric Bézier piece at `x ∈ [a_0, a_m]`.
pub fn eval_toric_bezier(piece: &ToricBezierPiece, x: f64) -> Result<Point> {
    let (a0, am) = piece.lattice.hull();
    let (lo, hi) = (a0 as f64, am as f64);
    if !(lo..=hi).contains(&x) {
        return Err(Error::Domain(format!("x = {x} is outside [{lo}, {hi}]")));
    }
    if x == lo {
        return Ok(piece.first_point());
    }
    if x == hi {
        return Ok(piece.last_point());
    }
    // Factor out (a_m - x)^(a_m - a_0): β_a ∝ c_a z^(a - a_0), z = (x - a_0)/(a_m - x).
    // Terms are accumulated relative to the largest exponent so z ≫ 1 cannot overflow.
    let ln_z = ((x - lo) / (hi - x)).ln();
    let logs: Vec<f64> = piece
        .lattice
        .iter()
        .zip(&piece.coeffs)
        .zip(&piece.weights)
        .map(|((a, c), w)| (c * w).ln() + (a - a0) as f64 * ln_z)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut num = Point::ORIGIN;
    let mut den = 0.0;
    for (l, b) in logs.iter().zip(&piece.points) {
        let s = (l - top).exp();
        num += *b * s;
        den += s;
    }
    Ok(num / den)
}
