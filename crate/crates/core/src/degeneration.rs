//! Limits of the refined control data as `t → ∞` and the regular control
//! curve assembled from them.

use crate::decomposition::regular_decomposition;
use crate::error::{Error, Result};
use crate::geometry::{
    binomial, eval_toric_bezier, CurveSpec, LatticeSet, LiftingFunction, Point, ToricBezierPiece,
};
use crate::refinement::{bezier_extract, SupportCombination};

/// Limit of one refined control point and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitElement {
    pub point: Point,
    pub weight: f64,
    /// `ψ`: the support indices attaining the largest lift.
    pub dominant: Vec<usize>,
}

/// Lifts within this much of the maximum count as tied (relative to `1 + |max|`).
const TIE_TOLERANCE: f64 = 1e-9;

/// `ψ = argmax λ` over the support, weight `Σ_ψ f_i ω_i` and the
/// `f·ω`-weighted average of the dominant control points.
pub fn limit_element(
    combo: &SupportCombination,
    lifting: &LiftingFunction,
    spec: &CurveSpec,
) -> LimitElement {
    let top = combo
        .indices()
        .map(|i| lifting.get(i))
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOLERANCE * (1.0 + top.abs());
    let dominant: Vec<usize> = combo
        .indices()
        .filter(|&i| top - lifting.get(i) <= tol)
        .collect();
    let weights = spec.weights();
    let points = spec.control_points();
    if let [i] = dominant[..] {
        return LimitElement {
            point: points[i],
            weight: combo.get(i) * weights[i],
            dominant,
        };
    }
    let mut num = Point::ORIGIN;
    let mut den = 0.0;
    for &i in &dominant {
        let c = combo.get(i) * weights[i];
        num += points[i] * c;
        den += c;
    }
    LimitElement {
        point: num / den,
        weight: den,
        dominant,
    }
}

/// How the toric basis coefficients `c_a` of a limit piece are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientRule {
    /// `c_a = C(p, a − (m−1)p)`: the Bernstein coefficients of the enclosing
    /// Bézier piece restricted to the subset. This is the actual `t → ∞` limit.
    #[default]
    PieceBernstein,
    /// `c_a = C(s_last − s_first, a − s_first)` over the subset's own hull.
    /// Agrees with [`CoefficientRule::PieceBernstein`] up to reparametrisation
    /// only when the subset is the whole piece or has two elements.
    SubsetHullBinomial,
}

/// One toric piece of the regular control curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPiece {
    /// 1-based Bézier piece `m` this subset belongs to.
    pub bezier_index: usize,
    pub toric: ToricBezierPiece,
    /// All limit points coincide (within `1e-9 ·` diameter).
    pub degenerate: bool,
}

impl RegularPiece {
    pub fn subset(&self) -> &LatticeSet {
        self.toric.lattice()
    }
}

/// Ordered union of toric pieces, the `t → ∞` limit of the lifted curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularControlCurve {
    pieces: Vec<RegularPiece>,
    diameter: f64,
}

impl RegularControlCurve {
    pub fn pieces(&self) -> &[RegularPiece] {
        &self.pieces
    }

    /// Bounding diameter of the source control points.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn first_point(&self) -> Point {
        self.pieces[0].toric.first_point()
    }

    pub fn last_point(&self) -> Point {
        self.pieces[self.pieces.len() - 1].toric.last_point()
    }

    /// Lattice-parameter domain `[0, np]` covered by the pieces.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces[0].toric.domain().0,
            self.pieces[self.pieces.len() - 1].toric.domain().1,
        )
    }

    /// Evaluates the piece whose domain contains `x`; degenerate pieces give
    /// their collapse point.
    pub fn eval(&self, x: f64) -> Result<Point> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::Domain(format!(
                "lattice parameter {x} outside [{lo}, {hi}]"
            )));
        }
        let k = self
            .pieces
            .partition_point(|p| p.toric.domain().1 < x)
            .min(self.pieces.len() - 1);
        let piece = &self.pieces[k];
        if piece.degenerate {
            return Ok(piece.toric.first_point());
        }
        eval_toric_bezier(&piece.toric, x)
    }

    fn coincidence_tolerance(&self) -> f64 {
        coincidence_tolerance(self.diameter)
    }
}

fn coincidence_tolerance(diameter: f64) -> f64 {
    1e-9 * if diameter > 0.0 { diameter } else { 1.0 }
}

/// Regular control curve with the default [`CoefficientRule`].
pub fn regular_control_curve(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
) -> Result<RegularControlCurve> {
    regular_control_curve_with(spec, lifting, CoefficientRule::default())
}

pub fn regular_control_curve_with(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    rule: CoefficientRule,
) -> Result<RegularControlCurve> {
    lifting.check_len(spec.control_count())?;
    let diameter = spec.diameter();
    let tol = coincidence_tolerance(diameter);
    let p = spec.degree();
    let mut pieces = Vec::new();
    for piece in bezier_extract(spec)? {
        let offset = piece.lattice_offset();
        let limits: Vec<LimitElement> = piece
            .combos()
            .iter()
            .map(|c| limit_element(c, lifting, spec))
            .collect();
        let lifted = LiftingFunction::new(piece.lifted_values(lifting))?;
        let local = regular_decomposition(&LatticeSet::range(0, p), &lifted)?;
        for subset in local.subsets() {
            let (s0, s1) = subset.hull();
            let coeffs = subset
                .iter()
                .map(|k| match rule {
                    CoefficientRule::PieceBernstein => binomial(p, k),
                    CoefficientRule::SubsetHullBinomial => binomial(s1 - s0, k - s0),
                })
                .collect();
            let weights = subset.iter().map(|k| limits[k].weight).collect();
            let points: Vec<Point> = subset.iter().map(|k| limits[k].point).collect();
            let degenerate = points.iter().all(|q| q.distance(&points[0]) <= tol);
            let global = LatticeSet::new(subset.iter().map(|k| k + offset).collect())?;
            pieces.push(RegularPiece {
                bezier_index: piece.index(),
                toric: ToricBezierPiece::new(global, coeffs, weights, points)?,
                degenerate,
            });
        }
    }
    Ok(RegularControlCurve { pieces, diameter })
}

/// `samples` uniform points in the lattice parameter of one piece, or its
/// single point when degenerate.
pub fn sample_piece(piece: &RegularPiece, samples: usize) -> Result<Vec<Point>> {
    if piece.degenerate {
        return Ok(vec![piece.toric.first_point()]);
    }
    let (a, b) = piece.toric.domain();
    (0..samples)
        .map(|k| {
            let x = if k + 1 == samples {
                b
            } else {
                a + (b - a) * k as f64 / (samples - 1) as f64
            };
            eval_toric_bezier(&piece.toric, x)
        })
        .collect()
}

/// Uniform samples in the lattice parameter of every piece; a degenerate piece
/// contributes its single point. Consecutive duplicates are dropped.
pub fn sample_regular_control_curve(
    rcc: &RegularControlCurve,
    samples_per_piece: usize,
) -> Result<Vec<Point>> {
    if samples_per_piece < 2 {
        return Err(Error::Domain(format!(
            "samples_per_piece must be at least 2, got {samples_per_piece}"
        )));
    }
    let tol = rcc.coincidence_tolerance();
    let mut out: Vec<Point> = Vec::new();
    let mut push = |q: Point| {
        if out.last().is_none_or(|last| last.distance(&q) > tol) {
            out.push(q);
        }
    };
    for piece in &rcc.pieces {
        for q in sample_piece(piece, samples_per_piece)? {
            push(q);
        }
    }
    Ok(out)
}
