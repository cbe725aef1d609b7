use super::basis::{basis_funs, check_parameter};
use super::knots::KnotVector;
use super::lattice::{LatticeSet, LiftingFunction};
use super::point::{bounding_diameter, Point};
use crate::error::{Error, Result};

/// A clamped NURBS curve: degree, knots, control points and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    knot_vector: KnotVector,
    control_points: Vec<Point>,
    weights: Vec<f64>,
    dim: usize,
}

impl CurveSpec {
    /// The dimension is 2 when every control point has `z == 0`, else 3.
    pub fn new(
        knot_vector: KnotVector,
        control_points: Vec<Point>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let dim = if control_points.iter().all(|p| p.z == 0.0) {
            2
        } else {
            3
        };
        Self::with_dimension(knot_vector, control_points, weights, dim)
    }

    pub fn with_dimension(
        knot_vector: KnotVector,
        control_points: Vec<Point>,
        weights: Vec<f64>,
        dim: usize,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::validation(
                "points",
                format!("dimension must be 2 or 3, got {dim}"),
            ));
        }
        let expected = knot_vector.control_count();
        if control_points.len() != expected {
            return Err(Error::validation(
                "points",
                format!(
                    "knot vector of length {} and degree {} needs {expected} control points, got {}",
                    knot_vector.len(),
                    knot_vector.degree(),
                    control_points.len()
                ),
            ));
        }
        if weights.len() != expected {
            return Err(Error::validation(
                "weights",
                format!("expected {expected} weights, got {}", weights.len()),
            ));
        }
        if let Some(k) = control_points.iter().position(|p| !p.is_finite()) {
            return Err(Error::validation(
                format!("points[{k}]"),
                "coordinates must be finite",
            ));
        }
        if dim == 2 {
            if let Some(k) = control_points.iter().position(|p| p.z != 0.0) {
                return Err(Error::validation(
                    format!("points[{k}]"),
                    "planar curve with nonzero z",
                ));
            }
        }
        if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::validation(
                format!("weights[{k}]"),
                format!("weights must be positive and finite, got {}", weights[k]),
            ));
        }
        Ok(CurveSpec {
            knot_vector,
            control_points,
            weights,
            dim,
        })
    }

    /// Convenience constructor from raw arrays.
    pub fn from_parts(
        degree: usize,
        knots: Vec<f64>,
        control_points: Vec<Point>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        CurveSpec::new(KnotVector::new(knots, degree)?, control_points, weights)
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.knot_vector
    }

    pub fn degree(&self) -> usize {
        self.knot_vector.degree()
    }

    pub fn control_points(&self) -> &[Point] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn control_count(&self) -> usize {
        self.control_points.len()
    }

    /// Number of Bézier pieces, `n`.
    pub fn segment_count(&self) -> usize {
        self.knot_vector.segment_count()
    }

    /// The control lattice `{0, …, n + p − 1}`.
    pub fn lattice(&self) -> LatticeSet {
        LatticeSet::range(0, self.control_count() - 1)
    }

    /// Bounding-box diagonal of the control points.
    pub fn diameter(&self) -> f64 {
        bounding_diameter(&self.control_points)
    }

    /// Same knots and points with replaced weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<CurveSpec> {
        CurveSpec::with_dimension(
            self.knot_vector.clone(),
            self.control_points.clone(),
            weights,
            self.dim,
        )
    }

    /// Same knots and weights with replaced control points.
    pub fn with_points(&self, points: Vec<Point>) -> Result<CurveSpec> {
        CurveSpec::with_dimension(
            self.knot_vector.clone(),
            points,
            self.weights.clone(),
            self.dim,
        )
    }

    /// The weights `t^λ(i) ω_i`.
    pub fn lifted_weights(&self, lifting: &LiftingFunction, t: f64) -> Result<Vec<f64>> {
        lifting.check_len(self.control_count())?;
        check_t(t)?;
        Ok(self
            .weights
            .iter()
            .zip(lifting.values())
            .map(|(w, l)| w * t.powf(*l))
            .collect())
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!(
            "t = {t} must be positive and finite"
        )));
    }
    Ok(())
}

/// Evaluates the rational curve at `u ∈ [0, 1]`.
pub fn eval_nurbs(spec: &CurveSpec, u: f64) -> Result<Point> {
    check_parameter(u)?;
    let kv = spec.knot_vector();
    let p = kv.degree();
    let span = kv.find_span(u);
    let n = basis_funs(kv, span, u);
    let mut num = Point::ORIGIN;
    let mut den = 0.0;
    for (j, nj) in n.iter().enumerate() {
        let i = span - p + j;
        let c = spec.weights[i] * nj;
        num += spec.control_points[i] * c;
        den += c;
    }
    Ok(num / den)
}

/// Evaluates the curve with weights `t^λ(i) ω_i` at `u`.
///
/// Every active term is divided by `t^λ*`, where `λ*` is the dominant exponent
/// among the basis functions that are nonzero at `u`, so no term exceeds its
/// unlifted weight.
pub fn eval_nurbs_lifted(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    t: f64,
    u: f64,
) -> Result<Point> {
    lifting.check_len(spec.control_count())?;
    check_t(t)?;
    check_parameter(u)?;
    let kv = spec.knot_vector();
    let p = kv.degree();
    let span = kv.find_span(u);
    let n = basis_funs(kv, span, u);
    let ln_t = t.ln();
    let exponents = (0..=p)
        .filter(|&j| n[j] > 0.0)
        .map(|j| lifting.get(span - p + j) * ln_t);
    let reference = exponents.fold(f64::NEG_INFINITY, f64::max);
    let mut num = Point::ORIGIN;
    let mut den = 0.0;
    for (j, nj) in n.iter().enumerate() {
        if *nj == 0.0 {
            continue;
        }
        let i = span - p + j;
        let scale = (lifting.get(i) * ln_t - reference).exp();
        let c = spec.weights[i] * scale * nj;
        num += spec.control_points[i] * c;
        den += c;
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_3_2() -> CurveSpec {
        CurveSpec::from_parts(
            2,
            vec![0.0, 0.0, 0.0, 0.25, 1.0, 1.0, 1.0],
            vec![
                Point::xy(0.0, 0.0),
                Point::xy(1.0, 2.0),
                Point::xy(3.0, 2.5),
                Point::xy(4.0, 0.0),
            ],
            vec![3.0, 1.0, 2.0, 2.0],
        )
        .unwrap()
    }

    #[test]
    fn endpoint_interpolation() {
        let spec = example_3_2();
        assert_eq!(eval_nurbs(&spec, 0.0).unwrap(), spec.control_points()[0]);
        assert_eq!(eval_nurbs(&spec, 1.0).unwrap(), spec.control_points()[3]);
    }

    #[test]
    fn matches_direct_substitution() {
        // N(1/2) = (0, 1/3, 5/9, 1/9) on this knot vector
        let spec = example_3_2();
        let n = [0.0, 1.0 / 3.0, 5.0 / 9.0, 1.0 / 9.0];
        let w = spec.weights();
        let den: f64 = (0..4).map(|i| w[i] * n[i]).sum();
        let num = (0..4).fold(Point::ORIGIN, |acc, i| {
            acc + spec.control_points()[i] * (w[i] * n[i])
        });
        let expected = num / den;
        let got = eval_nurbs(&spec, 0.5).unwrap();
        assert!(got.distance(&expected) < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let spec = example_3_2();
        assert!(matches!(eval_nurbs(&spec, 1.01), Err(Error::Domain(_))));
        let lift = LiftingFunction::new(vec![1.0, 3.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            eval_nurbs_lifted(&spec, &lift, 0.0, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_nurbs_lifted(&spec, &lift, -2.0, 0.5),
            Err(Error::Domain(_))
        ));
        let short = LiftingFunction::new(vec![1.0, 3.0]).unwrap();
        assert!(matches!(
            eval_nurbs_lifted(&spec, &short, 2.0, 0.5),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn lifted_at_unit_t_and_constant_lifting() {
        let spec = example_3_2();
        let lift = LiftingFunction::new(vec![1.0, 3.0, 2.0, 0.0]).unwrap();
        let flat = LiftingFunction::constant(4, 2.5);
        for k in 0..=50 {
            let u = k as f64 / 50.0;
            let plain = eval_nurbs(&spec, u).unwrap();
            assert!(
                eval_nurbs_lifted(&spec, &lift, 1.0, u)
                    .unwrap()
                    .distance(&plain)
                    < 1e-14
            );
            for t in [0.01, 3.0, 1e8] {
                assert!(
                    eval_nurbs_lifted(&spec, &flat, t, u)
                        .unwrap()
                        .distance(&plain)
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn lifted_matches_explicit_weights() {
        let spec = example_3_2();
        let lift = LiftingFunction::new(vec![1.0, 3.0, 2.0, 0.0]).unwrap();
        let t = 7.0;
        let explicit = spec
            .with_weights(spec.lifted_weights(&lift, t).unwrap())
            .unwrap();
        for k in 0..=40 {
            let u = k as f64 / 40.0;
            let a = eval_nurbs_lifted(&spec, &lift, t, u).unwrap();
            let b = eval_nurbs(&explicit, u).unwrap();
            assert!(a.distance(&b) < 1e-12);
        }
    }

    #[test]
    fn huge_t_stays_finite() {
        let spec = example_3_2();
        let lift = LiftingFunction::new(vec![16.0, -16.0, 16.0, 0.0]).unwrap();
        for k in 0..=20 {
            let p = eval_nurbs_lifted(&spec, &lift, 1e8, k as f64 / 20.0).unwrap();
            assert!(p.is_finite());
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let kv = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0], 1).unwrap();
        let pts = vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)];
        let err = CurveSpec::new(kv.clone(), pts.clone(), vec![1.0, 0.0]).unwrap_err();
        assert_eq!(err.field(), Some("weights[1]"));
        assert!(CurveSpec::new(kv.clone(), pts.clone(), vec![1.0]).is_err());
        assert!(CurveSpec::new(kv, vec![Point::xy(0.0, 0.0)], vec![1.0]).is_err());
    }
}
