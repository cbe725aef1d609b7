//! Knot insertion with coefficient provenance.
//!
//! Every refined control point is tracked as a convex combination
//! `Σ f_i · (ω_i P_i, ω_i)` over the original homogeneous control points. The
//! Boehm insertion ratios depend only on the knots, so the coefficients `f`
//! are exact for any weights, including the symbolic `t^λ(i) ω_i`.

use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, KnotVector, LatticeSet, LiftingFunction, Point};

/// Coefficients below this are dropped from a combination.
const PRUNE: f64 = 1e-14;

/// Sparse convex combination `i ↦ f_i` over original control indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCombination {
    entries: Vec<(usize, f64)>,
}

impl SupportCombination {
    pub fn singleton(index: usize) -> Self {
        SupportCombination {
            entries: vec![(index, 1.0)],
        }
    }

    /// Validated constructor: indices strictly increasing, coefficients
    /// nonnegative and summing to 1 within `1e-12`.
    pub fn from_entries(entries: Vec<(usize, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("combination", "empty support"));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::validation(
                "combination",
                "indices must be strictly increasing",
            ));
        }
        if entries.iter().any(|(_, f)| !(f.is_finite() && *f >= 0.0)) {
            return Err(Error::validation(
                "combination",
                "coefficients must be nonnegative",
            ));
        }
        let sum: f64 = entries.iter().map(|(_, f)| f).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "combination",
                format!("coefficients sum to {sum}, not 1"),
            ));
        }
        Ok(SupportCombination { entries })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    /// Coefficient of original index `i` (zero outside the support).
    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    /// First and last index of the support.
    pub fn support(&self) -> (usize, usize) {
        (self.entries[0].0, self.entries[self.entries.len() - 1].0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, f)| f).sum()
    }

    pub fn is_contiguous(&self) -> bool {
        let (a, b) = self.support();
        b - a + 1 == self.entries.len()
    }

    /// `(1 − α)·left + α·right`, pruned and renormalised.
    fn blend(left: &Self, right: &Self, alpha: f64) -> Self {
        let (mut a, mut b) = (
            left.entries.iter().peekable(),
            right.entries.iter().peekable(),
        );
        let mut out = Vec::with_capacity(left.len().max(right.len()) + 1);
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(&&(i, f)), Some(&&(j, g))) => {
                    if i == j {
                        a.next();
                        b.next();
                        (i, (1.0 - alpha) * f + alpha * g)
                    } else if i < j {
                        a.next();
                        (i, (1.0 - alpha) * f)
                    } else {
                        b.next();
                        (j, alpha * g)
                    }
                }
                (Some(&&(i, f)), None) => {
                    a.next();
                    (i, (1.0 - alpha) * f)
                }
                (None, Some(&&(j, g))) => {
                    b.next();
                    (j, alpha * g)
                }
                (None, None) => break,
            };
            if next.1 >= PRUNE {
                out.push(next);
            }
        }
        let sum: f64 = out.iter().map(|(_, f)| f).sum();
        for e in &mut out {
            e.1 /= sum;
        }
        SupportCombination { entries: out }
    }

    /// Homogeneous value `(Σ f_i w_i P_i, Σ f_i w_i)` for the given weights.
    pub fn homogeneous(&self, weights: &[f64], points: &[Point]) -> (Point, f64) {
        let mut num = Point::ORIGIN;
        let mut den = 0.0;
        for &(i, f) in &self.entries {
            let c = f * weights[i];
            num += points[i] * c;
            den += c;
        }
        (num, den)
    }
}

/// A curve after some knot insertions, with every control point expressed
/// over the original control data.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedCurve {
    knot_vector: KnotVector,
    combos: Vec<SupportCombination>,
    source: CurveSpec,
}

impl RefinedCurve {
    /// The unrefined curve: one singleton per control point.
    pub fn identity(spec: &CurveSpec) -> Self {
        RefinedCurve {
            knot_vector: spec.knot_vector().clone(),
            combos: (0..spec.control_count())
                .map(SupportCombination::singleton)
                .collect(),
            source: spec.clone(),
        }
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.knot_vector
    }

    pub fn combos(&self) -> &[SupportCombination] {
        &self.combos
    }

    pub fn source(&self) -> &CurveSpec {
        &self.source
    }

    /// Inserts `u` once (Boehm).
    pub fn insert_knot(&self, u: f64) -> Result<RefinedCurve> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Insertion(format!(
                "knot {u} is not strictly inside (0, 1)"
            )));
        }
        let kv = &self.knot_vector;
        let p = kv.degree();
        let s = kv.multiplicity(u);
        if s + 1 > p {
            return Err(Error::Insertion(format!(
                "knot {u} already has multiplicity {s}; degree {p} allows at most {p}"
            )));
        }
        let knots = kv.knots();
        let k = kv.find_span(u);
        let old = &self.combos;
        let mut combos = Vec::with_capacity(old.len() + 1);
        combos.extend_from_slice(&old[..=k - p]);
        for i in k - p + 1..=k - s {
            let alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
            combos.push(SupportCombination::blend(&old[i - 1], &old[i], alpha));
        }
        combos.extend_from_slice(&old[k - s..]);
        Ok(RefinedCurve {
            knot_vector: kv.with_inserted(u)?,
            combos,
            source: self.source.clone(),
        })
    }

    pub fn insert_knots(&self, knots: impl IntoIterator<Item = f64>) -> Result<RefinedCurve> {
        knots
            .into_iter()
            .try_fold(self.clone(), |acc, u| acc.insert_knot(u))
    }

    /// Numeric curve obtained by substituting `weights` for the original weights.
    pub fn with_source_weights(&self, weights: &[f64]) -> Result<CurveSpec> {
        let points = self.source.control_points();
        let (pts, ws): (Vec<Point>, Vec<f64>) = self
            .combos
            .iter()
            .map(|c| {
                let (num, den) = c.homogeneous(weights, points);
                (num / den, den)
            })
            .unzip();
        CurveSpec::with_dimension(self.knot_vector.clone(), pts, ws, self.source.dim())
    }

    /// Numeric refined curve for the source weights.
    pub fn to_spec(&self) -> Result<CurveSpec> {
        self.with_source_weights(self.source.weights())
    }

    /// True when every interior knot has multiplicity `p`.
    pub fn is_fully_refined(&self) -> bool {
        let p = self.knot_vector.degree();
        self.knot_vector
            .interior_breaks()
            .iter()
            .all(|&(_, m)| m == p)
    }

    /// Splits a fully refined curve into its Bézier pieces.
    pub fn pieces(&self) -> Result<Vec<BezierPieceExtract>> {
        if !self.is_fully_refined() {
            return Err(Error::Insertion(
                "curve is not fully refined: some interior knot has multiplicity below the degree"
                    .into(),
            ));
        }
        let p = self.knot_vector.degree();
        let breaks = self.knot_vector.breakpoints();
        Ok(breaks
            .windows(2)
            .enumerate()
            .map(|(k, w)| BezierPieceExtract {
                index: k + 1,
                degree: p,
                combos: self.combos[k * p..=(k + 1) * p].to_vec(),
                knot_domain: (w[0], w[1]),
            })
            .collect())
    }
}

/// Knots to insert (ascending, repeated) to raise every interior knot of
/// `kv` to multiplicity `p`.
pub fn bezier_insertions(kv: &KnotVector) -> Vec<f64> {
    let p = kv.degree();
    kv.interior_breaks()
        .into_iter()
        .flat_map(|(u, m)| std::iter::repeat_n(u, p - m))
        .collect()
}

/// One rational Bézier piece of the fully refined curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierPieceExtract {
    index: usize,
    degree: usize,
    combos: Vec<SupportCombination>,
    knot_domain: (f64, f64),
}

impl BezierPieceExtract {
    /// 1-based piece number `m`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn combos(&self) -> &[SupportCombination] {
        &self.combos
    }

    /// `[u_{m−1}, u_m]`.
    pub fn knot_domain(&self) -> (f64, f64) {
        self.knot_domain
    }

    /// First refined index `(m − 1)p`.
    pub fn lattice_offset(&self) -> usize {
        (self.index - 1) * self.degree
    }

    /// `A^m = {(m − 1)p, …, mp}` in refined indices.
    pub fn lattice(&self) -> LatticeSet {
        LatticeSet::range(self.lattice_offset(), self.lattice_offset() + self.degree)
    }

    /// Induced lifted values `λ̄` on `A^m`.
    pub fn lifted_values(&self, lifting: &LiftingFunction) -> Vec<f64> {
        self.combos
            .iter()
            .map(|c| support_exponent(c, lifting))
            .collect()
    }

    /// Maps a curve parameter in this piece's knot span to `[(m−1)p, mp]`.
    pub fn lattice_parameter(&self, u: f64) -> f64 {
        let (a, b) = self.knot_domain;
        self.lattice_offset() as f64 + self.degree as f64 * (u - a) / (b - a)
    }
}

/// Inserts every interior knot up to multiplicity `p` and returns the pieces.
pub fn bezier_extract(spec: &CurveSpec) -> Result<Vec<BezierPieceExtract>> {
    RefinedCurve::identity(spec)
        .insert_knots(bezier_insertions(spec.knot_vector()))?
        .pieces()
}

/// Refined weights `Σ f_i t^λ(i) ω_i` and points of one piece at a given `t`.
pub fn numeric_weights_points(
    piece: &BezierPieceExtract,
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    t: f64,
) -> Result<(Vec<f64>, Vec<Point>)> {
    let lifted = spec.lifted_weights(lifting, t)?;
    Ok(piece
        .combos
        .iter()
        .map(|c| {
            let (num, den) = c.homogeneous(&lifted, spec.control_points());
            (den, num / den)
        })
        .unzip())
}

/// `max λ(i)` over the support of `combo`.
pub fn support_exponent(combo: &SupportCombination, lifting: &LiftingFunction) -> f64 {
    combo
        .indices()
        .map(|i| lifting.get(i))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(degree: usize, knots: Vec<f64>, weights: Vec<f64>) -> CurveSpec {
        let pts = (0..weights.len())
            .map(|i| Point::xy(i as f64, ((i * 7) % 5) as f64))
            .collect();
        CurveSpec::from_parts(degree, knots, pts, weights).unwrap()
    }

    fn assert_combo(c: &SupportCombination, expected: &[(usize, f64)]) {
        assert_eq!(c.len(), expected.len(), "{c:?} vs {expected:?}");
        for (&(i, f), &(j, g)) in c.entries().iter().zip(expected) {
            assert_eq!(i, j);
            assert!((f - g).abs() < 1e-12, "{c:?} vs {expected:?}");
        }
    }

    #[test]
    fn quadratic_insertions_match_worked_coefficients() {
        let s = spec(
            2,
            vec![0.0, 0.0, 0.0, 0.25, 0.75, 1.0, 1.0, 1.0],
            vec![3.0, 2.0, 3.0, 2.0, 5.0],
        );
        let r = RefinedCurve::identity(&s).insert_knot(0.25).unwrap();
        assert_eq!(r.combos().len(), 6);
        assert_combo(&r.combos()[2], &[(1, 2.0 / 3.0), (2, 1.0 / 3.0)]);
        assert_combo(&r.combos()[3], &[(2, 1.0)]);

        let r = RefinedCurve::identity(&s).insert_knot(0.75).unwrap();
        assert_combo(&r.combos()[3], &[(2, 1.0 / 3.0), (3, 2.0 / 3.0)]);
    }

    #[test]
    fn linear_midpoint() {
        let s = spec(1, vec![0.0, 0.0, 1.0, 1.0], vec![1.0, 4.0]);
        let r = RefinedCurve::identity(&s).insert_knot(0.5).unwrap();
        assert_combo(&r.combos()[1], &[(0, 0.5), (1, 0.5)]);
    }

    #[test]
    fn insertion_rejections() {
        let s = spec(
            2,
            vec![0.0, 0.0, 0.0, 0.25, 0.75, 1.0, 1.0, 1.0],
            vec![1.0; 5],
        );
        let r = RefinedCurve::identity(&s);
        assert!(matches!(r.insert_knot(0.0), Err(Error::Insertion(_))));
        assert!(matches!(r.insert_knot(1.0), Err(Error::Insertion(_))));
        let twice = r.insert_knot(0.25).unwrap();
        assert!(matches!(twice.insert_knot(0.25), Err(Error::Insertion(_))));
        assert!(twice.pieces().is_err());
    }

    #[test]
    fn no_interior_knots_is_identity() {
        let s = spec(
            3,
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
            vec![1.0, 2.0, 3.0, 4.0],
        );
        let pieces = bezier_extract(&s).unwrap();
        assert_eq!(pieces.len(), 1);
        for (i, c) in pieces[0].combos().iter().enumerate() {
            assert_combo(c, &[(i, 1.0)]);
        }
    }

    #[test]
    fn quadratic_extraction_has_seven_combos() {
        let s = spec(
            2,
            vec![0.0, 0.0, 0.0, 0.25, 0.75, 1.0, 1.0, 1.0],
            vec![3.0, 2.0, 3.0, 2.0, 5.0],
        );
        let pieces = bezier_extract(&s).unwrap();
        assert_eq!(pieces.len(), 3);
        let all: Vec<_> = pieces.iter().flat_map(|p| p.combos().to_vec()).collect();
        // shared boundaries appear twice in the per-piece lists
        assert_eq!(all.len(), 9);
        assert_combo(&pieces[0].combos()[0], &[(0, 1.0)]);
        assert_combo(&pieces[0].combos()[1], &[(1, 1.0)]);
        assert_combo(&pieces[0].combos()[2], &[(1, 2.0 / 3.0), (2, 1.0 / 3.0)]);
        assert_combo(&pieces[1].combos()[1], &[(2, 1.0)]);
        assert_combo(&pieces[1].combos()[2], &[(2, 1.0 / 3.0), (3, 2.0 / 3.0)]);
        assert_combo(&pieces[2].combos()[1], &[(3, 1.0)]);
        assert_combo(&pieces[2].combos()[2], &[(4, 1.0)]);
        assert_eq!(pieces[1].lattice(), LatticeSet::range(2, 4));
        assert_eq!(pieces[2].knot_domain(), (0.75, 1.0));
    }

    #[test]
    fn cubic_extraction_supports() {
        let s = spec(
            3,
            vec![0.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 1.0, 1.0, 1.0, 1.0],
            vec![1.0, 4.0, 1.0, 4.0, 1.0],
        );
        let r = RefinedCurve::identity(&s)
            .insert_knots(bezier_insertions(s.knot_vector()))
            .unwrap();
        let supports: Vec<Vec<usize>> = r.combos().iter().map(|c| c.indices().collect()).collect();
        assert_eq!(
            supports,
            vec![
                vec![0],
                vec![1],
                vec![1, 2],
                vec![1, 2, 3],
                vec![2, 3],
                vec![3],
                vec![4]
            ]
        );
        assert_eq!(r.pieces().unwrap().len(), 2);
    }

    #[test]
    fn numeric_weights_follow_the_formula() {
        let s = spec(
            2,
            vec![0.0, 0.0, 0.0, 0.25, 0.75, 1.0, 1.0, 1.0],
            vec![3.0, 2.0, 3.0, 2.0, 5.0],
        );
        let lift = LiftingFunction::new(vec![1.0, 2.0, 3.0, 2.0, 1.0]).unwrap();
        let pieces = bezier_extract(&s).unwrap();
        let (w, p) = numeric_weights_points(&pieces[0], &s, &lift, 10.0).unwrap();
        let expected = (2.0 / 3.0) * 100.0 * 2.0 + (1.0 / 3.0) * 1000.0 * 3.0;
        assert!((w[2] - expected).abs() < 1e-9);
        // singleton combos reproduce (t^λ ω, P)
        assert!((w[0] - 30.0).abs() < 1e-12);
        assert_eq!(p[0], s.control_points()[0]);
    }

    #[test]
    fn support_exponent_of_singleton() {
        let lift = LiftingFunction::new(vec![0.5, -2.0, 7.0]).unwrap();
        assert_eq!(
            support_exponent(&SupportCombination::singleton(1), &lift),
            -2.0
        );
    }

    #[test]
    fn from_entries_validation() {
        assert!(SupportCombination::from_entries(vec![(0, 0.5), (1, 0.5)]).is_ok());
        assert!(SupportCombination::from_entries(vec![(0, 0.5), (1, 0.6)]).is_err());
        assert!(SupportCombination::from_entries(vec![(1, 0.5), (0, 0.5)]).is_err());
        assert!(SupportCombination::from_entries(vec![(0, 1.5), (1, -0.5)]).is_err());
    }
}
