use crate::error::{Error, Result};

/// A clamped knot vector on `[0, 1]`.
///
/// The first and last `p + 1` knots equal 0 and 1; interior knots lie strictly
/// inside `(0, 1)` with multiplicity at most `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
    degree: usize,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::validation("degree", "degree must be at least 1"));
        }
        let p = degree;
        if knots.len() < 2 * (p + 1) {
            return Err(Error::validation(
                "knots",
                format!(
                    "a degree-{p} knot vector needs at least {} knots, got {}",
                    2 * (p + 1),
                    knots.len()
                ),
            ));
        }
        if let Some(k) = knots.iter().position(|u| !u.is_finite()) {
            return Err(Error::validation(
                format!("knots[{k}]"),
                "knot is not finite",
            ));
        }
        if let Some(k) = knots.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::validation(
                format!("knots[{}]", k + 1),
                "knots must be nondecreasing",
            ));
        }
        let len = knots.len();
        if let Some(k) = (0..=p).find(|&k| knots[k] != 0.0) {
            return Err(Error::validation(
                format!("knots[{k}]"),
                format!(
                    "knot vector must be clamped: first {} knots must be 0",
                    p + 1
                ),
            ));
        }
        if let Some(k) = (len - p - 1..len).find(|&k| knots[k] != 1.0) {
            return Err(Error::validation(
                format!("knots[{k}]"),
                format!(
                    "knot vector must be clamped: last {} knots must be 1",
                    p + 1
                ),
            ));
        }
        let interior = &knots[p + 1..len - p - 1];
        if let Some(k) = interior.iter().position(|&u| u <= 0.0 || u >= 1.0) {
            return Err(Error::validation(
                format!("knots[{}]", k + p + 1),
                "interior knots must lie strictly inside (0, 1)",
            ));
        }
        let kv = KnotVector { knots, degree };
        for (u, mult) in kv.interior_breaks() {
            if mult > p {
                return Err(Error::validation(
                    "knots",
                    format!("interior knot {u} has multiplicity {mult} > degree {p}"),
                ));
            }
        }
        Ok(kv)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Number of control points the knot vector supports.
    pub fn control_count(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Distinct interior knots with their multiplicities, ascending.
    pub fn interior_breaks(&self) -> Vec<(f64, usize)> {
        let p = self.degree;
        let interior = &self.knots[p + 1..self.knots.len() - p - 1];
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &u in interior {
            match out.last_mut() {
                Some((v, m)) if *v == u => *m += 1,
                _ => out.push((u, 1)),
            }
        }
        out
    }

    /// Number of nonempty knot spans (Bézier pieces after extraction).
    pub fn segment_count(&self) -> usize {
        self.interior_breaks().len() + 1
    }

    /// Breakpoints `0 = u_0 < u_1 < … < u_n = 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        out.extend(self.interior_breaks().into_iter().map(|(u, _)| u));
        out.push(1.0);
        out
    }

    pub fn multiplicity(&self, u: f64) -> usize {
        self.knots.iter().filter(|&&k| k == u).count()
    }

    /// Index `k` of the span with `U[k] ≤ u < U[k+1]`, `p ≤ k < control_count`.
    /// At `u = 1` the last nonempty span is returned (left limit).
    pub fn find_span(&self, u: f64) -> usize {
        let n = self.control_count() - 1;
        let p = self.degree;
        if u >= self.knots[n + 1] {
            return n;
        }
        if u <= self.knots[p] {
            return p;
        }
        // largest k with knots[k] <= u
        let k = self.knots.partition_point(|&x| x <= u) - 1;
        k.clamp(p, n)
    }

    /// Copy of this vector with `u` inserted once. Validity is rechecked.
    pub(crate) fn with_inserted(&self, u: f64) -> Result<KnotVector> {
        let mut knots = self.knots.clone();
        let at = knots.partition_point(|&x| x <= u);
        knots.insert(at, u);
        KnotVector::new(knots, self.degree)
    }
}
