use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing, nonempty set of lattice indices `a_0 < … < a_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSet(Vec<usize>);

impl LatticeSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::validation("lattice", "lattice set is empty"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(
                "lattice",
                "indices must be strictly increasing",
            ));
        }
        Ok(LatticeSet(indices))
    }

    /// The gap-free set `{first, …, last}`.
    pub fn range(first: usize, last: usize) -> Self {
        assert!(first <= last, "empty lattice range {first}..={last}");
        LatticeSet((first..=last).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// Endpoints of the convex hull `[a_0, a_m]`.
    pub fn hull(&self) -> (usize, usize) {
        (self.first(), self.last())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Growth exponents `λ(i)`: weight `i` is scaled by `t^λ(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingFunction(Vec<f64>);

impl LiftingFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(
                format!("lifting[{k}]"),
                "lifting values must be finite",
            ));
        }
        Ok(LiftingFunction(values))
    }

    pub fn constant(len: usize, value: f64) -> Self {
        LiftingFunction(vec![value; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0[index]
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.0.len() != expected {
            return Err(Error::validation(
                "lifting",
                format!("expected {expected} values, got {}", self.0.len()),
            ));
        }
        Ok(())
    }
}

impl From<&[f64]> for LiftingFunction {
    /// Panics on non-finite input; use [`LiftingFunction::new`] for untrusted data.
    fn from(values: &[f64]) -> Self {
        LiftingFunction::new(values.to_vec()).expect("finite lifting values")
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc.round()
}
