//! Regular decompositions of 1-D lattice sets induced by a lifting.
//!
//! Lattice points are lifted to `(a, λ(a))`; the upper edges of the convex
//! hull of the lifted points project to a subdivision of `[a_0, a_m]`, and
//! each edge collects the lattice points whose lifts lie on it.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, LatticeSet, LiftingFunction};
use crate::refinement::bezier_extract;

/// Lifted points `(a_i, λ(a_i))` with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedConfiguration {
    points: Vec<(f64, f64)>,
}

impl LiftedConfiguration {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::validation(
                "points",
                "abscissae must be strictly increasing",
            ));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::validation("points", "lifted points must be finite"));
        }
        Ok(LiftedConfiguration { points })
    }

    pub fn from_lattice(lattice: &LatticeSet, lifting: &LiftingFunction) -> Result<Self> {
        lifting.check_len(lattice.len())?;
        LiftedConfiguration::new(
            lattice
                .iter()
                .zip(lifting.values())
                .map(|(a, l)| (a as f64, *l))
                .collect(),
        )
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// On-edge tolerance `1e-9 · (1 + max |λ|)`.
    pub fn tolerance(&self) -> f64 {
        let scale = self.points.iter().map(|(_, y)| y.abs()).fold(0.0, f64::max);
        1e-9 * (1.0 + scale)
    }

    /// Height of the line through points `left` and `right` at abscissa `x`.
    fn line_at(&self, left: usize, right: usize, x: f64) -> f64 {
        let (x0, y0) = self.points[left];
        let (x1, y1) = self.points[right];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// How far point `index` lies below the line of `edge` (negative: above).
    pub fn gap_below(&self, edge: &UpperEdge, index: usize) -> f64 {
        self.line_at(edge.left, edge.right, self.points[index].0) - self.points[index].1
    }
}

/// An upper hull edge between two configuration points, by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpperEdge {
    pub left: usize,
    pub right: usize,
}

/// Upper envelope of the lifted points, left to right (monotone chain).
///
/// Only strictly convex vertices are kept, so collinear lifts produce a
/// single edge.
pub fn upper_hull(config: &LiftedConfiguration) -> Result<Vec<UpperEdge>> {
    if config.len() < 2 {
        return Err(Error::Degenerate(format!(
            "upper hull needs at least 2 points, got {}",
            config.len()
        )));
    }
    let tol = config.tolerance();
    let mut chain: Vec<usize> = Vec::with_capacity(config.len());
    for k in 0..config.len() {
        while chain.len() >= 2 {
            let o = chain[chain.len() - 2];
            let a = chain[chain.len() - 1];
            let gap = config.line_at(o, k, config.points[a].0) - config.points[a].1;
            if gap >= -tol {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(k);
    }
    Ok(chain
        .windows(2)
        .map(|w| UpperEdge {
            left: w[0],
            right: w[1],
        })
        .collect())
}

/// Subsets `s_j` of a lattice together with their domain cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularDecomposition {
    subsets: Vec<LatticeSet>,
    domain_cells: Vec<(f64, f64)>,
}

impl RegularDecomposition {
    pub fn subsets(&self) -> &[LatticeSet] {
        &self.subsets
    }

    pub fn domain_cells(&self) -> &[(f64, f64)] {
        &self.domain_cells
    }

    /// Subsets as plain index vectors.
    pub fn as_vecs(&self) -> Vec<Vec<usize>> {
        self.subsets.iter().map(|s| s.indices().to_vec()).collect()
    }

    fn offset(&self, by: usize) -> RegularDecomposition {
        RegularDecomposition {
            subsets: self
                .subsets
                .iter()
                .map(|s| {
                    LatticeSet::new(s.iter().map(|i| i + by).collect()).expect("shifted lattice")
                })
                .collect(),
            domain_cells: self
                .domain_cells
                .iter()
                .map(|(a, b)| (a + by as f64, b + by as f64))
                .collect(),
        }
    }
}

impl fmt::Display for RegularDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.subsets.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Decomposition of `lattice` induced by `lifting` (one value per element).
pub fn regular_decomposition(
    lattice: &LatticeSet,
    lifting: &LiftingFunction,
) -> Result<RegularDecomposition> {
    let config = LiftedConfiguration::from_lattice(lattice, lifting)?;
    let edges = upper_hull(&config)?;
    let tol = config.tolerance();
    let idx = lattice.indices();
    let mut subsets = Vec::with_capacity(edges.len());
    let mut domain_cells = Vec::with_capacity(edges.len());
    for edge in &edges {
        let members = (edge.left..=edge.right)
            .filter(|&k| config.gap_below(edge, k).abs() <= tol)
            .map(|k| idx[k])
            .collect();
        subsets.push(LatticeSet::new(members)?);
        domain_cells.push((idx[edge.left] as f64, idx[edge.right] as f64));
    }
    Ok(RegularDecomposition {
        subsets,
        domain_cells,
    })
}

/// Decomposition of one Bézier piece `A^m`, in global refined indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceDecomposition {
    pub index: usize,
    pub lattice: LatticeSet,
    /// Induced lifted values on `A^m`.
    pub lifted: Vec<f64>,
    pub decomposition: RegularDecomposition,
}

/// Per-piece decompositions of the refined lattice `{0, …, np}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsRegularDecomposition {
    pieces: Vec<PieceDecomposition>,
}

impl NurbsRegularDecomposition {
    pub fn pieces(&self) -> &[PieceDecomposition] {
        &self.pieces
    }

    pub fn as_vecs(&self) -> Vec<Vec<Vec<usize>>> {
        self.pieces
            .iter()
            .map(|p| p.decomposition.as_vecs())
            .collect()
    }

    /// Nested set notation, e.g. `{{{0,1},{1,2}},{{2,3,4}}}`.
    pub fn nested(&self) -> String {
        let inner: Vec<String> = self
            .pieces
            .iter()
            .map(|p| p.decomposition.to_string())
            .collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Display for NurbsRegularDecomposition {
    /// Piece by piece, separated by ` | `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", p.decomposition)?;
        }
        Ok(())
    }
}

/// Extracts the Bézier pieces, lifts each `A^m` by the induced values `λ̄`
/// and decomposes it.
pub fn nurbs_regular_decomposition(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
) -> Result<NurbsRegularDecomposition> {
    lifting.check_len(spec.control_count())?;
    let pieces = bezier_extract(spec)?
        .iter()
        .map(|piece| {
            let lifted = piece.lifted_values(lifting);
            let local = LatticeSet::range(0, piece.degree());
            let decomposition =
                regular_decomposition(&local, &LiftingFunction::new(lifted.clone())?)?
                    .offset(piece.lattice_offset());
            Ok(PieceDecomposition {
                index: piece.index(),
                lattice: piece.lattice(),
                lifted,
                decomposition,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NurbsRegularDecomposition { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decompose(lifts: &[f64]) -> Vec<Vec<usize>> {
        let lattice = LatticeSet::range(0, lifts.len() - 1);
        regular_decomposition(&lattice, &LiftingFunction::from(lifts))
            .unwrap()
            .as_vecs()
    }

    #[test]
    fn symmetric_tent() {
        let config = LiftedConfiguration::from_lattice(
            &LatticeSet::range(0, 4),
            &LiftingFunction::from(&[2.0, 3.0, 4.0, 3.0, 2.0][..]),
        )
        .unwrap();
        let edges = upper_hull(&config).unwrap();
        assert_eq!(
            edges,
            vec![
                UpperEdge { left: 0, right: 2 },
                UpperEdge { left: 2, right: 4 }
            ]
        );
        assert_eq!(
            decompose(&[2.0, 3.0, 4.0, 3.0, 2.0]),
            vec![vec![0, 1, 2], vec![2, 3, 4]]
        );
    }

    #[test]
    fn point_below_envelope_is_excluded() {
        let lifts = [2.0, 3.0, 4.0, 2.0, 3.0];
        let config = LiftedConfiguration::from_lattice(
            &LatticeSet::range(0, 4),
            &LiftingFunction::from(&lifts[..]),
        )
        .unwrap();
        let edges = upper_hull(&config).unwrap();
        assert_eq!(edges.len(), 2);
        assert!(config.gap_below(&edges[1], 3) > 0.1);
        assert_eq!(decompose(&lifts), vec![vec![0, 1, 2], vec![2, 4]]);
    }

    #[test]
    fn collinear_and_constant() {
        let config = LiftedConfiguration::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(
            upper_hull(&config).unwrap(),
            vec![UpperEdge { left: 0, right: 2 }]
        );
        assert_eq!(decompose(&[1.5; 6]), vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn degenerate_inputs() {
        let config = LiftedConfiguration::new(vec![(0.0, 1.0)]).unwrap();
        assert!(matches!(upper_hull(&config), Err(Error::Degenerate(_))));
        assert!(LiftedConfiguration::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        let err = regular_decomposition(
            &LatticeSet::range(0, 3),
            &LiftingFunction::from(&[1.0, 2.0][..]),
        );
        assert!(err.is_err());
    }

    #[test]
    fn gapped_lattice_keeps_global_indices() {
        let lattice = LatticeSet::new(vec![1, 4, 6]).unwrap();
        let d =
            regular_decomposition(&lattice, &LiftingFunction::from(&[0.0, 0.0, 0.0][..])).unwrap();
        assert_eq!(d.as_vecs(), vec![vec![1, 4, 6]]);
        assert_eq!(d.domain_cells(), &[(1.0, 6.0)]);
        assert_eq!(d.to_string(), "{{1,4,6}}");
    }
}
