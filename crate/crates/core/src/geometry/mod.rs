//! Points, knot vectors, B-spline bases and curve evaluators.

mod basis;
mod curve;
mod knots;
mod lattice;
mod point;
mod toric;

pub use basis::bspline_basis_all;
pub(crate) use curve::check_t;
pub use curve::{eval_nurbs, eval_nurbs_lifted, CurveSpec};
pub use knots::KnotVector;
pub use lattice::{binomial, LatticeSet, LiftingFunction};
pub use point::{bounding_diameter, Point};
pub use toric::{eval_toric_bezier, ToricBezierPiece};
