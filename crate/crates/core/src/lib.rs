//! Toric degenerations of NURBS curves.
//!
//! A NURBS curve whose weights are multiplied by `t^λ(i)` collapses, as
//! `t → ∞`, onto a piecewise rational curve built from the upper convex hull
//! of the lifted control indices. This crate computes every stage of that
//! process:
//!
//! * [`geometry`]: B-spline bases, NURBS and lifted NURBS evaluation, toric
//!   Bézier pieces over arbitrary integer lattice subsets.
//! * [`refinement`]: Boehm knot insertion carried out on convex-combination
//!   coefficients over the original control indices, and Bézier extraction.
//! * [`decomposition`]: upper hulls of lifted lattice points and the regular
//!   decompositions they induce, per Bézier piece.
//! * [`degeneration`]: limit weights and points, and the regular control
//!   curve assembled from them.
//! * [`verification`]: sampled Hausdorff distances, convergence reports and a
//!   polyline self-intersection detector.
//! * [`document`] and [`render`]: the JSON curve/scene format and SVG frames.

pub mod decomposition;
pub mod degeneration;
pub mod document;
pub mod error;
pub mod geometry;
pub mod refinement;
pub mod render;
pub mod verification;

pub use decomposition::{
    nurbs_regular_decomposition, regular_decomposition, upper_hull, LiftedConfiguration,
    NurbsRegularDecomposition, PieceDecomposition, RegularDecomposition, UpperEdge,
};
pub use degeneration::{
    limit_element, regular_control_curve, regular_control_curve_with, sample_piece,
    sample_regular_control_curve, CoefficientRule, LimitElement, RegularControlCurve, RegularPiece,
};
pub use document::{AnyDocument, CurveDocument, Meta, SceneCurve, SceneDocument, Style};
pub use error::{Error, Result};
pub use geometry::{
    bspline_basis_all, eval_nurbs, eval_nurbs_lifted, eval_toric_bezier, CurveSpec, KnotVector,
    LatticeSet, LiftingFunction, Point, ToricBezierPiece,
};
pub use refinement::{
    bezier_extract, numeric_weights_points, support_exponent, BezierPieceExtract, RefinedCurve,
    SupportCombination,
};
pub use render::{render_frame, write_frames, Manifest, Viewport};
pub use verification::{
    convergence_report, convergence_report_with, directed_hausdorff, hausdorff_distance,
    paired_samples, polyline_hausdorff, sample_lifted_curve, self_intersections, spike_report,
    ConvergenceReport, Crossing, PairedSamples, SamplingOptions, SpikeReport,
};
