//! Request handlers shared by the command line and the HTTP service, so both
//! produce the same numbers for the same document.

use serde::Serialize;
use toric_nurbs::{
    convergence_report, eval_nurbs_lifted, nurbs_regular_decomposition, regular_control_curve,
    sample_lifted_curve, ConvergenceReport, CurveDocument, CurveSpec, Error, LiftingFunction,
    Result,
};

pub const DEFAULT_SAMPLES: usize = 400;
pub const DEFAULT_TOL: f64 = 1e-2;
pub const DEFAULT_SCHEDULE: [f64; 4] = [10.0, 1e2, 1e3, 1e4];

/// Machine-readable error body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError {
            code: e.code().to_string(),
            field: e.field().map(str::to_string),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateResponse {
    pub valid: bool,
    pub degree: usize,
    pub dimension: usize,
    pub control_points: usize,
    pub segments: usize,
    pub has_lifting: bool,
}

pub fn validate(doc: &CurveDocument) -> Result<ValidateResponse> {
    let (spec, lifting) = doc.validate()?;
    Ok(ValidateResponse {
        valid: true,
        degree: spec.degree(),
        dimension: spec.dim(),
        control_points: spec.control_count(),
        segments: spec.segment_count(),
        has_lifting: lifting.is_some(),
    })
}

fn lifting_or_flat(spec: &CurveSpec, lifting: Option<LiftingFunction>) -> LiftingFunction {
    lifting.unwrap_or_else(|| LiftingFunction::constant(spec.control_count(), 0.0))
}

fn coords(spec: &CurveSpec, points: impl IntoIterator<Item = toric_nurbs::Point>) -> Vec<Vec<f64>> {
    points.into_iter().map(|p| p.coords(spec.dim())).collect()
}

/// Lifted curve at each parameter; without a lifting this is the plain curve.
pub fn evaluate(doc: &CurveDocument, params: &[f64], t: f64) -> Result<Vec<Vec<f64>>> {
    let (spec, lifting) = doc.validate()?;
    let lifting = lifting_or_flat(&spec, lifting);
    let pts = params
        .iter()
        .map(|&u| eval_nurbs_lifted(&spec, &lifting, t, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(coords(&spec, pts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleResponse {
    pub t: f64,
    pub count: usize,
    pub points: Vec<Vec<f64>>,
}

/// `count` uniform parameter samples of the lifted curve at `t`.
pub fn sample(doc: &CurveDocument, t: f64, count: usize) -> Result<SampleResponse> {
    let (spec, lifting) = doc.validate()?;
    let lifting = lifting_or_flat(&spec, lifting);
    let pts = sample_lifted_curve(&spec, &lifting, t, count)?;
    Ok(SampleResponse {
        t,
        count,
        points: coords(&spec, pts),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposedPiece {
    pub index: usize,
    pub lattice: Vec<usize>,
    pub lifted: Vec<f64>,
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeResponse {
    /// Piece by piece in refined indices, e.g. `{{0,1},{1,2}} | {{2,3,4}}`.
    pub text: String,
    pub pieces: Vec<DecomposedPiece>,
}

pub fn decompose(doc: &CurveDocument) -> Result<DecomposeResponse> {
    let spec = doc.to_spec()?;
    let lifting = doc.require_lifting()?;
    let d = nurbs_regular_decomposition(&spec, &lifting)?;
    Ok(DecomposeResponse {
        text: d.to_string(),
        pieces: d
            .pieces()
            .iter()
            .map(|p| DecomposedPiece {
                index: p.index,
                lattice: p.lattice.indices().to_vec(),
                lifted: p.lifted.clone(),
                subsets: p.decomposition.as_vecs(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPiece {
    pub bezier_index: usize,
    pub lattice: Vec<usize>,
    pub coeffs: Vec<f64>,
    pub weights: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitResponse {
    pub pieces: Vec<LimitPiece>,
}

/// The regular control curve as toric pieces.
pub fn limit(doc: &CurveDocument) -> Result<LimitResponse> {
    let spec = doc.to_spec()?;
    let lifting = doc.require_lifting()?;
    let rcc = regular_control_curve(&spec, &lifting)?;
    Ok(LimitResponse {
        pieces: rcc
            .pieces()
            .iter()
            .map(|p| LimitPiece {
                bezier_index: p.bezier_index,
                lattice: p.subset().indices().to_vec(),
                coeffs: p.toric.coeffs().to_vec(),
                weights: p.toric.weights().to_vec(),
                points: coords(&spec, p.toric.points().iter().copied()),
                degenerate: p.degenerate,
            })
            .collect(),
    })
}

pub fn report(
    doc: &CurveDocument,
    schedule: &[f64],
    samples: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    let spec = doc.to_spec()?;
    let lifting = doc.require_lifting()?;
    convergence_report(&spec, &lifting, schedule, samples, tol)
}
