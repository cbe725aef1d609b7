//! JSON curve and scene documents.
//!
//! ```json
//! {
//!   "degree": 2,
//!   "knots": [0, 0, 0, 0.25, 0.75, 1, 1, 1],
//!   "points": [[0, 0], [1, 3], [3, 4], [5, 2], [6, 0]],
//!   "weights": [3, 2, 3, 2, 5],
//!   "lifting": [1, 2, 3, 2, 1],
//!   "meta": { "name": "arch" }
//! }
//! ```
//!
//! Reals are written as JSON numbers in their shortest round-trip form. On
//! input a real may also be a decimal string such as `"0.1"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, KnotVector, LiftingFunction, Point};

/// Rendering hints; ignored by the numerical code.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Style {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stroke: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

/// Free-form descriptive data. Unknown keys are kept.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<Style>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl Meta {
    pub fn named(name: impl Into<String>) -> Self {
        Meta {
            name: Some(name.into()),
            ..Meta::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.name.is_none()
            && self.description.is_none()
            && self.style.is_none()
            && self.extra.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub degree: usize,
    #[serde(deserialize_with = "reals")]
    pub knots: Vec<f64>,
    #[serde(deserialize_with = "real_rows")]
    pub points: Vec<Vec<f64>>,
    #[serde(deserialize_with = "reals")]
    pub weights: Vec<f64>,
    #[serde(
        default,
        deserialize_with = "optional_reals",
        skip_serializing_if = "Option::is_none"
    )]
    pub lifting: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Meta::is_empty")]
    pub meta: Meta,
}

impl CurveDocument {
    pub fn from_spec(spec: &CurveSpec, lifting: Option<&LiftingFunction>, meta: Meta) -> Self {
        CurveDocument {
            degree: spec.degree(),
            knots: spec.knot_vector().knots().to_vec(),
            points: spec
                .control_points()
                .iter()
                .map(|p| p.coords(spec.dim()))
                .collect(),
            weights: spec.weights().to_vec(),
            lifting: lifting.map(|l| l.values().to_vec()),
            meta,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    /// Checks every invariant and returns the curve.
    pub fn to_spec(&self) -> Result<CurveSpec> {
        let dim = self.points.first().map_or(2, Vec::len);
        let mut points = Vec::with_capacity(self.points.len());
        for (k, row) in self.points.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::validation(
                    format!("points[{k}]"),
                    format!(
                        "expected {dim} coordinates like points[0], got {}",
                        row.len()
                    ),
                ));
            }
            let p = Point::from_slice(row).ok_or_else(|| {
                Error::validation(format!("points[{k}]"), "a point needs 2 or 3 coordinates")
            })?;
            points.push(p);
        }
        let kv = KnotVector::new(self.knots.clone(), self.degree)?;
        CurveSpec::with_dimension(kv, points, self.weights.clone(), dim)
    }

    /// The lifting, if present, checked against the control count.
    pub fn lifting_function(&self) -> Result<Option<LiftingFunction>> {
        let Some(values) = &self.lifting else {
            return Ok(None);
        };
        let lifting = LiftingFunction::new(values.clone())?;
        lifting.check_len(self.points.len())?;
        Ok(Some(lifting))
    }

    /// Like [`CurveDocument::lifting_function`] but absence is an error.
    pub fn require_lifting(&self) -> Result<LiftingFunction> {
        self.lifting_function()?
            .ok_or_else(|| Error::validation("lifting", "this operation needs a lifting"))
    }

    pub fn validate(&self) -> Result<(CurveSpec, Option<LiftingFunction>)> {
        Ok((self.to_spec()?, self.lifting_function()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub curves: Vec<CurveDocument>,
    #[serde(default, deserialize_with = "reals")]
    pub t_schedule: Vec<f64>,
    #[serde(default, skip_serializing_if = "Meta::is_empty")]
    pub meta: Meta,
}

/// A validated scene member.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneCurve {
    pub spec: CurveSpec,
    pub lifting: Option<LiftingFunction>,
    pub meta: Meta,
}

impl SceneDocument {
    pub fn from_curve(curve: CurveDocument, t_schedule: Vec<f64>) -> Self {
        SceneDocument {
            curves: vec![curve],
            t_schedule,
            meta: Meta::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    /// Validates every member; errors name the member, e.g. `curves[1].weights[0]`.
    pub fn validate(&self) -> Result<Vec<SceneCurve>> {
        if self.curves.is_empty() {
            return Err(Error::validation(
                "curves",
                "a scene needs at least one curve",
            ));
        }
        validate_schedule(&self.t_schedule, "t_schedule")?;
        self.curves
            .iter()
            .enumerate()
            .map(|(k, doc)| {
                let (spec, lifting) = doc
                    .validate()
                    .map_err(|e| prefix_field(e, &format!("curves[{k}]")))?;
                Ok(SceneCurve {
                    spec,
                    lifting,
                    meta: doc.meta.clone(),
                })
            })
            .collect()
    }
}

/// Either a scene or a bare curve, told apart by the `curves` key.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDocument {
    Curve(CurveDocument),
    Scene(SceneDocument),
}

impl AnyDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(parse_error)?;
        if value.get("curves").is_some() {
            SceneDocument::parse(text).map(AnyDocument::Scene)
        } else {
            CurveDocument::parse(text).map(AnyDocument::Curve)
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }

    pub fn into_scene(self) -> SceneDocument {
        match self {
            AnyDocument::Curve(c) => SceneDocument::from_curve(c, Vec::new()),
            AnyDocument::Scene(s) => s,
        }
    }
}

/// Every entry finite and positive.
pub fn validate_schedule(schedule: &[f64], field: &str) -> Result<()> {
    match schedule.iter().position(|t| !(t.is_finite() && *t > 0.0)) {
        Some(k) => Err(Error::validation(
            format!("{field}[{k}]"),
            "t values must be finite and positive",
        )),
        None => Ok(()),
    }
}

pub(crate) fn prefix_field(e: Error, prefix: &str) -> Error {
    match e {
        Error::Validation { field, message } => Error::Validation {
            field: format!("{prefix}.{field}"),
            message,
        },
        other => other,
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

struct Real(f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a decimal string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                v.trim()
                    .parse()
                    .map(Real)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal number")))
            }
        }

        d.deserialize_any(RealVisitor)
    }
}

fn reals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Ok(Vec::<Real>::deserialize(d)?
        .into_iter()
        .map(|r| r.0)
        .collect())
}

fn optional_reals<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<Vec<f64>>, D::Error> {
    Ok(Option::<Vec<Real>>::deserialize(d)?.map(|v| v.into_iter().map(|r| r.0).collect()))
}

fn real_rows<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<f64>>, D::Error> {
    Ok(Vec::<Vec<Real>>::deserialize(d)?
        .into_iter()
        .map(|row| row.into_iter().map(|r| r.0).collect())
        .collect())
}
