//! SVG frames of a scene at a sequence of `t` values.
//!
//! Each frame draws, per curve, the control polygon, the regular control
//! curve (dashed, with a dot for every collapsed piece) and the lifted curve
//! at that frame's `t`. All frames of a run share one viewport so they can be
//! flipped through. Output bytes depend only on the inputs.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::degeneration::{regular_control_curve, sample_piece};
use crate::document::{validate_schedule, SceneCurve};
use crate::error::{Error, Result};
use crate::geometry::{LiftingFunction, Point};
use crate::verification::sample_lifted_curve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const LIMIT_STROKE: &str = "#d62728";
const LIMIT_PIECE_SAMPLES: usize = 100;

/// Model-space rectangle mapped onto the canvas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Viewport {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Viewport {
    /// Bounding box of every control point; curves and their limits stay
    /// inside the control hull for every `t`.
    pub fn of(curves: &[SceneCurve]) -> Self {
        let mut v = Viewport {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for p in curves.iter().flat_map(|c| c.spec.control_points()) {
            v.min_x = v.min_x.min(p.x);
            v.min_y = v.min_y.min(p.y);
            v.max_x = v.max_x.max(p.x);
            v.max_y = v.max_y.max(p.y);
        }
        if v.max_x - v.min_x == 0.0 {
            v.min_x -= 0.5;
            v.max_x += 0.5;
        }
        if v.max_y - v.min_y == 0.0 {
            v.min_y -= 0.5;
            v.max_y += 0.5;
        }
        v
    }

    fn scale(&self) -> f64 {
        ((WIDTH - 2.0 * MARGIN) / (self.max_x - self.min_x))
            .min((HEIGHT - 2.0 * MARGIN) / (self.max_y - self.min_y))
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let s = self.scale();
        (
            MARGIN + (p.x - self.min_x) * s,
            HEIGHT - MARGIN - (p.y - self.min_y) * s,
        )
    }
}

fn polyline(
    out: &mut String,
    view: &Viewport,
    points: &[Point],
    class: &str,
    stroke: &str,
    extra: &str,
) {
    let coords: Vec<String> = points
        .iter()
        .map(|p| {
            let (x, y) = view.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"    <polyline class="{class}" fill="none" stroke="{stroke}"{extra} points="{}"/>"#,
        coords.join(" ")
    );
}

fn dot(out: &mut String, view: &Viewport, p: &Point, class: &str, r: f64, fill: &str) {
    let (x, y) = view.map(p);
    let _ = writeln!(
        out,
        r#"    <circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One SVG document for the scene at `t`.
pub fn render_frame(
    curves: &[SceneCurve],
    t: f64,
    samples: usize,
    view: &Viewport,
) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    for (k, curve) in curves.iter().enumerate() {
        let style = curve.meta.style.clone().unwrap_or_default();
        let stroke = style
            .stroke
            .unwrap_or_else(|| PALETTE[k % PALETTE.len()].to_string());
        let width = style.width.unwrap_or(2.0);
        let name = curve
            .meta
            .name
            .clone()
            .unwrap_or_else(|| format!("curve {k}"));
        let _ = writeln!(
            out,
            r#"  <g class="scene-curve" data-name="{}">"#,
            escape(&name)
        );

        polyline(
            &mut out,
            view,
            curve.spec.control_points(),
            "control-polygon",
            "#999999",
            r#" stroke-width="1" stroke-dasharray="2 3""#,
        );
        for p in curve.spec.control_points() {
            dot(&mut out, view, p, "control-point", 2.5, "#999999");
        }

        if let Some(lifting) = &curve.lifting {
            let rcc = regular_control_curve(&curve.spec, lifting)?;
            for piece in rcc.pieces() {
                if piece.degenerate {
                    dot(
                        &mut out,
                        view,
                        &piece.toric.first_point(),
                        "limit-collapse",
                        4.5,
                        LIMIT_STROKE,
                    );
                    continue;
                }
                let pts = sample_piece(piece, LIMIT_PIECE_SAMPLES)?;
                polyline(
                    &mut out,
                    view,
                    &pts,
                    "limit",
                    LIMIT_STROKE,
                    r#" stroke-width="2.5" stroke-dasharray="7 4" stroke-opacity="0.8""#,
                );
            }
        }

        let lifting = curve
            .lifting
            .clone()
            .unwrap_or_else(|| LiftingFunction::constant(curve.spec.control_count(), 0.0));
        let pts = sample_lifted_curve(&curve.spec, &lifting, t, samples)?;
        polyline(
            &mut out,
            view,
            &pts,
            "curve",
            &stroke,
            &format!(r#" stroke-width="{width}""#),
        );
        let _ = writeln!(out, "  </g>");
    }
    let _ = writeln!(
        out,
        r##"  <text x="{MARGIN}" y="{:.0}" font-family="sans-serif" font-size="16" fill="#333333">t = {t}</text>"##,
        MARGIN * 0.6
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameEntry {
    pub file: String,
    pub t: f64,
}

/// Written next to the frames as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub frames: Vec<FrameEntry>,
    pub samples: usize,
    pub curves: Vec<String>,
    pub viewport: Viewport,
    pub width: f64,
    pub height: f64,
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Renders one frame per `t` into `out_dir` (created if missing) and writes
/// the manifest.
pub fn write_frames(
    curves: &[SceneCurve],
    schedule: &[f64],
    samples: usize,
    out_dir: &Path,
) -> Result<Manifest> {
    if schedule.is_empty() {
        return Err(Error::validation(
            "t_schedule",
            "at least one t value is needed",
        ));
    }
    validate_schedule(schedule, "t_schedule")?;
    if curves.is_empty() {
        return Err(Error::validation(
            "curves",
            "a scene needs at least one curve",
        ));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    let view = Viewport::of(curves);
    let mut frames = Vec::with_capacity(schedule.len());
    for (k, &t) in schedule.iter().enumerate() {
        let file = format!("frame_{k:03}.svg");
        let path = out_dir.join(&file);
        let svg = render_frame(curves, t, samples, &view)?;
        std::fs::write(&path, svg).map_err(|e| io_error(&path, e))?;
        frames.push(FrameEntry { file, t });
    }
    let manifest = Manifest {
        frames,
        samples,
        curves: curves
            .iter()
            .enumerate()
            .map(|(k, c)| c.meta.name.clone().unwrap_or_else(|| format!("curve {k}")))
            .collect(),
        viewport: view,
        width: WIDTH,
        height: HEIGHT,
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    std::fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::CurveDocument;

    fn arch() -> SceneCurve {
        let doc = CurveDocument::parse(
            r#"{"degree": 2, "knots": [0,0,0,0.25,0.75,1,1,1],
                "points": [[0,0],[1,3],[3,4],[5,2],[6,0]], "weights": [3,2,3,2,5],
                "lifting": [1,2,3,2,1], "meta": {"name": "a<b"}}"#,
        )
        .unwrap();
        let (spec, lifting) = doc.validate().unwrap();
        SceneCurve {
            spec,
            lifting,
            meta: doc.meta,
        }
    }

    #[test]
    fn frame_has_every_layer() {
        let c = [arch()];
        let svg = render_frame(&c, 5.0, 50, &Viewport::of(&c)).unwrap();
        for class in [
            "control-polygon",
            "control-point",
            "limit",
            "limit-collapse",
            "curve",
        ] {
            assert!(svg.contains(&format!("class=\"{class}\"")), "{class}");
        }
        assert!(svg.contains("data-name=\"a&lt;b\""));
        assert!(svg.contains("t = 5"));
        assert_eq!(svg, render_frame(&c, 5.0, 50, &Viewport::of(&c)).unwrap());
    }

    #[test]
    fn viewport_maps_into_canvas() {
        let c = [arch()];
        let v = Viewport::of(&c);
        let (x0, y0) = v.map(&Point::xy(0.0, 0.0));
        let (x1, y1) = v.map(&Point::xy(6.0, 4.0));
        assert_eq!((x0, y0), (MARGIN, HEIGHT - MARGIN));
        assert!(x1 <= WIDTH - MARGIN + 1e-9 && y1 >= MARGIN - 1e-9);
    }
}
