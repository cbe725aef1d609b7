//! Numerical checks on the degeneration: sampled Hausdorff distances between
//! the lifted curve and its regular control curve, and a polyline
//! self-intersection detector.

use rayon::prelude::*;
use serde::Serialize;

use crate::degeneration::{regular_control_curve, RegularControlCurve};
use crate::error::{Error, Result};
use crate::geometry::{binomial, check_t, eval_nurbs_lifted, CurveSpec, LiftingFunction, Point};
use crate::refinement::bezier_extract;

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate(
            "Hausdorff distance of an empty point set".into(),
        ));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

/// `max_{x ∈ a} min_{y ∈ b} |x − y|`, both sets nonempty.
pub fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let segs: Vec<(Point, Point)> = b.iter().map(|&y| (y, y)).collect();
    directed_to_segments(a, &segs)
}

const CHUNK: usize = 32;

/// Axis-aligned box around a run of consecutive segments.
struct Chunk {
    lo: Point,
    hi: Point,
    range: std::ops::Range<usize>,
}

impl Chunk {
    fn distance(&self, x: &Point) -> f64 {
        let gap = |v: f64, lo: f64, hi: f64| (lo - v).max(v - hi).max(0.0);
        let (dx, dy, dz) = (
            gap(x.x, self.lo.x, self.hi.x),
            gap(x.y, self.lo.y, self.hi.y),
            gap(x.z, self.lo.z, self.hi.z),
        );
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Largest distance from a point of `a` to the union of `segs`.
///
/// Early-break scan: once some segment is closer than the running maximum the
/// point cannot raise it and is abandoned. Each search starts at the previous
/// point's nearest segment, and whole chunks of segments are skipped when
/// their bounding box is already farther than the best candidate.
fn directed_to_segments(a: &[Point], segs: &[(Point, Point)]) -> f64 {
    let chunks: Vec<Chunk> = (0..segs.len())
        .step_by(CHUNK)
        .map(|start| {
            let range = start..(start + CHUNK).min(segs.len());
            let (mut lo, mut hi) = (segs[start].0, segs[start].0);
            for &(p, q) in &segs[range.clone()] {
                for r in [p, q] {
                    lo = Point::new(lo.x.min(r.x), lo.y.min(r.y), lo.z.min(r.z));
                    hi = Point::new(hi.x.max(r.x), hi.y.max(r.y), hi.z.max(r.z));
                }
            }
            Chunk { lo, hi, range }
        })
        .collect();
    let dist = |x: &Point, j: usize| x.distance_to_segment(&segs[j].0, &segs[j].1);
    let mut cmax = 0.0_f64;
    let mut prev = 0usize;
    'points: for x in a {
        let mut cmin = dist(x, prev);
        if cmin <= cmax {
            continue;
        }
        for chunk in &chunks {
            if chunk.distance(x) >= cmin {
                continue;
            }
            for j in chunk.range.clone() {
                let d = dist(x, j);
                if d < cmin {
                    cmin = d;
                    prev = j;
                    if cmin <= cmax {
                        continue 'points;
                    }
                }
            }
        }
        cmax = cmin;
    }
    cmax
}

/// Uniform parameter samples of the lifted curve, endpoints included.
pub fn sample_lifted_curve(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    t: f64,
    samples: usize,
) -> Result<Vec<Point>> {
    if samples < 2 {
        return Err(Error::Domain(format!(
            "samples must be at least 2, got {samples}"
        )));
    }
    uniform_parameters(samples)
        .into_iter()
        .map(|u| eval_nurbs_lifted(spec, lifting, t, u))
        .collect()
}

fn uniform_parameters(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| {
            if k + 1 == samples {
                1.0
            } else {
                k as f64 / (samples - 1) as f64
            }
        })
        .collect()
}

/// Sampling density for [`convergence_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    /// Seed samples per curve before refinement, spread over the pieces.
    pub base: usize,
    /// Maximum gap between consecutive samples, relative to the diameter.
    pub chord: f64,
    /// Maximum deviation of a midpoint from its chord, relative to the diameter.
    pub bulge: f64,
    /// Hard cap on samples per curve.
    pub max_samples: usize,
}

impl SamplingOptions {
    pub fn with_base(base: usize) -> Self {
        SamplingOptions {
            base,
            ..Self::default()
        }
    }
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            base: 400,
            chord: 1e-3,
            bulge: 1e-6,
            max_samples: 1 << 18,
        }
    }
}

const MAX_DEPTH: u32 = 60;
/// Terms this far below the dominant one in log scale are below double precision.
const LOG_MARGIN: f64 = 40.0;

/// Samples of the lifted curve and of the regular control curve taken at the
/// same parameters.
#[derive(Debug, Clone, Default)]
pub struct PairedSamples {
    /// Lattice parameter in `[0, np]` of each pair.
    pub parameters: Vec<f64>,
    pub curve: Vec<Point>,
    pub limit: Vec<Point>,
}

/// One Bézier piece of the lifted curve in homogeneous log form.
struct LiftedPiece {
    offset: f64,
    degree: usize,
    /// `ln C(p,k) + ln ω_k(t)`.
    log_coeffs: Vec<f64>,
    points: Vec<Point>,
}

impl LiftedPiece {
    fn new(
        piece: &crate::refinement::BezierPieceExtract,
        spec: &CurveSpec,
        lifting: &LiftingFunction,
        t: f64,
    ) -> Self {
        let ln_t = t.ln();
        let p = piece.degree();
        let (log_coeffs, points) = piece
            .combos()
            .iter()
            .enumerate()
            .map(|(k, combo)| {
                let top = combo
                    .indices()
                    .map(|i| lifting.get(i))
                    .fold(f64::NEG_INFINITY, f64::max);
                let mut num = Point::ORIGIN;
                let mut den = 0.0;
                for &(i, f) in combo.entries() {
                    let c = f * spec.weights()[i] * ((lifting.get(i) - top) * ln_t).exp();
                    num += spec.control_points()[i] * c;
                    den += c;
                }
                (binomial(p, k).ln() + top * ln_t + den.ln(), num / den)
            })
            .unzip();
        LiftedPiece {
            offset: piece.lattice_offset() as f64,
            degree: p,
            log_coeffs,
            points,
        }
    }

    /// Point at log-odds `s = ln(v / (1 − v))` of the local Bernstein parameter `v`.
    fn eval(&self, s: f64) -> Point {
        let logs: Vec<f64> = self
            .log_coeffs
            .iter()
            .enumerate()
            .map(|(k, l)| l + k as f64 * s)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut num = Point::ORIGIN;
        let mut den = 0.0;
        for (l, b) in logs.iter().zip(&self.points) {
            let w = (l - top).exp();
            num += *b * w;
            den += w;
        }
        num / den
    }

    fn lattice_parameter(&self, s: f64) -> f64 {
        let v = if s >= 0.0 {
            1.0 / (1.0 + (-s).exp())
        } else {
            s.exp() / (1.0 + s.exp())
        };
        self.offset + self.degree as f64 * v
    }

    fn spread(&self) -> f64 {
        let hi = self
            .log_coeffs
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = self
            .log_coeffs
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

fn log_spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi >= lo {
        hi - lo
    } else {
        0.0
    }
}

/// Samples the lifted curve at `t` and the regular control curve on one
/// shared parameter set.
///
/// Each Bézier piece is parametrised by the log-odds `s` of its local
/// parameter, so transitions that happen within `t^{-g}` of a knot occupy an
/// `O(1)` stretch of `s` instead of collapsing below double precision.
/// Starting from uniform seeds on a window of `s` outside which every
/// non-dominant term is negligible, an interval is bisected while either curve
/// has a chord longer than `chord · diameter` or its midpoint strays more than
/// `bulge · diameter` from the chord. When the two curves coincide the samples
/// coincide pointwise.
pub fn paired_samples(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    rcc: &RegularControlCurve,
    t: f64,
    options: SamplingOptions,
) -> Result<PairedSamples> {
    check_t(t)?;
    lifting.check_len(spec.control_count())?;
    if options.base < 2 {
        return Err(Error::Domain(format!(
            "base samples must be at least 2, got {}",
            options.base
        )));
    }
    let diameter = if spec.diameter() > 0.0 {
        spec.diameter()
    } else {
        1.0
    };
    let limits = Limits {
        chord: options.chord * diameter,
        bulge: options.bulge * diameter,
        cap: options.max_samples,
    };
    let extracts = bezier_extract(spec)?;
    let per_piece = (options.base / extracts.len()).max(8);
    let mut out = PairedSamples::default();
    for (m, extract) in extracts.iter().enumerate() {
        let piece = LiftedPiece::new(extract, spec, lifting, t);
        let (x0, x1) = (piece.offset, piece.offset + piece.degree as f64);
        if m == 0 {
            push(&mut out, (x0, (piece.points[0], rcc.eval(x0)?)));
        }
        let rcc_spread = rcc
            .pieces()
            .iter()
            .filter(|r| r.toric.domain().0 >= x0 && r.toric.domain().1 <= x1)
            .map(|r| {
                log_spread(
                    r.toric
                        .coeffs()
                        .iter()
                        .zip(r.toric.weights())
                        .map(|(c, w)| (c * w).ln()),
                )
            })
            .fold(0.0, f64::max);
        let window = piece.spread().max(rcc_spread) + LOG_MARGIN;
        let node = |s: f64| -> Result<Node> {
            let x = piece.lattice_parameter(s);
            Ok((s, (piece.eval(s), rcc.eval(x)?), x))
        };
        let mut left = node(-window)?;
        push(&mut out, (left.2, left.1));
        for k in 1..per_piece {
            let s = -window + 2.0 * window * k as f64 / (per_piece - 1) as f64;
            let right = node(s)?;
            refine(&node, left, right, limits, 0, &mut out)?;
            push(&mut out, (right.2, right.1));
            left = right;
        }
        push(&mut out, (x1, (piece.points[piece.degree], rcc.eval(x1)?)));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Limits {
    chord: f64,
    bulge: f64,
    cap: usize,
}

/// `(s, (curve, limit), x)`.
type Node = (f64, (Point, Point), f64);

fn push(out: &mut PairedSamples, (x, (c, l)): (f64, (Point, Point))) {
    out.parameters.push(x);
    out.curve.push(c);
    out.limit.push(l);
}

fn refine<F>(
    node: &F,
    left: Node,
    right: Node,
    limits: Limits,
    depth: u32,
    out: &mut PairedSamples,
) -> Result<()>
where
    F: Fn(f64) -> Result<Node>,
{
    if depth >= MAX_DEPTH || out.parameters.len() >= limits.cap {
        return Ok(());
    }
    let sm = 0.5 * (left.0 + right.0);
    if sm <= left.0 || sm >= right.0 {
        return Ok(());
    }
    let mid = node(sm)?;
    let coarse = |a: Point, m: Point, b: Point| {
        a.distance(&b) > limits.chord || m.distance_to_segment(&a, &b) > limits.bulge
    };
    if !coarse(left.1 .0, mid.1 .0, right.1 .0) && !coarse(left.1 .1, mid.1 .1, right.1 .1) {
        return Ok(());
    }
    refine(node, left, mid, limits, depth + 1, out)?;
    push(out, (mid.2, mid.1));
    refine(node, mid, right, limits, depth + 1, out)
}

/// Hausdorff distance between the polylines through `a` and through `b`,
/// measured from the vertices of each to the segments of the other.
pub fn polyline_hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate(
            "Hausdorff distance of an empty polyline".into(),
        ));
    }
    Ok(directed_polyline(a, b).max(directed_polyline(b, a)))
}

fn directed_polyline(a: &[Point], b: &[Point]) -> f64 {
    if b.len() == 1 {
        return directed_hausdorff(a, b);
    }
    let segs: Vec<(Point, Point)> = b.windows(2).map(|w| (w[0], w[1])).collect();
    directed_to_segments(a, &segs)
}

/// Hausdorff distances between the lifted curve and its regular control curve
/// along a schedule of `t` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub t_values: Vec<f64>,
    pub distances: Vec<f64>,
    /// Bounding-box diagonal of the control points.
    pub diameter: f64,
    pub tolerance: f64,
    /// Final distance is within `tolerance · diameter`.
    pub converged: bool,
    /// The last three distances are non-increasing.
    pub tail_decreasing: bool,
    /// Lifted-curve samples used at each `t`.
    pub sample_counts: Vec<usize>,
}

impl ConvergenceReport {
    pub fn final_distance(&self) -> f64 {
        self.distances[self.distances.len() - 1]
    }

    pub fn relative_distances(&self) -> Vec<f64> {
        let d = if self.diameter > 0.0 {
            self.diameter
        } else {
            1.0
        };
        self.distances.iter().map(|x| x / d).collect()
    }
}

/// Convergence report with default sampling seeded by `samples` uniform
/// parameters.
pub fn convergence_report(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    t_schedule: &[f64],
    samples: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    convergence_report_with(
        spec,
        lifting,
        t_schedule,
        SamplingOptions::with_base(samples),
        tol,
    )
}

pub fn convergence_report_with(
    spec: &CurveSpec,
    lifting: &LiftingFunction,
    t_schedule: &[f64],
    options: SamplingOptions,
    tol: f64,
) -> Result<ConvergenceReport> {
    if t_schedule.len() < 3 {
        return Err(Error::validation("t_schedule", "needs at least 3 entries"));
    }
    for (k, &t) in t_schedule.iter().enumerate() {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::validation(
                format!("t_schedule[{k}]"),
                "must be finite and positive",
            ));
        }
        if k > 0 && t <= t_schedule[k - 1] {
            return Err(Error::validation(
                format!("t_schedule[{k}]"),
                "schedule must be strictly ascending",
            ));
        }
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::validation("tol", "must be finite and positive"));
    }
    let rcc = regular_control_curve(spec, lifting)?;
    let rows: Vec<(f64, usize)> = t_schedule
        .par_iter()
        .map(|&t| {
            let s = paired_samples(spec, lifting, &rcc, t, options)?;
            Ok((polyline_hausdorff(&s.curve, &s.limit)?, s.curve.len()))
        })
        .collect::<Result<_>>()?;
    let distances: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let diameter = spec.diameter();
    let last = distances[distances.len() - 1];
    let slack = 1e-12 * diameter.max(f64::MIN_POSITIVE);
    let tail = &distances[distances.len() - 3..];
    Ok(ConvergenceReport {
        t_values: t_schedule.to_vec(),
        sample_counts: rows.iter().map(|r| r.1).collect(),
        converged: last <= tol * diameter,
        tail_decreasing: tail.windows(2).all(|w| w[1] <= w[0] + slack),
        distances,
        diameter,
        tolerance: tol,
    })
}

/// Worst deviation from `P_i` of the lifted curve when only `λ(i)` is raised.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpikeReport {
    pub index: usize,
    pub t: f64,
    /// Open knot interval where `N_i` is positive.
    pub span: (f64, f64),
    pub samples_checked: usize,
    pub max_distance: f64,
    /// Samples farther than `tol · diameter` from `P_i`.
    pub outside: usize,
    /// Parameter range covered by the outlying samples, if any.
    pub outside_range: Option<(f64, f64)>,
}

/// Lifts index `i` by one (all others zero) and measures, over `samples`
/// uniform parameters strictly inside the support of `N_i`, the distance of
/// the lifted curve at `t` to `P_i`.
pub fn spike_report(
    spec: &CurveSpec,
    index: usize,
    t: f64,
    samples: usize,
    tol: f64,
) -> Result<SpikeReport> {
    let n = spec.control_count();
    if index >= n {
        return Err(Error::validation("index", format!("must be below {n}")));
    }
    let mut lift = vec![0.0; n];
    lift[index] = 1.0;
    let lifting = LiftingFunction::new(lift)?;
    let knots = spec.knot_vector().knots();
    let span = (knots[index], knots[index + spec.degree() + 1]);
    let target = spec.control_points()[index];
    let limit = tol * spec.diameter();
    let mut report = SpikeReport {
        index,
        t,
        span,
        samples_checked: 0,
        max_distance: 0.0,
        outside: 0,
        outside_range: None,
    };
    for u in uniform_parameters(samples.max(2)) {
        if u <= span.0 || u >= span.1 {
            continue;
        }
        let d = eval_nurbs_lifted(spec, &lifting, t, u)?.distance(&target);
        report.samples_checked += 1;
        report.max_distance = report.max_distance.max(d);
        if d > limit {
            report.outside += 1;
            report.outside_range = Some(match report.outside_range {
                None => (u, u),
                Some((a, b)) => (a.min(u), b.max(u)),
            });
        }
    }
    Ok(report)
}

/// A transversal crossing of two non-adjacent polyline segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// Indices `(i, j)`, `i < j`, of segments `[q_i, q_{i+1}]` and `[q_j, q_{j+1}]`.
    pub segments: (usize, usize),
    pub point: Point,
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn boxes_overlap(a: Point, b: Point, c: Point, d: Point) -> bool {
    a.x.min(b.x) <= c.x.max(d.x)
        && c.x.min(d.x) <= a.x.max(b.x)
        && a.y.min(b.y) <= c.y.max(d.y)
        && c.y.min(d.y) <= a.y.max(b.y)
}

/// All proper crossings between non-adjacent segments of a polyline, taken in
/// the xy-plane. Touching at endpoints and collinear overlaps are not
/// crossings. Each pair is reported once, ordered by `(i, j)`.
pub fn self_intersections(polyline: &[Point]) -> Vec<Crossing> {
    let mut out = Vec::new();
    if polyline.len() < 4 {
        return out;
    }
    let segs = polyline.len() - 1;
    for i in 0..segs {
        let (a, b) = (polyline[i], polyline[i + 1]);
        for j in i + 2..segs {
            let (c, d) = (polyline[j], polyline[j + 1]);
            if !boxes_overlap(a, b, c, d) {
                continue;
            }
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
                let s = o3 / (o3 - o4);
                out.push(Crossing {
                    segments: (i, j),
                    point: a.lerp(&b, s),
                });
            }
        }
    }
    out
}
