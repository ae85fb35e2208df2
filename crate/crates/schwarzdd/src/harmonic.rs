//! Harmonic extension on a disk via the Poisson integral, with piecewise
//! Gauss-Legendre quadrature graded toward the kernel peak.
//!
//! Dirichlet data is piecewise continuous with jumps only at arc-piece
//! breakpoints, so integration is split at the breakpoints and each smooth
//! piece is subdivided until every subinterval is shorter than its angular
//! distance to the evaluation point's boundary projection plus the kernel
//! width. That keeps the node count logarithmic in the boundary clearance.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Mutex, OnceLock};

use crate::angles::{self, AngularInterval};
use crate::geometry::{
    angular_gap, ArcLabel, ArcPiece, Disk, Geometry2D, Point, SampleKind, Skeleton, SkeletonArc,
    SkeletonSample,
};
use crate::interp::ArcInterpolant;
use crate::pou::PoUSpec;

#[derive(Debug, thiserror::Error)]
pub enum HarmonicError {
    #[error("evaluation point too close to the boundary (relative clearance {clearance:.3e})")]
    TooCloseToBoundary { clearance: f64 },
    #[error("no skeleton data for neighbor {neighbor} on circle {circle}")]
    MissingSkeletonData { neighbor: usize, circle: usize },
    #[error(transparent)]
    PoU(#[from] crate::pou::PoUError),
}

/// Quadrature controls for the Poisson integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Gauss-Legendre nodes per smooth subinterval.
    pub nodes_per_piece: usize,
    /// Near-boundary refinement: a subinterval of width w is accepted once
    /// `w <= grading * (gap + clearance)`, gap being its angular distance to
    /// the kernel peak. Subdivision count doubles per halving of clearance.
    pub grading: f64,
    /// Relative clearance below which direct evaluation is refused and the
    /// endpoint rule takes over.
    pub min_distance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes_per_piece: 32,
            grading: 1.0,
            min_distance: 1e-4,
        }
    }
}

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| {
        let rule = Box::new(compute_gauss_legendre(n));
        Box::leak(rule)
    })
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[k] = -x;
        xs[n - 1 - k] = x;
        ws[k] = w;
        ws[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

/// Boundary data on one arc piece: identically zero or an evaluator of the
/// boundary angle.
pub enum TraceData<'a> {
    Zero,
    Func(Box<dyn Fn(f64) -> f64 + Sync + 'a>),
}

pub struct TracePiece<'a> {
    pub interval: AngularInterval,
    pub data: TraceData<'a>,
}

impl TracePiece<'_> {
    pub fn eval(&self, theta: f64) -> f64 {
        match &self.data {
            TraceData::Zero => 0.0,
            TraceData::Func(f) => f(theta),
        }
    }
}

/// Piecewise Dirichlet data on the boundary circle of one subdomain.
pub struct BoundaryTrace<'a> {
    pub owner: usize,
    pub pieces: Vec<TracePiece<'a>>,
}

impl<'a> BoundaryTrace<'a> {
    /// A single full-circle piece from a closure.
    pub fn from_fn(owner: usize, f: impl Fn(f64) -> f64 + Sync + 'a) -> Self {
        Self {
            owner,
            pieces: vec![TracePiece {
                interval: AngularInterval::full(),
                data: TraceData::Func(Box::new(f)),
            }],
        }
    }

    pub fn constant(owner: usize, value: f64) -> Self {
        Self::from_fn(owner, move |_| value)
    }

    /// Value at a boundary angle (by whichever piece contains it).
    pub fn eval(&self, theta: f64) -> f64 {
        for p in &self.pieces {
            if p.interval.contains(theta) {
                return p.eval(theta);
            }
        }
        // `theta` can fall on a shared breakpoint; take the nearest piece.
        self.pieces
            .iter()
            .min_by(|a, b| {
                let da = angular_gap(a.interval.clamp(theta), theta);
                let db = angular_gap(b.interval.clamp(theta), theta);
                da.partial_cmp(&db).unwrap()
            })
            .map(|p| p.eval(theta))
            .unwrap_or(0.0)
    }
}

fn interval_gap_to(start: f64, width: f64, target: f64) -> f64 {
    let off = angles::normalize(target - start);
    if off <= width {
        0.0
    } else {
        (off - width).min(TAU - off)
    }
}

/// Evaluate the harmonic extension of `trace` at an interior point `x` of
/// `disk` by the Poisson integral
/// `u(x) = (1/2π) ∮ (r² − |x−c|²)/|x − y(θ)|² g(θ) dθ`.
pub fn poisson_eval(
    disk: &Disk,
    trace: &BoundaryTrace,
    x: Point,
    quad: &QuadratureConfig,
) -> Result<f64, HarmonicError> {
    let rel = x - disk.center;
    let rho = rel.x.hypot(rel.y);
    let r = disk.radius;
    let clearance = (r - rho) / r;
    if clearance < quad.min_distance {
        return Err(HarmonicError::TooCloseToBoundary { clearance });
    }
    let phi = rel.y.atan2(rel.x);
    let (nodes, weights) = gauss_legendre(quad.nodes_per_piece.max(4));
    // Cancellation-free kernel: r² + ρ² − 2rρcos Δ = (r−ρ)² + 4rρ sin²(Δ/2).
    let dr = r - rho;
    let num = dr * (r + rho);
    let four_r_rho = 4.0 * r * rho;
    let mut acc = 0.0;
    let mut stack: Vec<(f64, f64)> = Vec::with_capacity(64);
    for piece in &trace.pieces {
        let f = match &piece.data {
            TraceData::Zero => continue,
            TraceData::Func(f) => f,
        };
        stack.clear();
        stack.push((piece.interval.start(), piece.interval.width()));
        while let Some((s, w)) = stack.pop() {
            let gap = interval_gap_to(s, w, phi);
            // Width cap of π/2 keeps oscillatory data resolved even when the
            // kernel is flat.
            if w > PI / 2.0 || w > quad.grading * (gap + clearance) {
                let half = 0.5 * w;
                stack.push((s, half));
                stack.push((s + half, half));
                continue;
            }
            let jac = 0.5 * w;
            let mid = s + jac;
            for (t, wt) in nodes.iter().zip(weights) {
                let theta = mid + jac * t;
                let s = (0.5 * (theta - phi)).sin();
                let denom = dr * dr + four_r_rho * s * s;
                acc += wt * jac * num / denom * f(theta);
            }
        }
    }
    Ok(acc / TAU)
}

/// Interpolants of one skeleton field: outer index subdomain, inner index
/// arc, aligned with `Skeleton::arcs`.
pub type FieldInterpolants = Vec<Vec<ArcInterpolant>>;

/// Exterior-piece handling when assembling Dirichlet data.
pub enum ExteriorMode<'a> {
    /// Error form: zero on the global boundary.
    Zero,
    /// Solve form: prescribed boundary values.
    Dirichlet(&'a (dyn Fn(Point) -> f64 + Sync)),
}

/// Assemble the Dirichlet trace of subdomain `j` from the neighbor skeleton
/// fields blended by the partition of unity: on a piece covered by `α`,
/// `g(θ) = Σ_{k∈α} χ_j^k(x(θ)) · field_k(x(θ))`, neighbor values being
/// interpolated along their skeleton arcs. Exterior pieces carry zero (error
/// form) or the boundary data (solve form).
pub fn assemble_interior_trace<'a>(
    geom: &'a Geometry2D,
    j: usize,
    pieces: &[ArcPiece],
    skeletons: &'a [Skeleton],
    interps: &'a FieldInterpolants,
    pou: &'a PoUSpec,
    exterior: ExteriorMode<'a>,
) -> Result<BoundaryTrace<'a>, HarmonicError> {
    let disk = *geom.disk(j);
    let mut out: Vec<TracePiece<'a>> = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let data = match &piece.label {
            ArcLabel::Exterior => match exterior {
                ExteriorMode::Zero => TraceData::Zero,
                ExteriorMode::Dirichlet(g) => {
                    TraceData::Func(Box::new(move |theta: f64| g(disk.point_at(theta))))
                }
            },
            ArcLabel::Covered(ids) => {
                let ids = ids.clone();
                let mut terms: Vec<&'a ArcInterpolant> = Vec::with_capacity(ids.len());
                for &k in &ids {
                    let arc_idx = skeletons[k].arc_for_neighbor(j).ok_or(
                        HarmonicError::MissingSkeletonData {
                            neighbor: k,
                            circle: j,
                        },
                    )?;
                    let interp = interps[k]
                        .get(arc_idx)
                        .ok_or(HarmonicError::MissingSkeletonData {
                            neighbor: k,
                            circle: j,
                        })?;
                    terms.push(interp);
                }
                TraceData::Func(Box::new(move |theta: f64| {
                    let x = disk.point_at(theta);
                    let w = pou
                        .weights(geom, j, &ids, x)
                        .expect("PoU inconsistency on a covered piece");
                    let mut v = 0.0;
                    for (wk, interp) in w.iter().zip(&terms) {
                        if *wk != 0.0 {
                            v += wk * interp.eval(theta);
                        }
                    }
                    v
                }))
            }
        };
        out.push(TracePiece {
            interval: piece.interval,
            data,
        });
    }
    Ok(BoundaryTrace {
        owner: j,
        pieces: out,
    })
}

fn wrap_to_pi(a: f64) -> f64 {
    let mut t = angles::normalize(a);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Pull a point of the supporting circle toward its deepest position inside
/// the owner disk until the clearance reaches `target` (absolute length).
fn retracted_angle(owner: &Disk, arc: &SkeletonArc, angle: f64, target: f64) -> f64 {
    let rel = owner.center - arc.center;
    let d = rel.x.hypot(rel.y);
    if d <= f64::EPSILON * owner.radius.max(arc.radius) {
        return angle;
    }
    let psi = rel.y.atan2(rel.x);
    let reach = owner.radius - target;
    let u = (d * d + arc.radius * arc.radius - reach * reach) / (2.0 * d * arc.radius);
    if u >= 1.0 {
        // Even the deepest point of the circle is shallower than requested;
        // use it.
        return psi;
    }
    if u <= -1.0 {
        return angle;
    }
    let eta = u.acos();
    let off = wrap_to_pi(angle - psi);
    if off.abs() <= eta {
        angle
    } else {
        psi + off.signum() * eta
    }
}

/// Restrict the harmonic extension of `trace` to one skeleton sample.
///
/// Interior samples are Poisson-evaluated directly (retracted along the arc
/// when closer to the boundary than the quadrature cutoff). Endpoint samples
/// on the owner's interior boundary take the mean of the two one-sided trace
/// limits at their boundary angle; endpoints touching the owner's exterior
/// boundary are retracted along the arc and Poisson-evaluated, a numerical
/// stand-in for the strictly-contractive endpoint limit.
pub fn eval_at_skeleton_sample(
    owner: &Disk,
    trace: &BoundaryTrace,
    arc: &SkeletonArc,
    sample: &SkeletonSample,
    quad: &QuadratureConfig,
) -> Result<f64, HarmonicError> {
    // Slight overshoot keeps the retracted point clear of the cutoff test.
    let target = quad.min_distance * owner.radius * (1.0 + 1e-6);
    match sample.kind {
        SampleKind::Interior { clearance } => {
            if clearance >= quad.min_distance * owner.radius {
                poisson_eval(owner, trace, sample.position, quad)
            } else {
                let theta = retracted_angle(owner, arc, sample.angle, target);
                poisson_eval(owner, trace, arc.point_at(theta), quad)
            }
        }
        SampleKind::Endpoint {
            boundary_angle,
            on_exterior,
        } => {
            if on_exterior {
                let theta = retracted_angle(owner, arc, sample.angle, target);
                poisson_eval(owner, trace, arc.point_at(theta), quad)
            } else {
                // Mean of the one-sided limits of the trace over the pieces
                // meeting at this crossing.
                let mut values = Vec::with_capacity(2);
                for piece in &trace.pieces {
                    let d_start = angular_gap(piece.interval.start(), boundary_angle);
                    let d_end =
                        angular_gap(angles::normalize(piece.interval.end()), boundary_angle);
                    if d_start < 1e-9 || d_end < 1e-9 {
                        values.push(piece.eval(boundary_angle));
                    }
                }
                if values.is_empty() {
                    return Ok(trace.eval(boundary_angle));
                }
                Ok(values.iter().sum::<f64>() / values.len() as f64)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_skeletons;
    use crate::testutil::two_disk_geometry;

    fn unit_disk() -> Disk {
        Disk::new(0.0, 0.0, 1.0)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (xs, ws) = gauss_legendre(8);
        // Degree-15 polynomial integrated exactly.
        let integral: f64 = xs
            .iter()
            .zip(ws)
            .map(|(x, w)| w * (5.0 * x.powi(15) + x.powi(4) - 2.0 * x + 1.0))
            .sum();
        let exact = 2.0 / 5.0 + 2.0;
        assert!((integral - exact).abs() < 1e-13);
        let total: f64 = ws.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_data_extends_to_one() {
        let disk = unit_disk();
        let trace = BoundaryTrace::constant(0, 1.0);
        let quad = QuadratureConfig::default();
        for &(x, y) in &[(0.0, 0.0), (0.5, 0.3), (-0.8, 0.55), (0.0, 0.9995)] {
            let u = poisson_eval(&disk, &trace, Point::new(x, y), &quad).unwrap();
            assert!((u - 1.0).abs() < 1e-12, "at ({x},{y}): {u}");
        }
    }

    #[test]
    fn cosine_data_reproduces_linear_harmonic() {
        let disk = unit_disk();
        let trace = BoundaryTrace::from_fn(0, |t: f64| t.cos());
        let quad = QuadratureConfig::default();
        for &(x, y) in &[(0.3, 0.2), (-0.5, 0.7), (0.9, 0.0), (0.1, -0.85)] {
            let u = poisson_eval(&disk, &trace, Point::new(x, y), &quad).unwrap();
            assert!((u - x).abs() < 1e-10, "at ({x},{y}): {u}");
        }
    }

    #[test]
    fn high_harmonic_reproduced() {
        let disk = unit_disk();
        let m = 8;
        let trace = BoundaryTrace::from_fn(0, move |t: f64| (m as f64 * t).cos());
        let quad = QuadratureConfig::default();
        for &(rho, phi) in &[(0.2, 0.3), (0.6, 2.0), (0.9, 4.5), (0.9, 0.0)] {
            let p = Point::new(rho * f64::cos(phi), rho * f64::sin(phi));
            let expect = rho.powi(m) * (m as f64 * phi).cos();
            let u = poisson_eval(&disk, &trace, p, &quad).unwrap();
            assert!((u - expect).abs() < 1e-8, "rho={rho} phi={phi}: {u} vs {expect}");
        }
    }

    #[test]
    fn linearity_of_the_integral() {
        let disk = unit_disk();
        let quad = QuadratureConfig::default();
        let t1 = BoundaryTrace::from_fn(0, |t: f64| (2.0 * t).sin() + 0.3);
        let t2 = BoundaryTrace::from_fn(0, |t: f64| (3.0 * t).cos());
        let combo = BoundaryTrace::from_fn(0, |t: f64| {
            1.7 * ((2.0 * t).sin() + 0.3) - 0.9 * (3.0 * t).cos()
        });
        let p = Point::new(0.4, -0.3);
        let u1 = poisson_eval(&disk, &t1, p, &quad).unwrap();
        let u2 = poisson_eval(&disk, &t2, p, &quad).unwrap();
        let uc = poisson_eval(&disk, &combo, p, &quad).unwrap();
        assert!((uc - (1.7 * u1 - 0.9 * u2)).abs() < 1e-10);
    }

    #[test]
    fn too_close_is_refused() {
        let disk = unit_disk();
        let trace = BoundaryTrace::constant(0, 1.0);
        let quad = QuadratureConfig::default();
        let err = poisson_eval(&disk, &trace, Point::new(0.99999, 0.0), &quad);
        assert!(matches!(err, Err(HarmonicError::TooCloseToBoundary { .. })));
    }

    #[test]
    fn maximum_principle_on_jumpy_data() {
        let disk = unit_disk();
        let quad = QuadratureConfig::default();
        // Two pieces: 1 on the right half, 0 on the left half.
        let trace = BoundaryTrace {
            owner: 0,
            pieces: vec![
                TracePiece {
                    interval: AngularInterval::centered(0.0, PI / 2.0),
                    data: TraceData::Func(Box::new(|_| 1.0)),
                },
                TracePiece {
                    interval: AngularInterval::centered(PI, PI / 2.0),
                    data: TraceData::Zero,
                },
            ],
        };
        for k in 0..50 {
            let a = TAU * k as f64 / 50.0;
            let p = Point::new(0.85 * a.cos(), 0.85 * a.sin());
            let u = poisson_eval(&disk, &trace, p, &quad).unwrap();
            assert!((-1e-10..=1.0 + 1e-10).contains(&u), "{u}");
        }
        // Harmonic measure of the right half seen from the center is 1/2.
        let u0 = poisson_eval(&disk, &trace, Point::new(0.0, 0.0), &quad).unwrap();
        assert!((u0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lens_midpoint_value_strictly_below_one() {
        // Data 1 on the covered piece of circle 0 and 0 on its exterior part
        // extends into disk 0 with value < 1 on the interior skeleton.
        let geom = two_disk_geometry(1.5);
        let pieces = crate::geometry::partition_boundary(&geom, 0).unwrap();
        let trace = BoundaryTrace {
            owner: 0,
            pieces: pieces
                .iter()
                .map(|p| TracePiece {
                    interval: p.interval,
                    data: match p.label {
                        ArcLabel::Exterior => TraceData::Zero,
                        ArcLabel::Covered(_) => TraceData::Func(Box::new(|_| 1.0)),
                    },
                })
                .collect(),
        };
        let skeletons = build_skeletons(&geom, 33).unwrap();
        let arc = &skeletons[0].arcs[0];
        let quad = QuadratureConfig::default();
        let mid = &arc.samples[arc.samples.len() / 2];
        let u = eval_at_skeleton_sample(geom.disk(0), &trace, arc, mid, &quad).unwrap();
        assert!(u < 1.0 - 1e-3, "{u}");
        assert!(u > 0.0);
        // Zero data restricts to zero.
        let zero = BoundaryTrace {
            owner: 0,
            pieces: vec![TracePiece {
                interval: AngularInterval::full(),
                data: TraceData::Zero,
            }],
        };
        let z = eval_at_skeleton_sample(geom.disk(0), &zero, arc, mid, &quad).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn retraction_reaches_requested_clearance() {
        let geom = two_disk_geometry(1.5);
        let skeletons = build_skeletons(&geom, 33).unwrap();
        let owner = geom.disk(0);
        let arc = &skeletons[0].arcs[0];
        let endpoint = &arc.samples[0];
        let target = 1e-4 * owner.radius * (1.0 + 1e-6);
        let theta = retracted_angle(owner, arc, endpoint.angle, target);
        let p = arc.point_at(theta);
        let clearance = owner.radius - owner.center.dist(p);
        assert!(clearance >= target * 0.999 && clearance < 1e-2);
    }
}

