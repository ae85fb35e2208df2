//! Union-of-disks domains: neighbor detection, partition of each circle into
//! maximal arcs labelled by their covering set, skeleton construction, and
//! exposed-boundary measurement.
//!
//! Subdomains are indexed `0..n` in the order given; the `disks2d v1` text
//! format carries the same order with 1-based ids.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::angles::{self, AngularInterval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// One disk subdomain.
#[derive(Debug, Clone, Copy)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Self {
        Self {
            center: Point::new(cx, cy),
            radius,
        }
    }

    pub fn point_at(&self, theta: f64) -> Point {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.dist(p) < self.radius
    }

    /// Radial penetration depth of `p` into the disk, clamped at zero.
    pub fn penetration(&self, p: Point) -> f64 {
        (self.radius - self.center.dist(p)).max(0.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("disks {i} and {j} are tangent or nearly tangent (penetration {penetration:.3e})")]
    TangentIntersection { i: usize, j: usize, penetration: f64 },
    #[error("no pair of disks intersects")]
    NoIntersection,
    #[error("the adjacency graph of the disk union is not connected")]
    Disconnected,
    #[error("boundary piece of disk {owner} has degenerate angular width {width:.3e}")]
    DegenerateArc { owner: usize, width: f64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A validated union of intersecting disks with its neighbor sets.
#[derive(Debug, Clone)]
pub struct Geometry2D {
    disks: Vec<Disk>,
    neighbors: Vec<Vec<usize>>,
    tolerance: f64,
}

/// Relative tangency tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Validate a disk collection and compute neighbor sets.
///
/// Two disks are neighbors when their penetration depth
/// `r_i + r_j - |c_i - c_j|` exceeds `tolerance * max(r_i, r_j)`. Pairs with
/// penetration in `[0, tolerance * max]` are rejected as tangent: an
/// intersection degenerating to a point breaks both the boundary partition
/// and the contraction analysis.
pub fn build_geometry(disks: Vec<Disk>, tolerance: f64) -> Result<Geometry2D, GeometryError> {
    if disks.len() < 2 {
        return Err(GeometryError::InvalidInput(format!(
            "need at least 2 disks, got {}",
            disks.len()
        )));
    }
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(GeometryError::InvalidInput(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    for (i, d) in disks.iter().enumerate() {
        if !(d.radius > 0.0 && d.radius.is_finite()) {
            return Err(GeometryError::InvalidInput(format!(
                "disk {i} has non-positive radius {}",
                d.radius
            )));
        }
        if !(d.center.x.is_finite() && d.center.y.is_finite()) {
            return Err(GeometryError::InvalidInput(format!(
                "disk {i} has non-finite center"
            )));
        }
    }

    let n = disks.len();
    let mut neighbors = vec![Vec::new(); n];
    let mut any_edge = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = disks[i].center.dist(disks[j].center);
            let pen = disks[i].radius + disks[j].radius - d;
            let eps = tolerance * disks[i].radius.max(disks[j].radius);
            if pen > eps {
                neighbors[i].push(j);
                neighbors[j].push(i);
                any_edge = true;
            } else if pen >= 0.0 {
                return Err(GeometryError::TangentIntersection { i, j, penetration: pen });
            }
        }
    }
    if !any_edge {
        return Err(GeometryError::NoIntersection);
    }

    // Connectivity by BFS.
    let mut seen = vec![false; n];
    let mut queue = vec![0usize];
    seen[0] = true;
    while let Some(v) = queue.pop() {
        for &w in &neighbors[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(GeometryError::Disconnected);
    }

    Ok(Geometry2D {
        disks,
        neighbors,
        tolerance,
    })
}

impl Geometry2D {
    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disk(&self, i: usize) -> &Disk {
        &self.disks[i]
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The arc of circle `owner` lying inside disk `covering`, if any.
    ///
    /// Closed form from the law of cosines: a boundary point of `owner` at
    /// angle `theta` lies in `covering` iff
    /// `cos(theta - phi) > (d^2 + r_o^2 - r_c^2) / (2 d r_o)`,
    /// `phi` being the direction from the owner's center to the covering one.
    /// Returns the full circle when `owner` is contained in `covering`.
    pub fn coverage_interval(&self, owner: usize, covering: usize) -> Option<AngularInterval> {
        let o = &self.disks[owner];
        let c = &self.disks[covering];
        let d = o.center.dist(c.center);
        if d <= f64::EPSILON * o.radius.max(c.radius) {
            return if o.radius < c.radius {
                Some(AngularInterval::full())
            } else {
                None
            };
        }
        let t = (d * d + o.radius * o.radius - c.radius * c.radius) / (2.0 * d * o.radius);
        if t >= 1.0 {
            None
        } else if t <= -1.0 {
            Some(AngularInterval::full())
        } else {
            let diff = c.center - o.center;
            let phi = diff.y.atan2(diff.x);
            Some(AngularInterval::centered(phi, t.acos()))
        }
    }
}

/// Label of a boundary piece: uncovered (on the global boundary) or covered
/// by a multi-index of neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcLabel {
    Exterior,
    /// Sorted indices of the neighbors whose open disks cover the piece.
    Covered(Vec<usize>),
}

impl ArcLabel {
    pub fn multiplicity(&self) -> usize {
        match self {
            ArcLabel::Exterior => 0,
            ArcLabel::Covered(ids) => ids.len(),
        }
    }

    pub fn covers(&self, k: usize) -> bool {
        matches!(self, ArcLabel::Covered(ids) if ids.binary_search(&k).is_ok())
    }
}

/// A maximal arc of a circle on which the covering set is constant.
#[derive(Debug, Clone)]
pub struct ArcPiece {
    pub owner: usize,
    pub interval: AngularInterval,
    pub label: ArcLabel,
}

fn overlay_pieces(
    geom: &Geometry2D,
    j: usize,
    active: Option<&[bool]>,
) -> Vec<angles::OverlayPiece> {
    let arcs: Vec<(usize, AngularInterval)> = geom
        .neighbors(j)
        .iter()
        .filter(|&&k| active.map_or(true, |m| m[k]))
        .filter_map(|&k| geom.coverage_interval(j, k).map(|iv| (k, iv)))
        .collect();
    angles::overlay(&arcs)
}

/// Partition the boundary circle of disk `j` into maximal pieces of constant
/// covering set. The pieces tile the circle; uncovered pieces are labelled
/// exterior.
pub fn partition_boundary(geom: &Geometry2D, j: usize) -> Result<Vec<ArcPiece>, GeometryError> {
    let pieces = overlay_pieces(geom, j, None);
    let mut out = Vec::with_capacity(pieces.len());
    for p in pieces {
        if p.interval.width() < geom.tolerance() {
            return Err(GeometryError::DegenerateArc {
                owner: j,
                width: p.interval.width(),
            });
        }
        let label = if p.cover.is_empty() {
            ArcLabel::Exterior
        } else {
            ArcLabel::Covered(p.cover)
        };
        out.push(ArcPiece {
            owner: j,
            interval: p.interval,
            label,
        });
    }
    Ok(out)
}

/// Boundary partitions for every disk.
pub fn partition_all(geom: &Geometry2D) -> Result<Vec<Vec<ArcPiece>>, GeometryError> {
    (0..geom.len()).map(|j| partition_boundary(geom, j)).collect()
}

/// Fraction of the boundary circle of `j` not covered by the other active
/// disks, by exact interval overlay. `1.0` when `j` is the only active disk.
pub fn exposure_fraction_2d(geom: &Geometry2D, j: usize, active: &[bool]) -> f64 {
    debug_assert!(active[j], "exposure queried for an inactive disk");
    let pieces = overlay_pieces(geom, j, Some(active));
    angles::uncovered_measure(&pieces) / TAU
}

/// How a skeleton sample relates to the owner's boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleKind {
    /// Strictly inside the owner subdomain; `clearance` is the distance to
    /// the owner's boundary circle.
    Interior { clearance: f64 },
    /// On the owner's boundary circle. `boundary_angle` is the polar angle
    /// on the owner circle; `on_exterior` is set when the point borders the
    /// owner's exterior boundary.
    Endpoint { boundary_angle: f64, on_exterior: bool },
}

impl SampleKind {
    pub fn is_interior(&self) -> bool {
        matches!(self, SampleKind::Interior { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SkeletonSample {
    /// Polar angle on the supporting (neighbor) circle.
    pub angle: f64,
    pub position: Point,
    pub kind: SampleKind,
}

/// The arc `S_{j,k}`: the part of neighbor circle `k` inside the closure of
/// subdomain `j`, with its sample points.
#[derive(Debug, Clone)]
pub struct SkeletonArc {
    /// Index of the neighbor whose circle supports this arc.
    pub neighbor: usize,
    pub center: Point,
    pub radius: f64,
    pub interval: AngularInterval,
    /// Set when the arc is the full neighbor circle (containment); such an
    /// arc has no endpoints on the owner's boundary.
    pub closed: bool,
    pub samples: Vec<SkeletonSample>,
}

impl SkeletonArc {
    pub fn point_at(&self, theta: f64) -> Point {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    /// Uniform angular sample step.
    pub fn step(&self) -> f64 {
        if self.closed {
            self.interval.width() / self.samples.len() as f64
        } else {
            self.interval.width() / (self.samples.len() - 1) as f64
        }
    }
}

/// The skeleton of one subdomain: all neighbor-circle arcs inside its closure.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub owner: usize,
    pub arcs: Vec<SkeletonArc>,
}

impl Skeleton {
    /// Arc index of `S_{owner,k}` for neighbor `k`.
    pub fn arc_for_neighbor(&self, k: usize) -> Option<usize> {
        self.arcs.iter().position(|a| a.neighbor == k)
    }
}

fn classify_boundary_angle(pieces: &[ArcPiece], theta: f64) -> bool {
    // `theta` is a crossing point, hence a breakpoint of the partition up to
    // rounding. A piece endpoint borders the exterior iff one of the two
    // adjoining pieces is exterior.
    let mut on_ext = false;
    for (idx, p) in pieces.iter().enumerate() {
        let start = p.interval.start();
        let end = angles::normalize(p.interval.end());
        let d_start = angular_gap(theta, start);
        let d_end = angular_gap(theta, end);
        if d_start < 1e-9 || d_end < 1e-9 {
            if p.label == ArcLabel::Exterior {
                on_ext = true;
            }
        } else if p.interval.contains(theta) && p.label == ArcLabel::Exterior {
            // Fallback: rounding pushed the angle strictly inside a piece.
            let _ = idx;
            on_ext = true;
        }
    }
    on_ext
}

/// Shortest angular distance between two angles.
pub fn angular_gap(a: f64, b: f64) -> f64 {
    let d = angles::normalize(a - b);
    d.min(TAU - d)
}

/// Build the skeletons of all subdomains, sampling each arc at
/// `samples_per_arc` points: the two endpoints plus equispaced interior
/// points (closed arcs get equispaced points only).
pub fn build_skeletons(
    geom: &Geometry2D,
    samples_per_arc: usize,
) -> Result<Vec<Skeleton>, GeometryError> {
    if samples_per_arc < 4 {
        return Err(GeometryError::InvalidInput(format!(
            "samples_per_arc must be at least 4, got {samples_per_arc}"
        )));
    }
    let partitions = partition_all(geom)?;
    let mut skeletons = Vec::with_capacity(geom.len());
    for j in 0..geom.len() {
        let owner_disk = geom.disk(j);
        let mut arcs = Vec::new();
        for &k in geom.neighbors(j) {
            // S_{j,k} is the portion of circle k inside the closure of disk j.
            let Some(interval) = geom.coverage_interval(k, j) else {
                continue;
            };
            let support = geom.disk(k);
            let closed = interval.is_full();
            let n = samples_per_arc;
            let mut samples = Vec::with_capacity(n);
            if closed {
                let h = interval.width() / n as f64;
                for i in 0..n {
                    let angle = interval.start() + (i as f64 + 0.5) * h;
                    let position = support.point_at(angle);
                    let clearance = owner_disk.radius - owner_disk.center.dist(position);
                    samples.push(SkeletonSample {
                        angle,
                        position,
                        kind: SampleKind::Interior { clearance },
                    });
                }
            } else {
                let h = interval.width() / (n - 1) as f64;
                for i in 0..n {
                    let angle = interval.start() + i as f64 * h;
                    let position = support.point_at(angle);
                    let dist_to_owner = owner_disk.center.dist(position);
                    let clearance = owner_disk.radius - dist_to_owner;
                    let is_endpoint = i == 0 || i == n - 1;
                    let kind = if is_endpoint
                        && clearance.abs() <= geom.tolerance() * owner_disk.radius + 1e-12
                    {
                        let rel = position - owner_disk.center;
                        let boundary_angle = rel.y.atan2(rel.x);
                        let on_exterior = classify_boundary_angle(&partitions[j], boundary_angle);
                        SampleKind::Endpoint {
                            boundary_angle,
                            on_exterior,
                        }
                    } else {
                        SampleKind::Interior { clearance }
                    };
                    samples.push(SkeletonSample {
                        angle,
                        position,
                        kind,
                    });
                }
            }
            arcs.push(SkeletonArc {
                neighbor: k,
                center: support.center,
                radius: support.radius,
                interval,
                closed,
                samples,
            });
        }
        skeletons.push(Skeleton { owner: j, arcs });
    }
    Ok(skeletons)
}

/// Parse the `disks2d v1` text format: a `# disks2d v1` header, then one
/// `id cx cy r` record per line. `#` starts a comment. Ids must be the
/// contiguous range `1..=N` (any order); records are returned in id order.
pub fn parse_disks2d(text: &str) -> Result<Vec<Disk>, GeometryError> {
    let mut records: Vec<(usize, Disk)> = Vec::new();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if line.starts_with("# disks2d") {
                saw_header = true;
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse_field = |part: Option<&str>, what: &str| -> Result<f64, GeometryError> {
            part.ok_or_else(|| GeometryError::Parse {
                line: lineno + 1,
                msg: format!("missing {what}"),
            })?
            .parse::<f64>()
            .map_err(|e| GeometryError::Parse {
                line: lineno + 1,
                msg: format!("bad {what}: {e}"),
            })
        };
        let id = parse_field(parts.next(), "id")? as usize;
        let cx = parse_field(parts.next(), "cx")?;
        let cy = parse_field(parts.next(), "cy")?;
        let r = parse_field(parts.next(), "r")?;
        if parts.next().is_some() {
            return Err(GeometryError::Parse {
                line: lineno + 1,
                msg: "trailing fields".into(),
            });
        }
        records.push((id, Disk::new(cx, cy, r)));
    }
    if !saw_header {
        return Err(GeometryError::Parse {
            line: 1,
            msg: "missing '# disks2d v1' header".into(),
        });
    }
    records.sort_by_key(|(id, _)| *id);
    for (pos, (id, _)) in records.iter().enumerate() {
        if *id != pos + 1 {
            return Err(GeometryError::Parse {
                line: 0,
                msg: format!("ids must be contiguous 1..N, found {id} at rank {}", pos + 1),
            });
        }
    }
    Ok(records.into_iter().map(|(_, d)| d).collect())
}

/// Serialize disks in the `disks2d v1` format with 1-based ids.
pub fn write_disks2d(disks: &[Disk]) -> String {
    let mut out = String::from("# disks2d v1\n");
    for (i, d) in disks.iter().enumerate() {
        writeln!(out, "{} {} {} {}", i + 1, d.center.x, d.center.y, d.radius).unwrap();
    }
    out
}
