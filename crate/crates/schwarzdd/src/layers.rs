//! Graph layers of a subdomain union: boundary-node detection by exposed
//! boundary measure and iterative peeling, in 2D (exact interval overlay)
//! and 3D (sphere-coverage sampling on a Fibonacci lattice).
//!
//! Peeling recomputes exposure geometrically on the remaining union each
//! round; graph-distance BFS would disagree on non-convex clusters with
//! holes, where an inner vertex can touch the boundary of the remaining
//! union without being near the original boundary.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::geometry::{exposure_fraction_2d, Geometry2D};

#[derive(Debug, thiserror::Error)]
pub enum LayerError {
    #[error("no exposed vertex among {remaining} remaining; exposure function is inconsistent")]
    NoBoundaryNode { remaining: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Undirected adjacency of the subdomain union.
#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    pub adj: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    pub fn from_geometry(geom: &Geometry2D) -> Self {
        Self {
            adj: (0..geom.len()).map(|j| geom.neighbors(j).to_vec()).collect(),
        }
    }

    pub fn from_balls(balls: &[Ball]) -> Self {
        let n = balls.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if balls[i].overlaps(&balls[j]) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        Self { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Partition of the vertices into layers `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAssignment {
    /// Layer index (1-based) per vertex.
    pub layer_of: Vec<usize>,
    pub n_max: usize,
}

impl LayerAssignment {
    pub fn members(&self, layer: usize) -> Vec<usize> {
        (0..self.layer_of.len())
            .filter(|&v| self.layer_of[v] == layer)
            .collect()
    }

    /// Every vertex of layer m >= 2 must have a neighbor in layer m-1.
    pub fn has_monotone_neighbors(&self, graph: &AdjacencyGraph) -> bool {
        self.layer_of.iter().enumerate().all(|(v, &m)| {
            m == 1 || graph.adj[v].iter().any(|&w| self.layer_of[w] == m - 1)
        })
    }
}

/// Peel layers by repeatedly removing the vertices with exposed boundary.
///
/// `exposure(j, active)` returns the exposed boundary fraction of vertex `j`
/// within the union of the active vertices; layer 1 is everything exposed
/// above `exposure_eps`, and the procedure recurses on the remainder.
pub fn peel_layers<F>(
    n: usize,
    exposure: F,
    exposure_eps: f64,
) -> Result<LayerAssignment, LayerError>
where
    F: Fn(usize, &[bool]) -> f64 + Sync,
{
    let mut active = vec![true; n];
    let mut layer_of = vec![0usize; n];
    let mut remaining = n;
    let mut layer = 0usize;
    while remaining > 0 {
        layer += 1;
        let exposed: Vec<usize> = (0..n)
            .into_par_iter()
            .filter(|&j| active[j] && exposure(j, &active) > exposure_eps)
            .collect();
        if exposed.is_empty() {
            return Err(LayerError::NoBoundaryNode { remaining });
        }
        for &j in &exposed {
            active[j] = false;
            layer_of[j] = layer;
        }
        remaining -= exposed.len();
    }
    Ok(LayerAssignment {
        layer_of,
        n_max: layer,
    })
}

/// Layers of a disk union using the exact angular-overlay exposure.
pub fn peel_layers_2d(geom: &Geometry2D, exposure_eps: f64) -> Result<LayerAssignment, LayerError> {
    peel_layers(
        geom.len(),
        |j, active| exposure_fraction_2d(geom, j, active),
        exposure_eps,
    )
}

/// Default exposed-fraction floor for the exact 2D overlay.
pub const EXPOSURE_EPS_2D: f64 = 1e-6;

/// Default direction count for 3D sphere sampling.
pub const DEFAULT_N_DIRS: usize = 4096;

/// One ball subdomain in 3D.
#[derive(Debug, Clone, Copy)]
pub struct Ball {
    pub center: [f64; 3],
    pub radius: f64,
}

impl Ball {
    pub fn new(x: f64, y: f64, z: f64, radius: f64) -> Self {
        Self {
            center: [x, y, z],
            radius,
        }
    }

    pub fn dist(&self, other: &Ball) -> f64 {
        let dx = self.center[0] - other.center[0];
        let dy = self.center[1] - other.center[1];
        let dz = self.center[2] - other.center[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.dist(other) < self.radius + other.radius
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let dz = p[2] - self.center[2];
        dx * dx + dy * dy + dz * dz < self.radius * self.radius
    }
}

/// Quasi-uniform unit directions by the canonical Fibonacci lattice.
/// Deterministic: no randomness enters layer assignments.
pub fn fibonacci_directions(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Fraction of `n_dirs` lattice directions on the sphere of ball `j` not
/// covered by any other active ball.
pub fn exposure_fraction_3d(balls: &[Ball], j: usize, active: &[bool], n_dirs: usize) -> f64 {
    debug_assert!(active[j]);
    let b = &balls[j];
    let covers: Vec<&Ball> = balls
        .iter()
        .enumerate()
        .filter(|&(k, other)| k != j && active[k] && b.overlaps(other))
        .map(|(_, other)| other)
        .collect();
    if covers.is_empty() {
        return 1.0;
    }
    let dirs = fibonacci_directions(n_dirs);
    let uncovered = dirs
        .iter()
        .filter(|d| {
            let p = [
                b.center[0] + b.radius * d[0],
                b.center[1] + b.radius * d[1],
                b.center[2] + b.radius * d[2],
            ];
            !covers.iter().any(|c| c.contains(p))
        })
        .count();
    uncovered as f64 / n_dirs as f64
}

/// Layers of a ball union by sampled sphere exposure. The default exposure
/// floor is `2 / n_dirs`: a single stray direction does not make a vertex a
/// boundary node.
pub fn peel_layers_3d(
    balls: &[Ball],
    n_dirs: usize,
    exposure_eps: Option<f64>,
) -> Result<LayerAssignment, LayerError> {
    let eps = exposure_eps.unwrap_or(2.0 / n_dirs as f64);
    peel_layers(
        balls.len(),
        |j, active| exposure_fraction_3d(balls, j, active, n_dirs),
        eps,
    )
}

/// Parse the `balls3d v1` text format: `# balls3d v1` header, then
/// `id cx cy cz r` records with contiguous 1-based ids.
pub fn parse_balls3d(text: &str) -> Result<Vec<Ball>, LayerError> {
    let mut records: Vec<(usize, Ball)> = Vec::new();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if line.starts_with("# balls3d") {
                saw_header = true;
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(LayerError::Parse {
                line: lineno + 1,
                msg: format!("expected 'id cx cy cz r', got {} fields", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<f64, LayerError> {
            s.parse::<f64>().map_err(|e| LayerError::Parse {
                line: lineno + 1,
                msg: format!("bad {what}: {e}"),
            })
        };
        let id = parse(fields[0], "id")? as usize;
        records.push((
            id,
            Ball::new(
                parse(fields[1], "cx")?,
                parse(fields[2], "cy")?,
                parse(fields[3], "cz")?,
                parse(fields[4], "r")?,
            ),
        ));
    }
    if !saw_header {
        return Err(LayerError::Parse {
            line: 1,
            msg: "missing '# balls3d v1' header".into(),
        });
    }
    records.sort_by_key(|(id, _)| *id);
    for (pos, (id, _)) in records.iter().enumerate() {
        if *id != pos + 1 {
            return Err(LayerError::Parse {
                line: 0,
                msg: format!("ids must be contiguous 1..N, found {id} at rank {}", pos + 1),
            });
        }
    }
    Ok(records.into_iter().map(|(_, b)| b).collect())
}

pub fn write_balls3d(balls: &[Ball]) -> String {
    let mut out = String::from("# balls3d v1\n");
    for (i, b) in balls.iter().enumerate() {
        writeln!(
            out,
            "{} {} {} {} {}",
            i + 1,
            b.center[0],
            b.center[1],
            b.center[2],
            b.radius
        )
        .unwrap();
    }
    out
}

/// The twelve icosahedron vertex directions (unit vectors).
pub fn icosahedron_directions() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let norm = (1.0 + phi * phi).sqrt();
    let mut dirs = Vec::with_capacity(12);
    for &a in &[1.0, -1.0] {
        for &b in &[phi, -phi] {
            dirs.push([0.0, a / norm, b / norm]);
            dirs.push([a / norm, b / norm, 0.0]);
            dirs.push([b / norm, 0.0, a / norm]);
        }
    }
    dirs
}

/// A 13-ball core-shell cluster: a central ball whose sphere is entirely
/// covered by 12 neighbors on icosahedron vertices. With equal radii `r`
/// and center distance `d`, each neighbor covers a cap of half-angle
/// `acos(d/2r)`; `d = 1.5 r` exceeds the icosahedral covering requirement.
pub fn core_shell_13(radius: f64, spacing: f64) -> Vec<Ball> {
    let mut balls = vec![Ball::new(0.0, 0.0, 0.0, radius)];
    for d in icosahedron_directions() {
        balls.push(Ball::new(spacing * d[0], spacing * d[1], spacing * d[2], radius));
    }
    balls
}
