//! Partition-of-unity weights on interior boundaries.
//!
//! The continuous kind blends neighbors by normalized radial penetration
//! depth, which is 1 on singly-covered pieces, vanishes where a neighbor's
//! boundary is reached, and sums to one on any covered piece. The
//! discontinuous kind hands each piece to a single donor neighbor.

use crate::geometry::{ArcLabel, ArcPiece, Geometry2D, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoUKind {
    Continuous,
    Discontinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// Normalized penetration depths.
    Penetration,
    /// Lowest covering index takes the whole piece.
    MinIndex,
    /// The three-disk cyclic assignment used as a reference fixture:
    /// subdomain j takes data from neighbor (j+1) mod 3 whenever possible.
    Cyclic3,
}

#[derive(Debug, Clone, Copy)]
pub struct PoUSpec {
    kind: PoUKind,
    rule: Rule,
}

#[derive(Debug, thiserror::Error)]
pub enum PoUError {
    #[error("no covering neighbor penetrates at a covered sample of disk {owner} (Σf = 0)")]
    ZeroDenominator { owner: usize },
    #[error("invalid partition-of-unity request: {0}")]
    Invalid(String),
}

/// Continuous partition of unity from normalized penetration depths.
pub fn continuous_pou(_geom: &Geometry2D) -> PoUSpec {
    PoUSpec {
        kind: PoUKind::Continuous,
        rule: Rule::Penetration,
    }
}

/// Discontinuous partition of unity: on each covered piece the neighbor with
/// the lowest index carries weight one.
pub fn discontinuous_pou(_geom: &Geometry2D) -> PoUSpec {
    PoUSpec {
        kind: PoUKind::Discontinuous,
        rule: Rule::MinIndex,
    }
}

/// The cyclic three-disk discontinuous assignment. Only valid for `N == 3`;
/// kept as a test fixture mirroring the classical alternating choice.
pub fn discontinuous_pou_cyclic3(geom: &Geometry2D) -> Result<PoUSpec, PoUError> {
    if geom.len() != 3 {
        return Err(PoUError::Invalid(format!(
            "cyclic rule is defined for 3 disks, geometry has {}",
            geom.len()
        )));
    }
    Ok(PoUSpec {
        kind: PoUKind::Discontinuous,
        rule: Rule::Cyclic3,
    })
}

impl PoUSpec {
    pub fn kind(&self) -> PoUKind {
        self.kind
    }

    pub fn from_kind(kind: PoUKind) -> Self {
        match kind {
            PoUKind::Continuous => PoUSpec {
                kind,
                rule: Rule::Penetration,
            },
            PoUKind::Discontinuous => PoUSpec {
                kind,
                rule: Rule::MinIndex,
            },
        }
    }

    /// Weights of all covering neighbors at a boundary point `x` of subdomain
    /// `owner` lying on a piece covered by `covering` (sorted indices).
    /// Returned in the order of `covering`; the weights sum to one.
    pub fn weights(
        &self,
        geom: &Geometry2D,
        owner: usize,
        covering: &[usize],
        x: Point,
    ) -> Result<Vec<f64>, PoUError> {
        if covering.is_empty() {
            return Ok(Vec::new());
        }
        match self.rule {
            Rule::Penetration => {
                // A singly-covered piece carries weight one on its closure;
                // evaluating the ratio at the piece endpoints would hit 0/0.
                if covering.len() == 1 {
                    return Ok(vec![1.0]);
                }
                let f: Vec<f64> = covering
                    .iter()
                    .map(|&k| geom.disk(k).penetration(x))
                    .collect();
                let total: f64 = f.iter().sum();
                if total <= 0.0 {
                    return Err(PoUError::ZeroDenominator { owner });
                }
                Ok(f.into_iter().map(|v| v / total).collect())
            }
            Rule::MinIndex => {
                let donor = *covering.iter().min().unwrap();
                Ok(covering
                    .iter()
                    .map(|&k| if k == donor { 1.0 } else { 0.0 })
                    .collect())
            }
            Rule::Cyclic3 => {
                let preferred = (owner + 1) % 3;
                let donor = if covering.contains(&preferred) {
                    preferred
                } else {
                    *covering.iter().min().unwrap()
                };
                Ok(covering
                    .iter()
                    .map(|&k| if k == donor { 1.0 } else { 0.0 })
                    .collect())
            }
        }
    }

    /// Weight of one neighbor; zero if it does not cover the piece.
    pub fn weight(
        &self,
        geom: &Geometry2D,
        owner: usize,
        neighbor: usize,
        covering: &[usize],
        x: Point,
    ) -> Result<f64, PoUError> {
        match covering.iter().position(|&k| k == neighbor) {
            None => Ok(0.0),
            Some(pos) => Ok(self.weights(geom, owner, covering, x)?[pos]),
        }
    }
}

/// Summary of a sampling sweep over every boundary piece.
#[derive(Debug, Clone, Default)]
pub struct PoUReport {
    /// max |Σ_k χ_j^k(x) - 1| over covered-piece samples.
    pub max_sum_deviation: f64,
    /// max distance of any weight from the interval [0, 1].
    pub max_range_violation: f64,
    /// max |Σ_k χ_j^k(x)| over exterior-piece samples.
    pub max_exterior_sum: f64,
    /// max jump between adjacent samples within a piece (continuous kind).
    pub max_intra_piece_jump: f64,
    pub samples_checked: usize,
}

/// Sample every piece of every subdomain boundary at `samples` interior
/// points and record partition-of-unity violations. Nothing is thrown:
/// violations are reported.
pub fn verify_pou(
    spec: &PoUSpec,
    geom: &Geometry2D,
    pieces: &[Vec<ArcPiece>],
    samples: usize,
) -> Result<PoUReport, PoUError> {
    let mut report = PoUReport::default();
    for j in 0..geom.len() {
        for piece in &pieces[j] {
            let covering: &[usize] = match &piece.label {
                ArcLabel::Exterior => &[],
                ArcLabel::Covered(ids) => ids,
            };
            let mut prev: Option<Vec<f64>> = None;
            for s in 0..samples {
                // Strictly interior sample angles of the piece.
                let frac = (s as f64 + 0.5) / samples as f64;
                let theta = piece.interval.start() + frac * piece.interval.width();
                let x = geom.disk(j).point_at(theta);
                let w = spec.weights(geom, j, covering, x)?;
                report.samples_checked += 1;
                let sum: f64 = w.iter().sum();
                if covering.is_empty() {
                    report.max_exterior_sum = report.max_exterior_sum.max(sum.abs());
                } else {
                    report.max_sum_deviation = report.max_sum_deviation.max((sum - 1.0).abs());
                }
                for &v in &w {
                    let out = (-v).max(v - 1.0).max(0.0);
                    report.max_range_violation = report.max_range_violation.max(out);
                }
                if spec.kind == PoUKind::Continuous {
                    if let Some(p) = &prev {
                        for (a, b) in p.iter().zip(&w) {
                            report.max_intra_piece_jump =
                                report.max_intra_piece_jump.max((a - b).abs());
                        }
                    }
                    prev = Some(w);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_geometry, partition_all, Disk, DEFAULT_TOLERANCE};

    fn three_disk_fixture() -> Geometry2D {
        // Symmetric pair of neighbors around disk 0 so the point (1, 0) on
        // circle 0 penetrates both equally.
        let disks = vec![
            Disk::new(0.0, 0.0, 1.0),
            Disk::new(1.2, 0.7, 1.0),
            Disk::new(1.2, -0.7, 1.0),
        ];
        build_geometry(disks, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn single_cover_weight_is_one() {
        let geom = three_disk_fixture();
        let x = geom.disk(0).point_at(0.6);
        for spec in [continuous_pou(&geom), discontinuous_pou(&geom)] {
            let w = spec.weights(&geom, 0, &[1], x).unwrap();
            assert_eq!(w.len(), 1);
            assert!((w[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_penetration_splits_evenly() {
        let geom = three_disk_fixture();
        let x = Point::new(1.0, 0.0);
        let spec = continuous_pou(&geom);
        let w = spec.weights(&geom, 0, &[1, 2], x).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12);
        assert!((w[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_index_rule_takes_lowest() {
        let geom = three_disk_fixture();
        let x = Point::new(1.0, 0.0);
        let spec = discontinuous_pou(&geom);
        let w = spec.weights(&geom, 0, &[1, 2], x).unwrap();
        assert_eq!(w, vec![1.0, 0.0]);
    }

    #[test]
    fn cyclic3_matches_reference_assignment() {
        let geom = three_disk_fixture();
        let spec = discontinuous_pou_cyclic3(&geom).unwrap();
        let x = Point::new(1.0, 0.0);
        // Subdomain 0 prefers neighbor 1, subdomain 1 prefers 2, subdomain 2
        // prefers 0, also on doubly-covered pieces.
        assert_eq!(spec.weights(&geom, 0, &[1, 2], x).unwrap(), vec![1.0, 0.0]);
        assert_eq!(spec.weights(&geom, 1, &[0, 2], x).unwrap(), vec![0.0, 1.0]);
        assert_eq!(spec.weights(&geom, 2, &[0, 1], x).unwrap(), vec![1.0, 0.0]);
        // Singly-covered pieces keep the sole neighbor.
        assert_eq!(spec.weights(&geom, 0, &[2], x).unwrap(), vec![1.0]);
    }

    #[test]
    fn weights_sum_to_one_on_random_points() {
        let geom = crate::testutil::flower();
        let pieces = partition_all(&geom).unwrap();
        for spec in [continuous_pou(&geom), discontinuous_pou(&geom)] {
            let report = verify_pou(&spec, &geom, &pieces, 64).unwrap();
            assert!(report.max_sum_deviation <= 1e-12, "{report:?}");
            assert!(report.max_range_violation == 0.0);
            assert!(report.max_exterior_sum == 0.0);
        }
    }

    #[test]
    fn continuous_jumps_shrink_with_sampling() {
        let geom = crate::testutil::flower();
        let pieces = partition_all(&geom).unwrap();
        let spec = continuous_pou(&geom);
        let coarse = verify_pou(&spec, &geom, &pieces, 32).unwrap();
        let fine = verify_pou(&spec, &geom, &pieces, 256).unwrap();
        assert!(fine.max_intra_piece_jump < coarse.max_intra_piece_jump);
        assert!(fine.max_intra_piece_jump < 10.0 / 256.0);
    }

    #[test]
    fn zero_denominator_detected() {
        let geom = three_disk_fixture();
        let spec = continuous_pou(&geom);
        // A point far outside every claimed covering disk.
        let x = Point::new(-1.0, 0.0);
        assert!(matches!(
            spec.weights(&geom, 0, &[1, 2], x),
            Err(PoUError::ZeroDenominator { owner: 0 })
        ));
    }
}
