//! Shared fixtures for unit tests.

use std::f64::consts::TAU;

use crate::geometry::{build_geometry, Disk, Geometry2D, DEFAULT_TOLERANCE};

/// Two unit disks with centers `dist` apart.
pub(crate) fn two_disk_geometry(dist: f64) -> Geometry2D {
    let disks = vec![Disk::new(0.0, 0.0, 1.0), Disk::new(dist, 0.0, 1.0)];
    build_geometry(disks, DEFAULT_TOLERANCE).unwrap()
}

/// Six unit petals on a hexagon of circumradius 1.5 around a central unit
/// disk. The center is listed last (index 6) so the petals carry indices
/// 0..=5, matching the usual flower labelling.
pub(crate) fn flower() -> Geometry2D {
    let s = 1.5;
    let mut disks = Vec::new();
    for m in 0..6 {
        let a = TAU * m as f64 / 6.0;
        disks.push(Disk::new(s * a.cos(), s * a.sin(), 1.0));
    }
    disks.push(Disk::new(0.0, 0.0, 1.0));
    build_geometry(disks, DEFAULT_TOLERANCE).unwrap()
}
