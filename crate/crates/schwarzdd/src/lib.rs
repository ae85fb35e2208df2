//! Parallel Schwarz method on unions of intersecting disks.
//!
//! The crate builds the geometric machinery of overlapping disk unions
//! (boundary partitions into covering-labelled arcs, skeletons, exposed
//! boundary), the skeleton iteration operator of the parallel Schwarz
//! method with harmonic extensions by Poisson quadrature, layer peeling of
//! ball and disk unions, and molecular cavity statistics under scaled
//! van der Waals and solvent-accessible radius conventions.
//!
//! Start from [`generators`] to create a geometry, [`schwarz`] to iterate on
//! it, and [`layers`] to peel it. The `examples/` directory has one runnable
//! example per capability.

pub mod angles;
pub mod geometry;
pub mod harmonic;
pub mod interp;
pub mod pou;

#[cfg(test)]
pub(crate) mod testutil;
