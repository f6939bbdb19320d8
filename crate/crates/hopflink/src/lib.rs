//! Computational geometry of Hopf link configuration spaces.
//!
//! This crate provides canonical coordinates on the space of round Hopf
//! links in ℝ³ and of great Hopf links in S³, together with the numerical
//! machinery needed to certify them:
//!
//! - [`quat`] — quaternion algebra, the SU(2) → SO(3) double cover, path
//!   lifting through the cover, and orbit canonicalization under finite
//!   quaternion subgroups.
//! - [`roundlink`] — oriented round circles and round Hopf links:
//!   validation, linking numbers, the arc of intersection of the two
//!   spanning discs, and dihedral angles.
//! - [`retraction`] — the stage-wise retraction of a round Hopf link onto
//!   its normal form, frame extraction, the canonical prism-manifold
//!   coordinate (a point of S³/ℚ8), and loop holonomy.
//! - [`plgeom`] — piecewise-linear front end: polygonal curves, Gauss and
//!   crossing-count linking numbers, triangulated discs, the ellipsoid
//!   family over an equator circle, transverse height search, and
//!   marching-triangles extraction of intersection patterns.
//! - [`pattern`] — combinatorics of signed chord diagrams: validation,
//!   nesting, innermost-first ordering, removal schedules, and the
//!   combinatorial simulation of the removal isotopy.
//! - [`grassmann`] — oriented 2-planes in ℝ⁴ as great Hopf links: the
//!   μ/ν/ξ maps to S²×S², orthogonal complements, canonical ℝP²×ℝP²
//!   coordinates, and stereographic projection utilities.
//!
//! Supporting modules: [`io`] (JSON wire formats), [`sample`] (seeded
//! random generators), [`fixtures`] (reference configurations), and
//! [`verify`] (the seeded verification suites behind `hopflink verify`).
//!
//! Start with the runnable examples in `examples/` — there is one per
//! major capability.

pub mod error;
pub mod fixtures;
pub mod grassmann;
pub mod io;
pub mod pattern;
pub mod plgeom;
pub mod quat;
pub mod retraction;
pub mod roundlink;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
