//! Piecewise-linear geometry front end.
//!
//! Polygonal curves stand in for smooth embeddings: [`gauss_linking_pl`]
//! and [`crossing_linking_pl`] give two independent routes to the
//! linking number of closed polylines, cross-checked against the closed
//! form for round circles. Triangulated discs ([`TriMesh`]) meet the
//! ellipsoid family over an equator circle ([`Ellipsoid`]) in a zero set
//! that [`extract_intersection_pattern`] traces into a signed chord
//! diagram, after [`find_transverse_height`] picks a height at which the
//! crossing is generic at mesh resolution.

mod linking;
mod marching;
mod mesh;

pub use linking::{crossing_linking_pl, gauss_linking_pl, gauss_linking_sum, Polyline3};
pub use marching::{extract_intersection_pattern, find_transverse_height, scene_pipeline};
pub use mesh::{Ellipsoid, Scene, TriMesh};
