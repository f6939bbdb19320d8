//! Reference configurations used by tests, examples and the CLI.
//!
//! The two deformed scenes are tuned against the disc mesher's in-plane
//! frame for a disc with normal `e2`, where a boundary point at mesher
//! angle `phi` sits at `(1 - rho sin(phi), 0, -rho cos(phi))`.

use nalgebra::Vector3;

use crate::plgeom::{Scene, TriMesh};
use crate::roundlink::{OrientedRoundHopfLink, RoundCircle};

/// The standard round Hopf link: the unit circle in the xy-plane about
/// the origin (normal `e3`) and the unit circle in the xz-plane about
/// `(1,0,0)` (normal `e2`). Oriented linking number `+1`.
pub fn basepoint_link() -> OrientedRoundHopfLink {
    OrientedRoundHopfLink::new(basepoint_first(), basepoint_second()).expect("basepoint is valid")
}

pub fn basepoint_first() -> RoundCircle {
    RoundCircle::new(Vector3::zeros(), 1.0, Vector3::z()).expect("valid circle")
}

pub fn basepoint_second() -> RoundCircle {
    RoundCircle::new(Vector3::new(1.0, 0.0, 0.0), 1.0, Vector3::y()).expect("valid circle")
}

/// Scene for the standard configuration: the flat disc spanned by the
/// second circle against the ellipsoid family over the first circle.
pub fn basepoint_scene(resolution: usize) -> Scene {
    Scene {
        disc_mesh: TriMesh::flat_disc(Vector3::new(1.0, 0.0, 0.0), 1.0, Vector3::y(), resolution)
            .expect("valid disc mesh"),
        equator: basepoint_first(),
        h_range: (0.5, 2.0),
    }
}

/// Like [`basepoint_scene`], but the disc boundary bulges outward in a
/// window on the upper-hemisphere side, far enough that the bulge peak
/// leaves the ellipsoid (peak `x < -1`, so it is outside for every
/// height): the boundary passes out through the top and back, and the
/// pattern gains one `(+,+)` chord beside the special arc.
pub fn finger_scene(resolution: usize) -> Scene {
    let bulge_center = 1.75_f64;
    let bulge_halfwidth = 0.25_f64;
    let bulge_amplitude = 1.1_f64;
    Scene {
        disc_mesh: TriMesh::radial_disc(
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::y(),
            resolution,
            move |phi| {
                let d = angular_distance(phi, bulge_center);
                if d < bulge_halfwidth {
                    1.0 + bulge_amplitude
                        * 0.5
                        * (1.0 + (std::f64::consts::PI * d / bulge_halfwidth).cos())
                } else {
                    1.0
                }
            },
            |_, _| 0.0,
        )
        .expect("valid finger mesh"),
        equator: basepoint_first(),
        h_range: (0.5, 2.0),
    }
}

/// Like [`basepoint_scene`], but an interior patch of the disc around
/// `(0.45, 0, 0)` — inside the ellipsoid for every height in range — is
/// pushed out of the plane until it pokes through the surface (`y`
/// exceeds 1 at the peak): the pattern gains one circle component and
/// keeps the same chords.
pub fn bubble_scene(resolution: usize) -> Scene {
    let patch_radial = 0.55_f64;
    let patch_angle = std::f64::consts::FRAC_PI_2;
    let patch_width = 0.2_f64;
    let amplitude = 1.2_f64;
    Scene {
        disc_mesh: TriMesh::radial_disc(
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::y(),
            resolution,
            |_| 1.0,
            move |r, phi| {
                let dr = r - patch_radial;
                let dphi = angular_distance(phi, patch_angle) * r;
                let d2 = dr * dr + dphi * dphi;
                let w2 = patch_width * patch_width;
                if d2 < w2 {
                    amplitude * (1.0 - d2 / w2) * (1.0 - d2 / w2)
                } else {
                    0.0
                }
            },
        )
        .expect("valid bubble mesh"),
        equator: basepoint_first(),
        h_range: (0.5, 2.0),
    }
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// The great Hopf link basepoint in S³: the circles cut out by the
/// coordinate planes span(1, i) and span(j, k).
pub fn basepoint_great_planes() -> (crate::grassmann::Plane2in4, crate::grassmann::Plane2in4) {
    use crate::grassmann::Plane2in4;
    use crate::quat::Quaternion;
    let v = Plane2in4::new(Quaternion::one(), Quaternion::i()).expect("orthonormal");
    let w = Plane2in4::new(Quaternion::j(), Quaternion::k()).expect("orthonormal");
    (v, w)
}

/// The rigid-rotation loop realizing a deck element: a π-rotation of
/// the standard link about the axis that carries it onto its deck
/// image, sampled in `n + 1` steps. For [`DeckElement::Id`] the loop is
/// constant.
///
/// The axes: `α` rotates about the x-axis, `s` about `(0,1,1)/√2`
/// through the arc midpoint, `αs` about `(0,-1,1)/√2` through the arc
/// midpoint.
pub fn deck_loop(
    g: crate::retraction::DeckElement,
    n: usize,
) -> Vec<crate::roundlink::OrientedRoundHopfLink> {
    use crate::quat::Rotation3;
    use crate::retraction::DeckElement;

    let base = basepoint_link();
    let m = Vector3::new(0.5, 0.0, 0.0);
    let sq = std::f64::consts::FRAC_1_SQRT_2;
    let (axis, about, angle) = match g {
        DeckElement::Id => (Vector3::x(), Vector3::zeros(), 0.0),
        DeckElement::Alpha => (Vector3::x(), Vector3::zeros(), std::f64::consts::PI),
        DeckElement::S => (Vector3::new(0.0, sq, sq), m, std::f64::consts::PI),
        DeckElement::AlphaS => (Vector3::new(0.0, -sq, sq), m, std::f64::consts::PI),
    };
    (0..=n)
        .map(|k| {
            let rot = Rotation3::from_axis_angle(axis, angle * (k as f64) / (n as f64))
                .expect("unit axis");
            base.rotated_about(&rot, &about)
        })
        .collect()
}
