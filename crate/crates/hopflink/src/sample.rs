//! Seeded random generators for links, rotations, planes and patterns.
//!
//! All sampling is deterministic given the `Rng`; the CLI and the
//! verification suites seed a ChaCha generator so identical seeds give
//! identical runs.

use nalgebra::Vector3;
use rand::Rng;

use crate::grassmann::Plane2in4;
use crate::pattern::{IntersectionPattern, Sign};
use crate::quat::{conjugation_action, Quaternion, Rotation3, UnitQuaternion};
use crate::roundlink::{validate_hopf, OrientedRoundHopfLink, RoundCircle};

pub fn random_vector(rng: &mut impl Rng, scale: f64) -> Vector3<f64> {
    Vector3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = random_vector(rng, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_unit_quaternion(rng: &mut impl Rng) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm() > 0.1 && q.norm() <= 1.0 {
            return UnitQuaternion::normalize(q).expect("nonzero");
        }
    }
}

/// Uniform random rotation (via the double cover).
pub fn random_rotation(rng: &mut impl Rng) -> Rotation3 {
    conjugation_action(&random_unit_quaternion(rng))
}

/// Random oriented round circle with radius in `[0.4, 2.2]`.
pub fn random_circle(rng: &mut impl Rng) -> RoundCircle {
    let radius = (rng.gen_range(0.4_f64.ln()..2.2_f64.ln())).exp();
    RoundCircle::new(random_vector(rng, 2.0), radius, random_unit_vector(rng))
        .expect("valid random circle")
}

/// Random oriented, labelled round Hopf link with linking number `+1`.
///
/// Construction: a random line for the planes to intersect in, random
/// dihedral angle bounded away from 0 and π, random radii, and chord
/// positions sampled to interleave with a safety margin. The second
/// orientation is then fixed to make the linking number positive.
pub fn random_link_pos(rng: &mut impl Rng) -> OrientedRoundHopfLink {
    loop {
        if let Some(link) = try_random_link(rng) {
            return link;
        }
    }
}

fn try_random_link(rng: &mut impl Rng) -> Option<OrientedRoundHopfLink> {
    let origin = random_vector(rng, 2.0);
    let dir = random_unit_vector(rng);

    // orthonormal frame (u, w) of the plane perpendicular to dir
    let seed = if dir.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let u = dir.cross(&seed).normalize();
    let w = dir.cross(&u);

    let phi1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let theta = rng.gen_range(0.25..std::f64::consts::PI - 0.25);
    let phi2 = phi1 + theta;
    let n1 = u * phi1.cos() + w * phi1.sin();
    let n2 = u * phi2.cos() + w * phi2.sin();

    let r1 = (rng.gen_range(0.4_f64.ln()..2.2_f64.ln())).exp();
    let r2 = (rng.gen_range(0.4_f64.ln()..2.2_f64.ln())).exp();

    let d1 = rng.gen_range(0.0..0.85 * r1);
    let d2 = rng.gen_range(0.0..0.85 * r2);
    let h1 = (r1 * r1 - d1 * d1).sqrt();
    let h2 = (r2 * r2 - d2 * d2).sqrt();

    // chord 1 is [-h1, h1] on the line; sample the start of chord 2 so
    // the chords interleave with a 5% safety margin
    let low = (-h1).max(h1 - 2.0 * h2);
    let span = h1 - low;
    let a2 = low + span * rng.gen_range(0.05..0.95);
    let t2 = a2 + h2;

    // in-plane perpendicular offsets, on a random side of the line
    let side1: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let side2: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let w1 = n1.cross(&dir);
    let w2 = n2.cross(&dir);

    let p1 = origin + w1 * (side1 * d1);
    let p2 = origin + dir * t2 + w2 * (side2 * d2);

    let c1 = RoundCircle::new(p1, r1, n1).ok()?;
    let c2 = RoundCircle::new(p2, r2, n2).ok()?;

    match crate::roundlink::linking_number_round(&c1, &c2) {
        Ok(1) => validate_hopf(c1, c2).ok(),
        Ok(-1) => validate_hopf(c1, c2.reversed()).ok(),
        _ => None,
    }
}

/// Random valid link with arbitrary orientations (linking number ±1).
pub fn random_link_any(rng: &mut impl Rng) -> OrientedRoundHopfLink {
    let link = random_link_pos(rng);
    if rng.gen::<bool>() {
        OrientedRoundHopfLink::new(*link.first(), link.second().reversed())
            .expect("orientation reversal preserves validity")
    } else {
        link
    }
}

/// Random oriented orthonormal pair in ℝ⁴.
pub fn random_plane(rng: &mut impl Rng) -> Plane2in4 {
    loop {
        let x = random_unit_quaternion(rng).as_quaternion();
        let y0 = random_unit_quaternion(rng).as_quaternion();
        // Gram-Schmidt y0 against x
        let y = y0 - x.scale(x.dot(&y0));
        let n = y.norm();
        if n > 0.1 {
            if let Ok(p) = Plane2in4::new(x, y.scale(1.0 / n)) {
                return p;
            }
        }
    }
}

/// Random planar signed chord diagram with up to `max_chords` non-mixed
/// chords and up to `max_circles` circles.
pub fn random_pattern(
    rng: &mut impl Rng,
    max_chords: usize,
    max_circles: usize,
) -> IntersectionPattern {
    let m = rng.gen_range(0..=max_chords);
    let pairs = m + 1;

    // random non-crossing perfect matching via a random Dyck word
    let mut stack: Vec<usize> = Vec::new();
    let mut matching: Vec<(usize, usize)> = Vec::new();
    let mut opens = 0usize;
    for slot in 0..2 * pairs {
        let can_open = opens < pairs;
        let can_close = !stack.is_empty();
        let open = match (can_open, can_close) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => rng.gen::<bool>(),
            (false, false) => unreachable!(),
        };
        if open {
            stack.push(slot);
            opens += 1;
        } else {
            let a = stack.pop().expect("nonempty");
            matching.push((a, slot));
        }
    }

    let alpha_idx = rng.gen_range(0..matching.len());
    let alpha = matching.remove(alpha_idx);

    let mut signs = vec![Sign::Plus; 2 * pairs];
    let (ap, am) = if rng.gen::<bool>() {
        (alpha.0, alpha.1)
    } else {
        (alpha.1, alpha.0)
    };
    signs[ap] = Sign::Plus;
    signs[am] = Sign::Minus;
    for &(a, b) in &matching {
        let s = if rng.gen::<bool>() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        signs[a] = s;
        signs[b] = s;
    }

    let n_circles = rng.gen_range(0..=max_circles);
    let circles = (0..n_circles)
        .map(|_| {
            if matching.is_empty() || rng.gen_ratio(1, (matching.len() + 1) as u32) {
                None
            } else {
                Some(rng.gen_range(0..matching.len()))
            }
        })
        .collect();

    IntersectionPattern::new(signs, alpha, matching, circles).expect("constructed pattern valid")
}
