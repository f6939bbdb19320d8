//! Stage-wise retraction of round Hopf links onto the normal form, the
//! deck action, frame extraction, and the canonical prism-manifold
//! coordinate.
//!
//! The space of oriented, labelled round Hopf links with linking number
//! `+1` carries an action of the Klein group `G = {id, α, s, αs}`: `α`
//! reverses both orientations, `s` exchanges the labels. A sequence of
//! five moves deforms any such link onto its *normal form*:
//!
//! 1. translate the arc-of-intersection midpoint to `(1/2, 0, 0)`;
//! 2. rotate both discs symmetrically about the arc line until their
//!    planes are orthogonal;
//! 3. grow the smaller circle about its own arc endpoint until the
//!    radii agree;
//! 4. rescale about the arc midpoint to radius 1;
//! 5. translate the circles toward each other until the arc endpoints
//!    coincide with the two centers (recentering the midpoint).
//!
//! A normal-form link is exactly an orthonormal frame: the columns
//! `(n₁, v, n₂)` with `v = p₂ - p₁` and `n₂ = n₁ × v`. Lifting the frame
//! to the unit quaternions and canonicalizing over the lifted deck
//! action produces a complete invariant of the underlying unoriented,
//! unlabelled link: the [`PrismPoint`], a point of S³ determined up to
//! the order-8 group generated by the deck lifts.
//!
//! All stage formulas are arranged to be *exactly* even under negating
//! both normals and to swap exactly under relabelling, so the computed
//! prism point is bitwise identical across the four deck images of a
//! link.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::quat::{
    lift_path, lift_rotation, Quaternion, QuaternionSubgroup, Rotation3, UnitQuaternion,
};
use crate::roundlink::{OrientedRoundHopfLink, RoundCircle};

/// Tolerance for the normal-form conditions.
pub const NORMAL_FORM_TOL: f64 = 1e-9;
/// The midpoint every normal-form link is centered on.
pub fn normal_form_midpoint() -> Vector3<f64> {
    Vector3::new(0.5, 0.0, 0.0)
}

/// The deck group `ℤ/2 × ℤ/2` acting on oriented labelled links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeckElement {
    Id,
    /// Reverses the orientations of both components.
    Alpha,
    /// Exchanges the two labels.
    S,
    /// Both of the above.
    AlphaS,
}

impl DeckElement {
    pub const ALL: [DeckElement; 4] = [
        DeckElement::Id,
        DeckElement::Alpha,
        DeckElement::S,
        DeckElement::AlphaS,
    ];

    pub fn compose(self, rhs: DeckElement) -> DeckElement {
        use DeckElement::*;
        let bits = |g: DeckElement| match g {
            Id => (false, false),
            Alpha => (true, false),
            S => (false, true),
            AlphaS => (true, true),
        };
        let (a1, s1) = bits(self);
        let (a2, s2) = bits(rhs);
        match (a1 ^ a2, s1 ^ s2) {
            (false, false) => Id,
            (true, false) => Alpha,
            (false, true) => S,
            (true, true) => AlphaS,
        }
    }
}

/// Applies a deck element to an oriented labelled link.
pub fn g_act(g: DeckElement, link: &OrientedRoundHopfLink) -> OrientedRoundHopfLink {
    let (first, second) = link.circles();
    match g {
        DeckElement::Id => *link,
        DeckElement::Alpha => {
            OrientedRoundHopfLink::with_circles(first.reversed(), second.reversed())
        }
        DeckElement::S => OrientedRoundHopfLink::with_circles(*second, *first),
        DeckElement::AlphaS => {
            OrientedRoundHopfLink::with_circles(second.reversed(), first.reversed())
        }
    }
}

/// Stage 1: translate the configuration so the arc midpoint sits at
/// `(1/2, 0, 0)`.
pub fn center_midpoint(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let arc = link.arc_of_intersection()?;
    let t = normal_form_midpoint() - arc.midpoint;
    Ok(link.translated(&t))
}

/// Stage 2: rotate the two discs symmetrically about the arc line until
/// the dihedral angle is π/2. The arc, the radii and the midpoint are
/// untouched.
pub fn orthogonalize(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let arc = link.arc_of_intersection()?;
    let dir = arc.direction();
    let n1 = link.first().normal();
    let n2 = link.second().normal();

    // signed angle from n1 to n2 about the arc direction
    let psi = (n1.cross(&n2).dot(&dir)).atan2(n1.dot(&n2));
    if psi.abs() <= 1e-9 || std::f64::consts::PI - psi.abs() <= 1e-9 {
        return Err(Error::Degenerate(
            "dihedral angle too close to 0 or pi".into(),
        ));
    }
    let target = if psi > 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        -std::f64::consts::FRAC_PI_2
    };
    let delta = target - psi;

    let rot1 = Rotation3::from_axis_angle(dir, -delta / 2.0)?;
    let rot2 = Rotation3::from_axis_angle(dir, delta / 2.0)?;
    Ok(OrientedRoundHopfLink::with_circles(
        link.first().rotated_about(&rot1, &arc.midpoint),
        link.second().rotated_about(&rot2, &arc.midpoint),
    ))
}

/// Stage 3: grow the smaller circle about its own arc endpoint (the arc
/// endpoint lying on that circle) until the radii agree. Growing keeps
/// the chords interleaved, so the arc is fixed pointwise.
pub fn equalize_radii(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let arc = link.arc_of_intersection()?;
    let r1 = link.first().radius();
    let r2 = link.second().radius();
    let result = if r1 < r2 {
        // the arc endpoint on the first circle is e2 (it lies in the
        // second disc)
        OrientedRoundHopfLink::with_circles(
            link.first().scaled_about(&arc.e2, r2 / r1)?,
            *link.second(),
        )
    } else if r2 < r1 {
        OrientedRoundHopfLink::with_circles(
            *link.first(),
            link.second().scaled_about(&arc.e1, r1 / r2)?,
        )
    } else {
        *link
    };
    let new_arc = result.arc_of_intersection()?;
    if new_arc.distance_to(&arc) > 1e-8 {
        return Err(Error::Degenerate(
            "radius equalization failed to preserve the arc".into(),
        ));
    }
    Ok(result)
}

/// Stage 4: rescale the whole configuration about the arc midpoint so
/// the common radius becomes 1. The planes, the arc line and the arc
/// midpoint are fixed; the arc itself rescales with the configuration.
pub fn normalize_radius(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let r1 = link.first().radius();
    let r2 = link.second().radius();
    if (r1 - r2).abs() > 1e-9 {
        return Err(Error::Degenerate(format!(
            "radii differ ({r1} vs {r2}); equalize first"
        )));
    }
    let arc = link.arc_of_intersection()?;
    let factor = 1.0 / r1.max(r2);
    Ok(OrientedRoundHopfLink::with_circles(
        link.first().scaled_about(&arc.midpoint, factor)?,
        link.second().scaled_about(&arc.midpoint, factor)?,
    ))
}

/// Stage 5: translate the circles toward each other until the arc
/// endpoints coincide with the two centers, then recenter the midpoint.
/// Radii, dihedral angle and the arc midpoint are preserved.
pub fn center_arc_endpoints(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let arc = link.arc_of_intersection()?;
    let dir = arc.direction();
    let p1 = link.first().center();
    let p2 = link.second().center();

    // endpoints of the diameters parallel to the arc: y1 on the second
    // circle nearest the first center, y2 on the first circle nearest
    // the second center (unit radius by this stage)
    let y1 = p2 - dir;
    let y2 = p1 + dir;
    let gamma1 = y1 - p1;
    let gamma2 = y2 - p2;

    let moved = OrientedRoundHopfLink::with_circles(
        link.first().translated(&(gamma1 * 0.5)),
        link.second().translated(&(gamma2 * 0.5)),
    );
    let new_arc = moved.arc_of_intersection()?;
    let recenter = arc.midpoint - new_arc.midpoint;
    let result = moved.translated(&recenter);

    let check = result.arc_of_intersection()?;
    let d1 = (check.e1 - result.first().center()).norm();
    let d2 = (check.e2 - result.second().center()).norm();
    if d1 > NORMAL_FORM_TOL || d2 > NORMAL_FORM_TOL {
        return Err(Error::PostconditionFailed(format!(
            "arc endpoints missed the centers by ({d1:.3e}, {d2:.3e})"
        )));
    }
    Ok(result)
}

/// The full five-stage retraction onto the normal form.
pub fn retract_to_normal_form(link: &OrientedRoundHopfLink) -> Result<OrientedRoundHopfLink> {
    let x0 = center_midpoint(link)?;
    let x1 = orthogonalize(&x0)?;
    let x2 = equalize_radii(&x1)?;
    let x3 = normalize_radius(&x2)?;
    center_arc_endpoints(&x3)
}

/// Checks the four normal-form conditions.
pub fn check_normal_form(link: &OrientedRoundHopfLink, tol: f64) -> Result<()> {
    let arc = link.arc_of_intersection()?;
    let m = arc.midpoint - normal_form_midpoint();
    if m.norm() > tol {
        return Err(Error::NotInY(format!(
            "arc midpoint off target by {:.3e}",
            m.norm()
        )));
    }
    let theta = link.dihedral_angle()?;
    if (theta - std::f64::consts::FRAC_PI_2).abs() > tol {
        return Err(Error::NotInY(format!("dihedral angle {theta} != pi/2")));
    }
    for (c, name) in [(link.first(), "first"), (link.second(), "second")] {
        if (c.radius() - 1.0).abs() > tol {
            return Err(Error::NotInY(format!("{name} radius {} != 1", c.radius())));
        }
    }
    let d1 = (arc.e1 - link.first().center()).norm();
    let d2 = (arc.e2 - link.second().center()).norm();
    if d1 > tol || d2 > tol {
        return Err(Error::NotInY(format!(
            "arc endpoints off the centers by ({d1:.3e}, {d2:.3e})"
        )));
    }
    Ok(())
}

/// The orthonormal frame `(n₁, v, n₂)` of a normal-form link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame(Rotation3);

impl Frame {
    /// Validates `n₂ = n₁ × v` (and thereby `det = +1`).
    pub fn new(rotation: Rotation3) -> Result<Self> {
        let n1 = rotation.column(0);
        let v = rotation.column(1);
        let n2 = rotation.column(2);
        if (n1.cross(&v) - n2).norm() > NORMAL_FORM_TOL * 10.0 {
            return Err(Error::NotInY(
                "third frame column is not the cross product of the first two".into(),
            ));
        }
        Ok(Self(rotation))
    }

    pub fn rotation(&self) -> &Rotation3 {
        &self.0
    }

    pub fn n1(&self) -> Vector3<f64> {
        self.0.column(0)
    }

    pub fn v(&self) -> Vector3<f64> {
        self.0.column(1)
    }

    pub fn n2(&self) -> Vector3<f64> {
        self.0.column(2)
    }
}

/// Extracts the frame of a normal-form link: `v = p₂ - p₁` and the two
/// oriented normals.
pub fn frame_of(link: &OrientedRoundHopfLink) -> Result<Frame> {
    check_normal_form(link, NORMAL_FORM_TOL * 10.0)?;
    let v = link.second().center() - link.first().center();
    let rotation = Rotation3::from_columns(link.first().normal(), v, link.second().normal())?;
    Frame::new(rotation)
}

/// The section of the frame identification: the normal-form link whose
/// frame is the given rotation.
pub fn config_of_frame(rotation: &Rotation3) -> Result<OrientedRoundHopfLink> {
    let frame = Frame::new(*rotation)?;
    let m = normal_form_midpoint();
    let p1 = m - frame.v() * 0.5;
    let p2 = m + frame.v() * 0.5;
    let first = RoundCircle::new(p1, 1.0, frame.n1())?;
    let second = RoundCircle::new(p2, 1.0, frame.n2())?;
    OrientedRoundHopfLink::new(first, second)
}

/// Right action of a deck element on frames, as exact column
/// operations (negations and swaps introduce no rounding).
pub fn frame_deck_image(frame: &Frame, g: DeckElement) -> Rotation3 {
    let c0 = frame.n1();
    let c1 = frame.v();
    let c2 = frame.n2();
    let m = match g {
        DeckElement::Id => nalgebra::Matrix3::from_columns(&[c0, c1, c2]),
        DeckElement::Alpha => nalgebra::Matrix3::from_columns(&[-c0, c1, -c2]),
        DeckElement::S => nalgebra::Matrix3::from_columns(&[c2, -c1, c0]),
        DeckElement::AlphaS => nalgebra::Matrix3::from_columns(&[-c2, -c1, -c0]),
    };
    Rotation3::new(m).expect("column operations preserve SO(3)")
}

/// The lifts of the deck action to the unit quaternions:
/// `{±1, ±j, ±(i+k)/√2, ±(i-k)/√2}`, an order-8 subgroup.
pub fn deck_lift_group() -> QuaternionSubgroup {
    let sq = std::f64::consts::FRAC_1_SQRT_2;
    let els = [
        Quaternion::new(1.0, 0.0, 0.0, 0.0),
        Quaternion::new(-1.0, 0.0, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 1.0, 0.0),
        Quaternion::new(0.0, 0.0, -1.0, 0.0),
        Quaternion::new(0.0, sq, 0.0, sq),
        Quaternion::new(0.0, -sq, 0.0, -sq),
        Quaternion::new(0.0, sq, 0.0, -sq),
        Quaternion::new(0.0, -sq, 0.0, sq),
    ];
    QuaternionSubgroup::new(
        els.iter()
            .map(|q| UnitQuaternion::new(*q).expect("unit"))
            .collect(),
    )
    .expect("deck lifts form a subgroup")
}

/// The canonical quotient coordinate of a link: a unit quaternion
/// determined by the underlying unoriented, unlabelled configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrismPoint(UnitQuaternion);

impl PrismPoint {
    pub fn quaternion(&self) -> UnitQuaternion {
        self.0
    }

    pub fn components(&self) -> [f64; 4] {
        self.0.components()
    }

    pub fn distance(&self, other: &PrismPoint) -> f64 {
        self.0.distance(&other.0)
    }
}

fn lex_less(a: &UnitQuaternion, b: &UnitQuaternion, tol: f64) -> bool {
    let ca = a.components();
    let cb = b.components();
    for (x, y) in ca.iter().zip(cb.iter()) {
        if (x - y).abs() > tol {
            return x < y;
        }
    }
    false
}

/// Retracts, extracts the frame, lifts all four deck images of the
/// frame through the double cover, and returns the lexicographically
/// maximal lift.
///
/// Negatively linked input gets one orientation flipped first; the two
/// possible flips differ by the double orientation reversal, so the
/// result does not depend on the choice. Because the deck images of
/// the frame are computed by exact column operations, the candidate
/// set — and hence the canonical value — is bitwise identical for
/// `link` and `g_act(g, link)`.
pub fn canonical_prism_point(link: &OrientedRoundHopfLink) -> Result<PrismPoint> {
    let oriented = if link.linking_number()? == 1 {
        *link
    } else {
        OrientedRoundHopfLink::with_circles(*link.first(), link.second().reversed())
    };
    let normal = retract_to_normal_form(&oriented)?;
    let frame = frame_of(&normal)?;

    let mut candidates: Vec<UnitQuaternion> = Vec::with_capacity(8);
    for g in DeckElement::ALL {
        let (q, qn) = lift_rotation(&frame_deck_image(&frame, g))?;
        candidates.push(q);
        candidates.push(qn);
    }
    let mut canonical = candidates[0];
    for c in &candidates[1..] {
        if lex_less(&canonical, c, crate::quat::ORBIT_TOL) {
            canonical = *c;
        }
    }
    Ok(PrismPoint(crate::quat::normalize_zero_signs(&canonical)))
}

/// One stage record of the retraction pipeline.
#[derive(Debug, Clone, Copy)]
pub struct StageRecord {
    pub stage: &'static str,
    pub link: OrientedRoundHopfLink,
    pub frame: Option<Frame>,
}

/// Runs the pipeline stage by stage, recording each intermediate link;
/// the final record carries the extracted frame.
pub fn stage_trace(link: &OrientedRoundHopfLink) -> Result<Vec<StageRecord>> {
    let x0 = center_midpoint(link)?;
    let x1 = orthogonalize(&x0)?;
    let x2 = equalize_radii(&x1)?;
    let x3 = normalize_radius(&x2)?;
    let x4 = center_arc_endpoints(&x3)?;
    let frame = frame_of(&x4)?;
    Ok(vec![
        StageRecord {
            stage: "center_midpoint",
            link: x0,
            frame: None,
        },
        StageRecord {
            stage: "orthogonalize",
            link: x1,
            frame: None,
        },
        StageRecord {
            stage: "equalize_radii",
            link: x2,
            frame: None,
        },
        StageRecord {
            stage: "normalize_radius",
            link: x3,
            frame: None,
        },
        StageRecord {
            stage: "center_arc_endpoints",
            link: x4,
            frame: Some(frame),
        },
    ])
}

/// Lifts a closed loop of links through the double cover of the frame
/// space and returns the holonomy `q(1) · q(0)⁻¹`.
///
/// The loop must close up to a deck element (equal frames after one of
/// the four deck images) and be sampled densely enough for path
/// lifting.
pub fn loop_holonomy(samples: &[OrientedRoundHopfLink]) -> Result<UnitQuaternion> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "loop needs at least two samples".into(),
        ));
    }
    let mut frames = Vec::with_capacity(samples.len());
    for link in samples {
        let normal = retract_to_normal_form(link)?;
        frames.push(*frame_of(&normal)?.rotation());
    }
    let first = Frame::new(frames[0])?;
    let last = frames.last().unwrap();
    let closes = DeckElement::ALL
        .iter()
        .any(|&g| frame_deck_image(&first, g).distance(last) <= 1e-6);
    if !closes {
        return Err(Error::NotClosed);
    }

    let (q0, _) = lift_rotation(&frames[0])?;
    let lifted = lift_path(&frames, &q0)?;
    let h = *lifted.last().unwrap() * lifted[0].inverse();
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PI_2: f64 = std::f64::consts::FRAC_PI_2;

    fn assert_links_close(a: &OrientedRoundHopfLink, b: &OrientedRoundHopfLink, tol: f64) {
        assert!((a.first().center() - b.first().center()).norm() <= tol);
        assert!((a.second().center() - b.second().center()).norm() <= tol);
        assert!((a.first().normal() - b.first().normal()).norm() <= tol);
        assert!((a.second().normal() - b.second().normal()).norm() <= tol);
        assert!((a.first().radius() - b.first().radius()).abs() <= tol);
        assert!((a.second().radius() - b.second().radius()).abs() <= tol);
    }

    #[test]
    fn deck_action_composition_table() {
        use DeckElement::*;
        assert_eq!(Alpha.compose(S), AlphaS);
        assert_eq!(S.compose(S), Id);
        assert_eq!(AlphaS.compose(Alpha), S);
        let link = fixtures::basepoint_link();
        for g in DeckElement::ALL {
            for h in DeckElement::ALL {
                let lhs = g_act(h, &g_act(g, &link));
                let rhs = g_act(g.compose(h), &link);
                assert_links_close(&lhs, &rhs, 0.0);
            }
        }
    }

    #[test]
    fn alpha_preserves_linking_number() {
        let link = fixtures::basepoint_link();
        let acted = g_act(DeckElement::Alpha, &link);
        assert_eq!(acted.linking_number().unwrap(), 1);
        assert_eq!(g_act(DeckElement::S, &link).linking_number().unwrap(), 1);
    }

    #[test]
    fn basepoint_is_fixed_by_every_stage() {
        let link = fixtures::basepoint_link();
        for stage in [
            center_midpoint,
            orthogonalize,
            equalize_radii,
            normalize_radius,
            center_arc_endpoints,
        ] {
            let out = stage(&link).unwrap();
            assert_links_close(&out, &link, 1e-12);
        }
        let y = retract_to_normal_form(&link).unwrap();
        assert_links_close(&y, &link, 1e-12);
        check_normal_form(&y, 1e-12).unwrap();
    }

    #[test]
    fn center_midpoint_fixes_translations() {
        let link = fixtures::basepoint_link().translated(&Vector3::new(3.0, 4.0, 5.0));
        let out = center_midpoint(&link).unwrap();
        assert_links_close(&out, &fixtures::basepoint_link(), 1e-12);
    }

    #[test]
    fn orthogonalize_fixes_the_arc_and_angle() {
        let link = fixtures::basepoint_link();
        let arc = link.arc_of_intersection().unwrap();
        let rot =
            Rotation3::from_axis_angle(arc.direction(), PI_2 - std::f64::consts::PI / 3.0).unwrap();
        // tilt the second disc to dihedral angle pi/3
        let tilted = OrientedRoundHopfLink::with_circles(
            *link.first(),
            link.second().rotated_about(&rot, &arc.midpoint),
        );
        assert!((tilted.dihedral_angle().unwrap() - std::f64::consts::PI / 3.0).abs() < 1e-12);
        let out = orthogonalize(&tilted).unwrap();
        assert!((out.dihedral_angle().unwrap() - PI_2).abs() < 1e-10);
        let new_arc = out.arc_of_intersection().unwrap();
        assert!(new_arc.distance_to(&arc) < 1e-10);
        // radii and midpoint untouched
        assert!((out.first().radius() - 1.0).abs() < 1e-12);
        assert!((new_arc.midpoint - arc.midpoint).norm() < 1e-12);
    }

    #[test]
    fn equalize_radii_grows_the_smaller_circle() {
        // shrink the second circle to radius 1/2 about its arc endpoint
        // (1,0,0); the fixture link then has arc [1/2, 1] on the x-axis
        let link = fixtures::basepoint_link();
        let small = link
            .second()
            .scaled_about(&Vector3::new(1.0, 0.0, 0.0), 0.5)
            .unwrap();
        let shrunk = OrientedRoundHopfLink::new(*link.first(), small).unwrap();
        let arc_before = shrunk.arc_of_intersection().unwrap();
        assert!((arc_before.e1 - Vector3::new(0.5, 0.0, 0.0)).norm() < 1e-12);
        assert!((arc_before.e2 - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        let out = equalize_radii(&shrunk).unwrap();
        assert!((out.first().radius() - 1.0).abs() < 1e-12);
        assert!((out.second().radius() - 1.0).abs() < 1e-12);
        let arc_after = out.arc_of_intersection().unwrap();
        assert!(arc_after.distance_to(&arc_before) < 1e-12);
    }

    #[test]
    fn normalize_radius_rescales_about_the_midpoint() {
        let link = fixtures::basepoint_link();
        let arc = link.arc_of_intersection().unwrap();
        let big = OrientedRoundHopfLink::with_circles(
            link.first().scaled_about(&arc.midpoint, 3.0).unwrap(),
            link.second().scaled_about(&arc.midpoint, 3.0).unwrap(),
        );
        let out = normalize_radius(&big).unwrap();
        assert!((out.first().radius() - 1.0).abs() < 1e-12);
        let arc_out = out.arc_of_intersection().unwrap();
        assert!((arc_out.midpoint - arc.midpoint).norm() < 1e-12);
        // the arc direction is preserved, the segment rescaled
        assert!((arc_out.direction() - arc.direction()).norm() < 1e-12);
        assert_links_close(&out, &link, 1e-12);
    }

    #[test]
    fn center_arc_endpoints_coplanar_closed_form() {
        // centers on the arc line, distance a apart, radius 1
        for a in [0.3, 0.9, 1.0, 1.7] {
            let first = RoundCircle::new(Vector3::zeros(), 1.0, Vector3::z()).unwrap();
            let second = RoundCircle::new(Vector3::new(a, 0.0, 0.0), 1.0, Vector3::y()).unwrap();
            let link = OrientedRoundHopfLink::new(first, second).unwrap();
            let arc = link.arc_of_intersection().unwrap();
            // gamma1 = (a - 1) * direction, per the closed form
            let dir = arc.direction();
            let y1 = link.second().center() - dir;
            let gamma1 = y1 - link.first().center();
            assert!((gamma1 - dir * (a - 1.0)).norm() < 1e-12);

            let out = center_arc_endpoints(&link).unwrap();
            let arc_out = out.arc_of_intersection().unwrap();
            assert!((arc_out.e1 - out.first().center()).norm() < 1e-10);
            assert!((arc_out.e2 - out.second().center()).norm() < 1e-10);
            assert!(((out.second().center() - out.first().center()).norm() - 1.0).abs() < 1e-10);
            // midpoint preserved by the recentering step
            assert!((arc_out.midpoint - arc.midpoint).norm() < 1e-10);
        }
    }

    #[test]
    fn gamma_vectors_are_opposite_on_random_normal_stage_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..200 {
            let link = crate::sample::random_link_pos(&mut rng);
            let x3 = normalize_radius(
                &equalize_radii(&orthogonalize(&center_midpoint(&link).unwrap()).unwrap()).unwrap(),
            )
            .unwrap();
            let arc = x3.arc_of_intersection().unwrap();
            let dir = arc.direction();
            let gamma1 = (x3.second().center() - dir) - x3.first().center();
            let gamma2 = (x3.first().center() + dir) - x3.second().center();
            assert!((gamma1 + gamma2).norm() < 1e-12);
        }
    }

    #[test]
    fn retraction_is_idempotent_and_lands_in_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..500 {
            let link = crate::sample::random_link_pos(&mut rng);
            let y = retract_to_normal_form(&link).unwrap();
            check_normal_form(&y, 1e-8).unwrap();
            let y2 = retract_to_normal_form(&y).unwrap();
            assert_links_close(&y2, &y, 1e-9);
        }
    }

    #[test]
    fn basepoint_frame_columns() {
        let link = fixtures::basepoint_link();
        let y = retract_to_normal_form(&link).unwrap();
        let f = frame_of(&y).unwrap();
        assert!((f.n1() - Vector3::z()).norm() < 1e-12);
        assert!((f.v() - Vector3::x()).norm() < 1e-12);
        assert!((f.n2() - Vector3::y()).norm() < 1e-12);
    }

    #[test]
    fn alpha_acted_basepoint_frame_columns() {
        let link = g_act(DeckElement::Alpha, &fixtures::basepoint_link());
        let y = retract_to_normal_form(&link).unwrap();
        let f = frame_of(&y).unwrap();
        assert!((f.n1() + Vector3::z()).norm() < 1e-12);
        assert!((f.v() - Vector3::x()).norm() < 1e-12);
        assert!((f.n2() + Vector3::y()).norm() < 1e-12);
    }

    #[test]
    fn frame_round_trip_through_config() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let r = crate::sample::random_rotation(&mut rng);
            let link = config_of_frame(&r).unwrap();
            check_normal_form(&link, 1e-9).unwrap();
            let f = frame_of(&link).unwrap();
            assert!(f.rotation().distance(&r) < 1e-9);
        }
    }

    #[test]
    fn rigid_rotation_of_basepoint_recovers_rotation_in_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let r = crate::sample::random_rotation(&mut rng);
            let moved = fixtures::basepoint_link()
                .rotated_about(&r, &Vector3::zeros())
                .translated(&crate::sample::random_vector(&mut rng, 2.0));
            let y = retract_to_normal_form(&moved).unwrap();
            let f = frame_of(&y).unwrap();
            let base = frame_of(&fixtures::basepoint_link()).unwrap();
            let expected = r * *base.rotation();
            assert!(f.rotation().distance(&expected) < 1e-9);
        }
    }

    #[test]
    fn basepoint_prism_point_value() {
        let p = canonical_prism_point(&fixtures::basepoint_link()).unwrap();
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        let expected = UnitQuaternion::new(Quaternion::new(sq, 0.0, 0.0, sq)).unwrap();
        assert!(
            p.quaternion().distance(&expected) < 1e-9,
            "prism point {:?}",
            p.components()
        );
    }

    #[test]
    fn prism_point_is_bitwise_deck_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..300 {
            let link = crate::sample::random_link_pos(&mut rng);
            let base = canonical_prism_point(&link).unwrap();
            for g in DeckElement::ALL {
                let acted = canonical_prism_point(&g_act(g, &link)).unwrap();
                assert_eq!(
                    base.components().map(f64::to_bits),
                    acted.components().map(f64::to_bits),
                    "prism point differs under {:?}",
                    g
                );
            }
        }
    }

    #[test]
    fn orthogonalize_commutes_with_the_deck_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let link = crate::sample::random_link_pos(&mut rng);
            let x0 = center_midpoint(&link).unwrap();
            for g in DeckElement::ALL {
                let lhs = orthogonalize(&g_act(g, &x0)).unwrap();
                let rhs = g_act(g, &orthogonalize(&x0).unwrap());
                assert_links_close(&lhs, &rhs, 0.0);
            }
        }
    }

    #[test]
    fn negatively_linked_input_gets_the_same_prism_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for _ in 0..50 {
            let link = crate::sample::random_link_pos(&mut rng);
            let p = canonical_prism_point(&link).unwrap();
            for flipped in [
                OrientedRoundHopfLink::new(link.first().reversed(), *link.second()).unwrap(),
                OrientedRoundHopfLink::new(*link.first(), link.second().reversed()).unwrap(),
            ] {
                assert_eq!(flipped.linking_number().unwrap(), -1);
                let q = canonical_prism_point(&flipped).unwrap();
                assert_eq!(
                    p.components().map(f64::to_bits),
                    q.components().map(f64::to_bits)
                );
            }
        }
    }

    #[test]
    fn prism_point_translation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let link = crate::sample::random_link_pos(&mut rng);
        let base = canonical_prism_point(&link).unwrap();
        let moved = canonical_prism_point(&link.translated(&Vector3::new(-2.0, 7.0, 0.3))).unwrap();
        assert!(base.distance(&moved) < 1e-9);
    }

    #[test]
    fn prism_point_idempotent_under_orbit_canonicalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let group = deck_lift_group();
        for _ in 0..100 {
            let link = crate::sample::random_link_pos(&mut rng);
            let p = canonical_prism_point(&link).unwrap();
            let (_, canon) = crate::quat::orbit_and_canonical(&p.quaternion(), &group);
            assert!(canon.distance(&p.quaternion()) < 1e-9);
        }
    }

    #[test]
    fn deck_lift_group_is_q8_conjugate() {
        let g = deck_lift_group();
        assert_eq!(g.len(), 8);
        for e in g.elements() {
            if e.same_rotation(&UnitQuaternion::one(), 1e-12) {
                continue;
            }
            let sq = *e * *e;
            assert!(sq.distance(&-UnitQuaternion::one()) < 1e-12);
        }
    }

    use crate::fixtures::deck_loop;

    #[test]
    fn deck_loops_close_onto_their_deck_images() {
        for g in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS] {
            let samples = deck_loop(g, 64);
            let last = samples.last().unwrap();
            let expected = g_act(g, &fixtures::basepoint_link());
            assert_links_close(last, &expected, 1e-9);
        }
    }

    #[test]
    fn constant_loop_has_trivial_holonomy() {
        let samples = deck_loop(DeckElement::Id, 16);
        let h = loop_holonomy(&samples).unwrap();
        assert!(h.same_rotation(&UnitQuaternion::one(), 1e-9));
        assert!(h.distance(&UnitQuaternion::one()) < 1e-9);
    }

    #[test]
    fn alpha_loop_holonomy_squares_to_minus_one() {
        let samples = deck_loop(DeckElement::Alpha, 256);
        let h = loop_holonomy(&samples).unwrap();
        let minus_one = -UnitQuaternion::one();
        assert!((h * h).distance(&minus_one) < 1e-9);
        // closed form: the lift of the x-axis rotation path ends at ±i
        assert!(h.same_rotation(&UnitQuaternion::i(), 1e-9));
    }

    #[test]
    fn s_loop_holonomy_anticommutes_with_alpha() {
        let ha = loop_holonomy(&deck_loop(DeckElement::Alpha, 256)).unwrap();
        let hs = loop_holonomy(&deck_loop(DeckElement::S, 256)).unwrap();
        let minus_one = -UnitQuaternion::one();
        assert!((hs * hs).distance(&minus_one) < 1e-9);
        let lhs = ha * hs;
        let rhs = hs * ha;
        assert!(lhs.distance(&-rhs) < 1e-9, "holonomies do not anticommute");
    }

    #[test]
    fn open_path_is_rejected() {
        let mut samples = deck_loop(DeckElement::Alpha, 64);
        samples.truncate(40);
        assert!(matches!(loop_holonomy(&samples), Err(Error::NotClosed)));
    }
}
