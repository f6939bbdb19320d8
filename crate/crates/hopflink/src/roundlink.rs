//! Round circles and round Hopf links in ℝ³.
//!
//! A round circle is an oriented Euclidean circle in an affine plane,
//! given by its center, radius and unit normal. Two round circles whose
//! flat spanning discs are linked form a round Hopf link; the discs then
//! meet in a straight segment, the *arc of intersection*, whose geometry
//! drives the normal-form retraction in [`crate::retraction`].
//!
//! The linking sign convention is fixed so that a crossing of the second
//! circle through the first disc counts positively when the tangent
//! points along the first disc's normal. With this convention the
//! standard configuration (unit circle in the xy-plane with normal `e3`,
//! unit circle in the xz-plane through the origin with normal `e2`)
//! has linking number `+1`.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::quat::Rotation3;

/// Tolerance below which configurations are reported as degenerate.
pub const DEGEN_TOL: f64 = 1e-9;
/// Tolerance for the unit-normal invariant.
pub const NORMAL_TOL: f64 = 1e-12;

/// An oriented round circle: center, radius and unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundCircle {
    center: Vector3<f64>,
    radius: f64,
    normal: Vector3<f64>,
}

impl RoundCircle {
    pub fn new(center: Vector3<f64>, radius: f64, normal: Vector3<f64>) -> Result<Self> {
        if radius <= 0.0 || radius.is_nan() {
            return Err(Error::Degenerate(format!("radius {radius} must be > 0")));
        }
        if (normal.norm() - 1.0).abs() > NORMAL_TOL {
            return Err(Error::Degenerate(format!(
                "normal not unit length (|n| = {})",
                normal.norm()
            )));
        }
        Ok(Self {
            center,
            radius,
            normal,
        })
    }

    /// Normalizes the normal vector before constructing.
    pub fn from_unnormalized(
        center: Vector3<f64>,
        radius: f64,
        normal: Vector3<f64>,
    ) -> Result<Self> {
        let n = normal.norm();
        if n < 1e-12 {
            return Err(Error::Degenerate("zero normal vector".into()));
        }
        Self::new(center, radius, normal / n)
    }

    pub fn center(&self) -> Vector3<f64> {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    /// Plane offset `c` in the plane equation `n·x = c`.
    pub fn plane_offset(&self) -> f64 {
        self.normal.dot(&self.center)
    }

    pub fn reversed(&self) -> Self {
        Self {
            center: self.center,
            radius: self.radius,
            normal: -self.normal,
        }
    }

    pub fn translated(&self, t: &Vector3<f64>) -> Self {
        Self {
            center: self.center + t,
            radius: self.radius,
            normal: self.normal,
        }
    }

    /// Rotates the circle rigidly about a point.
    pub fn rotated_about(&self, rot: &Rotation3, about: &Vector3<f64>) -> Self {
        Self {
            center: about + rot.apply(&(self.center - about)),
            radius: self.radius,
            normal: rot.apply(&self.normal),
        }
    }

    /// Scales the circle about a fixed point of its own plane.
    pub fn scaled_about(&self, about: &Vector3<f64>, factor: f64) -> Result<Self> {
        if factor <= 0.0 || factor.is_nan() {
            return Err(Error::Degenerate(format!(
                "scale factor {factor} must be > 0"
            )));
        }
        Self::new(
            about + (self.center - about) * factor,
            self.radius * factor,
            self.normal,
        )
    }

    /// Deterministic in-plane orthonormal frame `(u, v)` with `u × v = n`.
    pub fn in_plane_frame(&self) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.normal;
        let seed = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Vector3::x()
        } else if n.y.abs() <= n.z.abs() {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let u = n.cross(&seed).normalize();
        let v = n.cross(&u);
        (u, v)
    }

    /// Point on the circle at parameter angle `theta`, oriented
    /// counterclockwise as seen from the tip of the normal.
    pub fn point_at(&self, theta: f64) -> Vector3<f64> {
        let (u, v) = self.in_plane_frame();
        self.center + (u * theta.cos() + v * theta.sin()) * self.radius
    }

    pub fn tangent_at(&self, theta: f64) -> Vector3<f64> {
        let (u, v) = self.in_plane_frame();
        (v * theta.cos() - u * theta.sin()) * self.radius
    }

    /// `n` equally spaced points along the circle, following its orientation.
    pub fn sample_points(&self, n: usize) -> Vec<Vector3<f64>> {
        (0..n)
            .map(|i| self.point_at(2.0 * std::f64::consts::PI * (i as f64) / (n as f64)))
            .collect()
    }

    /// Signed distance data of this circle against another circle's
    /// plane, as `(amplitude, offset)`: the normal component of points of
    /// `self` relative to the plane is `amplitude·cos(θ - φ) + offset`.
    fn plane_crossing_data(&self, plane_of: &RoundCircle) -> (f64, f64, f64) {
        let (u, v) = self.in_plane_frame();
        let na = plane_of.normal;
        let a = self.radius * na.dot(&u);
        let b = self.radius * na.dot(&v);
        let c = na.dot(&self.center) - plane_of.plane_offset();
        ((a * a + b * b).sqrt(), c, a.atan2(b))
    }

    fn distance_to(&self, p: &Vector3<f64>) -> f64 {
        (p - self.center).norm()
    }
}

/// Unoriented normal-form parameters of a round unknot:
/// center, radius, and the normal *line* as a sign-canonicalized
/// unit vector (first coordinate larger than `DEGEN_TOL` in absolute
/// value is made positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundUnknotParams {
    pub center: Vector3<f64>,
    pub radius: f64,
    pub normal_line: Vector3<f64>,
}

/// Canonicalizes the sign of a vector: flips it if its first coordinate
/// exceeding `tol` in absolute value is negative.
pub fn canonicalize_sign(v: Vector3<f64>, tol: f64) -> Vector3<f64> {
    for c in [v.x, v.y, v.z] {
        if c.abs() > tol {
            return if c < 0.0 { -v } else { v };
        }
    }
    v
}

/// Forgets the orientation of a round circle, producing its point in the
/// parameter space ℝ³ × ℝ₊ × ℝP².
pub fn round_unknot_params(c: &RoundCircle) -> RoundUnknotParams {
    RoundUnknotParams {
        center: c.center(),
        radius: c.radius(),
        normal_line: canonicalize_sign(c.normal(), DEGEN_TOL),
    }
}

impl RoundUnknotParams {
    /// Rebuilds a round circle (orientation chosen canonically).
    pub fn reconstruct(&self) -> Result<RoundCircle> {
        RoundCircle::new(self.center, self.radius, self.normal_line)
    }
}

/// Signed count of transverse crossings of circle `b` through the flat
/// disc spanned by circle `a`; the crossing sign is the sign of
/// `tangent(b) · n_a`.
///
/// For disjoint round circles this is the linking number and lies in
/// `{-1, 0, +1}`.
pub fn linking_number_round(a: &RoundCircle, b: &RoundCircle) -> Result<i32> {
    let (amp, offset, phi) = b.plane_crossing_data(a);

    if amp <= DEGEN_TOL {
        // b is parallel to a's plane
        if offset.abs() <= DEGEN_TOL {
            // coplanar circles: unlinked unless they actually meet
            let d = (b.center() - a.center()).norm();
            let sum = a.radius() + b.radius();
            let diff = (a.radius() - b.radius()).abs();
            if d >= sum - DEGEN_TOL && d <= sum + DEGEN_TOL {
                return Err(Error::Degenerate("coplanar circles touch".into()));
            }
            if d > diff + DEGEN_TOL && d < sum - DEGEN_TOL {
                return Err(Error::Degenerate("coplanar circles intersect".into()));
            }
            if d >= diff - DEGEN_TOL && d <= diff + DEGEN_TOL {
                return Err(Error::Degenerate("coplanar circles touch".into()));
            }
            return Ok(0);
        }
        return Ok(0);
    }
    if (amp - offset.abs()).abs() <= DEGEN_TOL {
        return Err(Error::Degenerate(
            "second circle is tangent to the first circle's plane".into(),
        ));
    }
    if offset.abs() > amp {
        return Ok(0);
    }

    // normal component along b is amp*sin(theta + phi) + offset; roots:
    let base = (-offset / amp).asin();
    let roots = [base - phi, std::f64::consts::PI - base - phi];
    let mut total = 0;
    for theta in roots {
        let x = b.point_at(theta);
        let d = a.distance_to(&x);
        if (d - a.radius()).abs() <= DEGEN_TOL {
            return Err(Error::Degenerate(
                "crossing lies on the first circle's boundary".into(),
            ));
        }
        if d < a.radius() {
            let s = b.tangent_at(theta).dot(&a.normal());
            if s.abs() <= DEGEN_TOL {
                return Err(Error::Degenerate(
                    "crossing is not transverse to the first disc".into(),
                ));
            }
            total += if s > 0.0 { 1 } else { -1 };
        }
    }
    Ok(total)
}

/// An oriented, labelled round Hopf link; the labels are the field
/// order. Validated to have disjoint circles with `|lk| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRoundHopfLink {
    first: RoundCircle,
    second: RoundCircle,
}

/// Validates that the two circles form a Hopf configuration.
pub fn validate_hopf(a: RoundCircle, b: RoundCircle) -> Result<OrientedRoundHopfLink> {
    let lk = linking_number_round(&a, &b)?;
    if lk == 0 {
        return Err(Error::NotLinked);
    }
    let link = OrientedRoundHopfLink {
        first: a,
        second: b,
    };
    // the arc of intersection must exist; surfaces tangential chord cases
    link.arc_of_intersection()?;
    Ok(link)
}

impl OrientedRoundHopfLink {
    pub fn new(first: RoundCircle, second: RoundCircle) -> Result<Self> {
        validate_hopf(first, second)
    }

    pub fn first(&self) -> &RoundCircle {
        &self.first
    }

    pub fn second(&self) -> &RoundCircle {
        &self.second
    }

    pub fn circles(&self) -> (&RoundCircle, &RoundCircle) {
        (&self.first, &self.second)
    }

    /// Replaces both circles without revalidating. For internal moves
    /// that provably preserve validity (translations, rotations,
    /// the retraction stages).
    pub(crate) fn with_circles(first: RoundCircle, second: RoundCircle) -> Self {
        Self { first, second }
    }

    pub fn linking_number(&self) -> Result<i32> {
        linking_number_round(&self.first, &self.second)
    }

    pub fn translated(&self, t: &Vector3<f64>) -> Self {
        Self {
            first: self.first.translated(t),
            second: self.second.translated(t),
        }
    }

    pub fn rotated_about(&self, rot: &Rotation3, about: &Vector3<f64>) -> Self {
        Self {
            first: self.first.rotated_about(rot, about),
            second: self.second.rotated_about(rot, about),
        }
    }

    /// Dihedral angle θ ∈ (0, π) between the oriented disc planes,
    /// `cos θ = n₁ · n₂`.
    pub fn dihedral_angle(&self) -> Result<f64> {
        dihedral_angle(self)
    }

    pub fn arc_of_intersection(&self) -> Result<ArcOfIntersection> {
        arc_of_intersection(self)
    }
}

/// The straight segment in which the two flat spanning discs meet.
///
/// `e1` is the endpoint lying inside the first disc (it sits on the
/// second circle in a generic configuration), `e2` the endpoint lying
/// inside the second disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcOfIntersection {
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
    pub midpoint: Vector3<f64>,
}

impl ArcOfIntersection {
    pub fn length(&self) -> f64 {
        (self.e2 - self.e1).norm()
    }

    /// Unit direction from `e1` to `e2`.
    pub fn direction(&self) -> Vector3<f64> {
        (self.e2 - self.e1) / self.length()
    }

    pub fn distance_to(&self, other: &ArcOfIntersection) -> f64 {
        let a = (self.e1 - other.e1).norm().max((self.e2 - other.e2).norm());
        a.max((self.midpoint - other.midpoint).norm())
    }
}

/// Dihedral angle between the two disc planes.
pub fn dihedral_angle(link: &OrientedRoundHopfLink) -> Result<f64> {
    let dot = link.first.normal().dot(&link.second.normal());
    if 1.0 - dot.abs() <= 1e-12 {
        return Err(Error::ParallelPlanes);
    }
    Ok(dot.clamp(-1.0, 1.0).acos())
}

/// Intersection line of the two disc planes as `(point, direction)`.
///
/// The point is the combination `a·n₁ + b·n₂` closest to the origin in
/// the span of the normals; both outputs are exactly even under negating
/// both normals and swap to their exact negation/value under relabelling.
pub(crate) fn plane_intersection_line(
    first: &RoundCircle,
    second: &RoundCircle,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let n1 = first.normal();
    let n2 = second.normal();
    let d = n1.cross(&n2);
    let dn = d.norm();
    if dn <= DEGEN_TOL {
        return Err(Error::ParallelPlanes);
    }
    let t = n1.dot(&n2);
    let c1 = first.plane_offset();
    let c2 = second.plane_offset();
    let denom = 1.0 - t * t;
    let a = (c1 - c2 * t) / denom;
    let b = (c2 - c1 * t) / denom;
    Ok((n1 * a + n2 * b, d / dn))
}

/// Chord of `circle` along the line `(origin, dir)`, as a parameter
/// interval `[lo, hi]`, or `None` when the circle misses the line.
fn chord_interval(
    circle: &RoundCircle,
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
) -> Option<(f64, f64)> {
    let rel = circle.center() - origin;
    let t = rel.dot(dir);
    let off = rel - dir * t;
    let slack = circle.radius() * circle.radius() - off.norm_squared();
    if slack <= 0.0 {
        return None;
    }
    let h = slack.sqrt();
    Some((t - h, t + h))
}

/// Computes the arc of intersection of the two spanning discs.
pub fn arc_of_intersection(link: &OrientedRoundHopfLink) -> Result<ArcOfIntersection> {
    let (origin, dir) = plane_intersection_line(&link.first, &link.second)?;

    let (lo1, hi1) = chord_interval(&link.first, &origin, &dir).ok_or(Error::EmptyIntersection)?;
    let (lo2, hi2) = chord_interval(&link.second, &origin, &dir).ok_or(Error::EmptyIntersection)?;

    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if hi - lo <= DEGEN_TOL {
        if hi - lo > -DEGEN_TOL {
            return Err(Error::Degenerate(
                "disc chords share a single endpoint".into(),
            ));
        }
        return Err(Error::EmptyIntersection);
    }

    let p_lo = origin + dir * lo;
    let p_hi = origin + dir * hi;

    // e1 is the endpoint with more slack inside the first disc; in a
    // linked configuration the other endpoint sits on the first circle.
    let r1sq = link.first.radius() * link.first.radius();
    let slack_lo = r1sq - (p_lo - link.first.center()).norm_squared();
    let slack_hi = r1sq - (p_hi - link.first.center()).norm_squared();
    let (e1, e2) = if slack_lo >= slack_hi {
        (p_lo, p_hi)
    } else {
        (p_hi, p_lo)
    };

    Ok(ArcOfIntersection {
        e1,
        e2,
        midpoint: (e1 + e2) / 2.0,
    })
}
