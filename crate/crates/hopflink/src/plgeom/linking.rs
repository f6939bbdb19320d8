//! Polygonal curves and two PL linking-number computations.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Minimal allowed separation between two polylines fed to the Gauss
/// sum.
pub const MIN_SEPARATION: f64 = 1e-6;
/// Tolerance for the self-intersection check of a polyline.
pub const EMBED_TOL: f64 = 1e-9;

/// A polygonal curve in ℝ³.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline3 {
    vertices: Vec<Vector3<f64>>,
    closed: bool,
}

impl Polyline3 {
    /// A closed polygon: at least three vertices, no repeated
    /// consecutive vertices, embedded to within [`EMBED_TOL`].
    pub fn new_closed(vertices: Vec<Vector3<f64>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolyline(format!(
                "closed polyline needs >= 3 vertices, got {}",
                vertices.len()
            )));
        }
        let p = Self {
            vertices,
            closed: true,
        };
        p.check_embedded()?;
        Ok(p)
    }

    pub fn new_open(vertices: Vec<Vector3<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(
                "open polyline needs >= 2 vertices".into(),
            ));
        }
        let p = Self {
            vertices,
            closed: false,
        };
        p.check_embedded()?;
        Ok(p)
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Segments as index pairs into the vertex list.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m).map(|i| (i, (i + 1) % n)).collect()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self {
            vertices,
            closed: self.closed,
        }
    }

    fn check_embedded(&self) -> Result<()> {
        let segs = self.segments();
        for (i, &(a0, a1)) in segs.iter().enumerate() {
            if (self.vertices[a1] - self.vertices[a0]).norm() <= EMBED_TOL {
                return Err(Error::InvalidPolyline(format!(
                    "repeated consecutive vertex at segment {i}"
                )));
            }
            for &(b0, b1) in segs.iter().skip(i + 1) {
                // skip segments sharing a vertex
                if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
                    continue;
                }
                let d = segment_distance(
                    &self.vertices[a0],
                    &self.vertices[a1],
                    &self.vertices[b0],
                    &self.vertices[b1],
                );
                if d <= EMBED_TOL {
                    return Err(Error::InvalidPolyline(
                        "polyline self-intersects within tolerance".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Distance between the segments `[p0, p1]` and `[q0, q1]`.
pub(crate) fn segment_distance(
    p0: &Vector3<f64>,
    p1: &Vector3<f64>,
    q0: &Vector3<f64>,
    q1: &Vector3<f64>,
) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);

    let (s, t);
    if a <= 1e-30 && e <= 1e-30 {
        return r.norm();
    }
    if a <= 1e-30 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= 1e-30 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let s0 = if denom.abs() > 1e-30 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            } else {
                s = s0;
                t = t0;
            }
        }
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// Exact signed solid angle contribution of a pair of segments to the
/// Gauss linking integral, divided by 4π.
fn segment_pair_contribution(
    p1: &Vector3<f64>,
    p2: &Vector3<f64>,
    p3: &Vector3<f64>,
    p4: &Vector3<f64>,
) -> f64 {
    let r12 = p2 - p1;
    let r34 = p4 - p3;
    let r13 = p3 - p1;
    let r14 = p4 - p1;
    let r23 = p3 - p2;
    let r24 = p4 - p2;

    let unit_or_zero = |v: Vector3<f64>| {
        let n = v.norm();
        if n < 1e-14 {
            None
        } else {
            Some(v / n)
        }
    };
    let n1 = unit_or_zero(r13.cross(&r14));
    let n2 = unit_or_zero(r14.cross(&r24));
    let n3 = unit_or_zero(r24.cross(&r23));
    let n4 = unit_or_zero(r23.cross(&r13));
    let (n1, n2, n3, n4) = match (n1, n2, n3, n4) {
        (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
        // degenerate quadrilateral: the solid angle vanishes
        _ => return 0.0,
    };

    let omega = (n1.dot(&n2)).clamp(-1.0, 1.0).asin()
        + (n2.dot(&n3)).clamp(-1.0, 1.0).asin()
        + (n3.dot(&n4)).clamp(-1.0, 1.0).asin()
        + (n4.dot(&n1)).clamp(-1.0, 1.0).asin();

    let orient = r34.cross(&r12).dot(&r13);
    let sign = if orient > 0.0 {
        1.0
    } else if orient < 0.0 {
        -1.0
    } else {
        0.0
    };
    omega * sign / (4.0 * std::f64::consts::PI)
}

/// The raw Gauss double sum over segment pairs (a real number close to
/// an integer for disjoint closed curves).
pub fn gauss_linking_sum(a: &Polyline3, b: &Polyline3) -> Result<f64> {
    if !a.is_closed() || !b.is_closed() {
        return Err(Error::InvalidPolyline("linking needs closed curves".into()));
    }
    let va = a.vertices();
    let vb = b.vertices();
    let mut total = 0.0;
    let mut min_dist = f64::INFINITY;
    for (i0, i1) in a.segments() {
        for (j0, j1) in b.segments() {
            let d = segment_distance(&va[i0], &va[i1], &vb[j0], &vb[j1]);
            if d < min_dist {
                min_dist = d;
            }
            total += segment_pair_contribution(&va[i0], &va[i1], &vb[j0], &vb[j1]);
        }
    }
    if min_dist < MIN_SEPARATION {
        return Err(Error::TooClose { dist: min_dist });
    }
    Ok(total)
}

/// Gauss linking number of two closed polylines, rounded to the nearest
/// integer; errors if the rounding residual reaches 0.1 or the curves
/// come within [`MIN_SEPARATION`] of each other.
pub fn gauss_linking_pl(a: &Polyline3, b: &Polyline3) -> Result<i32> {
    let total = gauss_linking_sum(a, b)?;
    let rounded = total.round();
    if (total - rounded).abs() >= 0.1 {
        return Err(Error::Degenerate(format!(
            "Gauss sum {total} too far from an integer"
        )));
    }
    Ok(rounded as i32)
}

/// Linking number as half the signed count of inter-component crossings
/// in a generic planar projection.
///
/// A deterministic family of projection directions is tried until one is
/// generic for the input (no near-parallel segments at crossings, no
/// crossings near segment endpoints, no depth ties).
pub fn crossing_linking_pl(a: &Polyline3, b: &Polyline3) -> Result<i32> {
    if !a.is_closed() || !b.is_closed() {
        return Err(Error::InvalidPolyline("linking needs closed curves".into()));
    }
    let candidates = projection_directions();
    'dirs: for dir in &candidates {
        let (u, v) = plane_basis(dir);
        let project = |p: &Vector3<f64>| -> (f64, f64, f64) { (p.dot(&u), p.dot(&v), p.dot(dir)) };

        let mut signed = 0i32;
        for (i0, i1) in a.segments() {
            let (ax0, ay0, az0) = project(&a.vertices()[i0]);
            let (ax1, ay1, az1) = project(&a.vertices()[i1]);
            for (j0, j1) in b.segments() {
                let (bx0, by0, bz0) = project(&b.vertices()[j0]);
                let (bx1, by1, bz1) = project(&b.vertices()[j1]);

                let dax = ax1 - ax0;
                let day = ay1 - ay0;
                let dbx = bx1 - bx0;
                let dby = by1 - by0;
                let denom = dax * dby - day * dbx;
                let rx = bx0 - ax0;
                let ry = by0 - ay0;
                if denom.abs() < 1e-12 {
                    // parallel in projection: only a problem if they
                    // actually overlap; detect via bounding proximity
                    let cross = rx * dby - ry * dbx;
                    if cross.abs() < 1e-9 {
                        continue 'dirs;
                    }
                    continue;
                }
                let s = (rx * dby - ry * dbx) / denom;
                let t = (rx * day - ry * dax) / denom;
                let eps = 1e-9;
                if s <= -eps || s >= 1.0 + eps || t <= -eps || t >= 1.0 + eps {
                    continue;
                }
                if s < eps || s > 1.0 - eps || t < eps || t > 1.0 - eps {
                    // crossing at a segment endpoint: not generic
                    continue 'dirs;
                }
                let za = az0 + (az1 - az0) * s;
                let zb = bz0 + (bz1 - bz0) * t;
                if (za - zb).abs() < 1e-9 {
                    continue 'dirs;
                }
                // sign of det(tangent_over, tangent_under) in the plane
                let det = dax * dby - day * dbx;
                let eps_sign = if det > 0.0 { 1 } else { -1 };
                signed += if za > zb { eps_sign } else { -eps_sign };
            }
        }
        if signed.rem_euclid(2) != 0 {
            // parity failure signals a missed crossing; try another view
            continue 'dirs;
        }
        return Ok(signed / 2);
    }
    Err(Error::Degenerate(
        "no generic projection direction found".into(),
    ))
}

fn projection_directions() -> Vec<Vector3<f64>> {
    // a fixed irrational-ish direction, then golden-angle rotations
    let mut dirs = Vec::with_capacity(32);
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    for k in 0..32 {
        let phi = 0.71 + golden * (k as f64);
        let cz = 0.55 + 0.4 * ((k as f64) * 0.37).sin();
        let sz = (1.0 - cz * cz).sqrt();
        dirs.push(Vector3::new(sz * phi.cos(), sz * phi.sin(), cz).normalize());
    }
    dirs
}

fn plane_basis(dir: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let seed = if dir.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let u = dir.cross(&seed).normalize();
    let v = dir.cross(&u);
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn circle_polyline(c: &crate::roundlink::RoundCircle, n: usize) -> Polyline3 {
        Polyline3::new_closed(c.sample_points(n)).unwrap()
    }

    #[test]
    fn gauss_linking_of_polygonal_basepoint_is_one() {
        let link = fixtures::basepoint_link();
        let a = circle_polyline(link.first(), 64);
        let b = circle_polyline(link.second(), 64);
        assert_eq!(gauss_linking_pl(&a, &b).unwrap(), 1);
        assert_eq!(gauss_linking_pl(&b, &a).unwrap(), 1);
    }

    #[test]
    fn gauss_linking_of_split_pair_is_zero() {
        let a = circle_polyline(
            &crate::roundlink::RoundCircle::new(Vector3::zeros(), 1.0, Vector3::z()).unwrap(),
            48,
        );
        let b = circle_polyline(
            &crate::roundlink::RoundCircle::new(Vector3::new(10.0, 0.0, 0.0), 1.0, Vector3::z())
                .unwrap(),
            48,
        );
        assert_eq!(gauss_linking_pl(&a, &b).unwrap(), 0);
    }

    #[test]
    fn gauss_linking_flips_under_reversal() {
        let link = fixtures::basepoint_link();
        let a = circle_polyline(link.first(), 64);
        let b = circle_polyline(link.second(), 64).reversed();
        assert_eq!(gauss_linking_pl(&a, &b).unwrap(), -1);
    }

    #[test]
    fn gauss_sum_residual_is_small() {
        let link = fixtures::basepoint_link();
        let a = circle_polyline(link.first(), 64);
        let b = circle_polyline(link.second(), 64);
        let total = gauss_linking_sum(&a, &b).unwrap();
        assert!((total - 1.0).abs() < 1e-3, "total = {total}");
    }

    #[test]
    fn too_close_curves_error() {
        let a = circle_polyline(
            &crate::roundlink::RoundCircle::new(Vector3::zeros(), 1.0, Vector3::z()).unwrap(),
            32,
        );
        let b = Polyline3::new_closed(
            a.vertices()
                .iter()
                .map(|p| p + Vector3::new(0.0, 0.0, 1e-8))
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            gauss_linking_pl(&a, &b),
            Err(Error::TooClose { .. })
        ));
    }

    #[test]
    fn crossing_count_agrees_on_basepoint() {
        let link = fixtures::basepoint_link();
        let a = circle_polyline(link.first(), 64);
        let b = circle_polyline(link.second(), 64);
        assert_eq!(crossing_linking_pl(&a, &b).unwrap(), 1);
        let br = b.reversed();
        assert_eq!(crossing_linking_pl(&a, &br).unwrap(), -1);
    }

    #[test]
    fn three_routes_agree_on_random_links() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let link = crate::sample::random_link_any(&mut rng);
            let exact = link.linking_number().unwrap();
            let a = circle_polyline(link.first(), 64);
            let b = circle_polyline(link.second(), 64);
            assert_eq!(gauss_linking_pl(&a, &b).unwrap(), exact);
            assert_eq!(crossing_linking_pl(&a, &b).unwrap(), exact);
        }
    }

    #[test]
    fn rejects_self_intersecting_polyline() {
        let verts = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
        ];
        assert!(Polyline3::new_closed(verts).is_err());
    }
}
