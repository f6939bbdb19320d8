//! Great Hopf links in S³ as oriented 2-planes in ℝ⁴.
//!
//! ℝ⁴ is identified with the quaternions. An oriented orthonormal pair
//! `(x, y)` spans an oriented 2-plane; its great circle `cos(t)x +
//! sin(t)y` and the orthogonal complement circle form a Hopf link in S³.
//! The maps
//!
//! ```text
//! μ(x, y) = (x ȳ - y x̄) / 2,    ν(x, y) = (x̄ y - ȳ x) / 2
//! ```
//!
//! send orthonormal pairs to purely imaginary unit quaternions, i.e.
//! points of S². The pair `ξ = (μ, ν)` depends only on the oriented
//! plane, negates in both factors when either basis vector flips sign,
//! and separates planes; quotienting each factor by the antipodal map
//! therefore yields a complete coordinate for the underlying
//! unoriented configuration: the [`RP2Pair`].

use nalgebra::{Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::roundlink::canonicalize_sign;

/// Orthonormality tolerance for planes.
pub const PLANE_TOL: f64 = 1e-10;
/// Tolerance for the purely-imaginary and unit-norm checks of
/// [`S2Point`].
pub const S2_TOL: f64 = 1e-10;

pub fn quaternion_to_vector(q: &Quaternion) -> Vector4<f64> {
    Vector4::new(q.w, q.x, q.y, q.z)
}

pub fn vector_to_quaternion(v: &Vector4<f64>) -> Quaternion {
    Quaternion::new(v.x, v.y, v.z, v.w)
}

/// An oriented 2-plane in ℝ⁴, stored as an oriented orthonormal basis
/// pair interpreted as quaternions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane2in4 {
    x: Quaternion,
    y: Quaternion,
}

impl Plane2in4 {
    pub fn new(x: Quaternion, y: Quaternion) -> Result<Self> {
        for (q, name) in [(&x, "x"), (&y, "y")] {
            if (q.norm() - 1.0).abs() > PLANE_TOL {
                return Err(Error::NotOrthonormal {
                    reason: format!("|{name}| = {} != 1", q.norm()),
                });
            }
        }
        let ip = x.dot(&y);
        if ip.abs() > PLANE_TOL {
            return Err(Error::NotOrthonormal {
                reason: format!("<x, y> = {ip} != 0"),
            });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> Quaternion {
        self.x
    }

    pub fn y(&self) -> Quaternion {
        self.y
    }

    /// Rotates the basis inside the plane by `theta` (the oriented plane
    /// is unchanged).
    pub fn rotate_basis(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            x: self.x.scale(c) + self.y.scale(s),
            y: self.x.scale(-s) + self.y.scale(c),
        }
    }

    /// Simultaneous right multiplication of both basis vectors by
    /// `e^{iθ}`.
    pub fn right_multiply_exp_i(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let e = Quaternion::new(c, s, 0.0, 0.0);
        Self {
            x: self.x * e,
            y: self.y * e,
        }
    }

    pub fn reverse_y(&self) -> Self {
        Self {
            x: self.x,
            y: -self.y,
        }
    }

    pub fn reverse_x(&self) -> Self {
        Self {
            x: -self.x,
            y: self.y,
        }
    }

    /// Angular separation of two oriented planes, measured through the
    /// projectors (0 for equal oriented planes).
    pub fn distance_to(&self, other: &Plane2in4) -> f64 {
        let xi_a = xi(self).expect("valid plane");
        let xi_b = xi(other).expect("valid plane");
        let d1 = (xi_a.0.imag() - xi_b.0.imag()).norm();
        let d2 = (xi_a.1.imag() - xi_b.1.imag()).norm();
        d1.max(d2)
    }
}

/// A purely imaginary unit quaternion, i.e. a point of S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S2Point(Quaternion);

impl S2Point {
    pub fn new(q: Quaternion) -> Result<Self> {
        if q.w.abs() > S2_TOL {
            return Err(Error::NotOrthonormal {
                reason: format!("real part {} != 0", q.w),
            });
        }
        if (q.norm() - 1.0).abs() > S2_TOL {
            return Err(Error::NotOrthonormal {
                reason: format!("|q| = {} != 1", q.norm()),
            });
        }
        Ok(Self(q))
    }

    pub fn from_imag(v: Vector3<f64>) -> Result<Self> {
        Self::new(Quaternion::from_imag(v))
    }

    pub fn quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn imag(&self) -> Vector3<f64> {
        self.0.imag()
    }

    pub fn antipode(&self) -> Self {
        Self(-self.0)
    }

    pub fn distance(&self, other: &S2Point) -> f64 {
        (self.0 - other.0).norm()
    }
}

/// `μ(x, y) = (x ȳ - y x̄)/2`, a point of S² for orthonormal input.
pub fn mu(x: &Quaternion, y: &Quaternion) -> Result<S2Point> {
    check_orthonormal(x, y)?;
    let q = (*x * y.conjugate() - *y * x.conjugate()).scale(0.5);
    S2Point::new(q)
}

/// `ν(x, y) = (x̄ y - ȳ x)/2`, a point of S² for orthonormal input.
pub fn nu(x: &Quaternion, y: &Quaternion) -> Result<S2Point> {
    check_orthonormal(x, y)?;
    let q = (x.conjugate() * *y - y.conjugate() * *x).scale(0.5);
    S2Point::new(q)
}

fn check_orthonormal(x: &Quaternion, y: &Quaternion) -> Result<()> {
    Plane2in4::new(*x, *y).map(|_| ())
}

/// `ξ = (μ, ν)`: the S² × S² coordinate of an oriented plane,
/// independent of the orthonormal basis chosen within it.
pub fn xi(plane: &Plane2in4) -> Result<(S2Point, S2Point)> {
    Ok((mu(&plane.x, &plane.y)?, nu(&plane.x, &plane.y)?))
}

/// The orthogonal complement plane, oriented so that the combined basis
/// `(x, y, x⊥, y⊥)` is positively oriented in ℝ⁴.
pub fn orthogonal_complement(plane: &Plane2in4) -> Plane2in4 {
    let x = quaternion_to_vector(&plane.x);
    let y = quaternion_to_vector(&plane.y);

    // Gram-Schmidt the standard basis against the plane, keeping the
    // two most independent residuals
    let mut residuals: Vec<(f64, Vector4<f64>)> = Vec::with_capacity(4);
    for i in 0..4 {
        let mut e = Vector4::zeros();
        e[i] = 1.0;
        let r = e - x * x.dot(&e) - y * y.dot(&e);
        residuals.push((r.norm(), r));
    }
    residuals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let z = residuals[0].1.normalize();
    let mut best_w: Option<(f64, Vector4<f64>)> = None;
    for (_, r) in &residuals[1..] {
        let w = r - z * z.dot(r);
        let n = w.norm();
        if best_w.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best_w = Some((n, w));
        }
    }
    let mut w = best_w.expect("complement exists").1.normalize();

    let det = Matrix4::from_columns(&[x, y, z, w]).determinant();
    if det < 0.0 {
        w = -w;
    }
    Plane2in4::new(vector_to_quaternion(&z), vector_to_quaternion(&w))
        .expect("complement basis is orthonormal")
}

/// A pair of sign-canonicalized points of S², representing an element
/// of ℝP² × ℝP². The canonicalization makes the first coordinate of
/// each imaginary part exceeding `1e-9` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RP2Pair {
    pub first: S2Point,
    pub second: S2Point,
}

impl RP2Pair {
    pub fn distance(&self, other: &RP2Pair) -> f64 {
        self.first
            .distance(&other.first)
            .max(self.second.distance(&other.second))
    }
}

fn canonicalize_s2(p: &S2Point) -> S2Point {
    let v = canonicalize_sign(p.imag(), 1e-9);
    // normalize signed zeros so canonical values have unique bytes
    let fix = |x: f64| if x == 0.0 { 0.0 } else { x };
    S2Point::from_imag(Vector3::new(fix(v.x), fix(v.y), fix(v.z)))
        .expect("canonicalization keeps S2")
}

/// The canonical ℝP² × ℝP² coordinate of a great Hopf link: invariant
/// under basis rotation, either orientation reversal, and passing to
/// the orthogonal complement.
pub fn canonical_great_hopf(plane: &Plane2in4) -> Result<RP2Pair> {
    let (m, n) = xi(plane)?;
    Ok(RP2Pair {
        first: canonicalize_s2(&m),
        second: canonicalize_s2(&n),
    })
}

/// `n` equally spaced points `cos(t) x + sin(t) y` along the plane's
/// great circle.
pub fn great_circle_points(plane: &Plane2in4, n: usize) -> Result<Vec<Vector4<f64>>> {
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 points on a great circle, got {n}"
        )));
    }
    let x = quaternion_to_vector(&plane.x);
    let y = quaternion_to_vector(&plane.y);
    Ok((0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64) / (n as f64);
            x * t.cos() + y * t.sin()
        })
        .collect())
}

/// Stereographic projection of S³ minus a pole onto ℝ³ (the tangent
/// coordinates of the pole's orthogonal hyperplane).
#[derive(Debug, Clone)]
pub struct Stereographic {
    pole: Vector4<f64>,
    basis: [Vector4<f64>; 3],
}

impl Stereographic {
    pub fn new(pole: Vector4<f64>) -> Result<Self> {
        let n = pole.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "projection pole must be a unit vector (|p| = {n})"
            )));
        }
        // orthonormal basis of the pole's orthogonal complement
        let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(3);
        for i in 0..4 {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            let mut r = e - pole * pole.dot(&e);
            for b in &basis {
                r -= b * b.dot(&r);
            }
            if r.norm() > 1e-6 {
                basis.push(r.normalize());
            }
            if basis.len() == 3 {
                break;
            }
        }
        Ok(Self {
            pole,
            basis: [basis[0], basis[1], basis[2]],
        })
    }

    /// Default projection from the pole `(0, 0, 0, 1)`.
    pub fn standard() -> Self {
        Self::new(Vector4::new(0.0, 0.0, 0.0, 1.0)).expect("unit pole")
    }

    pub fn pole(&self) -> Vector4<f64> {
        self.pole
    }

    pub fn project(&self, p: &Vector4<f64>) -> Result<Vector3<f64>> {
        let dist = (p - self.pole).norm();
        if dist < 1e-6 {
            return Err(Error::PoleProximity { dist });
        }
        let denom = 1.0 - p.dot(&self.pole);
        let mapped = (p - self.pole * p.dot(&self.pole)) / denom;
        Ok(Vector3::new(
            mapped.dot(&self.basis[0]),
            mapped.dot(&self.basis[1]),
            mapped.dot(&self.basis[2]),
        ))
    }

    pub fn unproject(&self, v: &Vector3<f64>) -> Vector4<f64> {
        let y = self.basis[0] * v.x + self.basis[1] * v.y + self.basis[2] * v.z;
        let n2 = y.norm_squared();
        (self.pole * (n2 - 1.0) + y * 2.0) / (n2 + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn mu_nu_symbolic_examples() {
        // mu(1, i) = -i, nu(1, i) = i
        let m = mu(&Quaternion::one(), &Quaternion::i()).unwrap();
        assert!((m.quaternion() - q(0.0, -1.0, 0.0, 0.0)).norm() < 1e-15);
        let n = nu(&Quaternion::one(), &Quaternion::i()).unwrap();
        assert!((n.quaternion() - q(0.0, 1.0, 0.0, 0.0)).norm() < 1e-15);

        // mu(j, k) = -i, nu(j, k) = -i
        let m = mu(&Quaternion::j(), &Quaternion::k()).unwrap();
        assert!((m.quaternion() - q(0.0, -1.0, 0.0, 0.0)).norm() < 1e-15);
        let n = nu(&Quaternion::j(), &Quaternion::k()).unwrap();
        assert!((n.quaternion() - q(0.0, -1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mu_invariant_under_right_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..200 {
            let p = crate::sample::random_plane(&mut rng);
            let rotated = p.right_multiply_exp_i(std::f64::consts::FRAC_PI_4);
            let m0 = mu(&p.x(), &p.y()).unwrap();
            let m1 = mu(&rotated.x(), &rotated.y()).unwrap();
            assert!(m0.distance(&m1) < 1e-9);
        }
    }

    #[test]
    fn xi_of_standard_plane() {
        let (v, _) = fixtures::basepoint_great_planes();
        let (m, n) = xi(&v).unwrap();
        assert!((m.quaternion() - q(0.0, -1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((n.quaternion() - q(0.0, 1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn xi_antipodal_law_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let p = crate::sample::random_plane(&mut rng);
            let (m, n) = xi(&p).unwrap();
            let (mr, nr) = xi(&p.reverse_y()).unwrap();
            assert_eq!(mr.quaternion().components(), (-m.quaternion()).components());
            assert_eq!(nr.quaternion().components(), (-n.quaternion()).components());
            let (mx, nx) = xi(&p.reverse_x()).unwrap();
            assert_eq!(mx.quaternion().components(), (-m.quaternion()).components());
            assert_eq!(nx.quaternion().components(), (-n.quaternion()).components());
        }
    }

    #[test]
    fn xi_invariant_under_in_plane_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..200 {
            let p = crate::sample::random_plane(&mut rng);
            let (m, n) = xi(&p).unwrap();
            let r = p.rotate_basis(0.3);
            let (mr, nr) = xi(&r).unwrap();
            assert!(m.distance(&mr) < 1e-9);
            assert!(n.distance(&nr) < 1e-9);
        }
    }

    #[test]
    fn mu_nu_outputs_live_on_s2() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..1000 {
            let p = crate::sample::random_plane(&mut rng);
            let (m, n) = xi(&p).unwrap();
            assert!(m.quaternion().w.abs() < 1e-10);
            assert!((m.quaternion().norm() - 1.0).abs() < 1e-10);
            assert!(n.quaternion().w.abs() < 1e-10);
            assert!((n.quaternion().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn complement_of_standard_plane() {
        let (v, w) = fixtures::basepoint_great_planes();
        let c = orthogonal_complement(&v);
        // span(j, k): both basis vectors orthogonal to 1 and i
        for b in [c.x(), c.y()] {
            assert!(b.w.abs() < 1e-12 && b.x.abs() < 1e-12);
        }
        // and xi agrees with the basepoint complement plane up to sign
        let (m1, n1) = xi(&c).unwrap();
        let (m2, n2) = xi(&w).unwrap();
        assert!(m1.distance(&m2).min(m1.distance(&m2.antipode())) < 1e-12);
        assert!(n1.distance(&n2).min(n1.distance(&n2.antipode())) < 1e-12);
    }

    #[test]
    fn complement_is_an_involution_on_planes() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..200 {
            let p = crate::sample::random_plane(&mut rng);
            let c = orthogonal_complement(&p);
            // Gram matrix of the union is the identity
            let vecs = [
                quaternion_to_vector(&p.x()),
                quaternion_to_vector(&p.y()),
                quaternion_to_vector(&c.x()),
                quaternion_to_vector(&c.y()),
            ];
            for i in 0..4 {
                for j in 0..4 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((vecs[i].dot(&vecs[j]) - expected).abs() < 1e-9);
                }
            }
            let cc = orthogonal_complement(&c);
            // double complement spans the original plane
            let (m0, n0) = xi(&p).unwrap();
            let (m2, n2) = xi(&cc).unwrap();
            assert!(m0.distance(&m2).min(m0.distance(&m2.antipode())) < 1e-9);
            assert!(n0.distance(&n2).min(n0.distance(&n2.antipode())) < 1e-9);
        }
    }

    #[test]
    fn complement_sign_law_is_constant() {
        // xi(V_perp) = (mu, -nu) relative to xi(V), for every plane
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for _ in 0..500 {
            let p = crate::sample::random_plane(&mut rng);
            let (m, n) = xi(&p).unwrap();
            let (mc, nc) = xi(&orthogonal_complement(&p)).unwrap();
            assert!(m.distance(&mc) < 1e-9, "mu changed under complement");
            assert!(n.distance(&nc.antipode()) < 1e-9, "nu kept its sign");
        }
    }

    #[test]
    fn canonical_coordinate_of_standard_plane() {
        let (v, _) = fixtures::basepoint_great_planes();
        let c = canonical_great_hopf(&v).unwrap();
        assert!((c.first.quaternion() - q(0.0, 1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((c.second.quaternion() - q(0.0, 1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn canonical_coordinate_quotient_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..300 {
            let p = crate::sample::random_plane(&mut rng);
            let c = canonical_great_hopf(&p).unwrap();
            for variant in [
                p.reverse_x(),
                p.reverse_y(),
                p.rotate_basis(1.1),
                orthogonal_complement(&p),
            ] {
                let cv = canonical_great_hopf(&variant).unwrap();
                assert!(c.distance(&cv) < 1e-8);
            }
        }
    }

    #[test]
    fn great_circle_points_of_coordinate_plane() {
        let plane = Plane2in4::new(Quaternion::one(), Quaternion::i()).unwrap();
        let pts = great_circle_points(&plane, 4).unwrap();
        let expected = [
            Vector4::new(1.0, 0.0, 0.0, 0.0),
            Vector4::new(0.0, 1.0, 0.0, 0.0),
            Vector4::new(-1.0, 0.0, 0.0, 0.0),
            Vector4::new(0.0, -1.0, 0.0, 0.0),
        ];
        for (p, e) in pts.iter().zip(expected.iter()) {
            assert!((p - e).norm() < 1e-12);
        }
        assert!(great_circle_points(&plane, 3).is_err());
    }

    #[test]
    fn stereographic_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let proj = Stereographic::standard();
        for _ in 0..300 {
            let p = quaternion_to_vector(
                &crate::sample::random_unit_quaternion(&mut rng).as_quaternion(),
            );
            if (p - proj.pole()).norm() < 1e-3 {
                continue;
            }
            let v = proj.project(&p).unwrap();
            let back = proj.unproject(&v);
            assert!((back - p).norm() < 1e-9);
        }
    }

    #[test]
    fn pole_proximity_is_rejected() {
        let proj = Stereographic::standard();
        let almost_pole = Vector4::new(0.0, 0.0, 1e-9, 1.0).normalize();
        assert!(matches!(
            proj.project(&almost_pole),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn projected_basepoint_circles_link_once() {
        use crate::plgeom::{gauss_linking_pl, Polyline3};
        let (v, w) = fixtures::basepoint_great_planes();
        // pole away from both circles
        let proj = Stereographic::new(Vector4::new(0.5, 0.5, 0.5, 0.5)).unwrap();
        let project_circle = |plane: &Plane2in4| -> Polyline3 {
            let pts = great_circle_points(plane, 64).unwrap();
            Polyline3::new_closed(pts.iter().map(|p| proj.project(p).unwrap()).collect()).unwrap()
        };
        let a = project_circle(&v);
        let b = project_circle(&w);
        let lk = gauss_linking_pl(&a, &b).unwrap();
        assert_eq!(lk.abs(), 1);
    }
}
