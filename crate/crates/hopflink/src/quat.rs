//! Quaternion algebra and the SU(2) → SO(3) double cover.
//!
//! Quaternions use the Hamilton conventions: `i² = j² = k² = -1`,
//! `ij = k`, `jk = i`, `ki = j`, stored scalar-first as `(w, x, y, z)`.
//! A unit quaternion `q` acts on ℝ³ (identified with the imaginary
//! quaternions) by conjugation `v ↦ q v q⁻¹`; this is the two-to-one
//! covering homomorphism onto SO(3), with `q` and `-q` mapping to the
//! same rotation. [`lift_path`] inverts the cover continuously along a
//! sampled path, which is how loop holonomies are read off downstream.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Tolerance for the unit-norm invariant of [`UnitQuaternion`].
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance for orthonormality and determinant checks on [`Rotation3`].
pub const ROTATION_TOL: f64 = 1e-9;
/// Deduplication tolerance for orbits and group closure.
pub const ORBIT_TOL: f64 = 1e-9;
/// Maximal angular step between consecutive rotation samples in a path.
pub const MAX_PATH_STEP: f64 = std::f64::consts::FRAC_PI_4;

/// A quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn one() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    /// Purely imaginary quaternion with the given vector part.
    pub fn from_imag(v: Vector3<f64>) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    pub fn imag(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Euclidean inner product of the four components.
    pub fn dot(&self, rhs: &Self) -> f64 {
        self.w * rhs.w + self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    fn distance(&self, rhs: &Self) -> f64 {
        (*self - *rhs).norm()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// A quaternion of unit norm, i.e. an element of SU(2) ≅ S³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    /// Validates the norm to within [`UNIT_TOL`].
    pub fn new(q: Quaternion) -> Result<Self> {
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnit { norm });
        }
        Ok(Self(q))
    }

    /// Rescales `q` to unit norm. Fails only on (near-)zero input.
    pub fn normalize(q: Quaternion) -> Result<Self> {
        let norm = q.norm();
        if norm < 1e-12 {
            return Err(Error::NonUnit { norm });
        }
        Ok(Self(q.scale(1.0 / norm)))
    }

    pub const fn one() -> Self {
        Self(Quaternion::one())
    }

    pub const fn i() -> Self {
        Self(Quaternion::i())
    }

    pub const fn j() -> Self {
        Self(Quaternion::j())
    }

    pub const fn k() -> Self {
        Self(Quaternion::k())
    }

    /// `cos(angle/2) + sin(angle/2) (axis · (i,j,k))`; the lift of the
    /// rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if n < 1e-12 {
            return Err(Error::NonUnit { norm: n });
        }
        let (s, c) = (angle / 2.0).sin_cos();
        let v = axis * (s / n);
        Self::normalize(Quaternion::new(c, v.x, v.y, v.z))
    }

    pub fn as_quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.conjugate())
    }

    pub fn inverse(&self) -> Self {
        self.conjugate()
    }

    pub fn dot(&self, rhs: &Self) -> f64 {
        self.0.dot(&rhs.0)
    }

    pub fn components(&self) -> [f64; 4] {
        self.0.components()
    }

    /// Distance in ℝ⁴ (not the geodesic distance on S³).
    pub fn distance(&self, rhs: &Self) -> f64 {
        self.0.distance(&rhs.0)
    }

    /// True if the two quaternions agree up to sign within `tol`.
    pub fn same_rotation(&self, rhs: &Self, tol: f64) -> bool {
        self.distance(rhs) <= tol || self.distance(&-*rhs) <= tol
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        // renormalize to keep the invariant through long products
        let q = self.0 * rhs.0;
        UnitQuaternion(q.scale(1.0 / q.norm()))
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

/// A 3×3 matrix validated to lie in SO(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Matrix3<f64>);

impl Rotation3 {
    /// Checks orthonormality of the columns and `det = +1`, both to
    /// within [`ROTATION_TOL`].
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let gram = m.transpose() * m;
        let ortho_err = (gram - Matrix3::identity()).norm();
        if ortho_err > ROTATION_TOL {
            return Err(Error::NotRotation {
                reason: format!("columns not orthonormal (error {ortho_err:.3e})"),
            });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::NotRotation {
                reason: format!("determinant {det} != +1"),
            });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Builds a rotation from three column vectors.
    pub fn from_columns(c0: Vector3<f64>, c1: Vector3<f64>, c2: Vector3<f64>) -> Result<Self> {
        Self::new(Matrix3::from_columns(&[c0, c1, c2]))
    }

    /// Rodrigues rotation by `angle` about the unit vector `axis`.
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotRotation {
                reason: format!("axis not unit (|axis| = {n})"),
            });
        }
        let (s, c) = angle.sin_cos();
        let k = Matrix3::new(
            0.0, -axis.z, axis.y, //
            axis.z, 0.0, -axis.x, //
            -axis.y, axis.x, 0.0,
        );
        Ok(Self(Matrix3::identity() + k * s + k * k * (1.0 - c)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn column(&self, i: usize) -> Vector3<f64> {
        self.0.column(i).into()
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Rotation angle of `self⁻¹ · rhs`, i.e. how far apart the two
    /// rotations are in the bi-invariant metric.
    pub fn angle_to(&self, rhs: &Rotation3) -> f64 {
        let rel = self.0.transpose() * rhs.0;
        let c = ((rel.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        c.acos()
    }

    pub fn distance(&self, rhs: &Rotation3) -> f64 {
        (self.0 - rhs.0).norm()
    }
}

impl Mul for Rotation3 {
    type Output = Rotation3;
    fn mul(self, rhs: Rotation3) -> Rotation3 {
        Rotation3(self.0 * rhs.0)
    }
}

/// The rotation `v ↦ Im(q v q⁻¹)` induced by conjugation with `q`.
///
/// `conjugation_action(-q) == conjugation_action(q)`: this is the
/// two-to-one covering homomorphism SU(2) → SO(3).
pub fn conjugation_action(q: &UnitQuaternion) -> Rotation3 {
    let Quaternion { w, x, y, z } = q.as_quaternion();
    let m = Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    );
    // orthonormal by construction from a unit quaternion
    Rotation3(m)
}

/// Both preimages `±q` of a rotation under the double cover.
///
/// Uses Shepperd's method, branching on the largest of the trace and the
/// diagonal entries for numerical stability at all rotation angles.
pub fn lift_rotation(rot: &Rotation3) -> Result<(UnitQuaternion, UnitQuaternion)> {
    Rotation3::new(*rot.matrix())?;
    let m = rot.matrix();
    let trace = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];

    let q = if trace > 0.0 {
        let s = (trace + 1.0).sqrt();
        let k = 0.5 / s;
        Quaternion::new(
            0.5 * s,
            (m[(2, 1)] - m[(1, 2)]) * k,
            (m[(0, 2)] - m[(2, 0)]) * k,
            (m[(1, 0)] - m[(0, 1)]) * k,
        )
    } else if m[(0, 0)] >= m[(1, 1)] && m[(0, 0)] >= m[(2, 2)] {
        let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt();
        let k = 0.5 / s;
        Quaternion::new(
            (m[(2, 1)] - m[(1, 2)]) * k,
            0.5 * s,
            (m[(0, 1)] + m[(1, 0)]) * k,
            (m[(0, 2)] + m[(2, 0)]) * k,
        )
    } else if m[(1, 1)] >= m[(2, 2)] {
        let s = (1.0 - m[(0, 0)] + m[(1, 1)] - m[(2, 2)]).sqrt();
        let k = 0.5 / s;
        Quaternion::new(
            (m[(0, 2)] - m[(2, 0)]) * k,
            (m[(0, 1)] + m[(1, 0)]) * k,
            0.5 * s,
            (m[(1, 2)] + m[(2, 1)]) * k,
        )
    } else {
        let s = (1.0 - m[(0, 0)] - m[(1, 1)] + m[(2, 2)]).sqrt();
        let k = 0.5 / s;
        Quaternion::new(
            (m[(1, 0)] - m[(0, 1)]) * k,
            (m[(0, 2)] + m[(2, 0)]) * k,
            (m[(1, 2)] + m[(2, 1)]) * k,
            0.5 * s,
        )
    };

    let q = UnitQuaternion::normalize(q)?;
    Ok((q, -q))
}

/// Continuously lifts a sampled SO(3) path through the double cover,
/// starting from the prescribed lift `q0` of the first sample.
///
/// Consecutive samples must be within [`MAX_PATH_STEP`] of each other in
/// rotation angle; the sign of each lift is chosen so that consecutive
/// lifted samples have positive inner product in ℝ⁴, which pins down the
/// unique continuous lift at sample resolution.
pub fn lift_path(rotations: &[Rotation3], q0: &UnitQuaternion) -> Result<Vec<UnitQuaternion>> {
    let first = match rotations.first() {
        Some(r) => r,
        None => return Ok(Vec::new()),
    };
    if conjugation_action(q0).distance(first) > 1e-8 {
        return Err(Error::InvalidInput(
            "q0 does not lift the first rotation sample".into(),
        ));
    }

    let mut lifted = Vec::with_capacity(rotations.len());
    lifted.push(*q0);
    for (i, rot) in rotations.iter().enumerate().skip(1) {
        let step = rotations[i - 1].angle_to(rot);
        if step >= MAX_PATH_STEP {
            return Err(Error::StepTooLarge {
                angle: step,
                bound: MAX_PATH_STEP,
            });
        }
        let (q, qn) = lift_rotation(rot)?;
        let prev = lifted[i - 1];
        lifted.push(if q.dot(&prev) >= 0.0 { q } else { qn });
    }
    Ok(lifted)
}

/// An ordered finite set of unit quaternions closed under multiplication
/// and negation; always contains `1` and `-1`.
#[derive(Debug, Clone)]
pub struct QuaternionSubgroup {
    elements: Vec<UnitQuaternion>,
}

impl QuaternionSubgroup {
    /// Validates closure under products, inverses and negation (all
    /// membership checks at [`ORBIT_TOL`]).
    pub fn new(elements: Vec<UnitQuaternion>) -> Result<Self> {
        let contains = |q: &UnitQuaternion| elements.iter().any(|e| e.distance(q) <= ORBIT_TOL);
        if !contains(&UnitQuaternion::one()) || !contains(&-UnitQuaternion::one()) {
            return Err(Error::NotSubgroup {
                reason: "must contain 1 and -1".into(),
            });
        }
        for a in &elements {
            if !contains(&-*a) {
                return Err(Error::NotSubgroup {
                    reason: "not closed under negation".into(),
                });
            }
            if !contains(&a.inverse()) {
                return Err(Error::NotSubgroup {
                    reason: "not closed under inverses".into(),
                });
            }
            for b in &elements {
                if !contains(&(*a * *b)) {
                    return Err(Error::NotSubgroup {
                        reason: "not closed under products".into(),
                    });
                }
            }
        }
        Ok(Self { elements })
    }

    /// Closure of the generators (and their negatives) under
    /// multiplication. Fails if the closure exceeds `max` elements,
    /// which signals a generator of infinite order.
    pub fn generate(generators: &[UnitQuaternion], max: usize) -> Result<Self> {
        let mut elements = vec![UnitQuaternion::one(), -UnitQuaternion::one()];
        let mut frontier: Vec<UnitQuaternion> = generators.to_vec();
        while let Some(g) = frontier.pop() {
            if elements.iter().any(|e| e.distance(&g) <= ORBIT_TOL) {
                continue;
            }
            elements.push(g);
            if elements.len() > max {
                return Err(Error::NotSubgroup {
                    reason: format!("closure exceeds {max} elements"),
                });
            }
            for e in elements.clone() {
                frontier.push(e * g);
                frontier.push(g * e);
            }
        }
        Self::new(elements)
    }

    /// The quaternion group ℚ8 = {±1, ±i, ±j, ±k}.
    pub fn q8() -> Self {
        let e = [
            UnitQuaternion::one(),
            -UnitQuaternion::one(),
            UnitQuaternion::i(),
            -UnitQuaternion::i(),
            UnitQuaternion::j(),
            -UnitQuaternion::j(),
            UnitQuaternion::k(),
            -UnitQuaternion::k(),
        ];
        Self {
            elements: e.to_vec(),
        }
    }

    pub fn elements(&self) -> &[UnitQuaternion] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, q: &UnitQuaternion, tol: f64) -> bool {
        self.elements.iter().any(|e| e.distance(q) <= tol)
    }
}

/// Lexicographic comparison of components `(w, x, y, z)`, treating
/// differences below `tol` as ties.
fn lex_less(a: &UnitQuaternion, b: &UnitQuaternion, tol: f64) -> bool {
    let ca = a.components();
    let cb = b.components();
    for (va, vb) in ca.iter().zip(cb.iter()) {
        if (va - vb).abs() > tol {
            return va < vb;
        }
    }
    false
}

/// Replaces negatively signed zeros by positive zeros, so canonical
/// representatives have a unique byte representation.
pub fn normalize_zero_signs(q: &UnitQuaternion) -> UnitQuaternion {
    let fix = |x: f64| if x == 0.0 { 0.0 } else { x };
    let c = q.as_quaternion();
    UnitQuaternion(Quaternion::new(fix(c.w), fix(c.x), fix(c.y), fix(c.z)))
}

/// The right orbit `{q·g : g ∈ G}` (deduplicated at [`ORBIT_TOL`]) and
/// its canonical representative, the lexicographic maximum by
/// `(w, x, y, z)` with signed zeros normalized.
///
/// The representative depends only on the orbit: replacing `q` by `q·g`
/// yields the same canonical element.
pub fn orbit_and_canonical(
    q: &UnitQuaternion,
    group: &QuaternionSubgroup,
) -> (Vec<UnitQuaternion>, UnitQuaternion) {
    let mut orbit: Vec<UnitQuaternion> = Vec::with_capacity(group.len());
    for g in group.elements() {
        let e = *q * *g;
        if !orbit.iter().any(|o| o.distance(&e) <= ORBIT_TOL) {
            orbit.push(e);
        }
    }
    let mut canonical = orbit[0];
    for e in &orbit[1..] {
        if lex_less(&canonical, e, ORBIT_TOL) {
            canonical = *e;
        }
    }
    (orbit, normalize_zero_signs(&canonical))
}
