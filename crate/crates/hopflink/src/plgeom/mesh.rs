//! Triangulated discs and the ellipsoid family over an equator circle.

use std::collections::BTreeMap;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::roundlink::RoundCircle;

/// A triangulated disc: consistently oriented triangles whose boundary
/// edges form a single cycle, with `V - E + F = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vector3<f64>>,
    triangles: Vec<[usize; 3]>,
    /// Boundary vertex loop in cyclic order, following the orientation
    /// induced by the triangles.
    boundary: Vec<usize>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vector3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.len() < 3 || triangles.is_empty() {
            return Err(Error::InvalidMesh("mesh too small".into()));
        }
        for t in &triangles {
            for &v in t {
                if v >= vertices.len() {
                    return Err(Error::InvalidMesh(format!("vertex index {v} out of range")));
                }
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidMesh("degenerate triangle indices".into()));
            }
            let area = (vertices[t[1]] - vertices[t[0]])
                .cross(&(vertices[t[2]] - vertices[t[0]]))
                .norm();
            if area < 1e-14 {
                return Err(Error::InvalidMesh("zero-area triangle".into()));
            }
        }

        // directed edge bookkeeping: interior edges must appear once in
        // each direction, boundary edges once in total
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *directed.entry(e).or_insert(0) += 1;
                if directed[&e] > 1 {
                    return Err(Error::InvalidMesh(
                        "directed edge used twice; inconsistent orientation or non-manifold".into(),
                    ));
                }
            }
        }
        let mut boundary_next: BTreeMap<usize, usize> = BTreeMap::new();
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) && boundary_next.insert(a, b).is_some() {
                return Err(Error::InvalidMesh("boundary is not a simple cycle".into()));
            }
        }
        let undirected: std::collections::BTreeSet<(usize, usize)> = directed
            .keys()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        let euler = vertices.len() as i64 - undirected.len() as i64 + triangles.len() as i64;
        if euler != 1 {
            return Err(Error::InvalidMesh(format!(
                "Euler characteristic {euler} != 1; not a disc"
            )));
        }

        // walk the boundary cycle
        let start = *boundary_next
            .keys()
            .next()
            .ok_or_else(|| Error::InvalidMesh("closed surface has no boundary".into()))?;
        let mut boundary = vec![start];
        let mut cur = boundary_next[&start];
        while cur != start {
            boundary.push(cur);
            cur = *boundary_next
                .get(&cur)
                .ok_or_else(|| Error::InvalidMesh("boundary walk broke".into()))?;
            if boundary.len() > boundary_next.len() {
                return Err(Error::InvalidMesh("boundary is not a single cycle".into()));
            }
        }
        if boundary.len() != boundary_next.len() {
            return Err(Error::InvalidMesh(
                "boundary has more than one cycle".into(),
            ));
        }

        let mesh = Self {
            vertices,
            triangles,
            boundary,
        };
        mesh.check_duplicate_vertices()?;
        Ok(mesh)
    }

    fn check_duplicate_vertices(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            self.vertices[a]
                .x
                .partial_cmp(&self.vertices[b].x)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for (rank, &i) in order.iter().enumerate() {
            for &j in order.iter().skip(rank + 1) {
                if self.vertices[j].x - self.vertices[i].x > 1e-9 {
                    break;
                }
                if (self.vertices[j] - self.vertices[i]).norm() <= 1e-9 {
                    return Err(Error::InvalidMesh(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Full pairwise embeddedness check (triangle/triangle intersection
    /// for non-adjacent triangles). Quadratic; used on external inputs
    /// and fixtures, not in hot loops.
    pub fn check_embedded(&self) -> Result<()> {
        let tris = &self.triangles;
        for i in 0..tris.len() {
            for j in (i + 1)..tris.len() {
                if tris[i].iter().any(|v| tris[j].contains(v)) {
                    continue;
                }
                if self.triangles_too_close(i, j, 1e-9) {
                    return Err(Error::InvalidMesh(format!(
                        "triangles {i} and {j} intersect within tolerance"
                    )));
                }
            }
        }
        Ok(())
    }

    fn triangles_too_close(&self, i: usize, j: usize, tol: f64) -> bool {
        let ta = self.triangles[i].map(|v| self.vertices[v]);
        let tb = self.triangles[j].map(|v| self.vertices[v]);
        // cheap bounding-sphere reject
        let ca = (ta[0] + ta[1] + ta[2]) / 3.0;
        let cb = (tb[0] + tb[1] + tb[2]) / 3.0;
        let ra = ta.iter().map(|p| (p - ca).norm()).fold(0.0, f64::max);
        let rb = tb.iter().map(|p| (p - cb).norm()).fold(0.0, f64::max);
        if (ca - cb).norm() > ra + rb + tol {
            return false;
        }
        // edge-to-triangle distances in both directions
        let d = triangle_triangle_distance(&ta, &tb);
        d <= tol
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Position of a vertex in the boundary loop, if it is a boundary
    /// vertex.
    pub fn boundary_position(&self, vertex: usize) -> Option<usize> {
        self.boundary.iter().position(|&v| v == vertex)
    }

    /// A disc triangulated as `rings` concentric polygons of
    /// `segments` vertices each. The innermost polygon is fanned from a
    /// single interior vertex placed off-center and off the angular
    /// grid, so no vertex sits at the disc center and no edge passes
    /// exactly through it (the center is where an equator circle
    /// typically pierces the disc).
    ///
    /// `radial(phi)` is the boundary radius at angle `phi`; interior
    /// rings interpolate linearly toward zero. `height(r, phi)` offsets
    /// the vertex along the normal, with `r ∈ (0, 1]` the relative
    /// radial parameter.
    pub fn radial_disc(
        center: Vector3<f64>,
        normal: Vector3<f64>,
        resolution: usize,
        radial: impl Fn(f64) -> f64,
        height: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        if resolution < 8 {
            return Err(Error::InvalidMesh("resolution must be >= 8".into()));
        }
        let segments = resolution;
        let rings = (resolution / 4).max(2);
        let probe = RoundCircle::new(center, 1.0, normal.normalize())
            .map_err(|e| Error::InvalidMesh(format!("bad disc normal: {e}")))?;
        let (u, v) = probe.in_plane_frame();
        let n = normal.normalize();

        let place = |r: f64, phi: f64| {
            let rho = r * radial(phi);
            center + (u * phi.cos() + v * phi.sin()) * rho + n * height(r, phi)
        };

        // interior hub: half a ring in, a quarter turn plus an
        // off-grid offset (keeps the long fan chords transverse to the
        // tangent a piercing equator typically has at the disc center)
        let hub_phi =
            std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * 0.37 / (segments as f64);
        let hub_r = 0.5 / (rings as f64);
        let mut vertices = vec![place(hub_r, hub_phi)];
        for k in 1..=rings {
            let r = (k as f64) / (rings as f64);
            for s in 0..segments {
                let phi = std::f64::consts::TAU * (s as f64) / (segments as f64);
                vertices.push(place(r, phi));
            }
        }
        let idx = |k: usize, s: usize| 1 + (k - 1) * segments + (s % segments);

        let mut triangles = Vec::new();
        // fan of the innermost polygon from the hub, oriented opposite
        // to the ring quads so shared edges pair up
        for s in 0..segments {
            triangles.push([0, idx(1, s + 1), idx(1, s)]);
        }
        // quads between rings
        for k in 1..rings {
            for s in 0..segments {
                let a = idx(k, s);
                let b = idx(k, s + 1);
                let c = idx(k + 1, s);
                let d = idx(k + 1, s + 1);
                triangles.push([a, b, d]);
                triangles.push([a, d, c]);
            }
        }
        Self::new(vertices, triangles)
    }

    /// Flat round disc mesh.
    pub fn flat_disc(
        center: Vector3<f64>,
        radius: f64,
        normal: Vector3<f64>,
        resolution: usize,
    ) -> Result<Self> {
        Self::radial_disc(center, normal, resolution, |_| radius, |_, _| 0.0)
    }
}

fn triangle_triangle_distance(ta: &[Vector3<f64>; 3], tb: &[Vector3<f64>; 3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..3 {
        for j in 0..3 {
            let d = super::linking::segment_distance(
                &ta[i],
                &ta[(i + 1) % 3],
                &tb[j],
                &tb[(j + 1) % 3],
            );
            best = best.min(d);
        }
    }
    // also vertex-inside-triangle projections
    for p in ta {
        best = best.min(point_triangle_distance(p, tb));
    }
    for p in tb {
        best = best.min(point_triangle_distance(p, ta));
    }
    best
}

fn point_triangle_distance(p: &Vector3<f64>, t: &[Vector3<f64>; 3]) -> f64 {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let nn = n.norm();
    if nn < 1e-30 {
        return f64::INFINITY;
    }
    let n = n / nn;
    let dist = (p - t[0]).dot(&n);
    let proj = p - n * dist;
    // barycentric containment
    let v0 = t[1] - t[0];
    let v1 = t[2] - t[0];
    let v2 = proj - t[0];
    let d00 = v0.dot(&v0);
    let d01 = v0.dot(&v1);
    let d11 = v1.dot(&v1);
    let d20 = v2.dot(&v0);
    let d21 = v2.dot(&v1);
    let denom = d00 * d11 - d01 * d01;
    if denom.abs() < 1e-30 {
        return f64::INFINITY;
    }
    let a = (d11 * d20 - d01 * d21) / denom;
    let b = (d00 * d21 - d01 * d20) / denom;
    if a >= 0.0 && b >= 0.0 && a + b <= 1.0 {
        dist.abs()
    } else {
        f64::INFINITY
    }
}

/// The ellipsoid with a prescribed equator circle and pole height `h`:
/// in the equator frame, `(x/r)² + (y/r)² + (z/h)² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    equator: RoundCircle,
    height: f64,
}

impl Ellipsoid {
    pub fn new(equator: RoundCircle, height: f64) -> Result<Self> {
        if height <= 0.0 || height.is_nan() {
            return Err(Error::Degenerate(format!(
                "ellipsoid height {height} must be > 0"
            )));
        }
        Ok(Self { equator, height })
    }

    pub fn equator(&self) -> &RoundCircle {
        &self.equator
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// The quadric field whose zero set is the ellipsoid surface
    /// (negative inside).
    pub fn quadric(&self, p: &Vector3<f64>) -> f64 {
        let rel = p - self.equator.center();
        let w = rel.dot(&self.equator.normal());
        let planar = rel - self.equator.normal() * w;
        let r = self.equator.radius();
        planar.norm_squared() / (r * r) + (w / self.height) * (w / self.height) - 1.0
    }

    /// Signed height above the equator plane: positive on the upper
    /// hemisphere side.
    pub fn hemisphere_coordinate(&self, p: &Vector3<f64>) -> f64 {
        (p - self.equator.center()).dot(&self.equator.normal())
    }

    /// Coefficients `(a, b, c)` of the quadric restricted to the segment
    /// `p0 + t (p1 - p0)`: `q(t) = a t² + b t + c`.
    pub fn quadric_on_segment(&self, p0: &Vector3<f64>, p1: &Vector3<f64>) -> (f64, f64, f64) {
        let n = self.equator.normal();
        let r = self.equator.radius();
        let h = self.height;
        let rel = p0 - self.equator.center();
        let d = p1 - p0;
        let w0 = rel.dot(&n);
        let wd = d.dot(&n);
        let pl0 = rel - n * w0;
        let pld = d - n * wd;
        let a = pld.norm_squared() / (r * r) + (wd * wd) / (h * h);
        let b = 2.0 * (pl0.dot(&pld) / (r * r) + (w0 * wd) / (h * h));
        let c = pl0.norm_squared() / (r * r) + (w0 * w0) / (h * h) - 1.0;
        (a, b, c)
    }
}

/// A disc-versus-ellipsoid-family scene: the inputs of the pattern
/// extraction pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub disc_mesh: TriMesh,
    pub equator: RoundCircle,
    pub h_range: (f64, f64),
}
