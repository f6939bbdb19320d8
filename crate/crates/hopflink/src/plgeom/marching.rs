//! Transverse height selection and marching-triangles extraction of
//! intersection patterns.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::pattern::{IntersectionPattern, RemovalOutcome, Sign};
use crate::roundlink::RoundCircle;

use super::mesh::{Ellipsoid, Scene, TriMesh};

/// Minimal acceptable transversality margin.
pub const MARGIN_THRESHOLD: f64 = 1e-6;
/// Vertices closer than this to the zero set make a height non-generic.
pub const VERTEX_ZERO_TOL: f64 = 1e-9;

/// Transversality margin of the mesh against the ellipsoid of height
/// `h`: the smallest absolute quadric value over vertices (and interior
/// edge extrema), or `+inf` when the surface misses the mesh entirely,
/// or `0` when an edge dips through the surface without a vertex sign
/// change (a crossing the marching would miss).
fn margin(mesh: &TriMesh, equator: &RoundCircle, h: f64) -> Result<f64> {
    let e = Ellipsoid::new(*equator, h)?;
    let f: Vec<f64> = mesh.vertices().iter().map(|p| e.quadric(p)).collect();

    let straddles = mesh
        .triangles()
        .iter()
        .any(|t| t.iter().any(|&v| f[v] > 0.0) && t.iter().any(|&v| f[v] < 0.0));
    if !straddles && f.iter().all(|&x| x.abs() > VERTEX_ZERO_TOL) {
        // also make sure no same-sign edge dips through the surface
        if !any_hidden_crossing(mesh, &e, &f) {
            return Ok(f64::INFINITY);
        }
        return Ok(0.0);
    }

    let mut m = f.iter().fold(f64::INFINITY, |acc, &x| acc.min(x.abs()));
    if m <= VERTEX_ZERO_TOL {
        return Ok(0.0);
    }
    if any_hidden_crossing(mesh, &e, &f) {
        return Ok(0.0);
    }
    // interior extrema of same-sign edges bound how close the surface
    // sneaks past the mesh without crossing a vertex sign
    for (a, b) in mesh_edges(mesh) {
        if f[a] * f[b] > 0.0 {
            let (qa, qb, qc) = e.quadric_on_segment(&mesh.vertices()[a], &mesh.vertices()[b]);
            if qa > 1e-30 {
                let t = -qb / (2.0 * qa);
                if t > 0.0 && t < 1.0 {
                    let val = qa * t * t + qb * t + qc;
                    if val.signum() == f[a].signum() {
                        m = m.min(val.abs());
                    }
                }
            }
        }
    }
    Ok(m)
}

fn any_hidden_crossing(mesh: &TriMesh, e: &Ellipsoid, f: &[f64]) -> bool {
    for (a, b) in mesh_edges(mesh) {
        if f[a] * f[b] > 0.0 {
            let (qa, qb, qc) = e.quadric_on_segment(&mesh.vertices()[a], &mesh.vertices()[b]);
            if qa > 1e-30 {
                let t = -qb / (2.0 * qa);
                if t > 0.0 && t < 1.0 {
                    let val = qa * t * t + qb * t + qc;
                    if val.signum() != f[a].signum() && val != 0.0 {
                        return true;
                    }
                    if val == 0.0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn mesh_edges(mesh: &TriMesh) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::new();
    for t in mesh.triangles() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            set.insert((a.min(b), a.max(b)));
        }
    }
    set.into_iter().collect()
}

/// Searches `[h_min, h_max]` for the height with the best transversality
/// margin: a geometric grid of 64 samples, refined once around the
/// argmax. Returns the midpoint height when the surface misses the mesh
/// at every sample.
pub fn find_transverse_height(
    mesh: &TriMesh,
    equator: &RoundCircle,
    h_min: f64,
    h_max: f64,
) -> Result<f64> {
    if h_min <= 0.0 || h_min >= h_max || h_min.is_nan() || h_max.is_nan() {
        return Err(Error::InvalidInput(format!(
            "invalid height range [{h_min}, {h_max}]"
        )));
    }
    const GRID: usize = 64;
    let sample = |lo: f64, hi: f64, k: usize| lo * (hi / lo).powf((k as f64) / ((GRID - 1) as f64));

    let mut all_infinite = true;
    let heights: Vec<f64> = (0..GRID).map(|k| sample(h_min, h_max, k)).collect();
    let mut margins = Vec::with_capacity(GRID);
    for &h in &heights {
        let m = margin(mesh, equator, h)?;
        if m.is_finite() {
            all_infinite = false;
        }
        margins.push(m);
    }
    if all_infinite {
        return Ok((h_min + h_max) / 2.0);
    }
    let argmax = margins
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut best = (margins[argmax], heights[argmax]);

    // one refinement pass around the argmax
    let lo = heights[argmax.saturating_sub(1)];
    let hi = heights[(argmax + 1).min(GRID - 1)];
    if lo < hi {
        for k in 0..GRID {
            let h = sample(lo, hi, k);
            let m = margin(mesh, equator, h)?;
            if m > best.0 {
                best = (m, h);
            }
        }
    }

    let (m, h) = best;
    if m <= MARGIN_THRESHOLD {
        return Err(Error::NoTransverseHeight);
    }
    Ok(h)
}

/// One traced component of the zero set on the mesh.
struct TracedComponent {
    /// Crossing points in walk order.
    points: Vec<Vector3<f64>>,
    /// Edge keys in walk order (same length as points).
    edges: Vec<(usize, usize)>,
    closed: bool,
}

/// Extracts the signed chord diagram of `mesh ∩ ellipsoid`.
///
/// The quadric field is evaluated at the vertices; triangles with both
/// signs contribute one zero-set segment each, chained into properly
/// embedded arcs (ending on the boundary loop) and circles. Arc
/// endpoints are decorated with the hemisphere sign of the crossing
/// point, and circles are tagged with the innermost chord region that
/// contains them.
pub fn extract_intersection_pattern(
    mesh: &TriMesh,
    ellipsoid: &Ellipsoid,
) -> Result<IntersectionPattern> {
    let f: Vec<f64> = mesh
        .vertices()
        .iter()
        .map(|p| ellipsoid.quadric(p))
        .collect();
    if f.iter().any(|&x| x.abs() <= VERTEX_ZERO_TOL) {
        return Err(Error::NotTransverse);
    }
    if any_hidden_crossing(mesh, ellipsoid, &f) {
        return Err(Error::NotTransverse);
    }

    // crossing point on each sign-changing edge (root of the quadric)
    let mut crossing: BTreeMap<(usize, usize), Vector3<f64>> = BTreeMap::new();
    for (a, b) in mesh_edges(mesh) {
        if f[a] * f[b] < 0.0 {
            let p0 = mesh.vertices()[a];
            let p1 = mesh.vertices()[b];
            let t = edge_root(ellipsoid, &p0, &p1, f[a], f[b]);
            crossing.insert((a, b), p0 + (p1 - p0) * t);
        }
    }

    // triangle -> its two crossed edges; edge -> incident crossed triangles
    let mut tri_edges: Vec<Option<[(usize, usize); 2]>> = vec![None; mesh.triangles().len()];
    let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (ti, t) in mesh.triangles().iter().enumerate() {
        let mut crossed = Vec::with_capacity(2);
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = (a.min(b), a.max(b));
            if crossing.contains_key(&key) && !crossed.contains(&key) {
                crossed.push(key);
            }
        }
        match crossed.len() {
            0 => {}
            2 => {
                tri_edges[ti] = Some([crossed[0], crossed[1]]);
                for key in crossed {
                    edge_tris.entry(key).or_default().push(ti);
                }
            }
            _ => return Err(Error::NotTransverse),
        }
    }

    let boundary_edge_keys: BTreeSet<(usize, usize)> = {
        let b = mesh.boundary();
        (0..b.len())
            .map(|i| {
                let (x, y) = (b[i], b[(i + 1) % b.len()]);
                (x.min(y), x.max(y))
            })
            .collect()
    };

    // trace components
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut components: Vec<TracedComponent> = Vec::new();

    let crossed_boundary: Vec<(usize, usize)> = crossing
        .keys()
        .filter(|k| boundary_edge_keys.contains(*k))
        .copied()
        .collect();

    // open arcs first, seeded from boundary edges
    for &start in &crossed_boundary {
        if visited.contains(&start) {
            continue;
        }
        let comp = trace_from(start, &crossing, &tri_edges, &edge_tris, &mut visited)?;
        components.push(comp);
    }
    // remaining components are circles
    let keys: Vec<(usize, usize)> = crossing.keys().copied().collect();
    for start in keys {
        if visited.contains(&start) {
            continue;
        }
        let comp = trace_from(start, &crossing, &tri_edges, &edge_tris, &mut visited)?;
        if !comp.closed {
            return Err(Error::NotTransverse);
        }
        components.push(comp);
    }

    // boundary coordinates of arc endpoints
    struct ArcEnd {
        position: f64, // cyclic coordinate along the boundary loop
        sign: Sign,
        component: usize,
    }
    let mut ends: Vec<ArcEnd> = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        if comp.closed {
            continue;
        }
        for (pt, edge) in [
            (comp.points[0], comp.edges[0]),
            (
                comp.points[comp.points.len() - 1],
                comp.edges[comp.edges.len() - 1],
            ),
        ] {
            let w = ellipsoid.hemisphere_coordinate(&pt);
            if w.abs() <= VERTEX_ZERO_TOL {
                return Err(Error::NotTransverse);
            }
            ends.push(ArcEnd {
                position: boundary_coordinate(mesh, edge, &pt)?,
                sign: if w > 0.0 { Sign::Plus } else { Sign::Minus },
                component: ci,
            });
        }
    }
    ends.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());

    // labels in cyclic order; pair up labels by component
    let signs: Vec<Sign> = ends.iter().map(|e| e.sign).collect();
    let mut pair_of_component: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (label, e) in ends.iter().enumerate() {
        pair_of_component
            .entry(e.component)
            .or_default()
            .push(label);
    }
    let mut chord_pairs: Vec<(usize, usize)> = Vec::new();
    let mut chord_component: Vec<usize> = Vec::new();
    for (comp, labels) in &pair_of_component {
        if labels.len() != 2 {
            return Err(Error::NotTransverse);
        }
        chord_pairs.push((labels[0], labels[1]));
        chord_component.push(*comp);
    }

    // the unique mixed-sign chord
    let mixed: Vec<usize> = chord_pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| signs[a] != signs[b])
        .map(|(i, _)| i)
        .collect();
    if mixed.len() != 1 {
        return Err(Error::NoMixedChord { count: mixed.len() });
    }
    let alpha_pair = chord_pairs[mixed[0]];
    let alpha_component = chord_component[mixed[0]];
    let mut plain_chords: Vec<((usize, usize), usize)> = chord_pairs
        .iter()
        .zip(chord_component.iter())
        .filter(|(_, &c)| c != alpha_component)
        .map(|(&p, &c)| (p, c))
        .collect();
    plain_chords.sort_by_key(|((a, b), _)| *a.min(b));

    // circles: tag with the innermost containing chord region using a
    // side test against each chord's crossed-edge set
    let pattern_wo_circles = IntersectionPattern::new(
        signs.clone(),
        alpha_pair,
        plain_chords.iter().map(|(p, _)| *p).collect(),
        vec![],
    )?;

    let mut circle_tags: Vec<Option<usize>> = Vec::new();
    for comp in components.iter().filter(|c| c.closed) {
        let rep_vertex = comp.edges[0].0;
        let mut containing: Vec<usize> = Vec::new();
        for (chord_id, (_, comp_idx)) in plain_chords.iter().enumerate() {
            let chord_edges: BTreeSet<(usize, usize)> =
                components[*comp_idx].edges.iter().copied().collect();
            let reached = first_boundary_vertex_avoiding(mesh, rep_vertex, &chord_edges)?;
            let pos = mesh.boundary_position(reached).expect("boundary vertex") as f64;
            let (la, lb) = pattern_wo_circles.chords()[chord_id].endpoints;
            let (ea, eb) = (ends[la].position, ends[lb].position);
            let in_between = cyclic_between(ea, eb, pos);
            // which side of the chord is C(kappa): the side whose
            // boundary interval avoids the mixed chord's endpoints
            let alpha_pos = ends[alpha_pair.0].position;
            let alpha_between = cyclic_between(ea, eb, alpha_pos);
            let region_is_between = !alpha_between;
            if in_between == region_is_between {
                containing.push(chord_id);
            }
        }
        let tag = containing
            .into_iter()
            .min_by_key(|&id| pattern_wo_circles.region_labels(id).unwrap().len());
        circle_tags.push(tag);
    }

    IntersectionPattern::new(
        signs,
        alpha_pair,
        plain_chords.iter().map(|(p, _)| *p).collect(),
        circle_tags,
    )
}

/// Root of the quadric along a sign-changing edge, in `(0,1)`.
fn edge_root(e: &Ellipsoid, p0: &Vector3<f64>, p1: &Vector3<f64>, f0: f64, f1: f64) -> f64 {
    let (a, b, c) = e.quadric_on_segment(p0, p1);
    if a.abs() > 1e-30 {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for root in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                if root > 0.0 && root < 1.0 {
                    return root;
                }
            }
        }
    }
    // fallback: linear interpolation of the endpoint values
    f0 / (f0 - f1)
}

fn trace_from(
    start: (usize, usize),
    crossing: &BTreeMap<(usize, usize), Vector3<f64>>,
    tri_edges: &[Option<[(usize, usize); 2]>],
    edge_tris: &BTreeMap<(usize, usize), Vec<usize>>,
    visited: &mut BTreeSet<(usize, usize)>,
) -> Result<TracedComponent> {
    let mut points = vec![crossing[&start]];
    let mut edges = vec![start];
    visited.insert(start);

    let mut prev_tri: Option<usize> = None;
    let mut cur = start;
    loop {
        let tris = &edge_tris[&cur];
        let next_tri = tris.iter().find(|&&t| Some(t) != prev_tri);
        let Some(&t) = next_tri else {
            // dead end: open arc finished
            return Ok(TracedComponent {
                points,
                edges,
                closed: false,
            });
        };
        let pair = tri_edges[t].expect("crossed triangle has two edges");
        let next_edge = if pair[0] == cur { pair[1] } else { pair[0] };
        if next_edge == start {
            return Ok(TracedComponent {
                points,
                edges,
                closed: true,
            });
        }
        if visited.contains(&next_edge) {
            return Err(Error::NotTransverse);
        }
        visited.insert(next_edge);
        points.push(crossing[&next_edge]);
        edges.push(next_edge);
        prev_tri = Some(t);
        cur = next_edge;
    }
}

/// Cyclic coordinate of a crossing point along the boundary loop:
/// (index of the loop vertex) + (fraction toward the next loop vertex).
fn boundary_coordinate(mesh: &TriMesh, edge: (usize, usize), point: &Vector3<f64>) -> Result<f64> {
    let b = mesh.boundary();
    let n = b.len();
    for i in 0..n {
        let (x, y) = (b[i], b[(i + 1) % n]);
        if (x.min(y), x.max(y)) == edge {
            let p0 = mesh.vertices()[x];
            let p1 = mesh.vertices()[y];
            let t = (point - p0).dot(&(p1 - p0)) / (p1 - p0).norm_squared();
            return Ok(i as f64 + t.clamp(0.0, 1.0));
        }
    }
    Err(Error::NotTransverse)
}

/// True if `x` lies in the cyclic open interval from `a` to `b`
/// (walking upward from `a`).
fn cyclic_between(a: f64, b: f64, x: f64) -> bool {
    if a <= b {
        x > a && x < b
    } else {
        x > a || x < b
    }
}

/// BFS over mesh vertices avoiding a set of blocked (crossed) edges;
/// returns the first boundary vertex reached.
fn first_boundary_vertex_avoiding(
    mesh: &TriMesh,
    start: usize,
    blocked: &BTreeSet<(usize, usize)>,
) -> Result<usize> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, b) in mesh_edges(mesh) {
        if blocked.contains(&(a, b)) {
            continue;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let boundary: BTreeSet<usize> = mesh.boundary().iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    queue.push_back(start);
    seen.insert(start);
    while let Some(v) = queue.pop_front() {
        if boundary.contains(&v) {
            return Ok(v);
        }
        if let Some(neighbors) = adj.get(&v) {
            for &w in neighbors {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    Err(Error::NotTransverse)
}

/// Full scene pipeline: transverse height, pattern extraction, schedule
/// execution.
pub fn scene_pipeline(scene: &Scene) -> Result<(f64, IntersectionPattern, RemovalOutcome)> {
    let h = find_transverse_height(
        &scene.disc_mesh,
        &scene.equator,
        scene.h_range.0,
        scene.h_range.1,
    )?;
    let e = Ellipsoid::new(scene.equator, h)?;
    let pattern = extract_intersection_pattern(&scene.disc_mesh, &e)?;
    let outcome = crate::pattern::run_schedule(&pattern)?;
    Ok((h, pattern, outcome))
}
