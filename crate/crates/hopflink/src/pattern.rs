//! Combinatorics of intersection patterns.
//!
//! An intersection pattern records how a transverse ellipsoid meets a
//! spanning disc: signed points on the disc boundary, a non-crossing
//! perfect matching of those points into chords, one special chord with
//! opposite-sign endpoints (here called the *mixed chord*, stored as
//! `alpha`), and closed circle components tagged by the innermost chord
//! region containing them.
//!
//! Every other chord `κ` cuts off a region `C(κ)` on the side away from
//! the mixed chord. Removing chords innermost-first, each removal also
//! discarding the circles trapped in its region, terminates with the
//! mixed chord alone; [`make_schedule`] assigns the disjoint time
//! intervals in which each removal is performed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hemisphere sign decorating a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// A chord of the pattern, identified by a stable id that survives
/// removals of other chords.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordEntry {
    pub id: usize,
    /// Boundary labels of the two endpoints.
    pub endpoints: (usize, usize),
}

/// A closed intersection circle, tagged with the id of the innermost
/// chord whose region contains it (`None` when it lies outside every
/// chord region).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleComponent {
    pub inside: Option<usize>,
}

/// Signed chord diagram of a disc/ellipsoid intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionPattern {
    /// Boundary points in cyclic order: `(label, sign)`, sorted by label.
    points: Vec<(usize, Sign)>,
    /// The unique chord with opposite-sign endpoints.
    alpha: (usize, usize),
    /// All other chords.
    chords: Vec<ChordEntry>,
    circles: Vec<CircleComponent>,
}

impl IntersectionPattern {
    /// Builds a pattern from dense boundary data: `signs[i]` is the sign
    /// of boundary point `i` in cyclic order.
    pub fn new(
        signs: Vec<Sign>,
        alpha: (usize, usize),
        chords: Vec<(usize, usize)>,
        circles: Vec<Option<usize>>,
    ) -> Result<Self> {
        let points = signs.into_iter().enumerate().collect();
        let chords = chords
            .into_iter()
            .enumerate()
            .map(|(id, endpoints)| ChordEntry { id, endpoints })
            .collect();
        let circles = circles
            .into_iter()
            .map(|inside| CircleComponent { inside })
            .collect();
        let p = Self {
            points,
            alpha,
            chords,
            circles,
        };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn from_parts(
        points: Vec<(usize, Sign)>,
        alpha: (usize, usize),
        chords: Vec<ChordEntry>,
        circles: Vec<CircleComponent>,
    ) -> Result<Self> {
        let p = Self {
            points,
            alpha,
            chords,
            circles,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn points(&self) -> &[(usize, Sign)] {
        &self.points
    }

    pub fn alpha(&self) -> (usize, usize) {
        self.alpha
    }

    pub fn chords(&self) -> &[ChordEntry] {
        &self.chords
    }

    pub fn circles(&self) -> &[CircleComponent] {
        &self.circles
    }

    pub fn chord(&self, id: usize) -> Option<&ChordEntry> {
        self.chords.iter().find(|c| c.id == id)
    }

    fn sign_of(&self, label: usize) -> Result<Sign> {
        self.points
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::InvalidPattern(format!("unknown boundary label {label}")))
    }

    /// Checks the pattern invariants: the chords plus the mixed chord
    /// form a perfect non-crossing matching of the boundary points, and
    /// exactly one chord (the designated one) has opposite-sign ends.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        let mut all_pairs: Vec<(usize, usize)> = vec![self.alpha];
        all_pairs.extend(self.chords.iter().map(|c| c.endpoints));

        for &(a, b) in &all_pairs {
            if a == b {
                return Err(Error::InvalidPattern(format!(
                    "chord has coincident endpoints {a}"
                )));
            }
            for l in [a, b] {
                if !seen.insert(l) {
                    return Err(Error::InvalidPattern(format!(
                        "boundary label {l} used by two chords"
                    )));
                }
            }
        }
        let labels: std::collections::BTreeSet<usize> =
            self.points.iter().map(|(l, _)| *l).collect();
        if labels.len() != self.points.len() {
            return Err(Error::InvalidPattern("duplicate boundary labels".into()));
        }
        if seen != labels {
            return Err(Error::InvalidPattern(
                "chords do not form a perfect matching of the boundary points".into(),
            ));
        }

        // non-crossing in the cyclic order
        for i in 0..all_pairs.len() {
            for j in (i + 1)..all_pairs.len() {
                if self.pairs_cross(all_pairs[i], all_pairs[j]) {
                    return Err(Error::CrossingChords(
                        all_pairs[i].0.min(all_pairs[i].1),
                        all_pairs[j].0.min(all_pairs[j].1),
                    ));
                }
            }
        }

        // unique mixed-sign chord, and it is the designated one
        let mut mixed = 0usize;
        let mut alpha_mixed = false;
        for &(a, b) in &all_pairs {
            if self.sign_of(a)? != self.sign_of(b)? {
                mixed += 1;
                if (a, b) == self.alpha {
                    alpha_mixed = true;
                }
            }
        }
        if mixed != 1 || !alpha_mixed {
            return Err(Error::WrongAlphaCount { count: mixed });
        }

        // circle tags must reference existing chords
        for c in &self.circles {
            if let Some(id) = c.inside {
                if self.chord(id).is_none() {
                    return Err(Error::InvalidPattern(format!(
                        "circle references unknown chord id {id}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Labels strictly between `a` and `b` walking cyclically upward
    /// from `a` (positions, not label arithmetic).
    fn open_arc(&self, a: usize, b: usize) -> Vec<usize> {
        let pos = |label: usize| self.points.iter().position(|(l, _)| *l == label).unwrap();
        let n = self.points.len();
        let (pa, pb) = (pos(a), pos(b));
        let mut out = Vec::new();
        let mut i = (pa + 1) % n;
        while i != pb {
            out.push(self.points[i].0);
            i = (i + 1) % n;
        }
        out
    }

    fn pairs_cross(&self, p: (usize, usize), q: (usize, usize)) -> bool {
        let arc = self.open_arc(p.0, p.1);
        let q0_in = arc.contains(&q.0);
        let q1_in = arc.contains(&q.1);
        q0_in != q1_in
    }

    /// Boundary labels strictly inside the region `C(κ)` of the chord
    /// with the given id — the side of the chord away from the mixed
    /// chord.
    pub fn region_labels(&self, id: usize) -> Result<Vec<usize>> {
        let chord = self
            .chord(id)
            .ok_or_else(|| Error::InvalidPattern(format!("unknown chord id {id}")))?;
        let (a, b) = chord.endpoints;
        let arc_ab = self.open_arc(a, b);
        if arc_ab.contains(&self.alpha.0) || arc_ab.contains(&self.alpha.1) {
            Ok(self.open_arc(b, a))
        } else {
            Ok(arc_ab)
        }
    }

    /// True when `C(inner) ⊂ C(outer)`.
    pub fn region_contains(&self, outer: usize, inner: usize) -> Result<bool> {
        if outer == inner {
            return Ok(false);
        }
        let outer_region = self.region_labels(outer)?;
        let inner_chord = self
            .chord(inner)
            .ok_or_else(|| Error::InvalidPattern(format!("unknown chord id {inner}")))?;
        let (a, b) = inner_chord.endpoints;
        Ok(outer_region.contains(&a) && outer_region.contains(&b))
    }

    /// True when no other chord region is contained in this chord's.
    pub fn is_innermost(&self, id: usize) -> Result<bool> {
        for other in &self.chords {
            if other.id != id && self.region_contains(id, other.id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// An isomorphism-invariant encoding of the abstract diagram:
    /// chord names in order of first traversal from the mixed chord's
    /// `+` endpoint, with signs, plus sorted circle tags.
    pub fn canonical_code(&self) -> String {
        let plus_end = if self.sign_of(self.alpha.0).unwrap() == Sign::Plus {
            self.alpha.0
        } else {
            self.alpha.1
        };
        let n = self.points.len();
        let start = self
            .points
            .iter()
            .position(|(l, _)| *l == plus_end)
            .unwrap();

        let partner = |label: usize| -> (bool, usize, usize) {
            if label == self.alpha.0 {
                return (true, 0, self.alpha.1);
            }
            if label == self.alpha.1 {
                return (true, 0, self.alpha.0);
            }
            let c = self
                .chords
                .iter()
                .find(|c| c.endpoints.0 == label || c.endpoints.1 == label)
                .unwrap();
            let other = if c.endpoints.0 == label {
                c.endpoints.1
            } else {
                c.endpoints.0
            };
            (false, c.id, other)
        };

        let mut names: std::collections::BTreeMap<usize, usize> = Default::default();
        let mut tokens = Vec::new();
        let mut chord_name_by_id: std::collections::BTreeMap<usize, usize> = Default::default();
        for step in 0..n {
            let (label, sign) = self.points[(start + step) % n];
            let (is_alpha, id, _) = partner(label);
            let name = if is_alpha {
                "a".to_string()
            } else {
                let next = names.len();
                let entry = *names.entry(id).or_insert(next);
                chord_name_by_id.insert(id, entry);
                format!("c{entry}")
            };
            tokens.push(format!("{name}{}", sign.as_str()));
        }
        let mut circle_tokens: Vec<String> = self
            .circles
            .iter()
            .map(|c| match c.inside {
                None => "o".to_string(),
                Some(id) => format!("o@c{}", chord_name_by_id.get(&id).copied().unwrap_or(id)),
            })
            .collect();
        circle_tokens.sort();
        format!("{}|{}", tokens.join(" "), circle_tokens.join(" "))
    }
}

/// Standalone validation entry point.
pub fn validate_pattern(p: &IntersectionPattern) -> Result<()> {
    p.validate()
}

/// Containment forest over the non-mixed chords: `parent[id]` is the
/// smallest chord region strictly containing `C(id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingForest {
    /// Indexed by chord id.
    pub parent: std::collections::BTreeMap<usize, Option<usize>>,
}

impl NestingForest {
    pub fn roots(&self) -> Vec<usize> {
        self.parent
            .iter()
            .filter_map(|(id, p)| p.is_none().then_some(*id))
            .collect()
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.parent
            .iter()
            .filter_map(|(c, p)| (*p == Some(id)).then_some(*c))
            .collect()
    }
}

/// Computes the nesting forest of chord regions.
pub fn nesting_forest(p: &IntersectionPattern) -> Result<NestingForest> {
    let mut parent = std::collections::BTreeMap::new();
    for chord in p.chords() {
        let mut best: Option<(usize, usize)> = None; // (id, region size)
        for other in p.chords() {
            if other.id != chord.id && p.region_contains(other.id, chord.id)? {
                let size = p.region_labels(other.id)?.len();
                if best.is_none_or(|(_, s)| size < s) {
                    best = Some((other.id, size));
                }
            }
        }
        parent.insert(chord.id, best.map(|(id, _)| id));
    }
    Ok(NestingForest { parent })
}

/// Innermost-first total order on the chords: a deterministic linear
/// extension of region containment (children before parents, ties by
/// smallest boundary label).
pub fn innermost_order(p: &IntersectionPattern) -> Result<Vec<usize>> {
    let forest = nesting_forest(p)?;
    let mut remaining: std::collections::BTreeSet<usize> =
        p.chords().iter().map(|c| c.id).collect();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut candidates: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|id| forest.children(*id).iter().all(|c| !remaining.contains(c)))
            .collect();
        candidates.sort_by_key(|id| {
            let (a, b) = p.chord(*id).unwrap().endpoints;
            a.min(b)
        });
        let next = candidates[0];
        remaining.remove(&next);
        order.push(next);
    }
    Ok(order)
}

/// A timed removal plan: disjoint intervals `[s_start, s_end]`, one per
/// chord, in innermost-first order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub chord: usize,
    pub s_start: f64,
    pub s_end: f64,
}

/// Assigns removal times `s(κᵢ) = i/(m+1)` in innermost-first order,
/// each removal occupying an interval of length half the gap between
/// consecutive times.
pub fn make_schedule(p: &IntersectionPattern) -> Result<Schedule> {
    let order = innermost_order(p)?;
    let m = order.len();
    if m == 0 {
        return Ok(Schedule {
            entries: Vec::new(),
        });
    }
    let gap = 1.0 / (m as f64 + 1.0);
    let delta = gap / 2.0;
    let entries = order
        .iter()
        .enumerate()
        .map(|(idx, &chord)| {
            let s = (idx as f64 + 1.0) * gap;
            ScheduleEntry {
                chord,
                s_start: s,
                s_end: s + delta,
            }
        })
        .collect();
    Ok(Schedule { entries })
}

/// Removes an innermost chord together with the circles trapped in its
/// region.
pub fn simulate_removal(p: &IntersectionPattern, id: usize) -> Result<IntersectionPattern> {
    let chord = p
        .chord(id)
        .ok_or_else(|| Error::InvalidPattern(format!("unknown chord id {id}")))?;
    if !p.is_innermost(id)? {
        return Err(Error::NotInnermost(id));
    }
    let (a, b) = chord.endpoints;
    let points = p
        .points()
        .iter()
        .copied()
        .filter(|(l, _)| *l != a && *l != b)
        .collect();
    let chords = p.chords().iter().copied().filter(|c| c.id != id).collect();
    let circles = p
        .circles()
        .iter()
        .copied()
        .filter(|c| c.inside != Some(id))
        .collect();
    IntersectionPattern::from_parts(points, p.alpha(), chords, circles)
}

/// Terminal directive emitted after all removals: the remaining arc is
/// straightened onto the axis through the ellipsoid poles.
pub const GAMMA_DIRECTIVE: &str = "straighten alpha to the poles axis";

/// Result of executing a full removal schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalOutcome {
    pub schedule: Schedule,
    /// Chord ids in the order they were removed.
    pub removed: Vec<usize>,
    pub final_pattern: IntersectionPattern,
    /// Number of circles swept away by the terminal straightening.
    pub cleared_circles: usize,
    pub directive: &'static str,
}

/// Executes the schedule: removes every chord innermost-first, then
/// clears any circles left outside all chord regions as part of the
/// terminal straightening, ending with the mixed chord alone.
pub fn run_schedule(p: &IntersectionPattern) -> Result<RemovalOutcome> {
    let schedule = make_schedule(p)?;
    let mut current = p.clone();
    let mut removed = Vec::with_capacity(schedule.entries.len());
    for entry in &schedule.entries {
        current = simulate_removal(&current, entry.chord)?;
        removed.push(entry.chord);
    }
    let cleared = current.circles().len();
    let final_pattern = IntersectionPattern::from_parts(
        current.points().to_vec(),
        current.alpha(),
        Vec::new(),
        Vec::new(),
    )?;
    Ok(RemovalOutcome {
        schedule,
        removed,
        final_pattern,
        cleared_circles: cleared,
        directive: GAMMA_DIRECTIVE,
    })
}
