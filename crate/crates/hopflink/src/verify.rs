//! Seeded verification suites.
//!
//! Each check runs a property of the library at a configurable sample
//! count with a deterministic seed and reports pass/fail with a detail
//! string. `hopflink verify` runs all of them; the acceptance test
//! suite runs them at their reference sample sizes.

use nalgebra::{Matrix4, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fixtures;
use crate::grassmann::{
    self, canonical_great_hopf, orthogonal_complement, quaternion_to_vector, xi,
};
use crate::pattern;
use crate::plgeom::{self, Polyline3};
use crate::quat::{lift_path, lift_rotation, QuaternionSubgroup, Rotation3, UnitQuaternion};
use crate::retraction::{self, DeckElement};
use crate::roundlink::OrientedRoundHopfLink;
use crate::sample;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

fn outcome(name: &'static str, result: std::result::Result<String, String>) -> CheckResult {
    match result {
        Ok(detail) => CheckResult::pass(name, detail),
        Err(detail) => CheckResult::fail(name, detail),
    }
}

/// Motion-group check: the three deck-loop holonomies square to -1,
/// anticommute, and generate a group of order exactly 8.
pub fn check_motion_group(loop_samples: usize) -> CheckResult {
    let name = "motion-group-order-8";
    let run = || -> std::result::Result<String, String> {
        let tol = 1e-6;
        let mut holonomies = Vec::new();
        for g in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS] {
            let loop_links = fixtures::deck_loop(g, loop_samples);
            let h = retraction::loop_holonomy(&loop_links)
                .map_err(|e| format!("holonomy of {g:?} failed: {e}"))?;
            holonomies.push(h);
        }
        let minus_one = -UnitQuaternion::one();
        for (g, h) in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS]
            .iter()
            .zip(&holonomies)
        {
            let sq = *h * *h;
            if sq.distance(&minus_one) > tol {
                return Err(format!(
                    "h({g:?})^2 != -1 (err {})",
                    sq.distance(&minus_one)
                ));
            }
        }
        let (ha, hs, has) = (holonomies[0], holonomies[1], holonomies[2]);
        if (ha * hs).distance(&-(hs * ha)) > tol {
            return Err("h_alpha and h_s do not anticommute".into());
        }
        let prod = ha * hs;
        if prod.distance(&has) > tol && prod.distance(&-has) > tol {
            return Err("h_alpha h_s != ±h_alphas".into());
        }
        let group = QuaternionSubgroup::generate(&[ha, hs, has], 64)
            .map_err(|e| format!("holonomies do not close into a group: {e}"))?;
        if group.len() != 8 {
            return Err(format!("generated group has order {}", group.len()));
        }
        Ok(format!(
            "holonomies generate a group of order 8 from {loop_samples}-sample loops"
        ))
    };
    outcome(name, run())
}

/// Quotient-coordinate check: the canonical prism point is bitwise
/// invariant under all four deck elements, and the standard link maps
/// to (1+k)/√2.
pub fn check_quotient_invariance(seed: u64, n: usize) -> CheckResult {
    let name = "prism-point-quotient-invariance";
    let run = || -> std::result::Result<String, String> {
        let base = retraction::canonical_prism_point(&fixtures::basepoint_link())
            .map_err(|e| e.to_string())?;
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        let expected = UnitQuaternion::new(crate::quat::Quaternion::new(sq, 0.0, 0.0, sq)).unwrap();
        if base.quaternion().distance(&expected) > 1e-9 {
            return Err(format!(
                "standard link prism point {:?} != (1+k)/sqrt2",
                base.components()
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            let link = sample::random_link_pos(&mut rng);
            let p = retraction::canonical_prism_point(&link).map_err(|e| e.to_string())?;
            for g in DeckElement::ALL {
                let q = retraction::canonical_prism_point(&retraction::g_act(g, &link))
                    .map_err(|e| e.to_string())?;
                if p.components().map(f64::to_bits) != q.components().map(f64::to_bits) {
                    return Err(format!(
                        "sample {i}: prism point not bitwise invariant under {g:?}"
                    ));
                }
            }
        }
        Ok(format!("bitwise deck invariance on {n} links"))
    };
    outcome(name, run())
}

fn plane_of(c: &crate::roundlink::RoundCircle) -> (Vector3<f64>, f64) {
    (c.normal(), c.plane_offset())
}

/// Retraction-contract check: stage-wise preserved quantities, the
/// normal-form conditions, and idempotence.
pub fn check_retraction_contract(seed: u64, n: usize) -> CheckResult {
    let name = "retraction-stage-contract";
    let tol = 1e-9;
    let run = || -> std::result::Result<String, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            let link = sample::random_link_pos(&mut rng);
            let err = |stage: &str, what: &str| format!("sample {i}, {stage}: {what}");

            let x0 = retraction::center_midpoint(&link).map_err(|e| err("x0", &e.to_string()))?;
            let arc0 = x0.arc_of_intersection().map_err(|e| e.to_string())?;
            if (arc0.midpoint - retraction::normal_form_midpoint()).norm() > tol {
                return Err(err("x0", "midpoint not centered"));
            }
            let t = x0.first().center() - link.first().center();
            if (x0.second().center() - link.second().center() - t).norm() > tol
                || (x0.first().normal() - link.first().normal()).norm() > tol
                || (x0.first().radius() - link.first().radius()).abs() > tol
            {
                return Err(err("x0", "not a pure translation"));
            }

            let x1 = retraction::orthogonalize(&x0).map_err(|e| err("x1", &e.to_string()))?;
            let arc1 = x1.arc_of_intersection().map_err(|e| e.to_string())?;
            let theta = x1.dihedral_angle().map_err(|e| e.to_string())?;
            if (theta - std::f64::consts::FRAC_PI_2).abs() > tol {
                return Err(err("x1", "dihedral angle not pi/2"));
            }
            if arc1.distance_to(&arc0) > tol {
                return Err(err("x1", "arc moved"));
            }
            if (x1.first().radius() - x0.first().radius()).abs() > tol
                || (x1.second().radius() - x0.second().radius()).abs() > tol
            {
                return Err(err("x1", "radii changed"));
            }

            let x2 = retraction::equalize_radii(&x1).map_err(|e| err("x2", &e.to_string()))?;
            let arc2 = x2.arc_of_intersection().map_err(|e| e.to_string())?;
            let rmax = x1.first().radius().max(x1.second().radius());
            if (x2.first().radius() - rmax).abs() > tol || (x2.second().radius() - rmax).abs() > tol
            {
                return Err(err("x2", "radii not equalized to the max"));
            }
            if arc2.distance_to(&arc1) > tol {
                return Err(err("x2", "arc moved"));
            }
            for (c2, c1) in [(x2.first(), x1.first()), (x2.second(), x1.second())] {
                let (n2, o2) = plane_of(c2);
                let (n1, o1) = plane_of(c1);
                if (n2 - n1).norm() > tol || (o2 - o1).abs() > tol {
                    return Err(err("x2", "a disc plane moved"));
                }
            }

            let x3 = retraction::normalize_radius(&x2).map_err(|e| err("x3", &e.to_string()))?;
            let arc3 = x3.arc_of_intersection().map_err(|e| e.to_string())?;
            if (x3.first().radius() - 1.0).abs() > tol || (x3.second().radius() - 1.0).abs() > tol {
                return Err(err("x3", "radii not normalized"));
            }
            if (arc3.midpoint - arc2.midpoint).norm() > tol {
                return Err(err("x3", "arc midpoint moved"));
            }
            if (arc3.direction() - arc2.direction()).norm() > tol {
                return Err(err("x3", "arc direction changed"));
            }
            // the arc rescales exactly by the radius factor about the midpoint
            let factor = 1.0 / rmax;
            if ((arc3.e1 - arc3.midpoint) - (arc2.e1 - arc2.midpoint) * factor).norm() > tol {
                return Err(err("x3", "arc did not rescale by 1/r about the midpoint"));
            }
            for (c3, c2) in [(x3.first(), x2.first()), (x3.second(), x2.second())] {
                let (n3, o3) = plane_of(c3);
                let (n2, o2) = plane_of(c2);
                if (n3 - n2).norm() > tol || (o3 - o2).abs() > tol {
                    return Err(err("x3", "a disc plane moved"));
                }
            }

            let x4 =
                retraction::center_arc_endpoints(&x3).map_err(|e| err("x4", &e.to_string()))?;
            let arc4 = x4.arc_of_intersection().map_err(|e| e.to_string())?;
            if (x4.first().radius() - 1.0).abs() > tol || (x4.second().radius() - 1.0).abs() > tol {
                return Err(err("x4", "radii changed"));
            }
            let theta4 = x4.dihedral_angle().map_err(|e| e.to_string())?;
            if (theta4 - std::f64::consts::FRAC_PI_2).abs() > tol {
                return Err(err("x4", "dihedral angle changed"));
            }
            if (arc4.midpoint - arc3.midpoint).norm() > tol {
                return Err(err("x4", "arc midpoint moved"));
            }

            retraction::check_normal_form(&x4, tol).map_err(|e| err("y", &e.to_string()))?;

            let y2 = retraction::retract_to_normal_form(&x4)
                .map_err(|e| err("idempotence", &e.to_string()))?;
            let close = (y2.first().center() - x4.first().center()).norm() <= tol
                && (y2.second().center() - x4.second().center()).norm() <= tol
                && (y2.first().normal() - x4.first().normal()).norm() <= tol
                && (y2.second().normal() - x4.second().normal()).norm() <= tol
                && (y2.first().radius() - x4.first().radius()).abs() <= tol
                && (y2.second().radius() - x4.second().radius()).abs() <= tol;
            if !close {
                return Err(err("idempotence", "second retraction moved the link"));
            }
        }
        Ok(format!("stage contracts hold on {n} links at 1e-9"))
    };
    outcome(name, run())
}

/// Linking-number check: the closed form, the Gauss sum and the signed
/// crossing count agree exactly on random links, the standard link and
/// its reversal.
pub fn check_linking_triple(seed: u64, n: usize, polygon: usize) -> CheckResult {
    let name = "linking-number-triple-agreement";
    let run = || -> std::result::Result<String, String> {
        let as_polyline = |c: &crate::roundlink::RoundCircle| -> Result<Polyline3> {
            Polyline3::new_closed(c.sample_points(polygon))
        };
        let check_one =
            |link: &OrientedRoundHopfLink, what: &str| -> std::result::Result<(), String> {
                let exact = link.linking_number().map_err(|e| e.to_string())?;
                let a = as_polyline(link.first()).map_err(|e| e.to_string())?;
                let b = as_polyline(link.second()).map_err(|e| e.to_string())?;
                let gauss = plgeom::gauss_linking_pl(&a, &b).map_err(|e| e.to_string())?;
                let crossings = plgeom::crossing_linking_pl(&a, &b).map_err(|e| e.to_string())?;
                if exact != gauss || exact != crossings {
                    return Err(format!(
                        "{what}: closed-form {exact}, gauss {gauss}, crossings {crossings}"
                    ));
                }
                Ok(())
            };

        let base = fixtures::basepoint_link();
        check_one(&base, "standard link")?;
        if base.linking_number().map_err(|e| e.to_string())? != 1 {
            return Err("standard link does not have linking number +1".into());
        }
        let reversed = OrientedRoundHopfLink::new(*base.first(), base.second().reversed())
            .map_err(|e| e.to_string())?;
        check_one(&reversed, "reversed standard link")?;
        if reversed.linking_number().map_err(|e| e.to_string())? != -1 {
            return Err("reversal does not flip the linking number".into());
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            let link = sample::random_link_any(&mut rng);
            check_one(&link, &format!("sample {i}"))?;
        }
        Ok(format!(
            "three routes agree exactly on {n} random links ({polygon}-gons)"
        ))
    };
    outcome(name, run())
}

/// Scheduling check: random signed chord diagrams run to the mixed
/// chord alone, with the innermost order a linear extension of
/// containment and disjoint schedule intervals.
pub fn check_scheduling(seed: u64, n: usize) -> CheckResult {
    let name = "innermost-first-scheduling";
    let run = || -> std::result::Result<String, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            let p = sample::random_pattern(&mut rng, 20, 10);
            let m = p.chords().len();
            let order = pattern::innermost_order(&p).map_err(|e| e.to_string())?;
            // brute-force oracle: closed region label sets (labels in the
            // region plus the chord's own endpoints), so containment is
            // exactly set inclusion
            let region: std::collections::BTreeMap<usize, std::collections::BTreeSet<usize>> = p
                .chords()
                .iter()
                .map(|c| {
                    let mut s: std::collections::BTreeSet<usize> =
                        p.region_labels(c.id).unwrap().into_iter().collect();
                    s.insert(c.endpoints.0);
                    s.insert(c.endpoints.1);
                    (c.id, s)
                })
                .collect();
            for (k, &a) in order.iter().enumerate() {
                for &b in order.iter().skip(k + 1) {
                    let (sa, sb) = (&region[&a], &region[&b]);
                    if sb.is_subset(sa) && sb != sa {
                        return Err(format!(
                            "sample {i}: order is not a linear extension of containment"
                        ));
                    }
                }
            }
            let out = pattern::run_schedule(&p).map_err(|e| e.to_string())?;
            if out.removed.len() != m
                || !out.final_pattern.chords().is_empty()
                || !out.final_pattern.circles().is_empty()
            {
                return Err(format!("sample {i}: schedule did not clean the pattern"));
            }
            for w in out.schedule.entries.windows(2) {
                if w[0].s_end >= w[1].s_start {
                    return Err(format!("sample {i}: schedule intervals overlap"));
                }
            }
        }
        Ok(format!("{n} random diagrams scheduled and cleaned"))
    };
    outcome(name, run())
}

/// Pattern-extraction check: the standard scene yields one mixed chord
/// with signs (+,-) and no circles, identically at three resolutions.
pub fn check_pattern_extraction() -> CheckResult {
    let name = "marching-pattern-extraction";
    let run = || -> std::result::Result<String, String> {
        let mut codes = Vec::new();
        for res in [32usize, 64, 128] {
            let scene = fixtures::basepoint_scene(res);
            let (_, p, _) =
                plgeom::scene_pipeline(&scene).map_err(|e| format!("resolution {res}: {e}"))?;
            if res == 64 {
                if !p.chords().is_empty() {
                    return Err(format!("resolution 64: extra chords {:?}", p.chords()));
                }
                if !p.circles().is_empty() {
                    return Err("resolution 64: unexpected circles".into());
                }
                let signs: Vec<_> = p.points().iter().map(|(_, s)| *s).collect();
                if signs.len() != 2 || signs[0] == signs[1] {
                    return Err("resolution 64: mixed chord signs wrong".into());
                }
            }
            codes.push(p.canonical_code());
        }
        if codes[0] != codes[1] || codes[1] != codes[2] {
            return Err(format!("diagrams differ across resolutions: {codes:?}"));
        }
        Ok("one (+,-) chord at resolutions 32/64/128".into())
    };
    outcome(name, run())
}

fn projector(p: &grassmann::Plane2in4) -> Matrix4<f64> {
    let x = quaternion_to_vector(&p.x());
    let y = quaternion_to_vector(&p.y());
    x * x.transpose() + y * y.transpose()
}

/// ξ-map check: image properties, invariances, the exact antipodal law,
/// empirical injectivity, and quotient constancy of the canonical
/// coordinate.
pub fn check_xi_suite(seed: u64, n: usize) -> CheckResult {
    let name = "xi-map-suite";
    let run = || -> std::result::Result<String, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // basepoint value against the symbolic oracle
        let (v, _) = fixtures::basepoint_great_planes();
        let (m, nu_v) = xi(&v).map_err(|e| e.to_string())?;
        if (m.imag() - Vector3::new(-1.0, 0.0, 0.0)).norm() > 1e-12
            || (nu_v.imag() - Vector3::new(1.0, 0.0, 0.0)).norm() > 1e-12
        {
            return Err("xi(span(1,i)) != (-i, i)".into());
        }

        for i in 0..n {
            let p = sample::random_plane(&mut rng);
            let (mu_p, nu_p) = xi(&p).map_err(|e| e.to_string())?;
            for (s, what) in [(mu_p, "mu"), (nu_p, "nu")] {
                if s.quaternion().w.abs() > 1e-10 {
                    return Err(format!("sample {i}: {what} not purely imaginary"));
                }
                if (s.quaternion().norm() - 1.0).abs() > 1e-10 {
                    return Err(format!("sample {i}: {what} not unit"));
                }
            }

            // mu is invariant under simultaneous right multiplication
            let rotated = p.right_multiply_exp_i(0.7);
            let mu_r = grassmann::mu(&rotated.x(), &rotated.y()).map_err(|e| e.to_string())?;
            if mu_p.distance(&mu_r) > 1e-9 {
                return Err(format!("sample {i}: mu moved under right multiplication"));
            }
            // xi is invariant under in-plane basis rotation
            let basis_rotated = p.rotate_basis(0.3);
            let (mu_b, nu_b) = xi(&basis_rotated).map_err(|e| e.to_string())?;
            if mu_p.distance(&mu_b) > 1e-9 || nu_p.distance(&nu_b) > 1e-9 {
                return Err(format!("sample {i}: xi moved under basis rotation"));
            }
            // exact antipodal law
            let (mu_a, nu_a) = xi(&p.reverse_y()).map_err(|e| e.to_string())?;
            if mu_a.quaternion().components() != (-mu_p.quaternion()).components()
                || nu_a.quaternion().components() != (-nu_p.quaternion()).components()
            {
                return Err(format!("sample {i}: antipodal law not exact"));
            }

            // empirical injectivity on a random pair
            let q = sample::random_plane(&mut rng);
            if (projector(&p) - projector(&q)).norm() > 1e-3 {
                let (mu_q, nu_q) = xi(&q).map_err(|e| e.to_string())?;
                let d = mu_p.distance(&mu_q).max(nu_p.distance(&nu_q));
                if d <= 1e-6 {
                    return Err(format!("sample {i}: distinct planes with equal xi images"));
                }
            }
        }

        // canonical coordinate constant on quotient orbits
        for i in 0..(n / 10).max(50) {
            let p = sample::random_plane(&mut rng);
            let c = canonical_great_hopf(&p).map_err(|e| e.to_string())?;
            for variant in [
                p.reverse_x(),
                p.reverse_y(),
                p.rotate_basis(2.2),
                orthogonal_complement(&p),
            ] {
                let cv = canonical_great_hopf(&variant).map_err(|e| e.to_string())?;
                if c.distance(&cv) > 1e-8 {
                    return Err(format!("sample {i}: canonical coordinate not invariant"));
                }
            }
        }
        Ok(format!("xi properties hold on {n} planes"))
    };
    outcome(name, run())
}

/// Double-cover check: lifting a full turn about the x-axis ends at -1,
/// two full turns end at +1.
pub fn check_double_cover(samples: usize) -> CheckResult {
    let name = "double-cover-holonomy";
    let run = || -> std::result::Result<String, String> {
        let path = |turns: f64, k: usize| -> Vec<Rotation3> {
            (0..=k)
                .map(|s| {
                    Rotation3::from_axis_angle(
                        Vector3::x(),
                        2.0 * std::f64::consts::PI * turns * (s as f64) / (k as f64),
                    )
                    .unwrap()
                })
                .collect()
        };
        let once =
            lift_path(&path(1.0, samples), &UnitQuaternion::one()).map_err(|e| e.to_string())?;
        let end = once.last().unwrap();
        if end.distance(&-UnitQuaternion::one()) > 1e-9 {
            return Err(format!("single turn lifted to {:?}", end.components()));
        }
        let twice = lift_path(&path(2.0, 2 * samples), &UnitQuaternion::one())
            .map_err(|e| e.to_string())?;
        let end = twice.last().unwrap();
        if end.distance(&UnitQuaternion::one()) > 1e-9 {
            return Err(format!("double turn lifted to {:?}", end.components()));
        }
        // and the lift inverts the covering projection on random samples
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        for _ in 0..10_000 {
            let q = sample::random_unit_quaternion(&mut rng);
            let rot = crate::quat::conjugation_action(&q);
            let (p, pn) = lift_rotation(&rot).map_err(|e| e.to_string())?;
            if p.distance(&q) > 1e-8 && pn.distance(&q) > 1e-8 {
                return Err("lift_rotation missed the preimage pair".into());
            }
        }
        Ok("deck element of one full turn is -1; two turns close up".into())
    };
    outcome(name, run())
}

/// Verification plan: per-check sample counts.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub loop_samples: usize,
    pub quotient_links: usize,
    pub retraction_links: usize,
    pub linking_links: usize,
    pub linking_polygon: usize,
    pub scheduling_patterns: usize,
    pub xi_planes: usize,
    pub cover_samples: usize,
}

impl VerifyConfig {
    /// Reference sample sizes used by the acceptance suite.
    pub fn reference(seed: u64) -> Self {
        Self {
            seed,
            loop_samples: 1000,
            quotient_links: 10_000,
            retraction_links: 10_000,
            linking_links: 1000,
            linking_polygon: 64,
            scheduling_patterns: 500,
            xi_planes: 10_000,
            cover_samples: 1000,
        }
    }

    /// Scales the per-check sample counts by `n / 100` (percent),
    /// keeping every count at least 1.
    pub fn scaled(seed: u64, percent: usize) -> Self {
        let r = Self::reference(seed);
        let s = |x: usize| (x * percent / 100).max(1);
        Self {
            seed,
            loop_samples: s(r.loop_samples).max(64),
            quotient_links: s(r.quotient_links),
            retraction_links: s(r.retraction_links),
            linking_links: s(r.linking_links),
            linking_polygon: r.linking_polygon,
            scheduling_patterns: s(r.scheduling_patterns),
            xi_planes: s(r.xi_planes),
            cover_samples: s(r.cover_samples).max(64),
        }
    }
}

/// Runs every verification check.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        check_motion_group(cfg.loop_samples),
        check_quotient_invariance(cfg.seed, cfg.quotient_links),
        check_retraction_contract(cfg.seed.wrapping_add(1), cfg.retraction_links),
        check_linking_triple(
            cfg.seed.wrapping_add(2),
            cfg.linking_links,
            cfg.linking_polygon,
        ),
        check_scheduling(cfg.seed.wrapping_add(3), cfg.scheduling_patterns),
        check_pattern_extraction(),
        check_xi_suite(cfg.seed.wrapping_add(4), cfg.xi_planes),
        check_double_cover(cfg.cover_samples),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scale_verification_passes() {
        let cfg = VerifyConfig::scaled(7, 2);
        for check in run_all(&cfg) {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }
}
