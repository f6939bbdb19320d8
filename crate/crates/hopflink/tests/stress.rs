//! Stress tests far outside the standard sampling envelope.

use hopflink::retraction::{canonical_prism_point, g_act, DeckElement};
use hopflink::roundlink::{validate_hopf, RoundCircle};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn harsh_link(rng: &mut ChaCha8Rng) -> Option<hopflink::roundlink::OrientedRoundHopfLink> {
    let origin = Vector3::new(
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    );
    let dir: Vector3<f64> = loop {
        let v = Vector3::new(
            rng.gen_range(-1.0_f64..1.0),
            rng.gen_range(-1.0_f64..1.0),
            rng.gen_range(-1.0_f64..1.0),
        );
        if v.norm() > 0.1 {
            break v.normalize();
        }
    };
    let seed = if dir.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let u = dir.cross(&seed).normalize();
    let w = dir.cross(&u);
    let phi1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let theta = rng.gen_range(0.02..std::f64::consts::PI - 0.02);
    let n1 = u * phi1.cos() + w * phi1.sin();
    let n2 = u * (phi1 + theta).cos() + w * (phi1 + theta).sin();
    let r1 = (rng.gen_range(0.05_f64.ln()..10.0_f64.ln())).exp();
    let r2 = (rng.gen_range(0.05_f64.ln()..10.0_f64.ln())).exp();
    let d1 = rng.gen_range(0.0..0.98 * r1);
    let d2 = rng.gen_range(0.0..0.98 * r2);
    let h1 = (r1 * r1 - d1 * d1).sqrt();
    let h2 = (r2 * r2 - d2 * d2).sqrt();
    let low = (-h1).max(h1 - 2.0 * h2);
    let a2 = low + (h1 - low) * rng.gen_range(0.005..0.995);
    let t2 = a2 + h2;
    let s1: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let s2: f64 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let p1 = origin + n1.cross(&dir) * (s1 * d1);
    let p2 = origin + dir * t2 + n2.cross(&dir) * (s2 * d2);
    let c1 = RoundCircle::new(p1, r1, n1).ok()?;
    let c2 = RoundCircle::new(p2, r2, n2).ok()?;
    match hopflink::roundlink::linking_number_round(&c1, &c2) {
        Ok(1) => validate_hopf(c1, c2).ok(),
        Ok(-1) => validate_hopf(c1, c2.reversed()).ok(),
        _ => None,
    }
}

/// The retraction and the canonical coordinate must survive far
/// outside the comfortable sampling ranges: tiny and huge radii,
/// nearly parallel discs, chords hugging the circle boundary, and
/// minimal interleave slack.
#[test]
fn extreme_links_retract_with_invariant_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let mut retracted = 0usize;
    for i in 0..2000 {
        let Some(link) = harsh_link(&mut rng) else {
            continue;
        };
        let p = canonical_prism_point(&link)
            .unwrap_or_else(|e| panic!("sample {i} failed to retract: {e}"));
        retracted += 1;
        for g in DeckElement::ALL {
            let q = canonical_prism_point(&g_act(g, &link)).unwrap();
            assert_eq!(
                p.components().map(f64::to_bits),
                q.components().map(f64::to_bits),
                "sample {i}: coordinate moved under {g:?}"
            );
        }
    }
    assert!(
        retracted > 1000,
        "generator starved: only {retracted} links"
    );
}
