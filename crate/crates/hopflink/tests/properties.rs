//! Property-based tests for the core invariants.

use proptest::prelude::*;

use hopflink::grassmann::Stereographic;
use hopflink::pattern;
use hopflink::quat::{
    conjugation_action, lift_rotation, orbit_and_canonical, Quaternion, QuaternionSubgroup,
    UnitQuaternion,
};
use hopflink::roundlink::canonicalize_sign;
use hopflink::{io as wire, sample};
use nalgebra::{Vector3, Vector4};

fn unit_quaternion() -> impl Strategy<Value = UnitQuaternion> {
    let c = -1.0_f64..1.0_f64;
    (c.clone(), c.clone(), c.clone(), c).prop_filter_map("nonzero quaternion", |(w, x, y, z)| {
        let q = Quaternion::new(w, x, y, z);
        (q.norm() > 0.1).then(|| UnitQuaternion::normalize(q).unwrap())
    })
}

proptest! {
    /// Conjugation is a homomorphism into SO(3) and kills only ±1.
    #[test]
    fn conjugation_homomorphism(p in unit_quaternion(), q in unit_quaternion()) {
        let lhs = conjugation_action(&(p * q));
        let rhs = conjugation_action(&p) * conjugation_action(&q);
        prop_assert!(lhs.distance(&rhs) < 1e-8);
        prop_assert!(conjugation_action(&-p).distance(&conjugation_action(&p)) < 1e-14);
    }

    /// Lifting inverts the covering projection up to sign.
    #[test]
    fn lift_inverts_the_cover(q in unit_quaternion()) {
        let (a, b) = lift_rotation(&conjugation_action(&q)).unwrap();
        prop_assert!(a.distance(&q) < 1e-8 || b.distance(&q) < 1e-8);
        prop_assert!((a.dot(&b) + 1.0).abs() < 1e-12);
    }

    /// The orbit representative is constant along the orbit, and the
    /// orbit size divides the group order.
    #[test]
    fn orbit_canonicalization_is_invariant(q in unit_quaternion()) {
        let group = QuaternionSubgroup::q8();
        let (orbit, canonical) = orbit_and_canonical(&q, &group);
        prop_assert_eq!(group.len() % orbit.len(), 0);
        for e in &orbit {
            let (_, c) = orbit_and_canonical(e, &group);
            prop_assert!(c.distance(&canonical) < 1e-9);
        }
    }

    /// Sign canonicalization is an idempotent section of the antipodal
    /// quotient.
    #[test]
    fn sign_canonicalization_section(
        x in -1.0_f64..1.0,
        y in -1.0_f64..1.0,
        z in -1.0_f64..1.0,
    ) {
        let v = Vector3::new(x, y, z);
        prop_assume!(v.norm() > 1e-3);
        let c = canonicalize_sign(v, 1e-9);
        let c_neg = canonicalize_sign(-v, 1e-9);
        prop_assert_eq!(c, c_neg);
        prop_assert_eq!(canonicalize_sign(c, 1e-9), c);
    }

    /// Stereographic projection round-trips points of S³ off the pole.
    #[test]
    fn stereographic_round_trip(
        a in -1.0_f64..1.0,
        b in -1.0_f64..1.0,
        c in -1.0_f64..1.0,
        d in -1.0_f64..1.0,
    ) {
        let v = Vector4::new(a, b, c, d);
        prop_assume!(v.norm() > 0.1);
        let p = v.normalize();
        let proj = Stereographic::standard();
        prop_assume!((p - proj.pole()).norm() > 1e-3);
        let back = proj.unproject(&proj.project(&p).unwrap());
        prop_assert!((back - p).norm() < 1e-9);
    }

    /// Random links: the validated linking number is ±1 and flips under
    /// orientation reversal; the wire format round-trips byte-exactly.
    #[test]
    fn link_wire_format_round_trip(seed in 0_u64..1_000_000) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let link = sample::random_link_any(&mut rng);
        let lk = link.linking_number().unwrap();
        prop_assert_eq!(lk.abs(), 1);
        let json = wire::link_to_json(&link);
        let parsed = wire::parse_link(&json).unwrap();
        prop_assert_eq!(wire::link_to_json(&parsed), json);
    }

    /// Random diagrams: the schedule is disjoint, ordered, and cleans
    /// the pattern; the wire format round-trips byte-exactly.
    #[test]
    fn pattern_schedule_properties(seed in 0_u64..1_000_000) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let p = sample::random_pattern(&mut rng, 16, 6);
        let json = wire::pattern_to_json(&p);
        let parsed = wire::parse_pattern(&json).unwrap();
        prop_assert_eq!(wire::pattern_to_json(&parsed), json);

        let out = pattern::run_schedule(&p).unwrap();
        prop_assert!(out.final_pattern.chords().is_empty());
        prop_assert!(out.final_pattern.circles().is_empty());
        for w in out.schedule.entries.windows(2) {
            prop_assert!(w[0].s_end < w[1].s_start);
        }
    }
}
