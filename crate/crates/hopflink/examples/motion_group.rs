//! The motion group of the Hopf link, read off numerically.
//!
//! Rotating the standard link by π about the right axes carries it back
//! to itself up to orientation reversal (`α`), label exchange (`s`), or
//! both. Lifting each loop of frames through the double cover produces
//! holonomy quaternions; together they generate a nonabelian group of
//! order 8 with `h² = -1` for every non-central element — the
//! quaternion group.
//!
//! ```bash
//! cargo run --example motion_group
//! ```

use hopflink::fixtures::deck_loop;
use hopflink::quat::{QuaternionSubgroup, UnitQuaternion};
use hopflink::retraction::{loop_holonomy, DeckElement};

fn main() {
    let samples = 1024;
    let mut holonomies = Vec::new();
    for g in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS] {
        let h = loop_holonomy(&deck_loop(g, samples)).expect("loop lifts");
        println!("holonomy of the {g:?}-loop: {:?}", h.components());
        holonomies.push(h);
    }

    let minus_one = -UnitQuaternion::one();
    for (g, h) in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS]
        .iter()
        .zip(&holonomies)
    {
        let sq = *h * *h;
        println!("h({g:?})^2 = -1?  residual {:.2e}", sq.distance(&minus_one));
    }

    let (ha, hs) = (holonomies[0], holonomies[1]);
    println!(
        "anticommutation |h_a h_s + h_s h_a| = {:.2e}",
        (ha * hs).distance(&-(hs * ha))
    );

    let group = QuaternionSubgroup::generate(&holonomies, 64).expect("holonomies close up");
    println!("generated group order: {}", group.len());
    for e in group.elements() {
        println!("  {:?}", e.components());
    }
}
