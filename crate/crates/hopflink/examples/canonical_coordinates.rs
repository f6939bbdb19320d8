//! Canonical prism-manifold coordinates of round Hopf links.
//!
//! Every round Hopf link determines a point of S³ up to the order-8
//! group generated by the deck lifts; the canonical representative is a
//! complete invariant of the unoriented, unlabelled configuration.
//!
//! ```bash
//! cargo run --example canonical_coordinates
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopflink::fixtures;
use hopflink::retraction::{canonical_prism_point, g_act, DeckElement};
use hopflink::sample;

fn main() {
    let base = fixtures::basepoint_link();
    let p = canonical_prism_point(&base).expect("standard link retracts");
    println!("standard link        -> {:?}", p.components());
    println!("                        (expected (1+k)/sqrt2 = [0.70711, 0, 0, 0.70711])");

    // the coordinate does not see orientations or labels
    for g in [DeckElement::Alpha, DeckElement::S, DeckElement::AlphaS] {
        let q = canonical_prism_point(&g_act(g, &base)).expect("deck image retracts");
        println!("after {:<12}     -> {:?}", format!("{g:?}"), q.components());
    }

    // nor rigid translations
    let moved = base.translated(&nalgebra::Vector3::new(-3.0, 11.0, 0.25));
    let q = canonical_prism_point(&moved).expect("translated link retracts");
    println!("after a translation  -> {:?}", q.components());

    // a random link lands somewhere else in S^3/Q8
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let link = sample::random_link_pos(&mut rng);
    let q = canonical_prism_point(&link).expect("random link retracts");
    println!("a random Hopf link   -> {:?}", q.components());
}
