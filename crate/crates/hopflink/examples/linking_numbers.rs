//! Three routes to the linking number of round circles: the closed-form
//! crossing count through a flat disc, the Gauss double sum over
//! polygonal samples, and signed crossings in a generic projection.
//!
//! ```bash
//! cargo run --example linking_numbers
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopflink::fixtures;
use hopflink::plgeom::{crossing_linking_pl, gauss_linking_pl, gauss_linking_sum, Polyline3};
use hopflink::roundlink::RoundCircle;
use hopflink::sample;

fn polyline(c: &RoundCircle, n: usize) -> Polyline3 {
    Polyline3::new_closed(c.sample_points(n)).expect("round circles sample to embedded polygons")
}

fn main() {
    let base = fixtures::basepoint_link();
    let a = polyline(base.first(), 64);
    let b = polyline(base.second(), 64);
    println!("standard link:");
    println!("  closed form      {:+}", base.linking_number().unwrap());
    println!(
        "  Gauss sum        {:+}  (raw {:.6})",
        gauss_linking_pl(&a, &b).unwrap(),
        gauss_linking_sum(&a, &b).unwrap()
    );
    println!(
        "  crossing count   {:+}",
        crossing_linking_pl(&a, &b).unwrap()
    );

    let reversed = b.reversed();
    println!(
        "after reversing one orientation: Gauss {:+}, crossings {:+}",
        gauss_linking_pl(&a, &reversed).unwrap(),
        crossing_linking_pl(&a, &reversed).unwrap()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    println!("random links (closed form / Gauss / crossings):");
    for _ in 0..5 {
        let link = sample::random_link_any(&mut rng);
        let pa = polyline(link.first(), 64);
        let pb = polyline(link.second(), 64);
        println!(
            "  {:+} / {:+} / {:+}",
            link.linking_number().unwrap(),
            gauss_linking_pl(&pa, &pb).unwrap(),
            crossing_linking_pl(&pa, &pb).unwrap()
        );
    }
}
