//! Innermost-first removal schedules for signed chord diagrams.
//!
//! ```bash
//! cargo run --example removal_schedule
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopflink::pattern::{innermost_order, nesting_forest, run_schedule};
use hopflink::sample;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let pattern = sample::random_pattern(&mut rng, 12, 4);
    println!("diagram: {}", pattern.canonical_code());
    println!(
        "{} chords besides the mixed one, {} circles",
        pattern.chords().len(),
        pattern.circles().len()
    );

    let forest = nesting_forest(&pattern).expect("valid pattern");
    for chord in pattern.chords() {
        match forest.parent[&chord.id] {
            Some(parent) => println!("  chord {} nests inside chord {parent}", chord.id),
            None => println!("  chord {} is outermost", chord.id),
        }
    }
    println!(
        "innermost-first order: {:?}",
        innermost_order(&pattern).unwrap()
    );

    let outcome = run_schedule(&pattern).expect("schedule runs");
    for entry in &outcome.schedule.entries {
        println!(
            "  remove chord {} during [{:.4}, {:.4}]",
            entry.chord, entry.s_start, entry.s_end
        );
    }
    println!(
        "final pattern: {} (then: {})",
        outcome.final_pattern.canonical_code(),
        outcome.directive
    );
}
