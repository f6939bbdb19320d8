//! Extracting signed chord diagrams from disc/ellipsoid scenes.
//!
//! The flat disc of the standard link meets every ellipsoid over the
//! other component in a single arc running from the upper to the lower
//! hemisphere. Deforming the disc adds same-sign chords (a finger of
//! the boundary pushed through the top) or circles (an interior bubble
//! poked through the surface).
//!
//! ```bash
//! cargo run --example intersection_patterns
//! ```

use hopflink::fixtures;
use hopflink::plgeom::scene_pipeline;

fn main() {
    for (name, scene) in [
        ("basepoint", fixtures::basepoint_scene(64)),
        ("finger", fixtures::finger_scene(96)),
        ("bubble", fixtures::bubble_scene(96)),
    ] {
        let (h, pattern, outcome) = scene_pipeline(&scene).expect("scene is generic");
        println!("{name:10} transverse height {h:.4}");
        println!("  boundary points: {}", pattern.points().len());
        println!("  chords besides the mixed one: {}", pattern.chords().len());
        println!("  circles: {}", pattern.circles().len());
        println!("  diagram code: {}", pattern.canonical_code());
        println!(
            "  schedule removes {} chord(s), clears {} circle(s), then: {}",
            outcome.removed.len(),
            outcome.cleared_circles,
            outcome.directive
        );
    }
}
