//! Watching the five retraction stages bring a link into normal form.
//!
//! ```bash
//! cargo run --example retraction_stages
//! ```

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopflink::retraction::stage_trace;
use hopflink::sample;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let link = sample::random_link_pos(&mut rng);
    println!(
        "input: radii ({:.3}, {:.3}), dihedral {:.4} rad",
        link.first().radius(),
        link.second().radius(),
        link.dihedral_angle().unwrap()
    );

    for record in stage_trace(&link).expect("pipeline runs") {
        let arc = record.link.arc_of_intersection().unwrap();
        let m = arc.midpoint;
        println!(
            "{:22} midpoint ({:+.4}, {:+.4}, {:+.4})  arc length {:.4}  theta {:.6}  radii ({:.4}, {:.4})",
            record.stage,
            m.x,
            m.y,
            m.z,
            arc.length(),
            record.link.dihedral_angle().unwrap(),
            record.link.first().radius(),
            record.link.second().radius(),
        );
        if let Some(frame) = record.frame {
            println!("frame columns:");
            for (name, col) in [("n1", frame.n1()), ("v", frame.v()), ("n2", frame.n2())] {
                println!("  {name} = ({:+.6}, {:+.6}, {:+.6})", col.x, col.y, col.z);
            }
            let dist_to_centers = |p: Vector3<f64>, c: Vector3<f64>| (p - c).norm();
            println!(
                "arc endpoints sit on the centers: ({:.2e}, {:.2e})",
                dist_to_centers(arc.e1, record.link.first().center()),
                dist_to_centers(arc.e2, record.link.second().center()),
            );
        }
    }
}
