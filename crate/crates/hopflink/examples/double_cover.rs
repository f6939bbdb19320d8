//! Path lifting through the double cover SU(2) → SO(3): one full turn
//! about an axis lifts to -1, two full turns close up.
//!
//! ```bash
//! cargo run --example double_cover
//! ```

use nalgebra::Vector3;

use hopflink::quat::{lift_path, Rotation3, UnitQuaternion};

fn x_turn_path(turns: f64, samples: usize) -> Vec<Rotation3> {
    (0..=samples)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * turns * (k as f64) / (samples as f64);
            Rotation3::from_axis_angle(Vector3::x(), angle).expect("unit axis")
        })
        .collect()
}

fn main() {
    for turns in [0.5, 1.0, 2.0] {
        let path = x_turn_path(turns, 512);
        let lifted = lift_path(&path, &UnitQuaternion::one()).expect("path lifts");
        let end = lifted.last().unwrap();
        println!("{turns} turn(s) about x lift to {:?}", end.components());
    }
    println!("(1/2 turn: the lift is i; 1 turn: -1, the deck element; 2 turns: back to 1)");
}
