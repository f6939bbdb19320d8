//! Coordinates for great Hopf links in S³: the ξ = (μ, ν) map on
//! oriented 2-planes, its invariances, and the canonical ℝP² × ℝP²
//! coordinate of the underlying unoriented configuration.
//!
//! ```bash
//! cargo run --example xi_coordinates
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopflink::fixtures;
use hopflink::grassmann::{canonical_great_hopf, orthogonal_complement, xi};
use hopflink::sample;

fn main() {
    let coords = |v: nalgebra::Vector3<f64>| <[f64; 3]>::from(v);
    let (v, _) = fixtures::basepoint_great_planes();
    let (m, n) = xi(&v).unwrap();
    println!(
        "xi(span(1, i)) = ({:?}, {:?})",
        coords(m.imag()),
        coords(n.imag())
    );

    let c = orthogonal_complement(&v);
    let (mc, nc) = xi(&c).unwrap();
    println!(
        "xi(complement) = ({:?}, {:?})   (mu fixed, nu negated)",
        coords(mc.imag()),
        coords(nc.imag())
    );

    let canon = canonical_great_hopf(&v).unwrap();
    println!(
        "canonical coordinate: ({:?}, {:?})",
        coords(canon.first.imag()),
        coords(canon.second.imag())
    );

    // the canonical coordinate is blind to orientation, basis and
    // complement choices
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = sample::random_plane(&mut rng);
    let reference = canonical_great_hopf(&p).unwrap();
    println!(
        "random plane, canonical = ({:?}, {:?})",
        coords(reference.first.imag()),
        coords(reference.second.imag())
    );
    for (what, variant) in [
        ("reversed x", p.reverse_x()),
        ("reversed y", p.reverse_y()),
        ("basis rotated", p.rotate_basis(1.234)),
        ("complement", orthogonal_complement(&p)),
    ] {
        let v = canonical_great_hopf(&variant).unwrap();
        println!(
            "  {what:14} distance to reference = {:.2e}",
            reference.distance(&v)
        );
    }
}
