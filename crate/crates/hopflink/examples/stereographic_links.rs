//! From great circles in S³ to polygonal links in ℝ³: stereographic
//! projection feeds the PL linking oracle.
//!
//! ```bash
//! cargo run --example stereographic_links
//! ```

use nalgebra::Vector4;

use hopflink::fixtures;
use hopflink::grassmann::{great_circle_points, orthogonal_complement, Stereographic};
use hopflink::plgeom::{gauss_linking_pl, Polyline3};

fn main() {
    let (v, w) = fixtures::basepoint_great_planes();

    // project from a pole away from both circles
    let proj = Stereographic::new(Vector4::new(0.5, 0.5, 0.5, 0.5)).unwrap();
    let project = |plane| {
        let points = great_circle_points(plane, 96).unwrap();
        Polyline3::new_closed(points.iter().map(|p| proj.project(p).unwrap()).collect()).unwrap()
    };

    let a = project(&v);
    let b = project(&w);
    println!(
        "projected standard great-circle pair links with lk = {:+}",
        gauss_linking_pl(&a, &b).unwrap()
    );

    // the complement of any plane links it once
    let c = orthogonal_complement(&v);
    let b2 = project(&c);
    println!(
        "a plane against its orthogonal complement: lk = {:+}",
        gauss_linking_pl(&a, &b2).unwrap()
    );

    // round trip through the projection
    let p = Vector4::new(0.0, 0.6, 0.8, 0.0);
    let back = proj.unproject(&proj.project(&p).unwrap());
    println!("projection round trip residual: {:.2e}", (back - p).norm());
}
