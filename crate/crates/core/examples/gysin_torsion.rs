//! Unit tangent bundles through the Gysin sequence: the top energy surface
//! `T_1(S^2 x S^2)` with its `Z/4`, and two classical checks over `S^2`.
//!
//!     cargo run --example gysin_torsion

use pendulum_topology::homology::{kunneth, HomologyProfile};
use pendulum_topology::sequences::{unit_tangent_integer_homology, SequenceError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s2 = HomologyProfile::sphere(2);
    let q = kunneth(&s2, &s2)?;
    let m4 = unit_tangent_integer_homology(&q, 4)?;
    println!("T_1(S^2 x S^2): {}", m4.profile);
    println!("T_1(S^2) = RP^3: {}", unit_tangent_integer_homology(&s2, 2)?.profile);
    println!("circle bundle over S^2 with e = 1 (S^3): {}", unit_tangent_integer_homology(&s2, 1)?.profile);
    match unit_tangent_integer_homology(&s2, 0) {
        Err(SequenceError::ZeroEuler { free_ranks }) => println!("e = 0: only free ranks {free_ranks}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
