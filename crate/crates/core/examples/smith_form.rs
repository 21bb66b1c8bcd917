//! Smith normal form of an integer matrix, and integer homology with
//! torsion for the six-vertex projective plane.
//!
//!     cargo run --example smith_form

use pendulum_topology::complexes::SimplicialComplex;
use pendulum_topology::homology::{smith_normal_form, Coefficients, IntegerMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = IntegerMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&a);
    println!("divisors {:?}", s.divisors.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("U A V == D: {}", s.left.mul(&a).mul(&s.right) == s.diagonal());

    let rp2 = SimplicialComplex::new(
        6,
        vec![
            vec![0, 1, 3],
            vec![0, 1, 5],
            vec![0, 2, 4],
            vec![0, 2, 5],
            vec![0, 3, 4],
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 4, 5],
            vec![2, 3, 5],
            vec![3, 4, 5],
        ],
    )?;
    println!("RP^2 f-vector {:?}", rp2.f_vector());
    println!("H(RP^2; Z) = {}", rp2.homology(Coefficients::Integers)?);
    println!("H(RP^2; Q) ranks {:?}", rp2.homology(Coefficients::Rationals)?.betti_numbers());
    Ok(())
}
