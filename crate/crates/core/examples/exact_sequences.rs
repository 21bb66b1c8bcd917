//! The exact-sequence route to the energy surfaces: relative Gysin sequence
//! from `(U, ∂U)` to `(M, π^{-1}∂U)`, then the pair sequence with the
//! boundary isomorphism and Poincaré duality. Prints each deduction.
//!
//!     cargo run --example exact_sequences

use pendulum_topology::homology::HomologyProfile;
use pendulum_topology::mechanics::RegimeTag;
use pendulum_topology::sequences::{
    boundary_profile_for_band, energy_surface_from_region, solve_exact, ExactSequenceSpec, Term,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ExactSequenceSpec::new(vec![Term::unknown("U"), Term::known("V", 2), Term::known("W", 1)]);
    let solution = solve_exact(&spec)?;
    println!("0 -> U -> Q^2 -> Q -> 0 forces dim U = {:?}", solution.dims[0]);

    for (band, pair) in [
        (RegimeTag::M1, [0, 0, 0, 0, 1]),
        (RegimeTag::M2, [0, 0, 1, 0, 1]),
        (RegimeTag::M3, [0, 0, 2, 0, 1]),
    ] {
        let boundary = boundary_profile_for_band(band).expect("bounded band");
        let derived = energy_surface_from_region(&HomologyProfile::from_betti(&pair), &boundary)?;
        println!("\n{band}: H(U, ∂U) ranks {pair:?}, ∂U side {boundary}");
        for d in derived.trace.iter().filter(|d| d.quantity.contains("(M)") || d.quantity.starts_with("rank(H_4")) {
            println!("  {:<28} = {}  [{:?}]", d.quantity, d.value, d.rule);
        }
        println!("  betti {:?}", derived.profile.betti_numbers());
    }
    Ok(())
}
