//! Brute-force homology of the triangulated configuration space and of the
//! pieces cut out by the potential at regular levels: sublevel sets `{V <= c}`
//! and pairs `(Q, {V > c})`, whose ranks equal those of `(U_c, ∂U_c)`.
//!
//!     cargo run --release --example sublevel_homology -- 1

use std::time::Instant;

use pendulum_topology::complexes::ConfigurationSpace;
use pendulum_topology::mechanics::PendulumParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let level: u32 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(0);
    let start = Instant::now();
    let space = ConfigurationSpace::new(PendulumParams::unit(), level);
    println!("level {level}: f-vector {:?} built in {:.2?}", space.complex.f_vector(), start.elapsed());
    println!("H(Q) ranks {:?}, χ = {}", space.homology()?.betti_numbers(), space.complex.euler_characteristic());
    for c in [-2.5, -2.0, -0.5, 0.0, 0.5, 2.0, 3.5] {
        let t = Instant::now();
        let sub = space.sublevel_homology(c)?;
        let pair = space.superlevel_relative_homology(c)?;
        println!(
            "c = {c:+.1}: sublevel {:?}  pair {:?}  ({:.2?})",
            sub.betti_numbers(),
            pair.betti_numbers(),
            t.elapsed()
        );
    }
    Ok(())
}
