//! Classifies energies into the bands between critical values and prints
//! the known topology of each regular energy surface.
//!
//!     cargo run --example energy_regimes -- -4 -3 -2 0 1 2 5

use pendulum_topology::mechanics::{classify_energy, expected_topology, PendulumParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PendulumParams::unit();
    let mut energies: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    if energies.is_empty() {
        energies = vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 5.0];
    }
    for h in energies {
        let regime = classify_energy(&params, h)?;
        print!("h = {h:+.3}: {}", regime.tag);
        match expected_topology(regime.tag) {
            Ok(t) => println!("  {}  betti {:?}  H = {}", t.homeomorphism_type, t.betti, t.integer_homology),
            Err(_) => match regime.critical {
                Some(label) => println!("  (level through {label})"),
                None => println!("  (no motion possible)"),
            },
        }
    }
    Ok(())
}
