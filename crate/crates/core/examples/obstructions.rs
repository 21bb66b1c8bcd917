//! Geodesic-flow, cross-section and integrability criteria on the four
//! energy surfaces and on the configuration space.
//!
//!     cargo run --example obstructions

use pendulum_topology::homology::{euler_characteristic, kunneth, HomologyProfile};
use pendulum_topology::mechanics::{expected_topology, RegimeTag};
use pendulum_topology::obstructions::{cross_section_check, geodesic_flow_check, integrability_check};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for band in RegimeTag::SURFACES {
        let p = expected_topology(band)?.integer_homology;
        let g = geodesic_flow_check(&p, p.torsion(3), 4)?;
        let c = cross_section_check(&p, euler_characteristic(&p), false);
        println!("{band}: geodesic flow {} (lhs {:?}, rhs {:?}); cross section {}", g.verdict, g.lhs, g.rhs, c.verdict);
        for cond in c.conditions.iter().filter(|c| c.holds == Some(false)) {
            println!("    fails: {} ({})", cond.name, cond.detail);
        }
    }
    let q = kunneth(&HomologyProfile::sphere(2), &HomologyProfile::sphere(2))?;
    let t = integrability_check(&q, 4)?;
    println!("Q = S^2 x S^2: integrability {}", t.verdict);
    for c in &t.conditions {
        println!("    {}", c.detail);
    }
    Ok(())
}
