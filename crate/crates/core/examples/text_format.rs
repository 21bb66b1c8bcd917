//! Writes a complex, its chain complex and its homology in the line-oriented
//! text format and reads them back.
//!
//!     cargo run --example text_format

use pendulum_topology::complexes::subdivided_sphere2;
use pendulum_topology::homology::Coefficients;
use pendulum_topology::io::{read_chain_complex, read_complex, read_profile, write_chain_complex, write_complex, write_profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sphere = subdivided_sphere2(0);
    let text = write_complex(&sphere);
    println!("{}...", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    // coordinates are not part of the format
    assert_eq!(read_complex(&text)?.simplices(), sphere.simplices());

    let chain = sphere.chain_complex();
    let chain_text = write_chain_complex(&chain);
    println!("chain complex: {} lines", chain_text.lines().count());
    assert_eq!(read_chain_complex(&chain_text)?, chain);

    let profile = sphere.homology(Coefficients::Integers)?;
    let profile_text = write_profile(&profile);
    print!("{profile_text}");
    assert_eq!(read_profile(&profile_text)?, profile);
    Ok(())
}
