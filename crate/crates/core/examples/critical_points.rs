//! Critical points of the potential for a few parameter choices, with the
//! numerical Morse check and a random-start Newton search that finds the
//! same four points.
//!
//!     cargo run --example critical_points

use pendulum_topology::mechanics::{critical_points, search_critical_points, CriticalLabel, PendulumParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("unit", PendulumParams::unit()),
        ("long lower rod", PendulumParams::new(1.0, 1.0, 1.0, 3.0, 1.0)?),
        ("heavy upper bob", PendulumParams::new(4.0, 0.5, 1.2, 0.8, 9.81)?),
    ];
    for (name, params) in cases {
        let data = critical_points(&params)?;
        println!("{name}: k = {:.4}", params.slope());
        for p in data.sorted() {
            let e = p.hessian_eigenvalues;
            println!(
                "  {}  z = ({:+.0}, {:+.0})  V = {:+.4}  index {}  |grad| {:.1e}  hessian [{:.3}, {:.3}, {:.3}, {:.3}]",
                p.label,
                p.config.z1(),
                p.config.z2(),
                p.potential_value,
                p.morse_index,
                p.gradient_norm,
                e[0],
                e[1],
                e[2],
                e[3]
            );
        }

        let search = search_critical_points(&params, 200, 7);
        let mut counts = [0usize; 4];
        for c in &search.found {
            let label = CriticalLabel::ALL
                .iter()
                .position(|l| {
                    let (up1, up2) = l.orientation();
                    (c.z1() > 0.0) == up1 && (c.z2() > 0.0) == up2
                })
                .expect("every critical point is a pair of poles");
            counts[label] += 1;
        }
        println!(
            "  Newton search from 200 starts: P1..P4 hit {:?} times, {} did not converge",
            counts, search.not_converged
        );
    }
    Ok(())
}
