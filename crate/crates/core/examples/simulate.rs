//! Integrates trajectories on sampled energy levels, prints conservation
//! diagnostics and a step-halving study, and writes one trajectory as CSV.
//!
//!     cargo run --release --example simulate -- trajectory.csv

use std::fs::File;
use std::io::BufWriter;

use pendulum_topology::dynamics::{sample_phase_point, simulate, simulate_batch};
use pendulum_topology::mechanics::PendulumParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PendulumParams::unit();
    let inits = [-2.0, 0.0, 2.0, 5.0]
        .iter()
        .map(|&h| sample_phase_point(&params, h, 42))
        .collect::<Result<Vec<_>, _>>()?;
    for result in simulate_batch(&params, &inits, 1e-3, 10_000) {
        let (_, d) = result?;
        println!(
            "h = {:+.1} ({:?}): drift {:.2e}  residual {:.1e}  excess {:.1e}",
            d.energy,
            d.regime.expect("regular band"),
            d.energy_drift,
            d.max_residual,
            d.potential_excess
        );
    }

    let x = inits[1];
    let mut previous = None;
    for dt in [4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4] {
        let (_, d) = simulate(&params, x, dt, (10.0 / dt).round() as usize)?;
        let ratio = previous.map(|p: f64| p / d.energy_drift);
        println!("dt {dt:.1e}: drift {:.3e}{}", d.energy_drift, ratio.map(|r| format!("  ratio {r:.3}")).unwrap_or_default());
        previous = Some(d.energy_drift);
    }

    if let Some(path) = std::env::args().nth(1) {
        let (trajectory, _) = simulate(&params, x, 1e-3, 1_000)?;
        trajectory.write_csv(&params, BufWriter::new(File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
