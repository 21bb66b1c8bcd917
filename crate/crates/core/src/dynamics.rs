//! Constrained integration of the pendulum flow.
//!
//! The scheme is RATTLE on `R^6 x R^6` with the holonomic constraints
//! `|q1|^2 = |q2|^2 = 1`: a half kick with unknown multipliers, a drift whose
//! multipliers are fixed by a Newton solve putting both rods back on the unit
//! sphere, and a closing half kick whose multipliers make the velocities
//! tangent. The method is symmetric, symplectic on the constraint manifold
//! and second order.

use std::io::{self, Write};

use nalgebra::{Matrix2, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mechanics::{
    classify_energy, constraint_residuals, hamiltonian, kinetic_energy, momenta_from_velocities, potential,
    potential_gradient, random_config, MechanicsError, PendulumParams, PhasePoint, RegimeTag, Vec3,
};

/// Newton iterations allowed for the position projection.
pub const MAX_ITER: usize = 50;
/// Target for `| |q_i|^2 - 1 |` after projection.
pub const PROJECTION_TOL: f64 = 1e-12;
/// Rejection-sampling budget for a configuration below the energy.
pub const MAX_SAMPLING_ATTEMPTS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("constraint projection did not converge in {iterations} iterations (residual {residual:e})")]
    ProjectionDivergence { iterations: usize, residual: f64 },
    #[error("energy {h} lies below the minimum of the potential")]
    EmptyRegime { h: f64 },
    #[error("energy {h} is a critical value")]
    CriticalRegime { h: f64 },
    #[error("no configuration with V < {h} found in {attempts} draws")]
    SamplingFailed { h: f64, attempts: usize },
    #[error(transparent)]
    Mechanics(#[from] MechanicsError),
}

/// Scalar blocks of the inverse mass matrix: `v1 = a p1 + b p2`,
/// `v2 = b p1 + c p2`.
#[derive(Clone, Copy, Debug)]
struct InverseMass {
    a: f64,
    b: f64,
    c: f64,
}

impl InverseMass {
    fn new(params: &PendulumParams) -> Self {
        let PendulumParams { m1, m2, l1, l2, .. } = *params;
        Self {
            a: 1.0 / (m1 * l1 * l1),
            b: -1.0 / (m1 * l1 * l2),
            c: 1.0 / (m2 * l2 * l2) + 1.0 / (m1 * l2 * l2),
        }
    }

    fn apply(&self, p1: &Vec3, p2: &Vec3) -> (Vec3, Vec3) {
        (self.a * p1 + self.b * p2, self.b * p1 + self.c * p2)
    }
}

/// `G^T λ` for the constraint Jacobian at `(q1, q2)`.
fn constraint_force(q1: &Vec3, q2: &Vec3, lambda: &Vector2<f64>) -> (Vec3, Vec3) {
    (lambda[0] * q1, lambda[1] * q2)
}

/// `G M^{-1} G^T` at `(q1, q2)`.
fn constraint_gram(minv: &InverseMass, q1: &Vec3, q2: &Vec3) -> Matrix2<f64> {
    let d = q1.dot(q2);
    Matrix2::new(minv.a * q1.norm_squared(), minv.b * d, minv.b * d, minv.c * q2.norm_squared())
}

/// One RATTLE step of size `dt`.
pub fn step(params: &PendulumParams, point: &PhasePoint, dt: f64) -> Result<PhasePoint, DynamicsError> {
    let minv = InverseMass::new(params);
    let (f1, f2) = potential_gradient(params);
    let (q1, q2) = (point.config.q1, point.config.q2);
    let h = 0.5 * dt;

    // Unconstrained drift target and the direction multipliers move it in.
    let (w1, w2) = minv.apply(&(point.p1 - h * f1), &(point.p2 - h * f2));
    let free1 = q1 + dt * w1;
    let free2 = q2 + dt * w2;
    let s = dt * h;
    let (d11, d12) = (-s * minv.a * q1, -s * minv.b * q2);
    let (d21, d22) = (-s * minv.b * q1, -s * minv.c * q2);

    let mut lambda: Vector2<f64> = Vector2::zeros();
    let mut converged = false;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let n1 = free1 + lambda[0] * d11 + lambda[1] * d12;
        let n2 = free2 + lambda[0] * d21 + lambda[1] * d22;
        let f = Vector2::new(n1.norm_squared() - 1.0, n2.norm_squared() - 1.0);
        residual = f.amax();
        if residual <= PROJECTION_TOL {
            converged = true;
            break;
        }
        let jac = Matrix2::new(
            2.0 * n1.dot(&d11),
            2.0 * n1.dot(&d12),
            2.0 * n2.dot(&d21),
            2.0 * n2.dot(&d22),
        );
        let delta = jac.lu().solve(&f).ok_or(DynamicsError::ProjectionDivergence {
            iterations: MAX_ITER,
            residual,
        })?;
        lambda -= delta;
    }
    if !converged {
        return Err(DynamicsError::ProjectionDivergence {
            iterations: MAX_ITER,
            residual,
        });
    }

    let (c1, c2) = constraint_force(&q1, &q2, &lambda);
    let ph1 = point.p1 - h * (f1 + c1);
    let ph2 = point.p2 - h * (f2 + c2);
    let (v1, v2) = minv.apply(&ph1, &ph2);
    let nq1 = q1 + dt * v1;
    let nq2 = q2 + dt * v2;

    // Closing kick: choose μ so that G(q_new) M^{-1} p_new = 0.
    let pk1 = ph1 - h * f1;
    let pk2 = ph2 - h * f2;
    let (u1, u2) = minv.apply(&pk1, &pk2);
    let rhs = Vector2::new(nq1.dot(&u1), nq2.dot(&u2));
    let gram = constraint_gram(&minv, &nq1, &nq2);
    let mu = gram.lu().solve(&rhs).ok_or(DynamicsError::ProjectionDivergence {
        iterations: 1,
        residual: rhs.amax(),
    })?;
    let (e1, e2) = constraint_force(&nq1, &nq2, &mu);

    let mut next = *point;
    next.config.q1 = nq1;
    next.config.q2 = nq2;
    next.p1 = pk1 - e1;
    next.p2 = pk2 - e2;
    Ok(next)
}

/// Uniformly spaced samples `(t_i, x_i)`, `t_i = i dt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dt: f64,
    pub steps: usize,
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `max |H(t) - H(0)|`.
    pub energy_drift: f64,
    /// Largest absolute value of any of the four constraint residuals.
    pub max_residual: f64,
    /// `max(V(q(t)) - H(0), 0)`.
    pub potential_excess: f64,
    pub energy: f64,
    /// `None` when the slope is degenerate.
    pub regime: Option<RegimeTag>,
}

pub const CSV_HEADER: &str = "t,q1x,q1y,q1z,q2x,q2y,q2z,p1x,p1y,p1z,p2x,p2y,p2z,H,g1,g2,g3,g4";

impl Trajectory {
    /// Writes one row per sample with the columns of [`CSV_HEADER`].
    pub fn write_csv<W: Write>(&self, params: &PendulumParams, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for (t, x) in self.times.iter().zip(&self.points) {
            let c = &x.config;
            let r = constraint_residuals(params, x);
            let mut row = vec![*t];
            row.extend(c.q1.iter().chain(c.q2.iter()).chain(x.p1.iter()).chain(x.p2.iter()).copied());
            row.push(hamiltonian(params, x));
            row.extend(r);
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

pub fn diagnostics(params: &PendulumParams, points: &[PhasePoint]) -> Diagnostics {
    let h0 = points.first().map(|x| hamiltonian(params, x)).unwrap_or(0.0);
    let mut d = Diagnostics {
        energy_drift: 0.0,
        max_residual: 0.0,
        potential_excess: 0.0,
        energy: h0,
        regime: classify_energy(params, h0).ok().map(|r| r.tag),
    };
    for x in points {
        d.energy_drift = d.energy_drift.max((hamiltonian(params, x) - h0).abs());
        for r in constraint_residuals(params, x) {
            d.max_residual = d.max_residual.max(r.abs());
        }
        d.potential_excess = d.potential_excess.max(potential(params, &x.config) - h0);
    }
    d
}

pub fn simulate(params: &PendulumParams, init: PhasePoint, dt: f64, steps: usize) -> Result<(Trajectory, Diagnostics), DynamicsError> {
    let mut points = Vec::with_capacity(steps + 1);
    points.push(init);
    let mut x = init;
    for _ in 0..steps {
        x = step(params, &x, dt)?;
        points.push(x);
    }
    let diag = diagnostics(params, &points);
    let times = (0..=steps).map(|i| i as f64 * dt).collect();
    Ok((
        Trajectory {
            dt,
            steps,
            times,
            points,
        },
        diag,
    ))
}

/// Runs independent trajectories in parallel; results keep input order.
pub fn simulate_batch(
    params: &PendulumParams,
    inits: &[PhasePoint],
    dt: f64,
    steps: usize,
) -> Vec<Result<(Trajectory, Diagnostics), DynamicsError>> {
    inits.par_iter().map(|x| simulate(params, *x, dt, steps)).collect()
}

/// A point on `H = h`: uniform configuration with `V < h` by rejection,
/// Gaussian tangent velocities, kinetic energy rescaled to `h - V`.
///
/// This is a convenience measure, not the Liouville measure.
pub fn sample_phase_point(params: &PendulumParams, h: f64, seed: u64) -> Result<PhasePoint, DynamicsError> {
    let regime = classify_energy(params, h)?;
    match regime.tag {
        RegimeTag::Empty => return Err(DynamicsError::EmptyRegime { h }),
        RegimeTag::Critical => return Err(DynamicsError::CriticalRegime { h }),
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = (0..MAX_SAMPLING_ATTEMPTS)
        .map(|_| random_config(&mut rng))
        .find(|c| potential(params, c) < h)
        .ok_or(DynamicsError::SamplingFailed {
            h,
            attempts: MAX_SAMPLING_ATTEMPTS,
        })?;
    let mut tangent = |q: &Vec3| {
        let w = Vec3::from_fn(|_, _| StandardNormal.sample(&mut rng));
        w - w.dot(q) * q
    };
    let v1 = tangent(&config.q1);
    let v2 = tangent(&config.q2);
    let (p1, p2) = momenta_from_velocities(params, &v1, &v2);
    let target = h - potential(params, &config);
    let t = kinetic_energy(params, &p1, &p2);
    let scale = if t > 0.0 { (target / t).sqrt() } else { 0.0 };
    Ok(PhasePoint {
        config,
        p1: scale * p1,
        p2: scale * p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::ConfigPoint;

    #[test]
    fn rest_point_is_fixed() {
        let params = PendulumParams::unit();
        let rest = PhasePoint::at_rest(ConfigPoint::poles(false, false));
        let (_, d) = simulate(&params, rest, 1e-2, 200).unwrap();
        assert!(d.energy_drift < 1e-13 && d.max_residual < 1e-13 && d.potential_excess <= 1e-13, "{d:?}");
        assert_eq!(d.regime, Some(RegimeTag::Critical));
    }

    #[test]
    fn sampling_hits_the_level() {
        let params = PendulumParams::unit();
        let x = sample_phase_point(&params, -2.0, 42).unwrap();
        assert!((hamiltonian(&params, &x) + 2.0).abs() <= 1e-12);
        let r = constraint_residuals(&params, &x);
        assert!(r.iter().all(|v| v.abs() < 1e-12), "{r:?}");
        assert_eq!(x, sample_phase_point(&params, -2.0, 42).unwrap());
        assert_ne!(x, sample_phase_point(&params, -2.0, 43).unwrap());
        assert_eq!(sample_phase_point(&params, -4.0, 1), Err(DynamicsError::EmptyRegime { h: -4.0 }));
        assert_eq!(sample_phase_point(&params, 1.0, 1), Err(DynamicsError::CriticalRegime { h: 1.0 }));
    }

    #[test]
    fn step_is_reversible() {
        let params = PendulumParams::unit();
        let x = sample_phase_point(&params, 0.0, 7).unwrap();
        let y = step(&params, &x, 1e-2).unwrap();
        let mut flipped = y;
        flipped.p1 = -y.p1;
        flipped.p2 = -y.p2;
        let mut back = step(&params, &flipped, 1e-2).unwrap();
        back.p1 = -back.p1;
        back.p2 = -back.p2;
        let err = (back.config.q1 - x.config.q1).amax()
            .max((back.config.q2 - x.config.q2).amax())
            .max((back.p1 - x.p1).amax())
            .max((back.p2 - x.p2).amax());
        assert!(err < 1e-10, "{err:e}");
    }

    #[test]
    fn band_label_and_csv() {
        let params = PendulumParams::unit();
        let x = sample_phase_point(&params, 2.0, 3).unwrap();
        let (traj, d) = simulate(&params, x, 1e-3, 20).unwrap();
        assert_eq!(d.regime, Some(RegimeTag::M3));
        assert_eq!(traj.times.len(), 21);
        let mut buf = Vec::new();
        traj.write_csv(&params, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 22);
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 18);
    }
}
