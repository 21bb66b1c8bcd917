//! The double spherical pendulum: energies, constraints, the four critical
//! points of the potential and the energy bands between them.
//!
//! Positions are unit vectors `q1, q2` in `R^3` (the directions of the two
//! rods), momenta are the conjugate covectors `p1, p2` in the same ambient
//! coordinates. The potential is `V = g m2 l2 (k z1 + z2)` with slope
//! `k = (m1 + m2) l1 / (m2 l2)`.

use std::fmt;

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{HomologyGroup, HomologyProfile};

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanicsError {
    #[error("parameter {name} must be strictly positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("slope k = {slope} equals 1: V(P2) = V(P3) and the middle band is empty")]
    DegenerateSlope { slope: f64 },
    #[error("|q{index}| deviates from 1 by {deviation:e}")]
    NotUnitVector { index: usize, deviation: f64 },
    #[error("momentum constraint g{index} has residual {residual:e}")]
    ConstraintViolated { index: usize, residual: f64 },
    #[error("no topology is attached to the {0} regime")]
    NotApplicable(RegimeTag),
    #[error("numerical Morse check failed at {label}: {reason}")]
    MorseCheckFailed { label: CriticalLabel, reason: String },
}

/// Numerical tolerances. `crit` is relative to the energy scale
/// `g m2 l2 (k + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub unit: f64,
    pub constraint: f64,
    pub crit: f64,
    pub slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit: 1e-9,
            constraint: 1e-9,
            crit: 1e-9,
            slope: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PendulumParams {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub g: f64,
    #[serde(skip, default)]
    pub tol: Tolerances,
}

impl PendulumParams {
    pub fn new(m1: f64, m2: f64, l1: f64, l2: f64, g: f64) -> Result<Self, MechanicsError> {
        Self::with_tolerances(m1, m2, l1, l2, g, Tolerances::default())
    }

    pub fn with_tolerances(
        m1: f64,
        m2: f64,
        l1: f64,
        l2: f64,
        g: f64,
        tol: Tolerances,
    ) -> Result<Self, MechanicsError> {
        for (name, value) in [("m1", m1), ("m2", m2), ("l1", l1), ("l2", l2), ("g", g)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(MechanicsError::InvalidParameter { name, value });
            }
        }
        Ok(Self { m1, m2, l1, l2, g, tol })
    }

    /// All masses, lengths and gravity equal to one (slope 2).
    pub fn unit() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0, 1.0).expect("unit parameters are valid")
    }

    pub fn slope(&self) -> f64 {
        slope(self)
    }

    pub fn is_degenerate(&self) -> bool {
        (self.slope() - 1.0).abs() < self.tol.slope
    }

    /// `g m2 l2 (k + 1)`: the largest value of `|V|`.
    pub fn energy_scale(&self) -> f64 {
        self.g * self.m2 * self.l2 * (self.slope() + 1.0)
    }

    pub fn tol_crit(&self) -> f64 {
        self.tol.crit * self.energy_scale()
    }
}

/// A point of `S^2 x S^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub q1: Vec3,
    pub q2: Vec3,
}

impl ConfigPoint {
    pub fn new(q1: Vec3, q2: Vec3) -> Result<Self, MechanicsError> {
        Self::with_tolerance(q1, q2, Tolerances::default().unit)
    }

    pub fn with_tolerance(q1: Vec3, q2: Vec3, tol_unit: f64) -> Result<Self, MechanicsError> {
        for (index, q) in [(1, &q1), (2, &q2)] {
            let deviation = (q.norm() - 1.0).abs();
            if !(deviation <= tol_unit) {
                return Err(MechanicsError::NotUnitVector { index, deviation });
            }
        }
        Ok(Self { q1, q2 })
    }

    /// Normalizes the inputs instead of validating them.
    pub fn normalized(q1: Vec3, q2: Vec3) -> Self {
        Self {
            q1: q1.normalize(),
            q2: q2.normalize(),
        }
    }

    /// Both rods vertical; `up1`/`up2` select the highest point of each
    /// sphere (`z = +1`) over the lowest (`z = -1`).
    pub fn poles(up1: bool, up2: bool) -> Self {
        let pole = |up: bool| Vec3::new(0.0, 0.0, if up { 1.0 } else { -1.0 });
        Self {
            q1: pole(up1),
            q2: pole(up2),
        }
    }

    pub fn z1(&self) -> f64 {
        self.q1.z
    }

    pub fn z2(&self) -> f64 {
        self.q2.z
    }

    /// Heights `(h1, h2)` of the two bobs below/above the pivot.
    pub fn heights(&self, params: &PendulumParams) -> (f64, f64) {
        let h1 = params.l1 * self.z1();
        (h1, params.l2 * self.z2() + h1)
    }
}

/// A point of the phase space `T^*(S^2 x S^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub config: ConfigPoint,
    pub p1: Vec3,
    pub p2: Vec3,
}

impl PhasePoint {
    /// Validates both momentum constraints against `params.tol.constraint`.
    pub fn new(params: &PendulumParams, config: ConfigPoint, p1: Vec3, p2: Vec3) -> Result<Self, MechanicsError> {
        let point = Self { config, p1, p2 };
        let r = constraint_residuals(params, &point);
        for (index, residual) in [(3, r[2]), (4, r[3])] {
            if !(residual.abs() <= params.tol.constraint) {
                return Err(MechanicsError::ConstraintViolated { index, residual });
            }
        }
        Ok(point)
    }

    pub fn at_rest(config: ConfigPoint) -> Self {
        Self {
            config,
            p1: Vec3::zeros(),
            p2: Vec3::zeros(),
        }
    }
}

pub fn slope(params: &PendulumParams) -> f64 {
    (params.m1 + params.m2) * params.l1 / (params.m2 * params.l2)
}

pub fn potential(params: &PendulumParams, c: &ConfigPoint) -> f64 {
    params.g * params.m2 * params.l2 * (params.slope() * c.z1() + c.z2())
}

/// Potential at ambient coordinates without any unit-norm check; used for
/// vertex fields on triangulations.
pub fn potential_at_heights(params: &PendulumParams, z1: f64, z2: f64) -> f64 {
    params.g * params.m2 * params.l2 * (params.slope() * z1 + z2)
}

/// Ambient gradient `(∂V/∂q1, ∂V/∂q2)`.
pub fn potential_gradient(params: &PendulumParams) -> (Vec3, Vec3) {
    let c2 = params.g * params.m2 * params.l2;
    (Vec3::new(0.0, 0.0, c2 * params.slope()), Vec3::new(0.0, 0.0, c2))
}

/// Inverse Legendre transform.
pub fn velocities_from_momenta(params: &PendulumParams, p1: &Vec3, p2: &Vec3) -> (Vec3, Vec3) {
    let PendulumParams { m1, m2, l1, l2, .. } = *params;
    let v1 = (p1 / (m1 * l1) - p2 / (m1 * l2)) / l1;
    let v2 = (p2 / (m2 * l2) - p1 / (m1 * l1) + p2 / (m1 * l2)) / l2;
    (v1, v2)
}

pub fn momenta_from_velocities(params: &PendulumParams, v1: &Vec3, v2: &Vec3) -> (Vec3, Vec3) {
    let PendulumParams { m1, m2, l1, l2, .. } = *params;
    let lower = l1 * v1 + l2 * v2;
    let p1 = m1 * l1 * l1 * v1 + m2 * l1 * lower;
    let p2 = m2 * l2 * lower;
    (p1, p2)
}

/// `H - V`, written in the momenta.
pub fn kinetic_energy(params: &PendulumParams, p1: &Vec3, p2: &Vec3) -> f64 {
    let PendulumParams { m1, m2, l1, l2, .. } = *params;
    0.5 * ((p1 / l1 - p2 / l2).norm_squared() / m1 + (p2 / l2).norm_squared() / m2)
}

/// Kinetic energy written in the velocities (the Lagrangian form).
pub fn kinetic_energy_from_velocities(params: &PendulumParams, v1: &Vec3, v2: &Vec3) -> f64 {
    let PendulumParams { m1, m2, l1, l2, .. } = *params;
    0.5 * (m1 * (l1 * v1).norm_squared() + m2 * (l1 * v1 + l2 * v2).norm_squared())
}

pub fn hamiltonian(params: &PendulumParams, p: &PhasePoint) -> f64 {
    kinetic_energy(params, &p.p1, &p.p2) + potential(params, &p.config)
}

/// `(q1·q1 - 1, q2·q2 - 1, q1·q̇1, q2·q̇2)` with the velocities read off the
/// momenta.
pub fn constraint_residuals(params: &PendulumParams, p: &PhasePoint) -> [f64; 4] {
    let PendulumParams { m1, m2, l1, l2, .. } = *params;
    let (q1, q2) = (&p.config.q1, &p.config.q2);
    let (p1, p2) = (&p.p1, &p.p2);
    let g3 = q1.dot(&(p1 / (m1 * l1 * l1) - p2 / (m1 * l1 * l2)));
    let g4 = q2.dot(&(p2 / (m2 * l2 * l2) - p1 / (m1 * l1 * l2) + p2 / (m1 * l2 * l2)));
    [q1.dot(q1) - 1.0, q2.dot(q2) - 1.0, g3, g4]
}

pub fn in_accessible_region(params: &PendulumParams, h: f64, c: &ConfigPoint) -> bool {
    potential(params, c) <= h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriticalLabel {
    P1,
    P2,
    P3,
    P4,
}

impl CriticalLabel {
    pub const ALL: [CriticalLabel; 4] = [Self::P1, Self::P2, Self::P3, Self::P4];

    /// Whether each rod points up (`z = +1`) at this critical point.
    pub fn orientation(self) -> (bool, bool) {
        match self {
            Self::P1 => (false, false),
            Self::P2 => (false, true),
            Self::P3 => (true, false),
            Self::P4 => (true, true),
        }
    }

    pub fn morse_index(self) -> usize {
        match self {
            Self::P1 => 0,
            Self::P2 | Self::P3 => 2,
            Self::P4 => 4,
        }
    }
}

impl fmt::Display for CriticalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointInfo {
    pub label: CriticalLabel,
    pub config: ConfigPoint,
    pub potential_value: f64,
    pub morse_index: usize,
    /// Norm of the chart gradient at the point (finite differences).
    pub gradient_norm: f64,
    /// Eigenvalues of the chart Hessian, ascending.
    pub hessian_eigenvalues: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub points: Vec<CriticalPointInfo>,
    /// Set when `|k - 1| <= tol_k`, i.e. `V(P2) = V(P3)`.
    pub degenerate_slope: bool,
}

impl CriticalData {
    pub fn value(&self, label: CriticalLabel) -> f64 {
        self.points
            .iter()
            .find(|p| p.label == label)
            .expect("all four labels present")
            .potential_value
    }

    /// Critical points ordered by potential value (ties keep label order).
    pub fn sorted(&self) -> Vec<&CriticalPointInfo> {
        let mut v: Vec<_> = self.points.iter().collect();
        v.sort_by(|a, b| a.potential_value.total_cmp(&b.potential_value).then(a.label.cmp(&b.label)));
        v
    }
}

const HESSIAN_THRESHOLD: f64 = 1e-8;
const GRADIENT_THRESHOLD: f64 = 1e-7;

/// The four critical points `P1 = (0,0)`, `P2 = (0,∞)`, `P3 = (∞,0)`,
/// `P4 = (∞,∞)` with `0`/`∞` the lowest/highest point of each sphere.
///
/// Each point is checked numerically in an exponential chart: the gradient
/// must vanish and the Hessian must be nondegenerate with the expected
/// number of negative eigenvalues.
pub fn critical_points(params: &PendulumParams) -> Result<CriticalData, MechanicsError> {
    let mut points = Vec::with_capacity(4);
    for label in CriticalLabel::ALL {
        let (up1, up2) = label.orientation();
        let config = ConfigPoint::poles(up1, up2);
        let (gradient, hessian) = chart_derivatives(params, &config);
        let gradient_norm = gradient.norm();
        let scale = params.energy_scale();
        if gradient_norm > GRADIENT_THRESHOLD * scale {
            return Err(MechanicsError::MorseCheckFailed {
                label,
                reason: format!("gradient norm {gradient_norm:e}"),
            });
        }
        let mut eigenvalues: Vec<f64> = hessian.symmetric_eigenvalues().iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        if eigenvalues.iter().any(|l| l.abs() < HESSIAN_THRESHOLD) {
            return Err(MechanicsError::MorseCheckFailed {
                label,
                reason: format!("degenerate Hessian {eigenvalues:?}"),
            });
        }
        let negative = eigenvalues.iter().filter(|l| **l < 0.0).count();
        if negative != label.morse_index() {
            return Err(MechanicsError::MorseCheckFailed {
                label,
                reason: format!("{negative} negative eigenvalues, expected {}", label.morse_index()),
            });
        }
        points.push(CriticalPointInfo {
            label,
            config,
            potential_value: potential(params, &config),
            morse_index: label.morse_index(),
            gradient_norm,
            hessian_eigenvalues: [eigenvalues[0], eigenvalues[1], eigenvalues[2], eigenvalues[3]],
        });
    }
    Ok(CriticalData {
        points,
        degenerate_slope: params.is_degenerate(),
    })
}

/// Orthonormal basis of the tangent plane of the unit sphere at `q`.
fn tangent_basis(q: &Vec3) -> (Vec3, Vec3) {
    let helper = if q.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - q * q.dot(&helper)).normalize();
    let e2 = q.cross(&e1);
    (e1, e2)
}

fn sphere_exp(q: &Vec3, e1: &Vec3, e2: &Vec3, a: f64, b: f64) -> Vec3 {
    let t = (a * a + b * b).sqrt();
    if t == 0.0 {
        return *q;
    }
    let dir = (e1 * a + e2 * b) / t;
    q * t.cos() + dir * t.sin()
}

/// Gradient and Hessian of `V` in the exponential chart centred at `c`,
/// by central finite differences.
fn chart_derivatives(params: &PendulumParams, c: &ConfigPoint) -> (Vector4<f64>, Matrix4<f64>) {
    let (a1, b1) = tangent_basis(&c.q1);
    let (a2, b2) = tangent_basis(&c.q2);
    let f = |v: &Vector4<f64>| {
        let q1 = sphere_exp(&c.q1, &a1, &b1, v[0], v[1]);
        let q2 = sphere_exp(&c.q2, &a2, &b2, v[2], v[3]);
        potential_at_heights(params, q1.z, q2.z)
    };
    let h = 1e-4;
    let mut grad = Vector4::zeros();
    let mut hess = Matrix4::zeros();
    let f0 = f(&Vector4::zeros());
    for i in 0..4 {
        let ei = Vector4::ith(i, h);
        grad[i] = (f(&ei) - f(&(-ei))) / (2.0 * h);
        hess[(i, i)] = (f(&ei) - 2.0 * f0 + f(&(-ei))) / (h * h);
        for j in 0..i {
            let ej = Vector4::ith(j, h);
            let mixed = (f(&(ei + ej)) - f(&(ei - ej)) - f(&(ej - ei)) + f(&(-ei - ej))) / (4.0 * h * h);
            hess[(i, j)] = mixed;
            hess[(j, i)] = mixed;
        }
    }
    (grad, hess)
}

/// Outcome of a Riemannian Newton search for critical points of `V`.
#[derive(Clone, Debug, Default)]
pub struct CriticalSearch {
    pub found: Vec<ConfigPoint>,
    pub not_converged: usize,
}

/// Runs Riemannian Newton iterations for the gradient of `V` on
/// `S^2 x S^2` from `starts` uniformly random points. Converged points are
/// returned as found (duplicates kept).
pub fn search_critical_points(params: &PendulumParams, starts: usize, seed: u64) -> CriticalSearch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c2 = params.g * params.m2 * params.l2;
    let coeffs = [c2 * params.slope(), c2];
    let mut out = CriticalSearch::default();
    for _ in 0..starts {
        let mut q = [random_unit(&mut rng), random_unit(&mut rng)];
        let mut converged = false;
        for _ in 0..200 {
            let mut grad_norm = 0.0;
            for (qi, ci) in q.iter_mut().zip(coeffs) {
                // Riemannian gradient of ci * z on the unit sphere and the
                // Newton step for the Hessian -ci * z * I.
                let grad = (Vec3::z() - *qi * qi.z) * ci;
                grad_norm += grad.norm_squared();
                let step = if qi.z.abs() > 1e-3 { grad / (ci * qi.z) } else { grad / ci };
                let t = step.norm().min(std::f64::consts::FRAC_PI_2);
                if t > 0.0 {
                    let dir = step.normalize();
                    *qi = (*qi * t.cos() + dir * t.sin()).normalize();
                }
            }
            if grad_norm.sqrt() < 1e-12 * params.energy_scale() {
                converged = true;
                break;
            }
        }
        if converged {
            out.found.push(ConfigPoint { q1: q[0], q2: q[1] });
        } else {
            out.not_converged += 1;
        }
    }
    out
}

fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

pub(crate) fn random_config<R: Rng>(rng: &mut R) -> ConfigPoint {
    ConfigPoint {
        q1: random_unit(rng),
        q2: random_unit(rng),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegimeTag {
    Empty,
    M1,
    M2,
    M3,
    M4,
    Critical,
}

impl RegimeTag {
    /// Position along the energy axis; `Critical` has none.
    pub fn band_index(self) -> Option<usize> {
        match self {
            Self::Empty => Some(0),
            Self::M1 => Some(1),
            Self::M2 => Some(2),
            Self::M3 => Some(3),
            Self::M4 => Some(4),
            Self::Critical => None,
        }
    }

    pub const SURFACES: [RegimeTag; 4] = [Self::M1, Self::M2, Self::M3, Self::M4];
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRegime {
    pub tag: RegimeTag,
    /// Critical value below the band (`None` below the minimum).
    pub lower: Option<f64>,
    /// Critical value above the band (`None` above the maximum).
    pub upper: Option<f64>,
    /// The critical point whose value `h` hits, for `Critical`.
    pub critical: Option<CriticalLabel>,
}

/// Places `h` among the critical values of `V`.
///
/// For `k < 1` the roles of `P2` and `P3` swap in the ordering; `k = 1`
/// is rejected because the `M2` band is empty.
pub fn classify_energy(params: &PendulumParams, h: f64) -> Result<EnergyRegime, MechanicsError> {
    if params.is_degenerate() {
        return Err(MechanicsError::DegenerateSlope { slope: params.slope() });
    }
    let data = critical_points(params)?;
    let sorted = data.sorted();
    let values: Vec<f64> = sorted.iter().map(|p| p.potential_value).collect();
    let tol = params.tol_crit();
    if let Some(p) = sorted.iter().find(|p| (h - p.potential_value).abs() <= tol) {
        return Ok(EnergyRegime {
            tag: RegimeTag::Critical,
            lower: Some(p.potential_value),
            upper: Some(p.potential_value),
            critical: Some(p.label),
        });
    }
    let band = values.iter().filter(|v| **v < h).count();
    let tag = [RegimeTag::Empty, RegimeTag::M1, RegimeTag::M2, RegimeTag::M3, RegimeTag::M4][band];
    Ok(EnergyRegime {
        tag,
        lower: band.checked_sub(1).map(|i| values[i]),
        upper: values.get(band).copied(),
        critical: None,
    })
}

/// Energy in the middle of a band (or one energy scale beyond the extreme
/// critical values for `Empty` and `M4`).
pub fn band_midpoint(params: &PendulumParams, tag: RegimeTag) -> Result<f64, MechanicsError> {
    if params.is_degenerate() {
        return Err(MechanicsError::DegenerateSlope { slope: params.slope() });
    }
    let data = critical_points(params)?;
    let v: Vec<f64> = data.sorted().iter().map(|p| p.potential_value).collect();
    let scale = params.energy_scale();
    match tag {
        RegimeTag::Empty => Ok(v[0] - scale),
        RegimeTag::M1 => Ok(0.5 * (v[0] + v[1])),
        RegimeTag::M2 => Ok(0.5 * (v[1] + v[2])),
        RegimeTag::M3 => Ok(0.5 * (v[2] + v[3])),
        RegimeTag::M4 => Ok(v[3] + scale),
        RegimeTag::Critical => Err(MechanicsError::NotApplicable(tag)),
    }
}

/// Known topology of a regular energy surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub tag: RegimeTag,
    pub homeomorphism_type: String,
    pub betti: [usize; 8],
    pub integer_homology: HomologyProfile,
}

pub fn expected_topology(tag: RegimeTag) -> Result<TopologyReport, MechanicsError> {
    let (name, betti): (&str, [usize; 8]) = match tag {
        RegimeTag::M1 => ("S^7", [1, 0, 0, 0, 0, 0, 0, 1]),
        RegimeTag::M2 => ("S^2 x S^5", [1, 0, 1, 0, 0, 1, 0, 1]),
        RegimeTag::M3 => ("(S^2 x S^5) # (S^2 x S^5)", [1, 0, 2, 0, 0, 2, 0, 1]),
        RegimeTag::M4 => ("T_1(S^2 x S^2)", [1, 0, 2, 0, 0, 2, 0, 1]),
        RegimeTag::Empty | RegimeTag::Critical => return Err(MechanicsError::NotApplicable(tag)),
    };
    let mut groups: Vec<HomologyGroup> = betti.iter().map(|&b| HomologyGroup::free(b)).collect();
    if tag == RegimeTag::M4 {
        groups[3].torsion = vec![4];
    }
    Ok(TopologyReport {
        tag,
        homeomorphism_type: name.to_string(),
        betti,
        integer_homology: HomologyProfile::from_groups(groups),
    })
}
