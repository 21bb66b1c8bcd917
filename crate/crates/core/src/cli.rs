//! Command-line frontend: `analyze`, `verify`, `obstructions`, `simulate`.
//!
//! Settings come from an optional `key = value` file (`--config`) and are
//! overridden by flags. Reports are JSON (default) or plain text.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
//! 3 degenerate slope, 4 no regular level set to sample.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::ConfigurationSpace;
use crate::dynamics::{sample_phase_point, simulate, Diagnostics, DynamicsError, CSV_HEADER};
use crate::homology::{
    euler_characteristic, kunneth, pair_sequence_consistent, HomologyGroup, HomologyProfile,
};
use crate::mechanics::{
    classify_energy, critical_points, expected_topology, CriticalData, MechanicsError, PendulumParams, RegimeTag,
    Tolerances,
};
use crate::obstructions::{cross_section_check, geodesic_flow_check, integrability_check, Condition, Verdict};
use crate::sequences::{
    boundary_profile_for_band, energy_surface_from_region, gysin_total_space, psi_rank_from_euler,
    unit_tangent_integer_homology,
};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<MechanicsError> for CliError {
    fn from(e: MechanicsError) -> Self {
        let code = match e {
            MechanicsError::DegenerateSlope { .. } => EXIT_DEGENERATE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Mechanics(m) => m.into(),
            DynamicsError::EmptyRegime { .. } | DynamicsError::CriticalRegime { .. } | DynamicsError::SamplingFailed { .. } => Self {
                code: EXIT_EMPTY,
                message: e.to_string(),
            },
            DynamicsError::ProjectionDivergence { .. } => Self {
                code: EXIT_MISMATCH,
                message: e.to_string(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

const CSV_HELP: &str = "simulate --out writes a CSV trajectory with columns
  t, q1x..q1z, q2x..q2z, p1x..p1z, p2x..p2z, H, g1, g2, g3, g4
where g1..g4 are the constraint residuals |q1|^2-1, |q2|^2-1 and the two
tangency conditions on the rod velocities. For the other commands --out
receives the report instead of standard output.

Exit codes: 1 verification mismatch, 2 invalid input, 3 degenerate slope,
4 empty or critical energy level.";

#[derive(Parser, Debug)]
#[command(name = "pendulum-topology", version, about = "Topology of the energy surfaces of the double spherical pendulum", after_help = CSV_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Slope, critical points, energy regimes and the expected topology.
    Analyze,
    /// Brute-force relative homology against the exact-sequence pipeline.
    Verify,
    /// Geodesic-flow, cross-section and integrability criteria.
    Obstructions,
    /// Integrate one trajectory on a sampled energy level.
    Simulate,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    #[arg(long, global = true)]
    pub m1: Option<f64>,
    #[arg(long, global = true)]
    pub m2: Option<f64>,
    #[arg(long, global = true)]
    pub l1: Option<f64>,
    #[arg(long, global = true)]
    pub l2: Option<f64>,
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Energy value; repeatable.
    #[arg(long = "energy", global = true, allow_negative_numbers = true)]
    pub energies: Vec<f64>,
    /// Position inside each band for `verify`, in (-1, 1); 0 is the middle.
    #[arg(long = "energy-offsets", global = true, allow_negative_numbers = true, value_delimiter = ',')]
    pub energy_offsets: Vec<f64>,
    /// Subdivision level of each sphere factor.
    #[arg(long, global = true)]
    pub subdivision: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub g: f64,
    pub tolerances: Tolerances,
    pub energies: Vec<f64>,
    pub energy_offsets: Vec<f64>,
    pub subdivision: u32,
    pub seed: u64,
    pub dt: f64,
    pub steps: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m1: 1.0,
            m2: 1.0,
            l1: 1.0,
            l2: 1.0,
            g: 1.0,
            tolerances: Tolerances::default(),
            energies: Vec::new(),
            energy_offsets: Vec::new(),
            subdivision: 1,
            seed: 42,
            dt: 1e-3,
            steps: 10_000,
            format: Format::Json,
            out: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::invalid(format!("config line {line}: bad value {value:?} for {key}")))
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(line, key, s))
        .collect()
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. List keys
    /// (`energy`, `energy_offsets`) take comma-separated values and
    /// accumulate over repeated lines.
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::invalid(format!("config line {line}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "m1" => c.m1 = parse_value(line, key, value)?,
                "m2" => c.m2 = parse_value(line, key, value)?,
                "l1" => c.l1 = parse_value(line, key, value)?,
                "l2" => c.l2 = parse_value(line, key, value)?,
                "g" => c.g = parse_value(line, key, value)?,
                "energy" => c.energies.extend(parse_list(line, key, value)?),
                "energy_offsets" => c.energy_offsets.extend(parse_list(line, key, value)?),
                "subdivision" => c.subdivision = parse_value(line, key, value)?,
                "seed" => c.seed = parse_value(line, key, value)?,
                "dt" => c.dt = parse_value(line, key, value)?,
                "steps" => c.steps = parse_value(line, key, value)?,
                "format" => {
                    c.format = Format::from_str(value, true)
                        .map_err(|_| CliError::invalid(format!("config line {line}: unknown format {value:?}")))?
                }
                "out" => c.out = Some(PathBuf::from(value)),
                "tol_unit" => c.tolerances.unit = parse_value(line, key, value)?,
                "tol_constraint" => c.tolerances.constraint = parse_value(line, key, value)?,
                "tol_crit" => c.tolerances.crit = parse_value(line, key, value)?,
                "tol_slope" => c.tolerances.slope = parse_value(line, key, value)?,
                other => return Err(CliError::invalid(format!("config line {line}: unknown key {other:?}"))),
            }
        }
        Ok(c)
    }

    /// Reads the configuration file named by the flags (if any) and applies
    /// the remaining flags on top.
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let mut c = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
                Self::from_config_text(&text)?
            }
            None => Self::default(),
        };
        c.apply(flags);
        Ok(c)
    }

    pub fn apply(&mut self, f: &Flags) {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut self.m1, f.m1);
        set(&mut self.m2, f.m2);
        set(&mut self.l1, f.l1);
        set(&mut self.l2, f.l2);
        set(&mut self.g, f.g);
        set(&mut self.dt, f.dt);
        if !f.energies.is_empty() {
            self.energies = f.energies.clone();
        }
        if !f.energy_offsets.is_empty() {
            self.energy_offsets = f.energy_offsets.clone();
        }
        self.subdivision = f.subdivision.unwrap_or(self.subdivision);
        self.seed = f.seed.unwrap_or(self.seed);
        self.steps = f.steps.unwrap_or(self.steps);
        self.format = f.format.unwrap_or(self.format);
        if f.out.is_some() {
            self.out = f.out.clone();
        }
    }

    pub fn params(&self) -> Result<PendulumParams, MechanicsError> {
        PendulumParams::with_tolerances(self.m1, self.m2, self.l1, self.l2, self.g, self.tolerances)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsOut {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub g: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalOut {
    pub label: String,
    pub z1: f64,
    pub z2: f64,
    pub value: f64,
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeOut {
    pub energy: f64,
    pub tag: RegimeTag,
    pub betti: Option<Vec<usize>>,
    pub integer_homology: Option<Vec<HomologyGroup>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableOut {
    pub band: RegimeTag,
    pub homeomorphism_type: String,
    pub betti: Vec<usize>,
    pub integer_homology: Vec<HomologyGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub band: RegimeTag,
    pub offset: f64,
    pub energy: f64,
    pub oracle_pair_ranks: Vec<usize>,
    pub pipeline_betti: Option<Vec<usize>>,
    pub table_row: Vec<usize>,
    /// Long exact sequence of `(U, ∂U)` with the brute-force sublevel
    /// homology and the boundary used by the pipeline; `None` for the top band.
    pub boundary_consistent: Option<bool>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionOut {
    pub surface: String,
    pub criterion: String,
    pub verdict: Verdict,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationOut {
    pub energy: f64,
    pub seed: u64,
    pub dt: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: ParamsOut,
    pub slope: f64,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub critical_points: Vec<CriticalOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub regimes: Vec<RegimeOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verify: Vec<VerifyRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<ObstructionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(command: &str, params: &PendulumParams) -> Self {
        Self {
            command: command.into(),
            params: ParamsOut {
                m1: params.m1,
                m2: params.m2,
                l1: params.l1,
                l2: params.l2,
                g: params.g,
            },
            slope: params.slope(),
            degenerate: params.is_degenerate(),
            critical_points: Vec::new(),
            regimes: Vec::new(),
            table: Vec::new(),
            verify: Vec::new(),
            obstructions: Vec::new(),
            simulation: None,
            diagnostics: None,
            csv: None,
            notes: Vec::new(),
        }
    }

    /// `true` unless a verification row failed.
    pub fn passed(&self) -> bool {
        self.verify.iter().all(|r| r.pass)
    }
}

fn critical_out(data: &CriticalData) -> Vec<CriticalOut> {
    data.points
        .iter()
        .map(|p| CriticalOut {
            label: p.label.to_string(),
            z1: p.config.z1(),
            z2: p.config.z2(),
            value: p.potential_value,
            index: p.morse_index,
        })
        .collect()
}

fn table_rows() -> Vec<TableOut> {
    RegimeTag::SURFACES
        .iter()
        .map(|&t| {
            let r = expected_topology(t).expect("regular band");
            TableOut {
                band: t,
                homeomorphism_type: r.homeomorphism_type,
                betti: r.betti.to_vec(),
                integer_homology: r.integer_homology.groups().to_vec(),
            }
        })
        .collect()
}

pub fn cmd_analyze(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.params()?;
    let mut report = Report::new("analyze", &params);
    report.critical_points = critical_out(&critical_points(&params)?);
    for &h in &config.energies {
        let regime = classify_energy(&params, h)?;
        let topology = expected_topology(regime.tag).ok();
        report.regimes.push(RegimeOut {
            energy: h,
            tag: regime.tag,
            betti: topology.as_ref().map(|t| t.betti.to_vec()),
            integer_homology: topology.map(|t| t.integer_homology.groups().to_vec()),
        });
    }
    report.table = table_rows();
    Ok(report)
}

/// Energy at relative position `offset` in `(-1, 1)` inside a band; for the
/// unbounded top band, `offset` moves by multiples of the energy scale.
pub fn band_energy(params: &PendulumParams, band: RegimeTag, offset: f64) -> Result<f64, CliError> {
    if !(offset > -1.0 && offset < 1.0) {
        return Err(CliError::invalid(format!("energy offset {offset} is outside (-1, 1)")));
    }
    let data = critical_points(params)?;
    if params.is_degenerate() {
        return Err(MechanicsError::DegenerateSlope { slope: params.slope() }.into());
    }
    let v: Vec<f64> = data.sorted().iter().map(|p| p.potential_value).collect();
    let i = band
        .band_index()
        .filter(|&i| (1..=4).contains(&i))
        .ok_or_else(|| CliError::invalid(format!("{band} is not an energy surface band")))?;
    Ok(if i == 4 {
        v[3] + params.energy_scale() * (1.0 + offset)
    } else {
        v[i - 1] + (v[i] - v[i - 1]) * (1.0 + offset) / 2.0
    })
}

fn padded_betti(p: &HomologyProfile, top: usize) -> Vec<usize> {
    (0..=top).map(|k| p.betti(k)).collect()
}

/// One row of the verification table: brute force on the mesh of `space`,
/// then the exact-sequence pipeline.
pub fn verify_band(space: &ConfigurationSpace, q: &HomologyProfile, band: RegimeTag, offset: f64) -> Result<VerifyRow, CliError> {
    let params = &space.params;
    let energy = band_energy(params, band, offset)?;
    let table_row = expected_topology(band)?.betti.to_vec();
    let mut row = VerifyRow {
        band,
        offset,
        energy,
        oracle_pair_ranks: Vec::new(),
        pipeline_betti: None,
        table_row,
        boundary_consistent: None,
        pass: false,
        error: None,
    };
    let pair = match space.superlevel_relative_homology(energy) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return Ok(row);
        }
    };
    row.oracle_pair_ranks = padded_betti(&pair, 4);
    let pair = HomologyProfile::from_betti(&row.oracle_pair_ranks);
    let pipeline = match boundary_profile_for_band(band) {
        Some(boundary) => {
            match space.sublevel_homology(energy) {
                Ok(sub) => row.boundary_consistent = Some(pair_sequence_consistent(&sub, &boundary, &pair)),
                Err(e) => row.error = Some(e.to_string()),
            }
            energy_surface_from_region(&pair, &boundary)
        }
        None => gysin_total_space(&pair, 3, psi_rank_from_euler(euler_characteristic(q))),
    };
    match pipeline {
        Ok(d) => row.pipeline_betti = Some(padded_betti(&d.profile, 7)),
        Err(e) => row.error = Some(e.to_string()),
    }
    row.pass = row.error.is_none()
        && row.boundary_consistent != Some(false)
        && row.pipeline_betti.as_ref() == Some(&row.table_row);
    Ok(row)
}

pub fn cmd_verify(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.params()?;
    if params.is_degenerate() {
        return Err(MechanicsError::DegenerateSlope { slope: params.slope() }.into());
    }
    let mut report = Report::new("verify", &params);
    let offsets = if config.energy_offsets.is_empty() {
        vec![0.0]
    } else {
        config.energy_offsets.clone()
    };
    for &o in &offsets {
        band_energy(&params, RegimeTag::M1, o)?;
    }
    let space = ConfigurationSpace::new(params, config.subdivision);
    let q = space.homology().map_err(|e| CliError::invalid(e.to_string()))?;
    let euler = space.complex.euler_characteristic();
    let jobs: Vec<(RegimeTag, f64)> = offsets
        .iter()
        .flat_map(|&o| RegimeTag::SURFACES.iter().map(move |&b| (b, o)))
        .collect();
    report.verify = jobs
        .par_iter()
        .map(|&(b, o)| verify_band(&space, &q, b, o))
        .collect::<Result<Vec<_>, _>>()?;
    let vertices = space.faces().count(0);
    report.notes.push(format!(
        "subdivision {}: {} vertices, f-vector {:?}, H(Q) ranks {:?}, Euler characteristic {}",
        config.subdivision,
        vertices,
        space.complex.f_vector(),
        padded_betti(&q, 4),
        euler
    ));
    if config.subdivision == 0 {
        report
            .notes
            .push("coarse mesh: each sphere factor is a bare icosahedron; band levels fall between vertex values".into());
    }
    if let Ok(m4) = unit_tangent_integer_homology(&q, euler) {
        report.notes.push(format!("integer homology of the top band from the mesh Euler number: {}", m4.profile));
    }
    Ok(report)
}

fn obstruction_out(surface: &str, v: crate::obstructions::ObstructionVerdict) -> ObstructionOut {
    ObstructionOut {
        surface: surface.into(),
        criterion: v.criterion.to_string(),
        verdict: v.verdict,
        lhs: v.lhs,
        rhs: v.rhs,
        conditions: v.conditions,
    }
}

pub fn cmd_obstructions(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.params()?;
    let mut report = Report::new("obstructions", &params);
    for band in RegimeTag::SURFACES {
        let t = expected_topology(band)?;
        let p = &t.integer_homology;
        let name = band.to_string();
        let geo = geodesic_flow_check(p, p.torsion(3), 4).map_err(|e| CliError::invalid(e.to_string()))?;
        report.obstructions.push(obstruction_out(&name, geo));
        report
            .obstructions
            .push(obstruction_out(&name, cross_section_check(p, euler_characteristic(p), false)));
    }
    let q = kunneth(&HomologyProfile::sphere(2), &HomologyProfile::sphere(2)).expect("spheres are torsion-free");
    let taimanov = integrability_check(&q, 4).map_err(|e| CliError::invalid(e.to_string()))?;
    report.obstructions.push(obstruction_out("Q", taimanov));
    Ok(report)
}

pub fn cmd_simulate(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.params()?;
    if !(config.dt.is_finite() && config.dt > 0.0) {
        return Err(CliError::invalid(format!("dt must be positive, got {}", config.dt)));
    }
    let energy = config.energies.first().copied().unwrap_or(0.0);
    let init = sample_phase_point(&params, energy, config.seed)?;
    let (trajectory, diagnostics) = simulate(&params, init, config.dt, config.steps)?;
    let mut report = Report::new("simulate", &params);
    report.simulation = Some(SimulationOut {
        energy,
        seed: config.seed,
        dt: config.dt,
        steps: config.steps,
    });
    report.diagnostics = Some(diagnostics);
    if let Some(path) = &config.out {
        let file = fs::File::create(path).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        trajectory
            .write_csv(&params, std::io::BufWriter::new(file))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        report.csv = Some(path.display().to_string());
        report.notes.push(format!("csv columns: {CSV_HEADER}"));
    }
    Ok(report)
}

fn fmt_list<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(T::to_string).collect();
    format!("({})", items.join(","))
}

fn fmt_groups(groups: &[HomologyGroup]) -> String {
    HomologyProfile::from_groups(groups.to_vec()).to_string()
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let p = &r.params;
    s += &format!(
        "{}: m1={} m2={} l1={} l2={} g={}  slope k={}{}\n",
        r.command,
        p.m1,
        p.m2,
        p.l1,
        p.l2,
        p.g,
        r.slope,
        if r.degenerate { " (degenerate)" } else { "" }
    );
    for c in &r.critical_points {
        s += &format!("  {} z=({}, {}) V={} index {}\n", c.label, c.z1, c.z2, c.value, c.index);
    }
    for g in &r.regimes {
        s += &format!("  h={} -> {}", g.energy, g.tag);
        if let (Some(b), Some(z)) = (&g.betti, &g.integer_homology) {
            s += &format!("  betti {}  H = {}", fmt_list(b), fmt_groups(z));
        }
        s.push('\n');
    }
    for t in &r.table {
        s += &format!("  {} ≅ {}  betti {}  H = {}\n", t.band, t.homeomorphism_type, fmt_list(&t.betti), fmt_groups(&t.integer_homology));
    }
    for v in &r.verify {
        s += &format!(
            "  {} offset {} h={}: pair {} pipeline {} table {} {}\n",
            v.band,
            v.offset,
            v.energy,
            fmt_list(&v.oracle_pair_ranks),
            v.pipeline_betti.as_deref().map(fmt_list).unwrap_or_else(|| "-".into()),
            fmt_list(&v.table_row),
            if v.pass { "pass" } else { "FAIL" }
        );
        if let Some(e) = &v.error {
            s += &format!("    error: {e}\n");
        }
    }
    for o in &r.obstructions {
        s += &format!("  {} {}: {}", o.surface, o.criterion, o.verdict);
        if let (Some(l), Some(rh)) = (o.lhs, o.rhs) {
            s += &format!(" (lhs {l}, rhs {rh})");
        }
        s.push('\n');
        for c in &o.conditions {
            let status = match c.holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "not checked",
            };
            s += &format!("    {}: {} [{}]\n", c.name, status, c.detail);
        }
    }
    if let Some(sim) = &r.simulation {
        s += &format!("  h={} seed {} dt {} steps {}\n", sim.energy, sim.seed, sim.dt, sim.steps);
    }
    if let Some(d) = &r.diagnostics {
        s += &format!(
            "  energy drift {:e}  max residual {:e}  potential excess {:e}  regime {}\n",
            d.energy_drift,
            d.max_residual,
            d.potential_excess,
            d.regime.map(|t| t.to_string()).unwrap_or_else(|| "-".into())
        );
    }
    if let Some(c) = &r.csv {
        s += &format!("  csv: {c}\n");
    }
    for n in &r.notes {
        s += &format!("  note: {n}\n");
    }
    s
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Text => render_text(r),
    }
}

pub fn execute(command: Command, config: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Analyze => cmd_analyze(config),
        Command::Verify => cmd_verify(config),
        Command::Obstructions => cmd_obstructions(config),
        Command::Simulate => cmd_simulate(config),
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let result = RunConfig::from_flags(&cli.flags).and_then(|config| {
        let report = execute(cli.command, &config)?;
        Ok((config, report))
    });
    match result {
        Ok((config, report)) => {
            let text = render(&report, config.format);
            let to_file = cli.command != Command::Simulate;
            match (&config.out, to_file) {
                (Some(path), true) => {
                    if let Err(e) = fs::write(path, &text) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return EXIT_INVALID;
                    }
                }
                _ => {
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            if report.passed() {
                0
            } else {
                EXIT_MISMATCH
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::from_config_text("m1 = 2\nenergy = -1, 0.5\n# comment\nseed=7\nformat = text\n").unwrap();
        assert_eq!((c.m1, c.seed, c.format), (2.0, 7, Format::Text));
        assert_eq!(c.energies, vec![-1.0, 0.5]);
        c.apply(&Flags {
            m1: Some(3.0),
            energies: vec![2.0],
            ..Flags::default()
        });
        assert_eq!((c.m1, c.energies.as_slice(), c.seed), (3.0, &[2.0][..], 7));
        assert_eq!(RunConfig::from_config_text("bogus = 1").unwrap_err().code, EXIT_INVALID);
        assert_eq!(RunConfig::from_config_text("m1 = x").unwrap_err().code, EXIT_INVALID);
    }

    #[test]
    fn band_energies_for_unit_params() {
        let p = PendulumParams::unit();
        let mids: Vec<f64> = RegimeTag::SURFACES.iter().map(|&b| band_energy(&p, b, 0.0).unwrap()).collect();
        assert_eq!(mids, vec![-2.0, 0.0, 2.0, 6.0]);
        assert_eq!(band_energy(&p, RegimeTag::M2, 0.5).unwrap(), 0.5);
        assert!(band_energy(&p, RegimeTag::M2, 1.0).is_err());
    }

    #[test]
    fn analyze_and_exit_codes() {
        let run_args = |args: &[&str]| {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = run(std::iter::once("pendulum-topology").chain(args.iter().copied()), &mut out, &mut err);
            (code, String::from_utf8(out).unwrap())
        };
        let (code, out) = run_args(&["analyze", "--energy", "0"]);
        assert_eq!(code, 0);
        let json: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(json["regimes"][0]["tag"], "M2");
        assert_eq!(json["regimes"][0]["betti"], serde_json::json!([1, 0, 1, 0, 0, 1, 0, 1]));
        assert_eq!(json["critical_points"].as_array().unwrap().len(), 4);

        let (_, out) = run_args(&["analyze", "--energy", "-4"]);
        assert!(out.contains("\"Empty\""));
        assert_eq!(run_args(&["analyze", "--l2", "2", "--energy", "0"]).0, EXIT_DEGENERATE);
        assert_eq!(run_args(&["analyze", "--m1", "-1"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["simulate", "--energy", "-5"]).0, EXIT_EMPTY);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_INVALID);
    }

    #[test]
    fn obstruction_report() {
        let r = cmd_obstructions(&RunConfig::default()).unwrap();
        let geo: Vec<_> = r.obstructions.iter().filter(|o| o.criterion == "geodesic_flow").collect();
        assert_eq!(geo[2].lhs, Some(4));
        assert_eq!(geo[3].verdict, Verdict::NotApplicable);
        let q = r.obstructions.last().unwrap();
        assert_eq!((q.surface.as_str(), q.verdict), ("Q", Verdict::NoObstruction));
        assert_eq!(q.conditions.len(), 5);
    }
}
