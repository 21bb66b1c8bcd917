//! Rank bookkeeping in long exact sequences.
//!
//! A finite exact sequence `0 -> A_0 -> A_1 -> ... -> A_m -> 0` over a
//! field is determined, at the level of dimensions, by the ranks `r_i` of
//! its maps through `dim A_i = r_{i-1} + r_i`. The solver propagates these
//! equations: a zero term kills both adjacent maps, an equation with one
//! unknown is solved outright, an isomorphism pins three quantities at once.
//! Every forced value is logged so reports can show which rule produced it.
//!
//! On top of the solver sit the Gysin sequence of a sphere bundle, its
//! relative version, and the pair sequence used to recover the homology of
//! an energy surface from that of its projection to configuration space.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{
    connected_sum, kunneth, HomologyError, HomologyGroup, HomologyProfile,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("dimensions are not compatible with exactness at {at}: {detail}")]
    Inconsistent { at: String, detail: String },
    #[error("exactness does not force {}", .labels.join(", "))]
    Underdetermined { labels: Vec<String> },
    #[error("sphere bundles need fiber dimension at least 1")]
    InvalidFiber,
    #[error("Euler number is zero; the sequence splits and the free ranks are {free_ranks}")]
    ZeroEuler { free_ranks: HomologyProfile },
    #[error("base homology has torsion; only torsion-free bases are handled")]
    TorsionPresent,
    #[error("profile has β_1 = {0}; surgery here assumes a simply connected manifold")]
    NotSimplyConnected(usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A term of an exact sequence: a labelled vector space whose dimension may
/// be known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub dim: Option<usize>,
}

impl Term {
    pub fn known(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim: Some(dim),
        }
    }

    pub fn unknown(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            dim: None,
        }
    }
}

/// What is known about a map between consecutive terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapRank {
    Unknown,
    Known(usize),
    /// The map is an isomorphism (rank equals both dimensions).
    Iso,
}

/// `0 -> terms[0] -> terms[1] -> ... -> terms[m] -> 0`; `maps[i]` goes from
/// `terms[i]` to `terms[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceSpec {
    pub terms: Vec<Term>,
    pub maps: Vec<MapRank>,
}

impl ExactSequenceSpec {
    /// Sequence with no information about the maps.
    pub fn new(terms: Vec<Term>) -> Self {
        let maps = vec![MapRank::Unknown; terms.len().saturating_sub(1)];
        Self { terms, maps }
    }

    pub fn with_map(mut self, index: usize, rank: MapRank) -> Self {
        self.maps[index] = rank;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `dim A_i = rank(in) + rank(out)` with one side unknown.
    RankNullity,
    /// A zero term forces the maps on both sides to vanish.
    ZeroTerm,
    /// A map declared to be an isomorphism.
    Isomorphism,
    /// The connecting map `H_4(M, ∂) -> H_3(∂)` is an isomorphism.
    BoundaryIsomorphism,
    /// `β_k = β_{n-k}` on a closed orientable `n`-manifold.
    PoincareDuality,
    /// Cokernel of multiplication by the Euler number on `Z`.
    EulerCokernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduction {
    pub quantity: String,
    pub value: usize,
    pub rule: Rule,
}

/// Whatever exactness forces; unforced quantities stay `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub dims: Vec<Option<usize>>,
    /// Ranks of the maps `terms[i] -> terms[i+1]`.
    pub ranks: Vec<Option<usize>>,
    pub trace: Vec<Deduction>,
}

impl ExactSolution {
    pub fn is_complete(&self) -> bool {
        self.dims.iter().all(Option::is_some)
    }
}

/// Solves for every dimension forced by exactness. Fails with
/// `Underdetermined` if an unknown term stays free.
pub fn solve_exact(spec: &ExactSequenceSpec) -> Result<ExactSolution, SequenceError> {
    let solution = propagate(spec)?;
    let free: Vec<String> = spec
        .terms
        .iter()
        .zip(&solution.dims)
        .filter(|(_, d)| d.is_none())
        .map(|(t, _)| t.label.clone())
        .collect();
    if free.is_empty() {
        Ok(solution)
    } else {
        Err(SequenceError::Underdetermined { labels: free })
    }
}

/// Runs the propagation rules to a fixed point without requiring that
/// every unknown is determined.
pub fn propagate(spec: &ExactSequenceSpec) -> Result<ExactSolution, SequenceError> {
    let m = spec.terms.len();
    assert_eq!(spec.maps.len(), m.saturating_sub(1), "one map between each pair of terms");
    let mut dims: Vec<Option<usize>> = spec.terms.iter().map(|t| t.dim).collect();
    // ranks[i] is the map into terms[i]; ranks[0] and ranks[m] border the
    // flanking zeros.
    let mut ranks: Vec<Option<usize>> = vec![None; m + 1];
    ranks[0] = Some(0);
    ranks[m] = Some(0);
    for (i, map) in spec.maps.iter().enumerate() {
        if let MapRank::Known(r) = map {
            ranks[i + 1] = Some(*r);
        }
    }
    let mut trace = Vec::new();
    let map_label = |i: usize| -> String {
        format!("rank({} -> {})", spec.terms[i - 1].label, spec.terms[i].label)
    };

    let inconsistent = |i: usize, detail: String| SequenceError::Inconsistent {
        at: spec.terms[i].label.clone(),
        detail,
    };

    loop {
        let mut changed = false;

        for (i, map) in spec.maps.iter().enumerate() {
            if *map != MapRank::Iso {
                continue;
            }
            let (a, b, r) = (i, i + 1, i + 1);
            let known = dims[a].or(dims[b]).or(ranks[r]);
            if let Some(v) = known {
                let mut fill = |slot: &mut Option<usize>, label: String| -> Result<(), SequenceError> {
                    match *slot {
                        Some(x) if x != v => Err(inconsistent(a, format!("isomorphism between spaces of dimension {x} and {v}"))),
                        Some(_) => Ok(()),
                        None => {
                            *slot = Some(v);
                            trace.push(Deduction { quantity: label, value: v, rule: Rule::Isomorphism });
                            changed = true;
                            Ok(())
                        }
                    }
                };
                fill(&mut dims[a], spec.terms[a].label.clone())?;
                fill(&mut dims[b], spec.terms[b].label.clone())?;
                fill(&mut ranks[r], map_label(r))?;
            }
        }

        for i in 0..m {
            if dims[i] == Some(0) {
                for r in [i, i + 1] {
                    match ranks[r] {
                        Some(0) => {}
                        Some(x) => return Err(inconsistent(i, format!("map of rank {x} touches a zero space"))),
                        None => {
                            ranks[r] = Some(0);
                            trace.push(Deduction { quantity: map_label(r), value: 0, rule: Rule::ZeroTerm });
                            changed = true;
                        }
                    }
                }
            }
            match (dims[i], ranks[i], ranks[i + 1]) {
                (Some(d), Some(a), Some(b)) => {
                    if d != a + b {
                        return Err(inconsistent(i, format!("dimension {d} but incoming rank {a} and outgoing rank {b}")));
                    }
                }
                (None, Some(a), Some(b)) => {
                    dims[i] = Some(a + b);
                    trace.push(Deduction {
                        quantity: spec.terms[i].label.clone(),
                        value: a + b,
                        rule: Rule::RankNullity,
                    });
                    changed = true;
                }
                (Some(d), Some(a), None) => {
                    let b = d.checked_sub(a).ok_or_else(|| inconsistent(i, format!("incoming rank {a} exceeds dimension {d}")))?;
                    ranks[i + 1] = Some(b);
                    if i + 1 < m {
                        trace.push(Deduction { quantity: map_label(i + 1), value: b, rule: Rule::RankNullity });
                    }
                    changed = true;
                }
                (Some(d), None, Some(b)) => {
                    let a = d.checked_sub(b).ok_or_else(|| inconsistent(i, format!("outgoing rank {b} exceeds dimension {d}")))?;
                    ranks[i] = Some(a);
                    if i > 0 {
                        trace.push(Deduction { quantity: map_label(i), value: a, rule: Rule::RankNullity });
                    }
                    changed = true;
                }
                _ => {}
            }
        }

        // a map cannot have rank above either end
        for r in 1..m {
            if let Some(x) = ranks[r] {
                for d in [dims[r - 1], dims[r]].into_iter().flatten() {
                    if x > d {
                        return Err(inconsistent(r, format!("map of rank {x} into or out of dimension {d}")));
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }

    Ok(ExactSolution {
        dims,
        ranks: ranks[1..m].to_vec(),
        trace,
    })
}

/// Term layout of the Gysin sequence of an `S^k`-bundle `E -> B`:
/// `... -> H_i(E) -> H_i(B) -> H_{i-k-1}(B) -> H_{i-1}(E) -> ...`.
/// `psi(i)` is what is known about `H_i(B) -> H_{i-k-1}(B)`.
fn gysin_spec(
    base: &HomologyProfile,
    k: usize,
    total_name: &str,
    base_name: &str,
    psi: impl Fn(usize) -> MapRank,
) -> (ExactSequenceSpec, Vec<(usize, usize)>) {
    let n = base.top_degree().unwrap_or(0);
    let total_dim = n + k;
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut total_terms = Vec::new();
    for i in (0..=total_dim + 1).rev() {
        if i <= total_dim {
            total_terms.push((i, terms.len()));
            terms.push(Term::unknown(format!("H_{i}({total_name})")));
        } else {
            terms.push(Term::known(format!("H_{i}({total_name})"), 0));
        }
        maps.push(MapRank::Unknown);
        terms.push(Term::known(format!("H_{i}({base_name})"), base.betti(i)));
        let lower = i.checked_sub(k + 1);
        maps.push(match lower {
            Some(_) => psi(i),
            None => MapRank::Known(0),
        });
        match lower {
            Some(j) => terms.push(Term::known(format!("H_{j}({base_name})"), base.betti(j))),
            None => terms.push(Term::known(format!("H_{}({base_name})", i as i64 - k as i64 - 1), 0)),
        }
        maps.push(MapRank::Unknown);
    }
    maps.pop();
    (ExactSequenceSpec { terms, maps }, total_terms)
}

fn read_profile(solution: &ExactSolution, spec: &ExactSequenceSpec, positions: &[(usize, usize)]) -> Result<HomologyProfile, SequenceError> {
    let missing: Vec<String> = positions
        .iter()
        .filter(|(_, p)| solution.dims[*p].is_none())
        .map(|(_, p)| spec.terms[*p].label.clone())
        .collect();
    if !missing.is_empty() {
        return Err(SequenceError::Underdetermined { labels: missing });
    }
    let top = positions.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let mut betti = vec![0; top + 1];
    for (d, p) in positions {
        betti[*d] = solution.dims[*p].expect("checked above");
    }
    Ok(HomologyProfile::from_betti(&betti))
}

/// A profile with the rules that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub profile: HomologyProfile,
    pub trace: Vec<Deduction>,
}

/// Rational homology of the total space of an oriented `S^k`-bundle over a
/// closed oriented manifold with homology `base`.
///
/// Only the Euler-class map out of the top degree is specified
/// (`psi_rank_at_top`: 1 when the Euler number is nonzero); any other
/// Euler-class map that exactness cannot pin down makes the result
/// `Underdetermined`.
pub fn gysin_total_space(base: &HomologyProfile, k: usize, psi_rank_at_top: usize) -> Result<Derived, SequenceError> {
    if k == 0 {
        return Err(SequenceError::InvalidFiber);
    }
    let n = base.top_degree().unwrap_or(0);
    let (spec, positions) = gysin_spec(&base.free_part(), k, "E", "B", |i| {
        if i == n {
            MapRank::Known(psi_rank_at_top)
        } else {
            MapRank::Unknown
        }
    });
    let solution = propagate(&spec)?;
    let profile = read_profile(&solution, &spec, &positions)?;
    Ok(Derived {
        profile,
        trace: solution.trace,
    })
}

/// Rank of the Euler-class map `H_n(B) -> H_0(B)` of the unit tangent
/// bundle over a field: multiplication by the Euler number.
pub fn psi_rank_from_euler(euler: i64) -> usize {
    usize::from(euler != 0)
}

/// Integer homology of the unit tangent bundle (fiber `S^{n-1}`) of a
/// closed oriented `n`-manifold with torsion-free homology and Euler
/// number `euler`.
///
/// The segment `0 -> H_n(E) -> Z --(×e)--> Z -> H_{n-1}(E) -> H_{n-1}(B) -> 0`
/// gives `H_n(E) ≅ H_1(B)` and `H_{n-1}(E) ≅ H_{n-1}(B) ⊕ Z/e`; all other
/// degrees are free and follow from the rational ranks.
pub fn unit_tangent_integer_homology(base: &HomologyProfile, euler: i64) -> Result<Derived, SequenceError> {
    if !base.is_torsion_free() {
        return Err(SequenceError::TorsionPresent);
    }
    let n = base.top_degree().unwrap_or(0);
    if n < 2 {
        return Err(SequenceError::InvalidFiber);
    }
    let rational = gysin_total_space(base, n - 1, psi_rank_from_euler(euler))?;
    if euler == 0 {
        return Err(SequenceError::ZeroEuler {
            free_ranks: rational.profile,
        });
    }
    let mut groups: Vec<HomologyGroup> = rational.profile.groups().to_vec();
    let order = euler.unsigned_abs();
    let mut trace = rational.trace;
    if order > 1 {
        groups[n - 1].torsion = vec![order];
    }
    trace.push(Deduction {
        quantity: format!("torsion H_{}(E)", n - 1),
        value: order as usize,
        rule: Rule::EulerCokernel,
    });
    Ok(Derived {
        profile: HomologyProfile::from_groups(groups),
        trace,
    })
}

/// Relative homology of a pair `(X, A)` with, when known, the absolute
/// homology of both spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairProfile {
    pub relative: HomologyProfile,
    pub space: Option<HomologyProfile>,
    pub subspace: Option<HomologyProfile>,
}

impl PairProfile {
    pub fn from_relative(relative: HomologyProfile) -> Self {
        Self {
            relative,
            space: None,
            subspace: None,
        }
    }
}

/// Relative Gysin sequence: from `H(B, C)` to `H(X, K)` for an `S^k`-bundle
/// `X -> B` with `K` the preimage of `C`. Total-space ranks are read up to
/// degree `top(B, C) + k`.
pub fn relative_gysin(pair: &PairProfile, k: usize) -> Result<Derived, SequenceError> {
    if k == 0 {
        return Err(SequenceError::InvalidFiber);
    }
    let (spec, positions) = gysin_spec(&pair.relative.free_part(), k, "X,K", "B,C", |_| MapRank::Unknown);
    let solution = propagate(&spec)?;
    let profile = read_profile(&solution, &spec, &positions)?;
    Ok(Derived {
        profile,
        trace: solution.trace,
    })
}

/// Degree of the connecting map taken to be an isomorphism in
/// [`energy_surface_betti`].
pub const BOUNDARY_ISOMORPHISM_DEGREE: usize = 4;

/// Betti numbers of a closed orientable manifold `M` from the relative
/// homology of `(M, A)` and the homology of `A`, where `A` is the preimage
/// of the boundary of the accessible region.
///
/// Uses, in order: the long exact sequence of the pair, the fact that the
/// connecting map `H_4(M, A) -> H_3(A)` is an isomorphism, and Poincaré
/// duality on `M` for whatever is still free.
pub fn energy_surface_betti(pair: &PairProfile, boundary: &HomologyProfile) -> Result<Derived, SequenceError> {
    let n = pair.relative.top_degree().unwrap_or(0);
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut positions = Vec::new();
    let mut boundary_map = None;
    for k in (0..=n + 1).rev() {
        terms.push(Term::known(format!("H_{k}(A)"), boundary.betti(k)));
        maps.push(MapRank::Unknown);
        if k <= n {
            positions.push((k, terms.len()));
            terms.push(Term::unknown(format!("H_{k}(M)")));
        } else {
            terms.push(Term::known(format!("H_{k}(M)"), 0));
        }
        maps.push(MapRank::Unknown);
        terms.push(Term::known(format!("H_{k}(M,A)"), pair.relative.betti(k)));
        if k == BOUNDARY_ISOMORPHISM_DEGREE {
            boundary_map = Some(maps.len());
        }
        maps.push(MapRank::Unknown);
    }
    maps.pop();
    let mut spec = ExactSequenceSpec { terms, maps };

    let mut trace = Vec::new();
    if let Some(idx) = boundary_map {
        let (from, to) = (pair.relative.betti(BOUNDARY_ISOMORPHISM_DEGREE), boundary.betti(BOUNDARY_ISOMORPHISM_DEGREE - 1));
        if from != to {
            return Err(SequenceError::Inconsistent {
                at: spec.terms[idx].label.clone(),
                detail: format!("connecting map must be an isomorphism but dimensions are {from} and {to}"),
            });
        }
        spec.maps[idx] = MapRank::Known(from);
        trace.push(Deduction {
            quantity: format!("rank(H_{}(M,A) -> H_{}(A))", BOUNDARY_ISOMORPHISM_DEGREE, BOUNDARY_ISOMORPHISM_DEGREE - 1),
            value: from,
            rule: Rule::BoundaryIsomorphism,
        });
    }

    loop {
        let solution = propagate(&spec)?;
        trace.extend(solution.trace.iter().cloned());
        let value = |k: usize| positions.iter().find(|(d, _)| *d == k).and_then(|(_, p)| solution.dims[*p]);
        let mut progress = false;
        for &(k, p) in &positions {
            if solution.dims[p].is_some() {
                spec.terms[p].dim = solution.dims[p];
                continue;
            }
            if let Some(v) = value(n - k) {
                spec.terms[p].dim = Some(v);
                trace.push(Deduction {
                    quantity: spec.terms[p].label.clone(),
                    value: v,
                    rule: Rule::PoincareDuality,
                });
                progress = true;
            }
        }
        if solution.is_complete() || !progress {
            let solution = propagate(&spec)?;
            let profile = read_profile(&solution, &spec, &positions)?;
            return Ok(Derived { profile, trace: dedup_trace(trace) });
        }
    }
}

fn dedup_trace(trace: Vec<Deduction>) -> Vec<Deduction> {
    let mut seen = std::collections::HashSet::new();
    trace.into_iter().filter(|d| seen.insert(d.quantity.clone())).collect()
}

/// Homology of the preimage of `∂U` for the bands where `U` has a
/// boundary: `S^3` below the first saddle band and above it, `S^2 x S^1`
/// in the band between the saddles.
pub fn boundary_profile_for_band(band: crate::mechanics::RegimeTag) -> Option<HomologyProfile> {
    use crate::mechanics::RegimeTag;
    match band {
        RegimeTag::M1 | RegimeTag::M3 => Some(HomologyProfile::sphere(3)),
        RegimeTag::M2 => Some(HomologyProfile::from_betti(&[1, 1, 1, 1])),
        _ => None,
    }
}

/// `H(U, ∂U)` (fiber `S^3` over the interior) to the Betti numbers of the
/// energy surface: relative Gysin followed by the pair sequence.
pub fn energy_surface_from_region(region_pair: &HomologyProfile, boundary: &HomologyProfile) -> Result<Derived, SequenceError> {
    let lifted = relative_gysin(&PairProfile::from_relative(region_pair.clone()), 3)?;
    let mut result = energy_surface_betti(&PairProfile::from_relative(lifted.profile.padded(7)), boundary)?;
    let mut trace = lifted.trace;
    trace.append(&mut result.trace);
    result.trace = trace;
    Ok(result)
}

/// Betti-level effect of the index-2 surgery on a simply connected closed
/// `n`-manifold: connected sum with `S^2 x S^{n-2}`.
pub fn surgery_connected_sum(m: &HomologyProfile, n: usize) -> Result<HomologyProfile, SequenceError> {
    if n < 4 {
        return Err(HomologyError::DimensionMismatch {
            expected: 4,
            found: Some(n),
        }
        .into());
    }
    if m.betti(1) != 0 {
        return Err(SequenceError::NotSimplyConnected(m.betti(1)));
    }
    let handle = kunneth(&HomologyProfile::sphere(2), &HomologyProfile::sphere(n - 2))?;
    Ok(connected_sum(m, &handle, n)?)
}
