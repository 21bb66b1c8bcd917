//! Homological tests for three kinds of dynamical structure on an energy
//! surface: being the unit tangent bundle of a geodesic flow, admitting a
//! global cross section, and integrability with tame integrals.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::HomologyProfile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("criterion needs {expected}, got {found}")]
    BadDimension { expected: String, found: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ObstructionFound,
    NoObstruction,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    GeodesicFlow,
    CrossSection,
    Integrability,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::GeodesicFlow => "geodesic_flow",
            Criterion::CrossSection => "cross_section",
            Criterion::Integrability => "integrability",
        })
    }
}

/// Outcome of one named condition. `holds` is `None` when the condition is
/// not tested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub criterion: Criterion,
    pub verdict: Verdict,
    /// Left and right side of the identity, when there is a single one.
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub conditions: Vec<Condition>,
}

impl ObstructionVerdict {
    /// Recomputes the verdict from the stored numbers.
    pub fn reevaluate(&self) -> Verdict {
        match self.criterion {
            Criterion::GeodesicFlow => match (self.lhs, self.rhs) {
                (Some(l), Some(r)) if l != r => Verdict::ObstructionFound,
                (Some(_), Some(_)) => Verdict::NoObstruction,
                _ => Verdict::NotApplicable,
            },
            Criterion::CrossSection => {
                if self.conditions.iter().any(|c| c.holds == Some(false)) {
                    Verdict::ObstructionFound
                } else {
                    Verdict::NoObstruction
                }
            }
            Criterion::Integrability => {
                if self.conditions.iter().any(|c| matches!((c.lhs, c.rhs), (Some(l), Some(r)) if l > r)) {
                    Verdict::ObstructionFound
                } else {
                    Verdict::NoObstruction
                }
            }
        }
    }
}

fn b(p: &HomologyProfile, k: usize) -> i64 {
    p.betti(k) as i64
}

/// Necessary condition for a closed `(2n-1)`-manifold to be the unit
/// tangent bundle of an orientable `n`-manifold with torsion-free homology:
///
/// `|Σ_{i=0}^{n-2} (-1)^i β_i + (-1)^n (1 - β_{2n-2})| = 1 + β_1 - β_n`.
///
/// Nonempty torsion in degree `n - 1` puts the surface outside the scope of
/// the identity.
pub fn geodesic_flow_check(p: &HomologyProfile, torsion_n_minus_1: &[u64], n: usize) -> Result<ObstructionVerdict, ObstructionError> {
    if n <= 2 {
        return Err(ObstructionError::BadDimension {
            expected: "half-dimension n > 2".into(),
            found: format!("n = {n}"),
        });
    }
    if let Some(top) = p.top_degree() {
        if top > 2 * n - 1 {
            return Err(ObstructionError::BadDimension {
                expected: format!("a profile of dimension {}", 2 * n - 1),
                found: format!("top degree {top}"),
            });
        }
    }
    let torsion: Vec<u64> = torsion_n_minus_1.iter().copied().filter(|&t| t > 1).collect();
    if !torsion.is_empty() {
        return Ok(ObstructionVerdict {
            criterion: Criterion::GeodesicFlow,
            verdict: Verdict::NotApplicable,
            lhs: None,
            rhs: None,
            conditions: vec![Condition {
                name: format!("torsion-free H_{}", n - 1),
                lhs: None,
                rhs: None,
                holds: Some(false),
                detail: format!("torsion {torsion:?}"),
            }],
        });
    }
    let alternating: i64 = (0..=n - 2).map(|i| if i % 2 == 0 { b(p, i) } else { -b(p, i) }).sum();
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let lhs = (alternating + sign * (1 - b(p, 2 * n - 2))).abs();
    let rhs = 1 + b(p, 1) - b(p, n);
    let verdict = if lhs == rhs {
        Verdict::NoObstruction
    } else {
        Verdict::ObstructionFound
    };
    Ok(ObstructionVerdict {
        criterion: Criterion::GeodesicFlow,
        verdict,
        lhs: Some(lhs),
        rhs: Some(rhs),
        conditions: vec![Condition {
            name: "unit tangent bundle identity".into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            holds: Some(lhs == rhs),
            detail: format!("|alternating sum| = {lhs}, 1 + β_1 - β_{n} = {rhs}"),
        }],
    })
}

/// Necessary conditions for a flow to admit a global cross section of
/// finite type. The fibering over the circle is not tested.
pub fn cross_section_check(p: &HomologyProfile, chi: i64, has_equilibria: bool) -> ObstructionVerdict {
    let h1 = p.group(1);
    let conditions = vec![
        Condition {
            name: "fibers over the circle".into(),
            lhs: None,
            rhs: None,
            holds: None,
            detail: "not checked".into(),
        },
        Condition {
            name: "Euler characteristic vanishes".into(),
            lhs: Some(chi),
            rhs: Some(0),
            holds: Some(chi == 0),
            detail: format!("χ = {chi}"),
        },
        Condition {
            name: "H_1 has a Z summand".into(),
            lhs: Some(h1.rank as i64),
            rhs: Some(1),
            holds: Some(h1.rank >= 1),
            detail: format!("H_1 = {h1}"),
        },
        Condition {
            name: "no equilibria".into(),
            lhs: None,
            rhs: None,
            holds: Some(!has_equilibria),
            detail: if has_equilibria { "rest points present" } else { "no rest points" }.into(),
        },
    ];
    let verdict = if conditions.iter().any(|c| c.holds == Some(false)) {
        Verdict::ObstructionFound
    } else {
        Verdict::NoObstruction
    };
    ObstructionVerdict {
        criterion: Criterion::CrossSection,
        verdict,
        lhs: None,
        rhs: None,
        conditions,
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `β_k(Q) <= C(n, k)` for `k = 0..=n`, necessary for a system on the
/// `n`-manifold `Q` to have `n` independent integrals in involution that
/// are analytic (or, more generally, geometrically simple).
pub fn integrability_check(q: &HomologyProfile, n: usize) -> Result<ObstructionVerdict, ObstructionError> {
    if let Some(top) = q.top_degree() {
        if top > n && (n + 1..=top).any(|k| q.betti(k) != 0) {
            return Err(ObstructionError::BadDimension {
                expected: format!("a profile of dimension at most {n}"),
                found: format!("top degree {top}"),
            });
        }
    }
    let conditions: Vec<Condition> = (0..=n)
        .map(|k| {
            let (l, r) = (b(q, k), binomial(n, k));
            Condition {
                name: format!("β_{k} <= C({n},{k})"),
                lhs: Some(l),
                rhs: Some(r),
                holds: Some(l <= r),
                detail: format!("{l} <= {r}"),
            }
        })
        .collect();
    let verdict = if conditions.iter().all(|c| c.holds == Some(true)) {
        Verdict::NoObstruction
    } else {
        Verdict::ObstructionFound
    };
    Ok(ObstructionVerdict {
        criterion: Criterion::Integrability,
        verdict,
        lhs: None,
        rhs: None,
        conditions,
    })
}
