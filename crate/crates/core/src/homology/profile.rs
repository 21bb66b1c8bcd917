use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{smith_divisors, HomologyError, IntegerMatrix};

/// One homology group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m` with `t_i | t_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Homology in degrees `0..=top_degree`. Degrees outside that range are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn from_groups(groups: Vec<HomologyGroup>) -> Self {
        Self { groups }
    }

    pub fn from_betti(betti: &[usize]) -> Self {
        Self {
            groups: betti.iter().map(|&b| HomologyGroup::free(b)).collect(),
        }
    }

    pub fn point() -> Self {
        Self::from_betti(&[1])
    }

    pub fn sphere(n: usize) -> Self {
        let mut betti = vec![0; n + 1];
        betti[0] += 1;
        betti[n] += 1;
        Self::from_betti(&betti)
    }

    /// `None` for an empty profile (the empty space).
    pub fn top_degree(&self) -> Option<usize> {
        self.groups.len().checked_sub(1)
    }

    pub fn groups(&self) -> &[HomologyGroup] {
        &self.groups
    }

    pub fn group(&self, k: usize) -> HomologyGroup {
        self.groups.get(k).cloned().unwrap_or_default()
    }

    pub fn betti(&self, k: usize) -> usize {
        self.groups.get(k).map_or(0, |g| g.rank)
    }

    pub fn torsion(&self, k: usize) -> &[u64] {
        self.groups.get(k).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    /// Same free ranks with the torsion dropped (homology over a field of
    /// characteristic zero).
    pub fn free_part(&self) -> Self {
        Self::from_betti(&self.betti_numbers())
    }

    /// Pads with zero groups up to `top` so two profiles can be compared
    /// degree by degree.
    pub fn padded(&self, top: usize) -> Self {
        let mut groups = self.groups.clone();
        if groups.len() < top + 1 {
            groups.resize(top + 1, HomologyGroup::default());
        }
        Self { groups }
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.groups.iter().map(ToString::to_string).collect();
        write!(f, "({})", cells.join(", "))
    }
}

/// Rational Künneth formula: `β_k(X×Y) = Σ_{i+j=k} β_i(X) β_j(Y)`.
pub fn kunneth(p: &HomologyProfile, q: &HomologyProfile) -> Result<HomologyProfile, HomologyError> {
    if !p.is_torsion_free() || !q.is_torsion_free() {
        return Err(HomologyError::TorsionPresent);
    }
    let (Some(n), Some(m)) = (p.top_degree(), q.top_degree()) else {
        return Ok(HomologyProfile::from_groups(Vec::new()));
    };
    let mut betti = vec![0; n + m + 1];
    for i in 0..=n {
        for j in 0..=m {
            betti[i + j] += p.betti(i) * q.betti(j);
        }
    }
    Ok(HomologyProfile::from_betti(&betti))
}

/// Homology of the connected sum of two closed connected orientable
/// `n`-manifolds: middle degrees add, `H_0 = H_n = Z`.
pub fn connected_sum(
    p: &HomologyProfile,
    q: &HomologyProfile,
    n: usize,
) -> Result<HomologyProfile, HomologyError> {
    for profile in [p, q] {
        let top = profile.top_degree();
        if top != Some(n) {
            return Err(HomologyError::DimensionMismatch {
                expected: n,
                found: top,
            });
        }
        if profile.group(0) != HomologyGroup::free(1) || profile.group(n) != HomologyGroup::free(1) {
            return Err(HomologyError::NotClosedConnected);
        }
    }
    let mut groups = Vec::with_capacity(n + 1);
    groups.push(HomologyGroup::free(1));
    for i in 1..n {
        let (a, b) = (p.group(i), q.group(i));
        let torsion = normalize_torsion(a.torsion.iter().chain(&b.torsion).copied());
        groups.push(HomologyGroup {
            rank: a.rank + b.rank,
            torsion,
        });
    }
    if n > 0 {
        groups.push(HomologyGroup::free(1));
    }
    Ok(HomologyProfile::from_groups(groups))
}

pub fn euler_characteristic(p: &HomologyProfile) -> i64 {
    p.betti_numbers()
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

/// `β_i = β_{n-i}` for every `i` in `0..=n`, with ranks above the top
/// degree counted as zero.
pub fn poincare_dual_check(p: &HomologyProfile, n: usize) -> bool {
    if p.top_degree().is_some_and(|t| t > n) && (n + 1..p.groups.len()).any(|k| p.betti(k) != 0) {
        return false;
    }
    (0..=n).all(|i| p.betti(i) == p.betti(n - i))
}

/// Rewrites a list of cyclic orders as invariant factors `t_1 | t_2 | ...`,
/// dropping trivial factors.
pub fn normalize_torsion(orders: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let orders: Vec<u64> = orders.into_iter().filter(|&t| t > 1).collect();
    if orders.len() <= 1 {
        return orders;
    }
    let diag = IntegerMatrix::from_triplets(
        orders.len(),
        orders.len(),
        orders.iter().enumerate().map(|(i, &t)| (i, i, BigInt::from(t))),
    );
    smith_divisors(&diag)
        .into_iter()
        .filter_map(|d| u64::try_from(d).ok())
        .filter(|&d| d > 1)
        .collect()
}
