use num_bigint::BigInt;
use rayon::prelude::*;

use super::{normalize_torsion, rational_rank, smith_divisors, HomologyError, HomologyGroup, HomologyProfile, IntegerMatrix};

/// Free chain complex `C_n -> ... -> C_1 -> C_0` given by its boundary
/// matrices; `∂_k` has shape `rank C_{k-1} x rank C_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
}

#[derive(Clone, Debug)]
pub struct HomologyOptions {
    /// Largest boundary matrix (in nonzeros) handed to the integer Smith
    /// normal form.
    pub snf_nnz_cutoff: usize,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        Self { snf_nnz_cutoff: 20_000 }
    }
}

impl ChainComplex {
    /// `dims[k]` is the rank of `C_k`; `boundaries[k - 1]` is `∂_k`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntegerMatrix>) -> Result<Self, HomologyError> {
        if dims.is_empty() {
            if !boundaries.is_empty() {
                return Err(HomologyError::ShapeMismatch { degree: 1 });
            }
        } else if boundaries.len() != dims.len() - 1 {
            return Err(HomologyError::ShapeMismatch {
                degree: boundaries.len().min(dims.len()),
            });
        }
        for (i, d) in boundaries.iter().enumerate() {
            let k = i + 1;
            if d.rows() != dims[k - 1] || d.cols() != dims[k] {
                return Err(HomologyError::ShapeMismatch { degree: k });
            }
        }
        Ok(Self { dims, boundaries })
    }

    /// Top degree; `None` for the zero complex.
    pub fn top_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rank(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k` for `1 <= k <= top_degree`.
    pub fn boundary(&self, k: usize) -> Option<&IntegerMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// Verifies `∂_k ∂_{k+1} = 0` in every degree.
    pub fn check(&self) -> Result<(), HomologyError> {
        for (i, pair) in self.boundaries.windows(2).enumerate() {
            if !pair[0].mul(&pair[1]).is_zero() {
                return Err(HomologyError::InvalidComplex { degree: i + 1 });
            }
        }
        Ok(())
    }

    /// Quotient complex `C / C(A)`: keeps the basis elements outside `sub`.
    pub fn quotient(&self, sub: &Subcomplex) -> Result<ChainComplex, HomologyError> {
        sub.check_in(self)?;
        let keep: Vec<Vec<usize>> = (0..self.dims.len())
            .map(|k| {
                let selected = sub.degree(k);
                let mut mask = vec![true; self.dims[k]];
                for &i in selected {
                    mask[i] = false;
                }
                (0..self.dims[k]).filter(|&i| mask[i]).collect()
            })
            .collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, d)| d.select(&keep[i], &keep[i + 1]))
            .collect();
        let dims = keep.iter().map(Vec::len).collect();
        ChainComplex::new(dims, boundaries)
    }
}

/// Selection of basis elements per degree forming a subcomplex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    per_degree: Vec<Vec<usize>>,
}

impl Subcomplex {
    pub fn new(mut per_degree: Vec<Vec<usize>>) -> Self {
        for sel in &mut per_degree {
            sel.sort_unstable();
            sel.dedup();
        }
        Self { per_degree }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn degree(&self, k: usize) -> &[usize] {
        self.per_degree.get(k).map_or(&[], Vec::as_slice)
    }

    /// Face closure: every selected `k`-cell has its boundary inside the
    /// selected `(k-1)`-cells.
    pub fn check_in(&self, c: &ChainComplex) -> Result<(), HomologyError> {
        for (k, sel) in self.per_degree.iter().enumerate() {
            if sel.iter().any(|&i| i >= c.rank(k)) {
                return Err(HomologyError::NotASubcomplex { degree: k });
            }
            if k == 0 || sel.is_empty() {
                continue;
            }
            let below = self.degree(k - 1);
            let d = c.boundary(k).expect("degree within range");
            for &j in sel {
                if d.column(j).iter().any(|(i, _)| below.binary_search(i).is_err()) {
                    return Err(HomologyError::NotASubcomplex { degree: k });
                }
            }
        }
        Ok(())
    }

    /// The subcomplex as a chain complex in its own right.
    pub fn as_complex(&self, c: &ChainComplex) -> Result<ChainComplex, HomologyError> {
        self.check_in(c)?;
        let top = c.dims.len();
        let sel: Vec<&[usize]> = (0..top).map(|k| self.degree(k)).collect();
        let boundaries = (1..top)
            .map(|k| c.boundary(k).expect("in range").select(sel[k - 1], sel[k]))
            .collect();
        ChainComplex::new(sel.iter().map(|s| s.len()).collect(), boundaries)
    }
}

/// Homology of a chain complex with the default options.
pub fn homology(c: &ChainComplex, coeffs: Coefficients) -> Result<HomologyProfile, HomologyError> {
    homology_with(c, coeffs, &HomologyOptions::default())
}

pub fn homology_with(
    c: &ChainComplex,
    coeffs: Coefficients,
    opts: &HomologyOptions,
) -> Result<HomologyProfile, HomologyError> {
    c.check()?;
    let Some(top) = c.top_degree() else {
        return Ok(HomologyProfile::from_groups(Vec::new()));
    };

    // ranks[k] = rank ∂_k, with ∂_0 = ∂_{top+1} = 0
    let mut ranks = vec![0usize; top + 2];
    let mut torsion: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    match coeffs {
        Coefficients::Rationals => {
            let computed: Vec<usize> = c.boundaries.par_iter().map(rational_rank).collect();
            ranks[1..=top].copy_from_slice(&computed);
        }
        Coefficients::Integers => {
            for (i, d) in c.boundaries.iter().enumerate() {
                if d.nnz() > opts.snf_nnz_cutoff {
                    return Err(HomologyError::TooLargeForSmithForm {
                        degree: i + 1,
                        nnz: d.nnz(),
                        cutoff: opts.snf_nnz_cutoff,
                    });
                }
            }
            let divisors: Vec<Vec<BigInt>> = c.boundaries.par_iter().map(smith_divisors).collect();
            for (i, divs) in divisors.into_iter().enumerate() {
                let k = i + 1;
                ranks[k] = divs.len();
                let orders = divs
                    .into_iter()
                    .map(|d| u64::try_from(d).map_err(|_| HomologyError::TorsionOverflow { degree: k - 1 }))
                    .collect::<Result<Vec<_>, _>>()?;
                torsion[k - 1] = normalize_torsion(orders);
            }
        }
    }

    let groups = (0..=top)
        .map(|k| HomologyGroup {
            rank: c.dims[k] - ranks[k] - ranks[k + 1],
            torsion: std::mem::take(&mut torsion[k]),
        })
        .collect();
    Ok(HomologyProfile::from_groups(groups))
}

/// Homology of the pair `(X, A)`, computed on the quotient complex.
pub fn relative_homology(
    c: &ChainComplex,
    sub: &Subcomplex,
    coeffs: Coefficients,
) -> Result<HomologyProfile, HomologyError> {
    homology(&c.quotient(sub)?, coeffs)
}

/// Checks that the dimensions of a finite sequence flanked by zeros are
/// compatible with exactness: the ranks forced by rank-nullity stay
/// non-negative and the last map vanishes.
pub fn exact_dims_consistent(dims: &[usize]) -> bool {
    let mut incoming: i64 = 0;
    for &d in dims {
        let outgoing = d as i64 - incoming;
        if outgoing < 0 {
            return false;
        }
        incoming = outgoing;
    }
    incoming == 0
}

/// Rank-level exactness of the long exact sequence of a pair,
/// `... -> H_k(A) -> H_k(X) -> H_k(X,A) -> H_{k-1}(A) -> ...`.
pub fn pair_sequence_consistent(x: &HomologyProfile, a: &HomologyProfile, rel: &HomologyProfile) -> bool {
    let top = [x.top_degree(), a.top_degree(), rel.top_degree()]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0);
    let mut dims = Vec::with_capacity(3 * (top + 1));
    for k in (0..=top).rev() {
        dims.extend([a.betti(k), x.betti(k), rel.betti(k)]);
    }
    exact_dims_consistent(&dims)
}
