//! Rank over the rationals by sparse fraction-free column reduction.
//!
//! Columns are reduced left to right against earlier pivots keyed by their
//! lowest nonzero row. When the pivot does not divide the entry being
//! cleared, both columns are scaled by cofactors (no division ever happens)
//! and the result is divided by the gcd of its entries. Arithmetic runs in
//! checked `i64` first and restarts in `BigInt` on overflow.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::IntegerMatrix;

trait Exact: Clone + Debug + PartialEq {
    fn is_zero(&self) -> bool;
    fn divides(&self, other: &Self) -> bool;
    fn checked_div_exact(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl Exact for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn divides(&self, other: &Self) -> bool {
        other.checked_rem(*self) == Some(0)
    }
    fn checked_div_exact(&self, other: &Self) -> Option<Self> {
        i64::checked_div(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i64::checked_mul(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i64::checked_sub(*self, *other)
    }
    fn gcd(&self, other: &Self) -> Self {
        // a smaller common factor is still a valid cofactor choice
        if *self == i64::MIN || *other == i64::MIN {
            return 1;
        }
        Integer::gcd(self, other)
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl Exact for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn divides(&self, other: &Self) -> bool {
        Zero::is_zero(&(other % self))
    }
    fn checked_div_exact(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
}

type Column<T> = Vec<(usize, T)>;

struct Overflow;

/// Rank of `m` over the rationals.
pub fn rational_rank(m: &IntegerMatrix) -> usize {
    let small: Option<Vec<Column<i64>>> = m
        .columns()
        .map(|col| col.iter().map(|(i, v)| v.to_i64().map(|x| (*i, x))).collect())
        .collect();
    if let Some(columns) = small {
        if let Ok(r) = reduce(columns, m.rows()) {
            return r;
        }
    }
    let big: Vec<Column<BigInt>> = m.columns().map(<[_]>::to_vec).collect();
    match reduce(big, m.rows()) {
        Ok(r) => r,
        Err(Overflow) => unreachable!("BigInt arithmetic cannot overflow"),
    }
}

fn reduce<T: Exact>(columns: Vec<Column<T>>, nrows: usize) -> Result<usize, Overflow> {
    let mut pivot_col: Vec<Option<usize>> = vec![None; nrows];
    let mut reduced: Vec<Column<T>> = Vec::with_capacity(columns.len());
    let mut rank = 0;
    for mut col in columns {
        while let Some((low, a)) = col.last().cloned() {
            match pivot_col[low] {
                Some(p) => {
                    col = eliminate(&col, &reduced[p], &a)?;
                }
                None => {
                    pivot_col[low] = Some(reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        reduced.push(col);
    }
    Ok(rank)
}

/// Clears the lowest entry `a` of `col` using `pivot`, whose lowest entry sits
/// in the same row.
fn eliminate<T: Exact>(col: &Column<T>, pivot: &Column<T>, a: &T) -> Result<Column<T>, Overflow> {
    let p = &pivot.last().expect("pivot column is nonempty").1;
    let (scale, factor) = if p.divides(a) {
        (None, a.checked_div_exact(p).ok_or(Overflow)?)
    } else {
        let g = p.gcd(a);
        (
            Some(p.checked_div_exact(&g).ok_or(Overflow)?),
            a.checked_div_exact(&g).ok_or(Overflow)?,
        )
    };

    let mut out: Column<T> = Vec::with_capacity(col.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < col.len() || j < pivot.len() {
        let ri = col.get(i).map_or(usize::MAX, |e| e.0);
        let rj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (row, value) = if ri < rj {
            let v = match &scale {
                Some(s) => col[i].1.checked_mul(s).ok_or(Overflow)?,
                None => col[i].1.clone(),
            };
            i += 1;
            (ri, v)
        } else if rj < ri {
            let v = zero_like(&pivot[j].1)
                .checked_sub(&pivot[j].1.checked_mul(&factor).ok_or(Overflow)?)
                .ok_or(Overflow)?;
            j += 1;
            (rj, v)
        } else {
            let lhs = match &scale {
                Some(s) => col[i].1.checked_mul(s).ok_or(Overflow)?,
                None => col[i].1.clone(),
            };
            let v = lhs
                .checked_sub(&pivot[j].1.checked_mul(&factor).ok_or(Overflow)?)
                .ok_or(Overflow)?;
            i += 1;
            j += 1;
            (ri, v)
        };
        if !value.is_zero() {
            out.push((row, value));
        }
    }

    if scale.is_some() {
        let content = out
            .iter()
            .fold(None::<T>, |g, (_, v)| Some(g.map_or_else(|| v.clone(), |g| g.gcd(v))));
        if let Some(g) = content {
            if !g.is_unit() {
                for (_, v) in &mut out {
                    *v = v.checked_div_exact(&g).ok_or(Overflow)?;
                }
            }
        }
    }
    Ok(out)
}

fn zero_like<T: Exact>(x: &T) -> T {
    // x - x avoids needing a separate constructor on the trait
    x.checked_sub(x).expect("x - x never overflows")
}
