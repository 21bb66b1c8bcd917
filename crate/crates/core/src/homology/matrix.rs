use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse integer matrix with arbitrary-precision entries, stored by column.
///
/// Each column is a list of `(row, value)` pairs sorted by row with no
/// explicit zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (j, col) in m.columns.iter_mut().enumerate() {
            col.push((j, BigInt::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate
    /// positions are summed.
    ///
    /// Panics if a triplet lies outside the `rows x cols` shape.
    pub fn from_triplets<I, T>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
        T: Into<BigInt>,
    {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "entry ({i}, {j}) outside {rows}x{cols}");
            columns[j].push((i, v.into()));
        }
        for col in &mut columns {
            col.sort_by_key(|(i, _)| *i);
            let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(col.len());
            for (i, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((last, acc)) if *last == i => *acc += v,
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *col = merged;
        }
        Self { rows, cols, columns }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i, j, *v))
        });
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn from_dense_big(rows: usize, cols: usize, dense: &[Vec<BigInt>]) -> Self {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (i, row) in dense.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[j].push((i, v.clone()));
                }
            }
        }
        Self { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, BigInt)]> {
        self.columns.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols);
        match self.columns[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Iterates over the nonzero entries as `(row, col, value)` in
    /// column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            dense[i][j] = v.clone();
        }
        dense
    }

    pub fn transpose(&self) -> Self {
        let triplets: Vec<_> = self.triplets().map(|(i, j, v)| (j, i, v.clone())).collect();
        Self::from_triplets(self.cols, self.rows, triplets)
    }

    /// Sparse product `self * rhs`.
    ///
    /// Panics on a shape mismatch.
    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut columns = Vec::with_capacity(rhs.cols);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        for rcol in &rhs.columns {
            for (k, b) in rcol {
                for (i, a) in &self.columns[*k] {
                    if acc[*i].is_zero() {
                        touched.push(*i);
                    }
                    acc[*i] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::new();
            for &i in &touched {
                let v = std::mem::take(&mut acc[i]);
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            touched.clear();
            columns.push(col);
        }
        IntegerMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    /// Submatrix on the given (sorted, distinct) row and column indices,
    /// reindexed to `0..rows.len()` and `0..cols.len()`.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut row_map = vec![usize::MAX; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            row_map[old] = new;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .filter(|(i, _)| row_map[*i] != usize::MAX)
                    .map(|(i, v)| (row_map[*i], v.clone()))
                    .collect()
            })
            .collect();
        IntegerMatrix {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows * self.cols <= 144 {
            writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(f, "  {}", cells.join(" "))?;
            }
            write!(f, "]")
        } else {
            write!(f, "IntegerMatrix {}x{} ({} nonzeros)", self.rows, self.cols, self.nnz())
        }
    }
}
