use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// Smith normal form `U * A * V = D` of an integer matrix.
///
/// `D` is diagonal with positive entries `d_1 | d_2 | ... | d_r` followed by
/// zeros; `U` and `V` are unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    rows: usize,
    cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The diagonal matrix `D` with the shape of the input.
    pub fn diagonal(&self) -> IntegerMatrix {
        IntegerMatrix::from_triplets(
            self.rows,
            self.cols,
            self.divisors.iter().enumerate().map(|(i, d)| (i, i, d.clone())),
        )
    }
}

/// Computes the Smith normal form together with the unimodular transforms.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut dense = a.to_dense();
    let mut u = identity(m);
    let mut v = identity(n);
    let divisors = reduce(&mut dense, m, n, Some((&mut u, &mut v)));
    SmithForm {
        divisors,
        left: IntegerMatrix::from_dense_big(m, m, &u),
        right: IntegerMatrix::from_dense_big(n, n, &v),
        rows: m,
        cols: n,
    }
}

/// Invariant factors only; skips the bookkeeping of the transforms.
pub fn smith_divisors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut dense = a.to_dense();
    reduce(&mut dense, a.rows(), a.cols(), None)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

type Transforms<'a> = (&'a mut Vec<Vec<BigInt>>, &'a mut Vec<Vec<BigInt>>);

fn reduce(a: &mut [Vec<BigInt>], m: usize, n: usize, mut tf: Option<Transforms<'_>>) -> Vec<BigInt> {
    let mut divisors = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(a, t, m, n) else {
                return divisors;
            };
            if pi != t {
                a.swap(t, pi);
                if let Some((u, _)) = tf.as_mut() {
                    u.swap(t, pi);
                }
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                if let Some((_, v)) = tf.as_mut() {
                    for row in v.iter_mut() {
                        row.swap(t, pj);
                    }
                }
            }

            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &pivot;
                if !q.is_zero() {
                    row_axpy(a, i, t, &q);
                    if let Some((u, _)) = tf.as_mut() {
                        row_axpy(u, i, t, &q);
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &pivot;
                if !q.is_zero() {
                    col_axpy(a, j, t, &q);
                    if let Some((_, v)) = tf.as_mut() {
                        col_axpy(v, j, t, &q);
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            // the pivot must divide the rest of the block
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::from(-1);
                    row_axpy(a, t, i, &one);
                    if let Some((u, _)) = tf.as_mut() {
                        row_axpy(u, t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -std::mem::take(x);
            }
            if let Some((u, _)) = tf.as_mut() {
                for x in u[t].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        divisors.push(a[t][t].clone());
    }
    divisors
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize, m: usize, n: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().take(m).skip(t) {
        for (j, x) in row.iter().enumerate().take(n).skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                let unit = ax == BigInt::from(1);
                best = Some((i, j, ax));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// row[dst] -= q * row[src]
fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// col[dst] -= q * col[src]
fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
    }
}
