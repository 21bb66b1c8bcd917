//! Independent dense elimination over `Q`, written only for the tests.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every face of every generator, grouped by dimension.
pub fn closure(simplices: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        for mask in 1u32..(1 << s.len()) {
            all.insert(s.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| *v).collect());
        }
    }
    let top = all.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_dim = vec![Vec::new(); top];
    for s in all {
        by_dim[s.len() - 1].push(s);
    }
    by_dim
}

pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / pivot.clone();
                for k in c..cols {
                    let sub = m[rank][k].clone() * f.clone();
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_betti(simplices: &[Vec<usize>]) -> Vec<usize> {
    let faces = closure(simplices);
    let mut ranks = vec![0; faces.len() + 1];
    for k in 1..faces.len() {
        let mut m = vec![vec![BigRational::zero(); faces[k].len()]; faces[k - 1].len()];
        for (j, s) in faces[k].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let row = faces[k - 1].binary_search(&face).unwrap();
                let one = BigRational::one();
                m[row][j] = if i % 2 == 0 { one } else { -one };
            }
        }
        ranks[k] = dense_rank(m);
    }
    (0..faces.len()).map(|k| faces[k].len() - ranks[k] - ranks[k + 1]).collect()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> (usize, Vec<Vec<usize>>) {
    let n = rng.random_range(4..=8);
    let count = rng.random_range(2..=10);
    let simplices = (0..count)
        .map(|_| {
            let size = rng.random_range(1..=4);
            let mut s: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.random_range(i..n);
                s.swap(i, j);
            }
            s.truncate(size);
            s
        })
        .collect();
    (n, simplices)
}
