//! Line-oriented text format for complexes, matrices and homology profiles.
//!
//! One record per line, blank lines and `#` comments ignored:
//!
//! ```text
//! vertices 4
//! simplex 0 1 2
//! simplex 1 2 3
//!
//! matrix 3 3
//! entry 0 1 -1
//!
//! chain 3 3 1
//! boundary 1
//! entry 0 0 -1
//!
//! profile
//! H 0 1
//! H 3 0 4
//! ```
//!
//! `chain` lists the ranks of `C_0, C_1, ...`; the `entry` lines after
//! `boundary k` are the nonzeros of `∂_k`. A profile line `H k r t1 t2 ...`
//! is rank `r` plus cyclic summands of orders `t_i`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::complexes::{ComplexError, SimplicialComplex};
use crate::homology::{ChainComplex, HomologyError, HomologyGroup, HomologyProfile, IntegerMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| err(line, format!("cannot parse {s:?}")))
}

fn nums<T: std::str::FromStr>(line: usize, items: &[&str]) -> Result<Vec<T>, FormatError> {
    items.iter().map(|s| num(line, s)).collect()
}

pub fn write_complex(c: &SimplicialComplex) -> String {
    let mut out = format!("vertices {}\n", c.vertex_count());
    for s in c.simplices() {
        let vs: Vec<String> = s.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "simplex {}", vs.join(" "));
    }
    out
}

pub fn read_complex(text: &str) -> Result<SimplicialComplex, FormatError> {
    let mut count = None;
    let mut simplices = Vec::new();
    for (line, words) in records(text) {
        match words[0] {
            "vertices" if words.len() == 2 => count = Some(num(line, words[1])?),
            "simplex" if words.len() >= 2 => simplices.push(nums(line, &words[1..])?),
            other => return Err(err(line, format!("unexpected record {other:?}"))),
        }
    }
    let count = count.ok_or_else(|| err(0, "missing vertices record"))?;
    Ok(SimplicialComplex::new(count, simplices)?)
}

fn write_entries(out: &mut String, m: &IntegerMatrix) {
    for (i, j, v) in m.triplets() {
        let _ = writeln!(out, "entry {i} {j} {v}");
    }
}

fn parse_entry(line: usize, words: &[&str]) -> Result<(usize, usize, BigInt), FormatError> {
    if words.len() != 4 {
        return Err(err(line, "entry needs row, column and value"));
    }
    Ok((num(line, words[1])?, num(line, words[2])?, num(line, words[3])?))
}

fn build(line: usize, rows: usize, cols: usize, entries: Vec<(usize, usize, BigInt)>) -> Result<IntegerMatrix, FormatError> {
    if let Some((i, j, _)) = entries.iter().find(|(i, j, _)| *i >= rows || *j >= cols) {
        return Err(err(line, format!("entry ({i}, {j}) outside {rows}x{cols}")));
    }
    Ok(IntegerMatrix::from_triplets(rows, cols, entries))
}

pub fn write_matrix(m: &IntegerMatrix) -> String {
    let mut out = format!("matrix {} {}\n", m.rows(), m.cols());
    write_entries(&mut out, m);
    out
}

pub fn read_matrix(text: &str) -> Result<IntegerMatrix, FormatError> {
    let mut shape = None;
    let mut entries = Vec::new();
    let mut last = 0;
    for (line, words) in records(text) {
        last = line;
        match words[0] {
            "matrix" if words.len() == 3 => shape = Some((num(line, words[1])?, num(line, words[2])?)),
            "entry" => entries.push(parse_entry(line, &words)?),
            other => return Err(err(line, format!("unexpected record {other:?}"))),
        }
    }
    let (rows, cols) = shape.ok_or_else(|| err(0, "missing matrix record"))?;
    build(last, rows, cols, entries)
}

pub fn write_chain_complex(c: &ChainComplex) -> String {
    let dims: Vec<String> = c.dims().iter().map(usize::to_string).collect();
    let mut out = format!("chain {}\n", dims.join(" "));
    for k in 1..c.dims().len() {
        let _ = writeln!(out, "boundary {k}");
        if let Some(d) = c.boundary(k) {
            write_entries(&mut out, d);
        }
    }
    out
}

pub fn read_chain_complex(text: &str) -> Result<ChainComplex, FormatError> {
    let mut dims: Option<Vec<usize>> = None;
    let mut entries: Vec<Vec<(usize, usize, BigInt)>> = Vec::new();
    let mut current = None;
    for (line, words) in records(text) {
        match words[0] {
            "chain" => {
                let d: Vec<usize> = nums(line, &words[1..])?;
                entries = vec![Vec::new(); d.len().saturating_sub(1)];
                dims = Some(d);
            }
            "boundary" if words.len() == 2 => {
                let k: usize = num(line, words[1])?;
                if k == 0 || k > entries.len() {
                    return Err(err(line, format!("no boundary map in degree {k}")));
                }
                current = Some(k);
            }
            "entry" => {
                let k = current.ok_or_else(|| err(line, "entry before any boundary record"))?;
                entries[k - 1].push(parse_entry(line, &words)?);
            }
            other => return Err(err(line, format!("unexpected record {other:?}"))),
        }
    }
    let dims = dims.ok_or_else(|| err(0, "missing chain record"))?;
    let boundaries = entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| build(0, dims[i], dims[i + 1], e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChainComplex::new(dims, boundaries)?)
}

pub fn write_profile(p: &HomologyProfile) -> String {
    let mut out = String::from("profile\n");
    for (k, g) in p.groups().iter().enumerate() {
        let _ = write!(out, "H {k} {}", g.rank);
        for t in &g.torsion {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

pub fn read_profile(text: &str) -> Result<HomologyProfile, FormatError> {
    let mut groups: Vec<HomologyGroup> = Vec::new();
    let mut seen_header = false;
    for (line, words) in records(text) {
        match words[0] {
            "profile" => seen_header = true,
            "H" if words.len() >= 3 => {
                let k: usize = num(line, words[1])?;
                if k != groups.len() {
                    return Err(err(line, format!("expected degree {}, found {k}", groups.len())));
                }
                groups.push(HomologyGroup {
                    rank: num(line, words[2])?,
                    torsion: nums(line, &words[3..])?,
                });
            }
            other => return Err(err(line, format!("unexpected record {other:?}"))),
        }
    }
    if !seen_header {
        return Err(err(0, "missing profile record"));
    }
    Ok(HomologyProfile::from_groups(groups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::sphere_complex;

    #[test]
    fn complex_round_trip() {
        let s2 = sphere_complex(2);
        let text = write_complex(&s2);
        assert!(text.starts_with("vertices 4\n"));
        assert_eq!(read_complex(&text).unwrap(), s2);
    }

    #[test]
    fn chain_and_matrix_round_trip() {
        let c = sphere_complex(3).chain_complex();
        assert_eq!(read_chain_complex(&write_chain_complex(&c)).unwrap(), c);
        let m = IntegerMatrix::from_dense(&[vec![2, 0, -7], vec![0, 0, 1]]);
        assert_eq!(read_matrix(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn profile_round_trip_keeps_torsion() {
        let p = HomologyProfile::from_groups(vec![
            HomologyGroup::free(1),
            HomologyGroup::free(0),
            HomologyGroup::free(2),
            HomologyGroup { rank: 0, torsion: vec![4] },
        ]);
        let text = write_profile(&p);
        assert!(text.contains("H 3 0 4\n"));
        assert_eq!(read_profile(&text).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "vertices 3\n# ok\nsimplex 0 x\n";
        assert!(matches!(read_complex(bad), Err(FormatError::Parse { line: 3, .. })));
        assert!(matches!(read_matrix("matrix 1 1\nentry 2 0 1\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(read_complex("vertices 2\nsimplex 0 5\n"), Err(FormatError::Complex(_))));
        assert!(matches!(
            read_chain_complex("chain 1 1\nboundary 1\nentry 0 0 1\nentry 0 0 -1\nboundary 1\n"),
            Ok(_)
        ));
    }
}
