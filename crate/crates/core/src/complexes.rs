//! Concrete simplicial complexes: spheres, the subdivided icosahedron, the
//! staircase product, and the sublevel/superlevel pieces of the
//! configuration space `S^2 x S^2` cut out by the potential.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::homology::{
    homology, relative_homology, ChainComplex, Coefficients, HomologyError, HomologyProfile, IntegerMatrix,
    Subcomplex,
};
use crate::mechanics::{self, PendulumParams};

/// Simplices have at most this many vertices (dimension 7).
pub const MAX_VERTICES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range for a complex on {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("simplices with more than {MAX_VERTICES} vertices are not supported")]
    DimensionTooLarge,
    #[error("vertex coordinate {vertex} is not a unit vector")]
    NotOnSphere { vertex: usize },
    #[error("complex carries no potential field")]
    MissingField,
    #[error("level {level} is within {tol:e} of the vertex value {value}")]
    LevelTooCloseToVertex { level: f64, value: f64, tol: f64 },
    #[error("level {level} is within {tol:e} of the critical value {value}")]
    NonMorseLevel { level: f64, value: f64, tol: f64 },
    #[error("subcomplex contains a simplex {0:?} that is not in the complex")]
    NotASubcomplex(Vec<usize>),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A finite simplicial complex given by generating simplices (faces are
/// implied), with optional vertex coordinates and a scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<usize>>,
    coordinates: Option<Vec<Vec<f64>>>,
    field: Option<Vec<f64>>,
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, simplices: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        let mut normalized = Vec::with_capacity(simplices.len());
        for mut s in simplices {
            if s.len() > MAX_VERTICES {
                return Err(ComplexError::DimensionTooLarge);
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange { vertex: v, count: vertex_count });
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(s));
            }
            if !s.is_empty() {
                normalized.push(s);
            }
        }
        normalized.sort();
        normalized.dedup();
        Ok(Self {
            vertex_count,
            simplices: normalized,
            coordinates: None,
            field: None,
        })
    }

    /// Attaches per-vertex coordinates. Three-dimensional coordinates are
    /// taken as points of `S^2` and must have unit norm.
    pub fn with_coordinates(mut self, coords: Vec<Vec<f64>>) -> Result<Self, ComplexError> {
        assert_eq!(coords.len(), self.vertex_count, "one coordinate per vertex");
        for (vertex, c) in coords.iter().enumerate() {
            if c.len() == 3 {
                let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(ComplexError::NotOnSphere { vertex });
                }
            }
        }
        self.coordinates = Some(coords);
        Ok(self)
    }

    pub fn with_field(mut self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.vertex_count, "one field value per vertex");
        self.field = Some(values);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Generating simplices as sorted vertex lists.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn coordinates(&self) -> Option<&[Vec<f64>]> {
        self.coordinates.as_deref()
    }

    pub fn field(&self) -> Option<&[f64]> {
        self.field.as_deref()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Every face, grouped by dimension and sorted lexicographically.
    pub fn faces(&self) -> Faces {
        let top = self.dimension().map_or(0, |d| d + 1);
        let mut by_dim: Vec<Vec<Key>> = vec![Vec::new(); top];
        for s in &self.simplices {
            let n = s.len();
            for mask in 1u32..(1 << n) {
                let mut key = [u32::MAX; MAX_VERTICES];
                let mut len = 0;
                for (bit, &v) in s.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        key[len] = v as u32;
                        len += 1;
                    }
                }
                by_dim[len - 1].push(key);
            }
        }
        for list in &mut by_dim {
            list.sort_unstable();
            list.dedup();
        }
        Faces { by_dim }
    }

    /// Counts `(f_0, f_1, ...)` of faces per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces().by_dim.iter().map(Vec::len).collect()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        self.faces().chain_complex()
    }

    pub fn homology(&self, coeffs: Coefficients) -> Result<HomologyProfile, ComplexError> {
        Ok(homology(&self.chain_complex(), coeffs)?)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Subcomplex of all simplices whose vertices satisfy `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        let mask: Vec<bool> = (0..self.vertex_count).map(&keep).collect();
        let simplices = self
            .simplices
            .iter()
            .map(|s| s.iter().copied().filter(|&v| mask[v]).collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect();
        let mut sub = SimplicialComplex::new(self.vertex_count, simplices).expect("faces of a valid complex");
        sub.coordinates = self.coordinates.clone();
        sub.field = self.field.clone();
        sub
    }

    fn require_field(&self) -> Result<&[f64], ComplexError> {
        self.field.as_deref().ok_or(ComplexError::MissingField)
    }
}

type Key = [u32; MAX_VERTICES];

fn key_len(k: &Key) -> usize {
    k.iter().position(|&v| v == u32::MAX).unwrap_or(MAX_VERTICES)
}

/// All faces of a complex with a fixed (lexicographic) basis order.
#[derive(Clone, Debug)]
pub struct Faces {
    by_dim: Vec<Vec<Key>>,
}

impl Faces {
    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, Vec::len)
    }

    pub fn simplex(&self, dim: usize, index: usize) -> Vec<usize> {
        let k = &self.by_dim[dim][index];
        k[..key_len(k)].iter().map(|&v| v as usize).collect()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        let mut key = [u32::MAX; MAX_VERTICES];
        for (slot, &v) in key.iter_mut().zip(simplex) {
            *slot = v as u32;
        }
        self.by_dim.get(dim)?.binary_search(&key).ok()
    }

    /// Simplicial chain complex; the facet opposite vertex position `i`
    /// enters with sign `(-1)^i`.
    pub fn chain_complex(&self) -> ChainComplex {
        let dims: Vec<usize> = self.by_dim.iter().map(Vec::len).collect();
        let mut boundaries = Vec::with_capacity(dims.len().saturating_sub(1));
        for d in 1..self.by_dim.len() {
            let lower = &self.by_dim[d - 1];
            let mut triplets = Vec::with_capacity(self.by_dim[d].len() * (d + 1));
            for (j, s) in self.by_dim[d].iter().enumerate() {
                for i in 0..=d {
                    let mut facet = [u32::MAX; MAX_VERTICES];
                    let mut len = 0;
                    for (pos, &v) in s[..=d].iter().enumerate() {
                        if pos != i {
                            facet[len] = v;
                            len += 1;
                        }
                    }
                    let row = lower.binary_search(&facet).expect("faces are closed under taking facets");
                    let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                    triplets.push((row, j, BigInt::from(sign)));
                }
            }
            boundaries.push(IntegerMatrix::from_triplets(dims[d - 1], dims[d], triplets));
        }
        ChainComplex::new(dims, boundaries).expect("boundary shapes follow face counts")
    }

    /// Selection of the faces all of whose vertices satisfy `keep`.
    pub fn full_selection(&self, keep: impl Fn(usize) -> bool) -> Subcomplex {
        let per_degree = self
            .by_dim
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .filter(|(_, k)| k[..key_len(k)].iter().all(|&v| keep(v as usize)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Subcomplex::new(per_degree)
    }
}

/// A complex `X` with a subcomplex `A` on the same vertex set.
#[derive(Clone, Debug)]
pub struct SimplicialPair {
    pub complex: SimplicialComplex,
    pub subcomplex: SimplicialComplex,
}

impl SimplicialPair {
    pub fn new(complex: SimplicialComplex, subcomplex: SimplicialComplex) -> Result<Self, ComplexError> {
        let faces = complex.faces();
        for s in subcomplex.simplices() {
            if faces.index_of(s).is_none() {
                return Err(ComplexError::NotASubcomplex(s.clone()));
            }
        }
        Ok(Self { complex, subcomplex })
    }

    /// `H(X, A)` from the quotient chain complex.
    pub fn relative_homology(&self, coeffs: Coefficients) -> Result<HomologyProfile, ComplexError> {
        let faces = self.complex.faces();
        let sub_faces = self.subcomplex.faces();
        let per_degree = (0..sub_faces.by_dim.len())
            .map(|d| {
                (0..sub_faces.count(d))
                    .map(|i| faces.index_of(&sub_faces.simplex(d, i)).expect("checked at construction"))
                    .collect()
            })
            .collect();
        let selection = Subcomplex::new(per_degree);
        Ok(relative_homology(&faces.chain_complex(), &selection, coeffs)?)
    }
}

/// Boundary of the `(n+1)`-simplex.
pub fn sphere_complex(n: usize) -> SimplicialComplex {
    let verts = n + 2;
    let simplices = (0..verts)
        .map(|skip| (0..verts).filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::new(verts, simplices).expect("valid by construction")
}

/// The full `n`-simplex (a disk).
pub fn simplex_complex(n: usize) -> SimplicialComplex {
    SimplicialComplex::new(n + 1, vec![(0..=n).collect()]).expect("valid by construction")
}

/// Icosahedron with vertices at both poles, subdivided `level` times by
/// edge midpoints pushed out to the unit sphere.
pub fn subdivided_sphere2(level: u32) -> SimplicialComplex {
    let mut points: Vec<[f64; 3]> = Vec::with_capacity(10 * 4usize.pow(level) + 2);
    points.push([0.0, 0.0, 1.0]);
    let ring_z = 1.0 / 5f64.sqrt();
    let ring_r = 2.0 / 5f64.sqrt();
    let tau = std::f64::consts::TAU;
    for i in 0..5 {
        let a = tau * i as f64 / 5.0;
        points.push([ring_r * a.cos(), ring_r * a.sin(), ring_z]);
    }
    for i in 0..5 {
        let a = tau * (i as f64 + 0.5) / 5.0;
        points.push([ring_r * a.cos(), ring_r * a.sin(), -ring_z]);
    }
    points.push([0.0, 0.0, -1.0]);

    let (north, south) = (0usize, 11usize);
    let upper = |i: usize| 1 + i % 5;
    let lower = |i: usize| 6 + i % 5;
    let mut triangles: Vec<[usize; 3]> = Vec::with_capacity(20);
    for i in 0..5 {
        triangles.push([north, upper(i), upper(i + 1)]);
        triangles.push([upper(i), upper(i + 1), lower(i)]);
        triangles.push([lower(i), lower(i + 1), upper(i + 1)]);
        triangles.push([south, lower(i), lower(i + 1)]);
    }

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, points: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let (p, q) = (points[a], points[b]);
                let m = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                points.push([m[0] / n, m[1] / n, m[2] / n]);
                points.len() - 1
            })
        };
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for [a, b, c] in triangles {
            let ab = mid(a, b, &mut points);
            let bc = mid(b, c, &mut points);
            let ca = mid(c, a, &mut points);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        triangles = next;
    }

    let coords = points.iter().map(|p| p.to_vec()).collect();
    SimplicialComplex::new(points.len(), triangles.iter().map(|t| t.to_vec()).collect())
        .and_then(|c| c.with_coordinates(coords))
        .expect("valid by construction")
}

/// Staircase triangulation of `|K| x |L|`.
///
/// Vertex `(a, b)` becomes `a * |V(L)| + b`. A `p`-simplex of `K` times a
/// `q`-simplex of `L` is cut into the `C(p+q, p)` simplices given by the
/// monotone lattice paths through the grid of vertex pairs. Coordinates,
/// when both factors have them, are concatenated.
pub fn product_complex(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    let nl = l.vertex_count;
    let mut simplices = Vec::new();
    for s in &k.simplices {
        for t in &l.simplices {
            let (p, q) = (s.len() - 1, t.len() - 1);
            if p + q + 1 > MAX_VERTICES {
                return Err(ComplexError::DimensionTooLarge);
            }
            for path in staircase_paths(p, q) {
                let (mut i, mut j) = (0, 0);
                let mut simplex = Vec::with_capacity(p + q + 1);
                simplex.push(s[0] * nl + t[0]);
                for step_in_k in path {
                    if step_in_k {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    simplex.push(s[i] * nl + t[j]);
                }
                simplices.push(simplex);
            }
        }
    }
    let mut product = SimplicialComplex::new(k.vertex_count * nl, simplices)?;
    if let (Some(ck), Some(cl)) = (&k.coordinates, &l.coordinates) {
        let coords = ck
            .iter()
            .flat_map(|a| cl.iter().map(move |b| a.iter().chain(b).copied().collect()))
            .collect();
        product.coordinates = Some(coords);
    }
    Ok(product)
}

/// All interleavings of `p` steps in the first factor with `q` steps in the
/// second (`true` = first factor).
fn staircase_paths(p: usize, q: usize) -> Vec<Vec<bool>> {
    fn go(p: usize, q: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if p == 0 && q == 0 {
            out.push(prefix.clone());
            return;
        }
        if p > 0 {
            prefix.push(true);
            go(p - 1, q, prefix, out);
            prefix.pop();
        }
        if q > 0 {
            prefix.push(false);
            go(p, q - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(p, q, &mut Vec::new(), &mut out);
    out
}

/// Tolerances for cutting a complex at a level of its vertex field.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCheck {
    /// Minimum distance between the level and any vertex value. `None`
    /// accepts vertices on the level; they count as sublevel vertices, which
    /// reads the level as `c + 0⁺`.
    pub tol_level: Option<f64>,
    /// Critical values of the underlying smooth function.
    pub critical_values: Vec<f64>,
    pub tol_crit: f64,
}

impl LevelCheck {
    fn check(&self, field: &[f64], c: f64) -> Result<(), ComplexError> {
        if let Some(&value) = self.critical_values.iter().find(|v| (c - **v).abs() <= self.tol_crit) {
            return Err(ComplexError::NonMorseLevel { level: c, value, tol: self.tol_crit });
        }
        if let Some(tol) = self.tol_level {
            if let Some(&value) = field.iter().find(|v| (c - **v).abs() <= tol) {
                return Err(ComplexError::LevelTooCloseToVertex { level: c, value, tol });
            }
        }
        Ok(())
    }
}

/// The pair `(Q, A_c)` with `A_c` the full subcomplex on vertices where the
/// field exceeds `c`. Its relative homology stands in for `H(U_c, ∂U_c)`
/// with `U_c = {V <= c}`.
pub fn superlevel_pair(q: &SimplicialComplex, c: f64, check: &LevelCheck) -> Result<SimplicialPair, ComplexError> {
    let field = q.require_field()?;
    check.check(field, c)?;
    let sub = q.full_subcomplex(|v| field[v] > c);
    Ok(SimplicialPair {
        complex: q.clone(),
        subcomplex: sub,
    })
}

/// Full subcomplex on the vertices where the field is at most `c`.
pub fn sublevel_complex(q: &SimplicialComplex, c: f64, check: &LevelCheck) -> Result<SimplicialComplex, ComplexError> {
    let field = q.require_field()?;
    check.check(field, c)?;
    Ok(q.full_subcomplex(|v| field[v] <= c))
}

/// The triangulated configuration space `S^2 x S^2` with the potential of
/// the pendulum on its vertices.
#[derive(Clone, Debug)]
pub struct ConfigurationSpace {
    pub params: PendulumParams,
    pub level: u32,
    pub complex: SimplicialComplex,
    faces: Faces,
    chain: ChainComplex,
}

impl ConfigurationSpace {
    pub fn new(params: PendulumParams, level: u32) -> Self {
        let sphere = subdivided_sphere2(level);
        let product = product_complex(&sphere, &sphere).expect("dimension 4 fits");
        let field = product
            .coordinates()
            .expect("both factors carry coordinates")
            .iter()
            .map(|c| mechanics::potential_at_heights(&params, c[2], c[5]))
            .collect();
        let complex = product.with_field(field);
        let faces = complex.faces();
        let chain = faces.chain_complex();
        Self {
            params,
            level,
            complex,
            faces,
            chain,
        }
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn faces(&self) -> &Faces {
        &self.faces
    }

    pub fn field(&self) -> &[f64] {
        self.complex.field().expect("set at construction")
    }

    pub fn level_check(&self) -> LevelCheck {
        let critical_values = mechanics::critical_points(&self.params)
            .map(|d| d.points.iter().map(|p| p.potential_value).collect())
            .unwrap_or_default();
        LevelCheck {
            tol_level: None,
            critical_values,
            tol_crit: self.params.tol_crit(),
        }
    }

    pub fn homology(&self) -> Result<HomologyProfile, ComplexError> {
        Ok(homology(&self.chain, Coefficients::Rationals)?)
    }

    /// Ranks of `H(Q, {V > c})`, which equal those of `H(U_c, ∂U_c)`.
    pub fn superlevel_relative_homology(&self, c: f64) -> Result<HomologyProfile, ComplexError> {
        let field = self.field();
        self.level_check().check(field, c)?;
        let selection = self.faces.full_selection(|v| field[v] > c);
        Ok(relative_homology(&self.chain, &selection, Coefficients::Rationals)?)
    }

    /// Ranks of the sublevel complex `{V <= c}`.
    pub fn sublevel_homology(&self, c: f64) -> Result<HomologyProfile, ComplexError> {
        let field = self.field();
        self.level_check().check(field, c)?;
        let selection = self.faces.full_selection(|v| field[v] <= c);
        Ok(homology(&selection.as_complex(&self.chain)?, Coefficients::Rationals)?)
    }

    pub fn sublevel_euler_characteristic(&self, c: f64) -> Result<i64, ComplexError> {
        let field = self.field();
        self.level_check().check(field, c)?;
        let selection = self.faces.full_selection(|v| field[v] <= c);
        Ok((0..=4)
            .map(|d| {
                let n = selection.degree(d).len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranks(c: &SimplicialComplex) -> Vec<usize> {
        c.homology(Coefficients::Rationals).unwrap().betti_numbers()
    }

    #[test]
    fn spheres() {
        let s1 = sphere_complex(1);
        assert_eq!(s1.vertex_count(), 3);
        assert_eq!(s1.f_vector(), vec![3, 3]);
        assert_eq!(ranks(&s1), vec![1, 1]);
        assert_eq!(ranks(&sphere_complex(2)), vec![1, 0, 1]);
        assert_eq!(ranks(&sphere_complex(3)), vec![1, 0, 0, 1]);
        assert_eq!(ranks(&sphere_complex(0)), vec![2]);
    }

    #[test]
    fn icosahedron_counts() {
        let s0 = subdivided_sphere2(0);
        assert_eq!((s0.vertex_count(), s0.simplices().len()), (12, 20));
        let s1 = subdivided_sphere2(1);
        assert_eq!((s1.vertex_count(), s1.simplices().len()), (42, 80));
        assert_eq!(subdivided_sphere2(2).simplices().len(), 320);
        for level in 0..3 {
            assert_eq!(ranks(&subdivided_sphere2(level)), vec![1, 0, 1]);
        }
    }

    #[test]
    fn icosahedron_keeps_poles() {
        let s = subdivided_sphere2(2);
        let zs: Vec<f64> = s.coordinates().unwrap().iter().map(|c| c[2]).collect();
        assert!(zs.contains(&1.0) && zs.contains(&-1.0));
    }

    #[test]
    fn off_sphere_coordinates_rejected() {
        let c = sphere_complex(1).with_coordinates(vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert_eq!(c.unwrap_err(), ComplexError::NotOnSphere { vertex: 1 });
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(staircase_paths(2, 2).len(), 6);
        assert_eq!(staircase_paths(1, 3).len(), 4);
        let prism = product_complex(&simplex_complex(2), &simplex_complex(1)).unwrap();
        assert_eq!(prism.simplices().len(), 3);
        assert_eq!(ranks(&prism), vec![1, 0, 0, 0]);
    }

    #[test]
    fn products_of_spheres() {
        let circle_times_point = product_complex(&sphere_complex(1), &simplex_complex(0)).unwrap();
        assert_eq!(ranks(&circle_times_point), vec![1, 1]);
        let torus = product_complex(&sphere_complex(1), &sphere_complex(1)).unwrap();
        assert_eq!(ranks(&torus), vec![1, 2, 1]);
        let s2s2 = product_complex(&sphere_complex(2), &sphere_complex(2)).unwrap();
        assert_eq!(ranks(&s2s2), vec![1, 0, 2, 0, 1]);
        assert_eq!(s2s2.chain_complex().check(), Ok(()));
    }

    #[test]
    fn pair_validation() {
        let disk = simplex_complex(2);
        let stray = SimplicialComplex::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(SimplicialPair::new(sphere_complex(1), stray).is_err());
        let boundary = sphere_complex(1);
        let pair = SimplicialPair::new(disk, boundary).unwrap();
        assert_eq!(pair.relative_homology(Coefficients::Integers).unwrap().betti_numbers(), vec![0, 0, 1]);
    }

    #[test]
    fn level_checks() {
        let space = ConfigurationSpace::new(PendulumParams::unit(), 0);
        let check = space.level_check();
        assert!(matches!(
            superlevel_pair(&space.complex, 1.0, &check),
            Err(ComplexError::NonMorseLevel { .. })
        ));
        let vertex_value = space.field()[7];
        assert!(check.critical_values.iter().all(|v| (v - vertex_value).abs() > 1e-6));
        assert!(sublevel_complex(&space.complex, vertex_value, &check).is_ok());
        let strict = LevelCheck { tol_level: Some(1e-9), ..check.clone() };
        assert!(matches!(
            sublevel_complex(&space.complex, vertex_value, &strict),
            Err(ComplexError::LevelTooCloseToVertex { .. })
        ));
        assert_eq!(
            sublevel_complex(&sphere_complex(1), 0.0, &check).unwrap_err(),
            ComplexError::MissingField
        );
    }

    #[test]
    fn coarse_bands() {
        let space = ConfigurationSpace::new(PendulumParams::unit(), 0);
        assert_eq!(space.homology().unwrap().betti_numbers(), vec![1, 0, 2, 0, 1]);
        assert_eq!(space.sublevel_homology(-2.0).unwrap().betti_numbers(), vec![1, 0, 0, 0, 0]);
        assert_eq!(space.sublevel_homology(0.0).unwrap().betti_numbers(), vec![1, 0, 1, 0, 0]);
        assert_eq!(space.sublevel_homology(2.0).unwrap().betti_numbers(), vec![1, 0, 2, 0, 0]);
        assert_eq!(space.superlevel_relative_homology(0.0).unwrap().betti_numbers(), vec![0, 0, 1, 0, 1]);
        assert_eq!(space.superlevel_relative_homology(2.0).unwrap().betti_numbers(), vec![0, 0, 2, 0, 1]);
        assert_eq!(space.superlevel_relative_homology(10.0).unwrap().betti_numbers(), vec![1, 0, 2, 0, 1]);
    }
}
