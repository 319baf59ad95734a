//! Oriented simplicial complexes, chains and the boundary operator.
//!
//! Simplices are stored with sorted vertex tuples; that sorted order is the
//! canonical internal orientation. An input tuple that is an odd permutation
//! of the sorted one denotes the oppositely oriented simplex.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::Mul;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::scalar::{permutation_sign, Rational};

/// Straight (untwisted) or twisted orientation flavour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Straight,
    Twisted,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Straight => Parity::Twisted,
            Parity::Twisted => Parity::Straight,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Straight => "straight",
            Parity::Twisted => "twisted",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "straight" | "untwisted" => Some(Parity::Straight),
            "twisted" => Some(Parity::Twisted),
            _ => None,
        }
    }
}

impl Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Straight
        } else {
            Parity::Twisted
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("complex has no top simplices")]
    Empty,
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    CoordinateArity { index: usize, expected: usize, found: usize },
    #[error("simplex {simplex:?} repeats a vertex")]
    DuplicateVertex { simplex: Vec<usize> },
    #[error("simplex {simplex:?} references vertex {vertex} but only {count} vertices exist")]
    VertexOutOfRange { simplex: Vec<usize>, vertex: usize, count: usize },
    #[error("top simplices have mixed dimensions ({first} and {other})")]
    MixedDimension { first: usize, other: usize },
    #[error("simplex {simplex:?} appears twice")]
    DuplicateSimplex { simplex: Vec<usize> },
    #[error("chart for top simplex {cell} has wrong shape")]
    ChartShape { cell: usize },
    #[error("boundary of a degree-0 chain is undefined")]
    DegreeZeroBoundary,
    #[error("chain degree {degree} outside [0, {dim}]")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("chain key {index} is not a valid {degree}-simplex")]
    InvalidChainKey { index: usize, degree: usize },
    #[error("{0:?} is not a simplex of this complex")]
    UnknownSimplex(Vec<usize>),
    #[error("facet {facet} of degree {degree} is shared by {count} top simplices (not a pseudo-manifold)")]
    NotPseudoManifold { degree: usize, facet: usize, count: usize },
}

/// Sparse signed incidence matrix stored by columns.
#[derive(Clone, Debug, Default)]
pub struct Incidence {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, i32)>>,
}

impl Incidence {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i32 {
        self.columns[col].iter().find(|(r, _)| *r == row).map_or(0, |(_, v)| *v)
    }

    /// Triplets `(row, col, value)` in column order.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v as i64)))
            .collect()
    }

    /// Product `self * other` as a dense map of nonzero entries.
    pub fn compose(&self, other: &Incidence) -> BTreeMap<(usize, usize), i64> {
        let mut out = BTreeMap::new();
        for (c, col) in other.columns.iter().enumerate() {
            for &(mid, b) in col {
                for &(r, a) in &self.columns[mid] {
                    *out.entry((r, c)).or_insert(0) += (a * b) as i64;
                }
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

/// A finite pure simplicial complex with oriented cells.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    simplices: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    boundary: Vec<Incidence>,
    /// Sign of each input top tuple relative to its sorted order.
    input_orientation: Vec<i32>,
    /// Flat per-top-cell vertex coordinates (in sorted vertex order), used for geometry on
    /// identified meshes.
    charts: Option<Vec<Vec<Vec<f64>>>>,
    /// Top cells containing each simplex, ascending.
    star: Vec<Vec<Vec<usize>>>,
    /// For each simplex: `(top cell, sign)` giving the canonical orientation of that top cell
    /// relative to the simplex's home sheet, transported through the simplex's star.
    sheets: Vec<Vec<Vec<(usize, i32)>>>,
}

impl SimplicialComplex {
    /// Build the closure of `top_simplices` with boundary matrices.
    pub fn build(vertex_coords: Vec<Vec<f64>>, top_simplices: &[Vec<usize>]) -> Result<Self, ComplexError> {
        Self::build_with_charts(vertex_coords, top_simplices, None)
    }

    /// Like [`build`](Self::build) but with flat chart coordinates per top simplex, given in the
    /// same vertex order as `top_simplices`.
    pub fn build_with_charts(
        vertex_coords: Vec<Vec<f64>>,
        top_simplices: &[Vec<usize>],
        charts: Option<Vec<Vec<Vec<f64>>>>,
    ) -> Result<Self, ComplexError> {
        let first = top_simplices.first().ok_or(ComplexError::Empty)?;
        let dim = first.len().checked_sub(1).ok_or(ComplexError::Empty)?;
        if let Some(v0) = vertex_coords.first() {
            for (index, v) in vertex_coords.iter().enumerate() {
                if v.len() != v0.len() {
                    return Err(ComplexError::CoordinateArity { index, expected: v0.len(), found: v.len() });
                }
            }
        }
        let nv = vertex_coords.len();
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        let mut lookup: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); dim + 1];
        let mut input_orientation = Vec::with_capacity(top_simplices.len());
        let mut sorted_charts = charts.as_ref().map(|_| Vec::with_capacity(top_simplices.len()));

        for (cell, s) in top_simplices.iter().enumerate() {
            if s.len() != dim + 1 {
                return Err(ComplexError::MixedDimension { first: dim, other: s.len().saturating_sub(1) });
            }
            if let Some(&vertex) = s.iter().find(|&&v| v >= nv) {
                return Err(ComplexError::VertexOutOfRange { simplex: s.clone(), vertex, count: nv });
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::DuplicateVertex { simplex: s.clone() });
            }
            if lookup[dim].contains_key(&sorted) {
                return Err(ComplexError::DuplicateSimplex { simplex: s.clone() });
            }
            input_orientation.push(permutation_sign(s));
            lookup[dim].insert(sorted.clone(), simplices[dim].len());
            simplices[dim].push(sorted.clone());
            if let (Some(charts), Some(out)) = (charts.as_ref(), sorted_charts.as_mut()) {
                let chart = charts.get(cell).ok_or(ComplexError::ChartShape { cell })?;
                if chart.len() != dim + 1 {
                    return Err(ComplexError::ChartShape { cell });
                }
                let mut order: Vec<usize> = (0..s.len()).collect();
                order.sort_by_key(|&i| s[i]);
                out.push(order.iter().map(|&i| chart[i].clone()).collect::<Vec<_>>());
            }
        }

        // Faces, generated top-down so every simplex of degree k is known before k-1.
        for k in (1..=dim).rev() {
            let mut faces = Vec::new();
            for s in &simplices[k] {
                for omit in 0..=k {
                    let mut f = s.clone();
                    f.remove(omit);
                    faces.push(f);
                }
            }
            faces.sort();
            faces.dedup();
            for f in faces {
                lookup[k - 1].insert(f.clone(), simplices[k - 1].len());
                simplices[k - 1].push(f);
            }
        }

        let mut boundary = vec![Incidence::default()];
        for k in 1..=dim {
            let columns = simplices[k]
                .iter()
                .map(|s| {
                    let mut col: Vec<(usize, i32)> = (0..=k)
                        .map(|omit| {
                            let mut f = s.clone();
                            f.remove(omit);
                            let sign = if omit % 2 == 0 { 1 } else { -1 };
                            (lookup[k - 1][&f], sign)
                        })
                        .collect();
                    col.sort_unstable();
                    col
                })
                .collect();
            boundary.push(Incidence { rows: simplices[k - 1].len(), columns });
        }

        let mut complex = SimplicialComplex {
            dim,
            vertices: vertex_coords,
            simplices,
            lookup,
            boundary,
            input_orientation,
            charts: sorted_charts,
            star: Vec::new(),
            sheets: Vec::new(),
        };
        complex.star = complex.compute_stars();
        complex.sheets = complex.compute_sheets();
        Ok(complex)
    }

    fn compute_stars(&self) -> Vec<Vec<Vec<usize>>> {
        let mut star: Vec<Vec<Vec<usize>>> = (0..=self.dim).map(|k| vec![Vec::new(); self.count(k)]).collect();
        for (t, top) in self.simplices[self.dim].iter().enumerate() {
            for k in 0..=self.dim {
                for face in subsets(top, k + 1) {
                    star[k][self.lookup[k][&face]].push(t);
                }
            }
        }
        star
    }

    fn compute_sheets(&self) -> Vec<Vec<Vec<(usize, i32)>>> {
        let n = self.dim;
        let mut facet_cofaces: Vec<Vec<usize>> = vec![Vec::new(); if n > 0 { self.count(n - 1) } else { 0 }];
        if n > 0 {
            for (t, col) in self.boundary[n].columns.iter().enumerate() {
                for &(f, _) in col {
                    facet_cofaces[f].push(t);
                }
            }
        }
        (0..=n)
            .map(|k| {
                (0..self.count(k))
                    .map(|i| {
                        let star = &self.star[k][i];
                        let mut signs: HashMap<usize, i32> = HashMap::new();
                        let mut out = Vec::with_capacity(star.len());
                        for &seed in star {
                            if signs.contains_key(&seed) {
                                continue;
                            }
                            // Unreached star components start a fresh sheet with sign +1.
                            signs.insert(seed, 1);
                            let mut queue = VecDeque::from([seed]);
                            while let Some(a) = queue.pop_front() {
                                let sa = signs[&a];
                                for &(f, inc_a) in self.boundary[n].columns.get(a).map_or(&[][..], Vec::as_slice) {
                                    if k == n || !is_subset(&self.simplices[k][i], &self.simplices[n - 1][f]) {
                                        continue;
                                    }
                                    for &b in &facet_cofaces[f] {
                                        if b == a || signs.contains_key(&b) {
                                            continue;
                                        }
                                        let inc_b = self.boundary[n].entry(f, b);
                                        signs.insert(b, -sa * inc_a * inc_b);
                                        queue.push_back(b);
                                    }
                                }
                            }
                        }
                        for &t in star {
                            out.push((t, signs[&t]));
                        }
                        out
                    })
                    .collect()
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn embedding_dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        &self.simplices[k]
    }

    pub fn simplex(&self, k: usize, index: usize) -> &[usize] {
        &self.simplices[k][index]
    }

    /// Boundary matrix from k-simplices to (k-1)-simplices (`k >= 1`).
    pub fn boundary_matrix(&self, k: usize) -> &Incidence {
        &self.boundary[k]
    }

    /// Index of a sorted simplex.
    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.lookup.get(k)?.get(simplex).copied()
    }

    /// Index and orientation sign of an ordered vertex tuple.
    pub fn oriented_index(&self, tuple: &[usize]) -> Option<(usize, i32)> {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((self.index_of(&sorted)?, permutation_sign(tuple)))
    }

    /// Orientation of each input top tuple relative to the canonical sorted orientation.
    pub fn input_orientation(&self) -> &[i32] {
        &self.input_orientation
    }

    /// Top cells containing simplex `(k, index)`, ascending.
    pub fn star(&self, k: usize, index: usize) -> &[usize] {
        &self.star[k][index]
    }

    /// Top cell whose canonical orientation serves as the local reference sheet of a simplex.
    pub fn home_cell(&self, k: usize, index: usize) -> usize {
        self.star[k][index][0]
    }

    /// Orientation of `top`'s canonical orientation relative to the home sheet of `(k, index)`,
    /// transported within the star. `None` if `top` does not contain the simplex.
    pub fn sheet_sign(&self, k: usize, index: usize, top: usize) -> Option<i32> {
        self.sheets[k][index].iter().find(|(t, _)| *t == top).map(|(_, s)| *s)
    }

    /// Incidence between a (k-1)-face and a k-cell for twisted chains and cochains, whose
    /// values are relative to reference external orientations (home sheets).
    pub fn twisted_incidence(&self, k: usize, face: usize, cell: usize) -> i32 {
        let inc = self.boundary[k].entry(face, cell);
        if inc == 0 {
            return 0;
        }
        let home = self.home_cell(k, cell);
        inc * self.sheet_sign(k - 1, face, home).unwrap_or(1)
    }

    /// Incidence columns for the given parity.
    pub fn incidence_for(&self, k: usize, parity: Parity) -> Incidence {
        match parity {
            Parity::Straight => self.boundary[k].clone(),
            Parity::Twisted => Incidence {
                rows: self.boundary[k].rows,
                columns: self.boundary[k]
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(c, col)| col.iter().map(|&(r, _)| (r, self.twisted_incidence(k, r, c))).collect())
                    .collect(),
            },
        }
    }

    /// Vertex coordinates of a simplex, taken from a chart when the complex has them.
    pub fn simplex_coords(&self, k: usize, index: usize) -> Vec<Vec<f64>> {
        let s = &self.simplices[k][index];
        match &self.charts {
            Some(charts) => {
                let top = self.home_cell(k, index);
                let top_vertices = &self.simplices[self.dim][top];
                s.iter()
                    .map(|v| {
                        let pos = top_vertices.iter().position(|w| w == v).expect("face vertex in home cell");
                        charts[top][pos].clone()
                    })
                    .collect()
            }
            None => s.iter().map(|&v| self.vertices[v].clone()).collect(),
        }
    }

    /// Coordinates of a top cell's vertices in that cell's own chart (sorted vertex order).
    pub fn top_coords(&self, top: usize) -> Vec<Vec<f64>> {
        match &self.charts {
            Some(charts) => charts[top].clone(),
            None => self.simplices[self.dim][top].iter().map(|&v| self.vertices[v].clone()).collect(),
        }
    }

    pub fn has_charts(&self) -> bool {
        self.charts.is_some()
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim).map(|k| if k % 2 == 0 { 1 } else { -1 } * self.count(k) as i64).sum()
    }

    /// Check `∂_{k-1} ∘ ∂_k = 0` for every k.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..=self.dim).all(|k| self.boundary[k - 1].compose(&self.boundary[k]).is_empty())
    }

    /// Every (n-1)-simplex must bound at most two top simplices.
    pub fn check_pseudo_manifold(&self) -> Result<(), ComplexError> {
        if self.dim == 0 {
            return Ok(());
        }
        let mut counts = vec![0usize; self.count(self.dim - 1)];
        for col in &self.boundary[self.dim].columns {
            for &(f, _) in col {
                counts[f] += 1;
            }
        }
        match counts.iter().position(|&c| c > 2) {
            Some(facet) => Err(ComplexError::NotPseudoManifold { degree: self.dim - 1, facet, count: counts[facet] }),
            None => Ok(()),
        }
    }

    /// Try to orient every top simplex coherently by propagation across shared facets.
    pub fn orientability(&self) -> Result<Orientability, ComplexError> {
        self.check_pseudo_manifold()?;
        let n = self.dim;
        let tops = self.count(n);
        if n == 0 {
            return Ok(Orientability { orientable: true, signs: Some(vec![1; tops]) });
        }
        let mut cofaces: Vec<Vec<(usize, i32)>> = vec![Vec::new(); self.count(n - 1)];
        for (t, col) in self.boundary[n].columns.iter().enumerate() {
            for &(f, s) in col {
                cofaces[f].push((t, s));
            }
        }
        let mut signs = vec![0i32; tops];
        for seed in 0..tops {
            if signs[seed] != 0 {
                continue;
            }
            signs[seed] = 1;
            let mut queue = VecDeque::from([seed]);
            while let Some(a) = queue.pop_front() {
                for &(f, inc_a) in &self.boundary[n].columns[a] {
                    for &(b, inc_b) in &cofaces[f] {
                        if b == a {
                            continue;
                        }
                        // Coherent: the shared facet receives opposite induced signs.
                        let want = -signs[a] * inc_a * inc_b;
                        if signs[b] == 0 {
                            signs[b] = want;
                            queue.push_back(b);
                        } else if signs[b] != want {
                            return Ok(Orientability { orientable: false, signs: None });
                        }
                    }
                }
            }
        }
        Ok(Orientability { orientable: true, signs: Some(signs) })
    }

    /// Chain of all top simplices with the given orientation signs (e.g. a global orientation).
    pub fn top_chain(&self, signs: &[i32], parity: Parity) -> Chain {
        let coefficients =
            signs.iter().enumerate().filter(|(_, &s)| s != 0).map(|(i, &s)| (i, Rational::from_integer(s.into()))).collect();
        Chain { degree: self.dim, coefficients, parity }
    }

    /// Chain over the top simplices in their input orientation.
    pub fn input_top_chain(&self) -> Chain {
        self.top_chain(&self.input_orientation.clone(), Parity::Straight)
    }
}

/// Result of [`SimplicialComplex::orientability`].
#[derive(Clone, Debug, PartialEq)]
pub struct Orientability {
    pub orientable: bool,
    /// Sign per top simplex relative to its canonical orientation when orientable.
    pub signs: Option<Vec<i32>>,
}

/// Formal rational combination of k-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub degree: usize,
    pub coefficients: BTreeMap<usize, Rational>,
    pub parity: Parity,
}

impl Chain {
    pub fn zero(degree: usize, parity: Parity) -> Self {
        Chain { degree, coefficients: BTreeMap::new(), parity }
    }

    /// Chain from ordered vertex tuples; odd tuples contribute with a negative sign.
    pub fn from_tuples(
        complex: &SimplicialComplex,
        terms: &[(Vec<usize>, Rational)],
        parity: Parity,
    ) -> Result<Self, ComplexError> {
        let degree = terms.first().map_or(0, |(t, _)| t.len().saturating_sub(1));
        let mut chain = Chain::zero(degree, parity);
        for (tuple, c) in terms {
            let (idx, sign) = complex.oriented_index(tuple).ok_or_else(|| ComplexError::UnknownSimplex(tuple.clone()))?;
            if tuple.len() != degree + 1 {
                return Err(ComplexError::UnknownSimplex(tuple.clone()));
            }
            chain.add_term(idx, c * Rational::from_integer(sign.into()));
        }
        Ok(chain)
    }

    pub fn add_term(&mut self, index: usize, coefficient: Rational) {
        let e = self.coefficients.entry(index).or_insert_with(Rational::zero);
        *e += coefficient;
        if e.is_zero() {
            self.coefficients.remove(&index);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scaled(&self, a: &Rational) -> Chain {
        let mut out = Chain::zero(self.degree, self.parity);
        for (&i, c) in &self.coefficients {
            out.add_term(i, a * c);
        }
        out
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree, "adding chains of different degree");
        let mut out = self.clone();
        for (&i, c) in &other.coefficients {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn validate(&self, complex: &SimplicialComplex) -> Result<(), ComplexError> {
        if self.degree > complex.dim() {
            return Err(ComplexError::DegreeOutOfRange { degree: self.degree, dim: complex.dim() });
        }
        if let Some(&index) = self.coefficients.keys().find(|&&i| i >= complex.count(self.degree)) {
            return Err(ComplexError::InvalidChainKey { index, degree: self.degree });
        }
        Ok(())
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.coefficients.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// Boundary of a chain; twisted chains use the twisted incidence.
pub fn boundary(chain: &Chain, complex: &SimplicialComplex) -> Result<Chain, ComplexError> {
    chain.validate(complex)?;
    if chain.degree == 0 {
        return Err(ComplexError::DegreeZeroBoundary);
    }
    let k = chain.degree;
    let mut out = Chain::zero(k - 1, chain.parity);
    for (&cell, c) in &chain.coefficients {
        for &(face, _) in &complex.boundary_matrix(k).columns[cell] {
            let inc = match chain.parity {
                Parity::Straight => complex.boundary_matrix(k).entry(face, cell),
                Parity::Twisted => complex.twisted_incidence(k, face, cell),
            };
            out.add_term(face, c * Rational::from_integer(inc.into()));
        }
    }
    Ok(out)
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.contains(v))
}

/// All sorted sub-tuples of `items` with `size` elements.
pub fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshes;
    use crate::scalar::rat;

    #[test]
    fn single_triangle() {
        let c = meshes::triangle();
        assert_eq!(c.count(0), 3);
        assert_eq!(c.count(1), 3);
        assert_eq!(c.count(2), 1);
        assert!(c.boundary_squares_to_zero());
        let tri = Chain::from_tuples(&c, &[(vec![0, 1, 2], rat(1))], Parity::Straight).unwrap();
        let b = boundary(&tri, &c).unwrap();
        // ∂[0,1,2] = [1,2] - [0,2] + [0,1]
        let expected = Chain::from_tuples(
            &c,
            &[(vec![1, 2], rat(1)), (vec![0, 2], rat(-1)), (vec![0, 1], rat(1))],
            Parity::Straight,
        )
        .unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn tetrahedron_boundary_of_boundary() {
        let c = meshes::tetrahedron();
        let t = Chain::from_tuples(&c, &[(vec![0, 1, 2, 3], rat(1))], Parity::Straight).unwrap();
        let bb = boundary(&boundary(&t, &c).unwrap(), &c).unwrap();
        assert!(bb.is_zero());
    }

    #[test]
    fn closed_sphere_has_no_boundary() {
        let c = meshes::octahedron_sphere();
        let o = c.orientability().unwrap();
        let chain = c.top_chain(o.signs.as_ref().unwrap(), Parity::Straight);
        assert!(boundary(&chain, &c).unwrap().is_zero());
    }

    #[test]
    fn build_errors() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            SimplicialComplex::build(v.clone(), &[vec![0, 1, 1]]),
            Err(ComplexError::DuplicateVertex { .. })
        ));
        assert!(matches!(
            SimplicialComplex::build(vec![vec![0.0], vec![1.0, 0.0]], &[vec![0, 1]]),
            Err(ComplexError::CoordinateArity { .. })
        ));
        assert!(matches!(
            SimplicialComplex::build(v, &[vec![0, 1, 7]]),
            Err(ComplexError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn degree_zero_boundary_is_an_error() {
        let c = meshes::triangle();
        let p = Chain::from_tuples(&c, &[(vec![0], rat(1))], Parity::Straight).unwrap();
        assert_eq!(boundary(&p, &c), Err(ComplexError::DegreeZeroBoundary));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(meshes::annulus().euler_characteristic(), 0);
        assert_eq!(meshes::annulus().count(2), 8);
        assert_eq!(meshes::octahedron_sphere().euler_characteristic(), 2);
        assert_eq!(meshes::torus(3, 3).euler_characteristic(), 0);
        assert_eq!(meshes::point().euler_characteristic(), 1);
    }

    #[test]
    fn orientability_examples() {
        assert!(meshes::octahedron_sphere().orientability().unwrap().orientable);
        assert!(meshes::torus(3, 3).orientability().unwrap().orientable);
        assert!(!meshes::mobius5().orientability().unwrap().orientable);
        assert!(!meshes::mobius_strip(4).orientability().unwrap().orientable);
    }

    #[test]
    fn non_pseudo_manifold_rejected() {
        // Three triangles sharing edge (0,1).
        let v = vec![vec![0.0; 2]; 5];
        let c = SimplicialComplex::build(v, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        assert!(matches!(c.orientability(), Err(ComplexError::NotPseudoManifold { count: 3, .. })));
    }

    #[test]
    fn parity_algebra() {
        use Parity::*;
        assert_eq!(Straight * Straight, Straight);
        assert_eq!(Twisted * Twisted, Straight);
        assert_eq!(Straight * Twisted, Twisted);
        assert_eq!(Twisted * Straight, Twisted);
    }
}
