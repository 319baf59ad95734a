//! Orientation sign algebra.
//!
//! Arrows, arcs and helices are ordered frames of vectors; every comparison
//! reduces to the sign of a determinant. Twisting follows the external-first
//! convention: the external orientation followed by the internal orientation
//! must give the orientation of the ambient manifold.

use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrientError {
    #[error("frame vectors are linearly dependent")]
    Degenerate,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("frames do not span the same subspace")]
    DifferentSpan,
    #[error("{facet:?} is not a facet of {cell:?}")]
    NotIncident { cell: Vec<usize>, facet: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelativeSign {
    Plus,
    Minus,
}

impl RelativeSign {
    pub fn from_sign(s: i32) -> Self {
        if s >= 0 {
            RelativeSign::Plus
        } else {
            RelativeSign::Minus
        }
    }

    pub fn value(self) -> i32 {
        match self {
            RelativeSign::Plus => 1,
            RelativeSign::Minus => -1,
        }
    }
}

impl Mul for RelativeSign {
    type Output = RelativeSign;
    fn mul(self, rhs: Self) -> Self {
        RelativeSign::from_sign(self.value() * rhs.value())
    }
}

impl Neg for RelativeSign {
    type Output = RelativeSign;
    fn neg(self) -> Self {
        RelativeSign::from_sign(-self.value())
    }
}

impl fmt::Display for RelativeSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == RelativeSign::Plus { "+1" } else { "-1" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Internal,
    External,
}

/// Ordered, linearly independent vectors spanning a k-plane in n-space.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientationFrame {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
    kind: FrameKind,
}

impl OrientationFrame {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rational>>, kind: FrameKind) -> Result<Self, OrientError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(OrientError::DimensionMismatch(format!(
                "vector of length {} in {ambient_dim}-space",
                v.len()
            )));
        }
        if vectors.len() > ambient_dim || (!vectors.is_empty() && Matrix::from_rows(&vectors).rank() < vectors.len()) {
            return Err(OrientError::Degenerate);
        }
        Ok(Self { ambient_dim, vectors, kind })
    }

    /// Frame from integer components.
    pub fn from_ints(ambient_dim: usize, vectors: &[&[i64]], kind: FrameKind) -> Result<Self, OrientError> {
        Self::new(ambient_dim, vectors.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect(), kind)
    }

    /// Empty frame (the orientation "+" of a point or of a top-dimensional external orientation).
    pub fn empty(ambient_dim: usize, kind: FrameKind) -> Self {
        Self { ambient_dim, vectors: Vec::new(), kind }
    }

    /// Standard basis, positively oriented.
    pub fn standard(n: usize) -> Self {
        let vectors = (0..n).map(|i| (0..n).map(|j| rat((i == j) as i64)).collect()).collect();
        Self { ambient_dim: n, vectors, kind: FrameKind::Internal }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Reverse the orientation (negate the first vector).
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        if let Some(v) = out.vectors.first_mut() {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        out
    }

    /// Sign of the determinant for a frame that fills the space.
    pub fn determinant_sign(&self) -> Result<RelativeSign, OrientError> {
        if self.rank() != self.ambient_dim {
            return Err(OrientError::DimensionMismatch(format!(
                "{}-frame in {}-space has no determinant",
                self.rank(),
                self.ambient_dim
            )));
        }
        if self.ambient_dim == 0 {
            return Ok(RelativeSign::Plus);
        }
        let det = Matrix::from_rows(&self.vectors).determinant();
        Ok(RelativeSign::from_sign(if det.is_positive() { 1 } else { -1 }))
    }

    /// Orientation of `self` relative to `reference`; both must span the same subspace.
    pub fn sign_relative_to(&self, reference: &OrientationFrame) -> Result<RelativeSign, OrientError> {
        if self.ambient_dim != reference.ambient_dim || self.rank() != reference.rank() {
            return Err(OrientError::DimensionMismatch("frames of different rank".into()));
        }
        let k = self.rank();
        if k == 0 {
            return Ok(RelativeSign::Plus);
        }
        // Coordinates of self's vectors in reference's basis: solve R^T c = v.
        let rt = Matrix::from_rows(&reference.vectors).transpose();
        let mut coords = Vec::with_capacity(k);
        for v in &self.vectors {
            let c = rt.solve(v).ok_or(OrientError::DifferentSpan)?;
            coords.push(c);
        }
        let det = Matrix::from_rows(&coords).determinant();
        Ok(RelativeSign::from_sign(if det.is_positive() { 1 } else { -1 }))
    }
}

/// Join two orientations: the vectors of `first` followed by those of `second`.
pub fn concat(first: &OrientationFrame, second: &OrientationFrame) -> Result<OrientationFrame, OrientError> {
    if first.ambient_dim != second.ambient_dim {
        return Err(OrientError::DimensionMismatch("frames live in different spaces".into()));
    }
    let mut vectors = first.vectors.clone();
    vectors.extend(second.vectors.iter().cloned());
    OrientationFrame::new(first.ambient_dim, vectors, FrameKind::Internal)
}

/// Relative sign of `concat(external, tangent)` against the manifold orientation.
///
/// `+1` means the external orientation `external` and the internal orientation `tangent`
/// describe the same twisted/untwisted pair under `manifold`.
pub fn untwist(
    external: &OrientationFrame,
    tangent: &OrientationFrame,
    manifold: &OrientationFrame,
) -> Result<RelativeSign, OrientError> {
    if external.rank() + tangent.rank() != manifold.rank() {
        return Err(OrientError::DimensionMismatch(format!(
            "external rank {} + tangent rank {} != manifold rank {}",
            external.rank(),
            tangent.rank(),
            manifold.rank()
        )));
    }
    concat(external, tangent)?.sign_relative_to(manifold)
}

/// Convert an internal orientation (given as a sign relative to `tangent`) into an external
/// orientation (sign relative to `external_basis`).
pub fn twist_sign(
    internal: RelativeSign,
    external_basis: &OrientationFrame,
    tangent: &OrientationFrame,
    manifold: &OrientationFrame,
) -> Result<RelativeSign, OrientError> {
    Ok(internal * untwist(external_basis, tangent, manifold)?)
}

/// Convert an external orientation (sign relative to `external_basis`) back into an internal
/// orientation relative to `tangent`.
pub fn untwist_sign(
    external: RelativeSign,
    external_basis: &OrientationFrame,
    tangent: &OrientationFrame,
    manifold: &OrientationFrame,
) -> Result<RelativeSign, OrientError> {
    Ok(external * untwist(external_basis, tangent, manifold)?)
}

/// Orientation induced on `facet` by the ordered simplex `cell`, using the outward-first
/// convention: outward direction followed by the facet's ordered frame compared with the
/// cell's ordered frame. Computed geometrically on the standard simplex.
pub fn induced_boundary_sign(cell: &[usize], facet: &[usize]) -> Result<RelativeSign, OrientError> {
    let not_incident = || OrientError::NotIncident { cell: cell.to_vec(), facet: facet.to_vec() };
    if facet.len() + 1 != cell.len() || !facet.iter().all(|v| cell.contains(v)) {
        return Err(not_incident());
    }
    let k = cell.len() - 1;
    if k == 0 {
        return Err(not_incident());
    }
    // Place cell vertex i at: 0 for i = 0, e_i otherwise.
    let pos = |v: usize| -> Vec<Rational> {
        let i = cell.iter().position(|&w| w == v).expect("vertex of cell");
        (1..=k).map(|j| rat((i == j) as i64)).collect()
    };
    let sub = |a: &[Rational], b: &[Rational]| -> Vec<Rational> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let omitted = *cell.iter().find(|v| !facet.contains(v)).ok_or_else(not_incident)?;
    let mut centroid = vec![Rational::zero(); k];
    for &v in facet {
        for (c, x) in centroid.iter_mut().zip(pos(v)) {
            *c += x;
        }
    }
    let scale = rat(facet.len() as i64);
    centroid.iter_mut().for_each(|c| *c /= scale.clone());
    let outward = sub(&centroid, &pos(omitted));
    let mut vectors = vec![outward];
    let base = pos(facet[0]);
    for &v in &facet[1..] {
        vectors.push(sub(&pos(v), &base));
    }
    let cell_frame: Vec<Vec<Rational>> = cell[1..].iter().map(|&v| sub(&pos(v), &pos(cell[0]))).collect();
    let induced = OrientationFrame::new(k, vectors, FrameKind::Internal)?;
    let reference = OrientationFrame::new(k, cell_frame, FrameKind::Internal)?;
    induced.sign_relative_to(&reference)
}

/// [`induced_boundary_sign`] for canonical simplices of a complex.
pub fn induced_boundary_sign_in(
    complex: &SimplicialComplex,
    k: usize,
    cell: usize,
    facet: usize,
) -> Result<RelativeSign, OrientError> {
    induced_boundary_sign(complex.simplex(k, cell), complex.simplex(k - 1, facet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use FrameKind::*;

    fn f(n: usize, v: &[&[i64]]) -> OrientationFrame {
        OrientationFrame::from_ints(n, v, Internal).unwrap()
    }

    #[test]
    fn concatenation_table() {
        let x = f(2, &[&[1, 0]]);
        let y = f(2, &[&[0, 1]]);
        // right then up: anticlockwise; up then right: clockwise.
        assert_eq!(concat(&x, &y).unwrap().determinant_sign().unwrap(), RelativeSign::Plus);
        assert_eq!(concat(&y, &x).unwrap().determinant_sign().unwrap(), RelativeSign::Minus);
        let arc = f(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let z = f(3, &[&[0, 0, 1]]);
        assert_eq!(concat(&arc, &z).unwrap().determinant_sign().unwrap(), RelativeSign::Plus);
    }

    #[test]
    fn dependent_concatenation_fails() {
        let x = f(2, &[&[1, 0]]);
        let x2 = f(2, &[&[2, 0]]);
        assert_eq!(concat(&x, &x2), Err(OrientError::Degenerate));
    }

    #[test]
    fn twisting_in_the_plane() {
        let clockwise = f(2, &[&[0, 1], &[1, 0]]);
        let up = f(2, &[&[0, 1]]);
        let left = OrientationFrame::from_ints(2, &[&[-1, 0]], External).unwrap();
        let right = OrientationFrame::from_ints(2, &[&[1, 0]], External).unwrap();
        // External-first convention: (left, up) is clockwise.
        assert_eq!(untwist(&left, &up, &clockwise).unwrap(), RelativeSign::Plus);
        assert_eq!(untwist(&right, &up, &clockwise).unwrap(), RelativeSign::Minus);
        assert_eq!(untwist(&left, &up, &clockwise.reversed()).unwrap(), RelativeSign::Minus);
    }

    #[test]
    fn twisting_a_line_in_space() {
        let rh = OrientationFrame::standard(3);
        let z = f(3, &[&[0, 0, 1]]);
        let arc = OrientationFrame::from_ints(3, &[&[1, 0, 0], &[0, 1, 0]], External).unwrap();
        assert_eq!(untwist(&arc, &z, &rh).unwrap(), RelativeSign::Plus);
    }

    #[test]
    fn untwist_dimension_mismatch() {
        let rh = OrientationFrame::standard(3);
        let z = f(3, &[&[0, 0, 1]]);
        assert!(matches!(untwist(&z, &z, &rh), Err(OrientError::DimensionMismatch(_))));
    }

    #[test]
    fn round_trip() {
        let m = OrientationFrame::standard(2);
        let ext = f(2, &[&[1, 1]]);
        let tan = f(2, &[&[-1, 2]]);
        for s in [RelativeSign::Plus, RelativeSign::Minus] {
            for man in [m.clone(), m.reversed()] {
                let t = twist_sign(s, &ext, &tan, &man).unwrap();
                assert_eq!(untwist_sign(t, &ext, &tan, &man).unwrap(), s);
            }
        }
    }

    #[test]
    fn boundary_signs() {
        assert_eq!(induced_boundary_sign(&[0, 1, 2], &[1, 2]).unwrap(), RelativeSign::Plus);
        assert_eq!(induced_boundary_sign(&[0, 1, 2], &[0, 2]).unwrap(), RelativeSign::Minus);
        assert_eq!(induced_boundary_sign(&[0, 1, 2, 3], &[0, 1, 3]).unwrap(), RelativeSign::Plus);
        assert_eq!(induced_boundary_sign(&[0, 1, 2, 3], &[0, 2, 3]).unwrap(), RelativeSign::Minus);
        assert!(induced_boundary_sign(&[0, 1, 2], &[0, 3]).is_err());
    }

    #[test]
    fn boundary_signs_match_incidence() {
        let c = crate::meshes::tetrahedron();
        for k in 1..=3 {
            let b = c.boundary_matrix(k);
            for (cell, col) in b.columns.iter().enumerate() {
                for &(facet, v) in col {
                    assert_eq!(induced_boundary_sign_in(&c, k, cell, facet).unwrap().value(), v);
                }
            }
        }
    }
}
