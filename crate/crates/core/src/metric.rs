//! Constant metrics with signature.
//!
//! Lorentzian metrics use the (-,+,+,+) convention with the time direction on
//! coordinate 0; the time orientation is the one of `∂_0`.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("metric matrix is not square")]
    NotSquare,
    #[error("metric matrix is not symmetric")]
    NotSymmetric,
    #[error("metric matrix is singular")]
    Singular,
    #[error("vector has {found} components, metric dimension is {expected}")]
    Arity { expected: usize, found: usize },
    #[error("zero vector has no causal character or orthogonal complement")]
    ZeroVector,
    #[error("vector is not a unit timelike vector: g(V,V) = {0}")]
    NotUnitTimelike(String),
    #[error("vector is not a unit vector: g(V,V) = {0}")]
    NotUnit(String),
    #[error("timelike vectors have opposite time orientation")]
    OppositeTimeOrientation,
    #[error("operation needs a {0} metric")]
    WrongSignature(&'static str),
    #[error("embedding differential is not injective")]
    NotImmersion,
    #[error("induced metric is degenerate (e.g. a lightlike hyperplane)")]
    DegenerateInduced,
    #[error("cannot parse metric literal: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalCharacter {
    Timelike,
    Lightlike,
    Spacelike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeOrientation {
    Future,
    Past,
    NotApplicable,
}

/// Orientation of the metric-dual 1-form relative to the vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualOrientation {
    Preserved,
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaMode {
    /// Lorentzian: the boost factor `|g(u, v)|`.
    Boost,
    /// Riemannian: the cosine of the angle `g(u, v)`.
    Cosine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaReport<S> {
    pub value: S,
    pub mode: GammaMode,
}

/// Constant symmetric nonsingular metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    matrix: Matrix<S>,
    inverse: Matrix<S>,
    determinant: S,
    signature: Vec<i8>,
}

impl<S: Scalar> Metric<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self, MetricError> {
        if matrix.rows != matrix.cols {
            return Err(MetricError::NotSquare);
        }
        if !matrix.is_symmetric() {
            return Err(MetricError::NotSymmetric);
        }
        let determinant = matrix.determinant();
        if determinant.is_negligible() {
            return Err(MetricError::Singular);
        }
        let inverse = matrix.inverse().ok_or(MetricError::Singular)?;
        let signature = inertia(&matrix);
        Ok(Metric { matrix, inverse, determinant, signature })
    }

    pub fn diag(values: &[S]) -> Result<Self, MetricError> {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        Self::new(m)
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(Matrix::identity(n)).expect("identity is a metric")
    }

    /// `diag(-1, 1, ..., 1)`.
    pub fn minkowski(n: usize) -> Self {
        let mut m = Matrix::identity(n);
        m[(0, 0)] = -S::one();
        Self::new(m).expect("Minkowski metric is nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.inverse
    }

    pub fn determinant(&self) -> &S {
        &self.determinant
    }

    /// Sign of the determinant, `+1` or `-1`.
    pub fn det_sign(&self) -> i32 {
        if self.determinant.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Sorted list of `-1`/`+1` signs (negative first).
    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn is_riemannian(&self) -> bool {
        self.signature.iter().all(|&s| s > 0)
    }

    pub fn is_lorentzian(&self) -> bool {
        self.signature.iter().filter(|&&s| s < 0).count() == 1 && self.dim() >= 2
    }

    /// Same metric with each coefficient in another scalar mode.
    pub fn to_f64(&self) -> Metric<f64> {
        let m = Matrix { rows: self.dim(), cols: self.dim(), data: self.matrix.data.iter().map(|v| v.as_f64()).collect() };
        Metric::new(m).expect("conversion of a valid metric")
    }

    fn check(&self, v: &[S]) -> Result<(), MetricError> {
        if v.len() != self.dim() {
            return Err(MetricError::Arity { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn inner(&self, u: &[S], v: &[S]) -> Result<S, MetricError> {
        self.check(u)?;
        self.check(v)?;
        let gv = self.matrix.mul_vec(v);
        Ok(u.iter().zip(&gv).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn norm_squared(&self, v: &[S]) -> Result<S, MetricError> {
        self.inner(v, v)
    }

    /// Causal character and (for non-spacelike vectors) time orientation.
    pub fn classify(&self, v: &[S]) -> Result<(CausalCharacter, TimeOrientation), MetricError> {
        self.check(v)?;
        if v.iter().all(|x| x.is_negligible()) {
            return Err(MetricError::ZeroVector);
        }
        let n2 = self.norm_squared(v)?;
        let character = if n2.is_negligible() {
            CausalCharacter::Lightlike
        } else if n2.is_negative() {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Spacelike
        };
        if character == CausalCharacter::Spacelike || !self.is_lorentzian() {
            return Ok((character, TimeOrientation::NotApplicable));
        }
        // Future means the same time orientation as ∂_0: g(V, ∂_0) < 0.
        let mut e0 = vec![S::zero(); self.dim()];
        e0[0] = S::one();
        let t = self.inner(v, &e0)?;
        let orientation = if t.is_negative() { TimeOrientation::Future } else { TimeOrientation::Past };
        Ok((character, orientation))
    }

    /// Boost factor for unit timelike vectors (Lorentzian), cosine for unit vectors (Riemannian).
    pub fn gamma_factor(&self, u: &[S], v: &[S]) -> Result<GammaReport<S>, MetricError> {
        let guv = self.inner(u, v)?;
        if self.is_riemannian() {
            for w in [u, v] {
                let n2 = self.norm_squared(w)?;
                if !(n2.clone() - S::one()).is_negligible() {
                    return Err(MetricError::NotUnit(n2.to_string()));
                }
            }
            return Ok(GammaReport { value: guv, mode: GammaMode::Cosine });
        }
        if !self.is_lorentzian() {
            return Err(MetricError::WrongSignature("Riemannian or Lorentzian"));
        }
        let mut orientations = Vec::new();
        for w in [u, v] {
            let n2 = self.norm_squared(w)?;
            if !(n2.clone() + S::one()).is_negligible() {
                return Err(MetricError::NotUnitTimelike(n2.to_string()));
            }
            orientations.push(self.classify(w)?.1);
        }
        if orientations[0] != orientations[1] {
            return Err(MetricError::OppositeTimeOrientation);
        }
        Ok(GammaReport { value: guv.abs(), mode: GammaMode::Boost })
    }

    /// Basis of `{W : g(V, W) = 0}`.
    pub fn orthogonal_complement(&self, v: &[S]) -> Result<Vec<Vec<S>>, MetricError> {
        self.check(v)?;
        if v.iter().all(|x| x.is_negligible()) {
            return Err(MetricError::ZeroVector);
        }
        let gv = self.flat(v)?;
        Ok(Matrix::from_rows(&[gv]).nullspace())
    }

    /// Lower an index: vector to 1-form components.
    pub fn flat(&self, v: &[S]) -> Result<Vec<S>, MetricError> {
        self.check(v)?;
        Ok(self.matrix.mul_vec(v))
    }

    /// Raise an index: 1-form components to vector.
    pub fn sharp(&self, w: &[S]) -> Result<Vec<S>, MetricError> {
        self.check(w)?;
        Ok(self.inverse.mul_vec(w))
    }

    /// Whether the dual 1-form's orientation agrees with the vector.
    ///
    /// Lightlike vectors are resolved by the limit of `V + εS` for a spacelike `S` with
    /// `g(V, S) >= 0`, which is spacelike for small `ε > 0`.
    pub fn dual_orientation(&self, v: &[S]) -> Result<DualOrientation, MetricError> {
        let (character, _) = self.classify(v)?;
        Ok(match character {
            CausalCharacter::Spacelike => DualOrientation::Preserved,
            CausalCharacter::Timelike => DualOrientation::Reversed,
            CausalCharacter::Lightlike => {
                let s = self.nearby_spacelike(v)?;
                let eps = S::one() / S::from_int(1_000_000);
                let perturbed: Vec<S> = v.iter().zip(&s).map(|(a, b)| a.clone() + eps.clone() * b.clone()).collect();
                match self.classify(&perturbed)?.0 {
                    CausalCharacter::Timelike => DualOrientation::Reversed,
                    _ => DualOrientation::Preserved,
                }
            }
        })
    }

    /// A spacelike basis vector `S` with `g(V, S) >= 0`.
    pub fn nearby_spacelike(&self, v: &[S]) -> Result<Vec<S>, MetricError> {
        for i in 0..self.dim() {
            let mut e = vec![S::zero(); self.dim()];
            e[i] = S::one();
            if !self.norm_squared(&e)?.is_positive() {
                continue;
            }
            if self.inner(v, &e)?.is_negative() {
                e[i] = -S::one();
            }
            return Ok(e);
        }
        Err(MetricError::WrongSignature("non-negative-definite"))
    }

    /// Pull back through the differential of an affine map (columns of `jacobian` are `∂φ/∂u_j`).
    pub fn induced(&self, jacobian: &Matrix<S>) -> Result<Metric<S>, MetricError> {
        if jacobian.rows != self.dim() {
            return Err(MetricError::Arity { expected: self.dim(), found: jacobian.rows });
        }
        if jacobian.rank() < jacobian.cols {
            return Err(MetricError::NotImmersion);
        }
        let g = jacobian.transpose().mul(&self.matrix).mul(jacobian);
        Metric::new(g).map_err(|e| match e {
            MetricError::Singular => MetricError::DegenerateInduced,
            other => other,
        })
    }

    /// Determinant of the submatrix of the inverse metric with the given rows and columns.
    pub fn inverse_minor(&self, rows: &[usize], cols: &[usize]) -> S {
        if rows.is_empty() {
            return S::one();
        }
        let sub: Vec<Vec<S>> = rows.iter().map(|&r| cols.iter().map(|&c| self.inverse[(r, c)].clone()).collect()).collect();
        Matrix::from_rows(&sub).determinant()
    }
}

/// Signs of the diagonal after symmetric Gaussian elimination (Sylvester's law of inertia).
fn inertia<S: Scalar>(m: &Matrix<S>) -> Vec<i8> {
    let n = m.rows;
    let mut a = m.clone();
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        if a[(i, i)].is_negligible() {
            if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_negligible()) {
                swap_sym(&mut a, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_negligible()) {
                // Congruence row_i += row_j, col_i += col_j makes the pivot 2 a_ij.
                for k in 0..n {
                    let v = a[(j, k)].clone();
                    a[(i, k)] = a[(i, k)].clone() + v;
                }
                for k in 0..n {
                    let v = a[(k, j)].clone();
                    a[(k, i)] = a[(k, i)].clone() + v;
                }
            }
        }
        let p = a[(i, i)].clone();
        if p.is_negligible() {
            signs.push(0);
            continue;
        }
        signs.push(if p.is_negative() { -1 } else { 1 });
        for r in i + 1..n {
            let f = a[(r, i)].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for c in i..n {
                let v = a[(i, c)].clone() * f.clone();
                a[(r, c)] = a[(r, c)].clone() - v;
            }
            for k in i..n {
                let v = a[(k, i)].clone() * f.clone();
                a[(k, r)] = a[(k, r)].clone() - v;
            }
        }
    }
    signs.sort();
    signs
}

fn swap_sym<S: Scalar>(a: &mut Matrix<S>, i: usize, j: usize) {
    let n = a.rows;
    for k in 0..n {
        let t = a[(i, k)].clone();
        a[(i, k)] = a[(j, k)].clone();
        a[(j, k)] = t;
    }
    for k in 0..n {
        let t = a[(k, i)].clone();
        a[(k, i)] = a[(k, j)].clone();
        a[(k, j)] = t;
    }
}

/// Parse `diag(-1,1,1,1)` or rows separated by `;` (`1,0;0,1`), optionally wrapped in brackets.
pub fn parse_metric(text: &str) -> Result<Metric<Rational>, MetricError> {
    let t = text.trim();
    let bad = |m: &str| MetricError::Parse(format!("{m} in {t:?}"));
    let entries = |s: &str| -> Result<Vec<Rational>, MetricError> {
        s.split(',').map(|e| parse_rational(e).ok_or_else(|| bad(&format!("bad entry {e:?}")))).collect()
    };
    if let Some(inner) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        return Metric::diag(&entries(inner)?);
    }
    let body = t.trim_start_matches('[').trim_end_matches(']');
    let rows: Vec<Vec<Rational>> = body.split(';').map(|r| entries(r.trim().trim_matches(['[', ']']))).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(MetricError::NotSquare);
    }
    Metric::new(Matrix::from_rows(&rows))
}

impl fmt::Display for Metric<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].is_zero()));
        if diagonal {
            let d: Vec<String> = (0..n).map(|i| format_rational(&self.matrix[(i, i)])).collect();
            write!(f, "diag({})", d.join(","))
        } else {
            let rows: Vec<String> = (0..n)
                .map(|i| self.matrix.row(i).iter().map(format_rational).collect::<Vec<_>>().join(","))
                .collect();
            f.write_str(&rows.join(";"))
        }
    }
}

/// Exact square root of `|det g|`, when rational.
pub fn sqrt_abs_det(g: &Metric<Rational>) -> Option<Rational> {
    g.determinant().abs().sqrt_exact()
}

/// `true` when the Hodge dual of a twisted p-form in n dimensions reverses orientation
/// (Riemannian case): exactly when both p and n-p are odd.
pub fn hodge_reverses_orientation(p: usize, n: usize) -> bool {
    p % 2 == 1 && (n - p) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn classification_examples() {
        let g = Metric::<Rational>::minkowski(4);
        assert_eq!(g.norm_squared(&v(&[1, 0, 0, 0])).unwrap(), rat(-1));
        assert_eq!(g.classify(&v(&[1, 0, 0, 0])).unwrap(), (CausalCharacter::Timelike, TimeOrientation::Future));
        assert_eq!(g.norm_squared(&v(&[1, 1, 0, 0])).unwrap(), rat(0));
        assert_eq!(g.classify(&v(&[1, 1, 0, 0])).unwrap(), (CausalCharacter::Lightlike, TimeOrientation::Future));
        assert_eq!(g.norm_squared(&v(&[0, 2, 0, 0])).unwrap(), rat(4));
        assert_eq!(g.classify(&v(&[0, 2, 0, 0])).unwrap(), (CausalCharacter::Spacelike, TimeOrientation::NotApplicable));
        assert_eq!(g.classify(&v(&[-1, 0, 0, 0])).unwrap().1, TimeOrientation::Past);
        assert_eq!(g.classify(&v(&[0, 0, 0, 0])), Err(MetricError::ZeroVector));
    }

    #[test]
    fn gamma_examples() {
        let g = Metric::<Rational>::minkowski(2);
        let u = v(&[1, 0]);
        assert_eq!(g.gamma_factor(&u, &u).unwrap().value, rat(1));
        // speed 3/5: gamma = 5/4
        let w = vec![ratio(5, 4), ratio(3, 4)];
        let r = g.gamma_factor(&u, &w).unwrap();
        assert_eq!(r.value, ratio(5, 4));
        assert_eq!(r.mode, GammaMode::Boost);
        assert!(matches!(g.gamma_factor(&u, &v(&[0, 1])), Err(MetricError::NotUnitTimelike(_))));
        assert_eq!(g.gamma_factor(&u, &v(&[-1, 0])), Err(MetricError::OppositeTimeOrientation));
        let e = Metric::<Rational>::euclidean(2);
        let c = e.gamma_factor(&v(&[1, 0]), &v(&[0, 1])).unwrap();
        assert_eq!((c.value, c.mode), (rat(0), GammaMode::Cosine));
    }

    #[test]
    fn complements() {
        let e = Metric::<Rational>::euclidean(3);
        let basis = e.orthogonal_complement(&v(&[0, 0, 1])).unwrap();
        assert_eq!(basis, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let m = Metric::<Rational>::minkowski(2);
        let basis = m.orthogonal_complement(&v(&[1, 1])).unwrap();
        assert_eq!(basis, vec![v(&[1, 1])]);
        let basis = m.orthogonal_complement(&v(&[1, 0])).unwrap();
        assert_eq!(basis, vec![v(&[0, 1])]);
    }

    #[test]
    fn dual_orientations() {
        let m = Metric::<Rational>::minkowski(4);
        assert_eq!(m.dual_orientation(&v(&[0, 1, 0, 0])).unwrap(), DualOrientation::Preserved);
        assert_eq!(m.dual_orientation(&v(&[1, 0, 0, 0])).unwrap(), DualOrientation::Reversed);
        assert_eq!(m.dual_orientation(&v(&[1, 1, 0, 0])).unwrap(), DualOrientation::Preserved);
        assert_eq!(m.dual_orientation(&v(&[1, -1, 0, 0])).unwrap(), DualOrientation::Preserved);
        let flat = m.flat(&v(&[1, 1, 0, 0])).unwrap();
        assert_eq!(flat, v(&[-1, 1, 0, 0]));
    }

    #[test]
    fn induced_metrics() {
        let e = Metric::<Rational>::euclidean(3);
        let j = Matrix::from_rows(&[v(&[1, 0]), v(&[0, 1]), v(&[0, 0])]);
        assert_eq!(e.induced(&j).unwrap().matrix(), &Matrix::identity(2));
        let j2 = Matrix::from_rows(&[v(&[2, 0]), v(&[0, 2]), v(&[0, 0])]);
        assert_eq!(e.induced(&j2).unwrap(), Metric::diag(&[rat(4), rat(4)]).unwrap());
        let m = Metric::<Rational>::minkowski(4);
        let slice = Matrix::from_rows(&[v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let s = m.induced(&slice).unwrap();
        assert!(s.is_riemannian());
        assert_eq!(s, Metric::euclidean(3));
        let null = Matrix::from_rows(&[v(&[1, 0]), v(&[1, 0]), v(&[0, 1]), v(&[0, 0])]);
        assert_eq!(m.induced(&null), Err(MetricError::DegenerateInduced));
        let bad = Matrix::from_rows(&[v(&[1, 2]), v(&[0, 0]), v(&[0, 0]), v(&[0, 0])]);
        assert_eq!(m.induced(&bad), Err(MetricError::NotImmersion));
    }

    #[test]
    fn signature_and_parsing() {
        let g = parse_metric("diag(-1,1,1,1)").unwrap();
        assert_eq!(g.signature(), &[-1, 1, 1, 1]);
        assert!(g.is_lorentzian());
        let h = parse_metric("0,1;1,0").unwrap();
        assert_eq!(h.signature(), &[-1, 1]);
        assert_eq!(h.to_string(), "0,1;1,0");
        assert_eq!(g.to_string(), "diag(-1,1,1,1)");
        assert_eq!(parse_metric("1,2;3,4"), Err(MetricError::NotSymmetric));
        assert_eq!(parse_metric("diag(1,0)"), Err(MetricError::Singular));
        assert!(parse_metric("diag(a)").is_err());
    }

    #[test]
    fn orientation_reversal_rule() {
        assert!(hodge_reverses_orientation(1, 2));
        assert!(!hodge_reverses_orientation(1, 3));
        assert!(!hodge_reverses_orientation(2, 4));
        assert!(hodge_reverses_orientation(1, 4));
        assert!(hodge_reverses_orientation(3, 4));
    }
}
