//! Exact exterior algebra on flat coordinate space.
//!
//! A [`PolyForm`] is a p-form whose coefficients are polynomials with rational
//! coefficients, so `d`, wedge, contraction, pullback and Hodge are all exact.
//! Basis index sets are 0-based: `[0, 2]` is `dx0 ∧ dx2`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::Parity;
use crate::metric::{sqrt_abs_det, Metric, MetricError};
use crate::poly::Poly;
use crate::scalar::{permutation_sign, rat, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parity mismatch: {0} vs {1}; only forms of the same twistedness can be added")]
    ParityMismatch(Parity, Parity),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    ContractScalar,
    #[error("expected a 1-form, got degree {0}")]
    NotOneForm(usize),
    #[error("map arity mismatch: {0}")]
    MapArity(String),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("sqrt|det g| is irrational; exact Hodge dual unavailable")]
    IrrationalVolume,
    #[error("invalid index set {0:?} for a {1}-form in {2} dimensions")]
    BadIndexSet(Vec<usize>, usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exact p-form on n-dimensional coordinate space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
    parity: Parity,
}

/// Vector field with polynomial components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    pub components: Vec<Poly>,
    pub parity: Parity,
}

/// Polynomial map from m-space to n-space: `images[i]` is the i-th target coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    pub source_dim: usize,
    pub images: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source_dim: usize, images: Vec<Poly>) -> Result<Self, FormError> {
        if let Some(p) = images.iter().find(|p| p.nvars() != source_dim) {
            return Err(FormError::MapArity(format!(
                "image polynomial in {} variables, source dimension {source_dim}",
                p.nvars()
            )));
        }
        Ok(PolyMap { source_dim, images })
    }

    pub fn target_dim(&self) -> usize {
        self.images.len()
    }

    /// `φ ∘ ψ` where `self = φ`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, FormError> {
        if inner.target_dim() != self.source_dim {
            return Err(FormError::MapArity("composition dimensions do not chain".into()));
        }
        PolyMap::new(inner.source_dim, self.images.iter().map(|p| p.compose(&inner.images)).collect())
    }
}

impl PolyVectorField {
    pub fn new(components: Vec<Poly>, parity: Parity) -> Self {
        PolyVectorField { components, parity }
    }

    /// Constant vector field.
    pub fn constant(values: &[Rational]) -> Self {
        let n = values.len();
        Self::new(values.iter().map(|v| Poly::constant(n, v.clone())).collect(), Parity::Straight)
    }

    /// Coordinate vector field `∂_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        Self::constant(&v)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

impl PolyForm {
    pub fn zero(n: usize, degree: usize, parity: Parity) -> Self {
        PolyForm { n, degree, terms: BTreeMap::new(), parity }
    }

    /// Scalar field as a 0-form.
    pub fn scalar(f: Poly, parity: Parity) -> Self {
        let mut w = PolyForm::zero(f.nvars(), 0, parity);
        w.insert(vec![], f);
        w
    }

    /// `c · dx^{indices}` with the indices in any order (sign applied).
    pub fn basis(n: usize, indices: &[usize], parity: Parity) -> Result<Self, FormError> {
        Self::monomial(n, indices, Poly::one(n), parity)
    }

    /// `f · dx^{i1} ∧ ... ∧ dx^{ip}` with the indices in any order.
    pub fn monomial(n: usize, indices: &[usize], f: Poly, parity: Parity) -> Result<Self, FormError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&i| i >= n) || f.nvars() != n {
            return Err(FormError::BadIndexSet(indices.to_vec(), indices.len(), n));
        }
        let mut w = PolyForm::zero(n, indices.len(), parity);
        let sign = permutation_sign(indices);
        w.insert(sorted, if sign < 0 { -&f } else { f });
        Ok(w)
    }

    /// Build from `(sorted index set, coefficient)` terms.
    pub fn from_terms(n: usize, degree: usize, parity: Parity, terms: Vec<(Vec<usize>, Poly)>) -> Result<Self, FormError> {
        let mut w = PolyForm::zero(n, degree, parity);
        for (idx, f) in terms {
            if idx.len() != degree || idx.windows(2).any(|p| p[0] >= p[1]) || idx.iter().any(|&i| i >= n) || f.nvars() != n {
                return Err(FormError::BadIndexSet(idx, degree, n));
            }
            w.insert(idx, f);
        }
        Ok(w)
    }

    fn insert(&mut self, idx: Vec<usize>, f: Poly) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(g) => &g + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.terms
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        self.terms.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest polynomial degree among the coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.values().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch(self.n, other.n));
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        if self.parity != other.parity {
            return Err(FormError::ParityMismatch(self.parity, other.parity));
        }
        let mut out = self.clone();
        for (idx, f) in &other.terms {
            out.insert(idx.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm { terms: self.terms.iter().map(|(i, f)| (i.clone(), -f)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        self.add(&other.neg())
    }

    /// Multiply by a scalar field. A negative constant flips the orientation.
    pub fn scale(&self, f: &Poly) -> Result<PolyForm, FormError> {
        if f.nvars() != self.n {
            return Err(FormError::DimensionMismatch(f.nvars(), self.n));
        }
        let mut out = PolyForm::zero(self.n, self.degree, self.parity);
        for (idx, g) in &self.terms {
            out.insert(idx.clone(), f * g);
        }
        Ok(out)
    }

    pub fn scale_const(&self, c: &Rational) -> PolyForm {
        PolyForm { terms: self.terms.iter().map(|(i, f)| (i.clone(), f.scale(c))).filter(|(_, f)| !f.is_zero()).collect(), ..self.clone() }
    }

    /// Exterior product; parity multiplies. Degree overflow (`p + q > n`) yields the zero form
    /// of degree `p + q`.
    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch(self.n, other.n));
        }
        let mut out = PolyForm::zero(self.n, self.degree + other.degree, self.parity * other.parity);
        if out.degree > self.n {
            return Ok(out);
        }
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let mut joined: Vec<usize> = i.iter().chain(j).copied().collect();
                let sign = permutation_sign(&joined);
                joined.sort_unstable();
                let prod = f * g;
                out.insert(joined, if sign < 0 { -&prod } else { prod });
            }
        }
        Ok(out)
    }

    /// Exterior derivative; parity preserved.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree + 1, self.parity);
        if out.degree > self.n {
            return out;
        }
        for (idx, f) in &self.terms {
            for i in 0..self.n {
                if idx.contains(&i) {
                    continue;
                }
                let df = f.derivative(i);
                if df.is_zero() {
                    continue;
                }
                // dx^i ∧ dx^I: sign is (-1)^(number of entries of I below i).
                let pos = idx.iter().filter(|&&j| j < i).count();
                let mut joined = idx.clone();
                joined.insert(pos, i);
                out.insert(joined, if pos % 2 == 1 { -&df } else { df });
            }
        }
        out
    }

    /// Interior product `ι_V ω`; parity multiplies.
    pub fn interior(&self, v: &PolyVectorField) -> Result<PolyForm, FormError> {
        if v.dim() != self.n {
            return Err(FormError::DimensionMismatch(v.dim(), self.n));
        }
        if self.degree == 0 {
            return Err(FormError::ContractScalar);
        }
        let mut out = PolyForm::zero(self.n, self.degree - 1, self.parity * v.parity);
        for (idx, f) in &self.terms {
            for (k, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(k);
                let term = &v.components[i] * f;
                out.insert(rest, if k % 2 == 1 { -&term } else { term });
            }
        }
        Ok(out)
    }

    /// Pull back through a polynomial map; parity preserved.
    pub fn pullback(&self, map: &PolyMap) -> Result<PolyForm, FormError> {
        if map.target_dim() != self.n {
            return Err(FormError::MapArity(format!("map targets {}-space, form lives in {}-space", map.target_dim(), self.n)));
        }
        let m = map.source_dim;
        let mut out = PolyForm::zero(m, self.degree, self.parity);
        if self.degree > m {
            return Ok(out);
        }
        let differentials: Vec<PolyForm> = map
            .images
            .iter()
            .map(|phi| PolyForm::scalar(phi.clone(), Parity::Straight).d())
            .collect();
        for (idx, f) in &self.terms {
            let mut acc = PolyForm::scalar(f.compose(&map.images), Parity::Straight);
            for &i in idx {
                acc = acc.wedge(&differentials[i])?;
            }
            for (j, g) in acc.terms {
                out.insert(j, g);
            }
        }
        Ok(out)
    }

    /// Hodge dual with respect to a constant metric; parity flips.
    ///
    /// `(⋆ω)_K = sqrt|det g| · sgn(K^c, K) · ω^{K^c}` with `ω^I = Σ_J det(g^{-1}[I, J]) ω_J`.
    pub fn hodge(&self, g: &Metric<Rational>) -> Result<PolyForm, FormError> {
        if g.dim() != self.n {
            return Err(FormError::DimensionMismatch(g.dim(), self.n));
        }
        let vol = sqrt_abs_det(g).ok_or(FormError::IrrationalVolume)?;
        let n = self.n;
        let p = self.degree;
        let mut out = PolyForm::zero(n, n - p, self.parity.flip());
        for upper in crate::complex::subsets(&(0..n).collect::<Vec<_>>(), p) {
            let mut raised = Poly::zero(n);
            for (lower, f) in &self.terms {
                let minor = g.inverse_minor(&upper, lower);
                if !minor.is_zero() {
                    raised = &raised + &f.scale(&minor);
                }
            }
            if raised.is_zero() {
                continue;
            }
            let comp: Vec<usize> = (0..n).filter(|i| !upper.contains(i)).collect();
            let order: Vec<usize> = upper.iter().chain(&comp).copied().collect();
            let sign = rat(permutation_sign(&order) as i64);
            out.insert(comp, raised.scale(&(&vol * sign)));
        }
        Ok(out)
    }

    /// Pointwise inner product `⟨α, β⟩_g` induced on p-forms.
    pub fn inner_product(&self, other: &PolyForm, g: &Metric<Rational>) -> Result<Poly, FormError> {
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        if g.dim() != self.n || other.n != self.n {
            return Err(FormError::DimensionMismatch(g.dim(), self.n));
        }
        let mut acc = Poly::zero(self.n);
        for (i, f) in &self.terms {
            for (j, h) in &other.terms {
                let minor = g.inverse_minor(i, j);
                if !minor.is_zero() {
                    acc = &acc + &(f * h).scale(&minor);
                }
            }
        }
        Ok(acc)
    }

    /// Coefficients evaluated at a point (a constant form).
    pub fn evaluate(&self, point: &[Rational]) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree, self.parity);
        for (idx, f) in &self.terms {
            out.insert(idx.clone(), Poly::constant(self.n, f.evaluate(point)));
        }
        out
    }

    /// Constant coefficient of each basis element, if all coefficients are constant.
    pub fn constant_components(&self) -> Option<BTreeMap<Vec<usize>, Rational>> {
        self.terms.iter().map(|(i, f)| f.as_constant().map(|c| (i.clone(), c))).collect()
    }

    /// Parse the text form written by `Display`:
    /// `n=3 p=2 parity=twisted; [1,2]: 3/2*x0^2; [0,1]: -x2`.
    pub fn parse(text: &str) -> Result<PolyForm, FormError> {
        let mut parts = text.split(';');
        let header = parts.next().unwrap_or("");
        let (mut n, mut p, mut parity) = (None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| FormError::Parse(format!("bad header field {field:?}")))?;
            match k {
                "n" => n = v.parse::<usize>().ok(),
                "p" => p = v.parse::<usize>().ok(),
                "parity" => parity = Parity::parse(v),
                _ => return Err(FormError::Parse(format!("unknown header field {k:?}"))),
            }
        }
        let (n, p, parity) = match (n, p, parity) {
            (Some(n), Some(p), Some(parity)) => (n, p, parity),
            _ => return Err(FormError::Parse("header needs n=, p= and parity=".into())),
        };
        let mut w = PolyForm::zero(n, p, parity);
        for term in parts.map(str::trim).filter(|t| !t.is_empty()) {
            let (idx, coef) = term.split_once(':').ok_or_else(|| FormError::Parse(format!("term {term:?} lacks ':'")))?;
            let idx = idx.trim().trim_start_matches('[').trim_end_matches(']');
            let indices: Vec<usize> = if idx.trim().is_empty() {
                Vec::new()
            } else {
                idx.split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| FormError::Parse(format!("bad index {s:?}"))))
                    .collect::<Result<_, _>>()?
            };
            if indices.len() != p {
                return Err(FormError::BadIndexSet(indices, p, n));
            }
            let f = Poly::parse(n, coef).map_err(FormError::Parse)?;
            let m = PolyForm::monomial(n, &indices, f, parity)?;
            w = w.add(&m)?;
        }
        Ok(w)
    }
}

/// Magnitude of a form at a point: `√|⟨ω,ω⟩_g|`, plus the sign of `⟨ω,ω⟩_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMagnitude {
    pub squared: Rational,
    /// Exact root when `|⟨ω,ω⟩|` is a rational square.
    pub exact: Option<Rational>,
    pub value: f64,
    pub negative: bool,
}

impl PolyForm {
    /// [`FormMagnitude`] at `point`.
    pub fn magnitude_at(&self, point: &[Rational], g: &Metric<Rational>) -> Result<FormMagnitude, FormError> {
        let w = self.evaluate(point);
        let sq = w.inner_product(&w, g)?.as_constant().expect("constant form has constant norm");
        let abs = sq.clone().abs();
        let exact = abs.sqrt_exact();
        let value = exact.as_ref().map_or_else(|| abs.as_f64().sqrt(), Scalar::as_f64);
        Ok(FormMagnitude { negative: sq.is_negative(), squared: sq, exact, value })
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} p={} parity={};", self.n, self.degree, self.parity)?;
        for (idx, c) in &self.terms {
            let list: Vec<String> = idx.iter().map(ToString::to_string).collect();
            write!(f, " [{}]: {};", list.join(","), c)?;
        }
        Ok(())
    }
}

/// `ω(V)` for a 1-form; the parity of the result is the product of parities.
pub fn pair(omega: &PolyForm, v: &PolyVectorField) -> Result<(Poly, Parity), FormError> {
    if omega.degree != 1 {
        return Err(FormError::NotOneForm(omega.degree));
    }
    let w = omega.interior(v)?;
    Ok((w.coefficient(&[]), w.parity))
}

/// `V(f) = df(V)`.
pub fn vector_on_scalar(v: &PolyVectorField, f: &Poly) -> Result<Poly, FormError> {
    let df = PolyForm::scalar(f.clone(), Parity::Straight).d();
    Ok(pair(&df, v)?.0)
}

/// Frobenius test for a 1-form: integrable iff `ω ∧ dω = 0`.
pub fn is_integrable_1form(omega: &PolyForm) -> Result<bool, FormError> {
    if omega.degree != 1 {
        return Err(FormError::NotOneForm(omega.degree));
    }
    Ok(omega.wedge(&omega.d())?.is_zero())
}

/// Metric dual of a vector field (lower the index).
pub fn flat(v: &PolyVectorField, g: &Metric<Rational>) -> Result<PolyForm, FormError> {
    let n = v.dim();
    if g.dim() != n {
        return Err(FormError::DimensionMismatch(g.dim(), n));
    }
    let mut w = PolyForm::zero(n, 1, v.parity);
    for i in 0..n {
        let mut c = Poly::zero(n);
        for j in 0..n {
            let gij = &g.matrix()[(i, j)];
            if !gij.is_zero() {
                c = &c + &v.components[j].scale(gij);
            }
        }
        w.insert(vec![i], c);
    }
    Ok(w)
}

/// Metric dual of a 1-form (raise the index).
pub fn sharp(omega: &PolyForm, g: &Metric<Rational>) -> Result<PolyVectorField, FormError> {
    if omega.degree != 1 {
        return Err(FormError::NotOneForm(omega.degree));
    }
    let n = omega.n;
    if g.dim() != n {
        return Err(FormError::DimensionMismatch(g.dim(), n));
    }
    let components = (0..n)
        .map(|i| {
            (0..n).fold(Poly::zero(n), |acc, j| {
                let gij = &g.inverse()[(i, j)];
                if gij.is_zero() {
                    acc
                } else {
                    &acc + &omega.coefficient(&[j]).scale(gij)
                }
            })
        })
        .collect();
    Ok(PolyVectorField::new(components, omega.parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use Parity::*;

    fn dx(n: usize, i: usize) -> PolyForm {
        PolyForm::basis(n, &[i], Straight).unwrap()
    }

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn magnitudes() {
        let e3 = Metric::euclidean(3);
        let o = [rat(0), rat(0), rat(0)];
        let m = dx(3, 0).scale_const(&ratio(7, 2)).magnitude_at(&o, &e3).unwrap();
        assert_eq!(m.exact, Some(ratio(7, 2)));
        assert!(!m.negative);
        let dxdy = dx(3, 0).wedge(&dx(3, 1)).unwrap();
        assert_eq!(dxdy.magnitude_at(&o, &e3).unwrap().exact, Some(rat(1)));
        let g = Metric::minkowski(4);
        let dtdx = dx(4, 0).wedge(&dx(4, 1)).unwrap();
        let m = dtdx.magnitude_at(&[rat(0), rat(0), rat(0), rat(0)], &g).unwrap();
        assert_eq!((m.squared, m.exact, m.negative), (rat(-1), Some(rat(1)), true));
        let m = dx(3, 0).add(&dx(3, 1)).unwrap().magnitude_at(&o, &e3).unwrap();
        assert_eq!(m.exact, None);
        assert!((m.value - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn addition_rules() {
        let s = dx(2, 0).add(&dx(2, 1)).unwrap();
        assert_eq!(s.coefficient(&[0]), Poly::one(2));
        assert_eq!(s.coefficient(&[1]), Poly::one(2));
        assert!(s.add(&s.neg()).unwrap().is_zero());
        let t = dx(2, 0).with_parity(Twisted);
        assert_eq!(dx(2, 0).add(&t), Err(FormError::ParityMismatch(Straight, Twisted)));
        assert_eq!(dx(2, 0).add(&PolyForm::basis(2, &[0, 1], Straight).unwrap()), Err(FormError::DegreeMismatch(1, 2)));
        // x dy + y dx and dy are closed; so is their sum.
        let a = dx(2, 1).scale(&x(2, 0)).unwrap().add(&dx(2, 0).scale(&x(2, 1)).unwrap()).unwrap();
        assert!(a.d().is_zero());
        assert!(a.add(&dx(2, 1)).unwrap().d().is_zero());
    }

    #[test]
    fn scaling() {
        let w = PolyForm::basis(3, &[0, 2], Straight).unwrap();
        assert_eq!(w.scale(&Poly::one(3)).unwrap(), w);
        assert_eq!(dx(2, 0).scale_const(&rat(-1)), dx(2, 0).neg());
        let xdy = dx(2, 1).scale(&x(2, 0)).unwrap();
        assert_eq!(xdy.d(), PolyForm::basis(2, &[0, 1], Straight).unwrap());
    }

    #[test]
    fn wedge_examples() {
        let dxdy = PolyForm::basis(2, &[0, 1], Straight).unwrap();
        assert_eq!(dx(2, 0).wedge(&dx(2, 1)).unwrap(), dxdy);
        assert_eq!(dx(2, 1).wedge(&dx(2, 0)).unwrap(), dxdy.neg());
        let f = PolyForm::basis(4, &[0, 1], Straight).unwrap().add(&PolyForm::basis(4, &[2, 3], Straight).unwrap()).unwrap();
        let ff = f.wedge(&f).unwrap();
        assert_eq!(ff, PolyForm::basis(4, &[0, 1, 2, 3], Straight).unwrap().scale_const(&rat(2)));
        let tw = dx(2, 0).with_parity(Twisted).wedge(&dx(2, 1).with_parity(Twisted)).unwrap();
        assert_eq!(tw.parity(), Straight);
        assert_eq!(tw, dxdy);
        let over = dxdy.wedge(&dx(2, 0)).unwrap();
        assert!(over.is_zero());
        assert_eq!(over.degree(), 3);
    }

    #[test]
    fn derivative_examples() {
        let f = PolyForm::scalar(&(&x(2, 0) * &x(2, 0)) + &x(2, 1), Straight);
        let expected = dx(2, 0).scale(&x(2, 0).scale(&rat(2))).unwrap().add(&dx(2, 1)).unwrap();
        assert_eq!(f.d(), expected);
        let xy = PolyForm::scalar(&x(2, 0) * &x(2, 1), Straight);
        assert!(xy.d().d().is_zero());
        let top = PolyForm::basis(2, &[0, 1], Straight).unwrap().scale(&x(2, 0)).unwrap();
        assert!(top.d().is_zero());
    }

    #[test]
    fn pairing_examples() {
        let v = PolyVectorField::constant(&[rat(0), rat(-5)]);
        assert_eq!(pair(&dx(2, 1), &v).unwrap().0, Poly::constant(2, rat(-5)));
        assert!(pair(&dx(2, 0), &PolyVectorField::coordinate(2, 1)).unwrap().0.is_zero());
        let w = dx(2, 1).scale(&x(2, 0)).unwrap();
        let v = PolyVectorField::new(vec![Poly::zero(2), x(2, 0)], Straight);
        assert_eq!(pair(&w, &v).unwrap().0, &x(2, 0) * &x(2, 0));
        let tv = PolyVectorField::new(vec![Poly::zero(2), x(2, 0)], Twisted);
        assert_eq!(pair(&w, &tv).unwrap().1, Twisted);
    }

    #[test]
    fn vector_on_scalar_examples() {
        let dx0 = PolyVectorField::coordinate(2, 0);
        assert_eq!(vector_on_scalar(&dx0, &x(2, 0)).unwrap(), Poly::one(2));
        assert!(vector_on_scalar(&dx0, &x(2, 1)).unwrap().is_zero());
        let v = PolyVectorField::new(vec![x(2, 1), x(2, 0)], Straight);
        let expected = &(&x(2, 1) * &x(2, 1)) + &(&x(2, 0) * &x(2, 0));
        assert_eq!(vector_on_scalar(&v, &(&x(2, 0) * &x(2, 1))).unwrap(), expected);
    }

    #[test]
    fn interior_examples() {
        let dxdy = PolyForm::basis(2, &[0, 1], Straight).unwrap();
        assert_eq!(dxdy.interior(&PolyVectorField::coordinate(2, 0)).unwrap(), dx(2, 1));
        let vol = PolyForm::basis(3, &[0, 1, 2], Straight).unwrap();
        let v = PolyVectorField::constant(&[rat(1), rat(2), rat(3)]);
        assert!(vol.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        let dxdy3 = PolyForm::basis(3, &[0, 1], Straight).unwrap();
        assert!(dxdy3.interior(&PolyVectorField::coordinate(3, 2)).unwrap().is_zero());
        assert_eq!(PolyForm::scalar(Poly::one(2), Straight).interior(&v_2()), Err(FormError::ContractScalar));
    }

    fn v_2() -> PolyVectorField {
        PolyVectorField::coordinate(2, 0)
    }

    #[test]
    fn pullback_examples() {
        // z ↦ (z, 0, 0)
        let incl = PolyMap::new(1, vec![x(1, 0), Poly::zero(1), Poly::zero(1)]).unwrap();
        assert_eq!(dx(3, 0).pullback(&incl).unwrap(), dx(1, 0));
        // plane x = 2: (u, v) ↦ (2, u, v)
        let plane = PolyMap::new(2, vec![Poly::constant(2, rat(2)), x(2, 0), x(2, 1)]).unwrap();
        assert!(dx(3, 0).pullback(&plane).unwrap().is_zero());
        // projection (x, y, z) ↦ (x, y)
        let proj = PolyMap::new(3, vec![x(3, 0), x(3, 1)]).unwrap();
        let dxdy = PolyForm::basis(2, &[0, 1], Twisted).unwrap();
        let pulled = dxdy.pullback(&proj).unwrap();
        assert_eq!(pulled, PolyForm::basis(3, &[0, 1], Twisted).unwrap());
        assert_eq!(pulled.parity(), Twisted);
        let bad = PolyMap::new(2, vec![x(2, 0)]).unwrap();
        assert!(matches!(dx(3, 0).pullback(&bad), Err(FormError::MapArity(_))));
    }

    #[test]
    fn integrability_examples() {
        let xdy = dx(3, 1).scale(&x(3, 0)).unwrap();
        assert!(is_integrable_1form(&xdy).unwrap());
        let helix = dx(3, 2).add(&xdy).unwrap();
        assert!(!is_integrable_1form(&helix).unwrap());
        assert_eq!(helix.wedge(&helix.d()).unwrap(), PolyForm::basis(3, &[0, 1, 2], Straight).unwrap());
        let closed = PolyForm::scalar(&x(3, 0) * &x(3, 2), Straight).d();
        assert!(is_integrable_1form(&closed).unwrap());
    }

    #[test]
    fn hodge_examples() {
        let e3 = Metric::<Rational>::euclidean(3);
        let star = dx(3, 0).hodge(&e3).unwrap();
        assert_eq!(star, PolyForm::basis(3, &[1, 2], Twisted).unwrap());
        let m4 = Metric::<Rational>::minkowski(4);
        let tx = PolyForm::basis(4, &[0, 1], Straight).unwrap();
        let s = tx.hodge(&m4).unwrap();
        assert_eq!(s, PolyForm::basis(4, &[2, 3], Twisted).unwrap().neg());
        assert_eq!(s.hodge(&m4).unwrap(), tx.neg());
        let odd = Metric::diag(&[rat(2), rat(1)]).unwrap();
        assert_eq!(dx(2, 0).hodge(&odd), Err(FormError::IrrationalVolume));
    }

    #[test]
    fn lightlike_dual_annihilates_itself() {
        let m4 = Metric::<Rational>::minkowski(4);
        let v = PolyVectorField::constant(&[rat(1), rat(1), rat(0), rat(0)]);
        let w = flat(&v, &m4).unwrap();
        assert!(pair(&w, &v).unwrap().0.is_zero());
        assert_eq!(sharp(&w, &m4).unwrap(), v);
    }

    #[test]
    fn text_format_round_trip() {
        let w = PolyForm::parse("n=3 p=2 parity=twisted; [1,2]: 3/2*x0^2; [0,2]: -x1 + 1/3").unwrap();
        assert_eq!(w.coefficient(&[1, 2]), Poly::monomial(vec![2, 0, 0], ratio(3, 2)));
        assert_eq!(PolyForm::parse(&w.to_string()).unwrap(), w);
        // Unsorted indices pick up the permutation sign.
        let v = PolyForm::parse("n=2 p=2 parity=straight; [1,0]: 1").unwrap();
        assert_eq!(v, PolyForm::basis(2, &[0, 1], Straight).unwrap().neg());
        assert!(PolyForm::parse("n=2 p=1; [0]: 1").is_err());
        assert!(PolyForm::parse("n=2 p=1 parity=straight; [0,1]: 1").is_err());
    }
}
