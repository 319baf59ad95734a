//! Discrete forms: cochains on simplicial complexes.
//!
//! Straight cochains hold one value per canonically oriented simplex. Twisted
//! cochains hold one value per simplex relative to its reference external
//! orientation, obtained by twisting the canonical internal orientation with
//! the simplex's home sheet (see [`SimplicialComplex::home_cell`]). For top
//! simplices the reference external orientation is always `+`, so a twisted
//! top-cochain with positive values is a measure on any complex, orientable
//! or not.
//!
//! The interior product has no discrete counterpart here; it exists only on
//! [`PolyForm`](crate::forms_poly::PolyForm).

use thiserror::Error;

use crate::complex::{Chain, ComplexError, Parity, SimplicialComplex};
use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::{permutation_sign, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parity mismatch: a {cochain} cochain cannot be integrated over a {chain} chain")]
    ParityMismatch { cochain: Parity, chain: Parity },
    #[error("cochain has {found} values, complex has {expected} {degree}-simplices")]
    WrongLength { degree: usize, expected: usize, found: usize },
    #[error("coboundary of a top-degree cochain")]
    TopDegree,
    #[error("wedge degree {0} exceeds complex dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error("the complex is not orientable; one can only integrate twisted top-forms")]
    OnlyTwistedTopForms,
    #[error("the complex is not orientable; no global orientation exists")]
    NonOrientable,
    #[error("supplied orientation is not a coherent global orientation")]
    IncoherentOrientation,
    #[error("{degree}-simplex {simplex:?} is not well-centered")]
    NotWellCentered { degree: usize, simplex: Vec<usize> },
    #[error("operation needs a Riemannian metric")]
    NotRiemannian,
    #[error("metric dimension {metric} does not match coordinate dimension {coords}")]
    MetricDimension { metric: usize, coords: usize },
    #[error("{degree}-simplex {simplex:?} is degenerate")]
    Degenerate { degree: usize, simplex: Vec<usize> },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Degree-p discrete form.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S> {
    pub degree: usize,
    pub values: Vec<S>,
    pub parity: Parity,
}

impl<S: Scalar> Cochain<S> {
    pub fn zeros(complex: &SimplicialComplex, degree: usize, parity: Parity) -> Self {
        Cochain { degree, values: vec![S::zero(); complex.count(degree)], parity }
    }

    pub fn new(complex: &SimplicialComplex, degree: usize, values: Vec<S>, parity: Parity) -> Result<Self, DecError> {
        let c = Cochain { degree, values, parity };
        c.check(complex)?;
        Ok(c)
    }

    /// Indicator cochain of one simplex.
    pub fn indicator(complex: &SimplicialComplex, degree: usize, index: usize, parity: Parity) -> Self {
        let mut c = Self::zeros(complex, degree, parity);
        c.values[index] = S::one();
        c
    }

    /// Value on an ordered vertex tuple (negated for odd orderings).
    pub fn value_on(&self, complex: &SimplicialComplex, tuple: &[usize]) -> Option<S> {
        let (i, s) = complex.oriented_index(tuple)?;
        Some(if s < 0 { -self.values[i].clone() } else { self.values[i].clone() })
    }

    /// Set the value on an ordered vertex tuple.
    pub fn set_on(&mut self, complex: &SimplicialComplex, tuple: &[usize], value: S) -> Result<(), DecError> {
        let (i, s) = complex.oriented_index(tuple).ok_or_else(|| ComplexError::UnknownSimplex(tuple.to_vec()))?;
        self.values[i] = if s < 0 { -value } else { value };
        Ok(())
    }

    pub fn check(&self, complex: &SimplicialComplex) -> Result<(), DecError> {
        let expected = complex.count(self.degree);
        if self.degree > complex.dim() || self.values.len() != expected {
            return Err(DecError::WrongLength { degree: self.degree, expected, found: self.values.len() });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_negligible)
    }

    pub fn plus(&self, other: &Self) -> Result<Self, DecError> {
        if self.degree != other.degree {
            return Err(DecError::DegreeMismatch(self.degree, other.degree));
        }
        if self.parity != other.parity {
            return Err(DecError::ParityMismatch { cochain: self.parity, chain: other.parity });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn scaled(&self, a: &S) -> Self {
        Cochain { values: self.values.iter().map(|v| v.clone() * a.clone()).collect(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.as_f64().abs()).fold(0.0, f64::max)
    }
}

impl Cochain<Rational> {
    pub fn to_f64(&self) -> Cochain<f64> {
        Cochain { degree: self.degree, values: self.values.iter().map(Scalar::as_f64).collect(), parity: self.parity }
    }
}

/// Discrete exterior derivative (transpose of the boundary); parity preserved.
pub fn coboundary<S: Scalar>(omega: &Cochain<S>, complex: &SimplicialComplex) -> Result<Cochain<S>, DecError> {
    omega.check(complex)?;
    let p = omega.degree;
    if p >= complex.dim() {
        return Err(DecError::TopDegree);
    }
    let inc = complex.incidence_for(p + 1, omega.parity);
    let values = inc
        .columns
        .iter()
        .map(|col| {
            col.iter().fold(S::zero(), |acc, &(r, s)| acc + omega.values[r].clone() * S::from_int(s as i64))
        })
        .collect();
    Ok(Cochain { degree: p + 1, values, parity: omega.parity })
}

/// Pairing `⟨ω, c⟩`. Twisted cochains pair with twisted chains, straight with straight.
pub fn integrate<S: Scalar>(omega: &Cochain<S>, chain: &Chain, complex: &SimplicialComplex) -> Result<S, DecError> {
    omega.check(complex)?;
    chain.validate(complex)?;
    if omega.degree != chain.degree {
        return Err(DecError::DegreeMismatch(omega.degree, chain.degree));
    }
    if omega.parity != chain.parity {
        return Err(DecError::ParityMismatch { cochain: omega.parity, chain: chain.parity });
    }
    Ok(chain
        .coefficients
        .iter()
        .fold(S::zero(), |acc, (&i, c)| acc + omega.values[i].clone() * S::from_rational(c)))
}

/// Integral of a top-degree cochain over the whole complex.
///
/// Twisted top-forms integrate on any complex. Straight top-forms need a global orientation,
/// so they fail on non-orientable complexes.
pub fn integrate_top<S: Scalar>(omega: &Cochain<S>, complex: &SimplicialComplex) -> Result<S, DecError> {
    omega.check(complex)?;
    if omega.degree != complex.dim() {
        return Err(DecError::DegreeMismatch(omega.degree, complex.dim()));
    }
    match omega.parity {
        Parity::Twisted => Ok(omega.values.iter().fold(S::zero(), |acc, v| acc + v.clone())),
        Parity::Straight => {
            let orientation = complex.orientability()?;
            let signs = orientation.signs.ok_or(DecError::OnlyTwistedTopForms)?;
            Ok(omega
                .values
                .iter()
                .zip(&signs)
                .fold(S::zero(), |acc, (v, &s)| acc + v.clone() * S::from_int(s as i64)))
        }
    }
}

/// Both sides of the discrete Stokes theorem: `(⟨dω, c⟩, ⟨ω, ∂c⟩)`.
pub fn stokes_pairing_check<S: Scalar>(
    omega: &Cochain<S>,
    chain: &Chain,
    complex: &SimplicialComplex,
) -> Result<(S, S), DecError> {
    if omega.degree + 1 != chain.degree {
        return Err(DecError::DegreeMismatch(omega.degree + 1, chain.degree));
    }
    let lhs = integrate(&coboundary(omega, complex)?, chain, complex)?;
    let rhs = integrate(omega, &crate::complex::boundary(chain, complex)?, complex)?;
    Ok((lhs, rhs))
}

/// Antisymmetrized cup product; parity multiplies.
///
/// `(a ∧ b)(σ) = 1/(p+q+1)! Σ_π sgn(π) a(π σ[0..=p]) b(π σ[p..])`, with twisted operands
/// transported to the home sheet of `σ`.
pub fn cup_wedge<S: Scalar>(a: &Cochain<S>, b: &Cochain<S>, complex: &SimplicialComplex) -> Result<Cochain<S>, DecError> {
    a.check(complex)?;
    b.check(complex)?;
    let (p, q) = (a.degree, b.degree);
    let k = p + q;
    if k > complex.dim() {
        return Err(DecError::DegreeOverflow(k, complex.dim()));
    }
    let perms = permutations(k + 1);
    let norm = S::from_int(perms.len() as i64);
    let lookup = |c: &Cochain<S>, deg: usize, tuple: &[usize], home: usize| -> S {
        let (idx, sign) = complex.oriented_index(tuple).expect("face of a simplex is in the complex");
        let mut v = c.values[idx].clone();
        let mut s = sign;
        if c.parity == Parity::Twisted {
            s *= complex.sheet_sign(deg, idx, home).unwrap_or(1);
        }
        if s < 0 {
            v = -v;
        }
        v
    };
    let values = (0..complex.count(k))
        .map(|si| {
            let simplex = complex.simplex(k, si);
            let home = complex.home_cell(k, si);
            let mut acc = S::zero();
            for perm in &perms {
                let t: Vec<usize> = perm.iter().map(|&i| simplex[i]).collect();
                let term = lookup(a, p, &t[..=p], home) * lookup(b, q, &t[p..], home);
                acc = if permutation_sign(perm) > 0 { acc + term } else { acc - term };
            }
            acc / norm.clone()
        })
        .collect();
    Ok(Cochain { degree: k, values, parity: a.parity * b.parity })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Convert between straight and twisted using a global orientation (one sign per top simplex
/// relative to its canonical orientation). Applying it twice is the identity.
pub fn twist_cochain<S: Scalar>(
    omega: &Cochain<S>,
    complex: &SimplicialComplex,
    global_orientation: &[i32],
) -> Result<Cochain<S>, DecError> {
    omega.check(complex)?;
    let o = complex.orientability()?;
    if !o.orientable {
        return Err(DecError::NonOrientable);
    }
    let reference = o.signs.expect("orientable complex has signs");
    // A coherent orientation differs from the reference by one sign per connected component.
    if global_orientation.len() != reference.len() || !coherent(complex, global_orientation) {
        return Err(DecError::IncoherentOrientation);
    }
    let p = omega.degree;
    let values = omega
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let home = complex.home_cell(p, i);
            if global_orientation[home] < 0 {
                -v.clone()
            } else {
                v.clone()
            }
        })
        .collect();
    Ok(Cochain { degree: p, values, parity: omega.parity.flip() })
}

fn coherent(complex: &SimplicialComplex, signs: &[i32]) -> bool {
    let n = complex.dim();
    if n == 0 {
        return signs.iter().all(|s| s.abs() == 1);
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return false;
    }
    let chain = complex.top_chain(signs, Parity::Straight);
    let b = crate::complex::boundary(&chain, complex).expect("top chain is valid");
    // Interior facets must cancel; boundary facets (one coface) carry ±1.
    let mut cofaces = vec![0usize; complex.count(n - 1)];
    for col in &complex.boundary_matrix(n).columns {
        for &(f, _) in col {
            cofaces[f] += 1;
        }
    }
    b.coefficients.keys().all(|&f| cofaces[f] == 1)
}

/// Strictly positive twisted top-cochain.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure(Cochain<f64>);

impl Measure {
    pub fn new(cochain: Cochain<f64>) -> Option<Self> {
        (cochain.parity == Parity::Twisted && cochain.values.iter().all(|&v| v > 0.0)).then_some(Measure(cochain))
    }

    pub fn cochain(&self) -> &Cochain<f64> {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.values.iter().sum()
    }
}

fn gram(points: &[Vec<f64>], g: &Metric<f64>) -> Matrix<f64> {
    let base = &points[0];
    let edges: Vec<Vec<f64>> = points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let k = edges.len();
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = g.inner(&edges[i], &edges[j]).expect("metric dimension checked");
        }
    }
    m
}

/// Unsigned k-volume of the simplex spanned by `points` under `g`.
pub fn simplex_volume(points: &[Vec<f64>], g: &Metric<f64>) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let det = gram(points, g).determinant().abs();
    det.sqrt() / (1..=k).map(|i| i as f64).product::<f64>()
}

/// Circumcenter and its barycentric coordinates.
pub fn circumcenter(points: &[Vec<f64>], g: &Metric<f64>) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = points.len() - 1;
    if k == 0 {
        return Some((points[0].clone(), vec![1.0]));
    }
    let m = gram(points, g);
    let rhs: Vec<f64> = (0..k).map(|i| 0.5 * m[(i, i)]).collect();
    let lambda = m.solve(&rhs)?;
    let mut center = points[0].clone();
    for (i, l) in lambda.iter().enumerate() {
        for (c, (a, b)) in center.iter_mut().zip(points[i + 1].iter().zip(&points[0])) {
            *c += l * (a - b);
        }
    }
    let mut bary = vec![1.0 - lambda.iter().sum::<f64>()];
    bary.extend(lambda);
    Some((center, bary))
}

fn check_riemannian(complex: &SimplicialComplex, g: &Metric<f64>) -> Result<(), DecError> {
    let coords = complex.top_coords(0).first().map_or(0, Vec::len);
    if g.dim() != coords {
        return Err(DecError::MetricDimension { metric: g.dim(), coords });
    }
    if !g.is_riemannian() {
        return Err(DecError::NotRiemannian);
    }
    Ok(())
}

/// Verify that every simplex of positive dimension contains its circumcenter strictly inside.
pub fn check_well_centered(complex: &SimplicialComplex, g: &Metric<f64>) -> Result<(), DecError> {
    check_riemannian(complex, g)?;
    for k in 1..=complex.dim() {
        for i in 0..complex.count(k) {
            let pts = complex.simplex_coords(k, i);
            let ok = circumcenter(&pts, g).is_some_and(|(_, bary)| bary.iter().all(|&b| b > 1e-12));
            if !ok {
                return Err(DecError::NotWellCentered { degree: k, simplex: complex.simplex(k, i).to_vec() });
            }
        }
    }
    Ok(())
}

/// Volume of the circumcentric dual cell of `(k, index)`: sum over flags
/// `σ_k ⊂ σ_{k+1} ⊂ ... ⊂ σ_n` of the simplex spanned by their circumcenters.
pub fn dual_volume(complex: &SimplicialComplex, k: usize, index: usize, g: &Metric<f64>) -> f64 {
    let n = complex.dim();
    if k == n {
        return 1.0;
    }
    let simplex = complex.simplex(k, index).to_vec();
    let mut total = 0.0;
    for &top in complex.star(k, index) {
        let top_vertices = complex.simplex(n, top).to_vec();
        let chart = complex.top_coords(top);
        let coords = |s: &[usize]| -> Vec<Vec<f64>> {
            s.iter().map(|v| chart[top_vertices.iter().position(|w| w == v).expect("vertex")].clone()).collect()
        };
        // Enumerate flags inside this top cell by adding one vertex at a time.
        let mut stack: Vec<(Vec<usize>, Vec<Vec<f64>>)> = vec![(simplex.clone(), vec![circumcenter(&coords(&simplex), g).expect("nondegenerate").0])];
        while let Some((s, centers)) = stack.pop() {
            if s.len() == n + 1 {
                total += simplex_volume(&centers, g);
                continue;
            }
            for &v in &top_vertices {
                if s.contains(&v) {
                    continue;
                }
                let mut next = s.clone();
                next.push(v);
                next.sort_unstable();
                let mut c = centers.clone();
                c.push(circumcenter(&coords(&next), g).expect("nondegenerate").0);
                stack.push((next, c));
            }
        }
    }
    total
}

/// Primal volume of `(k, index)` under `g`.
pub fn primal_volume(complex: &SimplicialComplex, k: usize, index: usize, g: &Metric<f64>) -> f64 {
    simplex_volume(&complex.simplex_coords(k, index), g)
}

/// Diagonal Hodge star to the circumcentric dual: value on the dual (n-p)-cell is
/// `|⋆σ| / |σ|` times the primal value. Parity flips. Requires a well-centered mesh and a
/// Riemannian metric (Lorentzian stars live on rectilinear grids, see [`crate::grid`]).
pub fn hodge_diagonal(omega: &Cochain<f64>, complex: &SimplicialComplex, g: &Metric<f64>) -> Result<Cochain<f64>, DecError> {
    omega.check(complex)?;
    check_well_centered(complex, g)?;
    let p = omega.degree;
    let values = omega
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| dual_volume(complex, p, i, g) / primal_volume(complex, p, i, g) * v)
        .collect();
    Ok(Cochain { degree: complex.dim() - p, values, parity: omega.parity.flip() })
}

/// The measure of a Riemannian metric: cell volumes as a twisted top-cochain.
pub fn measure_from_metric(complex: &SimplicialComplex, g: &Metric<f64>) -> Result<Measure, DecError> {
    check_riemannian(complex, g)?;
    let n = complex.dim();
    let values: Vec<f64> = (0..complex.count(n)).map(|i| primal_volume(complex, n, i, g)).collect();
    if let Some(i) = values.iter().position(|&v| v <= 1e-14) {
        return Err(DecError::Degenerate { degree: n, simplex: complex.simplex(n, i).to_vec() });
    }
    Ok(Measure(Cochain { degree: n, values, parity: Parity::Twisted }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshes;
    use crate::scalar::{rat, ratio};

    #[test]
    fn vertex_indicator_coboundary() {
        // Path 0 - 1 - 2 as a 1-complex.
        let c = SimplicialComplex::build(vec![vec![0.0], vec![1.0], vec![2.0]], &[vec![0, 1], vec![1, 2]]).unwrap();
        let f = Cochain::<Rational>::indicator(&c, 0, 1, Parity::Straight);
        let df = coboundary(&f, &c).unwrap();
        assert_eq!(df.value_on(&c, &[0, 1]), Some(rat(1)));
        assert_eq!(df.value_on(&c, &[1, 2]), Some(rat(-1)));
        assert_eq!(coboundary(&df, &c), Err(DecError::TopDegree));
    }

    #[test]
    fn dd_vanishes() {
        let c = meshes::tetrahedron();
        let f = Cochain::new(&c, 0, vec![rat(3), rat(-1), ratio(1, 2), rat(7)], Parity::Straight).unwrap();
        let ddf = coboundary(&coboundary(&f, &c).unwrap(), &c).unwrap();
        assert!(ddf.is_zero());
        let tw = Cochain::new(&c, 0, vec![rat(3), rat(-1), ratio(1, 2), rat(7)], Parity::Twisted).unwrap();
        assert!(coboundary(&coboundary(&tw, &c).unwrap(), &c).unwrap().is_zero());
    }

    #[test]
    fn integration_parity_rule() {
        let c = meshes::triangle();
        let w = Cochain::<Rational>::zeros(&c, 1, Parity::Twisted);
        let chain = Chain::from_tuples(&c, &[(vec![0, 1], rat(1))], Parity::Straight).unwrap();
        assert!(matches!(integrate(&w, &chain, &c), Err(DecError::ParityMismatch { .. })));
    }

    #[test]
    fn dot_counting() {
        // Nine unit dots; then 26 dots of 1/4.
        let c9 = meshes::square_grid(9, 1);
        let nine = Cochain::new(&c9, 2, (0..18).map(|i| rat((i < 9) as i64)).collect(), Parity::Twisted).unwrap();
        assert_eq!(integrate_top(&nine, &c9).unwrap(), rat(9));
        let c26 = meshes::square_grid(13, 1);
        let fine = Cochain::new(&c26, 2, vec![ratio(1, 4); 26], Parity::Twisted).unwrap();
        assert_eq!(integrate_top(&fine, &c26).unwrap(), ratio(13, 2));
    }

    #[test]
    fn mobius_top_forms() {
        let m = meshes::mobius5();
        let ones = Cochain::new(&m, 2, vec![rat(1); 5], Parity::Twisted).unwrap();
        assert_eq!(integrate_top(&ones, &m).unwrap(), rat(5));
        let straight = Cochain::new(&m, 2, vec![rat(1); 5], Parity::Straight).unwrap();
        assert_eq!(integrate_top(&straight, &m), Err(DecError::OnlyTwistedTopForms));
    }

    #[test]
    fn cup_basics() {
        let c = meshes::triangle();
        let f = Cochain::new(&c, 0, vec![rat(2), rat(3), rat(5)], Parity::Straight).unwrap();
        let g = Cochain::new(&c, 0, vec![rat(7), rat(11), rat(13)], Parity::Twisted).unwrap();
        let fg = cup_wedge(&f, &g, &c).unwrap();
        assert_eq!(fg.values, vec![rat(14), rat(33), rat(65)]);
        assert_eq!(fg.parity, Parity::Twisted);
        let a = Cochain::new(&c, 1, vec![rat(1), rat(-2), rat(5)], Parity::Straight).unwrap();
        assert!(cup_wedge(&a, &a, &c).unwrap().is_zero());
        let top = Cochain::<Rational>::zeros(&c, 2, Parity::Straight);
        assert_eq!(cup_wedge(&a, &top, &c), Err(DecError::DegreeOverflow(3, 2)));
    }

    #[test]
    fn equilateral_dual_ratio() {
        let c = meshes::equilateral_hexagon();
        let g = Metric::<f64>::euclidean(2);
        let spoke = c.index_of(&[0, 1]).unwrap();
        let ratio = dual_volume(&c, 1, spoke, &g) / primal_volume(&c, 1, spoke, &g);
        assert!((ratio - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let w = Cochain::<f64>::indicator(&c, 1, spoke, Parity::Straight);
        let s = hodge_diagonal(&w, &c, &g).unwrap();
        assert_eq!(s.parity, Parity::Twisted);
        assert_eq!(s.degree, 1);
        assert!((s.values[spoke] - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn right_triangles_are_not_well_centered() {
        let c = meshes::square_grid(2, 2);
        let w = Cochain::<f64>::zeros(&c, 1, Parity::Straight);
        assert!(matches!(
            hodge_diagonal(&w, &c, &Metric::euclidean(2)),
            Err(DecError::NotWellCentered { .. })
        ));
        let hex = meshes::equilateral_hexagon();
        assert!(matches!(
            hodge_diagonal(&Cochain::zeros(&hex, 1, Parity::Straight), &hex, &Metric::minkowski(2)),
            Err(DecError::NotRiemannian)
        ));
    }

    #[test]
    fn measures() {
        let g = Metric::<f64>::euclidean(2);
        assert_eq!(measure_from_metric(&meshes::triangle(), &g).unwrap().total(), 0.5);
        assert_eq!(measure_from_metric(&meshes::square_grid(3, 2), &g).unwrap().total(), 6.0);
        let m = meshes::mobius_strip(7);
        let mu = measure_from_metric(&m, &g).unwrap();
        assert!((mu.total() - 7.0).abs() < 1e-12);
        assert!((integrate_top(mu.cochain(), &m).unwrap() - 7.0).abs() < 1e-12);
        let refined = meshes::refine(&meshes::square_grid(3, 2));
        assert!((measure_from_metric(&refined, &g).unwrap().total() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn twisting_requires_orientability() {
        let m = meshes::mobius5();
        let w = Cochain::<Rational>::zeros(&m, 1, Parity::Straight);
        assert_eq!(twist_cochain(&w, &m, &[1; 5]), Err(DecError::NonOrientable));
        let t = meshes::torus(3, 3);
        let o = t.orientability().unwrap().signs.unwrap();
        let mut bad = o.clone();
        bad[0] = -bad[0];
        assert_eq!(twist_cochain(&Cochain::<Rational>::zeros(&t, 1, Parity::Straight), &t, &bad), Err(DecError::IncoherentOrientation));
    }

    #[test]
    fn twist_round_trip_and_reversal() {
        let t = meshes::torus(3, 3);
        let o = t.orientability().unwrap().signs.unwrap();
        let w = Cochain::new(&t, 1, (0..27).map(|i| rat(i - 13)).collect(), Parity::Straight).unwrap();
        let tw = twist_cochain(&w, &t, &o).unwrap();
        assert_eq!(tw.parity, Parity::Twisted);
        assert_eq!(twist_cochain(&tw, &t, &o).unwrap(), w);
        let rev: Vec<i32> = o.iter().map(|s| -s).collect();
        assert_eq!(twist_cochain(&w, &t, &rev).unwrap(), tw.scaled(&rat(-1)));
        // Twisting commutes with d.
        let dw = coboundary(&w, &t).unwrap();
        assert_eq!(coboundary(&tw, &t).unwrap(), twist_cochain(&dw, &t, &o).unwrap());
    }

    #[test]
    fn torus_intersection_number() {
        let (m, n) = (4, 3);
        let t = meshes::torus(m, n);
        let id = |i: usize, j: usize| (j % n) * m + (i % m);
        let mut a = Cochain::<Rational>::zeros(&t, 1, Parity::Straight);
        let mut b = a.clone();
        for j in 0..n {
            a.set_on(&t, &[id(m - 1, j), id(0, j)], rat(1)).unwrap();
            a.set_on(&t, &[id(m - 1, j), id(0, j + 1)], rat(1)).unwrap();
        }
        for i in 0..m {
            b.set_on(&t, &[id(i, n - 1), id(i, 0)], rat(1)).unwrap();
            b.set_on(&t, &[id(i, n - 1), id(i + 1, 0)], rat(1)).unwrap();
        }
        assert!(coboundary(&a, &t).unwrap().is_zero());
        assert!(coboundary(&b, &t).unwrap().is_zero());
        let total = integrate_top(&cup_wedge(&a, &b, &t).unwrap(), &t).unwrap();
        assert!(total == rat(1) || total == rat(-1), "{total}");
    }
}
