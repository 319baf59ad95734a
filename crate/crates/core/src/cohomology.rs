//! Holes: Betti numbers, closed and exact cochains.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complex::{ComplexError, Parity, SimplicialComplex};
use crate::forms_dec::{coboundary, Cochain, DecError};
use crate::linalg::{smith_invariants, Matrix};
use crate::scalar::{rat, Rational, Scalar};

/// Betti numbers `b_0..b_n`, torsion coefficients of integral homology per degree, and
/// orientability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one of `H_k(K; Z)`.
    pub torsion: Vec<Vec<BigInt>>,
    pub orientable: bool,
}

impl CohomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Fixed-order text table.
    pub fn table(&self) -> String {
        let mut out = String::from("degree  betti  torsion\n");
        for (k, b) in self.betti.iter().enumerate() {
            let t: Vec<String> = self.torsion[k].iter().map(|f| format!("Z/{f}")).collect();
            out.push_str(&format!("{k:<7} {b:<6} {}\n", if t.is_empty() { "-".to_string() } else { t.join(" ") }));
        }
        out.push_str(&format!("orientable {}\n", self.orientable));
        out
    }
}

pub fn betti_numbers(complex: &SimplicialComplex) -> Result<CohomologyReport, ComplexError> {
    let n = complex.dim();
    // invariants[k]: nonzero invariant factors of the boundary map C_k -> C_{k-1}.
    let invariants: Vec<Vec<BigInt>> = (0..=n + 1)
        .map(|k| {
            if k == 0 || k > n {
                return Vec::new();
            }
            let b = complex.boundary_matrix(k);
            smith_invariants(complex.count(k - 1), complex.count(k), &b.triplets())
        })
        .collect();
    let betti = (0..=n).map(|k| complex.count(k) - invariants[k].len() - invariants[k + 1].len()).collect();
    let torsion = (0..=n).map(|k| invariants[k + 1].iter().filter(|f| !f.is_one()).cloned().collect()).collect();
    Ok(CohomologyReport { betti, torsion, orientable: complex.orientability()?.orientable })
}

/// `dω = 0`; top-degree cochains are closed.
pub fn is_closed<S: Scalar>(omega: &Cochain<S>, complex: &SimplicialComplex) -> Result<bool, DecError> {
    if omega.degree == complex.dim() {
        omega.check(complex)?;
        return Ok(true);
    }
    Ok(coboundary(omega, complex)?.is_zero())
}

/// Outcome of [`is_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct Exactness {
    pub exact: bool,
    pub primitive: Option<Cochain<Rational>>,
}

/// Solve `dη = ω` by exact Gaussian elimination. A 0-cochain is exact only when it vanishes,
/// with no primitive.
pub fn is_exact(omega: &Cochain<Rational>, complex: &SimplicialComplex) -> Result<Exactness, DecError> {
    omega.check(complex)?;
    let p = omega.degree;
    if p == 0 {
        return Ok(Exactness { exact: omega.is_zero(), primitive: None });
    }
    let inc = complex.incidence_for(p, omega.parity);
    let mut a = Matrix::<Rational>::zeros(complex.count(p), complex.count(p - 1));
    for (col, entries) in inc.columns.iter().enumerate() {
        for &(row, s) in entries {
            a[(col, row)] = rat(s as i64);
        }
    }
    Ok(match a.solve(&omega.values) {
        Some(x) => Exactness {
            exact: true,
            primitive: Some(Cochain { degree: p - 1, values: x, parity: omega.parity }),
        },
        None => Exactness { exact: false, primitive: None },
    })
}

/// Integer 1-cochain counting signed crossings of each edge with a ray leaving `center`.
///
/// On a planar complex whose cells avoid `center` it is closed, and its integral over a
/// closed edge loop is the loop's winding number about `center`.
pub fn winding_cochain(complex: &SimplicialComplex, center: [f64; 2]) -> Cochain<Rational> {
    // A direction unlikely to pass through mesh vertices.
    let dir = [0.8944271909999159, 0.4472135954999579 * 0.7390851332151607];
    let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
    let values = complex
        .simplices(1)
        .iter()
        .map(|e| {
            let p: Vec<[f64; 2]> = e
                .iter()
                .map(|&v| {
                    let c = &complex.vertices()[v];
                    [c[0] - center[0], c[1] - center[1]]
                })
                .collect();
            let (s0, s1) = (cross(dir, p[0]), cross(dir, p[1]));
            if (s0 > 0.0) == (s1 > 0.0) {
                return Rational::zero();
            }
            // Intersection with the ray's line; count only the forward half.
            let t = s0 / (s0 - s1);
            let hit = [p[0][0] + t * (p[1][0] - p[0][0]), p[0][1] + t * (p[1][1] - p[0][1])];
            if hit[0] * dir[0] + hit[1] * dir[1] <= 0.0 {
                return Rational::zero();
            }
            // Anticlockwise crossing counts +1.
            if s0 < s1 {
                rat(1)
            } else {
                rat(-1)
            }
        })
        .collect();
    Cochain { degree: 1, values, parity: Parity::Straight }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Chain;
    use crate::forms_dec::integrate;
    use crate::meshes;

    #[test]
    fn betti_tables() {
        assert_eq!(betti_numbers(&meshes::annulus()).unwrap().betti, vec![1, 1, 0]);
        assert_eq!(betti_numbers(&meshes::torus(3, 3)).unwrap().betti, vec![1, 2, 1]);
        assert_eq!(betti_numbers(&meshes::octahedron_sphere()).unwrap().betti, vec![1, 0, 1]);
        assert_eq!(betti_numbers(&meshes::disk_fan(6)).unwrap().betti, vec![1, 0, 0]);
        let m = betti_numbers(&meshes::mobius5()).unwrap();
        assert_eq!(m.betti, vec![1, 1, 0]);
        assert!(!m.orientable);
        assert!(m.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn winding_on_annulus() {
        let a = meshes::annulus();
        let w = winding_cochain(&a, [0.0, 0.0]);
        assert!(is_closed(&w, &a).unwrap());
        assert!(!is_exact(&w, &a).unwrap().exact);
        let around = Chain::from_tuples(
            &a,
            &[(vec![0, 1], rat(1)), (vec![1, 2], rat(1)), (vec![2, 3], rat(1)), (vec![3, 0], rat(1))],
            Parity::Straight,
        )
        .unwrap();
        assert_eq!(integrate(&w, &around, &a).unwrap(), rat(1));
        // Boundary of one triangle: contractible.
        let tri = Chain::from_tuples(&a, &[(vec![0, 4], rat(1)), (vec![4, 5], rat(1)), (vec![5, 0], rat(1))], Parity::Straight)
            .unwrap();
        assert_eq!(integrate(&w, &tri, &a).unwrap(), rat(0));
    }

    #[test]
    fn exact_primitive_recovered() {
        let c = meshes::torus(3, 4);
        let f = Cochain::new(&c, 0, (0..12).map(|i| rat(i * i - 5)).collect(), Parity::Straight).unwrap();
        let df = coboundary(&f, &c).unwrap();
        let e = is_exact(&df, &c).unwrap();
        assert!(e.exact);
        let eta = e.primitive.unwrap();
        assert_eq!(coboundary(&eta, &c).unwrap(), df);
        let shift = &f.values[0] - &eta.values[0];
        assert!(f.values.iter().zip(&eta.values).all(|(a, b)| a - b == shift));
    }

    #[test]
    fn refinement_keeps_betti() {
        for c in [meshes::annulus(), meshes::mobius5(), meshes::disk_fan(5)] {
            let r = meshes::refine(&c);
            assert_eq!(betti_numbers(&c).unwrap().betti, betti_numbers(&r).unwrap().betti);
            let rep = betti_numbers(&r).unwrap();
            assert_eq!(rep.euler_characteristic(), r.euler_characteristic());
        }
    }
}
