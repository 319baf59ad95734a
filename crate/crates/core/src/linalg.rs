//! Small linear-algebra kernels: exact Gaussian elimination, integer Smith
//! normal form, and a deterministic conjugate-gradient solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_negligible()))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Largest magnitude pivot keeps float mode stable; exact mode takes any nonzero.
            let mut best: Option<usize> = None;
            for i in r..self.rows {
                if self[(i, c)].is_negligible() {
                    continue;
                }
                match best {
                    Some(b) if self[(i, c)].abs() <= self[(b, c)].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = S::one() / self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in 0..self.cols {
                    let v = self[(r, j)].clone() * f.clone();
                    self[(i, j)] = self[(i, j)].clone() - v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_negligible()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                let f = m[(i, c)].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(c, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b`, or `None` if inconsistent. Free variables are zero.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero invariant factors only).
///
/// Works on arbitrary-precision integers so intermediate growth never overflows.
pub fn smith_invariants(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Vec<BigInt> {
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for &(i, j, v) in entries {
        m[i][j] += v;
    }
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if v.is_zero() {
                    continue;
                }
                if pivot.is_none_or(|(pi, pj)| v.abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                    m.swap(t, i);
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: the pivot must divide the whole remaining block.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        factors.push(m[t][t].abs());
        t += 1;
    }
    factors
}

/// Symmetric positive (semi-)definite operator for conjugate gradients.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// Outcome of an iterative solve.
#[derive(Clone, Debug)]
pub struct CgReport {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Plain conjugate gradients with a fixed summation order (bit-reproducible).
pub fn conjugate_gradient<A: LinearOperator>(
    op: &A,
    rhs: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> CgReport {
    let n = op.dim();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let b_norm = dot(rhs, rhs).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return CgReport { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let mut ax = vec![0.0; n];
    op.apply(x, &mut ax);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        let rel = rr.sqrt() / b_norm;
        if rel <= rel_tol {
            return CgReport { iterations: it, relative_residual: rel, converged: true };
        }
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return CgReport { iterations: it, relative_residual: rel, converged: false };
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    let rel = rr.sqrt() / b_norm;
    CgReport { iterations: max_iter, relative_residual: rel, converged: rel <= rel_tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), rat(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        let a = m(&[&[1, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v)[0].is_zero());
        }
        assert!(m(&[&[1, 1], &[1, 1]]).solve(&[rat(1), rat(2)]).is_none());
        assert_eq!(m(&[&[1, 1], &[1, -1]]).solve(&[rat(2), rat(0)]), Some(vec![rat(1), rat(1)]));
    }

    #[test]
    fn smith_form_detects_torsion() {
        // [[2, 0], [0, 3]] ~ diag(1, 6)
        let f = smith_invariants(2, 2, &[(0, 0, 2), (1, 1, 3)]);
        assert_eq!(f, vec![BigInt::from(1), BigInt::from(6)]);
        let f = smith_invariants(2, 3, &[(0, 0, 2), (0, 1, 4), (1, 2, 0)]);
        assert_eq!(f, vec![BigInt::from(2)]);
    }

    struct Diag(Vec<f64>);
    impl LinearOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[f64], out: &mut [f64]) {
            for i in 0..x.len() {
                out[i] = self.0[i] * x[i];
            }
        }
    }

    #[test]
    fn cg_solves_diagonal_system() {
        let op = Diag(vec![1.0, 2.0, 4.0]);
        let mut x = vec![0.0; 3];
        let rep = conjugate_gradient(&op, &[1.0, 1.0, 1.0], &mut x, 1e-12, 100);
        assert!(rep.converged);
        assert!((x[2] - 0.25).abs() < 1e-12);
    }
}
