//! Rectilinear cubical grids for DEC on boxes and tori.
//!
//! A k-cell is a direction set `dirs` (sorted axes it extends along) and a base
//! vertex. Its internal orientation is `dx^{dirs}`. Dual cells carry the external
//! orientation fixed by "dual first, then primal" matching the ambient orientation,
//! which makes the dual coboundary on primal-indexed cochains a plain transpose.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::metric::Metric;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs matching shape, spacing and periodicity lists (got {0}, {1}, {2})")]
    Arity(usize, usize, usize),
    #[error("axis {0} has no cells")]
    EmptyAxis(usize),
    #[error("axis {0} spacing must be positive")]
    Spacing(usize),
    #[error("metric dimension {0} does not match grid dimension {1}")]
    MetricDimension(usize, usize),
    #[error("grid Hodge star needs a diagonal metric")]
    NotDiagonal,
    #[error("cochain has {found} values, grid has {expected} {degree}-cells")]
    WrongLength { degree: usize, expected: usize, found: usize },
}

#[derive(Clone, Debug)]
struct Block {
    dirs: Vec<usize>,
    extents: Vec<usize>,
    offset: usize,
}

/// Cell of a [`RectGrid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dirs: Vec<usize>,
    pub base: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RectGrid {
    shape: Vec<usize>,
    spacing: Vec<f64>,
    periodic: Vec<bool>,
    blocks: Vec<Vec<Block>>,
    counts: Vec<usize>,
    /// `faces[k][c]`: signed (k-1)-faces of k-cell `c`, for k >= 1.
    faces: Vec<Vec<Vec<(usize, i32)>>>,
}

impl RectGrid {
    pub fn new(shape: Vec<usize>, spacing: Vec<f64>, periodic: Vec<bool>) -> Result<Self, GridError> {
        let n = shape.len();
        if spacing.len() != n || periodic.len() != n || n == 0 {
            return Err(GridError::Arity(n, spacing.len(), periodic.len()));
        }
        if let Some(a) = shape.iter().position(|&s| s == 0) {
            return Err(GridError::EmptyAxis(a));
        }
        if let Some(a) = spacing.iter().position(|&h| h <= 0.0 || !h.is_finite()) {
            return Err(GridError::Spacing(a));
        }
        let mut g = RectGrid { shape, spacing, periodic, blocks: Vec::new(), counts: Vec::new(), faces: Vec::new() };
        for k in 0..=n {
            let mut offset = 0;
            let mut blocks = Vec::new();
            for dirs in crate::complex::subsets(&(0..n).collect::<Vec<_>>(), k) {
                let extents: Vec<usize> =
                    (0..n).map(|a| if dirs.contains(&a) { g.shape[a] } else { g.vertex_extent(a) }).collect();
                let size = extents.iter().product::<usize>();
                blocks.push(Block { dirs, extents, offset });
                offset += size;
            }
            g.blocks.push(blocks);
            g.counts.push(offset);
        }
        g.faces = (0..=n).map(|k| if k == 0 { Vec::new() } else { g.build_faces(k) }).collect();
        Ok(g)
    }

    /// Uniform periodic grid.
    pub fn periodic(shape: Vec<usize>, spacing: Vec<f64>) -> Result<Self, GridError> {
        let p = vec![true; shape.len()];
        Self::new(shape, spacing, p)
    }

    /// Uniform bounded grid.
    pub fn bounded(shape: Vec<usize>, spacing: Vec<f64>) -> Result<Self, GridError> {
        let p = vec![false; shape.len()];
        Self::new(shape, spacing, p)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    /// Number of vertex positions along `axis`.
    pub fn vertex_extent(&self, axis: usize) -> usize {
        if self.periodic[axis] {
            self.shape[axis]
        } else {
            self.shape[axis] + 1
        }
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    fn block(&self, dirs: &[usize]) -> Option<&Block> {
        self.blocks.get(dirs.len())?.iter().find(|b| b.dirs == dirs)
    }

    /// Index of the cell with sorted direction set `dirs` and base vertex `base`; periodic
    /// axes wrap, bounded axes reject out-of-range positions.
    pub fn index(&self, dirs: &[usize], base: &[isize]) -> Option<usize> {
        let b = self.block(dirs)?;
        let mut idx = 0;
        for (a, (&x, &ext)) in base.iter().zip(&b.extents).enumerate() {
            let x = if self.periodic[a] {
                x.rem_euclid(self.shape[a] as isize) as usize
            } else if x < 0 || x as usize >= ext {
                return None;
            } else {
                x as usize
            };
            idx = idx * ext + x;
        }
        Some(b.offset + idx)
    }

    pub fn cell(&self, k: usize, index: usize) -> Cell {
        let b = self.blocks[k].iter().rev().find(|b| b.offset <= index).expect("cell index in range");
        let mut rem = index - b.offset;
        let mut base = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            base[a] = rem % b.extents[a];
            rem /= b.extents[a];
        }
        Cell { dirs: b.dirs.clone(), base }
    }

    fn build_faces(&self, k: usize) -> Vec<Vec<(usize, i32)>> {
        (0..self.count(k))
            .map(|c| {
                let cell = self.cell(k, c);
                let base: Vec<isize> = cell.base.iter().map(|&x| x as isize).collect();
                let mut acc: BTreeMap<usize, i32> = BTreeMap::new();
                for (j, &a) in cell.dirs.iter().enumerate() {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let fdirs: Vec<usize> = cell.dirs.iter().copied().filter(|&d| d != a).collect();
                    let mut upper = base.clone();
                    upper[a] += 1;
                    let lo = self.index(&fdirs, &base).expect("lower face exists");
                    let hi = self.index(&fdirs, &upper).expect("upper face exists");
                    *acc.entry(lo).or_insert(0) -= sign;
                    *acc.entry(hi).or_insert(0) += sign;
                }
                acc.into_iter().filter(|&(_, s)| s != 0).collect()
            })
            .collect()
    }

    /// Signed (k-1)-faces of k-cell `index`.
    pub fn faces(&self, k: usize, index: usize) -> &[(usize, i32)] {
        &self.faces[k][index]
    }

    fn check<S>(&self, k: usize, values: &[S]) -> Result<(), GridError> {
        if values.len() != self.count(k) {
            return Err(GridError::WrongLength { degree: k, expected: self.count(k), found: values.len() });
        }
        Ok(())
    }

    /// Primal coboundary `d_k` from k-cochains to (k+1)-cochains.
    pub fn coboundary<S: Scalar>(&self, k: usize, values: &[S]) -> Result<Vec<S>, GridError> {
        self.check(k, values)?;
        Ok(self.faces[k + 1]
            .iter()
            .map(|fs| fs.iter().fold(S::zero(), |acc, &(f, s)| acc + values[f].clone() * S::from_int(s as i64)))
            .collect())
    }

    /// Transpose of `d_k`: from (k+1)-indexed values to k-indexed values. Acting on dual
    /// cochains stored on primal cells it is the dual coboundary.
    pub fn coboundary_transpose<S: Scalar>(&self, k: usize, values: &[S]) -> Result<Vec<S>, GridError> {
        self.check(k + 1, values)?;
        let mut out = vec![S::zero(); self.count(k)];
        for (c, fs) in self.faces[k + 1].iter().enumerate() {
            for &(f, s) in fs {
                out[f] = out[f].clone() + values[c].clone() * S::from_int(s as i64);
            }
        }
        Ok(out)
    }

    pub fn vertex_position(&self, base: &[usize]) -> Vec<f64> {
        base.iter().zip(&self.spacing).map(|(&i, h)| i as f64 * h).collect()
    }

    pub fn primal_volume(&self, k: usize, index: usize) -> f64 {
        self.cell(k, index).dirs.iter().map(|&a| self.spacing[a]).product()
    }

    /// Length of the dual cell along `axis` for a cell at position `x` not extending along it.
    fn dual_extent(&self, axis: usize, x: usize) -> f64 {
        let h = self.spacing[axis];
        if !self.periodic[axis] && (x == 0 || x == self.shape[axis]) {
            0.5 * h
        } else {
            h
        }
    }

    /// Volume of the dual (n-k)-cell, truncated at bounded walls.
    pub fn dual_volume(&self, k: usize, index: usize) -> f64 {
        let cell = self.cell(k, index);
        (0..self.dim()).filter(|a| !cell.dirs.contains(a)).map(|a| self.dual_extent(a, cell.base[a])).product()
    }

    /// `true` when the cell lies inside a bounded wall.
    pub fn on_boundary(&self, k: usize, index: usize) -> bool {
        let cell = self.cell(k, index);
        (0..self.dim())
            .any(|a| !cell.dirs.contains(&a) && !self.periodic[a] && (cell.base[a] == 0 || cell.base[a] == self.shape[a]))
    }

    /// Diagonal Hodge star of a k-cochain onto the dual (n-k)-cells:
    /// `(dual volume / primal volume) · signature sign · value`, with volumes measured by the
    /// diagonal metric `g` and the sign `∏_{a ∈ dirs} sgn g_aa`. Parity flips.
    pub fn hodge_diagonal(&self, k: usize, values: &[f64], g: &Metric<f64>) -> Result<Vec<f64>, GridError> {
        self.check(k, values)?;
        let n = self.dim();
        if g.dim() != n {
            return Err(GridError::MetricDimension(g.dim(), n));
        }
        let m = g.matrix();
        for i in 0..n {
            for j in 0..n {
                if i != j && m[(i, j)] != 0.0 {
                    return Err(GridError::NotDiagonal);
                }
            }
        }
        let scale: Vec<f64> = (0..n).map(|a| m[(a, a)].abs().sqrt()).collect();
        Ok(values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let cell = self.cell(k, i);
                let mut ratio = 1.0;
                let mut sign = 1.0;
                for a in 0..n {
                    if cell.dirs.contains(&a) {
                        ratio /= self.spacing[a] * scale[a];
                        sign *= m[(a, a)].signum();
                    } else {
                        ratio *= self.dual_extent(a, cell.base[a]) * scale[a];
                    }
                }
                sign * ratio * v
            })
            .collect())
    }
}
