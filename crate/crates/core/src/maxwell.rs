//! Electromagnetism on rectilinear grids.
//!
//! Storage follows the Yee staggering read as DEC: `E` on primal edges, `B` on primal
//! faces, `D` and `J` on dual faces (indexed by primal edges), `H` on dual edges
//! (indexed by primal faces), `ρ` on dual cells (indexed by primal vertices). All
//! values are integrated over their cells. Dual cells are externally oriented,
//! dual first, so the dual coboundaries are transposes:
//!
//! * `∂B/∂t = -d₁E`
//! * `∂D/∂t = d₁ᵀH - J`
//! * `div D = -d₀ᵀD = ρ`
//!
//! Bounded axes are perfect electric conductors: tangential `E` vanishes on the walls.

use thiserror::Error;

use crate::complex::Parity;
use crate::forms_poly::PolyForm;
use crate::grid::{GridError, RectGrid};
use crate::linalg::{conjugate_gradient, CgReport, LinearOperator, Matrix};
use crate::metric::{Metric, MetricError};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxwellError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("electromagnetic solvers need a 3-dimensional spatial grid, got {0}")]
    NotSpatial(usize),
    #[error("material values must be positive (cell {cell}: eps={eps}, mu={mu})")]
    Material { cell: usize, eps: f64, mu: f64 },
    #[error("time step {dt} exceeds the stability bound {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("linear solver did not converge: relative residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("net charge {0} is incompatible with a fully periodic grid")]
    IncompatibleCharge(f64),
    #[error("current is not conserved: dJ = {residual} at vertex {vertex}")]
    NonConservedCurrent { vertex: usize, residual: f64 },
    #[error("particle at {0:?} left the bounded grid")]
    ParticleOutside(Vec<f64>),
    #[error("field has {found} values, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("4-velocity must be unit timelike (g(V,V) = {0})")]
    NotUnitTimelike(String),
    #[error("field strength must be an antisymmetric {0}x{0} matrix")]
    NotTwoForm(usize),
    #[error("slice level {0} is outside the grid")]
    Slice(usize),
}

// --- Field dictionary -------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldName {
    E,
    D,
    B,
    H,
    Rho,
    J,
    F,
    Hcal,
    Jcal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Home {
    Space,
    Spacetime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub degree: usize,
    pub parity: Parity,
    pub home: Home,
}

impl FieldName {
    pub const ALL: [FieldName; 9] =
        [FieldName::E, FieldName::D, FieldName::B, FieldName::H, FieldName::Rho, FieldName::J, FieldName::F, FieldName::Hcal, FieldName::Jcal];

    pub fn spec(self) -> FieldSpec {
        use FieldName::*;
        use Parity::*;
        let (degree, parity, home) = match self {
            E => (1, Straight, Home::Space),
            D => (2, Twisted, Home::Space),
            B => (2, Straight, Home::Space),
            H => (1, Twisted, Home::Space),
            Rho => (3, Twisted, Home::Space),
            J => (2, Twisted, Home::Space),
            F => (2, Straight, Home::Spacetime),
            Hcal => (2, Twisted, Home::Spacetime),
            Jcal => (3, Twisted, Home::Spacetime),
        };
        FieldSpec { degree, parity, home }
    }

    pub fn symbol(self) -> &'static str {
        use FieldName::*;
        match self {
            E => "E",
            D => "D",
            B => "B",
            H => "H",
            Rho => "rho",
            J => "J",
            F => "F",
            Hcal => "Hcal",
            Jcal => "Jcal",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.symbol().eq_ignore_ascii_case(text.trim()))
    }
}

/// A field as handed to [`validate_dictionary`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledField {
    pub name: FieldName,
    pub degree: usize,
    pub parity: Parity,
    pub home: Home,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryViolation {
    pub name: FieldName,
    pub expected: FieldSpec,
    pub found: FieldSpec,
}

impl std::fmt::Display for DictionaryViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (e, g) = (self.expected, self.found);
        write!(
            f,
            "{}: expected {} {}-form on {:?}, found {} {}-form on {:?}",
            self.name.symbol(),
            e.parity,
            e.degree,
            e.home,
            g.parity,
            g.degree,
            g.home
        )
    }
}

/// Every field whose degree, parity or home disagrees with the dictionary.
pub fn validate_dictionary(fields: &[LabeledField]) -> Vec<DictionaryViolation> {
    fields
        .iter()
        .filter_map(|f| {
            let expected = f.name.spec();
            let found = FieldSpec { degree: f.degree, parity: f.parity, home: f.home };
            (expected != found).then_some(DictionaryViolation { name: f.name, expected, found })
        })
        .collect()
}

// --- Materials and constitutive weights -------------------------------------------------

/// Permittivity and permeability per 3-cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Materials {
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
}

impl Materials {
    pub fn uniform(grid: &RectGrid, eps: f64, mu: f64) -> Self {
        let n = grid.count(grid.dim());
        Materials { eps: vec![eps; n], mu: vec![mu; n] }
    }

    /// Overwrite the cells with base index in `lo..hi` (per axis, half-open).
    pub fn set_block(&mut self, grid: &RectGrid, lo: &[usize], hi: &[usize], eps: f64, mu: f64) {
        let n = grid.dim();
        for c in 0..grid.count(n) {
            let base = grid.cell(n, c).base;
            if base.iter().zip(lo.iter().zip(hi)).all(|(&x, (&l, &h))| x >= l && x < h) {
                self.eps[c] = eps;
                self.mu[c] = mu;
            }
        }
    }

    fn validate(&self, grid: &RectGrid) -> Result<(), MaxwellError> {
        let n = grid.count(grid.dim());
        if self.eps.len() != n || self.mu.len() != n {
            return Err(MaxwellError::WrongLength { expected: n, found: self.eps.len().min(self.mu.len()) });
        }
        for c in 0..n {
            let (eps, mu) = (self.eps[c], self.mu[c]);
            if !(eps > 0.0 && mu > 0.0 && eps.is_finite() && mu.is_finite()) {
                return Err(MaxwellError::Material { cell: c, eps, mu });
            }
        }
        Ok(())
    }
}

fn require_spatial(grid: &RectGrid) -> Result<(), MaxwellError> {
    if grid.dim() != 3 {
        return Err(MaxwellError::NotSpatial(grid.dim()));
    }
    Ok(())
}

/// Top cells touching a k-cell, one entry per adjacent corner (repeats on 1-cell periodic axes).
fn adjacent_cells(grid: &RectGrid, k: usize, index: usize) -> Vec<usize> {
    let n = grid.dim();
    let cell = grid.cell(k, index);
    let free: Vec<usize> = (0..n).filter(|a| !cell.dirs.contains(a)).collect();
    let all: Vec<usize> = (0..n).collect();
    (0..1usize << free.len())
        .filter_map(|mask| {
            let mut base: Vec<isize> = cell.base.iter().map(|&x| x as isize).collect();
            for (bit, &a) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    base[a] -= 1;
                }
            }
            grid.index(&all, &base)
        })
        .collect()
}

/// Discrete constitutive maps: `D = ε⋆E` per edge and `H = μ⁻¹⋆B` per face.
#[derive(Clone, Debug)]
pub struct Constitutive {
    /// `D_e = eps_weight[e] * E_e`
    pub eps_weight: Vec<f64>,
    /// `H_f = reluctance[f] * B_f`
    pub reluctance: Vec<f64>,
}

impl Constitutive {
    pub fn new(grid: &RectGrid, materials: &Materials) -> Result<Self, MaxwellError> {
        require_spatial(grid)?;
        materials.validate(grid)?;
        let h = grid.spacing();
        let eps_weight = (0..grid.count(1))
            .map(|e| {
                let a = grid.cell(1, e).dirs[0];
                let quadrant: f64 = (0..3).filter(|&b| b != a).map(|b| 0.5 * h[b]).product();
                adjacent_cells(grid, 1, e).iter().map(|&c| materials.eps[c] * quadrant).sum::<f64>() / h[a]
            })
            .collect();
        let reluctance = (0..grid.count(2))
            .map(|f| {
                let cell = grid.cell(2, f);
                let a = (0..3).find(|b| !cell.dirs.contains(b)).expect("face has a normal axis");
                let area: f64 = cell.dirs.iter().map(|&b| h[b]).product();
                adjacent_cells(grid, 2, f).iter().map(|&c| 0.5 * h[a] / materials.mu[c]).sum::<f64>() / area
            })
            .collect();
        Ok(Constitutive { eps_weight, reluctance })
    }
}

// --- Probes -------------------------------------------------------------------------------

fn in_box(base: &[usize], lo: &[usize], hi: &[usize]) -> bool {
    base.iter().zip(lo.iter().zip(hi)).all(|(&x, (&l, &h))| x >= l && x <= h)
}

/// Outward flux of a dual-face field (`D` or `J`) through the boundary of the dual cells of
/// the vertex box `lo..=hi`.
pub fn box_flux(grid: &RectGrid, field: &[f64], lo: &[usize], hi: &[usize]) -> f64 {
    box_flux_generic(grid, field, lo, hi)
}

fn box_flux_generic<S: Scalar>(grid: &RectGrid, field: &[S], lo: &[usize], hi: &[usize]) -> S {
    let mut total = S::zero();
    for e in 0..grid.count(1) {
        let fs = grid.faces(1, e);
        if fs.len() != 2 {
            continue;
        }
        for &(v, s) in fs {
            if !in_box(&grid.cell(0, v).base, lo, hi) {
                continue;
            }
            let other = fs.iter().find(|&&(w, _)| w != v).map(|&(w, _)| w).expect("two endpoints");
            if in_box(&grid.cell(0, other).base, lo, hi) {
                continue;
            }
            // Edge leaves the box at its head when the inside vertex is the tail (s = -1).
            total = if s < 0 { total + field[e].clone() } else { total - field[e].clone() };
        }
    }
    total
}

/// Sum of a vertex field (`ρ`) over the vertex box `lo..=hi`.
pub fn box_sum<S: Scalar>(grid: &RectGrid, field: &[S], lo: &[usize], hi: &[usize]) -> S {
    (0..grid.count(0))
        .filter(|&v| in_box(&grid.cell(0, v).base, lo, hi))
        .fold(S::zero(), |acc, v| acc + field[v].clone())
}

/// Circulation of `H` around the rectangle of cell centres `(i+½, j+½, k+½)` with
/// `i ∈ [lo.0, hi.0]`, `j ∈ [lo.1, hi.1]`, anticlockwise seen from +z. It encloses the
/// z-edges based at `(i, j, k)` with `lo.0 < i ≤ hi.0`, `lo.1 < j ≤ hi.1`.
pub fn loop_circulation(grid: &RectGrid, h: &[f64], k: usize, lo: (usize, usize), hi: (usize, usize)) -> f64 {
    let yz = |i: usize, j: usize| grid.index(&[1, 2], &[i as isize, j as isize, k as isize]).expect("yz face");
    let xz = |i: usize, j: usize| grid.index(&[0, 2], &[i as isize, j as isize, k as isize]).expect("xz face");
    let mut c = 0.0;
    for i in lo.0 + 1..=hi.0 {
        c += h[yz(i, lo.1)] - h[yz(i, hi.1)];
    }
    for j in lo.1 + 1..=hi.1 {
        c += h[xz(lo.0, j)] - h[xz(hi.0, j)];
    }
    c
}

/// Current through the surface spanned by [`loop_circulation`]'s rectangle.
pub fn enclosed_current(grid: &RectGrid, j: &[f64], k: usize, lo: (usize, usize), hi: (usize, usize)) -> f64 {
    let mut total = 0.0;
    for x in lo.0 + 1..=hi.0 {
        for y in lo.1 + 1..=hi.1 {
            total += j[grid.index(&[2], &[x as isize, y as isize, k as isize]).expect("z edge")];
        }
    }
    total
}

// --- Statics --------------------------------------------------------------------------------

/// Operator `Pᵀ Aᵀ W A P` restricted to free unknowns.
struct Restricted<'a> {
    free: &'a [usize],
    full_len: usize,
    apply_full: &'a dyn Fn(&[f64]) -> Vec<f64>,
}

impl LinearOperator for Restricted<'_> {
    fn dim(&self) -> usize {
        self.free.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut full = vec![0.0; self.full_len];
        for (&i, v) in self.free.iter().zip(x) {
            full[i] = *v;
        }
        let y = (self.apply_full)(&full);
        for (o, &i) in out.iter_mut().zip(self.free) {
            *o = y[i];
        }
    }
}

#[derive(Clone, Debug)]
pub struct ElectrostaticSolution {
    pub phi: Vec<f64>,
    pub e: Vec<f64>,
    pub d: Vec<f64>,
    pub report: CgReport,
}

impl ElectrostaticSolution {
    /// `(flux of D out of the box, charge inside)`.
    pub fn flux_report(&self, grid: &RectGrid, rho: &[f64], lo: &[usize], hi: &[usize]) -> (f64, f64) {
        (box_flux(grid, &self.d, lo, hi), box_sum(grid, rho, lo, hi))
    }
}

/// Solve `E = -dφ`, `D = ε⋆E`, `div D = ρ`. Bounded axes are grounded walls (`φ = 0`); a
/// fully periodic grid needs zero net charge.
pub fn solve_electrostatics(
    grid: &RectGrid,
    rho: &[f64],
    materials: &Materials,
    rel_tol: f64,
    max_iter: usize,
) -> Result<ElectrostaticSolution, MaxwellError> {
    let c = Constitutive::new(grid, materials)?;
    let nv = grid.count(0);
    if rho.len() != nv {
        return Err(MaxwellError::WrongLength { expected: nv, found: rho.len() });
    }
    let periodic = (0..3).all(|a| grid.is_periodic(a));
    if periodic {
        let net: f64 = rho.iter().sum();
        let scale: f64 = rho.iter().map(|r| r.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        if net.abs() > 1e-12 * scale {
            return Err(MaxwellError::IncompatibleCharge(net));
        }
    }
    let free: Vec<usize> = (0..nv).filter(|&v| !grid.on_boundary(0, v)).collect();
    let apply = |phi: &[f64]| -> Vec<f64> {
        let mut de = grid.coboundary(0, phi).expect("vertex cochain");
        de.iter_mut().zip(&c.eps_weight).for_each(|(x, w)| *x *= w);
        grid.coboundary_transpose(0, &de).expect("edge cochain")
    };
    let op = Restricted { free: &free, full_len: nv, apply_full: &apply };
    let rhs: Vec<f64> = free.iter().map(|&v| rho[v]).collect();
    let mut x = vec![0.0; free.len()];
    let report = conjugate_gradient(&op, &rhs, &mut x, rel_tol, max_iter);
    if !report.converged {
        return Err(MaxwellError::NoConvergence { residual: report.relative_residual, iterations: report.iterations });
    }
    let mut phi = vec![0.0; nv];
    for (&v, val) in free.iter().zip(&x) {
        phi[v] = *val;
    }
    if periodic {
        let mean = phi.iter().sum::<f64>() / nv as f64;
        phi.iter_mut().for_each(|p| *p -= mean);
    }
    let e: Vec<f64> = grid.coboundary(0, &phi)?.into_iter().map(|v| -v).collect();
    let d = e.iter().zip(&c.eps_weight).map(|(e, w)| e * w).collect();
    Ok(ElectrostaticSolution { phi, e, d, report })
}

/// `-d₀ᵀ` of a dual-face field: the discrete divergence on dual cells.
pub fn divergence<S: Scalar>(grid: &RectGrid, field: &[S]) -> Result<Vec<S>, MaxwellError> {
    Ok(grid.coboundary_transpose(0, field)?.into_iter().map(|v| -v).collect())
}

#[derive(Clone, Debug)]
pub struct MagnetostaticSolution {
    /// Vector potential on primal edges.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub h: Vec<f64>,
    pub report: CgReport,
}

/// Solve `dH = J`, `H = μ⁻¹⋆B`, `B = dA` with tangential `A = 0` on conducting walls.
/// `J` must satisfy `dJ = 0`.
pub fn solve_magnetostatics(
    grid: &RectGrid,
    j: &[f64],
    materials: &Materials,
    rel_tol: f64,
    max_iter: usize,
) -> Result<MagnetostaticSolution, MaxwellError> {
    let c = Constitutive::new(grid, materials)?;
    let ne = grid.count(1);
    if j.len() != ne {
        return Err(MaxwellError::WrongLength { expected: ne, found: j.len() });
    }
    let scale = j.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let div = divergence(grid, j)?;
    if let Some((vertex, r)) = div.iter().enumerate().find(|(_, r)| r.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        return Err(MaxwellError::NonConservedCurrent { vertex, residual: *r });
    }
    let free: Vec<usize> = (0..ne).filter(|&e| !grid.on_boundary(1, e)).collect();
    let apply = |a: &[f64]| -> Vec<f64> {
        let mut b = grid.coboundary(1, a).expect("edge cochain");
        b.iter_mut().zip(&c.reluctance).for_each(|(x, w)| *x *= w);
        grid.coboundary_transpose(1, &b).expect("face cochain")
    };
    let op = Restricted { free: &free, full_len: ne, apply_full: &apply };
    let rhs: Vec<f64> = free.iter().map(|&e| j[e]).collect();
    let mut x = vec![0.0; free.len()];
    let report = conjugate_gradient(&op, &rhs, &mut x, rel_tol, max_iter);
    if !report.converged {
        return Err(MaxwellError::NoConvergence { residual: report.relative_residual, iterations: report.iterations });
    }
    let mut a = vec![0.0; ne];
    for (&e, v) in free.iter().zip(&x) {
        a[e] = *v;
    }
    let b = grid.coboundary(1, &a)?;
    let h = b.iter().zip(&c.reluctance).map(|(b, w)| b * w).collect();
    Ok(MagnetostaticSolution { a, b, h, report })
}

/// Current cochain of a straight wire along z through vertex column `(i, j)`.
pub fn wire_current(grid: &RectGrid, i: usize, j: usize, current: f64) -> Vec<f64> {
    let mut out = vec![0.0; grid.count(1)];
    for k in 0..grid.shape()[2] {
        if let Some(e) = grid.index(&[2], &[i as isize, j as isize, k as isize]) {
            out[e] = current;
        }
    }
    out
}

// --- Charge deposition -----------------------------------------------------------------------

/// Cloud-in-cell charge of a point charge on the dual cells.
pub fn deposit_charge<S: Scalar>(grid: &RectGrid, h: &[S], q: &S, x: &[S], rho: &mut [S]) -> Result<(), MaxwellError> {
    let n = grid.dim();
    let cell: Vec<i64> = (0..n).map(|a| (x[a].clone() / h[a].clone()).floor_int()).collect();
    let w: Vec<S> = (0..n).map(|a| x[a].clone() / h[a].clone() - S::from_int(cell[a])).collect();
    for corner in 0..1usize << n {
        let mut base = Vec::with_capacity(n);
        let mut weight = q.clone();
        for a in 0..n {
            let up = corner & (1 << a) != 0;
            base.push((cell[a] + up as i64) as isize);
            weight = weight * if up { w[a].clone() } else { S::one() - w[a].clone() };
        }
        let v = grid.index(&[], &base).ok_or_else(|| outside(x))?;
        rho[v] = rho[v].clone() + weight;
    }
    Ok(())
}

fn outside<S: Scalar>(x: &[S]) -> MaxwellError {
    MaxwellError::ParticleOutside(x.iter().map(Scalar::as_f64).collect())
}

/// Charge-conserving current of a point charge moving in a straight line from `x1` to `x2`
/// during `dt`, split at a relay point so each piece stays inside one cell. Adds to `j`
/// (current through dual faces). With [`deposit_charge`] it satisfies
/// `ρ(x2) - ρ(x1) = -dt · div J` exactly.
pub fn deposit_zigzag<S: Scalar>(
    grid: &RectGrid,
    h: &[S],
    q: &S,
    x1: &[S],
    x2: &[S],
    dt: &S,
    j: &mut [S],
) -> Result<(), MaxwellError> {
    let n = grid.dim();
    let two = S::from_int(2);
    let mut relay = Vec::with_capacity(n);
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for a in 0..n {
        let i1 = (x1[a].clone() / h[a].clone()).floor_int();
        let i2 = (x2[a].clone() / h[a].clone()).floor_int();
        let mid = (x1[a].clone() + x2[a].clone()) / two.clone();
        let upper = S::from_int(i1.min(i2) + 1) * h[a].clone();
        let lower = S::from_int(i1.max(i2)) * h[a].clone();
        let r = if mid > lower { mid } else { lower };
        relay.push(if r < upper { r } else { upper });
        c1.push(i1);
        c2.push(i2);
    }
    segment_current(grid, h, q, x1, &relay, &c1, dt, j)?;
    segment_current(grid, h, q, &relay, x2, &c2, dt, j)
}

#[allow(clippy::too_many_arguments)]
fn segment_current<S: Scalar>(
    grid: &RectGrid,
    h: &[S],
    q: &S,
    p: &[S],
    r: &[S],
    cell: &[i64],
    dt: &S,
    j: &mut [S],
) -> Result<(), MaxwellError> {
    let n = grid.dim();
    let two = S::from_int(2);
    let twelve = S::from_int(12);
    // Relative coordinates of the segment midpoint and per-axis displacement in cell units.
    let w: Vec<S> = (0..n)
        .map(|a| (p[a].clone() + r[a].clone()) / two.clone() / h[a].clone() - S::from_int(cell[a]))
        .collect();
    let delta: Vec<S> = (0..n).map(|a| (r[a].clone() - p[a].clone()) / h[a].clone()).collect();
    for a in 0..n {
        if delta[a].is_zero() {
            continue;
        }
        let flux = q.clone() * delta[a].clone() / dt.clone();
        let others: Vec<usize> = (0..n).filter(|&b| b != a).collect();
        for corner in 0..1usize << others.len() {
            let mut base: Vec<isize> = cell.iter().map(|&c| c as isize).collect();
            // Exact average of the product of linear transverse weights along the segment.
            let mut mean = S::one();
            let mut slope = S::one();
            for (bit, &b) in others.iter().enumerate() {
                let up = corner & (1 << bit) != 0;
                if up {
                    base[b] += 1;
                    mean = mean * w[b].clone();
                    slope = slope * delta[b].clone();
                } else {
                    mean = mean * (S::one() - w[b].clone());
                    slope = slope * -delta[b].clone();
                }
            }
            let weight = if others.len() == 2 { mean + slope / twelve.clone() } else { mean };
            let e = grid.index(&[a], &base).ok_or_else(|| outside(p))?;
            j[e] = j[e].clone() + flux.clone() * weight;
        }
    }
    Ok(())
}

/// Charge balance over a space-time cylinder: vertex box `lo..=hi` times steps `0..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChargeConservationReport<S> {
    pub initial: S,
    pub final_charge: S,
    /// Charge that left through the sides, `Σ dt · (outward flux of J)`.
    pub side_flux: S,
    pub leak: S,
    pub closed: bool,
}

/// Check `initial - final = side flux` from a charge history `rho[0..=N]` (dual cells) and
/// current history `j[0..N]` (dual faces, at half steps). Exact in rational mode.
pub fn charge_conservation_check<S: Scalar>(
    grid: &RectGrid,
    rho: &[Vec<S>],
    j: &[Vec<S>],
    dt: &S,
    lo: &[usize],
    hi: &[usize],
) -> ChargeConservationReport<S> {
    assert_eq!(rho.len(), j.len() + 1, "one more charge snapshot than current snapshot");
    let initial = box_sum(grid, &rho[0], lo, hi);
    let final_charge = box_sum(grid, rho.last().expect("at least one snapshot"), lo, hi);
    let mut side_flux = S::zero();
    let mut scale = initial.as_f64().abs() + final_charge.as_f64().abs();
    for jn in j {
        let f = box_flux_generic(grid, jn, lo, hi) * dt.clone();
        scale += f.as_f64().abs();
        side_flux = side_flux + f;
    }
    let leak = initial.clone() - final_charge.clone() - side_flux.clone();
    let closed = leak.is_zero() || leak.as_f64().abs() <= 1e-12 * scale.max(1.0);
    ChargeConservationReport { initial, final_charge, side_flux, leak, closed }
}

// --- Time evolution ---------------------------------------------------------------------------

/// Point charge on a prescribed trajectory.
pub struct Particle {
    pub charge: f64,
    pub trajectory: Box<dyn Fn(f64) -> [f64; 3] + Send + Sync>,
}

impl Particle {
    /// Uniform motion from `x0` with velocity `v`.
    pub fn uniform(charge: f64, x0: [f64; 3], v: [f64; 3]) -> Self {
        Particle { charge, trajectory: Box::new(move |t| [x0[0] + v[0] * t, x0[1] + v[1] * t, x0[2] + v[2] * t]) }
    }
}

/// Measurement recorded after every step.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    /// Outward flux of `D` through a vertex box and the charge inside.
    BoxFlux { lo: [usize; 3], hi: [usize; 3] },
    /// Circulation of `H` around a rectangle in the dual plane above level `k`.
    Loop { k: usize, lo: (usize, usize), hi: (usize, usize) },
}

impl Probe {
    pub fn columns(&self, i: usize) -> Vec<String> {
        match self {
            Probe::BoxFlux { .. } => vec![format!("probe{i}_flux"), format!("probe{i}_charge")],
            Probe::Loop { .. } => vec![format!("probe{i}_circulation"), format!("probe{i}_current")],
        }
    }
}

/// Yee state: `E`, `D`, `ρ` at integer step `n`, `B` at `n - ½`.
pub struct EmState {
    pub grid: RectGrid,
    pub materials: Materials,
    constitutive: Constitutive,
    pub time: f64,
    pub step: usize,
    pub e: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub rho: Vec<f64>,
    /// Current of the last step, at `n - ½`.
    pub j: Vec<f64>,
    pub particles: Vec<Particle>,
    /// Prescribed current added at each half step: `(t, j)`.
    pub driven: Option<Box<dyn Fn(f64, &mut [f64]) + Send + Sync>>,
    pub probes: Vec<Probe>,
    wall_edges: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    /// Leapfrog energy `½ E·D + ½ B⁻·H⁺`.
    pub energy: f64,
    /// `max |dB|` relative to `max |B|` (or to `4 dt max |E|` if larger).
    pub div_b: f64,
    /// `max |(div D - ρ) - (div D - ρ)₀|` over interior dual cells.
    pub gauss_drift: f64,
    pub total_charge: f64,
    pub probes: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub records: Vec<StepRecord>,
    pub probe_columns: Vec<String>,
}

impl Diagnostics {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,time,energy,div_b,gauss_drift,total_charge");
        for c in &self.probe_columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{},{:.12e},{:.12e},{:.6e},{:.6e},{:.12e}", r.step, r.time, r.energy, r.div_b, r.gauss_drift, r.total_charge));
            for p in &r.probes {
                out.push_str(&format!(",{p:.12e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn max_div_b(&self) -> f64 {
        self.records.iter().map(|r| r.div_b).fold(0.0, f64::max)
    }

    pub fn max_gauss_drift(&self) -> f64 {
        self.records.iter().map(|r| r.gauss_drift).fold(0.0, f64::max)
    }

    /// `(max - min) / max` of the energy series.
    pub fn energy_variation(&self) -> f64 {
        let max = self.records.iter().map(|r| r.energy).fold(f64::MIN, f64::max);
        let min = self.records.iter().map(|r| r.energy).fold(f64::MAX, f64::min);
        if max <= 0.0 {
            0.0
        } else {
            (max - min) / max
        }
    }
}

impl EmState {
    /// Zero fields at `t = 0`.
    pub fn new(grid: RectGrid, materials: Materials) -> Result<Self, MaxwellError> {
        let constitutive = Constitutive::new(&grid, &materials)?;
        let wall_edges = (0..grid.count(1)).map(|e| grid.on_boundary(1, e)).collect();
        Ok(EmState {
            e: vec![0.0; grid.count(1)],
            b: vec![0.0; grid.count(2)],
            d: vec![0.0; grid.count(1)],
            rho: vec![0.0; grid.count(0)],
            j: vec![0.0; grid.count(1)],
            grid,
            materials,
            constitutive,
            time: 0.0,
            step: 0,
            particles: Vec::new(),
            driven: None,
            probes: Vec::new(),
            wall_edges,
        })
    }

    pub fn constitutive(&self) -> &Constitutive {
        &self.constitutive
    }

    /// Set `E` (and `D = ε⋆E`); tangential wall values are dropped.
    pub fn set_e(&mut self, e: Vec<f64>) -> Result<(), MaxwellError> {
        if e.len() != self.grid.count(1) {
            return Err(MaxwellError::WrongLength { expected: self.grid.count(1), found: e.len() });
        }
        self.e = e;
        for (i, wall) in self.wall_edges.iter().enumerate() {
            if *wall {
                self.e[i] = 0.0;
            }
        }
        self.d = self.e.iter().zip(&self.constitutive.eps_weight).map(|(e, w)| e * w).collect();
        Ok(())
    }

    pub fn set_b(&mut self, b: Vec<f64>) -> Result<(), MaxwellError> {
        if b.len() != self.grid.count(2) {
            return Err(MaxwellError::WrongLength { expected: self.grid.count(2), found: b.len() });
        }
        self.b = b;
        Ok(())
    }

    /// Largest stable time step for the current materials.
    pub fn cfl_limit(&self) -> f64 {
        let c_max = self
            .materials
            .eps
            .iter()
            .zip(&self.materials.mu)
            .map(|(e, m)| 1.0 / (e * m).sqrt())
            .fold(0.0, f64::max);
        let s: f64 = self.grid.spacing().iter().map(|h| 1.0 / (h * h)).sum();
        1.0 / (c_max * s.sqrt())
    }

    fn deposit_rho(&self, t: f64) -> Result<Vec<f64>, MaxwellError> {
        let mut rho = vec![0.0; self.grid.count(0)];
        let h = self.grid.spacing().to_vec();
        for p in &self.particles {
            deposit_charge(&self.grid, &h, &p.charge, &(p.trajectory)(t), &mut rho)?;
        }
        Ok(rho)
    }

    fn gauss(&self) -> Result<Vec<f64>, MaxwellError> {
        let div = divergence(&self.grid, &self.d)?;
        Ok(div.iter().zip(&self.rho).map(|(a, b)| a - b).collect())
    }

    fn probe_values(&self) -> Vec<f64> {
        let h: Vec<f64> = self.b.iter().zip(&self.constitutive.reluctance).map(|(b, w)| b * w).collect();
        self.probes
            .iter()
            .flat_map(|p| match p {
                Probe::BoxFlux { lo, hi } => {
                    vec![box_flux(&self.grid, &self.d, lo, hi), box_sum(&self.grid, &self.rho, lo, hi)]
                }
                Probe::Loop { k, lo, hi } => vec![
                    loop_circulation(&self.grid, &h, *k, *lo, *hi),
                    enclosed_current(&self.grid, &self.j, *k, *lo, *hi),
                ],
            })
            .collect()
    }
}

/// Advance `steps` leapfrog steps of size `dt`:
/// `B⁺ = B⁻ - dt·dE`, `H = μ⁻¹⋆B⁺`, `D' = D + dt·(dᵀH - J)`, `E' = (ε⋆)⁻¹D'`.
/// Particle currents use [`deposit_zigzag`], so the Gauss residual is invariant.
pub fn evolve_leapfrog(state: &mut EmState, steps: usize, dt: f64) -> Result<Diagnostics, MaxwellError> {
    evolve_with(state, steps, dt, |_, _| {})
}

/// [`evolve_leapfrog`] with a callback after every step.
pub fn evolve_with(
    state: &mut EmState,
    steps: usize,
    dt: f64,
    mut observe: impl FnMut(&EmState, &StepFields),
) -> Result<Diagnostics, MaxwellError> {
    let limit = state.cfl_limit();
    if !(dt > 0.0 && dt <= limit) {
        return Err(MaxwellError::Cfl { dt, limit });
    }
    let grid = state.grid.clone();
    let h = grid.spacing().to_vec();
    let interior: Vec<usize> = (0..grid.count(0)).filter(|&v| !grid.on_boundary(0, v)).collect();
    if state.step == 0 && !state.particles.is_empty() {
        state.rho = state.deposit_rho(state.time)?;
    }
    let g0 = state.gauss()?;
    let mut diag = Diagnostics {
        records: Vec::with_capacity(steps),
        probe_columns: state.probes.iter().enumerate().flat_map(|(i, p)| p.columns(i)).collect(),
    };
    for _ in 0..steps {
        let t = state.time;
        let de = grid.coboundary(1, &state.e)?;
        let b_new: Vec<f64> = state.b.iter().zip(&de).map(|(b, d)| b - dt * d).collect();
        let h_new: Vec<f64> = b_new.iter().zip(&state.constitutive.reluctance).map(|(b, w)| b * w).collect();
        let energy = 0.5 * state.e.iter().zip(&state.d).map(|(e, d)| e * d).sum::<f64>()
            + 0.5 * state.b.iter().zip(&h_new).map(|(b, h)| b * h).sum::<f64>();
        let mut j = vec![0.0; grid.count(1)];
        for p in &state.particles {
            let (x1, x2) = ((p.trajectory)(t), (p.trajectory)(t + dt));
            deposit_zigzag(&grid, &h, &p.charge, &x1, &x2, &dt, &mut j)?;
        }
        if let Some(f) = &state.driven {
            f(t + 0.5 * dt, &mut j);
        }
        let curl_h = grid.coboundary_transpose(1, &h_new)?;
        let d_old = state.d.clone();
        let e_old = state.e.clone();
        let b_old = std::mem::replace(&mut state.b, b_new);
        for (i, d) in state.d.iter_mut().enumerate() {
            *d = if state.wall_edges[i] { 0.0 } else { *d + dt * (curl_h[i] - j[i]) };
        }
        state.e = state.d.iter().zip(&state.constitutive.eps_weight).map(|(d, w)| d / w).collect();
        state.j = j;
        state.time = t + dt;
        state.step += 1;
        if !state.particles.is_empty() {
            state.rho = state.deposit_rho(state.time)?;
        }
        // Relative to max |B|, or to the size of one Faraday update when B is smaller.
        let e_max = e_old.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let b_scale = state.b.iter().map(|b| b.abs()).fold(4.0 * dt * e_max, f64::max);
        let div_b = grid.coboundary(2, &state.b)?.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let gauss = state.gauss()?;
        let gauss_drift = interior.iter().map(|&v| (gauss[v] - g0[v]).abs()).fold(0.0, f64::max);
        diag.records.push(StepRecord {
            step: state.step,
            time: state.time,
            energy,
            div_b: if b_scale > 0.0 { div_b / b_scale } else { div_b },
            gauss_drift,
            total_charge: state.rho.iter().sum(),
            probes: state.probe_values(),
        });
        observe(state, &StepFields { e_old: &e_old, b_old: &b_old, d_old: &d_old, h: &h_new, dt });
    }
    Ok(diag)
}

/// Fields from the step just taken, passed to [`evolve_with`] observers.
pub struct StepFields<'a> {
    /// `E` at the start of the step (`n`).
    pub e_old: &'a [f64],
    /// `B` at the start of the step (`n - ½`).
    pub b_old: &'a [f64],
    /// `D` at the start of the step (`n`).
    pub d_old: &'a [f64],
    /// `H` at `n + ½`.
    pub h: &'a [f64],
    pub dt: f64,
}

// --- Constant-z slice ------------------------------------------------------------------------

/// Pullback of `F` to the primal plane `z = k` and of `𝓗`, `𝓙` to the dual plane above it,
/// as cochains on a 2-dimensional `(x, y)` grid, for one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSliceStep {
    /// `E` on slice edges at step `n`.
    pub e: Vec<f64>,
    /// `B` on slice faces at `n - ½` and `n + ½`.
    pub b_before: Vec<f64>,
    pub b_after: Vec<f64>,
    /// `D` through the slice's dual cells (slice vertices) at `n` and `n + 1`.
    pub d_before: Vec<f64>,
    pub d_after: Vec<f64>,
    /// `H` on the dual plane, indexed by slice edges.
    pub h: Vec<f64>,
    /// `J` through the slice's dual cells at `n + ½`.
    pub j: Vec<f64>,
    pub dt: f64,
}

/// Records [`ZSliceStep`]s during evolution and checks the plane's integral laws.
#[derive(Clone, Debug)]
pub struct ZSlice {
    pub k: usize,
    pub plane: RectGrid,
    pub steps: Vec<ZSliceStep>,
}

impl ZSlice {
    pub fn new(grid: &RectGrid, k: usize) -> Result<Self, MaxwellError> {
        require_spatial(grid)?;
        if k >= grid.shape()[2] {
            return Err(MaxwellError::Slice(k));
        }
        let plane = RectGrid::new(
            grid.shape()[..2].to_vec(),
            grid.spacing()[..2].to_vec(),
            vec![grid.is_periodic(0), grid.is_periodic(1)],
        )?;
        Ok(ZSlice { k, plane, steps: Vec::new() })
    }

    fn lift(&self, grid: &RectGrid, dirs: &[usize], base: &[usize]) -> usize {
        grid.index(dirs, &[base[0] as isize, base[1] as isize, self.k as isize]).expect("slice cell exists in grid")
    }

    /// Pull the fields of a finished step back to the slice.
    pub fn record(&mut self, state: &EmState, fields: &StepFields) {
        let g = &state.grid;
        let p = &self.plane;
        let edges = |src: &[f64]| -> Vec<f64> {
            (0..p.count(1)).map(|i| { let c = p.cell(1, i); src[self.lift(g, &c.dirs, &c.base)] }).collect()
        };
        let faces = |src: &[f64]| -> Vec<f64> {
            (0..p.count(2)).map(|i| src[self.lift(g, &[0, 1], &p.cell(2, i).base)]).collect()
        };
        let verts = |src: &[f64]| -> Vec<f64> {
            (0..p.count(0)).map(|i| src[self.lift(g, &[2], &p.cell(0, i).base)]).collect()
        };
        // Slice x-edge (y-edge) carries H of the xz (yz) face above it.
        let h = (0..p.count(1))
            .map(|i| {
                let c = p.cell(1, i);
                let dirs = if c.dirs == [0] { [0, 2] } else { [1, 2] };
                fields.h[self.lift(g, &dirs, &c.base)]
            })
            .collect();
        self.steps.push(ZSliceStep {
            e: edges(fields.e_old),
            b_before: faces(fields.b_old),
            b_after: faces(&state.b),
            d_before: verts(fields.d_old),
            d_after: verts(&state.d),
            h,
            j: verts(&state.j),
            dt: fields.dt,
        });
    }

    /// `max |B⁺ - B⁻ + dt·dE|` over all recorded steps: closure of the pulled-back `F`.
    pub fn faraday_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| {
                let de = self.plane.coboundary(1, &s.e).expect("slice edges");
                (0..de.len()).map(|f| (s.b_after[f] - s.b_before[f] + s.dt * de[f]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `max |D' - D - dt·(dᵀH - J)|` over all recorded steps: `d𝓗 = 𝓙` on the dual plane.
    pub fn ampere_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| {
                let curl = self.plane.coboundary_transpose(0, &s.h).expect("slice edges");
                (0..curl.len())
                    .map(|v| (s.d_after[v] - s.d_before[v] - s.dt * (curl[v] - s.j[v])).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

// --- Plane wave ------------------------------------------------------------------------------

/// Vacuum plane wave `E_y = B_z = sin 2π(x - t)` on a periodic `(n, 1, 1)` grid of unit
/// length with `c = 1`; `B` starts at `-dt/2`.
pub fn plane_wave_state(n: usize, dt: f64) -> Result<EmState, MaxwellError> {
    let h = 1.0 / n as f64;
    let grid = RectGrid::periodic(vec![n, 1, 1], vec![h, h, h])?;
    let materials = Materials::uniform(&grid, 1.0, 1.0);
    let mut state = EmState::new(grid, materials)?;
    let e = plane_wave_e(&state.grid, 0.0);
    let tau = std::f64::consts::TAU;
    let b = (0..state.grid.count(2))
        .map(|f| {
            let c = state.grid.cell(2, f);
            if c.dirs != [0, 1] {
                return 0.0;
            }
            let x = c.base[0] as f64 * h;
            let t = -0.5 * dt;
            h * ((tau * (x - t)).cos() - (tau * (x + h - t)).cos()) / tau
        })
        .collect();
    state.set_e(e)?;
    state.set_b(b)?;
    Ok(state)
}

/// Exact integrated `E` of the plane wave at time `t`.
pub fn plane_wave_e(grid: &RectGrid, t: f64) -> Vec<f64> {
    let h = grid.spacing()[0];
    (0..grid.count(1))
        .map(|e| {
            let c = grid.cell(1, e);
            if c.dirs == [1] {
                grid.spacing()[1] * (std::f64::consts::TAU * (c.base[0] as f64 * h - t)).sin()
            } else {
                0.0
            }
        })
        .collect()
}

/// Relative discrete L2 error of `E` after one period at Courant number `courant`.
pub fn plane_wave_error(n: usize, courant: f64) -> Result<(f64, Diagnostics), MaxwellError> {
    let h = 1.0 / n as f64;
    let steps = (1.0 / (courant * h)).round() as usize;
    let dt = 1.0 / steps as f64;
    let mut state = plane_wave_state(n, dt)?;
    let diag = evolve_leapfrog(&mut state, steps, dt)?;
    let exact = plane_wave_e(&state.grid, state.time);
    let num: f64 = state.e.iter().zip(&exact).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = exact.iter().map(|b| b * b).sum();
    Ok(((num / den).sqrt(), diag))
}

// --- Lorentz force ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct LorentzForce<S> {
    /// `f_μ = q F_{μν} V^ν`
    pub covector: Vec<S>,
    pub vector: Vec<S>,
}

/// Force on charge `q` with unit timelike 4-velocity `v` in the field `F` (antisymmetric
/// components `F_{μν}`): the 1-form `q F(·, V)`, which is `q ι_V F` up to the slot
/// convention, and its metric dual. `g(f, V) = 0` since `F` is antisymmetric.
pub fn lorentz_force<S: Scalar>(q: &S, v: &[S], f: &Matrix<S>, g: &Metric<S>) -> Result<LorentzForce<S>, MaxwellError> {
    let n = g.dim();
    if f.rows != n || f.cols != n {
        return Err(MaxwellError::NotTwoForm(n));
    }
    for i in 0..n {
        for k in 0..n {
            if !(f[(i, k)].clone() + f[(k, i)].clone()).is_negligible() {
                return Err(MaxwellError::NotTwoForm(n));
            }
        }
    }
    let n2 = g.norm_squared(v)?;
    let timelike = g.classify(v).map(|(c, _)| c == crate::metric::CausalCharacter::Timelike).unwrap_or(false);
    if !timelike || !(n2.clone() + S::one()).is_negligible() {
        return Err(MaxwellError::NotUnitTimelike(n2.to_string()));
    }
    let covector: Vec<S> = (0..n)
        .map(|mu| (0..n).fold(S::zero(), |acc, nu| acc + f[(mu, nu)].clone() * v[nu].clone()) * q.clone())
        .collect();
    let vector = g.sharp(&covector)?;
    Ok(LorentzForce { covector, vector })
}

/// Component matrix `F_{μν}` of a constant 2-form.
pub fn two_form_matrix(form: &PolyForm) -> Option<Matrix<Rational>> {
    if form.degree() != 2 {
        return None;
    }
    let n = form.ambient_dim();
    let mut m = Matrix::zeros(n, n);
    for (idx, c) in form.constant_components()? {
        m[(idx[0], idx[1])] = c.clone();
        m[(idx[1], idx[0])] = -c;
    }
    Some(m)
}
