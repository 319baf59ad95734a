//! Exterior calculus engine.
//!
//! Two form backends share one parity algebra: [`forms_poly`] works exactly on
//! flat coordinate space with polynomial coefficients, [`forms_dec`] works on
//! cochains over simplicial complexes. [`maxwell`] runs electromagnetism as
//! discrete forms on rectilinear grids.

pub mod cohomology;
pub mod complex;
pub mod demos;
pub mod forms_dec;
pub mod forms_poly;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod maxwell;
pub mod meshes;
pub mod metric;
pub mod orient;
pub mod poly;
pub mod scalar;

pub use complex::{boundary, Chain, Parity, SimplicialComplex};
pub use forms_dec::Cochain;
pub use forms_poly::{PolyForm, PolyVectorField};
pub use metric::Metric;
pub use scalar::{Rational, Scalar};
