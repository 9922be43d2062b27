//! Exact-arithmetic calculus of filtered differential forms on finite
//! symplectic cochain models.
//!
//! The crate computes, over the rationals with no rounding anywhere:
//!
//! * the sl(2) operator calculus (Lefschetz operator, Poisson bivector
//!   contraction, Lefschetz decomposition, filtration projections and the
//!   reflection operators) on a symplectic vector space;
//! * finite cochain models of closed symplectic manifolds (invariant forms
//!   on nilmanifolds and tori) with de Rham cohomology;
//! * the two-row elliptic complex of p-filtered forms, its cohomologies and
//!   the primitive cohomologies read off from them;
//! * long exact sequences resolving Lefschetz maps, exact triangles of
//!   filtered cohomologies and the associated dimension formulas;
//! * a graded product making the filtered complex an A-infinity algebra,
//!   with cohomology ring tables;
//! * pointwise symbol-exactness certificates for the filtered complex;
//! * the mapping-torus calculus: monodromy invariants, the formal
//!   gamma-tilde algebra with polynomial coefficients, fiber integration and
//!   the product-image invariant.
//!
//! Invariant-form complexes are used as stand-ins for the closed manifolds
//! they model; for the bundled nilmanifolds this computes the full de Rham
//! cohomology (a modeling assumption stated here once and relied on
//! throughout).

pub mod ainfty;
pub mod error;
pub mod exterior;
pub mod filtered;
pub mod linalg;
pub mod model;
pub mod report;
pub mod resolution;
pub mod sl2;
pub mod suites;
pub mod symbol;
pub mod torus;

pub use error::{Error, Result};
pub use exterior::{monomial_basis, random_form, Form, MultiIndex};
pub use linalg::{Mat, Q};
pub use model::{CohomologyBasis, Model, ModelSpec};
pub use sl2::{LefschetzDecomposition, SymplecticStructure};
