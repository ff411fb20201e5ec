//! Exact zero divisors and totally reflexive modules over short graded
//! artinian algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`] and [`linalg`] — exact scalars and dense linear algebra;
//! * [`parser`] — the text formats for algebras, elements and matrices;
//! * [`algebra`] — graded algebras given by homogeneous relations;
//! * [`ezd`] — detection and construction of exact zero divisors;
//! * [`module`] — finitely presented modules: syzygies, Hom/Ext, duals,
//!   isomorphism and indecomposability tests;
//! * [`family`] — the bidiagonal families of totally reflexive modules;
//! * [`generic`] — random quadratic algebras and density estimates.

pub mod algebra;
pub mod error;
pub mod ezd;
pub mod family;
pub mod field;
pub mod generic;
pub mod linalg;
pub mod module;
pub mod parser;

pub use algebra::{Element, GradedAlgebra, IdealView};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec};
