//! Exact-arithmetic cochain models for configuration spaces of points in
//! closed and punctured even-dimensional manifolds.
//!
//! The library takes a user-described coefficient algebra — a finite
//! graded-commutative algebra over the rationals with a perfect orientation
//! pairing — and builds finite bigraded cochain complexes whose cohomology
//! is the rational cohomology of the space of `n` distinct labeled points.
//! Everything is computed exactly over arbitrary-precision rationals.
//!
//! * [`algebra`]: coefficient algebras, validation, dual bases, diagonal
//!   classes, punctured and connected-sum and product constructions.
//! * [`tensor`]: signed tensor powers of a coefficient algebra.
//! * [`quotient`]: the fat-diagonal quotient with a preferred section.
//! * [`rewrite`]: the normal-form engine for generator words.
//! * [`model`]: the three model families, their differentials, products,
//!   comparison maps, and the column filtration.
//! * [`cohomology`]: bigraded complexes, ranks, tables, chain maps, and
//!   induced maps on cohomology.
//! * [`structure`]: symmetric-group action, simplicial operators, the
//!   little-disks coaction, and connected-sum splitting.
//! * [`catalog`]: ready-made coefficient algebras.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod quotient;
pub mod rewrite;
pub mod scalar;
pub mod structure;
pub mod tensor;

pub use algebra::{
    connected_sum, kunneth, puncture, validate_algebra, AlgebraError, AlgebraSpec, PdAlgebra,
    PuncturedAlgebra,
};
pub use cohomology::{betti_dims, induced_map, BettiTable, Bicomplex, ChainMap};
pub use model::{predicted_dimension, Model, ModelElement, ModelKind};
pub use scalar::Scalar;
