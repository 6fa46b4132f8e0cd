//! Exact computations on the boundary of the free group `F_d`.
//!
//! * [`words`]: reduced words, Gromov products, cyclic and primitive decompositions.
//! * [`boundary`]: eventually periodic boundary points and the translation action.
//! * [`clopen`]: locally constant integer functions given on level-`n` cylinders.
//! * [`quotient`]: the glued relations `R_W`, their classes, and constructive
//!   density and separation witnesses.
//! * [`ktheory`]: exact integer linear algebra and the K-groups of the crossed
//!   products `C(∂F_d/R_W) ⋊ F_d`.
//! * [`coe`]: the orbit-count invariant separating the systems `∂F_d/R_F`.

pub mod boundary;
pub mod clopen;
pub mod coe;
pub mod error;
pub mod int;
pub mod ktheory;
pub mod quotient;
pub mod words;

pub use clopen::LevelFunction;
pub use quotient::RelationSpec;
pub use boundary::{BoundaryPoint, Sign};

pub use error::{Error, Result};
pub use int::Int;

pub use words::{Letter, ReducedWord};
