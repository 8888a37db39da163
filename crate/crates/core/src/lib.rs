// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact verification kernels for purely coclosed G₂-structures on
//! nilpotent Lie algebras.
//!
//! Every computation runs over the rationals or over a single quadratic
//! extension ℚ(√D). Nothing in this crate touches floating point.
//!
//! The layers build on each other:
//!
//! * [`scalar`], [`quad`], [`mpoly`] and [`mat`] provide exact arithmetic
//!   and linear algebra.
//! * [`exterior`] implements forms on a fixed coframe `e¹…eⁿ`.
//! * [`lie_ce`] presents nilpotent Lie algebras through their
//!   Chevalley–Eilenberg differential.
//! * [`su3`] and [`g2`] hold the linear algebra of SU(3)- and G₂-forms and
//!   the purely coclosed certificate checker.
//! * [`obstructions`] checks and searches non-existence certificates.
//! * [`parse`] reads the textual notation used by the certificate tables.
//!
//! ```
//! use g2cert_core::{lie_ce::NilpotentLieAlgebra, parse::parse_form};
//!
//! let g = NilpotentLieAlgebra::from_structure("37B", "(0^4,12,23,34)").unwrap();
//! let e5 = parse_form("e5", 7).unwrap();
//! assert_eq!(g.differential(&e5), parse_form("e12", 7).unwrap());
//! ```

#![no_std]
#![deny(missing_docs)]

extern crate alloc;

pub mod exterior;
pub mod g2;
pub mod lie_ce;
pub mod mat;
pub mod mpoly;
pub mod obstructions;
pub mod parse;
pub mod quad;
pub mod scalar;
pub mod su3;

pub use exterior::Form;
pub use mat::Mat;
pub use mpoly::MPoly;
pub use quad::QuadExt;
pub use scalar::{Field, Rat, Ring};
