// SPDX-License-Identifier: MIT OR Apache-2.0
//! Catalog, batch runner and reports for exact purely coclosed G₂
//! certificate checking on 7-dimensional nilpotent Lie algebras.

#![deny(missing_docs)]

pub mod catalog;
pub mod report;
pub mod runner;
