//! Exact-arithmetic toric kernel and classification pipeline for smooth
//! weak Fano toric varieties of Picard rank 2 and 3.
//!
//! Everything runs over arbitrary-precision integers and rationals. The
//! crate provides the fan kernel (primitive collections and relations),
//! the three constructor families and their bounded weak-Fano enumerators,
//! toric isomorphism testing, Chow-ring intersection numbers, divisor
//! polytopes, graded sheaf cohomology with the converse Bott-vanishing
//! checker, birational moves (star subdivisions, blowdowns, flops), and
//! the end-to-end classification pipeline with table export.

pub mod birational;
pub mod chow;
pub mod classify;
pub mod cohomology;
pub mod constructors;
pub mod divisor;
pub mod error;
pub mod export;
pub mod fan;
pub mod iso;
pub mod json;
pub mod lattice;
pub mod polytope;

pub use error::{Error, Result};
