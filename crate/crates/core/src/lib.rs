//! Exact computation of n-state graph polynomials and their reconstruction,
//! Tutte polynomials of graphic and binary matroids, binary code weight
//! enumerators, and theta series of Construction A lattices.

pub mod codes;
pub mod error;
pub mod f2;
pub mod graphs;
pub mod lattices;
pub mod matroids;
pub mod pipeline;
pub mod poly;
pub mod primes;
pub mod statepoly;

pub use error::{Error, Result};
