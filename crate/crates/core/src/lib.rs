//! Exact symbol calculus for the noncommutative residue of `(fDh)²` on
//! six-dimensional spin manifolds.

pub mod scalars;

/// Dimension of the manifold.
pub const DIM: usize = 6;
pub mod clifford;
pub mod symbols;
pub mod calculus;
pub mod specialize;
pub mod ledger;
pub mod interior;
pub mod boundary;
pub mod report;
