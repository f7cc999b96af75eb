//! Exact combinatorics, splines and partition functions of integer vector lists.
//!
//! Given a list `X` of integer vectors spanning `Q^s`, this crate computes
//!
//! * the matroid data: bases, minimal cocircuits, no-broken-circuit bases,
//!   the Hilbert series of `D(X)` and the weighted count `δ(X)`;
//! * the spline side: the space `D(X)`, the local pieces `p_b` (by partial
//!   fractions and, independently, by iterated residues), the multivariate
//!   spline `T_X`, the box spline `B_X` and a paving of the zonotope;
//! * the arithmetic side: the points of the toric arrangement and the
//!   vector partition function as an exact quasi-polynomial on each big cell.
//!
//! All arithmetic is exact (arbitrary precision rationals and cyclotomic
//! fields). Every quantity has an independent brute-force counterpart in
//! the test suite.

pub mod chambers;
pub mod error;
pub mod exactcore;
pub mod matroid;
pub mod partition;
pub mod residue;
pub mod spline;
pub mod wonderful;

pub use error::{Error, Result};
pub use exactcore::{CycloNum, Rational};
pub use matroid::{BasisRef, VectorList};
