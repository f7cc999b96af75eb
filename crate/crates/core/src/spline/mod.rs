//! The continuous side: the space `D(X)`, the local pieces `p_b`, the
//! multivariate spline `T_X`, the box spline `B_X` and the Todd operator.
//!
//! All polynomials here live in the dual bank: their variables are the
//! coordinates of points of `V = R^s`.

mod dx;
mod eval;
mod pieces;

pub use dx::{cocircuit_operators, dx_space, in_dx, monomials, DXSpace};
pub use eval::{box_eval, f_apply, partition_unimodular, t_eval, t_piece, todd_apply, Spline};
pub use pieces::{
    dual_system_check, local_pieces_reduction, local_pieces_residue, local_pieces_residue_at, LocalPieces,
};
