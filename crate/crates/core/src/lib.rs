//! Sparsification of decomposable submodular functions.
//!
//! A function `F = f_1 + .. + f_N` over a ground set of `n` elements is
//! replaced by `F' = Σ w_i f_i` with few nonzero weights such that
//! `(1−ε)F'(S) ≤ F(S) ≤ (1+ε)F'(S)` holds for every `S` (or every independent
//! set of a matroid) with probability at least `1−δ`. Component `i` is kept
//! with probability `min(1, κ·p_i)` where `p_i = max_A f_i(A)/F(A)`.
//!
//! Subsets are bitmasks over at most 64 elements; see [`Subset`].

pub mod error;
pub mod families;
pub mod importance;
pub mod lovasz;
pub mod matroid;
pub mod model;
pub mod optimize;
pub mod sparsify;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    check_monotone, check_submodular, marginal_gain, Component, DecomposableFunction, GroundSet, Penalty,
    PiMode, SetFunction, SparsifierWeights, WeightedSum,
};
pub use subset::Subset;
