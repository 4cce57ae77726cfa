//! Exact computations around relative discrepancy of k-uniform hypergraphs.
//!
//! Everything here is exact: values are big rationals, ranks are integers,
//! and every comparison of weights is phrased in squares so that no square
//! root ever has to be taken.

pub mod combinat;
pub mod discrepancy;
pub mod error;
pub mod fourier;
pub mod gk;
pub mod hypergraph;
pub mod inclusion;
pub mod io;
pub mod linalg;
pub mod patterns;
pub mod wvector;

pub use combinat::{KSubset, PartialMatching, Rational};
pub use discrepancy::{disc_exact, disc_single, overlap, DiscResult, SingleDisc};
pub use error::{Error, Result};
pub use fourier::{
    decompose, norm_sq, top_sequences, truncate, truncation_report, variance, Decomposition,
    SliceBasis, TopSequence,
};
pub use gk::{g_of_k, gamma_m, only_trivial, prime_upper, system_residual, AlphaVector, G_of_k};
pub use hypergraph::{Hypergraph, PatternSpec, SliceFunction};
pub use inclusion::{criterion, inclusion_matrix, rank_exact, solve_h, Criterion, InclusionMatrix};
pub use patterns::{claim46_residuals, profile_symmetry, scan_bipartite, BipartitePattern};
pub use wvector::{w1, w2_sq, w_profile, WProfile};
