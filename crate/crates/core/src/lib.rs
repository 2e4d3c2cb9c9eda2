//! Exact decision procedures for metric subspaces of the real line.
//!
//! Everything here is pure computation over exact numbers in a real quadratic
//! field `ℚ(√d)`; the crate needs only `alloc`. File formats, reports and the
//! command-line front end live in the companion `subline` crate.
//!
//! * [`scalar`]: `p + q·√d` arithmetic, exact ordering, literal grammar.
//! * [`metric`]: finite metric spaces and their pointwise predicates
//!   (Triangle Equality, ℓ1-rectangles, spheres, sphericity, apexes).
//! * [`embed`]: certified embeddings of finite sublines into the line.
//! * [`symbolic`]: rank ≤ 2 subgroups of `ℚ(√d)` and infinite sets built from them.
//! * [`involution`]: additive maps and the dense-ray construction.
//! * [`groupsets`]: semiaffine and midconvex sets in `ℤ_n` and `ℤ`-windows.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod embed;
pub mod groupsets;
pub mod involution;
pub mod metric;
pub mod scalar;
pub mod symbolic;

pub use embed::{
    brute_force_embed, canonicalize, decide_embeddable, embed_line, EmbedDecision, EmbedError,
    LineEmbedding,
};
pub use groupsets::{
    analyze_trace_set, classify_semiaffine, enumerate_subgroups, is_midconvex, is_semiaffine,
    CyclicGroupSubset, IntWindowSubset, SemiaffineDecomposition,
};
pub use involution::{build_example1, density_report, straddle_witness, AdditiveMap, Example1Instance};
pub use metric::{DistanceMatrix, FiniteMetricSpace, MetricError, RectangleWitness, SphereResult};
pub use scalar::{
    compare, format_scalar, parse_literal, parse_scalar, QuadScalar, Radicand, Rational,
    ScalarContext, ScalarError,
};
pub use symbolic::{
    check_ray_conditions, reconstruct_subgroup, Lattice, SymbolicError, SymbolicSet, Window,
};
