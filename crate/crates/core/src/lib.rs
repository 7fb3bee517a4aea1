//! Deciding when two bi-functions on a finite set are rescalings of each other.
//!
//! A bi-function is a labeled square matrix `L`. The pair `(f, g)` rescales
//! `L` to `M` when `M(x, y) = f(x) g(y) L(x, y)`. This crate decides the
//! general, symmetric, hermitean, reciprocal and `+-1` variants with
//! constructive certificates, compares principal minors, and recovers
//! isometries between vector families from equal face volumes.

pub mod bifunction;
pub mod det;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod minors;
pub mod rescaling;
pub mod scalar;

pub use bifunction::{BiFunction, Diagnosis, Flags};
pub use error::{Error, Result};
pub use graph::{bipartite_components, graph_view, BipartiteComponents, GraphView};
pub use minors::{
    compare_minors, corner_tridiag_det, differing_minors, multiplicativity_test, principal_minor,
    MinorComparison, MinorDifference, Multiplicativity,
};
pub use scalar::{GaussRational, Scalar, Tolerance};
pub use rescaling::{
    decide_pm1_via_minors, decide_rescaling, triple_condition, Anchor, Counterexample, CycleNode,
    DiagonalReason, GroupTag, RescalingCertificate, RescalingKind, TripleResult, TripleVariant, Verdict,
};
pub use generators::{generate, FamilySpec, Generated};
pub use geometry::{
    distance_to_span, factor_psd, gram, recover_isometry, scaled_isometry_test, volume, FaceCounterexample,
    IsometryVerdict, IsometryWitness, ScaledVerdict, VectorSet,
};
