//! Exact Clifford-valued polynomials in several vector variables: Dirac operators, the
//! Fischer inner product, monogenic and harmonic spaces, and the monogenic Fischer
//! decomposition in the stable range `m ≥ 2k`.

pub mod clifford;
pub mod decomp;
pub mod error;
pub mod exactla;
pub mod operators;
pub mod poly;
pub mod repdim;
pub mod scalar;
pub mod spaces;

pub use clifford::{
    blade_mul, build_spinor_frame, BladeIndex, BladeTerm, Chirality, CliffordElement, SpinorFrame,
};
pub use decomp::{
    enumerate_summands, fischer_decompose, harmonic_refinement, verify_decomposition,
    DecompositionResult, JOrder, Pipeline, SummandIndex,
};
pub use error::{FischerError, Result};
pub use exactla::{
    CoordinateChart, DirectSumReport, ExactMatrix, SparseVec, SubspaceBasis, ValueKind,
};
pub use operators::{
    apply_generator, Bracket, GeneratorTag, OperatorExpr, RelationConfig, RelationReport,
};
pub use poly::{fischer_inner, ClPoly, GradedSlice, MultiExponent};
pub use scalar::{ExactScalar, Rational};
pub use spaces::Workspace;
