//! Shannon entropy treated as a homogeneous quantity additive over
//! partitionings of positive numbers.
//!
//! The crate provides:
//!
//! - [`entropy`]: H on probability vectors, u(x) = x·log₂(1/x), and the
//!   homogeneous extension Ĥ on exact-rational weight vectors;
//! - [`tree`]: weighted partition trees, entropy decomposition along
//!   nested partitionings, and residuals of the two-stage additivity
//!   identity;
//! - [`potential`]: the representation Ĥ(w) = Σ g(wᵢ) − g(Σ wᵢ),
//!   recovery of g from an Ĥ oracle, and the functional-equation
//!   residuals a homogeneous solution's potential must satisfy;
//! - [`additive`]: completely additive arithmetic functions with
//!   vanishing-difference diagnostics;
//! - [`mercer`]: the sequence transform aₙ ↦ aₙ + sₙ/n with convergence
//!   probes;
//! - [`axioms`]: a five-condition test matrix that singles Shannon
//!   entropy out of a family of lookalikes;
//! - [`sample`]: seeded, platform-stable random inputs for all of the
//!   above.
//!
//! Heavy batch evaluations are data-parallel via rayon when the default
//! `parallel` feature is on; disabling it falls back to sequential loops
//! with bit-identical results (see [`exec`]).

pub mod additive;
pub mod axioms;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod mercer;
pub mod potential;
pub mod rational;
pub mod sample;
pub mod tree;

pub use additive::{
    bridge_identity_residual, delta_sequence, erdos_diagnostic, eval_additive, AdditiveFunction,
    ErdosDiagnostic,
};
pub use axioms::{
    conclusion_check, replay_witness, run_suite, AxiomRecord, AxiomReport, CandidateEntropy,
    SampleConfig, Witness, DEFAULT_SEED,
};
pub use entropy::{extend, hat_entropy, shannon_entropy, u, EntropyValue, ProbVector, WeightVector};
pub use error::{Error, Result};
pub use mercer::{
    delta_mercer, delta_mercer_scan, mercer_transform, probe, ConvergenceProbe, RealSequence,
};
pub use potential::{
    bilinearity_residuals, defect_of, hat_from_potential, homogeneity_residual, Potential,
    rational_rule_residual, recover_potential, slope_function, Defect,
};
pub use tree::{
    cocycle_residual, flatten, grouping_residual, node_mass, tree_entropy, tree_from_json,
    Grouping, PartitionTree,
};
