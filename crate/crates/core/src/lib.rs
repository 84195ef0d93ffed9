//! Spacetime subsystem codes for Clifford gadgets.
//!
//! This crate compiles normalized Clifford circuits (preparations at time 0,
//! gate layers, Z measurements at the final tick) into masked subsystem
//! stabilizer codes over one qubit per (circuit qubit, time step), and
//! analyzes fault tolerance of the circuit through that code: fault-path
//! correctability, syndrome decoding, residual-error distributions, failure
//! probabilities, and information-counting bounds.

pub mod bits;
pub mod bound;
pub mod circuit;
pub mod clifford;
pub mod code;
pub mod error;
pub mod fault;
pub mod fixtures;
pub mod gf2;
pub mod pauli;
pub mod report;
pub mod spacetime;

pub use bound::{binary_entropy, budget_bits, info_bound, InfoBound};
pub use circuit::{
    output_stabilizer, parse_circuit, serialize_circuit, Basis, Circuit, OutputStabilizer,
};
pub use clifford::{apply_gate, CliffordGate, Direction, GateKind};
pub use code::{
    in_group, in_normalizer, reduce, subsystem_k, surface_code, DistanceBound, DistanceKind,
    DistanceMethod, GroupBasis, GroupMembership, MaskedSubsystemCode, MembershipMode,
    StabilizerGroup,
};
pub use fault::{
    decode, decode_table, enumerate_locations, failure_probability_exhaustive,
    failure_probability_monte_carlo, for_each_fault_path, location_alphabet, pair_verdict, project,
    residual_distribution, syndrome, syndrome_of_error, verify_fault_set, verify_gadget_chain,
    AcceptableSet, FaultLocation, FaultModel, FaultPath, NoiseConvention, ProjectionEnd,
    SyndromeReport, Verdict, DEFAULT_BUDGET,
};
pub use pauli::{PauliOperator, SinglePauli};
pub use spacetime::{build_spacetime_code, spackle, GaugeSource, MaskCase, SpacetimeCode};
