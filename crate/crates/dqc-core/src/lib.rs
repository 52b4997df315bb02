//! Partitioning quantum circuits across two nodes and minimizing the qubit
//! teleportations needed to run the cross-partition CNOT gates.
//!
//! Pipeline: parse or generate a circuit, decompose it to CNOT plus
//! single-qubit gates, split the qubits with Kernighan-Lin, then search the
//! per-global-gate execution-side configurations for the cheapest schedule.
//! Everything is deterministic for a given seed, and all values are immutable
//! once built, so they can be shared freely across threads.

pub mod circuit;
pub mod cost;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod native;
pub mod optimize;
pub mod partition;
pub mod qft;
pub mod real;

pub use circuit::{gate_counts, Circuit, Gate, GateCounts, GateKind, QubitId, SingleQubitGate};
pub use cost::{
    brute_force_min_cost, brute_force_min_cost_capped, commutes, evaluate_cost,
    evaluate_cost_linear, required_sites, schedule_is_valid, Configuration, CostEvaluator,
    CostReport, Direction, EvalOptions, EventPoint, Site, TeleportEvent, DEFAULT_ORACLE_CAP,
};
pub use decompose::{append_controlled_rk, decompose_to_basic};
pub use error::{Error, Result};
pub use graph::{build_interaction_graph, cut_weight, InteractionGraph};
pub use optimize::{
    elitist_replace, exhaustive_search, exhaustive_search_capped, ga_optimize, mutate,
    random_search, roulette_select, two_point_crossover, Chromosome, GaParams, OptimizerResult,
    DEFAULT_EXHAUSTIVE_CAP,
};
pub use partition::{
    classify_gates, kernighan_lin, GateClassification, PartitionAssignment, Side,
};
pub use qft::generate_qft;
pub use real::{parse_real, serialize_real};

pub use native::{parse_native, serialize_native};
