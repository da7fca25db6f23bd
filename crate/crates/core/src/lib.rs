//! Exact simulation of two-photon polarization states in linear-optical
//! circuits, and the machinery to score how well a circuit plus detectors
//! discriminates the four Bell states.
//!
//! * [`fock`]: occupation-number states and the Bell states.
//! * [`optics`]: beam splitters, rotators, phase shifters and circuits.
//! * [`evolution`]: applying mode unitaries to states.
//! * [`detection`]: Born-rule outcome distributions for detector models.
//! * [`discrimination`]: Bayes and unambiguous success, confusability.
//! * [`search`]: exhaustive circuit search and the splitter cascade.
//! * [`claims`]: the fixed suite of identities checked by `belldisc verify`.

pub mod claims;
pub mod detection;
pub mod discrimination;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod optics;
pub mod search;

pub use detection::{
    classify_pattern, outcome_distribution, Channel, DetectionEvent, DetectorConfig,
    OutcomeDistribution, Pattern,
};
pub use discrimination::{
    bayes_success, conditioned_distributions, confusability, discriminate, unambiguous_success,
    Conditioned, DiscriminationReport, Strategy,
};
pub use error::{Error, Result};
pub use evolution::{apply_unitary, evolve_circuit};
pub use fock::{
    bell_state, inner_product, BellKind, ModeLabel, OccupationVector, PhotonicState, Polarization,
};
pub use optics::{
    compose_circuit, pnp_bs_matrix, pol_rotator_matrix, phase_shifter_matrix, pp_bs_matrix,
    CircuitSpec, ElementKind, ElementSpec, ModeUnitary, PnpSigns,
};
pub use search::{
    cascade_experiment, enumerate_circuits, search_max_success, CascadeStage, SearchResult,
    SearchSpace,
};
