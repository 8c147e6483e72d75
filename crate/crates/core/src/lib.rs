//! Analysis toolkit for the 4-user wrap-around interference network with
//! pairwise clustered decoding.
//!
//! The crate has three legs:
//!
//! - **Achievability**: exact-rational channel models, linear beamforming
//!   schemes, and rank-based decodability checks ([`network`], [`alignment`],
//!   [`matrix`]). Every rank and determinant is computed over the rationals,
//!   so alignment claims are decided without tolerances.
//! - **Converse**: a Shannon-type inequality prover over the polymatroid cone
//!   with exact rational LP certificates, a representable-rank sampler for
//!   differential testing, and a symbolic checker for the sum-rate converse
//!   arithmetic ([`entropy`]).
//! - **Finite SNR**: a floating-point log-det sum-rate simulator that recovers
//!   the degrees of freedom as the slope of rate versus log-SNR ([`simulate`]).

pub mod alignment;
pub mod entropy;
pub mod matrix;
pub mod network;
pub mod rational;
pub mod simulate;

pub use alignment::{
    alignment_report, decoder_view, example_scheme, power_assignment_channel,
    search_power_assignment, AlignmentError, AlignmentReport, DecoderCheck, DecoderView,
    LinearScheme, PowerAssignment,
};
pub use entropy::{
    clustered_outer_bound, converse_system, elemental_system, parse_expression, parse_file, prove,
    sample_representable, substitution_multipliers, verify_certificate, verify_dof_certificate,
    CertificateOutcome, EntropyExpression, GroundSet, InequalityFile, Mode, ProofOutcome,
    ProofStatus, RankVector,
};
pub use matrix::{exact_rank, RatMatrix};
pub use network::{
    build_example_channel, build_topology, received_signal, sample_generic_channel,
    ChannelRealization, Connectivity, NetworkError, NetworkTopology,
};
pub use rational::{frac, parse_rat, rat, Rat};
pub use simulate::{estimate_dof, sum_rate, sweep, write_csv, RateReport, RateRow, SimError};
