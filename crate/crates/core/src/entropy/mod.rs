//! Entropy-inequality machinery: expressions over a ground set, a parser
//! for a small inequality language, Shannon-type provability via exact
//! linear programming, a representable sampler for falsification, and the
//! symbolic converse certificate.

pub mod certificate;
pub mod elemental;
pub mod expr;
pub mod parse;
pub mod prover;
pub mod sampler;
pub mod simplex;

pub use certificate::{
    clustered_outer_bound, converse_system, substitution_multipliers, verify_certificate,
    verify_dof_certificate, CertificateError, CertificateOutcome, ConverseInequality, SYMBOLS,
};
pub use elemental::{elemental_system, Elemental, Mode};
pub use expr::{EntropyExpression, ExprError, GroundSet, MAX_VARIABLES};
pub use parse::{
    parse_expression, parse_expression_with, parse_file, parse_statement, InequalityFile,
    ParseError, Sense, Statement,
};
pub use prover::{prove, reconstructs, ProofOutcome, ProofStatus, ProveError};
pub use sampler::{sample_representable, RankVector, SampleError};
