//! Shannon-type inequality prover.
//!
//! An inequality `target >= 0` is Shannon-provable under linear constraints
//! exactly when the target vector is a nonnegative combination of elemental
//! inequalities plus an arbitrary combination of the constraints. That is a
//! rational feasibility question, and the LP solution doubles as a dual
//! certificate which is re-verified coordinate-wise before being returned.

use super::elemental::{elemental_system, Elemental, Mode};
use super::expr::EntropyExpression;
use super::simplex::solve_feasibility;
use crate::rational::Rat;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofStatus {
    Provable,
    NotProvable,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProveError {
    #[error("target and constraints use different ground sets")]
    GroundMismatch,
}

/// Outcome with the dual certificate: nonnegative multipliers over elemental
/// inequalities and sign-free multipliers over constraint indices. Only
/// nonzero multipliers are listed.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofOutcome {
    pub status: ProofStatus,
    pub mode: Mode,
    pub lambda: Vec<(String, Rat)>,
    pub mu: Vec<(usize, Rat)>,
}

impl ProofOutcome {
    pub fn provable(&self) -> bool {
        self.status == ProofStatus::Provable
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": match self.status {
                ProofStatus::Provable => "provable",
                ProofStatus::NotProvable => "not-provable",
            },
            "mode": self.mode.as_str(),
            "lambda": self.lambda.iter()
                .map(|(id, v)| json!([id, v.to_string()]))
                .collect::<Vec<_>>(),
            "mu": self.mu.iter()
                .map(|(idx, v)| json!([idx.to_string(), v.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Decides `target >= 0` given `constraints = 0`. Exact throughout; a
/// provable outcome always carries a certificate that reconstructs the
/// target.
pub fn prove(
    target: &EntropyExpression,
    constraints: &[EntropyExpression],
    mode: Mode,
) -> Result<ProofOutcome, ProveError> {
    if constraints.iter().any(|c| c.ground() != target.ground()) {
        return Err(ProveError::GroundMismatch);
    }
    let system = elemental_system(target.ground(), mode);
    let mut columns: Vec<Vec<Rat>> = system.iter().map(|e| e.expr.to_vector()).collect();
    columns.extend(constraints.iter().map(EntropyExpression::to_vector));
    let rhs = target.to_vector();
    let outcome = match solve_feasibility(&columns, &rhs, system.len()) {
        Some(x) => {
            let lambda = system
                .iter()
                .zip(&x)
                .filter(|(_, v)| !v.is_zero())
                .map(|(e, v)| (e.id.clone(), v.clone()))
                .collect();
            let mu = x[system.len()..]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect();
            ProofOutcome {
                status: ProofStatus::Provable,
                mode,
                lambda,
                mu,
            }
        }
        None => ProofOutcome {
            status: ProofStatus::NotProvable,
            mode,
            lambda: Vec::new(),
            mu: Vec::new(),
        },
    };
    if outcome.provable() {
        assert!(
            reconstructs(target, constraints, &outcome),
            "LP returned a certificate that does not reconstruct the target"
        );
    }
    Ok(outcome)
}

/// Checks the certificate exactly: sum of lambda-weighted elementals plus
/// mu-weighted constraints must equal the target coordinate-wise.
pub fn reconstructs(
    target: &EntropyExpression,
    constraints: &[EntropyExpression],
    outcome: &ProofOutcome,
) -> bool {
    let system = elemental_system(target.ground(), outcome.mode);
    let find = |id: &str| -> Option<&Elemental> { system.iter().find(|e| e.id == id) };
    let mut sum = EntropyExpression::zero(target.ground());
    for (id, v) in &outcome.lambda {
        if v < &Rat::zero() {
            return false;
        }
        let Some(e) = find(id) else { return false };
        if sum.add_scaled(&e.expr, v).is_err() {
            return false;
        }
    }
    for (idx, v) in &outcome.mu {
        let Some(c) = constraints.get(*idx) else {
            return false;
        };
        if sum.add_scaled(c, v).is_err() {
            return false;
        }
    }
    &sum == target
}
