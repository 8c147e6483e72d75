//! Symbolic certificate arithmetic for the 12/5 converse.
//!
//! The converse works over a 13-symbol space: four rates, the log-SNR scale
//! L, and eight conditional-entropy block terms. Two inequality families are
//! taken as axioms (their proofs need channel structure, not just
//! polymatroid steps): four rate bounds, each capping the rate sum by three
//! block terms, and eight entropy bounds capping each block term by
//! 2L minus two rates. Substituting the entropy bounds into the rate bounds
//! once per occurrence cancels every block term exactly and leaves
//! 10(R1+R2+R3+R4) <= 24 L, i.e. at most 12/5 sum DoF. The checker verifies
//! that cancellation coordinate by coordinate over the rationals.

use crate::rational::{frac, rat, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

/// Coordinate order of the symbol space.
pub const SYMBOLS: [&str; 13] = [
    "R1",
    "R2",
    "R3",
    "R4",
    "L",
    "h(Y1|W1)",
    "h(Y2|W1)",
    "h(Y2|W2)",
    "h(Y3|W2)",
    "h(Y3|W3)",
    "h(Y4|W3)",
    "h(Y4|W4)",
    "h(Y1|W4)",
];

const L: usize = 4;
const H0: usize = 5;

fn wrap(k: usize) -> usize {
    (k + 3) % 4 + 1 // maps 0 -> 4, 5 -> 1
}

/// Index of h(Y_m|W_m).
fn diag(m: usize) -> usize {
    H0 + 2 * (m - 1)
}

/// Index of h(Y_{m+1}|W_m).
fn off(m: usize) -> usize {
    H0 + 2 * (m - 1) + 1
}

/// One axiom, stored as slack = rhs - lhs of `lhs <= rhs`, so a valid
/// inequality has nonnegative slack at the true values.
#[derive(Clone, Debug, PartialEq)]
pub struct ConverseInequality {
    pub id: String,
    pub display: String,
    pub slack: Vec<Rat>,
}

impl ConverseInequality {
    fn new(id: String, display: String, slack: Vec<Rat>) -> Self {
        assert_eq!(slack.len(), SYMBOLS.len());
        Self { id, display, slack }
    }
}

/// The built-in 12-inequality system: rate bounds first, entropy bounds in
/// block-term order.
pub fn converse_system() -> Vec<ConverseInequality> {
    let mut out = Vec::with_capacity(12);
    for k in 1..=4 {
        let mut slack = vec![Rat::zero(); SYMBOLS.len()];
        for s in slack.iter_mut().take(4) {
            *s = rat(-1);
        }
        let terms = [diag(k), off(wrap(k + 3)), diag(wrap(k + 1))];
        for &t in &terms {
            slack[t] += Rat::one();
        }
        let rhs: Vec<&str> = terms.iter().map(|&t| SYMBOLS[t]).collect();
        out.push(ConverseInequality::new(
            format!("rate-bound-{k}"),
            format!("R1+R2+R3+R4 <= {}", rhs.join("+")),
            slack,
        ));
    }
    for m in 1..=4 {
        for (h, a, b) in [(diag(m), m, wrap(m + 2)), (off(m), m, wrap(m + 3))] {
            let mut slack = vec![Rat::zero(); SYMBOLS.len()];
            slack[L] = rat(2);
            slack[a - 1] -= Rat::one();
            slack[b - 1] -= Rat::one();
            slack[h] -= Rat::one();
            out.push(ConverseInequality::new(
                format!("entropy-bound-{}", SYMBOLS[h]),
                format!("{} <= 2*L - R{} - R{}", SYMBOLS[h], a, b),
                slack,
            ));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCount { expected: usize, got: usize },
    #[error("multiplier {0} is negative")]
    NegativeMultiplier(usize),
    #[error("weighted sum is not a rate bound: {0}")]
    NotRateBound(String),
    #[error("cluster size {size} out of range for {users} users")]
    ClusterRange { size: usize, users: usize },
    #[error("need at least one user")]
    NoUsers,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateOutcome {
    /// rate * (R1+R2+R3+R4) <= log_snr * L, hence sum DoF <= log_snr/rate.
    Verified {
        rate: Rat,
        log_snr: Rat,
        dof_bound: Rat,
    },
    /// Some block terms did not cancel; their residual coefficients.
    Incomplete { residual: Vec<(String, Rat)> },
}

/// Forms the multiplier-weighted sum of the system and checks the block
/// terms cancel exactly; if so, reads off the rate bound.
pub fn verify_certificate(
    system: &[ConverseInequality],
    multipliers: &[Rat],
) -> Result<CertificateOutcome, CertificateError> {
    if system.len() != multipliers.len() {
        return Err(CertificateError::MultiplierCount {
            expected: system.len(),
            got: multipliers.len(),
        });
    }
    if let Some(i) = multipliers.iter().position(|m| m < &Rat::zero()) {
        return Err(CertificateError::NegativeMultiplier(i));
    }
    let mut sum = vec![Rat::zero(); SYMBOLS.len()];
    for (ineq, m) in system.iter().zip(multipliers) {
        for (s, v) in sum.iter_mut().zip(&ineq.slack) {
            *s += v * m;
        }
    }
    let residual: Vec<(String, Rat)> = (H0..SYMBOLS.len())
        .filter(|&i| !sum[i].is_zero())
        .map(|i| (SYMBOLS[i].to_string(), sum[i].clone()))
        .collect();
    if !residual.is_empty() {
        return Ok(CertificateOutcome::Incomplete { residual });
    }
    // weighted sum >= 0 now reads: log_snr * L - rate * (R1+..+R4) >= 0
    let rate = -sum[0].clone();
    if sum[1..4].iter().any(|c| -c.clone() != rate) {
        return Err(CertificateError::NotRateBound(
            "rate coefficients are not uniform".into(),
        ));
    }
    let log_snr = sum[L].clone();
    if rate <= Rat::zero() || log_snr <= Rat::zero() {
        return Err(CertificateError::NotRateBound(format!(
            "needs positive rate and L coefficients, got {rate} and {log_snr}"
        )));
    }
    let dof_bound = &log_snr / &rate;
    Ok(CertificateOutcome::Verified {
        rate,
        log_snr,
        dof_bound,
    })
}

/// Multipliers realizing the substitution procedure: weight 1 on every
/// inequality that introduces block terms, then, scanning the rest in
/// order, exactly the weight needed to cancel the single block term each
/// one bounds.
pub fn substitution_multipliers(system: &[ConverseInequality]) -> Vec<Rat> {
    let is_bound_of = |ineq: &ConverseInequality| -> Option<usize> {
        let negs: Vec<usize> = (H0..SYMBOLS.len())
            .filter(|&i| ineq.slack[i] < Rat::zero())
            .collect();
        match negs[..] {
            [h] => Some(h),
            _ => None,
        }
    };
    let mut acc = vec![Rat::zero(); SYMBOLS.len()];
    let mut mult = vec![Rat::zero(); system.len()];
    for (i, ineq) in system.iter().enumerate() {
        if is_bound_of(ineq).is_none() {
            mult[i] = Rat::one();
            for (a, v) in acc.iter_mut().zip(&ineq.slack) {
                *a += v;
            }
        }
    }
    for (i, ineq) in system.iter().enumerate() {
        if let Some(h) = is_bound_of(ineq) {
            if acc[h] > Rat::zero() {
                let w = &acc[h] / &(-ineq.slack[h].clone());
                for (a, v) in acc.iter_mut().zip(&ineq.slack) {
                    *a += &w * v;
                }
                mult[i] = w;
            }
        }
    }
    mult
}

/// Runs the built-in certificate end to end.
pub fn verify_dof_certificate() -> CertificateOutcome {
    let system = converse_system();
    let multipliers = substitution_multipliers(&system);
    verify_certificate(&system, &multipliers).expect("built-in system is well-formed")
}

/// Per-user DoF cap 1/2 + (M-1)/K for K users decoding in clusters of M.
pub fn clustered_outer_bound(users: usize, cluster_size: usize) -> Result<Rat, CertificateError> {
    if users == 0 {
        return Err(CertificateError::NoUsers);
    }
    if cluster_size < 1 || cluster_size > users {
        return Err(CertificateError::ClusterRange {
            size: cluster_size,
            users,
        });
    }
    Ok(frac(1, 2) + frac(cluster_size as i64 - 1, users as i64))
}
