//! Elemental inequality systems over a ground set.
//!
//! Two families generate all Shannon-type inequalities: monotonicity
//! H(i | rest) >= 0 and conditional mutual information I(i;j|K) >= 0. For
//! differential entropies monotonicity fails while conditional mutual
//! information stays nonnegative, so the generating system comes in two
//! flavors and callers pick the one matching their entropy kind.

use super::expr::{EntropyExpression, GroundSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Monotonicity plus conditional mutual information.
    Discrete,
    /// Conditional mutual information only; safe for differential entropy.
    MiOnly,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Discrete => "discrete",
            Mode::MiOnly => "mi-only",
        }
    }
}

/// One elemental inequality, `expr >= 0`, with a canonical text id.
#[derive(Clone, Debug, PartialEq)]
pub struct Elemental {
    pub id: String,
    pub expr: EntropyExpression,
}

/// Enumerates the elemental system in a fixed order: monotonicity by
/// variable index (discrete mode only), then I(i;j|K) for i < j with the
/// conditioning mask ascending. Counts: n + C(n,2) * 2^(n-2) in discrete
/// mode for n >= 2.
pub fn elemental_system(ground: &GroundSet, mode: Mode) -> Vec<Elemental> {
    let n = ground.len();
    let names = ground.names();
    let full = ground.full_mask();
    let mut out = Vec::new();
    if mode == Mode::Discrete {
        for i in 0..n {
            let var = [names[i].as_str()];
            let rest: Vec<&str> = (0..n)
                .filter(|&j| j != i)
                .map(|j| names[j].as_str())
                .collect();
            let id = if rest.is_empty() {
                format!("H({})", var[0])
            } else {
                format!("H({}|{})", var[0], rest.join(","))
            };
            let expr = EntropyExpression::conditional(ground, &var, &rest)
                .expect("names come from the ground set");
            out.push(Elemental { id, expr });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let rest = full & !(1 << i) & !(1 << j);
            for k in 0..=full {
                if k & !rest != 0 {
                    continue;
                }
                let cond = ground.subset_names(k);
                let id = if cond.is_empty() {
                    format!("I({};{})", names[i], names[j])
                } else {
                    format!("I({};{}|{})", names[i], names[j], cond.join(","))
                };
                let expr = EntropyExpression::mutual(
                    ground,
                    &[names[i].as_str()],
                    &[names[j].as_str()],
                    &cond,
                )
                .expect("names come from the ground set");
                out.push(Elemental { id, expr });
            }
        }
    }
    out
}
