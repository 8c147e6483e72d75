//! Representable rank vectors: subspace samples over GF(101).
//!
//! Assigning each variable a random block of vectors and reading off
//! rank(span of each subset) produces a polymatroid, and every polymatroid
//! of this form satisfies all Shannon-type inequalities. That makes these
//! samples a falsification oracle for the prover: a provable target can
//! never go negative on them, and any negative evaluation must coincide with
//! a not-provable verdict.
//!
//! Independence constraints are honored structurally: every variable named
//! in a constraint gets a private coordinate zone, so constrained groups sit
//! in direct sum. Unconstrained variables roam the whole ambient space,
//! whose width is resampled per draw to vary the dependence patterns.

use super::elemental::{elemental_system, Mode};
use super::expr::{EntropyExpression, GroundSet};
use crate::rational::{rat, Rat};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const P: u64 = 101;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("constraint is not an independence statement: {0}")]
    Unsupported(String),
    #[error("expected {expected} block dimensions, got {got}")]
    DimCount { expected: usize, got: usize },
    #[error("block dimensions must be positive")]
    ZeroDimension,
    #[error("constraint ground set differs from the sampler's")]
    GroundMismatch,
}

/// Rank of every nonempty subset of the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankVector {
    ground: GroundSet,
    ranks: Vec<u32>,
}

impl RankVector {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self, mask: u16) -> u32 {
        if mask == 0 {
            0
        } else {
            self.ranks[mask as usize - 1]
        }
    }

    /// Evaluates an expression at this rank vector.
    pub fn eval(&self, expr: &EntropyExpression) -> Rat {
        assert_eq!(expr.ground(), &self.ground, "ground set mismatch");
        expr.eval(|m| rat(i64::from(self.rank(m))))
    }

    /// Normalized, monotone, submodular: checked through the elemental
    /// system.
    pub fn is_polymatroid(&self) -> bool {
        elemental_system(&self.ground, Mode::Discrete)
            .iter()
            .all(|e| self.eval(&e.expr) >= Rat::zero())
    }
}

/// Matches sum_i s*H(g_i) - s*H(union) with disjoint groups g_i; these are
/// exactly the independence statements the direct-sum construction realizes.
fn independence_groups(expr: &EntropyExpression) -> Option<Vec<u16>> {
    let terms = expr.terms();
    if terms.len() < 3 {
        return None;
    }
    let union: u16 = terms.keys().fold(0, |a, &m| a | m);
    let union_coeff = terms.get(&union)?;
    let groups: Vec<u16> = terms.keys().copied().filter(|&m| m != union).collect();
    if groups.iter().fold(0u16, |a, &m| a | m) != union {
        return None;
    }
    let bits: u32 = groups.iter().map(|m| m.count_ones()).sum();
    if bits != union.count_ones() {
        return None;
    }
    let s = &terms[&groups[0]];
    if groups.iter().any(|m| &terms[m] != s) || *union_coeff != -s.clone() {
        return None;
    }
    Some(groups)
}

fn gf_inv(a: u64) -> u64 {
    // Fermat: a^(P-2) mod P
    let mut base = a % P;
    let mut exp = P - 2;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        exp >>= 1;
    }
    acc
}

#[allow(clippy::needless_range_loop)] // elimination reads two rows at once
fn gf_rank(mut rows: Vec<Vec<u64>>) -> u32 {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = gf_inv(rows[r][c]);
        for j in c..cols {
            rows[r][j] = rows[r][j] * inv % P;
        }
        for i in r + 1..rows.len() {
            if rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..cols {
                    rows[i][j] = (rows[i][j] + P - f * rows[r][j] % P) % P;
                }
            }
        }
        r += 1;
    }
    r as u32
}

/// Draws `count` representable rank vectors. Variable i spans `dims[i]`
/// generator rows. Only independence constraints are accepted; they hold
/// exactly on every sample by construction. Deterministic per seed.
pub fn sample_representable(
    ground: &GroundSet,
    dims: &[u32],
    constraints: &[EntropyExpression],
    count: usize,
    seed: u64,
) -> Result<Vec<RankVector>, SampleError> {
    let n = ground.len();
    if dims.len() != n {
        return Err(SampleError::DimCount {
            expected: n,
            got: dims.len(),
        });
    }
    if dims.contains(&0) {
        return Err(SampleError::ZeroDimension);
    }
    let mut zoned_mask: u16 = 0;
    for c in constraints {
        if c.ground() != ground {
            return Err(SampleError::GroundMismatch);
        }
        let groups =
            independence_groups(c).ok_or_else(|| SampleError::Unsupported(c.to_string()))?;
        zoned_mask |= groups.iter().fold(0, |a, &m| a | m);
    }

    // private zone offsets for constrained variables
    let mut zone_start = vec![0usize; n];
    let mut zone_total = 0usize;
    for i in 0..n {
        if zoned_mask & (1 << i) != 0 {
            zone_start[i] = zone_total;
            zone_total += dims[i] as usize;
        }
    }
    let free_dims: Vec<u32> = (0..n)
        .filter(|i| zoned_mask & (1 << i) == 0)
        .map(|i| dims[i])
        .collect();
    let shared_lo = free_dims.iter().copied().max().unwrap_or(0) as usize;
    let shared_hi = free_dims.iter().map(|&d| d as usize).sum::<usize>();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let shared = if shared_hi == 0 {
            0
        } else {
            rng.random_range(shared_lo..=shared_hi)
        };
        let ambient = zone_total + shared;
        let mut generators: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
        for i in 0..n {
            let d = dims[i] as usize;
            let rows = if zoned_mask & (1 << i) != 0 {
                // full-rank block confined to the private zone
                loop {
                    let block: Vec<Vec<u64>> = (0..d)
                        .map(|_| (0..d).map(|_| rng.random_range(0..P)).collect())
                        .collect();
                    if gf_rank(block.clone()) == d as u32 {
                        break block
                            .into_iter()
                            .map(|brow| {
                                let mut row = vec![0u64; ambient];
                                row[zone_start[i]..zone_start[i] + d]
                                    .copy_from_slice(&brow);
                                row
                            })
                            .collect();
                    }
                }
            } else {
                (0..d)
                    .map(|_| (0..ambient).map(|_| rng.random_range(0..P)).collect())
                    .collect()
            };
            generators.push(rows);
        }
        let full = ground.full_mask();
        let ranks = (1..=full)
            .map(|mask| {
                let rows: Vec<Vec<u64>> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .flat_map(|i| generators[i].iter().cloned())
                    .collect();
                gf_rank(rows)
            })
            .collect();
        samples.push(RankVector {
            ground: ground.clone(),
            ranks,
        });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::parse::{parse_expression, parse_file};

    #[test]
    fn forced_independence_is_additive() {
        let c = parse_expression("I(A;B)").unwrap();
        let g = c.ground().clone();
        let samples = sample_representable(&g, &[2, 3], &[c], 50, 7).unwrap();
        assert_eq!(samples.len(), 50);
        for s in &samples {
            assert_eq!(s.rank(0b01), 2);
            assert_eq!(s.rank(0b10), 3);
            assert_eq!(s.rank(0b11), 5);
        }
    }

    #[test]
    fn samples_are_polymatroids() {
        let g = GroundSet::new(vec!["X", "Y", "Z"]).unwrap();
        let samples = sample_representable(&g, &[2, 2, 2], &[], 100, 11).unwrap();
        for s in &samples {
            assert!(s.is_polymatroid());
            for small in 1..=g.full_mask() {
                for big in 1..=g.full_mask() {
                    if small & big == small {
                        assert!(s.rank(small) <= s.rank(big));
                    }
                }
            }
        }
    }

    #[test]
    fn ambient_resampling_varies_the_joint_rank() {
        let g = GroundSet::new(vec!["X", "Y", "Z"]).unwrap();
        let samples = sample_representable(&g, &[2, 2, 2], &[], 100, 3).unwrap();
        let joint: Vec<u32> = samples.iter().map(|s| s.rank(0b111)).collect();
        let lo = *joint.iter().min().unwrap();
        let hi = *joint.iter().max().unwrap();
        assert!(lo < hi, "no rank diversity: all joint ranks {lo}");
        assert_eq!(hi, 6);
    }

    #[test]
    fn unsupported_constraints_are_rejected() {
        let c = parse_expression("H(X) - H(Y)").unwrap();
        let g = c.ground().clone();
        assert!(matches!(
            sample_representable(&g, &[1, 1], &[c], 1, 0),
            Err(SampleError::Unsupported(_))
        ));
        let cond = parse_expression("I(X;Y|Z)").unwrap();
        let g3 = cond.ground().clone();
        assert!(matches!(
            sample_representable(&g3, &[1, 1, 1], &[cond], 1, 0),
            Err(SampleError::Unsupported(_))
        ));
    }

    #[test]
    fn dimension_validation() {
        let g = GroundSet::new(vec!["X", "Y"]).unwrap();
        assert!(matches!(
            sample_representable(&g, &[1], &[], 1, 0),
            Err(SampleError::DimCount { .. })
        ));
        assert!(matches!(
            sample_representable(&g, &[1, 0], &[], 1, 0),
            Err(SampleError::ZeroDimension)
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = GroundSet::new(vec!["X", "Y", "Z"]).unwrap();
        let a = sample_representable(&g, &[2, 1, 3], &[], 20, 42).unwrap();
        let b = sample_representable(&g, &[2, 1, 3], &[], 20, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_representable(&g, &[2, 1, 3], &[], 20, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn grouped_independence_detection() {
        let pair = parse_expression("H(X,Y) + H(Z) - H(X,Y,Z)").unwrap();
        assert!(independence_groups(&pair).is_some());
        let triple = parse_expression("H(X) + H(Y) + H(Z) - H(X,Y,Z)").unwrap();
        assert_eq!(independence_groups(&triple).unwrap().len(), 3);
        let overlapping = parse_expression("H(X,Y) + H(Y,Z) - H(X,Y,Z)").unwrap();
        assert!(independence_groups(&overlapping).is_none());
        let scaled = parse_expression("2*H(X) + 2*H(Y) - 2*H(X,Y)").unwrap();
        assert!(independence_groups(&scaled).is_some());
    }

    #[test]
    fn exchange_target_is_nonnegative_on_constrained_samples() {
        let file = parse_file(
            "given: I(W1;W4) = 0\nH(Y1|W1) + H(Y1|W4) >= H(Y1|W2) + H(Y1|W1,W4)\n",
        )
        .unwrap();
        let samples =
            sample_representable(&file.ground, &[2, 2, 2, 2], &file.constraints, 300, 17)
                .unwrap();
        for s in &samples {
            assert!(s.eval(&file.target) >= Rat::zero());
            assert!(s.eval(&file.constraints[0]).is_zero());
        }
    }
}
