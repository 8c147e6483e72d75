//! Exact rational feasibility solver: phase-1 simplex with Bland's rule.
//!
//! Decides whether b lies in the cone/span of the given columns. Problems
//! here are tiny (at most a few hundred rows), so the dense tableau in exact
//! arithmetic is both fast enough and free of any tolerance: the multipliers
//! that come back are a checkable certificate, not an approximation.

use crate::rational::Rat;
use num_traits::{One, Zero};

/// Finds x with sum_j x_j * columns[j] = rhs, where x_j >= 0 for
/// j < nonneg_count and x_j is sign-free otherwise. Returns None when no
/// such x exists. Deterministic: Bland's smallest-index rule fixes every
/// pivot choice.
#[allow(clippy::needless_range_loop)] // pivoting reads two tableau rows at once
pub fn solve_feasibility(
    columns: &[Vec<Rat>],
    rhs: &[Rat],
    nonneg_count: usize,
) -> Option<Vec<Rat>> {
    let m = rhs.len();
    assert!(nonneg_count <= columns.len());
    assert!(columns.iter().all(|c| c.len() == m), "column length mismatch");
    let free_count = columns.len() - nonneg_count;
    // sign-free variables split into positive and negative parts
    let n = nonneg_count + 2 * free_count;
    let width = n + m + 1; // structural + artificial + rhs

    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); width];
        for (j, col) in columns.iter().enumerate() {
            if j < nonneg_count {
                row[j] = col[i].clone();
            } else {
                let split = nonneg_count + 2 * (j - nonneg_count);
                row[split] = col[i].clone();
                row[split + 1] = -col[i].clone();
            }
        }
        row[n + i] = Rat::one();
        row[width - 1] = rhs[i].clone();
        if row[width - 1] < Rat::zero() {
            for v in row.iter_mut() {
                if !v.is_zero() {
                    *v = -v.clone();
                }
            }
            // re-flip the artificial so the starting basis stays the identity
            row[n + i] = Rat::one();
        }
        tab.push(row);
    }

    // Phase-1 objective: minimize the sum of artificials. Reduced costs of
    // the structural columns start at -(column sum); the rhs slot carries
    // -(objective value) and is updated by pivoting like any other entry.
    let mut obj = vec![Rat::zero(); width];
    for j in (0..n).chain([width - 1]) {
        let s: Rat = tab.iter().map(|row| row[j].clone()).sum();
        obj[j] = -s;
    }

    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: smallest structural index with negative reduced cost;
        // artificials never re-enter.
        let entering = (0..n).find(|&j| obj[j] < Rat::zero());
        let Some(e) = entering else { break };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if tab[i][e] > Rat::zero() {
                let ratio = &tab[i][width - 1] / &tab[i][e];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // A negative reduced cost with no positive entry would make the
        // objective unbounded below, impossible for a sum of nonnegative
        // artificials.
        let l = leave.expect("phase-1 objective is bounded");
        let pivot = tab[l][e].clone();
        for v in tab[l].iter_mut() {
            *v = &*v / &pivot;
        }
        for i in 0..m {
            if i != l && !tab[i][e].is_zero() {
                let factor = tab[i][e].clone();
                for j in 0..width {
                    let delta = &factor * &tab[l][j];
                    tab[i][j] -= delta;
                }
            }
        }
        if !obj[e].is_zero() {
            let factor = obj[e].clone();
            for j in 0..width {
                let delta = &factor * &tab[l][j];
                obj[j] -= delta;
            }
        }
        basis[l] = e;
    }

    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][width - 1].clone();
        }
    }
    let mut out = Vec::with_capacity(columns.len());
    out.extend_from_slice(&x[..nonneg_count]);
    for f in 0..free_count {
        let split = nonneg_count + 2 * f;
        out.push(&x[split] - &x[split + 1]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn check(columns: &[Vec<Rat>], rhs: &[Rat], nonneg: usize, x: &[Rat]) {
        for (j, xi) in x.iter().enumerate().take(nonneg) {
            assert!(xi >= &Rat::zero(), "x[{j}] negative");
        }
        for i in 0..rhs.len() {
            let got: Rat = columns
                .iter()
                .zip(x)
                .map(|(c, xi)| &c[i] * xi)
                .sum();
            assert_eq!(got, rhs[i], "row {i}");
        }
    }

    #[test]
    fn scalar_cone_membership() {
        let cols = vec![vec![rat(1)]];
        let x = solve_feasibility(&cols, &[rat(2)], 1).unwrap();
        assert_eq!(x, vec![rat(2)]);
        assert!(solve_feasibility(&cols, &[rat(-1)], 1).is_none());
    }

    #[test]
    fn free_variable_reaches_negative_targets() {
        let cols = vec![vec![rat(1)]];
        let x = solve_feasibility(&cols, &[rat(-1)], 0).unwrap();
        check(&cols, &[rat(-1)], 0, &x);
    }

    #[test]
    fn two_dimensional_combination() {
        let cols = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        let rhs = [rat(2), rat(1)];
        let x = solve_feasibility(&cols, &rhs, 2).unwrap();
        check(&cols, &rhs, 2, &x);
        assert_eq!(x, vec![rat(1), rat(1)]);
    }

    #[test]
    fn infeasible_outside_the_cone() {
        // cone of (1,1) and (1,2) cannot reach (1,-1)
        let cols = vec![vec![rat(1), rat(1)], vec![rat(1), rat(2)]];
        assert!(solve_feasibility(&cols, &[rat(1), rat(-1)], 2).is_none());
    }

    #[test]
    fn mixed_cone_and_span() {
        // x0 >= 0 on (1,0); x1 free on (1,1): reach (0,-2) via x0=2, x1=-2
        let cols = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        let rhs = [rat(0), rat(-2)];
        let x = solve_feasibility(&cols, &rhs, 1).unwrap();
        check(&cols, &rhs, 1, &x);
    }

    #[test]
    fn rational_data_stays_exact() {
        let cols = vec![
            vec![frac(1, 3), frac(1, 7)],
            vec![frac(2, 5), frac(3, 11)],
        ];
        let rhs = [frac(1, 3) + frac(4, 5), frac(1, 7) + frac(6, 11)];
        let x = solve_feasibility(&cols, &rhs, 2).unwrap();
        check(&cols, &rhs, 2, &x);
        assert_eq!(x, vec![rat(1), rat(2)]);
    }

    #[test]
    fn redundant_rows_are_fine() {
        let cols = vec![vec![rat(1), rat(2), rat(2)], vec![rat(0), rat(1), rat(1)]];
        let rhs = [rat(1), rat(3), rat(3)];
        let x = solve_feasibility(&cols, &rhs, 2).unwrap();
        check(&cols, &rhs, 2, &x);
    }

    #[test]
    fn deterministic_output() {
        let cols = vec![
            vec![rat(1), rat(1)],
            vec![rat(1), rat(2)],
            vec![rat(2), rat(3)],
        ];
        let rhs = [rat(3), rat(5)];
        let a = solve_feasibility(&cols, &rhs, 3).unwrap();
        let b = solve_feasibility(&cols, &rhs, 3).unwrap();
        assert_eq!(a, b);
        check(&cols, &rhs, 3, &a);
    }
}
