//! Dense matrices over the rationals with exact rank and determinant.
//!
//! Rank and determinant go through fraction-free (Bareiss) elimination on an
//! integer matrix obtained by clearing denominators row by row. Intermediate
//! values stay integral, divisions are exact, and the answers carry no
//! tolerance: a rank claim is a theorem about the input, not an estimate.

use crate::rational::Rat;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Square matrix with the given diagonal.
    pub fn from_diagonal(diag: &[Rat]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: expected {ncols} columns"
        );
        Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Single column from a slice.
    pub fn column_vector(entries: &[Rat]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        assert!(j < self.cols, "column {j} out of range");
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// New matrix keeping the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Horizontal concatenation. All blocks must share a row count.
    pub fn hstack(blocks: &[&RatMatrix]) -> Self {
        assert!(!blocks.is_empty(), "hstack of nothing");
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "row count mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation. All blocks must share a column count.
    pub fn vstack(blocks: &[&RatMatrix]) -> Self {
        assert!(!blocks.is_empty(), "vstack of nothing");
        let cols = blocks[0].cols;
        assert!(
            blocks.iter().all(|b| b.cols == cols),
            "column count mismatch"
        );
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..cols {
                    out[(off + i, j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        out
    }

    /// Rank over the rational field, decided exactly.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let (mut m, _) = self.cleared_rows();
        bareiss_echelon(&mut m).pivots
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        let (mut m, scale) = self.cleared_rows();
        let out = bareiss_echelon(&mut m);
        if out.pivots < self.rows {
            return Rat::zero();
        }
        let det_scaled = if out.swaps.is_multiple_of(2) {
            out.last_pivot
        } else {
            -out.last_pivot
        };
        Rat::new(det_scaled, scale)
    }

    /// Floating-point copy for simulation and cross-checks.
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let v = &self[(i, j)];
            v.numer().to_f64().unwrap() / v.denom().to_f64().unwrap()
        })
    }

    /// Integer matrix with the same row space: each row is scaled by the lcm
    /// of its denominators. Returns the product of the scale factors.
    fn cleared_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let m = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                scale *= &lcm;
                row.iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect()
            })
            .collect();
        (m, scale)
    }
}

/// Free-function alias for [`RatMatrix::rank`], the crate's rank oracle.
pub fn exact_rank(m: &RatMatrix) -> usize {
    m.rank()
}

struct EchelonOutcome {
    pivots: usize,
    swaps: usize,
    last_pivot: BigInt,
}

/// Fraction-free elimination. Every intermediate entry is a minor of the
/// input matrix, so the division by the previous pivot is exact.
fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> EchelonOutcome {
    let rows = m.len();
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut swaps = 0;
    let mut last_pivot = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Smallest-magnitude pivot keeps the intermediate minors modest.
        let pivot_row = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].abs());
        let Some(p) = pivot_row else { continue };
        if p != r {
            m.swap(r, p);
            swaps += 1;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination lost exactness");
                m[i][j] = q;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        last_pivot = prev.clone();
        r += 1;
    }
    EchelonOutcome {
        pivots: r,
        swaps,
        last_pivot,
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        RatMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .map(|k| &self[(i, k)] * &rhs[(k, j)])
                .sum()
        })
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
