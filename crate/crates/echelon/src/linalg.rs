//! Exact linear algebra over the rationals.
//!
//! Everything here is exact: ranks use fraction-free Bareiss elimination over
//! big integers, inverses use rational Gauss-Jordan, and the Bruhat
//! decomposition `M = U1 * P * U2` (both `U` factors upper triangular and
//! invertible, `P` a permutation matrix) is produced with an explicit
//! certificate that is re-verified in test builds.  A mod-p path exists purely
//! as a prescreen for large inputs; any decision that matters is recomputed
//! exactly.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: ({0}x{1}) vs ({2}x{3})")]
    DimMismatch(usize, usize, usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Dense matrix with exact rational entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix::from_fn(r, c, |i, j| BigRational::from_integer(BigInt::from(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Submatrix of the given half-open row and column ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ExactMatrix {
        ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.at(rows.start + i, cols.start + j).clone()
        })
    }

    pub fn is_upper_triangular(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..i.min(self.cols) {
                if !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Upper triangular with nonzero diagonal (hence invertible).
    pub fn is_invertible_upper_triangular(&self) -> bool {
        self.rows == self.cols
            && self.is_upper_triangular()
            && (0..self.rows).all(|i| !self.at(i, i).is_zero())
    }

    /// Exact rank via fraction-free Bareiss elimination.
    ///
    /// Rows are first scaled to integers (scaling does not change the rank);
    /// afterwards every intermediate entry is a minor of the scaled matrix, so
    /// all divisions are exact.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = num::integer::lcm(lcm, self.at(i, j).denom().clone());
                }
                (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numer() * (&lcm / e.denom())
                    })
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot_row);
            for i in rank + 1..self.rows {
                for j in col + 1..self.cols {
                    let t = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                    debug_assert!((&t % &prev).is_zero(), "Bareiss division not exact");
                    a[i][j] = t / &prev;
                }
                a[i][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Exact inverse via rational Gauss-Jordan.
    pub fn inverse(&self) -> Result<ExactMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ExactMatrix::identity(n);
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| !a.at(i, col).is_zero()) else {
                return Err(LinalgError::Singular);
            };
            for j in 0..n {
                a.data.swap(col * n + j, pr * n + j);
                inv.data.swap(col * n + j, pr * n + j);
            }
            let pivot = a.at(col, col).clone();
            for j in 0..n {
                let v = a.at(col, j) / &pivot;
                a.set(col, j, v);
                let w = inv.at(col, j) / &pivot;
                inv.set(col, j, w);
            }
            for i in 0..n {
                if i != col && !a.at(i, col).is_zero() {
                    let factor = a.at(i, col).clone();
                    for j in 0..n {
                        let v = a.at(i, j) - &factor * a.at(col, j);
                        a.set(i, j, v);
                        let w = inv.at(i, j) - &factor * inv.at(col, j);
                        inv.set(i, j, w);
                    }
                }
            }
        }
        Ok(inv)
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Permutation matrix stored as the image array: `col_to_row[j] = i` means
/// the entry at row `i`, column `j` is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermutationMatrix {
    col_to_row: Vec<usize>,
}

impl PermutationMatrix {
    pub fn new(col_to_row: Vec<usize>) -> Result<Self, LinalgError> {
        let n = col_to_row.len();
        let mut seen = vec![false; n];
        for &i in &col_to_row {
            if i >= n || seen[i] {
                return Err(LinalgError::Internal(
                    "not a permutation image array".into(),
                ));
            }
            seen[i] = true;
        }
        Ok(PermutationMatrix { col_to_row })
    }

    pub fn n(&self) -> usize {
        self.col_to_row.len()
    }

    /// The row carrying the 1 in column `j`.
    pub fn row_of_col(&self, j: usize) -> usize {
        self.col_to_row[j]
    }

    pub fn image(&self) -> &[usize] {
        &self.col_to_row
    }

    pub fn inverse(&self) -> PermutationMatrix {
        let mut inv = vec![0; self.n()];
        for (j, &i) in self.col_to_row.iter().enumerate() {
            inv[i] = j;
        }
        PermutationMatrix { col_to_row: inv }
    }

    pub fn to_exact_matrix(&self) -> ExactMatrix {
        let n = self.n();
        let mut m = ExactMatrix::zeros(n, n);
        for (j, &i) in self.col_to_row.iter().enumerate() {
            m.set(i, j, BigRational::one());
        }
        m
    }
}

/// A Bruhat decomposition `M = U1 * P * U2` with invertible upper-triangular
/// `U1`, `U2`.  The permutation `P` is unique for invertible `M`.
#[derive(Clone, Debug)]
pub struct BruhatCertificate {
    pub p: PermutationMatrix,
    pub u1: ExactMatrix,
    pub u2: ExactMatrix,
}

impl BruhatCertificate {
    /// Re-multiplies the factors and compares exactly against `m`.
    pub fn verify(&self, m: &ExactMatrix) -> bool {
        if !self.u1.is_invertible_upper_triangular() || !self.u2.is_invertible_upper_triangular() {
            return false;
        }
        match self.u1.mul(&self.p.to_exact_matrix()).and_then(|up| up.mul(&self.u2)) {
            Ok(prod) => prod == *m,
            Err(_) => false,
        }
    }
}

/// Computes the Bruhat decomposition of an invertible square matrix by a
/// bottom-pivot column sweep.
///
/// For each column left to right, the pivot is the bottom-most nonzero entry
/// in a row not yet used as a pivot; the column is cleared above the pivot by
/// row operations and the pivot row is cleared to the right by column
/// operations.  Both kinds of operation are upper-triangular, and the inverse
/// operations are accumulated into the `U1` and `U2` factors.
pub fn bruhat_permutation(m: &ExactMatrix) -> Result<BruhatCertificate, LinalgError> {
    let (col_to_row, factors) = sweep(m, m.cols(), true)?;
    let (u1, u2) = factors.expect("factors accumulated");
    let p = PermutationMatrix::new(col_to_row)?;
    let cert = BruhatCertificate { p, u1, u2 };
    debug_assert!(cert.verify(m), "Bruhat certificate failed to verify");
    Ok(cert)
}

/// Runs the Bruhat sweep through the first `upto_cols` columns only and
/// returns the pivot row of each processed column.
///
/// The pivot choice in column `j` depends only on columns `0..=j`, so a
/// prefix of the sweep already determines a prefix of the permutation.  No
/// certificate is accumulated, which makes this much cheaper for large
/// matrices when only a few images are needed.
pub fn bruhat_prefix(m: &ExactMatrix, upto_cols: usize) -> Result<Vec<usize>, LinalgError> {
    let (col_to_row, _) = sweep(m, upto_cols, false)?;
    Ok(col_to_row)
}

fn sweep(
    m: &ExactMatrix,
    upto_cols: usize,
    accumulate: bool,
) -> Result<(Vec<usize>, Option<(ExactMatrix, ExactMatrix)>), LinalgError> {
    let n = m.rows();
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let upto = upto_cols.min(n);
    // Work on columns 0..upto only: later columns never influence the pivot
    // choices of the processed prefix.
    let width = if accumulate { n } else { upto };
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..width).map(|j| m.at(i, j).clone()).collect())
        .collect();
    let mut used = vec![false; n];
    let mut col_to_row = Vec::with_capacity(upto);
    // Invariant: m = U1 * A * U2cur throughout, with unit upper-triangular
    // factors; at the end A is a monomial matrix P * D.
    let mut u1 = if accumulate { Some(ExactMatrix::identity(n)) } else { None };
    let mut u2cur = if accumulate { Some(ExactMatrix::identity(n)) } else { None };

    for j in 0..upto {
        let Some(i) = (0..n).rev().find(|&i| !used[i] && !a[i][j].is_zero()) else {
            return Err(LinalgError::Singular);
        };
        debug_assert!(
            (i + 1..n).all(|k| a[k][j].is_zero() || used[k]),
            "rows below the pivot must be used pivots"
        );
        used[i] = true;
        col_to_row.push(i);
        let pivot = a[i][j].clone();

        // Clear column j above the pivot: row_i2 -= c * row_i.  The inverse
        // operation adds c times column i2 of U1 to its column i.
        for i2 in 0..i {
            if a[i2][j].is_zero() {
                continue;
            }
            let c = &a[i2][j] / &pivot;
            for jj in j..width {
                if !a[i][jj].is_zero() {
                    let v = &a[i2][jj] - &c * &a[i][jj];
                    a[i2][jj] = v;
                }
            }
            debug_assert!(a[i2][j].is_zero());
            if let Some(u1m) = u1.as_mut() {
                for r in 0..n {
                    if !u1m.at(r, i2).is_zero() {
                        let v = u1m.at(r, i) + &c * u1m.at(r, i2);
                        u1m.set(r, i, v);
                    }
                }
            }
        }

        // Clear the pivot row to the right: col_jj -= d * col_j.  Column j is
        // now supported on row i alone, so only row i changes.  The inverse
        // operation adds d times row jj of U2cur to its row j.
        for jj in j + 1..width {
            if a[i][jj].is_zero() {
                continue;
            }
            let d = &a[i][jj] / &pivot;
            a[i][jj] = BigRational::zero();
            if let Some(u2m) = u2cur.as_mut() {
                for cc in 0..n {
                    if !u2m.at(jj, cc).is_zero() {
                        let v = u2m.at(j, cc) + &d * u2m.at(jj, cc);
                        u2m.set(j, cc, v);
                    }
                }
            }
        }
    }

    let factors = if accumulate {
        let u1 = u1.unwrap();
        let mut u2 = u2cur.unwrap();
        // U2 = D * U2cur with D the diagonal of pivot values: row j scales by
        // the pivot of column j.
        for (j, &i) in col_to_row.iter().enumerate() {
            let d = a[i][j].clone();
            for cc in 0..n {
                if !u2.at(j, cc).is_zero() {
                    let v = u2.at(j, cc) * &d;
                    u2.set(j, cc, v);
                }
            }
        }
        Some((u1, u2))
    } else {
        None
    };
    Ok((col_to_row, factors))
}

/// Recovers the Bruhat permutation of an invertible matrix purely from ranks
/// of lower-left submatrices.
///
/// Entry `(i, j)` of the permutation is 1 exactly when deleting row `i` or
/// column `j` from the lower-left corner at `(i, j)` drops the rank.  This is
/// O(n^5) and exists as an independent oracle for the sweep; it never calls
/// the sweep code.
pub fn rank_grid_oracle(m: &ExactMatrix) -> Result<PermutationMatrix, LinalgError> {
    let n = m.rows();
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let r = |i: usize, j: usize| -> usize {
        // rank of rows i..n, columns 0..j
        if i >= n || j == 0 {
            0
        } else {
            m.submatrix(i..n, 0..j).rank()
        }
    };
    let mut col_to_row = vec![usize::MAX; n];
    let mut row_taken = vec![false; n];
    for j in 0..n {
        for i in 0..n {
            let cond = r(i + 1, j) == r(i + 1, j + 1)
                && r(i + 1, j) == r(i, j)
                && r(i, j + 1) == r(i, j) + 1;
            if cond {
                if col_to_row[j] != usize::MAX || row_taken[i] {
                    return Err(LinalgError::Internal(
                        "rank grid is not a permutation".into(),
                    ));
                }
                col_to_row[j] = i;
                row_taken[i] = true;
            }
        }
        if col_to_row[j] == usize::MAX {
            return Err(LinalgError::Singular);
        }
    }
    PermutationMatrix::new(col_to_row)
}

pub mod modp {
    //! Rank computations modulo fixed large primes, used as a prescreen: the
    //! rank mod p never exceeds the rational rank, and agreement between two
    //! primes is strong (but not conclusive) evidence of equality.

    use super::ExactMatrix;
    use num::ToPrimitive;

    /// Two fixed large primes: 2^61 - 1 and 2^64 - 2^32 + 1.
    pub const PRESCREEN_PRIMES: [u64; 2] = [(1 << 61) - 1, 18446744069414584321];

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, p);
            }
            base = mulmod(base, base, p);
            exp >>= 1;
        }
        acc
    }

    fn invmod(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    /// Reduces the matrix mod `p`; `None` if a denominator vanishes mod `p`.
    fn reduce(m: &ExactMatrix, p: u64) -> Option<Vec<Vec<u64>>> {
        let big_p = num::BigInt::from(p);
        let to_fp = |x: &num::BigInt| -> u64 {
            let r = ((x % &big_p) + &big_p) % &big_p;
            r.to_u64().expect("residue fits in u64")
        };
        let mut out = vec![vec![0u64; m.cols()]; m.rows()];
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = m.at(i, j);
                let den = to_fp(e.denom());
                if den == 0 {
                    return None;
                }
                out[i][j] = mulmod(to_fp(e.numer()), invmod(den, p), p);
            }
        }
        Some(out)
    }

    /// Rank of the reduction mod `p`, or `None` if the reduction fails.
    pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Option<usize> {
        let mut a = reduce(m, p)?;
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(pr) = (rank..rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, pr);
            let inv = invmod(a[rank][col], p);
            for i in rank + 1..rows {
                if a[i][col] != 0 {
                    let f = mulmod(a[i][col], inv, p);
                    for j in col..cols {
                        let sub = mulmod(f, a[rank][j], p);
                        // Avoid u64 overflow: both operands are < p.
                        a[i][j] = if a[i][j] >= sub {
                            a[i][j] - sub
                        } else {
                            a[i][j] + (p - sub)
                        };
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        Some(rank)
    }

    /// Outcome of a multi-prime rank prescreen.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Prescreen {
        /// Per-prime ranks (where the reduction was defined).
        pub ranks: Vec<Option<usize>>,
        /// The common rank if all defined reductions agree, else `None`.
        pub agreed: Option<usize>,
    }

    /// Computes ranks modulo each prime; these are lower bounds for the
    /// rational rank, and agreement across primes is reported.
    pub fn mod_p_rank_prescreen(m: &ExactMatrix, primes: &[u64]) -> Prescreen {
        let ranks: Vec<Option<usize>> = primes.iter().map(|&p| rank_mod_p(m, p)).collect();
        let defined: Vec<usize> = ranks.iter().flatten().copied().collect();
        let agreed = match defined.as_slice() {
            [] => None,
            [first, rest @ ..] => rest.iter().all(|r| r == first).then_some(*first),
        };
        Prescreen { ranks, agreed }
    }

    /// The pivot rows of the first `upto_cols` columns of the Bruhat sweep,
    /// carried out over `F_p`; a fast probabilistic prescreen for
    /// [`super::bruhat_prefix`].  Returns `None` if the reduction fails, if
    /// some column has no usable pivot mod `p`, or if the input is not
    /// square.  An entry that vanishes mod `p` but not rationally can make
    /// the result differ from the exact sweep, so callers must verify.
    pub fn bruhat_prefix_mod_p(m: &ExactMatrix, upto_cols: usize, p: u64) -> Option<Vec<usize>> {
        if m.rows() != m.cols() {
            return None;
        }
        let n = m.rows();
        let upto = upto_cols.min(n);
        let mut a = reduce(m, p)?;
        for row in &mut a {
            row.truncate(upto);
        }
        let mut used = vec![false; n];
        let mut col_to_row = Vec::with_capacity(upto);
        for j in 0..upto {
            let i = (0..n).rev().find(|&i| !used[i] && a[i][j] != 0)?;
            used[i] = true;
            col_to_row.push(i);
            let inv_pivot = invmod(a[i][j], p);
            for i2 in 0..i {
                if a[i2][j] == 0 {
                    continue;
                }
                let c = mulmod(a[i2][j], inv_pivot, p);
                for jj in j..upto {
                    if a[i][jj] != 0 {
                        let sub = mulmod(c, a[i][jj], p);
                        a[i2][jj] = if a[i2][jj] >= sub {
                            a[i2][jj] - sub
                        } else {
                            a[i2][jj] + (p - sub)
                        };
                    }
                }
            }
            // Clearing the pivot row rightward only zeroes entries; no other
            // row is affected because column j is supported on row i alone.
            for jj in j + 1..upto {
                a[i][jj] = 0;
            }
        }
        Some(col_to_row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_and_inverse() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert!(matches!(m.inverse(), Err(LinalgError::Singular)));

        let m = ExactMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));

        // Rational entries: rank is invariant under row scaling.
        let mut q = ExactMatrix::zeros(2, 2);
        q.set(0, 0, rational(1, 2));
        q.set(0, 1, rational(1, 3));
        q.set(1, 0, rational(3, 2));
        q.set(1, 1, rational(1, 1));
        assert_eq!(q.rank(), 1);
    }

    #[test]
    fn bruhat_on_a_known_matrix() {
        // Lower unitriangular 2x2: the permutation must be the swap.
        let m = ExactMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]);
        let cert = bruhat_permutation(&m).unwrap();
        assert_eq!(cert.p.image(), &[1, 0]);
        assert!(cert.verify(&m));
        let oracle = rank_grid_oracle(&m).unwrap();
        assert_eq!(oracle, cert.p);
    }

    #[test]
    fn bruhat_identity_and_reversal() {
        let id = ExactMatrix::identity(4);
        let cert = bruhat_permutation(&id).unwrap();
        assert_eq!(cert.p.image(), &[0, 1, 2, 3]);

        // Strictly anti-diagonal matrix: permutation is the full reversal.
        let mut anti = ExactMatrix::zeros(3, 3);
        for i in 0..3 {
            anti.set(i, 2 - i, BigRational::one());
        }
        let cert = bruhat_permutation(&anti).unwrap();
        assert_eq!(cert.p.image(), &[2, 1, 0]);
        assert_eq!(rank_grid_oracle(&anti).unwrap(), cert.p);
    }

    #[test]
    fn bruhat_rejects_singular() {
        let m = ExactMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(matches!(bruhat_permutation(&m), Err(LinalgError::Singular)));
        assert!(matches!(rank_grid_oracle(&m), Err(LinalgError::Singular)));
    }

    #[test]
    fn bruhat_prefix_agrees_with_full_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let m = random_invertible(&mut rng, 5);
            let cert = bruhat_permutation(&m).unwrap();
            for upto in 0..=5 {
                let prefix = bruhat_prefix(&m, upto).unwrap();
                assert_eq!(&cert.p.image()[..upto], prefix.as_slice());
            }
        }
    }

    pub(crate) fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
        loop {
            let m = ExactMatrix::from_fn(n, n, |_, _| {
                BigRational::from_integer(BigInt::from(rng.random_range(-2i64..=2)))
            });
            if m.rank() == n {
                return m;
            }
        }
    }

    #[test]
    fn bruhat_matches_rank_grid_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let n = rng.random_range(2..=5);
            let m = random_invertible(&mut rng, n);
            let cert = bruhat_permutation(&m).unwrap();
            assert!(cert.verify(&m));
            let oracle = rank_grid_oracle(&m).unwrap();
            assert_eq!(cert.p, oracle, "disagreement on {m:?}");
        }
    }

    #[test]
    fn permutation_matrix_roundtrip() {
        let p = PermutationMatrix::new(vec![2, 0, 1]).unwrap();
        let m = p.to_exact_matrix();
        assert_eq!(*m.at(2, 0), BigRational::one());
        let inv = p.inverse();
        assert_eq!(inv.image(), &[1, 2, 0]);
        assert!(PermutationMatrix::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn modp_prescreen_matches_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(1..=5);
            let m = ExactMatrix::from_fn(n, n, |_, _| {
                BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)))
            });
            let exact = m.rank();
            let screen = modp::mod_p_rank_prescreen(&m, &modp::PRESCREEN_PRIMES);
            assert_eq!(screen.agreed, Some(exact));
            for r in screen.ranks.iter().flatten() {
                assert!(*r <= exact);
            }
        }
    }

    #[test]
    fn modp_detects_denominator_collision() {
        let p = modp::PRESCREEN_PRIMES[0];
        let mut m = ExactMatrix::zeros(1, 1);
        m.set(0, 0, BigRational::new(BigInt::one(), BigInt::from(p)));
        assert_eq!(modp::rank_mod_p(&m, p), None);
        let screen = modp::mod_p_rank_prescreen(&m, &modp::PRESCREEN_PRIMES);
        assert_eq!(screen.ranks[0], None);
        assert_eq!(screen.agreed, Some(1));
    }

    #[test]
    fn modp_partial_sweep_matches_the_exact_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 2 + (rng.random_range(0..4));
            let m = random_invertible(&mut rng, n);
            for upto in 0..=n {
                let exact = bruhat_prefix(&m, upto).unwrap();
                for p in modp::PRESCREEN_PRIMES {
                    // Entries are tiny integers, so no residue collisions:
                    // the prescreen must reproduce the exact pivot rows.
                    assert_eq!(modp::bruhat_prefix_mod_p(&m, upto, p), Some(exact.clone()));
                }
            }
        }
    }
}
