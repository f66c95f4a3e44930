//! Exact rational arithmetic, dense matrices and fraction-free rank.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. On disk they are written as
//! `"p/q"`, or `"p"` when the denominator is one.

mod det;

pub use det::{symbolic_det, symbolic_det_capped, DEFAULT_DET_CAP};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. A zero denominator is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = |msg: &str| Error::parse_at(s, 0, format!("{msg}: {t:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad("bad integer"))?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix entries: expected {} got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Submatrix keeping every row and the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix entries: expected {} got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled by the lcm of its denominators, which leaves the
/// rank unchanged; elimination then runs entirely in `BigInt` with exact
/// divisions by the previous pivot.
pub fn rational_rank(m: &RatMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect()
        })
        .collect();
    bareiss_rank(&mut a)
}

pub(crate) fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain Gauss-Jordan over the rationals; independent of the Bareiss path.
    fn gauss_rank(m: &RatMatrix) -> usize {
        let mut a = m.to_rows();
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let piv = a[rank][c].clone();
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &piv;
                    let pivot_row = a[rank].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rational_rank(&RatMatrix::identity(3)), 3);
        let ones = RatMatrix::from_i64_rows(&[vec![1; 6]]).unwrap();
        assert_eq!(rational_rank(&ones), 1);
        let vander = RatMatrix::from_i64_rows(&[vec![1, 1, 1, 1], vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(gauss_rank(&vander), 2);
        assert_eq!(rational_rank(&vander), 2);
    }

    #[test]
    fn empty_matrices_have_rank_zero() {
        assert_eq!(rational_rank(&RatMatrix::zeros(0, 4)), 0);
        assert_eq!(rational_rank(&RatMatrix::zeros(3, 0)), 0);
        let m = RatMatrix::from_i64_rows(&[vec![1, 2, 3]]).unwrap();
        assert_eq!(rational_rank(&m.select_columns(&[])), 0);
    }

    #[test]
    fn fractional_entries() {
        let m = RatMatrix::from_rows(&[
            vec![rat_frac(1, 2), rat_frac(1, 3)],
            vec![rat_frac(3, 2), rat(1)],
        ])
        .unwrap();
        assert_eq!(rational_rank(&m), 1);
    }

    #[test]
    fn rat_text() {
        assert_eq!(parse_rat("3/6").unwrap(), rat_frac(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4));
        assert_eq!(format_rat(&rat_frac(-2, 4)), "-1/2");
        assert_eq!(format_rat(&rat(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..4, 1i64..4), r * c).prop_map(move |v| {
                RatMatrix::new(r, c, v.into_iter().map(|(n, d)| rat_frac(n, d)).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_gauss_and_transpose(m in small_matrix()) {
            let r = rational_rank(&m);
            prop_assert_eq!(r, gauss_rank(&m));
            prop_assert_eq!(r, rational_rank(&m.transpose()));
        }

        #[test]
        fn rank_invariant_under_row_ops(m in small_matrix(), k in 1i64..5, s in 0usize..5) {
            prop_assume!(m.rows() >= 2);
            let mut rows = m.to_rows();
            let i = s % rows.len();
            for v in rows[i].iter_mut() {
                *v *= rat(-k);
            }
            let last = rows.len() - 1;
            rows.swap(0, last);
            let scaled = RatMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(rational_rank(&scaled), rational_rank(&m));
        }
    }
}
