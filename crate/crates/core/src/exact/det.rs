use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const DEFAULT_DET_CAP: usize = 6;

/// Determinant of a square matrix of polynomials with the default side cap.
pub fn symbolic_det(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    symbolic_det_capped(m, DEFAULT_DET_CAP)
}

/// Laplace expansion along the rows in order, memoized on the set of
/// columns still available. Row `k` is expanded over the remaining columns
/// with the alternating sign of the column's position among them, which for
/// the first row is the usual `(-1)^j` cofactor sign.
pub fn symbolic_det_capped(m: &[Vec<Polynomial>], cap: usize) -> Result<Polynomial> {
    let side = m.len();
    if let Some(r) = m.iter().find(|r| r.len() != side) {
        return Err(Error::NotSquare {
            rows: side,
            cols: r.len(),
        });
    }
    if side > cap {
        return Err(Error::DeterminantTooLarge { side, cap });
    }
    if side == 0 {
        return Err(Error::InvalidInput("determinant of an empty matrix".into()));
    }
    let nvars = m[0][0].nvars();
    let mut memo = HashMap::new();
    Ok(expand(m, 0, (1u32 << side) - 1, nvars, &mut memo))
}

fn expand(
    m: &[Vec<Polynomial>],
    row: usize,
    cols: u32,
    nvars: usize,
    memo: &mut HashMap<u32, Polynomial>,
) -> Polynomial {
    if cols == 0 {
        return Polynomial::one(nvars);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(nvars);
    let mut position = 0;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = expand(m, row + 1, cols & !(1 << c), nvars, memo);
            let term = entry * &minor;
            acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    /// Leibniz formula over all permutations.
    fn permutation_sum(m: &[Vec<Polynomial>]) -> Polynomial {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        let nvars = m[0][0].nvars();
        let mut total = Polynomial::zero(nvars);
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut prod = Polynomial::one(nvars);
            for (r, &c) in p.iter().enumerate() {
                prod = &prod * &m[r][c];
            }
            total = if inversions % 2 == 0 { &total + &prod } else { &total - &prod };
        }
        total
    }

    fn var(i: usize) -> Polynomial {
        Polynomial::var(4, i)
    }

    #[test]
    fn one_by_one_and_two_by_two() {
        assert_eq!(symbolic_det(&[vec![var(0)]]).unwrap(), var(0));
        let m = vec![vec![var(0), var(1)], vec![var(2), var(3)]];
        let expect = &(&var(0) * &var(3)) - &(&var(1) * &var(2));
        assert_eq!(symbolic_det(&m).unwrap(), expect);
    }

    #[test]
    fn repeated_row_is_zero() {
        let r = vec![var(0), var(1), &var(2) + &var(3)];
        let m = vec![r.clone(), vec![var(3), var(3), var(0)], r];
        assert!(symbolic_det(&m).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let m = vec![vec![var(0), var(1)]];
        assert!(matches!(symbolic_det(&m), Err(Error::NotSquare { .. })));
        let big: Vec<Vec<Polynomial>> = (0..7).map(|_| vec![var(0); 7]).collect();
        assert_eq!(
            symbolic_det(&big),
            Err(Error::DeterminantTooLarge { side: 7, cap: 6 })
        );
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((0u32..2, 0u32..2, 0u32..2, -3i64..=3), 0..3).prop_map(|ts| {
            let mut p = Polynomial::zero(3);
            for (a, b, c, k) in ts {
                p.add_term(
                    crate::poly::Monomial::from_exponents(vec![a, b, c]),
                    rat(k),
                );
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn agrees_with_permutation_sum(
            side in 1usize..=4,
            entries in proptest::collection::vec(small_poly(), 16),
        ) {
            let m: Vec<Vec<Polynomial>> =
                (0..side).map(|r| entries[r * side..(r + 1) * side].to_vec()).collect();
            prop_assert_eq!(symbolic_det(&m).unwrap(), permutation_sum(&m));
        }
    }
}
