//! Partitions, Schur-functor dimensions and the Cauchy-identity bookkeeping.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing parts with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition((1..=w).map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32).collect())
    }
}

/// All partitions of `d` with at most `max_rows` parts, in reverse
/// lexicographic order: `(4), (3,1), (2,2), ...`.
pub fn partitions_bounded(d: u32, max_rows: usize) -> Vec<Partition> {
    fn go(rest: u32, cap: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, max_rows, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the Schur module `S_λ(K^N)` by the hook-content formula.
/// Numerator and denominator are accumulated as integers and divided once.
pub fn schur_dim(lambda: &Partition, n: u32) -> BigUint {
    if lambda.rows() > n as usize {
        return BigUint::zero();
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            // content j - i is at least -(rows - 1) > -N here
            num *= (n as i64 + j as i64 - i as i64) as u64;
            let arm = row as usize - j - 1;
            let leg = conj.parts()[j] as usize - i - 1;
            den *= (arm + leg + 1) as u64;
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauchyCheck {
    pub d: u32,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub equal: bool,
}

/// `Σ_{λ ⊢ d, rows ≤ min(e, v)} dim S_λ(K^e) · dim S_λ(K^v)` against
/// `dim Sym^d(K^e ⊗ K^v) = C(ev + d - 1, d)`.
pub fn cauchy_verify(d: u32, e: u32, v: u32) -> CauchyCheck {
    let lhs: BigUint = partitions_bounded(d, e.min(v) as usize)
        .iter()
        .map(|l| schur_dim(l, e) * schur_dim(l, v))
        .sum();
    let rhs = if e * v == 0 {
        if d == 0 { BigUint::one() } else { BigUint::zero() }
    } else {
        binomial((e * v + d - 1) as u64, d as u64)
    };
    CauchyCheck {
        d,
        equal: lhs == rhs,
        lhs,
        rhs,
    }
}

/// Graded dimension count behind the flag-bundle description for `ℓ ≥ r`.
///
/// The left side counts highest-weight lines of `Sym^d(E ⊗ V)` for the `V`
/// factor: `Σ_{λ ⊢ d, rows ≤ min(r, ℓ)} dim S_λ(E)`. The right side is the
/// degree-`d` part of a polynomial ring `A[t]` with `t` of degree `r`, where
/// `A_k = Σ_{μ ⊢ k, rows ≤ r-1} dim S_μ(E)`.
pub fn coxflag_accounting(r: u32, l: u32, d: u32) -> (BigUint, BigUint) {
    let lhs: BigUint = partitions_bounded(d, r.min(l) as usize)
        .iter()
        .map(|p| schur_dim(p, r))
        .sum();
    let mut rhs = BigUint::zero();
    let mut k = 0;
    while r > 0 && k * r <= d {
        rhs += partitions_bounded(d - k * r, (r - 1) as usize)
            .iter()
            .map(|p| schur_dim(p, r))
            .sum::<BigUint>();
        k += 1;
    }
    (lhs, rhs)
}

/// Weakly decreasing integer weight of `GL_r`; negative entries allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GLWeight(Vec<i64>);

impl GLWeight {
    pub fn new(w: Vec<i64>) -> Result<Self> {
        if w.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidInput(format!("{w:?} is not weakly decreasing")));
        }
        Ok(Self(w))
    }

    /// `ω_k = (1, ..., 1, 0, ..., 0)` with `k` ones in length `r`.
    pub fn fundamental(k: usize, r: usize) -> Result<Self> {
        if k > r {
            return Err(Error::InvalidInput(format!("ω_{k} needs k ≤ {r}")));
        }
        Ok(Self((0..r).map(|i| i64::from(i < k)).collect()))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `λ - λ_r ω_r`, the shift making the last entry zero.
    pub fn reduced(&self) -> GLWeight {
        let last = self.0.last().copied().unwrap_or(0);
        GLWeight(self.0.iter().map(|x| x - last).collect())
    }
}

/// Highest weight of the dual: `(λ_1, ..., λ_r)* = (-λ_r, ..., -λ_1)`.
pub fn dual_weight(l: &GLWeight) -> GLWeight {
    GLWeight(l.0.iter().rev().map(|x| -x).collect())
}

/// Generator families whose Picard bidegree is tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    X,
    Y,
    W,
    WTau,
    /// Flag minor on a column set of the given size.
    PTau(u32),
    /// Flag minor containing column 0, with `τ` of the given size.
    P0Tau(u32),
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sized = |rest: &str| {
            rest.parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("bad size in generator kind {s:?}")))
        };
        match s {
            "x" => Ok(Self::X),
            "Y" => Ok(Self::Y),
            "W" => Ok(Self::W),
            "W_tau" => Ok(Self::WTau),
            _ if s.starts_with("P0:") => Ok(Self::P0Tau(sized(&s[3..])?)),
            _ if s.starts_with("P:") => Ok(Self::PTau(sized(&s[2..])?)),
            _ => Err(Error::InvalidInput(format!("unknown generator kind {s:?}"))),
        }
    }
}

/// Bidegree `(t-degree, y-degree)` of a generator's image in the
/// `Pic = Z × Z` grading of the tangent-bundle presentations.
pub fn picard_degree(kind: GeneratorKind, n: u32) -> (i64, i64) {
    let n = n as i64;
    match kind {
        GeneratorKind::X => (-1, 0),
        GeneratorKind::Y => (1, 1),
        GeneratorKind::W | GeneratorKind::WTau => (n + 1, n),
        GeneratorKind::PTau(k) => (k as i64, k as i64),
        GeneratorKind::P0Tau(k) => (k as i64 + 1, k as i64 + 1),
    }
}
