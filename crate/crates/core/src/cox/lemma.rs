//! The ideals `J_S` of the fibres over torus-fixed points.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::symbolic_det;
use crate::poly::{
    buchberger, is_groebner_basis, leading_monomials, monomial_dimension, GbCaps, Polynomial,
    TermOrder, VarTable,
};

/// `J_S` in the ring of the `n × (n+1)` matrix `Y{i}_{j}`, built on the
/// canonical columns `1..=|S|`.
#[derive(Debug, Clone)]
pub struct JsInstance {
    pub n: usize,
    pub set: Vec<usize>,
    /// `permutation[j]` is the canonical column of original column `j`.
    pub permutation: Vec<usize>,
    pub vars: Arc<VarTable>,
    pub generators: Vec<Polynomial>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub set: Vec<usize>,
    pub permutation: Vec<usize>,
    pub is_groebner_basis: bool,
    pub dimension: usize,
    pub expected_dimension: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.is_groebner_basis && self.dimension == self.expected_dimension
    }
}

fn y_vars(n: usize) -> Result<Arc<VarTable>> {
    let mut names = Vec::new();
    for i in 1..=n {
        for j in 0..=n {
            names.push(format!("Y{i}_{j}"));
        }
    }
    VarTable::new(names)
}

fn y_index(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * (n + 1) + j
}

/// Lex order completing each row from left to right:
/// `Y1_0 < Y1_1 < ... < Y1_n < Y2_0 < ... < Yn_n`.
pub fn row_completing_order(n: usize) -> TermOrder {
    TermOrder::Lex {
        priority: (0..n * (n + 1)).rev().collect(),
    }
}

/// Column permutation fixing 0 that sends `set` onto `1..=|set|`, keeping
/// the relative order inside and outside `set`.
pub fn canonical_column_permutation(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || s.len() != set.len() || s.iter().any(|&j| j == 0 || j > n) {
        return Err(Error::InvalidInput(format!(
            "S must be a nonempty set of distinct columns in 1..={n}"
        )));
    }
    let mut perm = vec![0; n + 1];
    let rest = (1..=n).filter(|j| !s.contains(j));
    for (new, old) in s.iter().copied().chain(rest).enumerate() {
        perm[old] = new + 1;
    }
    Ok(perm)
}

/// Row sums over `S` and all maximal minors, with `S` moved to the
/// columns `1..=|S|`.
pub fn lemma_js(n: usize, set: &[usize]) -> Result<JsInstance> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let permutation = canonical_column_permutation(n, set)?;
    let k = set.len();
    let vars = y_vars(n)?;
    let nv = vars.len();
    let y = |i, j| Polynomial::var(nv, y_index(n, i, j));
    let mut generators: Vec<Polynomial> = (1..=n)
        .map(|i| (1..=k).fold(Polynomial::zero(nv), |acc, j| &acc + &y(i, j)))
        .collect();
    for skip in 0..=n {
        let rows: Vec<Vec<Polynomial>> = (1..=n)
            .map(|i| (0..=n).filter(|&c| c != skip).map(|c| y(i, c)).collect())
            .collect();
        generators.push(symbolic_det(&rows)?);
    }
    Ok(JsInstance {
        n,
        set: set.to_vec(),
        permutation,
        vars,
        generators,
    })
}

/// Checks the Groebner property under [`row_completing_order`] and that the
/// zero set of the initial ideal has dimension `n² - 1`.
pub fn verify_lemma(n: usize, set: &[usize]) -> Result<LemmaReport> {
    let inst = lemma_js(n, set)?;
    let order = row_completing_order(n);
    let gb = is_groebner_basis(&inst.generators, &order)?;
    let lead = leading_monomials(&inst.generators, &order);
    Ok(LemmaReport {
        n,
        set: inst.set,
        permutation: inst.permutation,
        is_groebner_basis: gb,
        dimension: monomial_dimension(&lead, inst.vars.len()),
        expected_dimension: n * n - 1,
    })
}

/// Dimension of the zero set of the maximal minors of the `n × (n+1)` matrix.
pub fn minors_dimension(n: usize, caps: GbCaps) -> Result<usize> {
    let inst = lemma_js(n, &[1])?;
    let minors = &inst.generators[n..];
    let order = TermOrder::grevlex(inst.vars.len());
    let gb = buchberger(minors, &order, caps)?;
    Ok(monomial_dimension(&leading_monomials(&gb, &order), inst.vars.len()))
}
