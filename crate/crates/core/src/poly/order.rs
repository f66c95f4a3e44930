use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;
use crate::error::{Error, Result};

/// Monomial order on a ring with a fixed number of variables.
///
/// `priority` lists variable indices from the largest to the smallest. A
/// weight order compares the weight vectors in sequence and falls back to
/// `tie` on equality; without a tie-break it is only a preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TermOrder {
    Lex {
        priority: Vec<usize>,
    },
    Grevlex {
        priority: Vec<usize>,
    },
    Weight {
        weights: Vec<Vec<i64>>,
        tie: Option<Box<TermOrder>>,
    },
}

impl TermOrder {
    /// Lex with `x_0 > x_1 > ...`.
    pub fn lex(nvars: usize) -> Self {
        TermOrder::Lex {
            priority: (0..nvars).collect(),
        }
    }

    /// Grevlex with `x_0 > x_1 > ...`.
    pub fn grevlex(nvars: usize) -> Self {
        TermOrder::Grevlex {
            priority: (0..nvars).collect(),
        }
    }

    pub fn weighted(weights: Vec<Vec<i64>>, tie: TermOrder) -> Self {
        TermOrder::Weight {
            weights,
            tie: Some(Box::new(tie)),
        }
    }

    /// Block order that first compares total degree in `drop`, then grevlex.
    /// Every element of a Groebner basis whose leading term avoids `drop`
    /// lies in the subring without `drop`.
    pub fn elimination(nvars: usize, drop: &[usize]) -> Self {
        let mut w = vec![0i64; nvars];
        for &d in drop {
            w[d] = 1;
        }
        Self::weighted(vec![w], Self::grevlex(nvars))
    }

    pub fn is_total(&self) -> bool {
        match self {
            TermOrder::Lex { .. } | TermOrder::Grevlex { .. } => true,
            TermOrder::Weight { tie, .. } => tie.as_ref().is_some_and(|t| t.is_total()),
        }
    }

    /// Checks totality, arity and that every variable is larger than 1, so the
    /// order is a well-ordering usable by division and Buchberger.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        if !self.is_total() {
            return Err(Error::PartialOrder);
        }
        self.check_arity(nvars)?;
        for v in 0..nvars {
            let m = Monomial::var(nvars, v);
            if self.cmp(&m, &Monomial::one(nvars)) != Ordering::Greater {
                return Err(Error::NonGlobalOrder(format!(
                    "variable {v} is not larger than 1"
                )));
            }
        }
        Ok(())
    }

    fn check_arity(&self, nvars: usize) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("term order {what} arity")));
        match self {
            TermOrder::Lex { priority } | TermOrder::Grevlex { priority } => {
                let mut seen = vec![false; nvars];
                if priority.len() != nvars {
                    return bad("priority");
                }
                for &p in priority {
                    if p >= nvars || seen[p] {
                        return bad("priority");
                    }
                    seen[p] = true;
                }
                Ok(())
            }
            TermOrder::Weight { weights, tie } => {
                if weights.iter().any(|w| w.len() != nvars) {
                    return bad("weight");
                }
                match tie {
                    Some(t) => t.check_arity(nvars),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex { priority } => {
                for &i in priority {
                    match a.exp(i).cmp(&b.exp(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            TermOrder::Grevlex { priority } => match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {
                    for &i in priority.iter().rev() {
                        match a.exp(i).cmp(&b.exp(i)) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
            TermOrder::Weight { weights, tie } => {
                for w in weights {
                    match a.weight(w).cmp(&b.weight(w)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                match tie {
                    Some(t) => t.cmp(a, b),
                    None => Ordering::Equal,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn lex_and_grevlex_classic_examples() {
        let lex = TermOrder::lex(3);
        assert_eq!(lex.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        let grevlex = TermOrder::grevlex(3);
        // x*z^2 < y^3 under grevlex with x > y > z
        assert_eq!(grevlex.cmp(&m(&[1, 0, 2]), &m(&[0, 3, 0])), Ordering::Less);
        // x^2 y z... degree dominates
        assert_eq!(grevlex.cmp(&m(&[0, 0, 3]), &m(&[1, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn permuted_priority() {
        let o = TermOrder::Lex {
            priority: vec![2, 1, 0],
        };
        assert_eq!(o.cmp(&m(&[5, 0, 0]), &m(&[0, 0, 1])), Ordering::Less);
    }

    #[test]
    fn partial_weight_order_is_rejected() {
        let o = TermOrder::Weight {
            weights: vec![vec![1, 1]],
            tie: None,
        };
        assert!(!o.is_total());
        assert_eq!(o.validate(2), Err(Error::PartialOrder));
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Equal);
    }

    #[test]
    fn negative_leading_weight_is_not_global() {
        let o = TermOrder::weighted(vec![vec![-1, 1]], TermOrder::grevlex(2));
        assert!(matches!(o.validate(2), Err(Error::NonGlobalOrder(_))));
        let ok = TermOrder::weighted(vec![vec![1, 2], vec![0, -1]], TermOrder::grevlex(2));
        assert!(ok.validate(2).is_ok());
    }

    #[test]
    fn elimination_order_prefers_dropped_variables() {
        let o = TermOrder::elimination(3, &[0]);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 4, 4])), Ordering::Greater);
        assert!(o.validate(3).is_ok());
    }
}
