use super::{buchberger, leading_monomial, normal_form, GbCaps, Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};

/// Ideal given by generators, with an optional reduced Groebner basis
/// attached for one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    gens: Vec<Polynomial>,
    basis: Option<(TermOrder, Vec<Polynomial>)>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(nvars: usize, gens: Vec<Polynomial>) -> Result<Self> {
        if gens.iter().any(|g| g.nvars() != nvars) {
            return Err(Error::InvalidInput("generator from a different ring".into()));
        }
        Ok(Self {
            nvars,
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: None,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced Groebner basis for `order`, reusing an attached one when the
    /// order matches.
    pub fn groebner_basis(&self, order: &TermOrder, caps: GbCaps) -> Result<Vec<Polynomial>> {
        if let Some((o, b)) = &self.basis {
            if o == order {
                return Ok(b.clone());
            }
        }
        buchberger(&self.gens, order, caps)
    }

    /// Returns the ideal with its basis for `order` attached.
    pub fn with_basis(mut self, order: &TermOrder, caps: GbCaps) -> Result<Self> {
        let b = self.groebner_basis(order, caps)?;
        self.basis = Some((order.clone(), b));
        Ok(self)
    }

    pub fn attached_basis(&self) -> Option<(&TermOrder, &[Polynomial])> {
        self.basis.as_ref().map(|(o, b)| (o, b.as_slice()))
    }

    pub fn contains(&self, f: &Polynomial, order: &TermOrder, caps: GbCaps) -> Result<bool> {
        let gb = self.groebner_basis(order, caps)?;
        Ok(normal_form(f, &gb, order)?.is_zero())
    }
}

/// `i ∩ K[vars not in drop]`, computed from a Groebner basis in an
/// elimination order. The result stays in the ambient ring.
pub fn eliminate(i: &Ideal, drop: &[usize], caps: GbCaps) -> Result<Ideal> {
    if drop.iter().any(|&d| d >= i.nvars()) {
        return Err(Error::InvalidInput("eliminated variable out of range".into()));
    }
    let order = TermOrder::elimination(i.nvars(), drop);
    let gb = buchberger(i.gens(), &order, caps)?;
    let kept = gb
        .into_iter()
        .filter(|g| g.support_vars().iter().all(|v| !drop.contains(v)))
        .collect();
    Ideal::new(i.nvars(), kept)
}

/// Mutual containment via reduced Groebner bases.
pub fn ideal_equal(i: &Ideal, j: &Ideal, order: &TermOrder, caps: GbCaps) -> Result<bool> {
    if i.nvars() != j.nvars() {
        return Err(Error::Precondition("ideals live in different rings".into()));
    }
    let gj = j.groebner_basis(order, caps)?;
    for f in i.gens() {
        if !normal_form(f, &gj, order)?.is_zero() {
            return Ok(false);
        }
    }
    let gi = i.groebner_basis(order, caps)?;
    for f in j.gens() {
        if !normal_form(f, &gi, order)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn leading_monomials(gens: &[Polynomial], order: &TermOrder) -> Vec<Monomial> {
    gens.iter()
        .filter_map(|g| leading_monomial(g, order))
        .collect()
}

/// Dimension of the zero set of a monomial ideal: the largest set of
/// variables containing the support of no generator. Computed as
/// `nvars - (minimum hitting set of the supports)` by branch and bound.
pub fn monomial_dimension(gens: &[Monomial], nvars: usize) -> usize {
    let mut supports: Vec<Vec<usize>> = gens.iter().map(|m| m.support().collect()).collect();
    if supports.iter().any(Vec::is_empty) {
        // the unit ideal has an empty zero set; report dimension 0 by convention
        return 0;
    }
    supports.sort_by_key(Vec::len);
    supports.dedup();
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in supports {
        if !minimal.iter().any(|t| t.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let mut best = nvars;
    let mut chosen = vec![false; nvars];
    hitting_set(&minimal, &mut chosen, 0, &mut best);
    nvars - best
}

fn hitting_set(sets: &[Vec<usize>], chosen: &mut [bool], size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let Some(open) = sets.iter().find(|s| s.iter().all(|&v| !chosen[v])) else {
        *best = size;
        return;
    };
    // lower bound: a greedy packing of pairwise disjoint unhit sets
    let mut used = chosen.to_vec();
    let mut disjoint = 0;
    for s in sets {
        if s.iter().all(|&v| !used[v]) {
            disjoint += 1;
            for &v in s {
                used[v] = true;
            }
        }
    }
    if size + disjoint >= *best {
        return;
    }
    for &v in open {
        chosen[v] = true;
        hitting_set(sets, chosen, size + 1, best);
        chosen[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    /// Enumerates every variable subset; independent of the branch and bound.
    fn brute_dimension(gens: &[Monomial], nvars: usize) -> usize {
        (0u32..(1 << nvars))
            .filter(|s| {
                gens.iter()
                    .all(|g| g.support().any(|v| s & (1 << v) == 0))
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(monomial_dimension(&[m(&[1, 1, 0])], 3), 2);
        assert_eq!(
            monomial_dimension(&[m(&[1, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 1])], 3),
            0
        );
        assert_eq!(monomial_dimension(&[], 4), 4);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn dimension_matches_enumeration(
            nvars in 1usize..=12,
            raw in proptest::collection::vec(proptest::collection::vec(0u32..3, 12), 0..8),
        ) {
            let gens: Vec<Monomial> = raw
                .into_iter()
                .map(|e| m(&e[..nvars]))
                .filter(|g| !g.is_one())
                .collect();
            prop_assert_eq!(monomial_dimension(&gens, nvars), brute_dimension(&gens, nvars));
        }
    }

    #[test]
    fn ideal_equality_up_to_scaling() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let two = Polynomial::constant(2, crate::exact::rat(2));
        let a = Ideal::new(2, vec![&x - &y]).unwrap();
        let b = Ideal::new(2, vec![&(&two * &x) - &(&two * &y)]).unwrap();
        let o = TermOrder::grevlex(2);
        assert!(ideal_equal(&a, &a, &o, GbCaps::default()).unwrap());
        assert!(ideal_equal(&a, &b, &o, GbCaps::default()).unwrap());
        let c = Ideal::new(2, vec![x.clone()]).unwrap();
        assert!(!ideal_equal(&a, &c, &o, GbCaps::default()).unwrap());
    }

    #[test]
    fn eliminate_cusp_and_nothing() {
        let v: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(3, i)).collect();
        let (t, a, b) = (&v[0], &v[1], &v[2]);
        let i = Ideal::new(3, vec![a - &(t * t), b - &(&(t * t) * t)]).unwrap();
        let e = eliminate(&i, &[0], GbCaps::default()).unwrap();
        let cusp = &(&(a * a) * a) - &(b * b);
        let expect = Ideal::new(3, vec![cusp]).unwrap();
        let o = TermOrder::grevlex(3);
        assert!(ideal_equal(&e, &expect, &o, GbCaps::default()).unwrap());

        let same = eliminate(&i, &[], GbCaps::default()).unwrap();
        assert!(ideal_equal(&same, &i, &o, GbCaps::default()).unwrap());
    }

    #[test]
    fn attached_basis_is_reused() {
        let x = Polynomial::var(1, 0);
        let o = TermOrder::lex(1);
        let i = Ideal::new(1, vec![&x * &x, x.clone()])
            .unwrap()
            .with_basis(&o, GbCaps::default())
            .unwrap();
        assert_eq!(i.attached_basis().unwrap().1, std::slice::from_ref(&x));
        assert!(i.contains(&(&x * &x), &o, GbCaps::default()).unwrap());
    }
}
