use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::Monomial;
use crate::error::{Error, Result};
use crate::exact::Rat;

/// Ordered list of variable names; fixed when the ring is created.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || n.chars().next().is_some_and(|c| c.is_ascii_digit())
            {
                return Err(Error::InvalidInput(format!("bad variable name {n:?}")));
            }
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate variable {n:?}")));
            }
        }
        Ok(Arc::new(Self { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name`, failing with a readable error.
    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name:?}")))
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        Ok(Polynomial::var(self.len(), self.require(name)?))
    }
}

/// Polynomial with exact rational coefficients. Terms live in a map keyed by
/// exponent vector, so iteration order is canonical and independent of any
/// term order; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// Sum of the terms of minimal `w`-weight.
    pub fn weight_initial(&self, w: &[i64]) -> Self {
        let Some(min) = self.terms.keys().map(|m| m.weight(w)).min() else {
            return self.clone();
        };
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(w) == min)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides out the leading coefficient in the canonical (map) order, giving
    /// a representative that is independent of scaling.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&(Rat::one() / c)),
            None => self.clone(),
        }
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one ring.
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target_nvars), p.clone()])
            .collect();
        let mut out = Self::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending
    /// variable `i` to `map[i]`.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        out
    }

    /// Inverse of [`rename`](Self::rename) for polynomials whose support lies
    /// in `keep`; returns `None` if another variable occurs.
    pub fn restrict(&self, keep: &[usize]) -> Option<Self> {
        let mut pos = vec![usize::MAX; self.nvars];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let mut out = Self::zero(keep.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; keep.len()];
            for i in m.support() {
                if pos[i] == usize::MAX {
                    return None;
                }
                e[pos[i]] = m.exp(i);
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Some(out)
    }

    /// Cancels `t_j u_j` pairs, treating each `u_j` as the inverse of `t_j`.
    pub fn laurent_cancel(&self, pairs: &[(usize, usize)]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            for &(t, u) in pairs {
                let k = e[t].min(e[u]);
                e[t] -= k;
                e[u] -= k;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        out
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{m:?}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn arithmetic_basics() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d;
        let expect = &(&x * &x) - &(&y * &y);
        assert_eq!(p, expect);
        assert!((&p - &expect).is_zero());
        assert_eq!(s.pow(2).len(), 3);
    }

    #[test]
    fn weight_initial_picks_minimal_weight() {
        // det-like term has weight 0, x*W has weight 1
        let a = Polynomial::var(3, 0);
        let b = Polynomial::var(3, 1);
        let w = Polynomial::var(3, 2);
        let f = &(&a * &b) - &(&a * &w);
        let init = f.weight_initial(&[0, 0, 1]);
        assert_eq!(init, &a * &b);
        let single = a.weight_initial(&[5, 0, 0]);
        assert_eq!(single, a);
    }

    #[test]
    fn substitute_and_laurent() {
        // x -> t*u (= 1), y -> t
        let t = Polynomial::var(2, 0);
        let u = Polynomial::var(2, 1);
        let f = &Polynomial::var(2, 0) * &Polynomial::var(2, 1);
        let img = f.substitute(&[&t * &u, t.clone()], 2);
        let cancelled = img.laurent_cancel(&[(0, 1)]);
        assert_eq!(cancelled, t);
        let c = Polynomial::constant(2, rat(3));
        assert_eq!(c.substitute(&[t.clone(), u], 2), Polynomial::constant(2, rat(3)));
    }

    #[test]
    fn rename_restrict_roundtrip() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let f = &(&x * &y) + &x;
        let g = f.rename(&[3, 1], 5);
        assert_eq!(g.support_vars(), vec![1, 3]);
        assert_eq!(g.restrict(&[3, 1]).unwrap(), f);
        assert!(g.restrict(&[3]).is_none());
    }

    #[test]
    fn var_table_rejects_duplicates_and_bad_names() {
        assert!(VarTable::new(["x", "x"]).is_err());
        assert!(VarTable::new(["1x"]).is_err());
        assert!(VarTable::new(["a+b"]).is_err());
        let t = VarTable::new(["x0", "Y1_0"]).unwrap();
        assert_eq!(t.index("Y1_0"), Some(1));
    }
}
