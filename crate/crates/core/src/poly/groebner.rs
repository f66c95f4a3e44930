//! Division and Buchberger's algorithm over the rationals.
//!
//! Polynomials are converted to a term list sorted descending in the active
//! order; subtraction of a shifted divisor is a linear merge, and terms that
//! are already irreducible are never revisited.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};
use crate::exact::Rat;

/// Resource limits for Buchberger. Exceeding one aborts with
/// [`Error::CapExceeded`]; the basis is never silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GbCaps {
    /// Largest total degree of an S-pair lcm that may be processed.
    pub max_degree: u32,
    /// Largest number of polynomials ever added to the basis.
    pub max_basis: usize,
}

impl Default for GbCaps {
    fn default() -> Self {
        Self {
            max_degree: 48,
            max_basis: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SortedPoly {
    pub terms: Vec<(Monomial, Rat)>,
}

impl SortedPoly {
    pub fn from_poly(p: &Polynomial, order: &TermOrder) -> Self {
        let mut terms: Vec<(Monomial, Rat)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Self { terms }
    }

    pub fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(nvars, self.terms.iter().cloned())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Rat {
        &self.terms[0].1
    }

    pub fn make_monic(&mut self) {
        if self.terms.is_empty() || self.lc().is_one() {
            return;
        }
        let inv = Rat::one() / self.lc();
        for t in &mut self.terms {
            t.1 *= &inv;
        }
    }
}

/// `a - c * m * b` for sorted term lists.
fn sub_mul(a: &[(Monomial, Rat)], c: &Rat, m: &Monomial, b: &[(Monomial, Rat)], order: &TermOrder) -> Vec<(Monomial, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut shifted: Option<(Monomial, Rat)> = None;
    loop {
        if shifted.is_none() && j < b.len() {
            shifted = Some((b[j].0.mul(m), -(c * &b[j].1)));
            j += 1;
        }
        match (a.get(i), shifted.as_ref()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push(shifted.take().unwrap());
            }
            (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => out.push(shifted.take().unwrap()),
                Ordering::Equal => {
                    let s = &x.1 + &y.1;
                    if !s.is_zero() {
                        out.push((x.0.clone(), s));
                    }
                    i += 1;
                    shifted = None;
                }
            },
        }
    }
    out
}

struct Divisors<'a> {
    polys: Vec<&'a SortedPoly>,
    masks: Vec<u64>,
    use_masks: bool,
}

impl<'a> Divisors<'a> {
    fn new(polys: Vec<&'a SortedPoly>, nvars: usize) -> Self {
        let masks = polys.iter().map(|p| p.lm().support_mask()).collect();
        Self {
            polys,
            masks,
            use_masks: nvars <= 64,
        }
    }

    fn candidates(&self, m: &Monomial) -> Vec<usize> {
        let mm = if self.use_masks { m.support_mask() } else { 0 };
        (0..self.polys.len())
            .filter(|&k| {
                (!self.use_masks || self.masks[k] & !mm == 0) && self.polys[k].lm().divides(m)
            })
            .collect()
    }

    fn first(&self, m: &Monomial) -> Option<usize> {
        let mm = if self.use_masks { m.support_mask() } else { 0 };
        (0..self.polys.len()).find(|&k| {
            (!self.use_masks || self.masks[k] & !mm == 0) && self.polys[k].lm().divides(m)
        })
    }
}

/// Full reduction (leading and tail terms). `choose` picks one divisor among
/// the candidate indices each time several leading terms divide.
fn reduce_with(
    f: SortedPoly,
    divs: &Divisors<'_>,
    order: &TermOrder,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> SortedPoly {
    let mut p = f.terms;
    let mut start = 0;
    while start < p.len() {
        let (lead_m, lead_c) = (&p[start].0, &p[start].1);
        let cands = divs.candidates(lead_m);
        if cands.is_empty() {
            start += 1;
            continue;
        }
        let k = if cands.len() == 1 { cands[0] } else { choose(&cands) };
        let g = divs.polys[k];
        let q = lead_m.div(g.lm());
        let c = lead_c / g.lc();
        let tail = sub_mul(&p[start..], &c, &q, &g.terms, order);
        p.truncate(start);
        p.extend(tail);
    }
    SortedPoly { terms: p }
}

fn reduce_first(f: SortedPoly, divs: &Divisors<'_>, order: &TermOrder) -> SortedPoly {
    let mut p = f.terms;
    let mut start = 0;
    while start < p.len() {
        let Some(k) = divs.first(&p[start].0) else {
            start += 1;
            continue;
        };
        let g = divs.polys[k];
        let q = p[start].0.div(g.lm());
        let c = &p[start].1 / g.lc();
        let tail = sub_mul(&p[start..], &c, &q, &g.terms, order);
        p.truncate(start);
        p.extend(tail);
    }
    SortedPoly { terms: p }
}

fn sorted_nonzero(gens: &[Polynomial], order: &TermOrder) -> Vec<SortedPoly> {
    gens.iter()
        .filter(|g| !g.is_zero())
        .map(|g| SortedPoly::from_poly(g, order))
        .collect()
}

fn check_ring(gens: &[Polynomial], nvars: usize) -> Result<()> {
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::InvalidInput("polynomials from different rings".into()));
    }
    Ok(())
}

/// Remainder of `f` on division by `g` (first divisor in list order wins).
/// No term of the result is divisible by a leading term of `g`.
pub fn normal_form(f: &Polynomial, g: &[Polynomial], order: &TermOrder) -> Result<Polynomial> {
    normal_form_by(f, g, order, &mut |c| c[0])
}

/// As [`normal_form`], with a caller-supplied divisor choice.
pub fn normal_form_by(
    f: &Polynomial,
    g: &[Polynomial],
    order: &TermOrder,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> Result<Polynomial> {
    let n = f.nvars();
    order.validate(n)?;
    check_ring(g, n)?;
    let sorted = sorted_nonzero(g, order);
    let divs = Divisors::new(sorted.iter().collect(), n);
    let r = reduce_with(SortedPoly::from_poly(f, order), &divs, order, choose);
    Ok(r.to_poly(n))
}

pub fn leading_monomial(f: &Polynomial, order: &TermOrder) -> Option<Monomial> {
    let mut best: Option<&Monomial> = None;
    for (m, _) in f.terms() {
        if best.is_none_or(|b| order.cmp(m, b) == Ordering::Greater) {
            best = Some(m);
        }
    }
    best.cloned()
}

pub fn leading_term(f: &Polynomial, order: &TermOrder) -> Option<(Monomial, Rat)> {
    leading_monomial(f, order).map(|m| {
        let c = f.coeff(&m);
        (m, c)
    })
}

fn s_poly(f: &SortedPoly, g: &SortedPoly, order: &TermOrder) -> SortedPoly {
    let l = f.lm().lcm(g.lm());
    let mf = l.div(f.lm());
    let mg = l.div(g.lm());
    let cf = Rat::one() / f.lc();
    let cg = Rat::one() / g.lc();
    let a: Vec<(Monomial, Rat)> = f
        .terms
        .iter()
        .map(|(m, c)| (m.mul(&mf), c * &cf))
        .collect();
    SortedPoly {
        terms: sub_mul(&a, &cg, &mg, &g.terms, order),
    }
}

/// True iff every S-polynomial of `gens` reduces to zero against `gens`.
pub fn is_groebner_basis(gens: &[Polynomial], order: &TermOrder) -> Result<bool> {
    let Some(first) = gens.first() else {
        return Ok(true);
    };
    let n = first.nvars();
    order.validate(n)?;
    check_ring(gens, n)?;
    let sorted = sorted_nonzero(gens, order);
    let divs = Divisors::new(sorted.iter().collect(), n);
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let s = s_poly(&sorted[i], &sorted[j], order);
            if !reduce_first(s, &divs, order).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Basis<'o> {
    order: &'o TermOrder,
    polys: Vec<SortedPoly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Basis<'_> {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let lcm = a.lm().lcm(b.lm());
        let d = lcm.degree();
        let sugar = (self.sugar[i] + d - a.lm().degree()).max(self.sugar[j] + d - b.lm().degree());
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer-Moller update for a new element `h`.
    fn update(&mut self, h: SortedPoly, sugar: u32) {
        let hi = self.polys.len();
        let hlm = h.lm().clone();
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);

        let mut c: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| self.pair(g, hi))
            .collect();
        // criterion M/F: keep a pair only if no other new pair's lcm properly divides it
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let g_lm = self.polys[p.i].lm();
            let coprime = g_lm.coprime(&hlm);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.polys[p.i].lm().coprime(&hlm))
            .collect();

        // criterion B on old pairs
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i].lm().lcm(&hlm);
            let lj = polys[p.j].lm().lcm(&hlm);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(e);

        for g in 0..hi {
            if self.active[g] && hlm.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (p, b) = (&self.pairs[k], &self.pairs[best]);
            let better = match p.sugar.cmp(&b.sugar) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => order.cmp(&p.lcm, &b.lcm) == Ordering::Less,
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Groebner basis of the ideal generated by `gens`, sorted by
/// leading monomial (largest first), every element monic.
pub fn buchberger(gens: &[Polynomial], order: &TermOrder, caps: GbCaps) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let n = first.nvars();
    order.validate(n)?;
    check_ring(gens, n)?;

    let mut basis = Basis {
        order,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };

    let mut inputs = sorted_nonzero(gens, order);
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for f in inputs {
        let h = {
            let act: Vec<&SortedPoly> = (0..basis.polys.len())
                .filter(|&k| basis.active[k])
                .map(|k| &basis.polys[k])
                .collect();
            let divs = Divisors::new(act, n);
            reduce_first(f, &divs, order)
        };
        if h.is_zero() {
            continue;
        }
        let mut h = h;
        h.make_monic();
        let s = h.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0);
        basis.update(h, s);
    }

    while let Some(p) = basis.select() {
        if p.lcm.degree() > caps.max_degree {
            return Err(Error::CapExceeded {
                what: format!("S-pair lcm degree above max_degree {}", caps.max_degree),
                degree: p.lcm.degree(),
            });
        }
        let s = s_poly(&basis.polys[p.i], &basis.polys[p.j], order);
        let h = {
            let act: Vec<&SortedPoly> = (0..basis.polys.len())
                .filter(|&k| basis.active[k])
                .map(|k| &basis.polys[k])
                .collect();
            let divs = Divisors::new(act, n);
            reduce_first(s, &divs, order)
        };
        if h.is_zero() {
            continue;
        }
        if basis.polys.len() >= caps.max_basis {
            return Err(Error::CapExceeded {
                what: format!("basis size above max_basis {}", caps.max_basis),
                degree: p.lcm.degree(),
            });
        }
        let mut h = h;
        h.make_monic();
        basis.update(h, p.sugar);
    }

    Ok(reduce_basis(
        (0..basis.polys.len())
            .filter(|&k| basis.active[k])
            .map(|k| basis.polys[k].clone())
            .collect(),
        order,
        n,
    ))
}

/// Minimalizes and interreduces a Groebner basis.
fn reduce_basis(mut g: Vec<SortedPoly>, order: &TermOrder, n: usize) -> Vec<Polynomial> {
    g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<SortedPoly> = Vec::new();
    for p in g {
        if minimal.iter().any(|q| q.lm().divides(p.lm())) {
            continue;
        }
        minimal.retain(|q| !p.lm().divides(q.lm()));
        minimal.push(p);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&SortedPoly> = (0..minimal.len())
            .filter(|&j| j != k)
            .map(|j| &minimal[j])
            .collect();
        let divs = Divisors::new(others, n);
        let mut r = reduce_first(minimal[k].clone(), &divs, order);
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    out.into_iter().map(|p| p.to_poly(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn vars(n: usize) -> Vec<Polynomial> {
        (0..n).map(|i| Polynomial::var(n, i)).collect()
    }

    #[test]
    fn division_examples() {
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let lex = TermOrder::lex(2);
        assert!(normal_form(x, std::slice::from_ref(x), &lex).unwrap().is_zero());
        let r = normal_form(&(x * x), &[x - y], &lex).unwrap();
        assert_eq!(r, y * y);
    }

    #[test]
    fn division_depends_on_path_before_completion() {
        // f = x^2 y against {xy - 1, x^2}: dividing by xy - 1 first leaves x,
        // dividing by x^2 first leaves 0
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let one = Polynomial::one(2);
        let g = vec![&(x * y) - &one, x * x];
        let lex = TermOrder::lex(2);
        let f = &(x * x) * y;
        let r0 = normal_form_by(&f, &g, &lex, &mut |c| c[0]).unwrap();
        let r1 = normal_form_by(&f, &g, &lex, &mut |c| *c.last().unwrap()).unwrap();
        assert_eq!(r0, x.clone());
        assert!(r1.is_zero());
        // after completion the ideal is <x, ...> and both reduce to 0
        let gb = buchberger(&g, &lex, GbCaps::default()).unwrap();
        assert!(normal_form(&f, &gb, &lex).unwrap().is_zero());
    }

    #[test]
    fn groebner_basis_checks() {
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let lex = TermOrder::lex(2);
        assert!(is_groebner_basis(&[x.clone(), y.clone()], &lex).unwrap());
        let one = Polynomial::one(2);
        let g = vec![&(x * y) - &one, x * x];
        assert!(!is_groebner_basis(&g, &lex).unwrap());
    }

    #[test]
    fn linear_chain_is_already_reduced() {
        let v = vars(3);
        let lex = TermOrder::lex(3);
        let g = vec![&v[0] - &v[1], &v[1] - &v[2]];
        let gb = buchberger(&g, &lex, GbCaps::default()).unwrap();
        // reduced form of {x - y, y - z} is {x - z, y - z}
        assert_eq!(gb, vec![&v[0] - &v[2], &v[1] - &v[2]]);
        assert!(is_groebner_basis(&g, &lex).unwrap());
    }

    #[test]
    fn cusp_elimination() {
        // t > a > b; a - t^2, b - t^3
        let v = vars(3);
        let (t, a, b) = (&v[0], &v[1], &v[2]);
        let lex = TermOrder::lex(3);
        let g = vec![a - &(t * t), b - &(&(t * t) * t)];
        let gb = buchberger(&g, &lex, GbCaps::default()).unwrap();
        let cusp = &(&(a * a) * a) - &(b * b);
        assert!(gb.iter().any(|p| *p == cusp || *p == -&cusp));
    }

    #[test]
    fn cap_is_reported() {
        let v = vars(2);
        let (x, y) = (&v[0], &v[1]);
        let one = Polynomial::one(2);
        // the only S-pair has lcm x^2 y^2 of degree 4
        let g = vec![&(&(x * x) * y) - &one, &(&(y * y) * x) - &one];
        let caps = GbCaps {
            max_degree: 3,
            max_basis: 100,
        };
        match buchberger(&g, &TermOrder::grevlex(2), caps) {
            Err(Error::CapExceeded { degree, .. }) => assert_eq!(degree, 4),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn gb_of_unit_ideal() {
        let v = vars(2);
        let g = vec![v[0].clone(), &v[0] - &Polynomial::constant(2, rat(2))];
        let gb = buchberger(&g, &TermOrder::grevlex(2), GbCaps::default()).unwrap();
        assert_eq!(gb, vec![Polynomial::one(2)]);
    }
}
