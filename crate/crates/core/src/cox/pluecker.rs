//! Plücker quadrics of `Gr(2, N)` and signed-bijection matching.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::tangent_cox_ideal;
use crate::error::Result;
use crate::exact::{rat, Rat};
use crate::poly::text::parse_polynomial_list;
use crate::poly::{ideal_equal, GbCaps, Ideal, Monomial, Polynomial, TermOrder, VarTable};
use num_traits::Zero;

/// Coordinates `p{i}{j}` (`1 ≤ i < j ≤ N`) and the three-term quadrics
/// `p_ij p_kl - p_ik p_jl + p_il p_jk` for `i < j < k < l`.
pub fn pluecker_quadrics(big_n: usize) -> Result<(Arc<VarTable>, Vec<Polynomial>)> {
    let mut names = Vec::new();
    let mut index = HashMap::new();
    for i in 1..=big_n {
        for j in i + 1..=big_n {
            index.insert((i, j), names.len());
            names.push(format!("p{i}{j}"));
        }
    }
    let vars = VarTable::new(names)?;
    let nv = vars.len();
    let p = |i: usize, j: usize| Polynomial::var(nv, index[&(i, j)]);
    let mut quadrics = Vec::new();
    for i in 1..=big_n {
        for j in i + 1..=big_n {
            for k in j + 1..=big_n {
                for l in k + 1..=big_n {
                    let q = &(&(&p(i, j) * &p(k, l)) - &(&p(i, k) * &p(j, l))) + &(&p(i, l) * &p(j, k));
                    quadrics.push(q);
                }
            }
        }
    }
    Ok((vars, quadrics))
}

/// Linear span of polynomials, kept in reduced row echelon form.
struct Span {
    rows: Vec<(Monomial, Polynomial)>,
}

impl Span {
    fn new(gens: &[Polynomial]) -> Self {
        let mut s = Span { rows: Vec::new() };
        for g in gens {
            s.insert(g);
        }
        s
    }

    fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut r = p.clone();
        for (pivot, row) in &self.rows {
            let c = r.coeff(pivot);
            if !c.is_zero() {
                r = &r - &row.scale(&c);
            }
        }
        r
    }

    fn insert(&mut self, p: &Polynomial) {
        let r = self.reduce(p);
        let Some((pivot, c)) = r.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return;
        };
        let row = r.scale(&(Rat::from_integer(1.into()) / c));
        for (_, other) in &mut self.rows {
            let k = other.coeff(&pivot);
            if !k.is_zero() {
                *other = &*other - &row.scale(&k);
            }
        }
        self.rows.push((pivot, row));
    }

    fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

/// True if `p` lies in the linear span of `gens`.
pub fn span_contains(gens: &[Polynomial], p: &Polynomial) -> bool {
    Span::new(gens).contains(p)
}

/// Variable `i` of the source goes to `signs[i] * target variable map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedBijection {
    pub map: Vec<usize>,
    pub signs: Vec<i64>,
}

impl SignedBijection {
    pub fn apply(&self, p: &Polynomial, target_nvars: usize) -> Polynomial {
        let images: Vec<Polynomial> = self
            .map
            .iter()
            .zip(&self.signs)
            .map(|(&t, &s)| Polynomial::var(target_nvars, t).scale(&rat(s)))
            .collect();
        p.substitute(&images, target_nvars)
    }
}

struct Search<'a> {
    source: &'a [Polynomial],
    target_support: HashSet<Monomial>,
    span: Span,
    nvars: usize,
    order: Vec<usize>,
    profile_src: Vec<Vec<u32>>,
    profile_tgt: Vec<Vec<u32>>,
}

/// Per-variable multiset of exponents over all generator terms; a bijection
/// can only pair variables with equal profiles.
fn profiles(gens: &[Polynomial], nvars: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); nvars];
    for g in gens {
        for (m, _) in g.terms() {
            for v in m.support() {
                out[v].push(m.exp(v));
            }
        }
    }
    for p in &mut out {
        p.sort_unstable();
    }
    out
}

impl Search<'_> {
    fn monomials_ok(&self, map: &[Option<usize>]) -> bool {
        for g in self.source {
            for (m, _) in g.terms() {
                let mut img = vec![0u32; self.nvars];
                let mut complete = true;
                for v in m.support() {
                    match map[v] {
                        Some(t) => img[t] = m.exp(v),
                        None => complete = false,
                    }
                }
                if complete && !self.target_support.contains(&Monomial::from_exponents(img)) {
                    return false;
                }
            }
        }
        true
    }

    fn bijections(&self, depth: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.nvars {
            let full: Vec<usize> = map.iter().map(|t| t.expect("complete")).collect();
            return out(&full);
        }
        let v = self.order[depth];
        for t in 0..self.nvars {
            if used[t] || self.profile_src[v] != self.profile_tgt[t] {
                continue;
            }
            map[v] = Some(t);
            used[t] = true;
            if self.monomials_ok(map) && self.bijections(depth + 1, map, used, out) {
                return true;
            }
            map[v] = None;
            used[t] = false;
        }
        false
    }

    /// Backtracks over signs in variable order; each generator is checked as
    /// soon as all its variables carry a sign.
    fn signs(&self, map: &[usize], depth: usize, signs: &mut Vec<i64>, ready: &[Vec<usize>]) -> bool {
        if depth == self.nvars {
            return true;
        }
        let v = self.order[depth];
        for s in [1, -1] {
            signs[v] = s;
            let b = SignedBijection {
                map: map.to_vec(),
                signs: signs.clone(),
            };
            let ok = ready[depth]
                .iter()
                .all(|&g| self.span.contains(&b.apply(&self.source[g], self.nvars)));
            if ok && self.signs(map, depth + 1, signs, ready) {
                return true;
            }
        }
        false
    }
}

/// Searches a signed variable bijection sending every source generator into
/// the span of the target generators. With `fixed`, only signs are searched.
/// Both ideals must live in rings with the same number of variables and be
/// generated in a single degree for the span test to decide ideal equality.
pub fn find_signed_bijection(
    source: &[Polynomial],
    target: &[Polynomial],
    nvars: usize,
    fixed: Option<&[usize]>,
) -> Option<SignedBijection> {
    // variables in order of first appearance so constraints bite early
    let mut order = Vec::new();
    for g in source {
        for (m, _) in g.terms() {
            for v in m.support() {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
    }
    let missing: Vec<usize> = (0..nvars).filter(|v| !order.contains(v)).collect();
    order.extend(missing);
    let search = Search {
        source,
        target_support: target.iter().flat_map(|g| g.terms().map(|(m, _)| m.clone())).collect(),
        span: Span::new(target),
        nvars,
        order,
        profile_src: profiles(source, nvars),
        profile_tgt: profiles(target, nvars),
    };
    // generators become checkable at the depth where their last variable is placed
    let mut ready = vec![Vec::new(); nvars];
    for (gi, g) in source.iter().enumerate() {
        let last = g
            .support_vars()
            .iter()
            .map(|v| search.order.iter().position(|o| o == v).expect("ordered"))
            .max()
            .unwrap_or(0);
        ready[last].push(gi);
    }
    let mut found = None;
    let mut try_map = |map: &[usize]| {
        let mut signs = vec![1; nvars];
        if search.signs(map, 0, &mut signs, &ready) {
            found = Some(SignedBijection {
                map: map.to_vec(),
                signs,
            });
            true
        } else {
            false
        }
    };
    match fixed {
        Some(map) => {
            try_map(map);
        }
        None => {
            let mut map = vec![None; nvars];
            let mut used = vec![false; nvars];
            search.bijections(0, &mut map, &mut used, &mut try_map);
        }
    }
    found
}

#[derive(Debug, Clone, Serialize)]
pub struct PlueckerMatch {
    pub found: bool,
    /// `(source variable, sign, Plücker coordinate)`.
    pub substitution: Vec<(String, i64, String)>,
    pub ideal_equal: bool,
}

/// Matches the `n = m = 2` presentation with the `Gr(2,5)` Plücker ideal.
pub fn pluecker_match(caps: GbCaps) -> Result<PlueckerMatch> {
    let spec = tangent_cox_ideal(2, 2)?;
    let (pvars, quadrics) = pluecker_quadrics(5)?;
    let nv = pvars.len();
    let Some(b) = find_signed_bijection(&spec.generators, &quadrics, nv, None) else {
        return Ok(PlueckerMatch {
            found: false,
            substitution: vec![],
            ideal_equal: false,
        });
    };
    let image: Vec<Polynomial> = spec.generators.iter().map(|g| b.apply(g, nv)).collect();
    let equal = ideal_equal(
        &Ideal::new(nv, image)?,
        &Ideal::new(nv, quadrics)?,
        &TermOrder::grevlex(nv),
        caps,
    )?;
    let substitution = (0..nv)
        .map(|v| {
            (
                spec.ring.vars.name(v).to_string(),
                b.signs[v],
                pvars.name(b.map[v]).to_string(),
            )
        })
        .collect();
    Ok(PlueckerMatch {
        found: true,
        substitution,
        ideal_equal: equal,
    })
}

/// The printed five generators with 1-based indices, `Y` for the first
/// row and `Z` for the second.
pub const PRINTED_I22: &str = "\
Y3*Z2 - Y2*Z3 - x1*W
Y3*Z1 - Y1*Z3 + x2*W
Y2*Z1 - Y1*Z2 - x3*W
x1*Z1 + x2*Z2 + x3*Z3
x1*Y1 + x2*Y2 + x3*Y3
";

/// The printed generators rewritten into the ring of
/// [`tangent_cox_ideal`]`(2, 2)`.
pub fn printed_i22() -> Result<Vec<Polynomial>> {
    let printed = VarTable::new(["x1", "x2", "x3", "Y1", "Y2", "Y3", "Z1", "Z2", "Z3", "W"])?;
    let gens = parse_polynomial_list(PRINTED_I22, &printed)?;
    let spec = tangent_cox_ideal(2, 2)?;
    let ring = &spec.ring;
    let mut rename = Vec::new();
    for k in 0..3 {
        rename.push(ring.x(k));
    }
    for i in 1..=2 {
        for k in 0..3 {
            rename.push(ring.y(i, k));
        }
    }
    rename.push(ring.w(0));
    Ok(gens.iter().map(|g| g.rename(&rename, ring.nvars())).collect())
}

/// Sign-only search (identity on variable names) between the printed
/// generators and ours, confirmed by ideal equality.
pub fn match_printed_i22(caps: GbCaps) -> Result<Option<SignedBijection>> {
    let printed = printed_i22()?;
    let spec = tangent_cox_ideal(2, 2)?;
    let nv = spec.ring.nvars();
    let identity: Vec<usize> = (0..nv).collect();
    let Some(b) = find_signed_bijection(&printed, &spec.generators, nv, Some(&identity)) else {
        return Ok(None);
    };
    let image: Vec<Polynomial> = printed.iter().map(|g| b.apply(g, nv)).collect();
    let equal = ideal_equal(&Ideal::new(nv, image)?, &spec.ideal(), &TermOrder::grevlex(nv), caps)?;
    Ok(equal.then_some(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::symbolic_det;

    #[test]
    fn gr24_quadric_vanishes_on_minors() {
        let (vars, q) = pluecker_quadrics(4).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(vars.len(), 6);
        // p_ij -> 2x2 minors of a generic 2x4 matrix a_{r c}
        let a = |r: usize, c: usize| Polynomial::var(8, r * 4 + c);
        let mut images = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                images.push(symbolic_det(&[vec![a(0, i), a(0, j)], vec![a(1, i), a(1, j)]]).unwrap());
            }
        }
        assert!(q[0].substitute(&images, 8).is_zero());
        assert_eq!(pluecker_quadrics(5).unwrap().1.len(), 5);
    }

    #[test]
    fn identity_matches_itself() {
        let (vars, q) = pluecker_quadrics(5).unwrap();
        let id: Vec<usize> = (0..vars.len()).collect();
        let b = find_signed_bijection(&q, &q, vars.len(), Some(&id)).unwrap();
        assert_eq!(b.signs, vec![1; 10]);
    }

    #[test]
    fn span_membership() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let gens = [&x + &y, &x - &y];
        assert!(span_contains(&gens, &x));
        assert!(!span_contains(&gens[..1], &x));
    }

    #[test]
    fn no_bijection_between_different_supports() {
        let (_, q) = pluecker_quadrics(5).unwrap();
        let v: Vec<Polynomial> = (0..10).map(|i| Polynomial::var(10, i)).collect();
        let squares = [&v[0] * &v[0]];
        assert!(find_signed_bijection(&squares, &q, 10, None).is_none());
    }

    #[test]
    fn printed_generators_match_up_to_sign() {
        assert!(match_printed_i22(GbCaps::default()).unwrap().is_some());
        // flipping W alone is one valid choice
        let spec = tangent_cox_ideal(2, 2).unwrap();
        let nv = spec.ring.nvars();
        let w = spec.ring.w(0);
        let b = SignedBijection {
            map: (0..nv).collect(),
            signs: (0..nv).map(|v| if v == w { -1 } else { 1 }).collect(),
        };
        for g in printed_i22().unwrap() {
            assert!(span_contains(&spec.generators, &b.apply(&g, nv)));
        }
    }
}
