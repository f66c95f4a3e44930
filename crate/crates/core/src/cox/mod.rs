//! Presentations of Cox rings for twisted tangent bundles of projective space.
//!
//! Source rings use 0-based column indices throughout: `x0..xn`,
//! `Y{i}_{j}` for rows `1..=m` and columns `0..=n`, and `W` (when `m = n`) or
//! `W_{a}_{b}...` (one per `n`-subset of rows, when `m > n`). The target of
//! `Φ` has `t0..tn`, their inverses `u0..un`, and `y{i}_{j}` for columns
//! `1..=n`.

mod lemma;
mod pluecker;

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

pub use lemma::{canonical_column_permutation, lemma_js, minors_dimension, row_completing_order, verify_lemma, JsInstance, LemmaReport};
pub use pluecker::{
    find_signed_bijection, match_printed_i22, pluecker_match, pluecker_quadrics, printed_i22,
    span_contains, PlueckerMatch, SignedBijection,
};

use crate::error::{Error, Result};
use crate::exact::{rat, symbolic_det};
use crate::poly::{
    buchberger, ideal_equal, leading_monomials, monomial_dimension, GbCaps, Ideal, Polynomial,
    RingMap, TermOrder, VarTable,
};
use crate::schur::{picard_degree, GeneratorKind};

/// Index bookkeeping for the source ring `K[x_j, Y_ij, W...]`.
#[derive(Debug, Clone)]
pub struct CoxRing {
    pub n: usize,
    pub m: usize,
    pub vars: Arc<VarTable>,
    /// Row subsets indexing the `W` variables, in variable order.
    pub w_sets: Vec<Vec<usize>>,
}

impl CoxRing {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput("n and m must be at least 1".into()));
        }
        let w_sets = if m >= n { subsets(&(1..=m).collect::<Vec<_>>(), n) } else { vec![] };
        let mut names: Vec<String> = (0..=n).map(|j| format!("x{j}")).collect();
        for i in 1..=m {
            for j in 0..=n {
                names.push(format!("Y{i}_{j}"));
            }
        }
        for s in &w_sets {
            if m == n {
                names.push("W".into());
            } else {
                names.push(format!(
                    "W_{}",
                    s.iter().map(ToString::to_string).collect::<Vec<_>>().join("_")
                ));
            }
        }
        Ok(Self {
            n,
            m,
            vars: VarTable::new(names)?,
            w_sets,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn x(&self, j: usize) -> usize {
        j
    }

    pub fn y(&self, i: usize, j: usize) -> usize {
        self.n + 1 + (i - 1) * (self.n + 1) + j
    }

    pub fn w(&self, k: usize) -> usize {
        (self.n + 1) * (self.m + 1) + k
    }

    fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i)
    }

    /// `det Y(j)`: the `n × n` minor of rows `1..=n` without column `j`.
    pub fn minor(&self, j: usize) -> Result<Polynomial> {
        let rows: Vec<Vec<Polynomial>> = (1..=self.n)
            .map(|i| {
                (0..=self.n)
                    .filter(|&c| c != j)
                    .map(|c| self.var(self.y(i, c)))
                    .collect()
            })
            .collect();
        symbolic_det(&rows)
    }

    pub fn euler(&self, i: usize) -> Polynomial {
        (0..=self.n).fold(Polynomial::zero(self.nvars()), |acc, j| {
            &acc + &(&self.var(self.x(j)) * &self.var(self.y(i, j)))
        })
    }

    /// Picard bidegree of every variable.
    pub fn degrees(&self) -> Vec<(i64, i64)> {
        let n = self.n as u32;
        let mut d = vec![picard_degree(GeneratorKind::X, n); self.n + 1];
        d.extend(std::iter::repeat_n(picard_degree(GeneratorKind::Y, n), self.m * (self.n + 1)));
        let wk = if self.m == self.n { GeneratorKind::W } else { GeneratorKind::WTau };
        d.extend(std::iter::repeat_n(picard_degree(wk, n), self.w_sets.len()));
        d
    }
}

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (p, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[p + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ_j x_j Y_ij` for `i = 1..=m`.
pub fn euler_ideal(n: usize, m: usize) -> Result<(CoxRing, Ideal)> {
    let ring = CoxRing::new(n, m)?;
    let gens = (1..=m).map(|i| ring.euler(i)).collect();
    let ideal = Ideal::new(ring.nvars(), gens)?;
    Ok((ring, ideal))
}

/// Generators of a presentation together with their grading data.
#[derive(Debug, Clone)]
pub struct PresentationSpec {
    pub ring: CoxRing,
    pub generators: Vec<Polynomial>,
    pub degrees: Vec<(i64, i64)>,
}

impl PresentationSpec {
    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.ring.nvars(), self.generators.clone()).expect("generators share the ring")
    }

    /// Bidegree of `p` if it is bihomogeneous.
    pub fn bidegree(&self, p: &Polynomial) -> Option<(i64, i64)> {
        bidegree(p, &self.degrees)
    }

    pub fn check_grading(&self) -> Result<()> {
        for g in &self.generators {
            if self.bidegree(g).is_none() {
                return Err(Error::Precondition(format!(
                    "generator {} is not bihomogeneous",
                    crate::poly::text::format_polynomial(g, &self.ring.vars, &TermOrder::grevlex(self.ring.nvars()))
                )));
            }
        }
        Ok(())
    }
}

/// Common bidegree of all terms, or `None` for the zero polynomial and for
/// polynomials that mix degrees.
pub fn bidegree(p: &Polynomial, degrees: &[(i64, i64)]) -> Option<(i64, i64)> {
    let mut seen = None;
    for (m, _) in p.terms() {
        let d = m.exponents().iter().zip(degrees).fold((0, 0), |acc, (&e, &(a, b))| {
            (acc.0 + e as i64 * a, acc.1 + e as i64 * b)
        });
        match seen {
            None => seen = Some(d),
            Some(s) if s != d => return None,
            _ => {}
        }
    }
    seen
}

/// Presentation ideal for `m < n` (Euler relations) or `m = n` (Euler
/// relations and `det Y(j) - c_j x_j W`, with each sign `c_j` solved from
/// the requirement that `Φ` kills the generator).
pub fn tangent_cox_ideal(n: usize, m: usize) -> Result<PresentationSpec> {
    if m > n {
        return Err(Error::InvalidInput(format!(
            "no presentation is produced for m = {m} > n = {n}; use the map Φ_m"
        )));
    }
    let ring = CoxRing::new(n, m)?;
    let mut generators: Vec<Polynomial> = (1..=m).map(|i| ring.euler(i)).collect();
    if m == n {
        let phi = build_phi(n, m)?;
        let w = ring.var(ring.w(0));
        for j in 0..=n {
            let minor = ring.minor(j)?;
            let xw = &ring.var(ring.x(j)) * &w;
            let sign = solve_sign(&phi.apply(&minor), &phi.apply(&xw)).ok_or_else(|| {
                Error::Precondition(format!("Φ(det Y({j})) is not ±Φ(x{j} W)"))
            })?;
            generators.push(&minor - &xw.scale(&rat(sign)));
        }
    }
    let degrees = ring.degrees();
    Ok(PresentationSpec {
        ring,
        generators,
        degrees,
    })
}

/// `c ∈ {1, -1}` with `a = c b`, if any.
pub(crate) fn solve_sign(a: &Polynomial, b: &Polynomial) -> Option<i64> {
    if b.is_zero() {
        return None;
    }
    [1, -1].into_iter().find(|&c| *a == b.scale(&rat(c)))
}

/// Euler relations and all maximal minors `det Y(j)`, in the `m = n` ring
/// (the `W` variable is present but unused).
pub fn quiver_ideal(n: usize) -> Result<(CoxRing, Ideal)> {
    if n < 2 {
        return Err(Error::InvalidInput("quiver ideal needs n ≥ 2".into()));
    }
    let ring = CoxRing::new(n, n)?;
    let mut gens: Vec<Polynomial> = (1..=n).map(|i| ring.euler(i)).collect();
    for j in 0..=n {
        gens.push(ring.minor(j)?);
    }
    let ideal = Ideal::new(ring.nvars(), gens)?;
    Ok((ring, ideal))
}

/// Target ring of `Φ`: `t0..tn`, `u0..un`, `y{i}_{j}` (`i ≤ m`, `1 ≤ j ≤ n`).
pub fn phi_target(n: usize, m: usize) -> Result<Arc<VarTable>> {
    let mut names: Vec<String> = (0..=n).map(|j| format!("t{j}")).collect();
    names.extend((0..=n).map(|j| format!("u{j}")));
    for i in 1..=m {
        for j in 1..=n {
            names.push(format!("y{i}_{j}"));
        }
    }
    VarTable::new(names)
}

/// The map `Φ_m`: `x_j ↦ t_j^{-1}`, `Y_{i0} ↦ -(Σ_j y_ij) t_0`,
/// `Y_ij ↦ y_ij t_j`, `W_τ ↦ det y(0, τ) · t_0 ⋯ t_n`.
pub fn build_phi(n: usize, m: usize) -> Result<RingMap> {
    let ring = CoxRing::new(n, m)?;
    let target = phi_target(n, m)?;
    let nt = target.len();
    let t = |j: usize| Polynomial::var(nt, j);
    let u = |j: usize| Polynomial::var(nt, n + 1 + j);
    let y = |i: usize, j: usize| Polynomial::var(nt, 2 * (n + 1) + (i - 1) * n + (j - 1));
    let mut images = vec![Polynomial::zero(nt); ring.nvars()];
    for j in 0..=n {
        images[ring.x(j)] = u(j);
    }
    for i in 1..=m {
        let row_sum = (1..=n).fold(Polynomial::zero(nt), |acc, j| &acc + &y(i, j));
        images[ring.y(i, 0)] = -&(&row_sum * &t(0));
        for j in 1..=n {
            images[ring.y(i, j)] = &y(i, j) * &t(j);
        }
    }
    let all_t = (0..=n).fold(Polynomial::one(nt), |acc, j| &acc * &t(j));
    for (k, rows) in ring.w_sets.iter().enumerate() {
        let mat: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|&i| (1..=n).map(|j| y(i, j)).collect())
            .collect();
        images[ring.w(k)] = &symbolic_det(&mat)? * &all_t;
    }
    let pairs = (0..=n).map(|j| (j, n + 1 + j)).collect();
    RingMap::new(ring.vars.clone(), target, images, pairs)
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub n: usize,
    pub equal: bool,
    pub kernel_generators: usize,
    pub presentation_generators: usize,
    pub elapsed_ms: u128,
}

/// Kernel of `Φ` by elimination from the graph ideal.
pub fn phi_kernel(n: usize, caps: GbCaps) -> Result<(CoxRing, Ideal)> {
    let ring = CoxRing::new(n, n)?;
    let k = build_phi(n, n)?.kernel(caps)?;
    Ok((ring, k))
}

/// Computes `ker Φ` and compares it with the presentation ideal.
pub fn verify_kernel(n: usize, caps: GbCaps) -> Result<KernelReport> {
    let start = Instant::now();
    let (ring, kernel) = phi_kernel(n, caps)?;
    let spec = tangent_cox_ideal(n, n)?;
    let order = TermOrder::grevlex(ring.nvars());
    let equal = ideal_equal(&kernel, &spec.ideal(), &order, caps)?;
    Ok(KernelReport {
        n,
        equal,
        kernel_generators: kernel.gens().len(),
        presentation_generators: spec.generators.len(),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// The `δ` weight: 1 on `W`, 0 elsewhere.
pub fn delta_weight(ring: &CoxRing) -> Vec<i64> {
    let mut w = vec![0; ring.nvars()];
    for k in 0..ring.w_sets.len() {
        w[ring.w(k)] = 1;
    }
    w
}

/// A global order whose leading terms are the minimal-`δ` terms on ideals
/// homogeneous for the positive grading `x ↦ 1, Y ↦ 2, W ↦ 2n - 1`
/// (three times the second Picard component minus the first).
pub fn delta_order(ring: &CoxRing) -> TermOrder {
    let grading: Vec<i64> = ring.degrees().iter().map(|&(a, b)| 3 * b - a).collect();
    let neg_delta = delta_weight(ring).iter().map(|w| -w).collect();
    TermOrder::weighted(vec![grading, neg_delta], TermOrder::grevlex(ring.nvars()))
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub n: usize,
    pub equals_quiver_ideal: bool,
    pub dimension: usize,
    pub elapsed_ms: u128,
}

/// Generators of `in_δ(i)` from a Groebner basis in [`delta_order`].
pub fn delta_initial_ideal(ring: &CoxRing, i: &Ideal, caps: GbCaps) -> Result<(Ideal, Vec<Polynomial>)> {
    let order = delta_order(ring);
    let gb = buchberger(i.gens(), &order, caps)?;
    let delta = delta_weight(ring);
    let initial = gb.iter().map(|g| g.weight_initial(&delta)).collect();
    Ok((Ideal::new(ring.nvars(), initial)?, gb))
}

/// Compares `in_δ(ker Φ)` with the quiver ideal and reports the dimension
/// of its zero set.
pub fn verify_delta_initial(n: usize, caps: GbCaps) -> Result<DeltaReport> {
    let start = Instant::now();
    let (ring, kernel) = phi_kernel(n, caps)?;
    let (initial, gb) = delta_initial_ideal(&ring, &kernel, caps)?;
    let (_, quiver) = quiver_ideal(n)?;
    let order = TermOrder::grevlex(ring.nvars());
    let equal = ideal_equal(&initial, &quiver, &order, caps)?;
    let lead = leading_monomials(&gb, &delta_order(&ring));
    Ok(DeltaReport {
        n,
        equals_quiver_ideal: equal,
        dimension: monomial_dimension(&lead, ring.nvars()),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Dimension of the zero set of the Euler ideal for `m < n`, from the
/// leading monomials of a grevlex basis.
pub fn euler_dimension(n: usize, m: usize, caps: GbCaps) -> Result<(usize, usize)> {
    let (ring, ideal) = euler_ideal(n, m)?;
    let order = TermOrder::grevlex(ring.nvars());
    let gb = buchberger(ideal.gens(), &order, caps)?;
    Ok((monomial_dimension(&leading_monomials(&gb, &order), ring.nvars()), ring.nvars()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::normal_form;

    #[test]
    fn euler_generators() {
        let (ring, i) = euler_ideal(2, 1).unwrap();
        assert_eq!(i.gens().len(), 1);
        let text = crate::poly::text::format_polynomial(
            &i.gens()[0],
            &ring.vars,
            &TermOrder::lex(ring.nvars()),
        );
        assert_eq!(text, "x0*Y1_0 + x1*Y1_1 + x2*Y1_2");
        let deg = ring.degrees();
        assert_eq!(bidegree(&i.gens()[0], &deg), Some((0, 1)));
        assert_eq!(euler_ideal(4, 3).unwrap().1.gens().len(), 3);
    }

    #[test]
    fn presentation_counts_and_signs() {
        let s = tangent_cox_ideal(2, 2).unwrap();
        assert_eq!(s.generators.len(), 5);
        s.check_grading().unwrap();
        assert_eq!(tangent_cox_ideal(3, 2).unwrap().generators.len(), 2);
        assert_eq!(tangent_cox_ideal(3, 3).unwrap().generators.len(), 3 + 4);
        assert!(tangent_cox_ideal(2, 3).is_err());
        // solved signs alternate with the column
        let ring = &s.ring;
        for j in 0..=2 {
            let g = &s.generators[2 + j];
            let xw = &Polynomial::var(ring.nvars(), ring.x(j)) * &Polynomial::var(ring.nvars(), ring.w(0));
            let expect = if j % 2 == 0 { -&xw } else { xw };
            assert_eq!(g - &ring.minor(j).unwrap(), expect);
        }
    }

    #[test]
    fn phi_kills_the_presentation() {
        for n in 2..=3 {
            let phi = build_phi(n, n).unwrap();
            for g in tangent_cox_ideal(n, n).unwrap().generators {
                assert!(phi.apply(&g).is_zero());
            }
            for g in quiver_ideal(n).unwrap().1.gens().iter().take(n) {
                assert!(phi.apply(g).is_zero());
            }
        }
    }

    #[test]
    fn phi_images() {
        let phi = build_phi(2, 2).unwrap();
        let u0 = Polynomial::var(phi.target().len(), 3);
        assert_eq!(phi.image_of("x0").unwrap(), &u0);
        let ring = CoxRing::new(2, 2).unwrap();
        let minor = ring.minor(0).unwrap();
        assert!(!phi.apply(&minor).is_zero());
        // with m > n the single-row-set case reproduces W
        let phi3 = build_phi(2, 3).unwrap();
        assert_eq!(phi3.source().len(), 3 + 3 * 3 + 3);
        let o = |k| TermOrder::grevlex(k);
        let show = |m: &RingMap, v: &str| {
            crate::poly::text::format_polynomial(m.image_of(v).unwrap(), m.target(), &o(m.target().len()))
        };
        assert_eq!(show(&phi3, "W_1_2"), show(&phi, "W"));
        assert_eq!(show(&phi, "W"), "-t0*t1*t2*y1_2*y2_1 + t0*t1*t2*y1_1*y2_2");
    }

    #[test]
    fn grading_rejects_mixed_degrees() {
        let mut s = tangent_cox_ideal(2, 1).unwrap();
        let x0 = Polynomial::var(s.ring.nvars(), 0);
        s.generators.push(&s.generators[0] + &x0);
        assert!(s.check_grading().is_err());
    }

    #[test]
    fn delta_initial_forms_contain_quiver_generators() {
        let s = tangent_cox_ideal(2, 2).unwrap();
        let (_, q) = quiver_ideal(2).unwrap();
        let delta = delta_weight(&s.ring);
        let initial: Vec<Polynomial> = s.generators.iter().map(|g| g.weight_initial(&delta)).collect();
        for g in q.gens() {
            assert!(initial.contains(g));
        }
        assert!(delta_order(&s.ring).validate(s.ring.nvars()).is_ok());
    }

    #[test]
    fn euler_is_a_complete_intersection_below_n() {
        for (n, m) in [(2, 1), (3, 1), (3, 2)] {
            let (dim, nvars) = euler_dimension(n, m, GbCaps::default()).unwrap();
            assert_eq!(dim, nvars - m);
        }
    }

    #[test]
    fn kernel_membership_examples() {
        let (ring, k) = phi_kernel(2, GbCaps::default()).unwrap();
        let o = TermOrder::grevlex(ring.nvars());
        let gb = buchberger(k.gens(), &o, GbCaps::default()).unwrap();
        let s = tangent_cox_ideal(2, 2).unwrap();
        assert!(normal_form(&s.generators[2], &gb, &o).unwrap().is_zero());
        assert!(!normal_form(&ring.minor(0).unwrap(), &gb, &o).unwrap().is_zero());
    }
}
