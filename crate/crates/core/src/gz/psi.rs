use std::collections::HashMap;
use std::sync::Arc;

use super::{lead_marker, ExtendedPattern, GZPattern, MarkedGenerator};
use crate::cox::subsets;
use crate::error::{Error, Result};
use crate::exact::{rat, symbolic_det};
use crate::poly::{
    leading_monomial, GbCaps, Ideal, Monomial, Polynomial, RingMap, TermOrder, VarTable,
};

/// Source variables of `Ψ`: `x_a`, `P_τ` and `P_{0,τ}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PsiVar {
    X(usize),
    P(Vec<usize>),
    P0(Vec<usize>),
}

impl PsiVar {
    pub fn name(&self) -> String {
        let tail = |s: &[usize]| s.iter().map(|j| format!("_{j}")).collect::<String>();
        match self {
            PsiVar::X(a) => format!("x{a}"),
            PsiVar::P(s) => format!("P{}", tail(s)),
            PsiVar::P0(s) => format!("P0{}", tail(s)),
        }
    }

    pub fn marked(&self, n: usize) -> Result<MarkedGenerator> {
        Ok(match self {
            PsiVar::X(a) => MarkedGenerator::NegVar(*a),
            PsiVar::P(s) => MarkedGenerator::flag(s.clone(), 0),
            PsiVar::P0(s) => {
                let (l, star) = lead_marker(s, n)?;
                MarkedGenerator::flag(star, l)
            }
        })
    }

    pub fn from_marked(g: &MarkedGenerator) -> Self {
        match g {
            MarkedGenerator::NegVar(a) => PsiVar::X(*a),
            MarkedGenerator::Flag { set, mark: 0 } => PsiVar::P(set.clone()),
            MarkedGenerator::Flag { set, mark } => {
                PsiVar::P0(set.iter().copied().filter(|j| j != mark).collect())
            }
        }
    }
}

/// `Ψ` together with the bookkeeping of its source variables.
#[derive(Debug, Clone)]
pub struct PsiMap {
    pub n: usize,
    pub vars: Vec<PsiVar>,
    index: HashMap<PsiVar, usize>,
    pub map: RingMap,
}

impl PsiMap {
    pub fn source(&self) -> &Arc<VarTable> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<VarTable> {
        self.map.target()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, v: &PsiVar) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn var(&self, v: &PsiVar) -> Result<Polynomial> {
        let i = self
            .index_of(v)
            .ok_or_else(|| Error::InvalidInput(format!("{} is not a generator", v.name())))?;
        Ok(Polynomial::var(self.nvars(), i))
    }

    /// The flag minor on the ordered columns `cols ⊆ {0..n}`: zero for a
    /// repeated column, otherwise `±P` after sorting.
    pub fn minor(&self, cols: &[usize]) -> Result<Polynomial> {
        let mut sorted = cols.to_vec();
        let mut sign = 1;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(Polynomial::zero(self.nvars()));
        }
        let v = if sorted.first() == Some(&0) {
            PsiVar::P0(sorted[1..].to_vec())
        } else {
            PsiVar::P(sorted)
        };
        Ok(self.var(&v)?.scale(&rat(sign)))
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.map.apply(f)
    }
}

fn target_vars(n: usize) -> Result<Arc<VarTable>> {
    let mut names: Vec<String> = (0..=n).map(|j| format!("t{j}")).collect();
    names.extend((0..=n).map(|j| format!("u{j}")));
    for i in 1..n {
        for j in 1..=n {
            names.push(format!("y{i}_{j}"));
        }
    }
    VarTable::new(names)
}

/// Lex with `t`, `u` first and then `y` row by row, earlier columns larger.
/// Every minor on leading rows has its diagonal as initial term.
pub fn diagonal_order(n: usize) -> TermOrder {
    TermOrder::lex(2 * (n + 1) + (n - 1) * n)
}

struct Target {
    n: usize,
    nv: usize,
}

impl Target {
    fn t(&self, j: usize) -> Polynomial {
        Polynomial::var(self.nv, j)
    }

    fn u(&self, j: usize) -> Polynomial {
        Polynomial::var(self.nv, self.n + 1 + j)
    }

    /// Minor of `y` on rows `1..=|cols|` and the sorted columns `cols ⊆ [n]`.
    fn y_minor(&self, cols: &[usize]) -> Result<Polynomial> {
        let rows: Vec<Vec<Polynomial>> = (1..=cols.len())
            .map(|i| {
                cols.iter()
                    .map(|&j| Polynomial::var(self.nv, 2 * (self.n + 1) + (i - 1) * self.n + (j - 1)))
                    .collect()
            })
            .collect();
        symbolic_det(&rows)
    }

    fn t_power(&self, set: &[usize]) -> Polynomial {
        set.iter().fold(Polynomial::one(self.nv), |acc, &j| &acc * &self.t(j))
    }
}

fn insert_sorted(set: &[usize], j: usize) -> Vec<usize> {
    let mut s = set.to_vec();
    s.push(j);
    s.sort_unstable();
    s
}

/// Sign of sorting `[j, τ...]`.
fn insertion_sign(j: usize, tau: &[usize]) -> i64 {
    if tau.iter().filter(|&&k| k < j).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Brute-force `c ∈ {±1}^k` with `Σ c_i parts_i + rest = 0`.
fn solve_signs(parts: &[Polynomial], rest: &Polynomial) -> Option<Vec<i64>> {
    (0u32..1 << parts.len()).find_map(|bits| {
        let signs: Vec<i64> = (0..parts.len())
            .map(|i| if bits & (1 << i) == 0 { 1 } else { -1 })
            .collect();
        let total = parts
            .iter()
            .zip(&signs)
            .fold(rest.clone(), |acc, (p, &s)| &acc + &p.scale(&rat(s)));
        total.is_zero().then_some(signs)
    })
}

/// `Ψ(x_j) = t_j^{-1}`, `Ψ(P_τ) = det y(τ) t^τ` and
/// `Ψ(P_{0,τ}) = t_0 t^τ Σ_{j ∉ τ} c_j det y(τ ∪ j)` with the signs `c_j`
/// solved so that `x_0 P_{0,τ} + Σ_{j ∉ τ} ± x_j P_{τ ∪ j}` maps to zero.
pub fn build_psi(n: usize) -> Result<PsiMap> {
    if n < 2 {
        return Err(Error::InvalidInput("Ψ needs n ≥ 2".into()));
    }
    let all: Vec<usize> = (1..=n).collect();
    let mut vars: Vec<PsiVar> = (0..=n).map(PsiVar::X).collect();
    for k in 1..n {
        vars.extend(subsets(&all, k).into_iter().map(PsiVar::P));
    }
    for k in 0..n - 1 {
        vars.extend(subsets(&all, k).into_iter().map(PsiVar::P0));
    }
    let index: HashMap<PsiVar, usize> = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let source = VarTable::new(vars.iter().map(PsiVar::name))?;
    let target = target_vars(n)?;
    let tg = Target { n, nv: target.len() };
    let mut images = Vec::with_capacity(vars.len());
    for v in &vars {
        let img = match v {
            PsiVar::X(a) => tg.u(*a),
            PsiVar::P(s) => &tg.y_minor(s)? * &tg.t_power(s),
            PsiVar::P0(s) => {
                let outside: Vec<usize> = all.iter().copied().filter(|j| !s.contains(j)).collect();
                let common = &tg.t(0) * &tg.t_power(s);
                let parts = outside
                    .iter()
                    .map(|&j| tg.y_minor(&insert_sorted(s, j)))
                    .collect::<Result<Vec<_>>>()?;
                // Ψ of Σ_{j ∉ τ} ±x_j P_{τ∪j}, divided by t^τ
                let rest = outside.iter().zip(&parts).fold(Polynomial::zero(tg.nv), |acc, (&j, d)| {
                    &acc + &d.scale(&rat(insertion_sign(j, s)))
                });
                let signs = solve_signs(&parts, &rest).ok_or_else(|| {
                    Error::Precondition(format!("no sign choice makes the relation for {} vanish", v.name()))
                })?;
                let sum = parts
                    .iter()
                    .zip(&signs)
                    .fold(Polynomial::zero(tg.nv), |acc, (p, &c)| &acc + &p.scale(&rat(c)));
                &sum * &common
            }
        };
        images.push(img);
    }
    let pairs = (0..=n).map(|j| (j, n + 1 + j)).collect();
    Ok(PsiMap {
        n,
        vars,
        index,
        map: RingMap::new(source, target, images, pairs)?,
    })
}

/// `Ψ` with the sign of one image flipped.
pub fn build_psi_perturbed(n: usize, flip: &str) -> Result<PsiMap> {
    let mut psi = build_psi(n)?;
    let i = psi.source().require(flip)?;
    let img = -psi.map.image_of_var(i);
    psi.map = psi.map.clone().with_image(i, img);
    Ok(psi)
}

/// Reads an extended pattern off a monomial in `t`, `u`, `y`:
/// `zvec_j = deg_{t_j} - deg_{u_j}` and `g_{i,j} = Σ_{c ≤ n+1-i} deg y_{j,c}`.
pub fn pattern_of_monomial(m: &Monomial, n: usize) -> ExtendedPattern {
    let zvec = (0..=n)
        .map(|j| i64::from(m.exp(j)) - i64::from(m.exp(n + 1 + j)))
        .collect();
    let y = |r: usize, c: usize| i64::from(m.exp(2 * (n + 1) + (r - 1) * n + (c - 1)));
    let rows = (1..=n)
        .map(|i| {
            (1..=n + 1 - i)
                .map(|j| if j < n { (1..=n + 1 - i).map(|c| y(j, c)).sum() } else { 0 })
                .collect()
        })
        .collect();
    ExtendedPattern {
        pattern: GZPattern::new(rows).expect("row lengths match"),
        zvec,
    }
}

/// Extended pattern of the initial term of `Ψ(v)`.
pub fn lead_pattern_of_image(psi: &PsiMap, v: &PsiVar) -> Result<ExtendedPattern> {
    let img = psi.apply(&psi.var(v)?);
    let lead = leading_monomial(&img, &diagonal_order(psi.n))
        .ok_or_else(|| Error::Precondition(format!("Ψ({}) is zero", v.name())))?;
    Ok(pattern_of_monomial(&lead, psi.n))
}

/// The `j` whose summand `det y(τ ∪ j)` carries the initial term of
/// `Ψ(P_{0,τ})`.
pub fn initial_summand_marker(psi: &PsiMap, tau: &[usize]) -> Result<usize> {
    let n = psi.n;
    let order = diagonal_order(n);
    let img = psi.apply(&psi.var(&PsiVar::P0(tau.to_vec()))?);
    let lead = leading_monomial(&img, &order)
        .ok_or_else(|| Error::Precondition("Ψ(P_0τ) is zero".into()))?;
    let tg = Target { n, nv: psi.target().len() };
    let common = &tg.t(0) * &tg.t_power(tau);
    (1..=n)
        .filter(|j| !tau.contains(j))
        .find(|&j| {
            let part = &tg.y_minor(&insert_sorted(tau, j)).expect("small minor") * &common;
            leading_monomial(&part, &order).as_ref() == Some(&lead)
        })
        .ok_or_else(|| Error::Precondition("initial term matches no summand".into()))
}

/// Generalized Euler relations `Σ_{j ∉ α} x_j [j α]` for `α ⊆ {0..n}`,
/// `|α| ≤ n - 2`, followed by the flag Plücker relations
/// `Σ_k (-1)^k [I j_k][J ∖ j_k]` for `|I| = p - 1`, `|J| = q + 1`,
/// `1 ≤ p ≤ q ≤ n - 1`. Zero and repeated relations are dropped.
pub fn relation_families(psi: &PsiMap) -> Result<Vec<Polynomial>> {
    let n = psi.n;
    let nv = psi.nvars();
    let cols: Vec<usize> = (0..=n).collect();
    let mut out: Vec<Polynomial> = Vec::new();
    let mut push = |p: Polynomial| {
        if p.is_zero() {
            return;
        }
        let p = p.normalized();
        if !out.contains(&p) {
            out.push(p);
        }
    };
    for k in 0..=n - 2 {
        for alpha in subsets(&cols, k) {
            let mut rel = Polynomial::zero(nv);
            for j in cols.iter().copied().filter(|j| !alpha.contains(j)) {
                let mut c = vec![j];
                c.extend(&alpha);
                rel = &rel + &(&psi.var(&PsiVar::X(j))? * &psi.minor(&c)?);
            }
            push(rel);
        }
    }
    for p in 1..n {
        for q in p..n {
            for i_set in subsets(&cols, p - 1) {
                for j_set in subsets(&cols, q + 1) {
                    let mut rel = Polynomial::zero(nv);
                    for (k, &jk) in j_set.iter().enumerate() {
                        let mut left = i_set.clone();
                        left.push(jk);
                        let right: Vec<usize> = j_set.iter().copied().filter(|&x| x != jk).collect();
                        let term = &psi.minor(&left)? * &psi.minor(&right)?;
                        rel = if k % 2 == 0 { &rel - &term } else { &rel + &term };
                    }
                    push(rel);
                }
            }
        }
    }
    Ok(out)
}

/// `ker Ψ` by elimination.
pub fn kernel_of_psi(psi: &PsiMap, caps: GbCaps) -> Result<Ideal> {
    psi.map.kernel(caps)
}
