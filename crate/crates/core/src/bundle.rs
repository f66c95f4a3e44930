//! Toric vector bundles given by a linear-ideal matrix `M` and a diagram `D`.
//!
//! Rays and matroid elements are numbered from 1 in every set passed to or
//! returned from this module.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cox::subsets;
use crate::error::{Error, Result};
use crate::exact::{rat, rational_rank, IntMatrix, RatMatrix};

/// Exhaustive checks enumerate subsets of rays; this keeps them at desk scale.
pub const MAX_RAYS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleData {
    n: usize,
    s: usize,
    d: usize,
    m: RatMatrix,
    diagram: IntMatrix,
}

impl BundleData {
    pub fn new(m: RatMatrix, diagram: IntMatrix) -> Result<Self> {
        let (d, s, n) = (m.rows(), m.cols(), diagram.rows());
        if d == 0 || n == 0 {
            return Err(Error::InvalidInput("M and D need at least one row".into()));
        }
        if diagram.cols() != s {
            return Err(Error::InvalidInput(format!(
                "D has {} columns but M has {s}",
                diagram.cols()
            )));
        }
        if s <= d {
            return Err(Error::InvalidInput(format!("need s > d, got s = {s}, d = {d}")));
        }
        if s > 64 {
            return Err(Error::InvalidInput("at most 64 matroid elements are supported".into()));
        }
        let rank = rational_rank(&m);
        if rank != d {
            return Err(Error::InvalidInput(format!(
                "M has {d} rows but rank {rank}"
            )));
        }
        Ok(Self { n, s, d, m, diagram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Bundle rank `s - d`.
    pub fn rank(&self) -> usize {
        self.s - self.d
    }

    pub fn m(&self) -> &RatMatrix {
        &self.m
    }

    pub fn diagram(&self) -> &IntMatrix {
        &self.diagram
    }

    fn argmin_mask(&self, row: usize) -> u64 {
        let r = self.diagram.row(row);
        let min = r.iter().min().expect("s > 0");
        r.iter()
            .enumerate()
            .filter(|(_, v)| *v == min)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    fn check_set(&self, a: &[usize]) -> Result<()> {
        if a.is_empty() {
            return Err(Error::InvalidInput("ray set must be nonempty".into()));
        }
        if let Some(i) = a.iter().find(|&&i| i == 0 || i > self.n) {
            return Err(Error::InvalidInput(format!("ray {i} out of range 1..={}", self.n)));
        }
        Ok(())
    }

    fn rank_of_mask(&self, mask: u64) -> usize {
        let cols: Vec<usize> = (0..self.s).filter(|j| mask & (1 << j) != 0).collect();
        if cols.is_empty() {
            0
        } else {
            rational_rank(&self.m.select_columns(&cols))
        }
    }
}

/// Columns attaining the row minimum of `D` for every ray in `a`.
pub fn common_minimal_columns(b: &BundleData, a: &[usize]) -> Result<Vec<usize>> {
    b.check_set(a)?;
    let mask = a.iter().fold(u64::MAX, |acc, &i| acc & b.argmin_mask(i - 1));
    Ok((0..b.s).filter(|j| mask & (1 << j) != 0).map(|j| j + 1).collect())
}

/// `m_A`: rank of `M` restricted to the common minimal columns.
pub fn restricted_rank(b: &BundleData, a: &[usize]) -> Result<usize> {
    let cols: Vec<usize> = common_minimal_columns(b, a)?.iter().map(|j| j - 1).collect();
    Ok(if cols.is_empty() {
        0
    } else {
        rational_rank(&b.m.select_columns(&cols))
    })
}

/// `m_{{i}}` for every ray and `(|A|, m_A, max_{i∈A} m_{{i}}, A)` for every
/// `A` with `|A| ≥ 2`.
struct RankTable {
    singles: Vec<usize>,
    sets: Vec<(usize, usize, usize, u32)>,
}

fn rank_table(b: &BundleData) -> Result<RankTable> {
    if b.n > MAX_RAYS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_RAYS} rays are supported by the exhaustive check"
        )));
    }
    let masks: Vec<u64> = (0..b.n).map(|i| b.argmin_mask(i)).collect();
    let mut cache: HashMap<u64, usize> = HashMap::new();
    let mut rank = |mask: u64| *cache.entry(mask).or_insert_with(|| b.rank_of_mask(mask));
    let singles: Vec<usize> = masks.iter().map(|&m| rank(m)).collect();
    let mut sets = Vec::new();
    for a in 1u32..(1 << b.n) {
        if a.count_ones() < 2 {
            continue;
        }
        let members = (0..b.n).filter(|i| a & (1 << i) != 0);
        let mask = members.clone().fold(u64::MAX, |acc, i| acc & masks[i]);
        let top = members.map(|i| singles[i]).max().expect("nonempty");
        sets.push((a.count_ones() as usize, rank(mask), top, a));
    }
    Ok(RankTable { singles, sets })
}

fn ci_from_table(t: &RankTable, l: usize) -> bool {
    t.sets
        .iter()
        .all(|&(size, m_a, top, _)| 1 + l * top < size + l * m_a)
}

/// `1 + ℓ m_{{i}} < |A| + ℓ m_A` for all `i ∈ A ⊆ [n]` with `|A| ≥ 2`.
pub fn is_complete_intersection(b: &BundleData, l: usize) -> Result<bool> {
    if l == 0 {
        return Err(Error::InvalidInput("ℓ must be at least 1".into()));
    }
    Ok(ci_from_table(&rank_table(b)?, l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stability::Finite(l) => write!(f, "{l}"),
            Stability::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub a: Vec<usize>,
    pub m_i: usize,
    pub m_a: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub iterative: Stability,
    pub closed_form: Stability,
    pub witness: Option<Witness>,
}

impl StabilityReport {
    pub fn agree(&self) -> bool {
        self.iterative == self.closed_form
    }
}

/// Largest `ℓ` keeping the complete-intersection property, by incrementing
/// `ℓ` and by the closed form `min ⌈(|A|-1)/(m_{{i}}-m_A)⌉ - 1`.
pub fn ci_stability(b: &BundleData) -> Result<StabilityReport> {
    let t = rank_table(b)?;
    if !ci_from_table(&t, 1) {
        return Err(Error::Precondition("bundle is not a complete intersection".into()));
    }
    // every finite value is below n - 1, so surviving ℓ = n means no bound
    let mut l = 1;
    while l < b.n && ci_from_table(&t, l + 1) {
        l += 1;
    }
    let iterative = if ci_from_table(&t, b.n.max(1)) {
        Stability::Infinite
    } else {
        Stability::Finite(l)
    };
    let mut best: Option<(usize, Witness)> = None;
    for &(size, m_a, top, a) in &t.sets {
        if top <= m_a {
            continue;
        }
        let value = (size - 1).div_ceil(top - m_a) - 1;
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            let members: Vec<usize> = (0..b.n).filter(|i| a & (1 << i) != 0).collect();
            let i = *members.iter().find(|&&i| t.singles[i] == top).expect("max attained");
            best = Some((
                value,
                Witness {
                    i: i + 1,
                    a: members.iter().map(|i| i + 1).collect(),
                    m_i: top,
                    m_a,
                },
            ));
        }
    }
    let (closed_form, witness) = match best {
        Some((v, w)) => (Stability::Finite(v), Some(w)),
        None => (Stability::Infinite, None),
    };
    Ok(StabilityReport {
        iterative,
        closed_form,
        witness,
    })
}

/// `⌈(s-1)/(s-r)⌉ - 1`, the largest `ℓ` with `ℓ (s - r) < s - 1`.
pub fn uniform_sparse_stability(r: usize, s: usize) -> Result<usize> {
    if r == 0 || r >= s {
        return Err(Error::InvalidInput(format!("need 1 ≤ r < s, got r = {r}, s = {s}")));
    }
    Ok((s - 1).div_ceil(s - r) - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BundleClass {
    pub sparse: bool,
    pub uniform: bool,
    pub hypersurface: bool,
    pub rank: usize,
}

pub fn classify(b: &BundleData) -> BundleClass {
    let sparse = (0..b.n).all(|i| b.diagram.row(i).iter().filter(|v| !v.is_zero()).count() <= 1);
    let cols: Vec<usize> = (0..b.s).collect();
    let uniform = subsets(&cols, b.d)
        .iter()
        .all(|c| rational_rank(&b.m.select_columns(c)) == b.d);
    BundleClass {
        sparse,
        uniform,
        hypersurface: b.d == 1,
        rank: b.rank(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleKind {
    /// Tangent bundle of `P^n`.
    Tangent(usize),
    /// Diagonal diagram with positive entries.
    Kaneyama(Vec<i64>),
    /// `n` rays, `(ray, column, value)` nonzero entries, Vandermonde `M`.
    UniformSparse {
        d: usize,
        s: usize,
        n: usize,
        entries: Vec<(usize, usize, i64)>,
    },
}

fn int_matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Result<IntMatrix> {
    let entries = (0..rows * cols).map(|k| BigInt::from(f(k / cols, k % cols))).collect();
    IntMatrix::new(rows, cols, entries)
}

/// `d × s` matrix with rows `(j^k)_{j = 1..s}`, `k = 0..d-1`.
pub fn vandermonde(d: usize, s: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(d, s);
    for k in 0..d {
        for j in 0..s {
            m.set(k, j, rat((j as i64 + 1).pow(k as u32)));
        }
    }
    m
}

pub fn make_bundle(kind: &BundleKind) -> Result<BundleData> {
    match kind {
        BundleKind::Tangent(n) => make_bundle(&BundleKind::Kaneyama(vec![1; n + 1])),
        BundleKind::Kaneyama(a) => {
            if a.len() < 2 {
                return Err(Error::InvalidInput("Kaneyama data needs at least two entries".into()));
            }
            if let Some(v) = a.iter().find(|&&v| v <= 0) {
                return Err(Error::InvalidInput(format!("Kaneyama entry {v} is not positive")));
            }
            let k = a.len();
            let m = RatMatrix::from_rows(&[vec![rat(1); k]])?;
            BundleData::new(m, int_matrix(k, k, |i, j| if i == j { a[i] } else { 0 })?)
        }
        BundleKind::UniformSparse { d, s, n, entries } => {
            let mut rows = vec![vec![0i64; *s]; *n];
            for &(i, j, v) in entries {
                if i == 0 || i > *n || j == 0 || j > *s {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) out of range")));
                }
                if v == 0 {
                    continue;
                }
                if rows[i - 1].iter().any(|&x| x != 0) {
                    return Err(Error::InvalidInput(format!("row {i} has two nonzero entries")));
                }
                rows[i - 1][j - 1] = v;
            }
            BundleData::new(vandermonde(*d, *s), int_matrix(*n, *s, |i, j| rows[i][j])?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionRow {
    pub r: usize,
    pub s: usize,
    pub stability: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionTable {
    pub r_max: usize,
    pub s_max: usize,
    pub rows: Vec<RegionRow>,
    /// Values of `ℓ` whose boundary line `ℓ (s - r) = s - 1` is drawn.
    pub boundaries: Vec<usize>,
}

/// Uniform-sparse stability for `1 ≤ r ≤ r_max`, `r < s ≤ s_max`.
pub fn region_table(r_max: usize, s_max: usize) -> Result<RegionTable> {
    if r_max < 2 || r_max >= s_max {
        return Err(Error::InvalidInput("need 2 ≤ r_max < s_max".into()));
    }
    let mut rows = Vec::new();
    for s in 2..=s_max {
        for r in 1..s.min(r_max + 1) {
            rows.push(RegionRow {
                r,
                s,
                stability: uniform_sparse_stability(r, s)?,
            });
        }
    }
    let top = rows.iter().map(|r| r.stability).max().unwrap_or(0);
    Ok(RegionTable {
        r_max,
        s_max,
        rows,
        boundaries: (1..=top + 1).collect(),
    })
}

impl RegionTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,s,stability\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{}", row.r, row.s, row.stability);
        }
        out
    }

    /// Scatter of `(r, s)` shaded by stability, with the boundary lines.
    pub fn to_svg(&self) -> String {
        let scale = 40.0;
        let margin = 40.0;
        let w = margin * 2.0 + scale * self.r_max as f64;
        let h = margin * 2.0 + scale * self.s_max as f64;
        let x = |r: f64| margin + scale * r;
        let y = |s: f64| h - margin - scale * s;
        let top = self.boundaries.len().max(1) as f64;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            x(0.0), y(0.0), x(self.r_max as f64), y(0.0)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            x(0.0), y(0.0), x(0.0), y(self.s_max as f64)
        );
        for &l in &self.boundaries {
            // ℓ (s - r) = s - 1  ⇔  r = s - (s - 1)/ℓ
            let pts: Vec<String> = (1..=self.s_max)
                .map(|s| {
                    let s = s as f64;
                    format!("{:.1},{:.1}", x(s - (s - 1.0) / l as f64), y(s))
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"><title>l = {l}</title></polyline>"#,
                pts.join(" ")
            );
        }
        for row in &self.rows {
            let shade = 230.0 - 200.0 * row.stability as f64 / top;
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="6" fill="rgb({shade:.0},{shade:.0},255)" stroke="black"><title>r={} s={} stability={}</title></circle>"#,
                x(row.r as f64), y(row.s as f64), row.r, row.s, row.stability
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// The bundle of the worked example with a `1 × 6` all-ones `M`.
pub fn example_three_rays() -> BundleData {
    let d = [[4, 0, 0, 1, 3, 2], [0, 4, 0, 2, 1, 3], [0, 0, 4, 3, 2, 1]];
    let m = RatMatrix::from_rows(&[vec![rat(1); 6]]).expect("rectangular");
    let diagram = int_matrix(3, 6, |i, j| d[i][j]).expect("rectangular");
    BundleData::new(m, diagram).expect("valid example")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: evaluates the inequality for every `i ∈ A` directly.
    fn ci_oracle(b: &BundleData, l: usize) -> bool {
        let rays: Vec<usize> = (1..=b.n()).collect();
        (2..=b.n()).all(|k| {
            subsets(&rays, k).iter().all(|a| {
                let m_a = restricted_rank(b, a).unwrap();
                a.iter()
                    .all(|&i| 1 + l * restricted_rank(b, &[i]).unwrap() < a.len() + l * m_a)
            })
        })
    }

    #[test]
    fn worked_example() {
        let b = example_three_rays();
        assert_eq!(common_minimal_columns(&b, &[1]).unwrap(), vec![2, 3]);
        assert!(common_minimal_columns(&b, &[1, 2, 3]).unwrap().is_empty());
        assert_eq!(restricted_rank(&b, &[1, 2]).unwrap(), 1);
        assert_eq!(restricted_rank(&b, &[1, 2, 3]).unwrap(), 0);
        assert!(is_complete_intersection(&b, 1).unwrap());
        assert!(!is_complete_intersection(&b, 2).unwrap());
        let st = ci_stability(&b).unwrap();
        assert_eq!(st.iterative, Stability::Finite(1));
        assert!(st.agree());
        assert_eq!(st.witness.unwrap().a, vec![1, 2, 3]);
        let c = classify(&b);
        assert!(c.uniform && c.hypersurface && !c.sparse);
    }

    #[test]
    fn tangent_bundles() {
        let t2 = make_bundle(&BundleKind::Tangent(2)).unwrap();
        assert_eq!(common_minimal_columns(&t2, &[1]).unwrap(), vec![2, 3]);
        assert_eq!(restricted_rank(&t2, &[1]).unwrap(), 1);
        assert!(is_complete_intersection(&t2, 1).unwrap());
        assert_eq!(t2, make_bundle(&BundleKind::Kaneyama(vec![1, 1, 1])).unwrap());
        for n in 2..=7 {
            let b = make_bundle(&BundleKind::Tangent(n)).unwrap();
            let c = classify(&b);
            assert!(c.sparse && c.uniform && c.hypersurface);
            assert_eq!(c.rank, n);
            let st = ci_stability(&b).unwrap();
            assert_eq!(st.iterative, Stability::Finite(n - 1));
            assert_eq!(st.closed_form, Stability::Finite(n - 1));
        }
    }

    #[test]
    fn stability_formula_examples() {
        assert_eq!(uniform_sparse_stability(4, 6).unwrap(), 2);
        assert_eq!(uniform_sparse_stability(2, 4).unwrap(), 1);
        for r in 1..10 {
            assert_eq!(uniform_sparse_stability(r, r + 1).unwrap(), r - 1);
        }
        assert!(uniform_sparse_stability(3, 3).is_err());
        let b = make_bundle(&BundleKind::UniformSparse {
            d: 2,
            s: 6,
            n: 6,
            entries: (1..=6).map(|i| (i, i, 1)).collect(),
        })
        .unwrap();
        let c = classify(&b);
        assert!(c.sparse && c.uniform);
        assert_eq!(ci_stability(&b).unwrap().closed_form, Stability::Finite(2));
        let b24 = make_bundle(&BundleKind::UniformSparse {
            d: 2,
            s: 4,
            n: 4,
            entries: (1..=4).map(|i| (i, i, 1)).collect(),
        })
        .unwrap();
        assert_eq!(ci_stability(&b24).unwrap().iterative, Stability::Finite(1));
    }

    #[test]
    fn invalid_inputs() {
        assert!(make_bundle(&BundleKind::Kaneyama(vec![1, 0, 2])).is_err());
        assert!(make_bundle(&BundleKind::UniformSparse {
            d: 1,
            s: 3,
            n: 1,
            entries: vec![(1, 1, 1), (1, 2, 1)],
        })
        .is_err());
        let m = RatMatrix::from_i64_rows(&[vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        let d = int_matrix(1, 3, |_, _| 0).unwrap();
        assert!(BundleData::new(m, d).is_err());
        let b = example_three_rays();
        assert!(is_complete_intersection(&b, 0).is_err());
        assert!(common_minimal_columns(&b, &[]).is_err());
        assert!(common_minimal_columns(&b, &[4]).is_err());
        let zero_row = make_bundle(&BundleKind::UniformSparse { d: 1, s: 3, n: 2, entries: vec![(1, 2, 5)] }).unwrap();
        assert!(classify(&zero_row).sparse);
    }

    #[test]
    fn region_rows() {
        let t = region_table(6, 8).unwrap();
        let has = |r, s, l| t.rows.contains(&RegionRow { r, s, stability: l });
        assert!(has(4, 6, 2));
        assert!(has(6, 8, 3));
        for r in 1..=6 {
            assert!(has(r, r + 1, r - 1));
        }
        assert!(t.to_csv().starts_with("r,s,stability\n1,2,0\n"));
        assert!(t.to_svg().contains("<circle"));
        assert!(region_table(1, 4).is_err());
    }

    fn small_bundle() -> impl Strategy<Value = BundleData> {
        (1usize..=3, 1usize..=6).prop_flat_map(|(d, n)| {
            let s = d + 1..=d + 4;
            s.prop_flat_map(move |s| {
                (
                    proptest::collection::vec(proptest::collection::vec(-3i64..4, s), d),
                    proptest::collection::vec(proptest::collection::vec(0i64..3, s), n),
                )
            })
            .prop_filter_map("full rank", move |(m, dg)| {
                let s = dg[0].len();
                let m = RatMatrix::from_i64_rows(&m).ok()?;
                let dg = int_matrix(dg.len(), s, |i, j| dg[i][j]).ok()?;
                BundleData::new(m, dg).ok()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ranks_shrink_with_larger_sets(b in small_bundle()) {
            let rays: Vec<usize> = (1..=b.n()).collect();
            for k in 1..=b.n() {
                for a in subsets(&rays, k) {
                    let ca = common_minimal_columns(&b, &a).unwrap();
                    let m_a = restricted_rank(&b, &a).unwrap();
                    for k2 in 1..=a.len() {
                        for sub in subsets(&a, k2) {
                            let cb = common_minimal_columns(&b, &sub).unwrap();
                            prop_assert!(ca.iter().all(|j| cb.contains(j)));
                            prop_assert!(m_a <= restricted_rank(&b, &sub).unwrap());
                        }
                    }
                }
            }
        }

        #[test]
        fn criterion_matches_oracle_and_is_monotone(b in small_bundle()) {
            let mut prev = true;
            for l in 1..=6 {
                let ci = is_complete_intersection(&b, l).unwrap();
                prop_assert_eq!(ci, ci_oracle(&b, l));
                prop_assert!(prev || !ci);
                prev = ci;
            }
            if is_complete_intersection(&b, 1).unwrap() {
                prop_assert!(ci_stability(&b).unwrap().agree());
            }
        }

        #[test]
        fn sparse_uniform_stability_formula(
            d in 1usize..=3,
            extra in 1usize..=5,
            seed in any::<u64>(),
        ) {
            let s = (d + extra).min(8);
            prop_assume!(s > d);
            // one positive entry per row, in a permutation of the columns
            let mut cols: Vec<usize> = (1..=s).collect();
            let mut x = seed;
            for i in (1..cols.len()).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                cols.swap(i, (x >> 33) as usize % (i + 1));
            }
            let entries = cols.iter().enumerate().map(|(i, &c)| (i + 1, c, 1 + ((seed >> i) % 5) as i64)).collect();
            let b = make_bundle(&BundleKind::UniformSparse { d, s, n: s, entries }).unwrap();
            let expect = uniform_sparse_stability(s - d, s).unwrap();
            if expect == 0 {
                prop_assert!(!is_complete_intersection(&b, 1).unwrap());
            } else {
                let st = ci_stability(&b).unwrap();
                prop_assert_eq!(st.iterative, Stability::Finite(expect));
                prop_assert!(st.agree());
            }
        }
    }
}
