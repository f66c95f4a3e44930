//! Gel'fand–Zetlin patterns, marked generators and the flag-bundle map `Ψ`.

mod psi;
mod rewrite;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{buchberger, GbCaps, TermOrder};

pub use psi::{
    build_psi, build_psi_perturbed, diagonal_order, initial_summand_marker, kernel_of_psi,
    lead_pattern_of_image, pattern_of_monomial, relation_families, PsiMap, PsiVar,
};
pub use rewrite::{
    alphabet, all_words, confluence_sweep, lift_check, normal_form_word, subduct,
    ConfluenceReport, LiftReport, Rule, Step, Subduction, Trace,
};

/// Rows `g_{i,·}` with `n + 1 - i` entries each, `i = 1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GZPattern {
    rows: Vec<Vec<i64>>,
}

impl GZPattern {
    pub fn zero(n: usize) -> Self {
        Self {
            rows: (1..=n).map(|i| vec![0; n + 1 - i]).collect(),
        }
    }

    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n - i {
                return Err(Error::InvalidInput(format!(
                    "row {} must have {} entries",
                    i + 1,
                    n - i
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `g_{i,j} ≥ g_{i+1,j} ≥ g_{i,j+1}` wherever the entries exist.
    pub fn interlaces(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (upper, lower) = (&w[0], &w[1]);
            lower
                .iter()
                .enumerate()
                .all(|(j, &l)| upper[j] >= l && l >= upper[j + 1])
        })
    }

    /// Interlacing with `g_{1,n} = 0`.
    pub fn in_gz_plus(&self) -> bool {
        self.interlaces() && self.rows.first().and_then(|r| r.last()).is_none_or(|&g| g == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// A pattern together with a vector in `Z^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtendedPattern {
    pub pattern: GZPattern,
    pub zvec: Vec<i64>,
}

impl ExtendedPattern {
    pub fn zero(n: usize) -> Self {
        Self {
            pattern: GZPattern::zero(n),
            zvec: vec![0; n + 1],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            pattern: self.pattern.add(&other.pattern),
            zvec: self.zvec.iter().zip(&other.zvec).map(|(a, b)| a + b).collect(),
        }
    }
}

fn check_strict(tau: &[usize], n: usize) -> Result<()> {
    if tau.is_empty() || tau.len() >= n || tau.iter().any(|&j| j == 0 || j > n) {
        return Err(Error::InvalidInput(format!(
            "{} is not a strict nonempty subset of 1..={n}",
            format_set(tau)
        )));
    }
    if tau.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("subset must be strictly increasing".into()));
    }
    Ok(())
}

/// `|τ ∩ [m]|`.
pub fn count_upto(tau: &[usize], m: usize) -> usize {
    tau.iter().filter(|&&j| j <= m).count()
}

/// Row `i` holds `|τ ∩ [n-i+1]|` ones followed by zeros.
pub fn generator_pattern(tau: &[usize], n: usize) -> Result<GZPattern> {
    check_strict(tau, n)?;
    let rows = (1..=n)
        .map(|i| {
            let len = n + 1 - i;
            let ones = count_upto(tau, len);
            (0..len).map(|j| i64::from(j < ones)).collect()
        })
        .collect();
    GZPattern::new(rows)
}

/// `ℓ = min([n] ∖ τ)` and `τ* = τ ∪ {ℓ}`.
pub fn lead_marker(tau: &[usize], n: usize) -> Result<(usize, Vec<usize>)> {
    let l = (1..=n)
        .find(|j| !tau.contains(j))
        .ok_or_else(|| Error::InvalidInput("τ = [n] has no lead marker".into()))?;
    let mut star = tau.to_vec();
    star.push(l);
    star.sort_unstable();
    Ok((l, star))
}

/// Letters of words: `[-a]` or `[τ, a]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MarkedGenerator {
    NegVar(usize),
    Flag { set: Vec<usize>, mark: usize },
}

impl MarkedGenerator {
    pub fn flag(set: Vec<usize>, mark: usize) -> Self {
        MarkedGenerator::Flag { set, mark }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            MarkedGenerator::NegVar(a) if *a <= n => Ok(()),
            MarkedGenerator::NegVar(a) => {
                Err(Error::InvalidInput(format!("[-{a}] is out of range for n = {n}")))
            }
            MarkedGenerator::Flag { set, mark } => {
                check_strict(set, n)?;
                if *mark != 0 && count_upto(set, *mark) != *mark {
                    return Err(Error::InvalidInput(format!(
                        "mark {mark} needs 1..={mark} inside {}",
                        format_set(set)
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn extended_pattern(&self, n: usize) -> Result<ExtendedPattern> {
        self.validate(n)?;
        let mut e = ExtendedPattern::zero(n);
        match self {
            MarkedGenerator::NegVar(a) => e.zvec[*a] = -1,
            MarkedGenerator::Flag { set, mark } => {
                e.pattern = generator_pattern(set, n)?;
                for &j in set {
                    e.zvec[j] += 1;
                }
                if *mark != 0 {
                    e.zvec[0] += 1;
                    e.zvec[*mark] -= 1;
                }
            }
        }
        Ok(e)
    }
}

pub(crate) fn format_set(set: &[usize]) -> String {
    let inner: Vec<String> = set.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for MarkedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkedGenerator::NegVar(a) => write!(f, "[-{a}]"),
            MarkedGenerator::Flag { set, mark } => write!(f, "[{},{mark}]", format_set(set)),
        }
    }
}

/// A multiset of letters, kept sorted.
pub type Word = Vec<MarkedGenerator>;

pub fn word_pattern(word: &[MarkedGenerator], n: usize) -> Result<ExtendedPattern> {
    word.iter().try_fold(ExtendedPattern::zero(n), |acc, g| {
        Ok(acc.add(&g.extended_pattern(n)?))
    })
}

pub fn format_word(word: &[MarkedGenerator]) -> String {
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Parses letters like `[-2],[{1,3},0]` (the commas between letters are
/// optional); the empty string is the empty word.
pub fn parse_word(text: &str, n: usize) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut word = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Result<usize> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        text[start..*pos]
            .parse()
            .map_err(|_| Error::parse_at(text, start, "expected a number"))
    };
    let expect = |pos: &mut usize, c: u8| -> Result<()> {
        skip_ws(pos);
        if bytes.get(*pos) == Some(&c) {
            *pos += 1;
            Ok(())
        } else {
            Err(Error::parse_at(text, *pos, format!("expected '{}'", c as char)))
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Ok(word);
    }
    loop {
        let start = pos;
        expect(&mut pos, b'[')?;
        skip_ws(&mut pos);
        let letter = if bytes.get(pos) == Some(&b'-') {
            pos += 1;
            skip_ws(&mut pos);
            MarkedGenerator::NegVar(number(&mut pos)?)
        } else {
            expect(&mut pos, b'{')?;
            let mut set = Vec::new();
            skip_ws(&mut pos);
            if bytes.get(pos) != Some(&b'}') {
                loop {
                    skip_ws(&mut pos);
                    set.push(number(&mut pos)?);
                    skip_ws(&mut pos);
                    if bytes.get(pos) == Some(&b',') {
                        pos += 1;
                    } else {
                        break;
                    }
                }
            }
            expect(&mut pos, b'}')?;
            expect(&mut pos, b',')?;
            skip_ws(&mut pos);
            let mark = number(&mut pos)?;
            set.sort_unstable();
            MarkedGenerator::flag(set, mark)
        };
        expect(&mut pos, b']')?;
        letter
            .validate(n)
            .map_err(|e| Error::parse_at(text, start, e.to_string()))?;
        word.push(letter);
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] == b',' {
            pos += 1;
        }
    }
    word.sort();
    Ok(word)
}

#[derive(Debug, Clone, Serialize)]
pub struct GzReport {
    pub n: usize,
    pub generator_patterns: usize,
    pub patterns_valid: bool,
    pub relations: usize,
    pub relations_vanish: bool,
    pub lead_patterns_match: bool,
    pub initial_markers_match: bool,
    pub confluence: ConfluenceReport,
    /// Only computed at `n = 2`, where `ker Ψ` is found by elimination.
    pub lift: Option<LiftReport>,
}

impl GzReport {
    pub fn passed(&self) -> bool {
        self.patterns_valid
            && self.relations_vanish
            && self.lead_patterns_match
            && self.initial_markers_match
            && self.confluence.passed()
            && self.lift.as_ref().is_none_or(LiftReport::passed)
    }

    /// Name of the first failing check.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.patterns_valid, "generator patterns"),
            (self.relations_vanish, "relation vanishing"),
            (self.lead_patterns_match, "lead patterns"),
            (self.initial_markers_match, "initial-term markers"),
            (self.confluence.passed(), "confluence"),
            (self.lift.as_ref().is_none_or(LiftReport::passed), "lift"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

/// Pattern, relation, initial-term, confluence and (at `n = 2`) lift checks.
/// `flip` names a generator whose `Ψ`-image gets its sign flipped.
pub fn verify_gz(n: usize, max_len: usize, caps: GbCaps, flip: Option<&str>) -> Result<GzReport> {
    let psi = match flip {
        Some(v) => build_psi_perturbed(n, v)?,
        None => build_psi(n)?,
    };
    let mut patterns_valid = true;
    let mut generator_patterns = 0;
    let all: Vec<usize> = (1..=n).collect();
    for k in 1..n {
        for tau in crate::cox::subsets(&all, k) {
            generator_patterns += 1;
            patterns_valid &= generator_pattern(&tau, n)?.in_gz_plus();
        }
    }
    let relations = relation_families(&psi)?;
    let relations_vanish = relations.iter().all(|r| psi.apply(r).is_zero());
    let mut lead_patterns_match = true;
    let mut initial_markers_match = true;
    for v in &psi.vars {
        lead_patterns_match &= lead_pattern_of_image(&psi, v)? == v.marked(n)?.extended_pattern(n)?;
        if let PsiVar::P0(tau) = v {
            initial_markers_match &= initial_summand_marker(&psi, tau)? == lead_marker(tau, n)?.0;
        }
    }
    let (confluence, traces) = confluence_sweep(n, max_len)?;
    let lift = if n == 2 {
        let order = TermOrder::grevlex(psi.nvars());
        let kernel = kernel_of_psi(&psi, caps)?;
        let gb = buchberger(kernel.gens(), &order, caps)?;
        Some(lift_check(&psi, &traces, &relations, &gb, &order)?)
    } else {
        None
    };
    Ok(GzReport {
        n,
        generator_patterns,
        patterns_valid,
        relations: relations.len(),
        relations_vanish,
        lead_patterns_match,
        initial_markers_match,
        confluence,
        lift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_patterns() {
        let g = generator_pattern(&[1], 2).unwrap();
        assert_eq!(g.rows(), &[vec![1, 0], vec![1]]);
        let g = generator_pattern(&[1, 2], 3).unwrap();
        assert_eq!(g.rows(), &[vec![1, 1, 0], vec![1, 1], vec![1]]);
        assert!(generator_pattern(&[], 3).is_err());
        assert!(generator_pattern(&[1, 2, 3], 3).is_err());
    }

    #[test]
    fn every_generator_pattern_is_in_gz_plus() {
        for n in 2..=6 {
            for mask in 1u32..(1 << n) - 1 {
                let tau: Vec<usize> = (1..=n).filter(|j| mask & (1 << (j - 1)) != 0).collect();
                let g = generator_pattern(&tau, n).unwrap();
                assert!(g.in_gz_plus(), "{tau:?}");
            }
        }
    }

    #[test]
    fn interlacing_violation() {
        let g = GZPattern::new(vec![vec![1, 0], vec![2]]).unwrap();
        assert!(!g.interlaces());
        let g = GZPattern::new(vec![vec![1, 1], vec![1]]).unwrap();
        assert!(g.interlaces() && !g.in_gz_plus());
        assert!(GZPattern::new(vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn lead_markers() {
        assert_eq!(lead_marker(&[2, 3], 4).unwrap(), (1, vec![1, 2, 3]));
        assert_eq!(lead_marker(&[], 3).unwrap().0, 1);
        assert_eq!(lead_marker(&[1], 3).unwrap().0, 2);
        assert!(lead_marker(&[1, 2], 2).is_err());
    }

    #[test]
    fn marked_patterns() {
        let f = MarkedGenerator::flag(vec![1, 2], 2);
        let e = f.extended_pattern(3).unwrap();
        assert_eq!(e.zvec, vec![1, 1, 0, 0]);
        assert!(MarkedGenerator::flag(vec![2, 3], 2).validate(3).is_err());
        assert!(MarkedGenerator::NegVar(4).validate(3).is_err());
        let neg = MarkedGenerator::NegVar(2).extended_pattern(3).unwrap();
        assert_eq!(neg.zvec, vec![0, 0, -1, 0]);
        assert_eq!(neg.pattern, GZPattern::zero(3));
    }

    #[test]
    fn full_check_at_n2() {
        let r = verify_gz(2, 3, GbCaps::default(), None).unwrap();
        assert!(r.passed(), "{r:?}");
        let lift = r.lift.unwrap();
        assert!(lift.binomials > 0 && lift.lifted == lift.binomials);
    }

    #[test]
    fn flipped_sign_is_caught() {
        let r = verify_gz(2, 2, GbCaps::default(), Some("P0")).unwrap();
        assert_eq!(r.first_failure(), Some("relation vanishing"));
    }

    #[test]
    fn bracket_syntax_round_trip() {
        let w = parse_word("[-2], [{3,1},0]", 3).unwrap();
        assert_eq!(format_word(&w), "[-2],[{1,3},0]");
        assert_eq!(parse_word(&format_word(&w), 3).unwrap(), w);
        assert!(parse_word("", 3).unwrap().is_empty());
        assert_eq!(parse_word("[{3,1},0][-2]", 3).unwrap(), w);
        assert!(matches!(parse_word("[-2] x", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("[{1,3},0", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("[{2},2]", 3), Err(Error::Parse { .. })));
    }
}
