//! Rewriting words of marked generators to a canonical representative of
//! their extended-pattern sum.
//!
//! Rules, each preserving the sum:
//! * R1 `[-a][σ,b] → [-b][σ,a]` (mark exchange with a negative variable),
//! * R2 `[σ,a][η,b] → [σ∨η, max][σ∧η, min]` where `σ∨η`, `σ∧η` have the
//!   pointwise max and min of the counting functions `m ↦ |σ ∩ [m]|`,
//! * R3 `[σ,a][η,b] → [σ,b][η,a]` (mark swap).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{
    count_upto, format_set, word_pattern, ExtendedPattern, MarkedGenerator, PsiMap, PsiVar, Word,
};
use crate::error::{Error, Result};
use crate::poly::{leading_monomial, normal_form, Monomial, Polynomial, TermOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    pub removed: Vec<MarkedGenerator>,
    pub added: Vec<MarkedGenerator>,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub start: Word,
    pub canonical: Word,
    pub steps: Vec<Step>,
}

fn counts(set: &[usize], n: usize) -> Vec<usize> {
    (1..=n).map(|m| count_upto(set, m)).collect()
}

fn set_of_counts(c: &[usize]) -> Vec<usize> {
    (0..c.len())
        .filter(|&i| c[i] > if i == 0 { 0 } else { c[i - 1] })
        .map(|i| i + 1)
        .collect()
}

fn dominates(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn mark_valid(set: &[usize], mark: usize) -> bool {
    mark == 0 || count_upto(set, mark) == mark
}

struct Rewriter {
    n: usize,
    word: Word,
    steps: Vec<Step>,
}

impl Rewriter {
    fn apply(&mut self, rule: Rule, removed: Vec<MarkedGenerator>, added: Vec<MarkedGenerator>) -> Result<()> {
        for g in &added {
            g.validate(self.n)?;
        }
        if word_pattern(&removed, self.n)? != word_pattern(&added, self.n)? {
            return Err(Error::Precondition(format!(
                "{rule:?} step {} -> {} changes the pattern sum",
                super::format_word(&removed),
                super::format_word(&added)
            )));
        }
        for g in &removed {
            let pos = self
                .word
                .iter()
                .position(|h| h == g)
                .ok_or_else(|| Error::Precondition(format!("{g} is not in the word")))?;
            self.word.remove(pos);
        }
        self.word.extend(added.iter().cloned());
        self.word.sort();
        self.steps.push(Step {
            rule,
            removed,
            added,
            word: self.word.clone(),
        });
        Ok(())
    }

    fn flags(&self) -> Vec<(Vec<usize>, usize)> {
        self.word
            .iter()
            .filter_map(|g| match g {
                MarkedGenerator::Flag { set, mark } => Some((set.clone(), *mark)),
                MarkedGenerator::NegVar(_) => None,
            })
            .collect()
    }

    /// R2 until the flags form a chain for pointwise dominance of counts.
    /// Each step strictly increases the sum of squared counts.
    fn chain(&mut self) -> Result<()> {
        let n = self.n;
        loop {
            let flags = self.flags();
            let pair = (0..flags.len()).find_map(|i| {
                (i + 1..flags.len()).find_map(|j| {
                    let (ci, cj) = (counts(&flags[i].0, n), counts(&flags[j].0, n));
                    (!dominates(&ci, &cj) && !dominates(&cj, &ci)).then_some((i, j, ci, cj))
                })
            });
            let Some((i, j, ci, cj)) = pair else {
                return Ok(());
            };
            let join: Vec<usize> = ci.iter().zip(&cj).map(|(a, b)| *a.max(b)).collect();
            let meet: Vec<usize> = ci.iter().zip(&cj).map(|(a, b)| *a.min(b)).collect();
            let (a, b) = (flags[i].1, flags[j].1);
            self.apply(
                Rule::R2,
                vec![
                    MarkedGenerator::flag(flags[i].0.clone(), a),
                    MarkedGenerator::flag(flags[j].0.clone(), b),
                ],
                vec![
                    MarkedGenerator::flag(set_of_counts(&join), a.max(b)),
                    MarkedGenerator::flag(set_of_counts(&meet), a.min(b)),
                ],
            )?;
        }
    }

    /// Walks the chain from the largest flag down, giving each the largest
    /// available index it can carry; indices come from negative variables
    /// (R1) or from later flags (R3).
    fn marks(&mut self) -> Result<()> {
        let n = self.n;
        let mut flags = self.flags();
        flags.sort_by(|x, y| counts(&y.0, n).cmp(&counts(&x.0, n)).then(y.1.cmp(&x.1)));
        let mut pool = vec![0usize; n + 1];
        for g in &self.word {
            match g {
                MarkedGenerator::NegVar(a) if *a > 0 => pool[*a] += 1,
                MarkedGenerator::Flag { mark, .. } if *mark > 0 => pool[*mark] += 1,
                _ => {}
            }
        }
        for i in 0..flags.len() {
            let (set, current) = flags[i].clone();
            let target = (1..=n).rev().find(|&a| pool[a] > 0 && mark_valid(&set, a)).unwrap_or(0);
            if target > 0 {
                pool[target] -= 1;
            }
            if target == current {
                continue;
            }
            if target < current {
                return Err(Error::Precondition(format!(
                    "mark {current} on {} exceeds the greedy choice {target}",
                    format_set(&set)
                )));
            }
            if self.word.contains(&MarkedGenerator::NegVar(target)) {
                self.apply(
                    Rule::R1,
                    vec![MarkedGenerator::NegVar(target), MarkedGenerator::flag(set.clone(), current)],
                    vec![MarkedGenerator::NegVar(current), MarkedGenerator::flag(set.clone(), target)],
                )?;
            } else {
                let j = (i + 1..flags.len())
                    .find(|&j| flags[j].1 == target)
                    .ok_or_else(|| Error::Precondition(format!("index {target} not found")))?;
                let other = flags[j].0.clone();
                self.apply(
                    Rule::R3,
                    vec![
                        MarkedGenerator::flag(set.clone(), current),
                        MarkedGenerator::flag(other.clone(), target),
                    ],
                    vec![
                        MarkedGenerator::flag(set.clone(), target),
                        MarkedGenerator::flag(other, current),
                    ],
                )?;
                flags[j].1 = current;
            }
            flags[i].1 = target;
        }
        Ok(())
    }
}

/// Rewrites `word` to the canonical word of its extended-pattern sum.
pub fn normal_form_word(word: &[MarkedGenerator], n: usize) -> Result<Trace> {
    for g in word {
        g.validate(n)?;
    }
    let mut start = word.to_vec();
    start.sort();
    let mut rw = Rewriter {
        n,
        word: start.clone(),
        steps: Vec::new(),
    };
    rw.chain()?;
    rw.marks()?;
    Ok(Trace {
        start,
        canonical: rw.word,
        steps: rw.steps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Subduction {
    pub first: Trace,
    pub second: Trace,
    pub joined: bool,
}

/// Rewrites both words; they must have equal extended-pattern sums.
pub fn subduct(w1: &[MarkedGenerator], w2: &[MarkedGenerator], n: usize) -> Result<Subduction> {
    if word_pattern(w1, n)? != word_pattern(w2, n)? {
        return Err(Error::Precondition("words have different extended-pattern sums".into()));
    }
    let first = normal_form_word(w1, n)?;
    let second = normal_form_word(w2, n)?;
    let joined = first.canonical == second.canonical;
    Ok(Subduction {
        first,
        second,
        joined,
    })
}

/// Letters available at `n`.
pub fn alphabet(n: usize) -> Vec<MarkedGenerator> {
    let mut out: Vec<MarkedGenerator> = (0..=n).map(MarkedGenerator::NegVar).collect();
    let all: Vec<usize> = (1..=n).collect();
    for k in 1..n {
        for set in crate::cox::subsets(&all, k) {
            for mark in std::iter::once(0).chain(set.iter().copied()) {
                if mark_valid(&set, mark) {
                    out.push(MarkedGenerator::flag(set.clone(), mark));
                }
            }
        }
    }
    out
}

/// All multisets of letters of size at most `max_len`.
pub fn all_words(n: usize, max_len: usize) -> Vec<Word> {
    let letters = alphabet(n);
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Word)> = vec![(0, Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (from, w) in &frontier {
            for (k, g) in letters.iter().enumerate().skip(*from) {
                let mut v = w.clone();
                v.push(g.clone());
                next.push((k, v));
            }
        }
        out.extend(next.iter().map(|(_, w)| {
            let mut w = w.clone();
            w.sort();
            w
        }));
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfluenceReport {
    pub n: usize,
    pub max_len: usize,
    pub words: usize,
    pub classes: usize,
    pub pairs: usize,
    pub steps: usize,
    pub failures: Vec<(Word, Word)>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Groups all words of length `≤ max_len` by pattern sum and checks that
/// each class has a single canonical word. Returns the traces for reuse.
pub fn confluence_sweep(n: usize, max_len: usize) -> Result<(ConfluenceReport, Vec<Trace>)> {
    let words = all_words(n, max_len);
    let mut classes: BTreeMap<ExtendedPattern, Vec<usize>> = BTreeMap::new();
    let mut traces = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        classes.entry(word_pattern(w, n)?).or_default().push(i);
        traces.push(normal_form_word(w, n)?);
    }
    let mut failures = Vec::new();
    let mut pairs = 0;
    for members in classes.values() {
        pairs += members.len() * (members.len() - 1) / 2;
        let first = &traces[members[0]].canonical;
        for &m in &members[1..] {
            if &traces[m].canonical != first {
                failures.push((words[members[0]].clone(), words[m].clone()));
            }
        }
    }
    let report = ConfluenceReport {
        n,
        max_len,
        words: words.len(),
        classes: classes.len(),
        pairs,
        steps: traces.iter().map(|t| t.steps.len()).sum(),
        failures,
    };
    Ok((report, traces))
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub binomials: usize,
    pub lifted: usize,
    pub failures: Vec<String>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn product(psi: &PsiMap, letters: &[MarkedGenerator]) -> Result<Polynomial> {
    letters.iter().try_fold(Polynomial::one(psi.nvars()), |acc, g| {
        Ok(&acc * &psi.var(&PsiVar::from_marked(g))?)
    })
}

/// Terms of `r` whose `Ψ`-image has the largest initial monomial.
fn initial_support(psi: &PsiMap, r: &Polynomial, order: &TermOrder) -> Vec<Monomial> {
    let leads: Vec<(Monomial, Monomial)> = r
        .terms()
        .filter_map(|(m, _)| {
            let img = psi.apply(&Polynomial::monomial(m.clone(), crate::exact::rat(1)));
            leading_monomial(&img, order).map(|l| (m.clone(), l))
        })
        .collect();
    let Some(top) = leads.iter().map(|(_, l)| l).max_by(|a, b| order.cmp(a, b)).cloned() else {
        return vec![];
    };
    let mut out: Vec<Monomial> = leads.into_iter().filter(|(_, l)| *l == top).map(|(m, _)| m).collect();
    out.sort();
    out
}

/// For every distinct binomial of the traces, finds a relation whose
/// `Ψ`-initial terms are exactly the two products of the step and checks
/// it normal-forms to zero against `kernel_gb` (a Groebner basis of `ker Ψ`
/// for `gb_order`).
pub fn lift_check(
    psi: &PsiMap,
    traces: &[Trace],
    relations: &[Polynomial],
    kernel_gb: &[Polynomial],
    gb_order: &TermOrder,
) -> Result<LiftReport> {
    let order = super::diagonal_order(psi.n);
    let initials: Vec<Vec<Monomial>> = relations
        .iter()
        .map(|r| initial_support(psi, r, &order))
        .collect();
    let mut seen: HashMap<Vec<Monomial>, bool> = HashMap::new();
    let mut failures = Vec::new();
    for step in traces.iter().flat_map(|t| &t.steps) {
        let a = product(psi, &step.removed)?;
        let b = product(psi, &step.added)?;
        let mut key: Vec<Monomial> = a.terms().chain(b.terms()).map(|(m, _)| m.clone()).collect();
        key.sort();
        if seen.contains_key(&key) {
            continue;
        }
        let mut ok = false;
        for (r, init) in relations.iter().zip(&initials) {
            if *init == key && normal_form(r, kernel_gb, gb_order)?.is_zero() {
                ok = true;
                break;
            }
        }
        if !ok {
            failures.push(format!(
                "{} -> {}",
                super::format_word(&step.removed),
                super::format_word(&step.added)
            ));
        }
        seen.insert(key, ok);
    }
    Ok(LiftReport {
        binomials: seen.len(),
        lifted: seen.values().filter(|&&v| v).count(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gz::parse_word;

    #[test]
    fn single_r1_step() {
        let w = parse_word("[-1],[{1,2},0]", 3).unwrap();
        let t = normal_form_word(&w, 3).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].rule, Rule::R1);
        assert_eq!(t.canonical, parse_word("[-0],[{1,2},1]", 3).unwrap());
    }

    #[test]
    fn nested_words_are_fixed() {
        let w = parse_word("[{1},0],[{1,2},0]", 3).unwrap();
        let t = normal_form_word(&w, 3).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.canonical, w);
        // already a chain for the counting order, though not for containment
        let w = parse_word("[{2},0],[{1,3},0]", 4).unwrap();
        assert!(normal_form_word(&w, 4).unwrap().steps.is_empty());
    }

    #[test]
    fn incomparable_flags_are_exchanged() {
        // counts (0,1,2,2) and (1,1,1,2) are incomparable
        let w = parse_word("[{2,3},0],[{1,4},0]", 4).unwrap();
        let t = normal_form_word(&w, 4).unwrap();
        assert_eq!(t.steps[0].rule, Rule::R2);
        assert_eq!(t.canonical, parse_word("[{1,3},0],[{2,4},0]", 4).unwrap());
    }

    #[test]
    fn subduct_requires_equal_sums() {
        let a = parse_word("[-1]", 2).unwrap();
        let b = parse_word("[-2]", 2).unwrap();
        assert!(subduct(&a, &b, 2).is_err());
        let a = parse_word("[-1],[{1},0]", 2).unwrap();
        let b = parse_word("[-0],[{1},1]", 2).unwrap();
        assert!(subduct(&a, &b, 2).unwrap().joined);
    }

    #[test]
    fn word_counts() {
        assert_eq!(alphabet(2).len(), 3 + 3);
        assert_eq!(alphabet(3).len(), 4 + 10);
        // multisets of size ≤ 2 over 6 letters
        assert_eq!(all_words(2, 2).len(), 1 + 6 + 21);
    }

    #[test]
    fn confluence_small() {
        for n in 2..=3 {
            let (r, _) = confluence_sweep(n, 2).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }
}
