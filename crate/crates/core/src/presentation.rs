//! Quadratic straightening presentations of `𝒫` and rewriting to PBW normal form.
//!
//! A presentation on generators `x₁…x_n` carries one rule `x_j x_i → r_{ji}` per
//! inverted pair `j > i`, where `r_{ji}` is a combination of ordered monomials
//! of degree at most two. Arbitrary words are rewritten by repeatedly
//! straightening the leftmost inversion.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::monomial::Monomial;
use crate::poly::NcPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error("rule `{lhs}` is not an inversion x_j x_i with j > i")]
    NotAnInversion { lhs: String },
    #[error("duplicate rule for `{lhs}`")]
    DuplicateRule { lhs: String },
    #[error("generator index {index} out of range for {n} generators")]
    UnknownGenerator { index: usize, n: usize },
    #[error("rule degree exceeds 2 in rule for `{lhs}`")]
    NonQuadratic { lhs: String },
    #[error("rule for `{lhs}` does not decrease the word order (term `{term}`), rewriting could loop")]
    NonDecreasing { lhs: String, term: String },
    #[error("confluence bound must be at least 3, got {0}")]
    BoundTooSmall(usize),
}

/// One straightening rule `x_hi x_lo → rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub hi: usize,
    pub lo: usize,
    pub rhs: NcPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    rules: BTreeMap<(usize, usize), NcPoly>,
    commutative: bool,
}

impl Presentation {
    /// Builds a presentation. Inverted pairs without an explicit rule commute.
    pub fn new(names: Vec<String>, rules: Vec<Rule>) -> Result<Self, PresentationError> {
        let n = names.len();
        if n == 0 {
            return Err(PresentationError::NoGenerators);
        }
        let lhs_name = |hi: usize, lo: usize| format!("{} {}", names[hi], names[lo]);
        let mut table = BTreeMap::new();
        for rule in rules {
            for g in [rule.hi, rule.lo] {
                if g >= n {
                    return Err(PresentationError::UnknownGenerator { index: g, n });
                }
            }
            if rule.hi <= rule.lo {
                return Err(PresentationError::NotAnInversion { lhs: lhs_name(rule.hi, rule.lo) });
            }
            if rule.rhs.degree().unwrap_or(0) > 2 {
                return Err(PresentationError::NonQuadratic { lhs: lhs_name(rule.hi, rule.lo) });
            }
            // deglex on words is monoid compatible, so rules that strictly
            // decrease it terminate in every context
            for (m, _) in rule.rhs.terms() {
                if m.degree() == 2 && m.word()[0] >= rule.hi {
                    return Err(PresentationError::NonDecreasing {
                        lhs: lhs_name(rule.hi, rule.lo),
                        term: m.render(&names),
                    });
                }
            }
            if table.insert((rule.hi, rule.lo), rule.rhs).is_some() {
                return Err(PresentationError::DuplicateRule { lhs: lhs_name(rule.hi, rule.lo) });
            }
        }
        for hi in 0..n {
            for lo in 0..hi {
                table.entry((hi, lo)).or_insert_with(|| {
                    NcPoly::monomial(Monomial::from_ordered_word(n, &[lo, hi]))
                });
            }
        }
        let commutative = table
            .iter()
            .all(|(&(hi, lo), rhs)| *rhs == NcPoly::monomial(Monomial::from_ordered_word(n, &[lo, hi])));
        Ok(Presentation { names, rules: table, commutative })
    }

    /// Commutative polynomial ring on the given generators.
    pub fn commutative(names: Vec<String>) -> Self {
        Presentation::new(names, Vec::new()).expect("commutative presentation is always valid")
    }

    /// Two-generator Manin plane `x₂x₁ = q x₁x₂`.
    pub fn manin_plane(q: Scalar) -> Self {
        let rhs = NcPoly::term(q, Monomial::from_exponents(vec![1, 1]));
        Presentation::new(
            vec!["x1".into(), "x2".into()],
            vec![Rule { hi: 1, lo: 0, rhs }],
        )
        .expect("Manin plane rule is ordered and quadratic")
    }

    pub fn n_generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn rule(&self, hi: usize, lo: usize) -> Option<&NcPoly> {
        self.rules.get(&(hi, lo))
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().map(|(&(hi, lo), rhs)| Rule { hi, lo, rhs: rhs.clone() })
    }

    /// Rewrites an arbitrary word in the generators to its ordered normal form.
    pub fn normal_form(&self, word: &[usize]) -> NcPoly {
        let mut pending = BTreeMap::new();
        pending.insert(WordKey(word.to_vec()), Scalar::one());
        self.reduce_all(pending)
    }

    /// Product in `𝒫`; both operands are assumed to be in normal form.
    pub fn multiply(&self, p: &NcPoly, r: &NcPoly) -> NcPoly {
        let mut pending: BTreeMap<WordKey, Scalar> = BTreeMap::new();
        for (a, ca) in p.terms() {
            let wa = a.word();
            for (b, cb) in r.terms() {
                let mut w = wa.clone();
                w.extend(b.word());
                accumulate(&mut pending, WordKey(w), &(ca * cb));
            }
        }
        self.reduce_all(pending)
    }

    /// `p₁ p₂ ⋯ p_k`, the unit for an empty list.
    pub fn multiply_all<'a, I: IntoIterator<Item = &'a NcPoly>>(&self, factors: I) -> NcPoly {
        factors
            .into_iter()
            .fold(NcPoly::one(self.n_generators()), |acc, f| self.multiply(&acc, f))
    }

    /// Rewrites the pending combination, always expanding the largest word
    /// first; every rule maps a word to strictly smaller ones, so each word is
    /// straightened once with its fully merged coefficient.
    fn reduce_all(&self, mut pending: BTreeMap<WordKey, Scalar>) -> NcPoly {
        let n = self.n_generators();
        let mut out = NcPoly::zero(n);
        while let Some((WordKey(w), c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            match first_inversion(&w) {
                None => out.add_term(Monomial::from_ordered_word(n, &w), &c),
                Some(p) => {
                    for (w2, c2) in self.rewrite_at(&w, p) {
                        accumulate(&mut pending, WordKey(w2), &(&c * &c2));
                    }
                }
            }
        }
        out
    }

    /// One rewriting step at position `p` (where `w[p] > w[p+1]`).
    fn rewrite_at(&self, w: &[usize], p: usize) -> Vec<(Vec<usize>, Scalar)> {
        let rhs = &self.rules[&(w[p], w[p + 1])];
        rhs.terms()
            .map(|(m, c)| {
                let mut w2 = w[..p].to_vec();
                w2.extend(m.word());
                w2.extend_from_slice(&w[p + 2..]);
                (w2, c.clone())
            })
            .collect()
    }

    /// Checks that every ambiguous word up to `degree_bound` has a unique
    /// normal form, comparing the results of straightening each inversion
    /// first. Length-3 overlaps `x_k x_j x_i` decide confluence of a quadratic
    /// system; longer words are enumerated while the search stays small.
    pub fn check_confluence(&self, degree_bound: usize) -> Result<ConfluenceReport, PresentationError> {
        if degree_bound < 3 {
            return Err(PresentationError::BoundTooSmall(degree_bound));
        }
        let n = self.n_generators();
        let mut report = ConfluenceReport { failures: Vec::new(), words_checked: 0, exhaustive_up_to: 3 };
        for len in 3..=degree_bound {
            let count = (n as f64).powi(len as i32);
            if len > 3 && count > WORD_SEARCH_LIMIT {
                break;
            }
            report.exhaustive_up_to = len;
            for w in all_words(n, len) {
                let positions: Vec<usize> = (0..len - 1).filter(|&p| w[p] > w[p + 1]).collect();
                if positions.len() < 2 {
                    continue;
                }
                if len > 3 && report.failures.iter().any(|f| contains(&w, &f.word)) {
                    continue;
                }
                report.words_checked += 1;
                let reducts: Vec<NcPoly> = positions
                    .iter()
                    .map(|&p| {
                        let mut pending = BTreeMap::new();
                        for (w2, c) in self.rewrite_at(&w, p) {
                            accumulate(&mut pending, WordKey(w2), &c);
                        }
                        self.reduce_all(pending)
                    })
                    .collect();
                if let Some(k) = (1..reducts.len()).find(|&k| reducts[k] != reducts[0]) {
                    report.failures.push(OverlapFailure {
                        word: w.clone(),
                        rendered_word: w.iter().map(|&g| self.names[g].as_str()).collect::<Vec<_>>().join(" "),
                        first_position: positions[0],
                        other_position: positions[k],
                        via_first: reducts[0].render(&self.names),
                        via_other: reducts[k].render(&self.names),
                    });
                }
            }
        }
        Ok(report)
    }
}

const WORD_SEARCH_LIMIT: f64 = 50_000.0;

/// Words compare by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq)]
struct WordKey(Vec<usize>);

impl Ord for WordKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for WordKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn accumulate(map: &mut BTreeMap<WordKey, Scalar>, key: WordKey, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(key).or_insert_with(Scalar::zero);
    *slot += c;
}

fn first_inversion(w: &[usize]) -> Option<usize> {
    w.windows(2).position(|p| p[0] > p[1])
}

fn contains(haystack: &[usize], needle: &[usize]) -> bool {
    haystack.windows(needle.len()).any(|w| w == needle)
}

fn all_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |g| {
                    let mut w2 = w.clone();
                    w2.push(g);
                    w2
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapFailure {
    pub word: Vec<usize>,
    pub rendered_word: String,
    pub first_position: usize,
    pub other_position: usize,
    pub via_first: String,
    pub via_other: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub failures: Vec<OverlapFailure>,
    pub words_checked: usize,
    pub exhaustive_up_to: usize,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}
