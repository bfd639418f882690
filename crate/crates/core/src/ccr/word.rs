use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::scalar::Scalar;

/// A generator of the free algebra: `G[z_i]` or `G[z_i*]`.
///
/// Field order matters for the derived ordering: all holomorphic letters
/// precede all starred ones, so `z1 < z2 < z1* < z2*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub star: bool,
    pub gen: usize,
}

impl Letter {
    pub fn holo(gen: usize) -> Self {
        Letter { star: false, gen }
    }

    pub fn anti(gen: usize) -> Self {
        Letter { star: true, gen }
    }

    /// Position in the alphabet of `2n` letters.
    pub fn code(self, n: usize) -> usize {
        if self.star { n + self.gen } else { self.gen }
    }

    pub fn from_code(code: usize, n: usize) -> Self {
        if code < n { Letter::holo(code) } else { Letter::anti(code - n) }
    }

    pub fn render(self, names: &[String]) -> String {
        if self.star { format!("G[{}*]", names[self.gen]) } else { format!("G[{}]", names[self.gen]) }
    }
}

/// A word in the free algebra; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl Ord for FreeWord {
    /// Degree first, then lexicographic in the letter order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.len().cmp(&other.letters.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FreeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FreeWord { letters }
    }

    pub fn unit() -> Self {
        FreeWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        FreeWord { letters: vec![l] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters }
    }

    /// Base-`2n` code among the words of the same degree; increasing codes
    /// follow the word order.
    pub fn code(&self, n: usize) -> usize {
        self.letters.iter().fold(0, |acc, l| acc * 2 * n + l.code(n))
    }

    pub fn from_code(mut code: usize, degree: usize, n: usize) -> Self {
        let base = 2 * n;
        let mut letters = vec![Letter::holo(0); degree];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::from_code(code % base, n);
            code /= base;
        }
        FreeWord { letters }
    }

    /// Index among all words of any degree, compatible with the word order.
    pub fn global_index(&self, n: usize) -> usize {
        let base = 2 * n;
        let below: usize = (0..self.degree()).map(|e| base.pow(e as u32)).sum();
        below + self.code(n)
    }

    /// All words of degree `d` over `2n` letters, in increasing order.
    pub fn all_of_degree(n: usize, d: usize) -> impl Iterator<Item = FreeWord> {
        let count = (2 * n).pow(d as u32);
        (0..count).map(move |c| FreeWord::from_code(c, d, n))
    }

    /// Letters joined by `·`; the unit renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_unit() {
            return "1".into();
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.render(names)).collect();
        parts.join("·")
    }
}

/// Element of the free algebra, a finite combination of words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeElem {
    terms: BTreeMap<FreeWord, Scalar>,
}

impl FreeElem {
    pub fn zero() -> Self {
        FreeElem::default()
    }

    pub fn word(w: FreeWord) -> Self {
        FreeElem::term(w, Scalar::from_int(1))
    }

    pub fn term(w: FreeWord, c: Scalar) -> Self {
        let mut e = FreeElem::zero();
        e.add_term(w, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (FreeWord, Scalar)>>(terms: I) -> Self {
        let mut e = FreeElem::zero();
        for (w, c) in terms {
            e.add_term(w, &c);
        }
        e
    }

    pub fn add_term(&mut self, w: FreeWord, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &FreeElem) -> FreeElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> FreeElem {
        FreeElem::from_terms(self.terms.iter().map(|(w, v)| (w.clone(), v * c)))
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&FreeWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &FreeWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
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

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(FreeWord::degree)
    }

    /// Largest word with its coefficient.
    pub fn leading(&self) -> Option<(&FreeWord, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_part(&self, d: usize) -> FreeElem {
        FreeElem { terms: self.terms.iter().filter(|(w, _)| w.degree() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(FreeWord::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Terms in decreasing word order, e.g. `G[z*]·G[z] − G[z]·G[z*] − 1`.
    pub fn render(&self, names: &[String]) -> String {
        render_signed(self.terms.iter().rev().map(|(w, c)| (c.clone(), word_factors(w, names))))
    }
}

pub(crate) fn word_factors(w: &FreeWord, names: &[String]) -> Vec<String> {
    w.letters().iter().map(|l| l.render(names)).collect()
}

/// Joins `coefficient·factor·factor` terms with ` + ` / ` − `. Real
/// coefficients contribute their sign; complex ones are parenthesized.
pub(crate) fn render_signed<I>(terms: I) -> String
where
    I: IntoIterator<Item = (Scalar, Vec<String>)>,
{
    let mut out = String::new();
    for (k, (c, factors)) in terms.into_iter().enumerate() {
        let (negative, magnitude) = if c.is_negative_real() {
            (true, Some(-c.clone()))
        } else if c.is_real() {
            (false, Some(c.clone()))
        } else {
            (false, None)
        };
        let sep = match (k, negative) {
            (0, true) => "−",
            (0, false) => "",
            (_, true) => " − ",
            (_, false) => " + ",
        };
        out.push_str(sep);
        let mut pieces: Vec<String> = Vec::new();
        match magnitude {
            Some(m) if m == Scalar::from_int(1) && !factors.is_empty() => {}
            Some(m) => pieces.push(m.to_string()),
            None => pieces.push(format!("({c})")),
        }
        pieces.extend(factors);
        let _ = write!(out, "{}", pieces.join("·"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["z".into()]
    }

    #[test]
    fn letter_and_word_order() {
        let z = Letter::holo(0);
        let zs = Letter::anti(0);
        assert!(z < zs);
        let a = FreeWord::new(vec![zs, z]);
        let b = FreeWord::new(vec![z, zs]);
        assert!(b < a);
        assert!(FreeWord::letter(zs) < b);
        let all: Vec<FreeWord> = FreeWord::all_of_degree(1, 2).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for w in &all {
            assert_eq!(FreeWord::from_code(w.code(1), 2, 1), *w);
        }
    }

    #[test]
    fn renders_commutator() {
        let z = Letter::holo(0);
        let zs = Letter::anti(0);
        let r = FreeElem::from_terms([
            (FreeWord::new(vec![zs, z]), Scalar::from_int(1)),
            (FreeWord::new(vec![z, zs]), Scalar::from_int(-2)),
            (FreeWord::unit(), Scalar::from_int(-1)),
        ]);
        assert_eq!(r.render(&names()), "G[z*]·G[z] − 2·G[z]·G[z*] − 1");
        assert_eq!(FreeElem::term(FreeWord::unit(), Scalar::i()).render(&names()), "(i)");
    }
}
