//! Ordered monomials `x₁^{a₁}⋯x_n^{a_n}` of the PBW basis.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of an ordered word in the generators.
///
/// Ordering is by total degree, then by exponent vector in *descending*
/// lexicographic order, so with two generators the degree-2 part of the basis
/// reads `x₁², x₁x₂, x₂²`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exponents: vec![0; n] }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    /// The single generator `x_{index}` (zero based).
    pub fn generator(n: usize, index: usize) -> Self {
        let mut m = Monomial::one(n);
        m.exponents[index] = 1;
        m
    }

    /// Monomial of an already ordered word. Panics if the word is not ordered.
    pub fn from_ordered_word(n: usize, word: &[usize]) -> Self {
        assert!(word.windows(2).all(|w| w[0] <= w[1]), "word {word:?} is not ordered");
        let mut m = Monomial::one(n);
        for &g in word {
            m.exponents[g] += 1;
        }
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n_generators(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Expands to the ordered word of generator indices, e.g. `x₁²x₃ → [0,0,2]`.
    pub fn word(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }

    /// Writes the monomial with the given generator names, `1` for the unit.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.word().iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Factorial multi-index `α! = ∏ aᵢ!`, used by the Segal–Bargmann weights.
    pub fn factorial(&self) -> num_bigint::BigInt {
        let mut acc = num_bigint::BigInt::from(1);
        for &e in &self.exponents {
            for k in 2..=e {
                acc *= k;
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (g, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            write!(f, "x{}", g + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of exactly degree `d` in `n` generators, in basis order.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == n {
            cur.push(left);
            out.push(Monomial::from_exponents(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, pos + 1, left - e, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Monomial::one(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, 0, d as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_then_descending_lex() {
        let got = monomials_of_degree(2, 2);
        let want: Vec<_> = [[2, 0], [1, 1], [0, 2]]
            .iter()
            .map(|e| Monomial::from_exponents(e.to_vec()))
            .collect();
        assert_eq!(got, want);
        let mut sorted = want.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, want);
        assert!(Monomial::one(2) < Monomial::generator(2, 1));
    }

    #[test]
    fn word_roundtrip() {
        let m = Monomial::from_exponents(vec![2, 0, 1]);
        assert_eq!(m.word(), vec![0, 0, 2]);
        assert_eq!(Monomial::from_ordered_word(3, &m.word()), m);
        assert_eq!(m.degree(), 3);
    }

    #[test]
    fn counts_match_binomials() {
        // C(d+n-1, n-1)
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(1, 7).len(), 1);
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one(2)]);
    }
}
