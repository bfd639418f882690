//! Elements of the holomorphic algebra `𝒫`, stored in PBW normal form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// A finite linear combination of ordered monomials. Zero coefficients are
/// never stored, so two polynomials are equal iff their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl NcPoly {
    pub fn zero(n: usize) -> Self {
        NcPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        NcPoly::constant(n, Scalar::one())
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        NcPoly::term(c, Monomial::one(n))
    }

    pub fn monomial(m: Monomial) -> Self {
        NcPoly::term(Scalar::one(), m)
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut p = NcPoly::zero(m.n_generators());
        p.add_term(m, &c);
        p
    }

    pub fn generator(n: usize, index: usize) -> Self {
        NcPoly::monomial(Monomial::generator(n, index))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(n: usize, terms: I) -> Self {
        let mut p = NcPoly::zero(n);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        debug_assert_eq!(m.n_generators(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest degree of a term, `None` for zero.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn homogeneous_part(&self, d: usize) -> NcPoly {
        NcPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree greater than `d`.
    pub fn truncate(&self, d: usize) -> NcPoly {
        NcPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.n);
        }
        NcPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Coefficient-wise conjugate inside `𝒫` (not the conjugation of `𝒜`).
    pub fn conj_coefficients(&self) -> NcPoly {
        NcPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.conj())).collect(),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        render_terms(self.terms.iter().rev().map(|(m, c)| (c, m.render(names))))
    }
}

/// Shared `c·m + c·m − …` formatting used by polynomials and symbols.
pub(crate) fn render_terms<'a, I>(terms: I) -> String
where
    I: Iterator<Item = (&'a Scalar, String)>,
{
    let mut out = String::new();
    for (c, label) in terms {
        let (neg, mag) = if c.is_negative_real() { (true, -c) } else { (false, c.clone()) };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
        match (mag.is_one(), label == "1") {
            (true, _) => out.push_str(&label),
            (false, true) => out.push_str(&coef),
            (false, false) => {
                out.push_str(&coef);
                out.push(' ');
                out.push_str(&label);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·{m:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &'a NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &'a NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-Scalar::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let x = NcPoly::generator(2, 0);
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d.degree(), None);
    }

    #[test]
    fn render_signs() {
        let names = vec!["z1".to_string(), "z2".to_string()];
        let p = NcPoly::from_terms(
            2,
            [
                (Monomial::from_exponents(vec![1, 1]), Scalar::from_int(3)),
                (Monomial::one(2), Scalar::from_int(-1)),
                (Monomial::generator(2, 1), Scalar::i()),
            ],
        );
        assert_eq!(p.render(&names), "3 z1 z2 + (i) z2 - 1");
    }
}
