use std::collections::HashMap;
use std::ops::Range;

use crate::linalg::SparseVec;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::NcPoly;

/// Ordered monomial basis of `𝒫` up to a degree bound, in degree-then-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    n: usize,
    max_degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    starts: Vec<usize>,
}

impl Basis {
    pub fn new(n: usize, max_degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut starts = Vec::with_capacity(max_degree + 2);
        for d in 0..=max_degree {
            starts.push(monomials.len());
            monomials.extend(monomials_of_degree(n, d));
        }
        starts.push(monomials.len());
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Basis { n, max_degree, monomials, index, starts }
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index range of the degree-`d` block.
    pub fn degree_range(&self, d: usize) -> Range<usize> {
        self.starts[d]..self.starts[d + 1]
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.monomials[i].degree()
    }

    /// Coordinates of `p`, dropping terms above the degree bound.
    pub fn coordinates(&self, p: &NcPoly) -> SparseVec {
        p.terms()
            .filter_map(|(m, c)| self.index_of(m).map(|i| (i, c.clone())))
            .collect()
    }

    pub fn poly(&self, v: &SparseVec) -> NcPoly {
        NcPoly::from_terms(self.n, v.iter().map(|(i, c)| (self.monomials[i].clone(), c.clone())))
    }

    pub fn labels(&self, names: &[String]) -> Vec<String> {
        self.monomials.iter().map(|m| m.render(names)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b0 = Basis::new(1, 0);
        assert_eq!(b0.len(), 1);
        assert!(b0.monomial(0).is_one());

        let b = Basis::new(1, 2);
        let names = vec!["x".to_string()];
        assert_eq!(b.labels(&names), vec!["1", "x", "x x"]);

        let b2 = Basis::new(2, 2);
        let names = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(b2.labels(&names), vec!["1", "x1", "x2", "x1 x1", "x1 x2", "x2 x2"]);
        assert_eq!(b2.degree_range(1), 1..3);
    }
}
