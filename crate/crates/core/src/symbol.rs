//! The symbol space `𝒜 = 𝒫𝒫*`: combinations of `h·k*` with `h, k` ordered
//! monomials, its conjugation, the left `𝒫`-action, and the product on `𝒫*`.
//!
//! There is deliberately no product of two general symbols: `𝒜` is only a
//! left `𝒫`-module, and `k*·h` has no meaning here.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::monomial::Monomial;
use crate::poly::{render_terms, NcPoly};
use crate::presentation::Presentation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("symbol `{0}` does not lie in 𝒫*")]
    NotInStarSpace(String),
    #[error("symbol `{0}` does not lie in 𝒫")]
    NotInHoloSpace(String),
}

/// `Σ c · h·k*`, keyed by `(h, k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolElem {
    n: usize,
    terms: BTreeMap<(Monomial, Monomial), Scalar>,
}

impl SymbolElem {
    pub fn zero(n: usize) -> Self {
        SymbolElem { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        SymbolElem::pair(Scalar::one(), Monomial::one(n), Monomial::one(n))
    }

    /// The single term `c · h·k*`.
    pub fn pair(c: Scalar, h: Monomial, k: Monomial) -> Self {
        let mut s = SymbolElem::zero(h.n_generators());
        s.add_term(h, k, &c);
        s
    }

    /// `φ ∈ 𝒫` as the symbol `φ·1*`.
    pub fn embed(phi: &NcPoly) -> Self {
        let n = phi.n_generators();
        let mut s = SymbolElem::zero(n);
        for (m, c) in phi.terms() {
            s.add_term(m.clone(), Monomial::one(n), c);
        }
        s
    }

    /// `φ*` for `φ ∈ 𝒫`, an element of `𝒫*`.
    pub fn embed_star(phi: &NcPoly) -> Self {
        SymbolElem::embed(phi).conjugate()
    }

    /// `h·k*` for polynomials `h, k`, expanded bilinearly (anti-linear in `k`).
    pub fn anti_wick(h: &NcPoly, k: &NcPoly) -> Self {
        let mut s = SymbolElem::zero(h.n_generators());
        for (mh, ch) in h.terms() {
            for (mk, ck) in k.terms() {
                s.add_term(mh.clone(), mk.clone(), &(ch * &ck.conj()));
            }
        }
        s
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, h: Monomial, k: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((h, k)) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Scalar)> {
        self.terms.iter().map(|((h, k), c)| (h, k, c))
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

    /// Largest `(deg h, deg k)` componentwise over the terms.
    pub fn bidegree(&self) -> (usize, usize) {
        self.terms.keys().fold((0, 0), |(a, b), (h, k)| (a.max(h.degree()), b.max(k.degree())))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut s = SymbolElem::zero(self.n);
        for ((h, k), v) in &self.terms {
            s.add_term(h.clone(), k.clone(), &(v * c));
        }
        s
    }

    /// Anti-linear involution `c·h·k* ↦ c̄·k·h*`.
    pub fn conjugate(&self) -> Self {
        SymbolElem {
            n: self.n,
            terms: self.terms.iter().map(|((h, k), c)| ((k.clone(), h.clone()), c.conj())).collect(),
        }
    }

    pub fn is_in_holo(&self) -> bool {
        self.terms.keys().all(|(_, k)| k.is_one())
    }

    pub fn is_in_star(&self) -> bool {
        self.terms.keys().all(|(h, _)| h.is_one())
    }

    /// The `𝒫` element this symbol equals, if it lies in `𝒫`.
    pub fn as_holo(&self) -> Result<NcPoly, SymbolError> {
        if !self.is_in_holo() {
            return Err(SymbolError::NotInHoloSpace(format!("{self:?}")));
        }
        Ok(NcPoly::from_terms(self.n, self.terms.iter().map(|((h, _), c)| (h.clone(), c.clone()))))
    }

    /// For `ψ ∈ 𝒫*` returns the `k ∈ 𝒫` with `ψ = k*`.
    pub fn star_preimage(&self) -> Result<NcPoly, SymbolError> {
        if !self.is_in_star() {
            return Err(SymbolError::NotInStarSpace(format!("{self:?}")));
        }
        self.conjugate().as_holo()
    }

    /// Left action `φ·(h·k*) = (φh)·k*` of `𝒫` on `𝒜`.
    pub fn left_act(&self, phi: &NcPoly, pres: &Presentation) -> SymbolElem {
        let mut out = SymbolElem::zero(self.n);
        let mut by_anti: BTreeMap<&Monomial, NcPoly> = BTreeMap::new();
        for ((h, k), c) in &self.terms {
            by_anti
                .entry(k)
                .or_insert_with(|| NcPoly::zero(self.n))
                .add_term(h.clone(), c);
        }
        for (k, holo) in by_anti {
            let prod = pres.multiply(phi, &holo);
            for (m, c) in prod.terms() {
                out.add_term(m.clone(), k.clone(), c);
            }
        }
        out
    }

    /// Product on `𝒫*`: `k*·l* := (l k)*`.
    pub fn star_multiply(&self, other: &SymbolElem, pres: &Presentation) -> Result<SymbolElem, SymbolError> {
        let k = self.star_preimage()?;
        let l = other.star_preimage()?;
        Ok(SymbolElem::embed_star(&pres.multiply(&l, &k)))
    }

    pub fn render(&self, names: &[String]) -> String {
        render_terms(self.terms.iter().rev().map(|((h, k), c)| {
            let anti = match k.degree() {
                0 => String::new(),
                1 => format!("{}*", k.render(names)),
                _ => format!("({})*", k.render(names)),
            };
            let label = match (h.is_one(), anti.is_empty()) {
                (true, true) => "1".to_string(),
                (false, true) => h.render(names),
                (true, false) => anti,
                (false, false) => format!("{} {anti}", h.render(names)),
            };
            (c, label)
        }))
    }
}

impl fmt::Debug for SymbolElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|((h, k), c)| format!("({c})·{h:?}·({k:?})*")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a SymbolElem> for &'a SymbolElem {
    type Output = SymbolElem;
    fn add(self, rhs: &'a SymbolElem) -> SymbolElem {
        let mut out = self.clone();
        for ((h, k), c) in &rhs.terms {
            out.add_term(h.clone(), k.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a SymbolElem> for &'a SymbolElem {
    type Output = SymbolElem;
    fn sub(self, rhs: &'a SymbolElem) -> SymbolElem {
        let mut out = self.clone();
        for ((h, k), c) in &rhs.terms {
            out.add_term(h.clone(), k.clone(), &-c);
        }
        out
    }
}

impl Neg for &SymbolElem {
    type Output = SymbolElem;
    fn neg(self) -> SymbolElem {
        self.scale(&-Scalar::one())
    }
}
