use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Scalar;

use super::relations::Relation;
use super::word::{render_signed, word_factors, FreeElem, FreeWord};
use super::CcrError;

/// Free-algebra element with coefficients that are Laurent polynomials in a
/// formal `s` with `s² = ℏ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedRelation {
    top_degree: usize,
    terms: BTreeMap<FreeWord, BTreeMap<i32, Scalar>>,
}

impl DeformedRelation {
    /// `Σ_j s^{n−j} R_j`: interpolates the relation (`s = 1`) and its
    /// classical part (`s = 0`).
    pub fn deform(r: &Relation) -> Self {
        let n = r.top_degree() as i32;
        Self::weighted(r, |j| n - j)
    }

    /// `Σ_j s^{−j} R_j`, equivalent to [`DeformedRelation::deform`] after
    /// multiplying by `s^n` when `ℏ ≠ 0`.
    pub fn normalized(r: &Relation) -> Self {
        Self::weighted(r, |j| -j)
    }

    fn weighted(r: &Relation, exponent: impl Fn(i32) -> i32) -> Self {
        let mut terms: BTreeMap<FreeWord, BTreeMap<i32, Scalar>> = BTreeMap::new();
        for (w, c) in r.elem().terms() {
            terms.entry(w.clone()).or_default().insert(exponent(w.degree() as i32), c.clone());
        }
        DeformedRelation { top_degree: r.top_degree(), terms }
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    /// `(word, exponent of s, coefficient)` in increasing word order.
    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i32, &Scalar)> {
        self.terms.iter().flat_map(|(w, poly)| poly.iter().map(move |(&e, c)| (w, e, c)))
    }

    /// Multiplies every coefficient by `s^k`.
    pub fn shift(&self, k: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(w, poly)| (w.clone(), poly.iter().map(|(&e, c)| (e + k, c.clone())).collect()))
            .collect();
        DeformedRelation { top_degree: self.top_degree, terms }
    }

    /// Substitutes a value for `s`.
    pub fn specialize(&self, s: &Scalar) -> Result<FreeElem, CcrError> {
        let inverse = s.inv();
        let mut out = FreeElem::zero();
        for (w, e, c) in self.terms() {
            let factor = if e >= 0 {
                s.pow(e as u32)
            } else {
                inverse.as_ref().ok_or(CcrError::SingularSpecialization)?.pow(e.unsigned_abs())
            };
            out.add_term(w.clone(), &(c * &factor));
        }
        Ok(out)
    }

    /// Terms in decreasing word order with `s²` shown as `ℏ`, e.g.
    /// `G[z*]·G[z] − G[z]·G[z*] − ℏ`.
    pub fn render(&self, names: &[String]) -> String {
        let items = self.terms.iter().rev().map(|(w, poly)| {
            let mut factors = Vec::new();
            let coefficient = if poly.len() == 1 {
                let (&e, c) = poly.iter().next().expect("one entry");
                if e != 0 {
                    factors.push(hbar_power(e));
                }
                c.clone()
            } else {
                factors.push(format!("({})", render_laurent(poly)));
                Scalar::from_int(1)
            };
            factors.extend(word_factors(w, names));
            (coefficient, factors)
        });
        render_signed(items)
    }
}

/// `s^e` written in terms of `ℏ = s²`.
fn hbar_power(e: i32) -> String {
    match e {
        2 => "ℏ".into(),
        e if e % 2 == 0 => format!("ℏ^{}", e / 2),
        e => format!("ℏ^{{{e}/2}}"),
    }
}

fn render_laurent(poly: &BTreeMap<i32, Scalar>) -> String {
    render_signed(
        poly.iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&e, c)| (c.clone(), if e == 0 { Vec::new() } else { vec![hbar_power(e)] })),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccr::word::Letter;

    fn ccr() -> Relation {
        let z = Letter::holo(0);
        let zs = Letter::anti(0);
        Relation::new(FreeElem::from_terms([
            (FreeWord::new(vec![zs, z]), Scalar::from_int(1)),
            (FreeWord::new(vec![z, zs]), Scalar::from_int(-1)),
            (FreeWord::unit(), Scalar::from_int(-1)),
        ]))
        .unwrap()
    }

    #[test]
    fn deformation_prints_hbar() {
        let d = DeformedRelation::deform(&ccr());
        assert_eq!(d.render(&["z".to_string()]), "G[z*]·G[z] − G[z]·G[z*] − ℏ");
        assert_eq!(d.specialize(&Scalar::from_int(1)).unwrap(), *ccr().elem());
        assert_eq!(d.specialize(&Scalar::zero()).unwrap(), ccr().top_part());
    }

    #[test]
    fn normalized_form_shifts_back() {
        let r = ccr();
        let eq2 = DeformedRelation::normalized(&r);
        assert_eq!(eq2.shift(2), DeformedRelation::deform(&r));
        assert!(eq2.specialize(&Scalar::zero()).is_err());
        assert_eq!(hbar_power(1), "ℏ^{1/2}");
        assert_eq!(hbar_power(-2), "ℏ^-1");
    }
}
