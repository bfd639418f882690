//! Truncated matrix realizations of `M_g`, the projection `P`, Toeplitz
//! operators `T_g = P M_g`, and creation/annihilation operators.
//!
//! The quantization is built from the anti-Wick factorization
//! `T_{h k*} = A(k) A*(h)`, where `A*(h)` is right multiplication by `h` and
//! `A(k)` its exact adjoint under the graded Gram form. `P` is then
//! `g ↦ T_g 1`.

mod basis;
mod gram;
mod operator;
pub mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

pub use basis::Basis;
pub use gram::{factorial, q_factorial, q_integer, GramBlock, GramData, GramKind};
pub use operator::TruncatedOperator;

use crate::linalg::SparseVec;
use crate::monomial::Monomial;
use crate::poly::NcPoly;
use crate::presentation::{Presentation, PresentationError};
use crate::scalar::Scalar;
use crate::symbol::{SymbolElem, SymbolError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantError {
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(String),
    #[error("non-positive weight: {0}")]
    NonPositiveWeight(String),
    #[error("explicit Gram block for degree {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("explicit Gram block for degree {degree} is not positive definite (leading minor {minor})")]
    NotPositiveDefinite { degree: usize, minor: usize },
    #[error("no Gram block supplied for degree {degree}")]
    GramDegree { degree: usize },
    #[error("Gram block for degree {degree} has size {got}, expected {expected}")]
    GramShape { degree: usize, expected: usize, got: usize },
    #[error("the q-bargmann preset needs exactly one generator, got {0}")]
    QBargmannArity(usize),
    #[error("the bargmann preset needs a commutative presentation")]
    BargmannNotCommutative,
    #[error("rule for `{0}` is not homogeneous; quantization needs a graded presentation")]
    NotGraded(String),
    #[error("degree {got} exceeds the truncation degree {max}")]
    DegreeTooLarge { got: usize, max: usize },
    #[error("value is outside the validity region (valid up to degree {valid})")]
    OutsideValidity { valid: i64 },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The algebra `𝒫` together with its graded inner product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pres: Presentation,
    gram: GramData,
}

impl Model {
    pub fn new(pres: Presentation, gram: GramData) -> Result<Self, QuantError> {
        match gram.kind() {
            GramKind::Bargmann if !pres.is_commutative() => return Err(QuantError::BargmannNotCommutative),
            GramKind::QBargmann if pres.n_generators() != 1 => {
                return Err(QuantError::QBargmannArity(pres.n_generators()))
            }
            _ => {}
        }
        for rule in pres.rules() {
            if rule.rhs.low_degree().is_some_and(|d| d != 2) {
                let names = pres.names();
                return Err(QuantError::NotGraded(format!("{} {}", names[rule.hi], names[rule.lo])));
            }
        }
        Ok(Model { pres, gram })
    }

    /// Commutative Segal–Bargmann model in `n` variables.
    pub fn bargmann(n: usize, hbar: BigRational) -> Result<Self, QuantError> {
        let names = if n == 1 { vec!["z".to_string()] } else { (1..=n).map(|i| format!("z{i}")).collect() };
        Model::new(Presentation::commutative(names), GramData::bargmann(hbar)?)
    }

    /// One-variable q-deformed model with weights `[n]_q! ℏⁿ`.
    pub fn q_bargmann(q: BigRational, hbar: BigRational) -> Result<Self, QuantError> {
        Model::new(Presentation::commutative(vec!["z".to_string()]), GramData::q_bargmann(q, hbar)?)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn gram(&self) -> &GramData {
        &self.gram
    }

    pub fn n_generators(&self) -> usize {
        self.pres.n_generators()
    }

    pub fn names(&self) -> &[String] {
        self.pres.names()
    }

    /// The truncation of `𝒫` to degree `≤ d`.
    pub fn space(&self, d: usize) -> Result<TruncatedSpace<'_>, QuantError> {
        let n = self.n_generators();
        let blocks = (0..=d).map(|k| self.gram.block(n, k)).collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedSpace { model: self, basis: Arc::new(Basis::new(n, d)), blocks })
    }
}

/// `𝒫_{≤D}` with its Gram blocks; all operator constructions live here.
#[derive(Debug, Clone)]
pub struct TruncatedSpace<'m> {
    model: &'m Model,
    basis: Arc<Basis>,
    blocks: Vec<GramBlock>,
}

impl<'m> TruncatedSpace<'m> {
    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn presentation(&self) -> &'m Presentation {
        &self.model.pres
    }

    pub fn gram_block(&self, d: usize) -> &GramBlock {
        &self.blocks[d]
    }

    pub fn identity(&self) -> TruncatedOperator {
        TruncatedOperator::identity(self.basis.clone())
    }

    fn check_degree(&self, p: &NcPoly) -> Result<(), QuantError> {
        match p.degree() {
            Some(d) if d > self.degree() => Err(QuantError::DegreeTooLarge { got: d, max: self.degree() }),
            _ => Ok(()),
        }
    }

    /// `⟨v, w⟩` on coordinate vectors, conjugate-linear in `v`.
    pub fn inner_product_vec(&self, v: &SparseVec, w: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, vi) in v.iter() {
            let d = self.basis.degree_of(i);
            let start = self.basis.degree_range(d).start;
            for (j, wj) in w.iter() {
                if self.basis.degree_of(j) != d {
                    continue;
                }
                let g = self.blocks[d].entry(i - start, j - start);
                if !g.is_zero() {
                    acc += &(&(&vi.conj() * &g) * wj);
                }
            }
        }
        acc
    }

    /// `⟨φ, ψ⟩_H`, conjugate-linear in the first argument.
    pub fn inner_product(&self, phi: &NcPoly, psi: &NcPoly) -> Result<Scalar, QuantError> {
        self.check_degree(phi)?;
        self.check_degree(psi)?;
        Ok(self.inner_product_vec(&self.basis.coordinates(phi), &self.basis.coordinates(psi)))
    }

    /// `⟨ψ₁, ψ₂⟩_{𝒫*} := ⟨ψ₂*, ψ₁*⟩_H` for `ψ₁, ψ₂ ∈ 𝒫*`.
    pub fn star_inner_product(&self, psi1: &SymbolElem, psi2: &SymbolElem) -> Result<Scalar, QuantError> {
        let a = psi1.star_preimage()?;
        let b = psi2.star_preimage()?;
        self.inner_product(&b, &a)
    }

    /// `A*(h) = T_h = M_h : φ ↦ φ h`, truncated at degree `D`.
    pub fn creation_op(&self, h: &NcPoly) -> TruncatedOperator {
        let pres = self.presentation();
        let columns = self
            .basis
            .monomials()
            .iter()
            .map(|m| self.basis.coordinates(&pres.multiply(&NcPoly::monomial(m.clone()), h)))
            .collect();
        let raise = h.degree().unwrap_or(0) as i64;
        TruncatedOperator::from_columns(self.basis.clone(), columns, raise)
    }

    /// `A(k) = T_{k*}`, the Gram adjoint of `A*(k)`.
    ///
    /// Column `j` is the unique `a` with `⟨a, e_i⟩ = ⟨e_j, M_k e_i⟩` for all
    /// basis `e_i`; degree by degree this reads `G_t a_t = conj(b_t)`. Since
    /// `M_k e_i` is exact in degrees `≤ D`, so is every column.
    pub fn annihilation_op(&self, k: &NcPoly) -> TruncatedOperator {
        let creation = self.creation_op(k);
        let dim = self.basis.len();
        // pairing[j][i] = ⟨e_j, M_k e_i⟩
        let mut pairing: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); dim];
        for i in 0..dim {
            for (m, v) in creation.column(i).iter() {
                let d = self.basis.degree_of(m);
                let start = self.basis.degree_range(d).start;
                for (jj, g) in self.blocks[d].column(m - start) {
                    let slot = pairing[start + jj].entry(i).or_insert_with(Scalar::zero);
                    *slot += &(&g * v);
                }
            }
        }
        let columns = pairing
            .into_iter()
            .map(|row| self.solve_graded(row.into_iter().map(|(i, b)| (i, b.conj()))))
            .collect();
        let raise = -(k.low_degree().unwrap_or(0) as i64);
        TruncatedOperator::from_columns(self.basis.clone(), columns, raise)
    }

    /// Solves `G x = rhs` blockwise; `rhs` is given sparsely.
    fn solve_graded<I: IntoIterator<Item = (usize, Scalar)>>(&self, rhs: I) -> SparseVec {
        let mut by_degree: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (i, b) in rhs {
            if !b.is_zero() {
                by_degree.entry(self.basis.degree_of(i)).or_default().push((i, b));
            }
        }
        let mut out = SparseVec::new();
        for (d, entries) in by_degree {
            let range = self.basis.degree_range(d);
            let mut b = vec![Scalar::zero(); range.len()];
            for (i, v) in entries {
                b[i - range.start] = v;
            }
            for (off, x) in self.blocks[d].solve(&b).into_iter().enumerate() {
                out.add(range.start + off, &x);
            }
        }
        out
    }

    /// `T_g = Σ_k A(k) A*(H_k)` where `g = Σ_k H_k·k*` groups the terms of
    /// `g` by their anti-holomorphic monomial.
    pub fn toeplitz_op(&self, g: &SymbolElem) -> TruncatedOperator {
        let n = self.basis.n_generators();
        let mut groups: BTreeMap<&Monomial, NcPoly> = BTreeMap::new();
        for (h, k, c) in g.terms() {
            groups.entry(k).or_insert_with(|| NcPoly::zero(n)).add_term(h.clone(), c);
        }
        let mut total: Option<TruncatedOperator> = None;
        for (k, holo) in groups {
            let create = self.creation_op(&holo);
            let op = if k.is_one() {
                create
            } else {
                self.annihilation_op(&NcPoly::monomial(k.clone())).compose(&create)
            };
            total = Some(match total {
                None => op,
                Some(t) => t.add(&op),
            });
        }
        total.unwrap_or_else(|| TruncatedOperator::zero(self.basis.clone()))
    }

    /// `A(k)·A*(h)`, the Toeplitz operator of the single symbol `h·k*`.
    pub fn anti_wick_op(&self, h: &NcPoly, k: &NcPoly) -> TruncatedOperator {
        self.annihilation_op(k).compose(&self.creation_op(h))
    }

    /// `P(g) := T_g 1`, computed without forming operator matrices: for a term
    /// `h·k*` the value is the `p` with `⟨p, e_i⟩ = ⟨h, e_i k⟩` for every
    /// basis `e_i` of degree `≤ D`.
    pub fn projection(&self, g: &SymbolElem) -> Result<NcPoly, QuantError> {
        let (hd, _) = g.bidegree();
        if hd > self.degree() {
            return Err(QuantError::DegreeTooLarge { got: hd, max: self.degree() });
        }
        let pres = self.presentation();
        let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (h, k, c) in g.terms() {
            let h_vec = SparseVec::unit(self.basis.index_of(h).expect("degree checked"));
            let k_poly = NcPoly::monomial(k.clone());
            for (i, m) in self.basis.monomials().iter().enumerate() {
                if m.degree() + k.degree() != h.degree() {
                    continue;
                }
                let moved = pres.multiply(&NcPoly::monomial(m.clone()), &k_poly);
                let b = self.inner_product_vec(&h_vec, &self.basis.coordinates(&moved));
                // ⟨c h, ·⟩ is conjugate-linear in c
                let slot = rhs.entry(i).or_insert_with(Scalar::zero);
                *slot += &(&c.conj() * &b);
            }
        }
        let sol = self.solve_graded(rhs.into_iter().map(|(i, b)| (i, b.conj())));
        Ok(self.basis.poly(&sol))
    }

    /// The two sides of `g ∈ ker T ⇔ Ran M_g ⊂ ker P` on the validity region:
    /// whether `T_g` vanishes there, and whether `P(φ g) = 0` for every basis
    /// monomial `φ` there.
    pub fn kernel_witness_check(&self, g: &SymbolElem) -> Result<(bool, bool), QuantError> {
        let t = self.toeplitz_op(g);
        let toeplitz_vanishes = t.vanishes_on_valid();
        let pres = self.presentation();
        let mut range_in_kernel = true;
        for j in t.valid_columns() {
            let phi = NcPoly::monomial(self.basis.monomial(j).clone());
            if !self.projection(&g.left_act(&phi, pres))?.is_zero() {
                range_in_kernel = false;
                break;
            }
        }
        Ok((toeplitz_vanishes, range_in_kernel))
    }

    pub fn vector(&self, p: &NcPoly) -> Result<SparseVec, QuantError> {
        self.check_degree(p)?;
        Ok(self.basis.coordinates(p))
    }

    /// Applies an operator to `φ`, rejecting inputs beyond its validity region.
    pub fn apply(&self, op: &TruncatedOperator, phi: &NcPoly) -> Result<NcPoly, QuantError> {
        let d = phi.degree().unwrap_or(0) as i64;
        if d > op.valid_in_degree() {
            return Err(QuantError::OutsideValidity { valid: op.valid_in_degree() });
        }
        Ok(self.basis.poly(&op.apply(&self.vector(phi)?)))
    }
}
