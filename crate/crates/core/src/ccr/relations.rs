use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::linalg::{bareiss_echelon, rref, SparseEchelon, SparseVec};
use crate::poly::NcPoly;
use crate::quantization::{Model, TruncatedOperator, TruncatedSpace};
use crate::scalar::Scalar;

use super::word::{FreeElem, FreeWord, Letter};
use super::CcrError;

/// A nonzero element of `ker π` found at finite truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    elem: FreeElem,
    top_degree: usize,
}

impl Relation {
    pub fn new(elem: FreeElem) -> Result<Self, CcrError> {
        let top_degree = elem.degree().ok_or(CcrError::ZeroRelation)?;
        Ok(Relation { elem, top_degree })
    }

    pub fn elem(&self) -> &FreeElem {
        &self.elem
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    /// `[R₀, …, R_n]` split by word degree; some parts may be zero.
    pub fn homogeneous_parts(&self) -> Vec<FreeElem> {
        (0..=self.top_degree).map(|d| self.elem.homogeneous_part(d)).collect()
    }

    /// The classical part `R_n`.
    pub fn top_part(&self) -> FreeElem {
        self.elem.homogeneous_part(self.top_degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.elem.is_homogeneous()
    }

    pub fn render(&self, names: &[String]) -> String {
        self.elem.render(names)
    }
}

/// Evaluation morphism `π` on a fixed truncation, with the letter matrices
/// cached. Only defined at `ℏ = 1`.
#[derive(Debug, Clone)]
pub struct Evaluator<'m> {
    space: TruncatedSpace<'m>,
    dmax: usize,
    holo: Vec<TruncatedOperator>,
    anti: Vec<TruncatedOperator>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model, degree: usize, dmax: usize) -> Result<Self, CcrError> {
        if !model.gram().hbar().is_one() {
            return Err(CcrError::HbarNotOne(model.gram().hbar().to_string()));
        }
        if dmax == 0 {
            return Err(CcrError::DmaxZero);
        }
        if degree < 2 * dmax {
            return Err(CcrError::DegreeTooSmall { degree, dmax });
        }
        let space = model.space(degree)?;
        let n = model.n_generators();
        let holo = (0..n).map(|i| space.creation_op(&NcPoly::generator(n, i))).collect();
        let anti = (0..n).map(|i| space.annihilation_op(&NcPoly::generator(n, i))).collect();
        Ok(Evaluator { space, dmax, holo, anti })
    }

    pub fn space(&self) -> &TruncatedSpace<'m> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.space.degree()
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    /// Columns of degree `≤ D − dmax`, where every word of length `≤ dmax`
    /// is represented exactly.
    pub fn column_limit(&self) -> usize {
        self.degree() - self.dmax
    }

    pub fn letter(&self, l: Letter) -> &TruncatedOperator {
        if l.star { &self.anti[l.gen] } else { &self.holo[l.gen] }
    }

    /// `π(G_{a₁}⋯G_{a_k}) = T_{a₁}∘⋯∘T_{a_k}`.
    pub fn eval(&self, w: &FreeWord) -> Result<TruncatedOperator, CcrError> {
        if w.degree() > self.dmax {
            return Err(CcrError::WordTooLong { degree: w.degree(), dmax: self.dmax });
        }
        Ok(TruncatedOperator::product(self.space.basis(), w.letters().iter().map(|&l| self.letter(l))))
    }

    pub fn eval_elem(&self, e: &FreeElem) -> Result<TruncatedOperator, CcrError> {
        let mut acc = TruncatedOperator::zero(self.space.basis().clone());
        for (w, c) in e.terms() {
            acc = acc.add_scaled(&self.eval(w)?, c);
        }
        Ok(acc)
    }

    /// Whether `π(e)` vanishes on every column of degree `≤ D − dmax`.
    pub fn vanishes(&self, e: &FreeElem) -> Result<bool, CcrError> {
        let op = self.eval_elem(e)?;
        let basis = self.space.basis();
        Ok((0..basis.len()).filter(|&j| basis.degree_of(j) <= self.column_limit()).all(|j| op.column(j).is_zero()))
    }

    /// Appends the nonzero entries of each word's matrix, restricted to the
    /// exact columns, as rows `(row, column) ↦ [entry per word]`.
    fn flatten_into(&self, words: &[FreeWord], rows: &mut Vec<Vec<Scalar>>) -> Result<(), CcrError> {
        let basis = self.space.basis();
        let limit = self.column_limit();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, w) in words.iter().enumerate() {
            let op = self.eval(w)?;
            debug_assert!(op.valid_in_degree() >= limit as i64);
            for j in (0..basis.len()).filter(|&j| basis.degree_of(j) <= limit) {
                for (i, c) in op.column(j).iter() {
                    let slot = *index.entry((i, j)).or_insert_with(|| {
                        rows.push(vec![Scalar::zero(); words.len()]);
                        rows.len() - 1
                    });
                    rows[slot][k] = c.clone();
                }
            }
        }
        Ok(())
    }
}

/// `π(w)` for a single word at truncation `degree`.
pub fn pi_eval(model: &Model, w: &FreeWord, degree: usize, dmax: usize) -> Result<TruncatedOperator, CcrError> {
    Evaluator::new(model, degree, dmax)?.eval(w)
}

/// All words of degree `≤ dmax` over the `2n` letters, increasing.
pub fn words_up_to(n: usize, dmax: usize) -> Vec<FreeWord> {
    (0..=dmax).flat_map(|d| FreeWord::all_of_degree(n, d)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    /// Reduced echelon basis of the certified kernel, largest leading word first.
    pub relations: Vec<Relation>,
    pub truncations: (usize, usize),
    pub dmax: usize,
    pub words: usize,
    /// Kernel dimension at `D` alone, before the second truncation.
    pub kernel_dim_first: usize,
}

impl RelationReport {
    pub fn label(&self) -> String {
        format!("relations certified at truncation ({}, {})", self.truncations.0, self.truncations.1)
    }

    pub fn minimality_note() -> &'static str {
        "vector-space basis of relations of degree <= dmax; a minimal generating set of the ideal is not computed"
    }
}

/// Kernel of `π` on words of degree `≤ dmax`, certified at `D` and `D + 2`.
///
/// Both flattened systems are stacked, so the result is exactly the
/// intersection of the two truncated kernels.
pub fn find_relations(model: &Model, dmax: usize, degree: usize) -> Result<RelationReport, CcrError> {
    let words = words_up_to(model.n_generators(), dmax);
    let first = Evaluator::new(model, degree, dmax)?;
    let second = Evaluator::new(model, degree + 2, dmax)?;

    let mut rows = Vec::new();
    first.flatten_into(&words, &mut rows)?;
    let kernel_dim_first = words.len() - bareiss_echelon(rows.clone(), words.len()).rank();
    second.flatten_into(&words, &mut rows)?;
    let kernel = bareiss_echelon(rows, words.len()).nullspace();

    // reduce with columns in decreasing word order so pivots are leading words
    let reversed: Vec<Vec<Scalar>> = kernel.into_iter().map(|v| v.into_iter().rev().collect()).collect();
    let reduced = rref(reversed, words.len());
    let relations = reduced
        .into_iter()
        .map(|row| {
            let last = words.len() - 1;
            let elem = FreeElem::from_terms(row.into_iter().enumerate().map(|(k, c)| (words[last - k].clone(), c)));
            Relation::new(elem)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RelationReport { relations, truncations: (degree, degree + 2), dmax, words: words.len(), kernel_dim_first })
}

/// `R_n` together with its membership flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRelation {
    pub part: FreeElem,
    /// `R_n` lies in the span of the certified relations.
    pub in_relation_span: bool,
}

/// Top-degree part of `r`, flagged by whether it is itself a relation.
pub fn classical_relation(r: &Relation, certified: &[Relation], n: usize) -> ClassicalRelation {
    let part = r.top_part();
    let in_relation_span = span_contains(certified.iter().map(Relation::elem), &part, n);
    ClassicalRelation { part, in_relation_span }
}

/// Linear-span membership over word coordinates.
pub fn span_contains<'a, I>(basis: I, x: &FreeElem, n: usize) -> bool
where
    I: IntoIterator<Item = &'a FreeElem>,
{
    let coords = |e: &FreeElem| -> SparseVec { e.terms().map(|(w, c)| (w.global_index(n), c.clone())).collect() };
    let mut ech = SparseEchelon::new();
    for b in basis {
        ech.insert(coords(b));
    }
    !ech.insert(coords(x))
}
