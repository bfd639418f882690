//! Canonical commutation relations: the free algebra on the letters
//! `G[z_i]`, `G[z_i*]`, its evaluation `π` into Toeplitz operators, the
//! relations found in `ker π` at finite truncation, their classical parts,
//! `ℏ`-deformations and the dequantized algebra.

mod deform;
mod dequantize;
mod relations;
mod word;

pub use deform::DeformedRelation;
pub use dequantize::{dequantize, Dequantized, MAX_SLICE_WORDS};
pub use relations::{
    classical_relation, find_relations, pi_eval, span_contains, words_up_to, ClassicalRelation, Evaluator, Relation,
    RelationReport,
};
pub use word::{FreeElem, FreeWord, Letter};

use crate::quantization::QuantError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CcrError {
    #[error("commutation relations are computed at hbar = 1, model has hbar = {0}")]
    HbarNotOne(String),
    #[error("dmax must be at least 1")]
    DmaxZero,
    #[error("truncation degree {degree} is below 2·dmax = {}", 2 * dmax)]
    DegreeTooSmall { degree: usize, dmax: usize },
    #[error("word of degree {degree} exceeds dmax = {dmax}")]
    WordTooLong { degree: usize, dmax: usize },
    #[error("the zero element is not a relation")]
    ZeroRelation,
    #[error("cannot specialize negative powers of s at s = 0")]
    SingularSpecialization,
    #[error("degree {degree} slice has more than {limit} words; lower the table degree")]
    TableTooLarge { degree: usize, limit: usize },
    #[error(transparent)]
    Quant(#[from] QuantError),
}
