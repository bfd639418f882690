use crate::linalg::{SparseEchelon, SparseVec};

use super::relations::Relation;
use super::word::{FreeElem, FreeWord};
use super::CcrError;

/// Largest number of words of one degree the dimension table will handle.
pub const MAX_SLICE_WORDS: usize = 1 << 18;

/// Presentation of the free algebra modulo the classical parts, with the
/// dimensions of its graded components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dequantized {
    pub n_generators: usize,
    /// Distinct nonzero classical parts, in input order.
    pub relations: Vec<FreeElem>,
    /// `dimensions[d]` for `d = 0..=degree_bound`.
    pub dimensions: Vec<usize>,
}

/// Graded dimensions of `ℱ / ⟨R_n : R ∈ relations⟩` up to `degree_bound`,
/// where `ℱ` is free on the `2n` letters `G[z_i]`, `G[z_i*]`.
///
/// The degree-`d` slice of the two-sided ideal is spanned by `u·R_n·v` with
/// `|u| + |v| = d − n`; its rank is taken by sparse exact elimination.
pub fn dequantize(relations: &[Relation], n: usize, degree_bound: usize) -> Result<Dequantized, CcrError> {
    let mut generators: Vec<FreeElem> = Vec::new();
    for r in relations {
        let top = r.top_part();
        if !top.is_zero() && !generators.contains(&top) {
            generators.push(top);
        }
    }
    let letters = 2 * n;
    let mut dimensions = Vec::with_capacity(degree_bound + 1);
    for d in 0..=degree_bound {
        let words = letters
            .checked_pow(d as u32)
            .filter(|&w| w <= MAX_SLICE_WORDS)
            .ok_or(CcrError::TableTooLarge { degree: d, limit: MAX_SLICE_WORDS })?;
        let mut ech = SparseEchelon::new();
        for g in &generators {
            let m = g.degree().expect("nonzero");
            if m > d {
                continue;
            }
            for left in 0..=d - m {
                let right = d - m - left;
                for u in FreeWord::all_of_degree(n, left) {
                    for v in FreeWord::all_of_degree(n, right) {
                        let row: SparseVec =
                            g.terms().map(|(w, c)| (u.concat(w).concat(&v).code(n), c.clone())).collect();
                        ech.insert(row);
                        if ech.rank() == words {
                            break;
                        }
                    }
                }
            }
        }
        dimensions.push(words - ech.rank());
    }
    Ok(Dequantized { n_generators: n, relations: generators, dimensions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_algebra_dimensions() {
        let dq = dequantize(&[], 2, 4).unwrap();
        assert_eq!(dq.dimensions, vec![1, 4, 16, 64, 256]);
        assert!(dq.relations.is_empty());
    }

    #[test]
    fn refuses_huge_slices() {
        assert!(matches!(dequantize(&[], 2, 20), Err(CcrError::TableTooLarge { degree: 10, .. })));
    }
}
