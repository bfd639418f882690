use std::sync::Arc;

use num_traits::{One, Zero};

use crate::linalg::SparseVec;
use crate::scalar::Scalar;

use super::basis::Basis;

/// Exact matrix of a linear map on the degree-`≤ D` part of `𝒫`, stored by
/// sparse columns, together with its validity bookkeeping.
///
/// `raise` bounds the degree increase of every column. `valid_in_degree` is
/// the largest input degree on which the matrix agrees with the untruncated
/// operator; columns above it may have lost mass past degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedOperator {
    basis: Arc<Basis>,
    columns: Vec<SparseVec>,
    raise: i64,
    valid_in_degree: i64,
}

impl TruncatedOperator {
    pub fn from_columns(basis: Arc<Basis>, columns: Vec<SparseVec>, raise: i64) -> Self {
        assert_eq!(columns.len(), basis.len());
        let valid_in_degree = basis.max_degree() as i64 - raise.max(0);
        TruncatedOperator { basis, columns, raise, valid_in_degree }
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let columns = (0..basis.len()).map(SparseVec::unit).collect();
        TruncatedOperator::from_columns(basis, columns, 0)
    }

    pub fn zero(basis: Arc<Basis>) -> Self {
        let columns = vec![SparseVec::new(); basis.len()];
        TruncatedOperator::from_columns(basis, columns, 0)
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn raise(&self) -> i64 {
        self.raise
    }

    pub fn valid_in_degree(&self) -> i64 {
        self.valid_in_degree
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.columns[col].get(row)
    }

    pub fn is_valid_column(&self, j: usize) -> bool {
        (self.basis.degree_of(j) as i64) <= self.valid_in_degree
    }

    /// Indices of the columns inside the validity region.
    pub fn valid_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&j| self.is_valid_column(j))
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c);
        }
        out
    }

    /// `self ∘ rhs`, i.e. apply `rhs` first.
    pub fn compose(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        assert_eq!(self.basis, rhs.basis, "operators live on different truncations");
        let columns = rhs.columns.iter().map(|c| self.apply(c)).collect();
        TruncatedOperator {
            basis: self.basis.clone(),
            columns,
            raise: self.raise + rhs.raise,
            valid_in_degree: rhs.valid_in_degree.min(self.valid_in_degree - rhs.raise),
        }
    }

    /// Ordered product `ops[0] ∘ ops[1] ∘ ⋯`; identity when empty.
    pub fn product<'a, I>(basis: &Arc<Basis>, ops: I) -> TruncatedOperator
    where
        I: IntoIterator<Item = &'a TruncatedOperator>,
    {
        ops.into_iter()
            .fold(TruncatedOperator::identity(basis.clone()), |acc, op| acc.compose(op))
    }

    pub fn add(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.add_scaled(rhs, &Scalar::one())
    }

    pub fn sub(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.add_scaled(rhs, &-Scalar::one())
    }

    /// `self + c · rhs`.
    pub fn add_scaled(&self, rhs: &TruncatedOperator, c: &Scalar) -> TruncatedOperator {
        assert_eq!(self.basis, rhs.basis, "operators live on different truncations");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut col = a.clone();
                col.add_scaled(b, c);
                col
            })
            .collect();
        TruncatedOperator {
            basis: self.basis.clone(),
            columns,
            raise: self.raise.max(rhs.raise),
            valid_in_degree: self.valid_in_degree.min(rhs.valid_in_degree),
        }
    }

    pub fn scale(&self, c: &Scalar) -> TruncatedOperator {
        TruncatedOperator {
            basis: self.basis.clone(),
            columns: self.columns.iter().map(|col| col.scale(c)).collect(),
            raise: self.raise,
            valid_in_degree: self.valid_in_degree,
        }
    }

    /// Compares with `other` on the columns valid for both. Returns the first
    /// differing column index on failure.
    pub fn agrees_on_valid(&self, other: &TruncatedOperator) -> Result<(), usize> {
        assert_eq!(self.basis, other.basis, "operators live on different truncations");
        let limit = self.valid_in_degree.min(other.valid_in_degree);
        for j in 0..self.dim() {
            if self.basis.degree_of(j) as i64 > limit {
                break;
            }
            if self.columns[j] != other.columns[j] {
                return Err(j);
            }
        }
        Ok(())
    }

    /// True when every valid column is zero.
    pub fn vanishes_on_valid(&self) -> bool {
        self.valid_columns().all(|j| self.columns[j].is_zero())
    }

    /// Checks the support invariant: column of degree `d` only reaches
    /// degrees `≤ d + raise`.
    pub fn respects_raise(&self) -> bool {
        (0..self.dim()).all(|j| {
            let d = self.basis.degree_of(j) as i64;
            self.columns[j].iter().all(|(i, _)| self.basis.degree_of(i) as i64 <= d + self.raise)
        })
    }

    /// Dense row-major copy.
    pub fn to_dense_rows(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut rows = vec![vec![Scalar::zero(); n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.iter() {
                rows[i][j] = c.clone();
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_propagates_through_composition() {
        let b = Arc::new(Basis::new(1, 5));
        // shift e_n -> e_{n+1}, truncated
        let cols: Vec<SparseVec> = (0..6).map(|j| if j < 5 { SparseVec::unit(j + 1) } else { SparseVec::new() }).collect();
        let up = TruncatedOperator::from_columns(b.clone(), cols, 1);
        assert_eq!(up.valid_in_degree(), 4);
        let cols: Vec<SparseVec> = (0..6).map(|j| if j > 0 { SparseVec::unit(j - 1) } else { SparseVec::new() }).collect();
        let down = TruncatedOperator::from_columns(b.clone(), cols, -1);
        assert_eq!(down.valid_in_degree(), 5);
        let up_up = up.compose(&up);
        assert_eq!(up_up.valid_in_degree(), 3);
        assert_eq!(up_up.raise(), 2);
        let down_up = down.compose(&up);
        assert_eq!(down_up.valid_in_degree(), 4);
        assert!(down_up.agrees_on_valid(&TruncatedOperator::identity(b.clone())).is_ok());
        // outside the valid region the truncation shows
        assert!(down_up.column(5).is_zero());
        let up_down = up.compose(&down);
        assert_eq!(up_down.valid_in_degree(), 5);
        assert!(up_down.respects_raise());
    }
}
