//! Graded inner products on `𝒫`: the Segal–Bargmann weights `α! ℏ^{|α|}`,
//! their q-deformation `[n]_q! ℏⁿ`, or explicit per-degree Hermitian blocks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::DenseMatrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::scalar::Scalar;

use super::QuantError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramKind {
    Bargmann,
    QBargmann,
    Explicit,
}

impl GramKind {
    pub fn name(self) -> &'static str {
        match self {
            GramKind::Bargmann => "bargmann",
            GramKind::QBargmann => "q-bargmann",
            GramKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramData {
    kind: GramKind,
    hbar: BigRational,
    q: Option<BigRational>,
    /// `blocks[d]` is the Gram matrix of the degree-`d` monomials (explicit only).
    blocks: Vec<DenseMatrix>,
}

/// q-integer `[n]_q = 1 + q + ⋯ + q^{n−1}`.
pub fn q_integer(q: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::zero();
    let mut pow = BigRational::one();
    for _ in 0..n {
        acc += &pow;
        pow *= q;
    }
    acc
}

pub fn q_factorial(q: &BigRational, n: u32) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * q_integer(q, k))
}

impl GramData {
    pub fn bargmann(hbar: BigRational) -> Result<Self, QuantError> {
        check_hbar(&hbar)?;
        Ok(GramData { kind: GramKind::Bargmann, hbar, q: None, blocks: Vec::new() })
    }

    /// Requires `q > −1`, which is exactly when every `[n]_q` is positive.
    pub fn q_bargmann(q: BigRational, hbar: BigRational) -> Result<Self, QuantError> {
        check_hbar(&hbar)?;
        if q <= -BigRational::one() {
            return Err(QuantError::NonPositiveWeight(format!("[2]_q = {} for q = {q}", q_integer(&q, 2))));
        }
        Ok(GramData { kind: GramKind::QBargmann, hbar, q: Some(q), blocks: Vec::new() })
    }

    /// Explicit Hermitian positive definite blocks, one per degree starting at 0.
    pub fn explicit(blocks: Vec<DenseMatrix>, hbar: BigRational) -> Result<Self, QuantError> {
        check_hbar(&hbar)?;
        for (d, b) in blocks.iter().enumerate() {
            if !b.is_hermitian() {
                return Err(QuantError::NotHermitian(d));
            }
            if let Some(bad) = b.leading_principal_minors().iter().position(|m| !m.is_positive_real()) {
                return Err(QuantError::NotPositiveDefinite { degree: d, minor: bad + 1 });
            }
        }
        Ok(GramData { kind: GramKind::Explicit, hbar, q: None, blocks })
    }

    pub fn kind(&self) -> GramKind {
        self.kind
    }

    pub fn hbar(&self) -> &BigRational {
        &self.hbar
    }

    pub fn q(&self) -> Option<&BigRational> {
        self.q.as_ref()
    }

    /// Highest degree with an inner product, `None` when unbounded.
    pub fn degree_limit(&self) -> Option<usize> {
        match self.kind {
            GramKind::Explicit => self.blocks.len().checked_sub(1),
            _ => None,
        }
    }

    /// Closed-form weight of a monomial for the diagonal presets.
    pub fn weight(&self, m: &Monomial) -> Option<BigRational> {
        let d = m.degree() as u32;
        let hbar_pow = num_traits::pow(self.hbar.clone(), d as usize);
        match self.kind {
            GramKind::Bargmann => Some(BigRational::from_integer(m.factorial()) * hbar_pow),
            GramKind::QBargmann => Some(q_factorial(self.q.as_ref()?, d) * hbar_pow),
            GramKind::Explicit => None,
        }
    }

    /// Gram block of the degree-`d` monomials of an `n`-generator basis.
    pub fn block(&self, n: usize, d: usize) -> Result<GramBlock, QuantError> {
        match self.kind {
            GramKind::Explicit => {
                let m = self.blocks.get(d).ok_or(QuantError::GramDegree { degree: d })?;
                let expected = monomials_of_degree(n, d).len();
                if m.rows() != expected {
                    return Err(QuantError::GramShape { degree: d, expected, got: m.rows() });
                }
                if m.is_diagonal() {
                    return Ok(GramBlock::Diagonal((0..m.rows()).map(|i| m.get(i, i).clone()).collect()));
                }
                let inverse = m.inverse().expect("positive definite blocks are invertible");
                Ok(GramBlock::Dense { matrix: m.clone(), inverse })
            }
            _ => Ok(GramBlock::Diagonal(
                monomials_of_degree(n, d)
                    .iter()
                    .map(|m| Scalar::real(self.weight(m).expect("preset weight")))
                    .collect(),
            )),
        }
    }
}

fn check_hbar(hbar: &BigRational) -> Result<(), QuantError> {
    if !hbar.is_positive() {
        return Err(QuantError::NonPositiveHbar(hbar.to_string()));
    }
    Ok(())
}

/// Gram matrix of one degree, with its inverse for the dense case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GramBlock {
    Diagonal(Vec<Scalar>),
    Dense { matrix: DenseMatrix, inverse: DenseMatrix },
}

impl GramBlock {
    pub fn dim(&self) -> usize {
        match self {
            GramBlock::Diagonal(w) => w.len(),
            GramBlock::Dense { matrix, .. } => matrix.rows(),
        }
    }

    /// `G[i][j] = ⟨e_i, e_j⟩` within the block.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        match self {
            GramBlock::Diagonal(w) if i == j => w[i].clone(),
            GramBlock::Diagonal(_) => Scalar::zero(),
            GramBlock::Dense { matrix, .. } => matrix.get(i, j).clone(),
        }
    }

    /// Nonzero entries of column `j`: pairs `(i, G[i][j])`.
    pub fn column(&self, j: usize) -> Vec<(usize, Scalar)> {
        match self {
            GramBlock::Diagonal(w) => vec![(j, w[j].clone())],
            GramBlock::Dense { matrix, .. } => (0..matrix.rows())
                .filter(|&i| !matrix.get(i, j).is_zero())
                .map(|i| (i, matrix.get(i, j).clone()))
                .collect(),
        }
    }

    /// Solves `G x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Vec<Scalar> {
        match self {
            GramBlock::Diagonal(w) => b.iter().zip(w).map(|(x, w)| x / w).collect(),
            GramBlock::Dense { inverse, .. } => inverse.mul_vec(b),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            GramBlock::Diagonal(w) => DenseMatrix::diagonal(w),
            GramBlock::Dense { matrix, .. } => matrix.clone(),
        }
    }
}

/// `n!` as a rational, for closed-form oracles.
pub fn factorial(n: u32) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn q_numbers() {
        let q = r(2);
        assert_eq!(q_integer(&q, 0), r(0));
        assert_eq!(q_integer(&q, 3), r(7));
        assert_eq!(q_factorial(&q, 3), r(21));
        // q = 1 recovers ordinary factorials
        assert_eq!(q_factorial(&r(1), 5), factorial(5));
    }

    #[test]
    fn bargmann_weights() {
        let g = GramData::bargmann(r(2)).unwrap();
        let m = Monomial::from_exponents(vec![2, 1]);
        // 2!·1!·2³
        assert_eq!(g.weight(&m), Some(r(16)));
        assert_eq!(g.weight(&Monomial::one(2)), Some(r(1)));
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(GramData::bargmann(r(0)), Err(QuantError::NonPositiveHbar(_))));
        assert!(GramData::q_bargmann(r(-1), r(1)).is_err());
        assert!(GramData::q_bargmann(BigRational::new((-1).into(), 2.into()), r(1)).is_ok());
        let not_pd = DenseMatrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::from_int(2)],
            vec![Scalar::from_int(2), Scalar::from_int(1)],
        ]);
        let one = DenseMatrix::identity(1);
        assert!(matches!(
            GramData::explicit(vec![one.clone(), not_pd], r(1)),
            Err(QuantError::NotPositiveDefinite { degree: 1, minor: 2 })
        ));
        let not_herm = DenseMatrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::i()],
            vec![Scalar::i(), Scalar::from_int(1)],
        ]);
        assert!(matches!(GramData::explicit(vec![one, not_herm], r(1)), Err(QuantError::NotHermitian(1))));
    }
}
