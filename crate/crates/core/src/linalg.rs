//! Exact linear algebra over `ℚ(i)`: sparse vectors, small dense matrices,
//! fraction-free (Bareiss) row echelon form and nullspaces.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Sparse vector keyed by coordinate index. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = SparseVec::new();
        v.add(i, &Scalar::one());
        v
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
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

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, v) in &other.entries {
            self.add(i, &(v * c));
        }
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_scaled(self, c);
        out
    }

    /// Largest index carrying a nonzero entry.
    pub fn last(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next_back().map(|(&i, c)| (i, c))
    }

    pub fn retain<F: FnMut(usize) -> bool>(&mut self, mut keep: F) {
        self.entries.retain(|&i, _| keep(i));
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in iter {
            v.add(i, &c);
        }
        v
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = DenseMatrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (r..self.cols).all(|c| *self.get(r, c) == self.get(c, r).conj()))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Leading principal minors `det M[..k, ..k]` for `k = 1..=n`, read off
    /// as running products of the pivots of elimination without row swaps.
    /// Once a pivot vanishes the remaining minors are reported as zero.
    pub fn leading_principal_minors(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut out = Vec::with_capacity(n);
        let mut det = Scalar::one();
        for k in 0..n {
            let p = a.get(k, k).clone();
            if p.is_zero() {
                out.extend(std::iter::repeat_n(Scalar::zero(), n - k));
                break;
            }
            det = &det * &p;
            out.push(det.clone());
            for r in k + 1..n {
                let f = a.get(r, k) / &p;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c) - &(&f * a.get(k, c));
                    a.set(r, c, v);
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss–Jordan elimination, `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv = a.get(c, c).inv().expect("nonzero pivot");
            a.scale_row(c, &piv);
            inv.scale_row(c, &piv);
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                a.sub_row_multiple(r, c, &f);
                inv.sub_row_multiple(r, c, &f);
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Scalar) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = &self.data[idx] * f;
        }
    }

    /// `row[r] -= f · row[src]`
    fn sub_row_multiple(&mut self, r: usize, src: usize, f: &Scalar) {
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = &self.data[r * self.cols + c] - &(f * s);
            self.data[r * self.cols + c] = v;
        }
    }
}

/// Fraction-free row echelon form of a matrix over `ℚ(i)`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    /// Nonzero rows in echelon order; entries are Gaussian integers.
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : A x = 0}` by back substitution, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Scalar::zero(); self.cols];
                x[f] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
                    let mut acc = Scalar::zero();
                    for j in p + 1..self.cols {
                        if !row[j].is_zero() && !x[j].is_zero() {
                            acc += &(&row[j] * &x[j]);
                        }
                    }
                    x[p] = -(&acc / &row[p]);
                }
                x
            })
            .collect()
    }
}

/// Scales a row to Gaussian-integer entries by the lcm of its denominators.
fn clear_denominators(row: &mut [Scalar]) {
    let lcm = row.iter().fold(BigInt::one(), |acc, s| acc.lcm(&s.denominator_lcm()));
    if lcm.is_one() {
        return;
    }
    let f = Scalar::real(BigRational::from_integer(lcm));
    for s in row.iter_mut() {
        if !s.is_zero() {
            *s = &*s * &f;
        }
    }
}

/// Bareiss elimination. Every division by the previous pivot is exact in
/// `ℤ[i]`, so intermediate entries stay integral and bounded by minors.
pub fn bareiss_echelon(mut rows: Vec<Vec<Scalar>>, cols: usize) -> Echelon {
    rows.retain(|r| r.iter().any(|s| !s.is_zero()));
    for r in rows.iter_mut() {
        assert_eq!(r.len(), cols);
        clear_denominators(r);
    }
    let mut pivots = Vec::new();
    let mut prev = Scalar::one();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let (head, tail) = rows.split_at_mut(top + 1);
        let pivot_row = &head[top];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &(&piv * &row[j]) - &(&lead * &pivot_row[j]);
                row[j] = if v.is_zero() { v } else { &v / &prev };
                debug_assert!(row[j].is_gaussian_integer());
            }
            row[c] = Scalar::zero();
        }
        prev = piv;
        pivots.push(c);
        top += 1;
        // drop rows that became zero to keep later passes short
        let rest: Vec<Vec<Scalar>> =
            rows.drain(top..).filter(|r| r.iter().any(|s| !s.is_zero())).collect();
        rows.extend(rest);
    }
    rows.truncate(top);
    Echelon { cols, rows, pivots }
}

/// Reduced row echelon form over the field with leading coefficients 1.
pub fn rref(mut rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = rows[top][c].inv().expect("nonzero pivot");
        for v in rows[top].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
        }
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    rows
}

/// Incremental sparse row reduction keyed on each row's largest index.
/// Used for ranks of large, very sparse systems (graded ideal slices).
#[derive(Debug, Default)]
pub struct SparseEchelon {
    pivots: HashMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots; stores it and returns true if
    /// it was independent.
    pub fn insert(&mut self, mut row: SparseVec) -> bool {
        while let Some((lead, c)) = row.last() {
            match self.pivots.get(&lead) {
                Some(p) => {
                    let f = -c.clone();
                    row.add_scaled(p, &f);
                }
                None => {
                    let inv = c.inv().expect("nonzero lead");
                    self.pivots.insert(lead, row.scale(&inv));
                    return true;
                }
            }
        }
        false
    }
}
