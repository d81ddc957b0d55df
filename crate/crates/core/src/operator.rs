//! Sparse complex operators on the 2^n-dimensional Fock space.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A sparse complex matrix of dimension `2^modes`.
///
/// Entries are kept as `(row, col, value)` triples sorted by `(row, col)`, with
/// no duplicates and no stored exact zeros. Ladder matrices are built from
/// `±1` entries, which `f64` represents exactly, so sums and products of them
/// stay exact until irrational coefficients enter.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    modes: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl FockOperator {
    /// The zero operator on `modes` fermionic modes.
    pub fn zero(modes: usize) -> Self {
        assert!(
            modes >= 1 && modes < usize::BITS as usize,
            "mode count out of range"
        );
        Self {
            modes,
            entries: Vec::new(),
        }
    }

    pub fn identity(modes: usize) -> Self {
        Self::from_diagonal(modes, |_| ONE)
    }

    /// Diagonal operator whose entry at basis index `k` is `value(k)`.
    pub fn from_diagonal(modes: usize, mut value: impl FnMut(usize) -> Complex64) -> Self {
        let mut op = Self::zero(modes);
        op.entries = (0..op.dim())
            .map(|k| (k, k, value(k)))
            .filter(|&(_, _, v)| v != ZERO)
            .collect();
        op
    }

    /// Builds an operator from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(
        modes: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut op = Self::zero(modes);
        let dim = op.dim();
        let entries: Vec<_> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= dim || c >= dim) {
            return Err(Error::Argument(format!(
                "entry ({r}, {c}) outside a {dim}x{dim} operator"
            )));
        }
        op.entries = canonicalize(entries);
        Ok(op)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn position(&self, row: usize, col: usize) -> std::result::Result<usize, usize> {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.position(row, col).map_or(ZERO, |k| self.entries[k].2)
    }

    /// Stored entries of one row, as `(row, col, value)`.
    pub fn row(&self, row: usize) -> &[(usize, usize, Complex64)] {
        let start = self.entries.partition_point(|&(r, _, _)| r < row);
        let end = start + self.entries[start..].partition_point(|&(r, _, _)| r == row);
        &self.entries[start..end]
    }

    /// Iterates over stored entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Overwrites a single entry, removing it when `value` is zero.
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(
            row < self.dim() && col < self.dim(),
            "entry outside the operator"
        );
        match self.position(row, col) {
            Ok(k) if value == ZERO => {
                self.entries.remove(k);
            }
            Ok(k) => self.entries[k].2 = value,
            Err(_) if value == ZERO => {}
            Err(k) => self.entries.insert(k, (row, col, value)),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::Argument(format!(
                "operators on {} and {} modes are not composable",
                self.modes, other.modes
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.combine(other, ONE))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.combine(other, -ONE))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.matmul(other))
    }

    /// `self + factor * other`, merging the sorted entry lists.
    fn combine(&self, other: &Self, factor: Complex64) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && (a[i].0, a[i].1) <= (b[j].0, b[j].1));
            let take_b = i == a.len() || (j < b.len() && (b[j].0, b[j].1) <= (a[i].0, a[i].1));
            let (r, c, v) = match (take_a, take_b) {
                (true, true) => {
                    let e = (a[i].0, a[i].1, a[i].2 + factor * b[j].2);
                    i += 1;
                    j += 1;
                    e
                }
                (true, false) => {
                    i += 1;
                    a[i - 1]
                }
                _ => {
                    j += 1;
                    (b[j - 1].0, b[j - 1].1, factor * b[j - 1].2)
                }
            };
            if v != ZERO {
                out.push((r, c, v));
            }
        }
        Self {
            modes: self.modes,
            entries: out,
        }
    }

    fn matmul(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut scratch: Vec<(usize, Complex64)> = Vec::new();
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let end = start + self.entries[start..].partition_point(|&(r, _, _)| r == row);
            scratch.clear();
            for &(_, k, a) in &self.entries[start..end] {
                scratch.extend(other.row(k).iter().map(|&(_, c, b)| (c, a * b)));
            }
            scratch.sort_by_key(|&(c, _)| c);
            let mut pending: Option<(usize, Complex64)> = None;
            for &(c, v) in &scratch {
                match pending.as_mut() {
                    Some(p) if p.0 == c => p.1 += v,
                    _ => {
                        if let Some((pc, pv)) = pending.take() {
                            if pv != ZERO {
                                out.push((row, pc, pv));
                            }
                        }
                        pending = Some((c, v));
                    }
                }
            }
            if let Some((pc, pv)) = pending {
                if pv != ZERO {
                    out.push((row, pc, pv));
                }
            }
            start = end;
        }
        Self {
            modes: self.modes,
            entries: out,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            modes: self.modes,
            entries: self
                .entries
                .iter()
                .map(|&(r, c, v)| (r, c, v * factor))
                .filter(|&(_, _, v)| v != ZERO)
                .collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Self {
            modes: self.modes,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Self {
            modes: self.modes,
            entries,
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.matmul(other).combine(&other.matmul(self), -ONE))
    }

    /// `{self, other} = self·other + other·self`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.matmul(other).combine(&other.matmul(self), ONE))
    }

    /// Largest absolute entry (Chebyshev norm of the entries).
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|&&(r, c, _)| r == c)
            .map(|&(_, _, v)| v)
            .sum()
    }

    /// Dense row-major copy; only sensible for small mode counts.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![ZERO; self.dim()]; self.dim()];
        for &(r, c, v) in &self.entries {
            out[r][c] = v;
        }
        out
    }

    /// Linear combination `Σ coeff_k · ops_k`. All operators must share `modes`.
    pub fn linear_combination<'a>(
        modes: usize,
        terms: impl IntoIterator<Item = (Complex64, &'a FockOperator)>,
    ) -> Result<Self> {
        let mut acc = Self::zero(modes);
        let mut raw = Vec::new();
        for (coeff, op) in terms {
            acc.check_compatible(op)?;
            if coeff != ZERO {
                raw.extend(op.entries.iter().map(|&(r, c, v)| (r, c, coeff * v)));
            }
        }
        acc.entries = canonicalize(raw);
        Ok(acc)
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn canonicalize(mut entries: Vec<(usize, usize, Complex64)>) -> Vec<(usize, usize, Complex64)> {
    entries.sort_by_key(|&(r, c, _)| (r, c));
    let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
    for (r, c, v) in entries {
        match merged.last_mut() {
            Some(last) if (last.0, last.1) == (r, c) => last.2 += v,
            _ => merged.push((r, c, v)),
        }
    }
    merged.retain(|&(_, _, v)| v != ZERO);
    merged
}

// Operator overloads panic on mode mismatch; the `try_*` methods report it.

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: Self) -> FockOperator {
        self.try_add(rhs).expect("mode mismatch in addition")
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: Self) -> FockOperator {
        self.try_sub(rhs).expect("mode mismatch in subtraction")
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: Self) -> FockOperator {
        self.try_mul(rhs).expect("mode mismatch in multiplication")
    }
}

impl Mul<Complex64> for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: Complex64) -> FockOperator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: f64) -> FockOperator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Neg for &FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        self.scale(-ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let op = FockOperator::from_triplets(
            1,
            [
                (0, 1, c(1.0)),
                (0, 1, c(-1.0)),
                (1, 0, c(2.0)),
                (1, 0, c(0.5)),
            ],
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(1, 0), c(2.5));
        assert_eq!(op.get(0, 1), ZERO);
    }

    #[test]
    fn triplet_out_of_range_is_rejected() {
        assert!(FockOperator::from_triplets(1, [(2, 0, c(1.0))]).is_err());
    }

    #[test]
    fn cancellation_leaves_no_stored_zero() {
        let id = FockOperator::identity(2);
        let diff = &id - &id;
        assert!(diff.is_zero());
        assert_eq!(diff.nnz(), 0);
    }

    #[test]
    fn mismatched_modes_are_not_composable() {
        let a = FockOperator::identity(2);
        let b = FockOperator::identity(3);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&b).is_err());
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn matmul_matches_dense_product() {
        let a = FockOperator::from_triplets(
            2,
            [
                (0, 1, c(1.0)),
                (1, 2, Complex64::new(0.0, 2.0)),
                (3, 0, c(-1.0)),
            ],
        )
        .unwrap();
        let b = FockOperator::from_triplets(2, [(1, 3, c(3.0)), (2, 2, c(1.0)), (0, 0, c(4.0))])
            .unwrap();
        let prod = (&a * &b).to_dense();
        let (da, db) = (a.to_dense(), b.to_dense());
        for i in 0..4 {
            for j in 0..4 {
                let want: Complex64 = (0..4).map(|k| da[i][k] * db[k][j]).sum();
                assert_eq!(prod[i][j], want);
            }
        }
    }

    #[test]
    fn set_inserts_updates_and_removes() {
        let mut op = FockOperator::zero(1);
        op.set(0, 1, c(1.0));
        assert_eq!(op.get(0, 1), c(1.0));
        op.set(0, 1, c(-1.0));
        assert_eq!(op.get(0, 1), c(-1.0));
        op.set(0, 1, ZERO);
        assert!(op.is_zero());
    }
}
