//! Occupation-number basis, fermionic ladder operators and particle-number sectors.
//!
//! Basis states are written `a†_{j1} … a†_{jk} |vac⟩` with `j1 < … < jk`. The
//! basis is ordered by particle count, then lexicographically by the set of
//! occupied modes, so for three modes it reads
//! `{1, a†1, a†2, a†3, a†1a†2, a†1a†3, a†2a†3, a†1a†2a†3} |vac⟩`.
//! Mode indices are 1-based throughout the public API.

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::FockOperator;

/// Occupancies `(ζ_1, …, ζ_n)` of `n` fermionic modes, packed into a bit mask
/// with mode `i` at bit `i − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationState {
    modes: usize,
    mask: u64,
}

impl OccupationState {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > 63 {
            return Err(Error::Argument(format!(
                "unsupported mode count {}",
                bits.len()
            )));
        }
        let mut mask = 0u64;
        for (k, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << k,
                other => {
                    return Err(Error::Argument(format!(
                        "occupancy must be 0 or 1, got {other} at mode {}",
                        k + 1
                    )))
                }
            }
        }
        Ok(Self {
            modes: bits.len(),
            mask,
        })
    }

    /// State with the given 1-based modes occupied.
    pub fn from_occupied(modes: usize, occupied: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in occupied {
            if i == 0 || i > modes {
                return Err(Error::Argument(format!("mode {i} outside 1..={modes}")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Self { modes, mask })
    }

    pub(crate) fn from_mask(modes: usize, mask: u64) -> Self {
        Self { modes, mask }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        mode >= 1 && mode <= self.modes && self.mask & (1 << (mode - 1)) != 0
    }

    pub fn particle_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Occupied modes in ascending order.
    pub fn occupied(&self) -> Vec<usize> {
        (1..=self.modes).filter(|&i| self.is_occupied(i)).collect()
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.modes)
            .map(|i| u8::from(self.is_occupied(i)))
            .collect()
    }

    /// The occupancies read as a binary number with `ζ_1` as the most significant digit.
    pub fn binary_value(&self) -> u64 {
        (1..=self.modes).fold(0, |acc, i| (acc << 1) | u64::from(self.is_occupied(i)))
    }
}

impl std::fmt::Display for OccupationState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.bits().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// The canonical ordered occupation-number basis of `n` modes.
#[derive(Debug, Clone)]
pub struct FockBasis {
    modes: usize,
    states: Vec<OccupationState>,
    index_of_mask: Vec<usize>,
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> OccupationState {
        self.states[index]
    }

    /// Basis index of a state.
    pub fn index_of(&self, state: &OccupationState) -> usize {
        self.index_of_mask[state.mask as usize]
    }

    pub(crate) fn index_of_mask(&self, mask: u64) -> usize {
        self.index_of_mask[mask as usize]
    }

    /// Basis indices with particle count `m`, ascending. Sectors are contiguous.
    pub fn sector(&self, m: usize) -> Result<Vec<usize>> {
        if m > self.modes {
            return Err(Error::Argument(format!(
                "particle number {m} outside 0..={}",
                self.modes
            )));
        }
        let start: usize = (0..m).map(|k| binomial(self.modes, k)).sum();
        Ok((start..start + binomial(self.modes, m)).collect())
    }

    /// Particle count of every basis index.
    pub fn particle_counts(&self) -> Vec<usize> {
        self.states
            .iter()
            .map(OccupationState::particle_count)
            .collect()
    }
}

fn check_modes(n: usize) -> Result<()> {
    let cap = crate::max_modes();
    if n == 0 || n > cap {
        return Err(Error::Capacity(format!("mode count {n} outside 1..={cap}")));
    }
    Ok(())
}

fn check_mode_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::Argument(format!("mode index {i} outside 1..={n}")));
    }
    Ok(())
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

/// Builds the canonical basis for `n` modes.
pub fn build_basis(n: usize) -> Result<FockBasis> {
    check_modes(n)?;
    let mut states = Vec::with_capacity(1 << n);
    for k in 0..=n {
        for occupied in (1..=n).combinations(k) {
            let mask = occupied.iter().fold(0u64, |m, &i| m | 1 << (i - 1));
            states.push(OccupationState::from_mask(n, mask));
        }
    }
    let mut index_of_mask = vec![0; 1 << n];
    for (idx, s) in states.iter().enumerate() {
        index_of_mask[s.mask as usize] = idx;
    }
    Ok(FockBasis {
        modes: n,
        states,
        index_of_mask,
    })
}

fn annihilator_in(basis: &FockBasis, i: usize) -> FockOperator {
    let bit = 1u64 << (i - 1);
    let below = bit - 1;
    let triplets = basis
        .states()
        .iter()
        .enumerate()
        .filter(|&(_, s)| s.mask & bit != 0)
        .map(|(col, s)| {
            let row = basis.index_of_mask(s.mask & !bit);
            let sign = if (s.mask & below).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            (row, col, Complex64::new(sign, 0.0))
        });
    FockOperator::from_triplets(basis.modes(), triplets).expect("indices lie inside the basis")
}

/// Matrix of `a_i` in the canonical basis.
pub fn annihilation(n: usize, i: usize) -> Result<FockOperator> {
    check_modes(n)?;
    check_mode_index(n, i)?;
    Ok(annihilator_in(&build_basis(n)?, i))
}

/// Matrix of `a†_i`, the conjugate transpose of [`annihilation`].
pub fn creation(n: usize, i: usize) -> Result<FockOperator> {
    Ok(annihilation(n, i)?.adjoint())
}

/// `N_i = a†_i a_i`.
pub fn number_operator(n: usize, i: usize) -> Result<FockOperator> {
    check_modes(n)?;
    check_mode_index(n, i)?;
    let basis = build_basis(n)?;
    Ok(FockOperator::from_diagonal(n, |k| {
        Complex64::new(f64::from(u8::from(basis.state(k).is_occupied(i))), 0.0)
    }))
}

/// `N = Σ_i N_i`.
pub fn total_number(n: usize) -> Result<FockOperator> {
    let basis = build_basis(n)?;
    Ok(FockOperator::from_diagonal(n, |k| {
        Complex64::new(basis.state(k).particle_count() as f64, 0.0)
    }))
}

/// Basis indices of the `N = m` sector.
pub fn sector_indices(n: usize, m: usize) -> Result<Vec<usize>> {
    build_basis(n)?.sector(m)
}

/// Sign flip of a single stored entry of one annihilation matrix.
///
/// `entry` counts stored entries of `a_mode` in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderFault {
    pub modes: usize,
    pub mode: usize,
    pub entry: usize,
}

/// The annihilation and creation matrices of `n` modes, built once and shared
/// by every builder that composes them.
#[derive(Debug, Clone)]
pub struct LadderSet {
    basis: FockBasis,
    annihilators: Vec<FockOperator>,
    creators: Vec<FockOperator>,
}

impl LadderSet {
    pub fn new(n: usize) -> Result<Self> {
        let basis = build_basis(n)?;
        let annihilators: Vec<_> = (1..=n).map(|i| annihilator_in(&basis, i)).collect();
        let creators = annihilators.iter().map(FockOperator::adjoint).collect();
        Ok(Self {
            basis,
            annihilators,
            creators,
        })
    }

    /// A ladder set with one annihilation-matrix entry sign-flipped; the
    /// corresponding creation matrix is rebuilt as its adjoint.
    pub fn with_fault(n: usize, fault: LadderFault) -> Result<Self> {
        let mut set = Self::new(n)?;
        if fault.modes == n {
            set.inject(fault)?;
        }
        Ok(set)
    }

    fn inject(&mut self, fault: LadderFault) -> Result<()> {
        check_mode_index(self.modes(), fault.mode)?;
        let op = &mut self.annihilators[fault.mode - 1];
        let (r, c, v) = op.entries().nth(fault.entry).ok_or_else(|| {
            Error::Argument(format!(
                "a_{} has only {} stored entries",
                fault.mode,
                op.nnz()
            ))
        })?;
        op.set(r, c, -v);
        self.creators[fault.mode - 1] = op.adjoint();
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.basis.modes()
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    /// `a_i` (1-based). Panics on an out-of-range index.
    pub fn a(&self, i: usize) -> &FockOperator {
        &self.annihilators[i - 1]
    }

    /// `a†_i` (1-based). Panics on an out-of-range index.
    pub fn adag(&self, i: usize) -> &FockOperator {
        &self.creators[i - 1]
    }

    pub fn try_a(&self, i: usize) -> Result<&FockOperator> {
        check_mode_index(self.modes(), i)?;
        Ok(self.a(i))
    }

    pub fn try_adag(&self, i: usize) -> Result<&FockOperator> {
        check_mode_index(self.modes(), i)?;
        Ok(self.adag(i))
    }

    /// `a†_α a_β`.
    pub fn hopping(&self, alpha: usize, beta: usize) -> FockOperator {
        self.adag(alpha) * self.a(beta)
    }

    /// `N_i = a†_i a_i`, composed from the stored ladder matrices.
    pub fn number(&self, i: usize) -> FockOperator {
        self.hopping(i, i)
    }

    pub fn total_number(&self) -> FockOperator {
        let ops: Vec<_> = (1..=self.modes()).map(|i| self.number(i)).collect();
        FockOperator::linear_combination(self.modes(), ops.iter().map(|op| (ONE, op)))
            .expect("same mode count")
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator::identity(self.modes())
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[cfg(test)]
mod tests {
    use super::*;

    fn occupied_sets(basis: &FockBasis) -> Vec<Vec<usize>> {
        basis
            .states()
            .iter()
            .map(OccupationState::occupied)
            .collect()
    }

    #[test]
    fn three_mode_basis_order() {
        let basis = build_basis(3).unwrap();
        let want: Vec<Vec<usize>> = vec![
            vec![],
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
        ];
        assert_eq!(occupied_sets(&basis), want);
    }

    #[test]
    fn single_mode_basis() {
        let basis = build_basis(1).unwrap();
        let bits: Vec<_> = basis.states().iter().map(OccupationState::bits).collect();
        assert_eq!(bits, vec![vec![0], vec![1]]);
    }

    #[test]
    fn four_mode_pair_sector() {
        let basis = build_basis(4).unwrap();
        let pairs: Vec<_> = basis
            .sector(2)
            .unwrap()
            .into_iter()
            .map(|k| basis.state(k).occupied())
            .collect();
        assert_eq!(
            pairs,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn basis_capacity() {
        assert!(matches!(build_basis(0), Err(Error::Capacity(_))));
        assert!(matches!(build_basis(15), Err(Error::Capacity(_))));
    }

    #[test]
    fn vacuum_first_full_last() {
        let basis = build_basis(5).unwrap();
        assert_eq!(basis.state(0).particle_count(), 0);
        assert_eq!(basis.state(31).particle_count(), 5);
    }

    #[test]
    fn single_mode_annihilator() {
        let a = annihilation(1, 1).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 1), ONE);
    }

    #[test]
    fn annihilate_second_mode_of_pair_gives_minus_sign() {
        // a_2 a†_1 a†_2 |vac⟩ = −a†_1 a_2 a†_2 |vac⟩ = −a†_1 |vac⟩
        let basis = build_basis(2).unwrap();
        let a2 = annihilation(2, 2).unwrap();
        let from = basis.index_of(&OccupationState::from_occupied(2, &[1, 2]).unwrap());
        let to = basis.index_of(&OccupationState::from_occupied(2, &[1]).unwrap());
        assert_eq!(a2.get(to, from), -ONE);
    }

    #[test]
    fn creation_on_vacuum() {
        let basis = build_basis(2).unwrap();
        let ad1 = creation(2, 1).unwrap();
        let to = basis.index_of(&OccupationState::from_occupied(2, &[1]).unwrap());
        assert_eq!(ad1.get(to, 0), ONE);
    }

    #[test]
    fn ladders_are_nilpotent() {
        for n in 1..=4 {
            for i in 1..=n {
                let a = annihilation(n, i).unwrap();
                assert!((&a * &a).is_zero());
            }
        }
        let ad = creation(3, 2).unwrap();
        assert!((&ad * &ad).is_zero());
    }

    #[test]
    fn creation_is_adjoint_entrywise() {
        let a = annihilation(3, 2).unwrap();
        let ad = creation(3, 2).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(ad.get(r, c), a.get(c, r).conj());
            }
        }
    }

    #[test]
    fn ladder_index_errors() {
        assert!(matches!(annihilation(3, 0), Err(Error::Argument(_))));
        assert!(matches!(creation(3, 4), Err(Error::Argument(_))));
        assert!(matches!(number_operator(2, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn total_number_diagonal_three_modes() {
        let n = total_number(3).unwrap();
        let diag: Vec<f64> = (0..8).map(|k| n.get(k, k).re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]);
    }

    #[test]
    fn mode_number_readout() {
        let n1 = number_operator(2, 1).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| n1.get(k, k).re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn total_number_trace() {
        for n in 1..=8 {
            let t = total_number(n).unwrap().trace();
            assert_eq!(t.re, (n * (1 << (n - 1))) as f64);
        }
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(sector_indices(4, 2).unwrap().len(), 6);
        assert_eq!(sector_indices(3, 0).unwrap(), vec![0]);
        assert!(matches!(sector_indices(3, 4), Err(Error::Argument(_))));
        for n in 1..=8 {
            let total: usize = (0..=n).map(|m| sector_indices(n, m).unwrap().len()).sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn sector_lookup_agrees_with_particle_counts() {
        let basis = build_basis(6).unwrap();
        let counts = basis.particle_counts();
        for m in 0..=6 {
            for k in basis.sector(m).unwrap() {
                assert_eq!(counts[k], m);
            }
        }
    }

    #[test]
    fn ladder_set_matches_free_functions() {
        let set = LadderSet::new(3).unwrap();
        for i in 1..=3 {
            assert_eq!(set.a(i), &annihilation(3, i).unwrap());
            assert_eq!(set.adag(i), &creation(3, i).unwrap());
            assert_eq!(set.number(i), number_operator(3, i).unwrap());
        }
        assert_eq!(set.total_number(), total_number(3).unwrap());
    }

    #[test]
    fn fault_flips_one_entry() {
        let fault = LadderFault {
            modes: 3,
            mode: 2,
            entry: 1,
        };
        let clean = LadderSet::new(3).unwrap();
        let bad = LadderSet::with_fault(3, fault).unwrap();
        let diff = bad.a(2) - clean.a(2);
        assert_eq!(diff.nnz(), 1);
        assert_eq!(diff.max_abs(), 2.0);
        assert_eq!(bad.adag(2), &bad.a(2).adjoint());
    }

    #[test]
    fn binary_value_reads_first_mode_as_msb() {
        let s = OccupationState::from_bits(&[1, 1, 0, 0]).unwrap();
        assert_eq!(s.binary_value(), 0b1100);
        assert_eq!(s.particle_count(), 2);
        assert!(OccupationState::from_bits(&[2]).is_err());
    }
}
