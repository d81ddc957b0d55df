//! Schwinger fermionic representations.
//!
//! Every builder comes in two forms: a convenience function taking the mode
//! count, and an `*_on` variant that composes the matrices of a supplied
//! [`LadderSet`]. The verification suite uses the latter so that a corrupted
//! ladder matrix propagates into every operator built from it.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{binomial, LadderSet, OccupationState};
use crate::liealg::{conjugate_rep, structure_constants, GeneratorSet, Matrix};
use crate::operator::FockOperator;
pub use crate::selective::{selective_function, SelectivePolynomial};

#[cfg(test)]
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for the tracelessness and structure-constant validations.
const VALIDATION_TOL: f64 = 1e-10;

/// Which construction produced a [`RepresentationResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Bilinears `Σ a†_α G^{αβ} a_β`.
    Standard,
    /// The term-by-term quartic construction for three modes.
    NonstandardU3Explicit,
    /// Bilinears dressed with selective functions of `N`.
    Nonstandard,
    /// Sector representation of U(C(n,m)).
    Ucnm,
    /// Sector representation on `N = m` and `N = n − m` together.
    Mixed,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::NonstandardU3Explicit => "nonstandard-u3-explicit",
            Variant::Nonstandard => "nonstandard",
            Variant::Ucnm => "ucnm",
            Variant::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepMeta {
    pub variant: Variant,
    pub n: usize,
    pub m: Option<usize>,
    pub labels: Vec<String>,
    /// `(ξ_−, ξ_+)` for the mixed construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<(bool, bool)>,
}

/// Fock-space images of an ordered list of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationResult {
    pub ops: Vec<FockOperator>,
    pub meta: RepMeta,
}

impl RepresentationResult {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.meta.n
    }
}

/// The sector operators `O_i` for particle number `m`, ordered by descending ζ.
#[derive(Debug, Clone)]
pub struct SectorOperatorSet {
    pub n: usize,
    pub m: usize,
    pub ops: Vec<FockOperator>,
    pub zetas: Vec<OccupationState>,
}

fn check_dim(gens: &GeneratorSet, want: usize) -> Result<()> {
    if gens.dim() != want {
        return Err(Error::Argument(format!(
            "generators are {0}x{0}, expected {want}x{want}",
            gens.dim()
        )));
    }
    Ok(())
}

/// All hopping operators `a†_α a_β`, indexed `(α−1)·n + (β−1)`.
fn hoppings(ladders: &LadderSet) -> Vec<FockOperator> {
    let n = ladders.modes();
    let mut out = Vec::with_capacity(n * n);
    for alpha in 1..=n {
        for beta in 1..=n {
            out.push(ladders.hopping(alpha, beta));
        }
    }
    out
}

/// `Σ_{αβ} M^{αβ} B_{αβ}` over a square grid of basis operators.
fn expand(modes: usize, m: &Matrix, basis_ops: &[FockOperator]) -> FockOperator {
    let k = m.nrows();
    let terms = (0..k).flat_map(|a| (0..k).map(move |b| (a, b)));
    FockOperator::linear_combination(
        modes,
        terms.map(|(a, b)| (m[(a, b)], &basis_ops[a * k + b])),
    )
    .expect("operators share the mode count")
}

pub fn standard_rep(gens: &GeneratorSet, n: usize) -> Result<RepresentationResult> {
    standard_rep_on(&LadderSet::new(n)?, gens)
}

/// `G^f_i = Σ_{αβ} a†_α G_i^{αβ} a_β`.
pub fn standard_rep_on(ladders: &LadderSet, gens: &GeneratorSet) -> Result<RepresentationResult> {
    let n = ladders.modes();
    check_dim(gens, n)?;
    let hops = hoppings(ladders);
    Ok(RepresentationResult {
        ops: gens.mats().iter().map(|g| expand(n, g, &hops)).collect(),
        meta: RepMeta {
            variant: Variant::Standard,
            n,
            m: None,
            labels: gens.labels().to_vec(),
            xi: None,
        },
    })
}

/// `p(N)` as a diagonal operator.
pub fn eval_at_number_operator(p: &SelectivePolynomial, n: usize) -> Result<FockOperator> {
    if p.n() != n {
        return Err(Error::Argument(format!(
            "selective function built for n = {}, applied to n = {n}",
            p.n()
        )));
    }
    let basis = crate::fock::build_basis(n)?;
    Ok(polynomial_of_number(p, n, &basis.particle_counts()))
}

fn polynomial_of_number(p: &SelectivePolynomial, n: usize, counts: &[usize]) -> FockOperator {
    // Exact per-sector values keep the unselected sectors at exactly zero.
    let values: Vec<f64> = (0..=n)
        .map(|k| p.eval(k as i64).to_f64().expect("finite rational"))
        .collect();
    FockOperator::from_diagonal(n, |k| Complex64::new(values[counts[k]], 0.0))
}

fn selector_on(ladders: &LadderSet, m: usize) -> Result<FockOperator> {
    let n = ladders.modes();
    let p = selective_function(n, m)?;
    Ok(polynomial_of_number(
        &p,
        n,
        &ladders.basis().particle_counts(),
    ))
}

pub fn nssfr_u3_explicit() -> RepresentationResult {
    nssfr_u3_explicit_on(&LadderSet::new(3).expect("three modes fit the cap"))
        .expect("three-mode ladder set")
}

/// The eight quartic three-mode operators written out term by term.
pub fn nssfr_u3_explicit_on(ladders: &LadderSet) -> Result<RepresentationResult> {
    if ladders.modes() != 3 {
        return Err(Error::Argument(format!(
            "the explicit construction needs 3 modes, got {}",
            ladders.modes()
        )));
    }
    let h = |a, b| ladders.hopping(a, b);
    let sym = |a, b| &h(a, b) + &h(b, a);
    // −i a†_a a_b + i a†_b a_a
    let anti = |a, b| &(&h(a, b) * -I) + &(&h(b, a) * I);
    let n1 = ladders.number(1);
    let n2 = ladders.number(2);
    let n3 = ladders.number(3);
    let id = ladders.identity();
    let one_minus = |x: &FockOperator| &id - x;
    let one_minus_2n2 = &id - &(&n2 * 2.0);

    let l1 = &(&sym(1, 2) * &one_minus(&n3)) + &(&sym(2, 3) * &n1);
    let l2 = &(&anti(1, 2) * &one_minus(&n3)) + &(&anti(2, 3) * &n1);
    let n1n2 = &n1 * &n2;
    let n1n3 = &n1 * &n3;
    let n2n3 = &n2 * &n3;
    let l3 = &(&(&(&n1 - &n2) - &(&n1n3 * 2.0)) + &n1n2) + &n2n3;
    let l4 = &sym(1, 3) * &one_minus_2n2;
    let l5 = &anti(1, 3) * &one_minus_2n2;
    let l6 = &(&sym(2, 3) * &one_minus(&n1)) + &(&sym(1, 2) * &n3);
    let l7 = &(&anti(2, 3) * &one_minus(&n1)) + &(&anti(1, 2) * &n3);
    let l8 = &(&(&(&(&(&n1 + &n2) - &(&n3 * 2.0)) + &(&n1n3 * 2.0)) - &n2n3) - &n1n2)
        * (1.0 / 3f64.sqrt());
    Ok(RepresentationResult {
        ops: vec![l1, l2, l3, l4, l5, l6, l7, l8],
        meta: RepMeta {
            variant: Variant::NonstandardU3Explicit,
            n: 3,
            m: None,
            labels: (1..=8).map(|k| format!("lambda{k}")).collect(),
            xi: None,
        },
    })
}

pub fn nssfr_un(gens: &GeneratorSet, n: usize) -> Result<RepresentationResult> {
    nssfr_un_on(&LadderSet::new(n)?, gens)
}

/// `λ^h_i = Σ a†_α λ_i^{αβ} a_β f_n^(1)(N) + Σ a†_α λ′_i^{αβ} a_β f_n^(n−1)(N)`
/// with `λ′ = U(−λ*)U†`. Requires traceless generators and `n ≥ 3`.
pub fn nssfr_un_on(ladders: &LadderSet, gens: &GeneratorSet) -> Result<RepresentationResult> {
    let n = ladders.modes();
    if n < 3 {
        return Err(Error::Argument(format!(
            "the dressed construction needs n >= 3, got {n}"
        )));
    }
    check_dim(gens, n)?;
    if let Some(k) = gens
        .mats()
        .iter()
        .position(|g| g.trace().norm() > VALIDATION_TOL)
    {
        return Err(Error::Validation(format!(
            "generator {} has nonzero trace; the full sector would not vanish",
            gens.labels()[k]
        )));
    }
    let conj = conjugate_rep(gens, n)?;
    let hops = hoppings(ladders);
    let low = selector_on(ladders, 1)?;
    let high = selector_on(ladders, n - 1)?;
    let ops = gens
        .mats()
        .iter()
        .zip(conj.mats())
        .map(|(g, gc)| &(&expand(n, g, &hops) * &low) + &(&expand(n, gc, &hops) * &high))
        .collect();
    Ok(RepresentationResult {
        ops,
        meta: RepMeta {
            variant: Variant::Nonstandard,
            n,
            m: None,
            labels: gens.labels().to_vec(),
            xi: None,
        },
    })
}

pub fn sector_operators(n: usize, m: usize) -> Result<SectorOperatorSet> {
    sector_operators_on(&LadderSet::new(n)?, m)
}

/// `O_i = a_n^{ζ_n} … a_1^{ζ_1}` for every ζ with `Σζ = m`, in descending
/// binary order with `ζ_1` the most significant digit.
pub fn sector_operators_on(ladders: &LadderSet, m: usize) -> Result<SectorOperatorSet> {
    let n = ladders.modes();
    let basis = ladders.basis();
    let mut zetas: Vec<OccupationState> = basis
        .sector(m)?
        .into_iter()
        .map(|k| basis.state(k))
        .collect();
    zetas.sort_by_key(|z| std::cmp::Reverse(z.binary_value()));
    let ops = zetas
        .iter()
        .map(|z| {
            (1..=n)
                .rev()
                .filter(|&i| z.is_occupied(i))
                .fold(ladders.identity(), |acc, i| &acc * ladders.a(i))
        })
        .collect();
    Ok(SectorOperatorSet { n, m, ops, zetas })
}

fn check_inner_sector(n: usize, m: usize) -> Result<()> {
    if m < 1 || n < 2 || m > n - 1 {
        return Err(Error::Argument(format!(
            "particle number {m} outside 1..={} (selective function undefined)",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Builds `Q_ij = O†_i O_j f_n^(m)(N)` on demand for one sector.
#[derive(Debug, Clone)]
pub struct ElementBasis {
    k: usize,
    sector: SectorOperatorSet,
    daggers: Vec<FockOperator>,
    selector: FockOperator,
}

impl ElementBasis {
    pub fn new(ladders: &LadderSet, m: usize) -> Result<Self> {
        check_inner_sector(ladders.modes(), m)?;
        let sector = sector_operators_on(ladders, m)?;
        let selector = selector_on(ladders, m)?;
        let daggers = sector.ops.iter().map(FockOperator::adjoint).collect();
        Ok(Self {
            k: sector.ops.len(),
            sector,
            daggers,
            selector,
        })
    }

    /// `C(n, m)`, the number of sector states.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sector(&self) -> &SectorOperatorSet {
        &self.sector
    }

    /// `Q_ij` with 0-based `i, j`.
    pub fn q(&self, i: usize, j: usize) -> FockOperator {
        &(&self.daggers[i] * &self.sector.ops[j]) * &self.selector
    }

    /// `Σ_{αβ} G^{αβ} Q_{αβ}`, building only the `Q` with nonzero coefficients.
    pub fn expand(&self, g: &Matrix) -> FockOperator {
        let n = self.selector.modes();
        let terms: Vec<(Complex64, FockOperator)> = (0..self.k)
            .flat_map(|a| (0..self.k).map(move |b| (a, b)))
            .filter(|&(a, b)| g[(a, b)] != Complex64::new(0.0, 0.0))
            .map(|(a, b)| (g[(a, b)], self.q(a, b)))
            .collect();
        FockOperator::linear_combination(n, terms.iter().map(|(c, op)| (*c, op)))
            .expect("operators share the mode count")
    }
}

pub fn element_operators(n: usize, m: usize) -> Result<Vec<FockOperator>> {
    element_operators_on(&LadderSet::new(n)?, m)
}

/// `Q_ij = O†_i O_j f_n^(m)(N)`, indexed `i·C(n,m) + j` (0-based).
pub fn element_operators_on(ladders: &LadderSet, m: usize) -> Result<Vec<FockOperator>> {
    let basis = ElementBasis::new(ladders, m)?;
    let k = basis.k();
    Ok((0..k * k).map(|x| basis.q(x / k, x % k)).collect())
}

pub fn rep_ucnm(gens: &GeneratorSet, n: usize, m: usize) -> Result<RepresentationResult> {
    rep_ucnm_on(&LadderSet::new(n)?, gens, m)
}

/// `G^m_i = Σ_{αβ} G_i^{αβ} Q_{αβ}`.
pub fn rep_ucnm_on(
    ladders: &LadderSet,
    gens: &GeneratorSet,
    m: usize,
) -> Result<RepresentationResult> {
    let n = ladders.modes();
    check_inner_sector(n, m)?;
    check_dim(gens, binomial(n, m))?;
    let q = ElementBasis::new(ladders, m)?;
    Ok(RepresentationResult {
        ops: gens.mats().iter().map(|g| q.expand(g)).collect(),
        meta: RepMeta {
            variant: Variant::Ucnm,
            n,
            m: Some(m),
            labels: gens.labels().to_vec(),
            xi: None,
        },
    })
}

pub fn mixed_rep(
    gens: &GeneratorSet,
    gens2: &GeneratorSet,
    n: usize,
    m: usize,
    xi_minus: bool,
    xi_plus: bool,
) -> Result<RepresentationResult> {
    mixed_rep_on(&LadderSet::new(n)?, gens, gens2, m, xi_minus, xi_plus)
}

/// `G^h_i = Σ G_i^{αβ} Q^(m)_{αβ} ξ_− + Σ G′_i^{αβ} Q^(n−m)_{αβ} ξ_+`.
///
/// `gens` and `gens2` must share structure constants.
pub fn mixed_rep_on(
    ladders: &LadderSet,
    gens: &GeneratorSet,
    gens2: &GeneratorSet,
    m: usize,
    xi_minus: bool,
    xi_plus: bool,
) -> Result<RepresentationResult> {
    let n = ladders.modes();
    check_inner_sector(n, m)?;
    let mbar = n - m;
    if mbar == m {
        return Err(Error::Degeneracy(format!(
            "m = n - m = {m}; the two sectors coincide"
        )));
    }
    if !xi_minus && !xi_plus {
        return Err(Error::Argument(
            "at least one of xi_minus, xi_plus must be 1".into(),
        ));
    }
    let k = binomial(n, m);
    check_dim(gens, k)?;
    check_dim(gens2, k)?;
    if gens.len() != gens2.len() {
        return Err(Error::Argument(format!(
            "{} generators paired with {}",
            gens.len(),
            gens2.len()
        )));
    }
    let c1 = structure_constants(gens, VALIDATION_TOL)?;
    let c2 = structure_constants(gens2, VALIDATION_TOL)?;
    let mismatch = c1.max_abs_diff(&c2)?;
    if mismatch > VALIDATION_TOL {
        return Err(Error::Validation(format!(
            "the two generator sets have different structure constants (max diff {mismatch:.3e})"
        )));
    }
    let q_low = if xi_minus {
        Some(ElementBasis::new(ladders, m)?)
    } else {
        None
    };
    let q_high = if xi_plus {
        Some(ElementBasis::new(ladders, mbar)?)
    } else {
        None
    };
    let ops = gens
        .mats()
        .iter()
        .zip(gens2.mats())
        .map(|(g, g2)| {
            let mut op = FockOperator::zero(n);
            if let Some(q) = &q_low {
                op = &op + &q.expand(g);
            }
            if let Some(q) = &q_high {
                op = &op + &q.expand(g2);
            }
            op
        })
        .collect();
    Ok(RepresentationResult {
        ops,
        meta: RepMeta {
            variant: Variant::Mixed,
            n,
            m: Some(m),
            labels: gens.labels().to_vec(),
            xi: Some((xi_minus, xi_plus)),
        },
    })
}

impl FockOperator {
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d <= tol)
    }
}
