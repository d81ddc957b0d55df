//! Property checks with residual norms, block extraction, and the full
//! verification suite.
//!
//! Every residual is the largest absolute entry of a sparse difference. A check
//! passes when its residual is strictly below the tolerance.

use std::borrow::Cow;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{binomial, build_basis, LadderFault, LadderSet};
use crate::liealg::{
    self, conjugate_rep, gell_mann, gellmann_from_spin1, generalized_gell_mann, spin_matrices,
    structure_constants, GeneratorSet, Matrix, StructureConstants,
};
use crate::operator::FockOperator;
use crate::schwinger::{self, ElementBasis, RepresentationResult, Variant};
use crate::Complex64;

/// Mode counts above which closure checks sample pairs instead of covering all.
pub const FULL_CLOSURE_MAX_MODES: usize = 8;
/// Pairs sampled per closure check once sampling is active.
pub const SAMPLED_PAIRS: usize = 256;
/// Largest `k⁴` for which every matrix-unit identity is checked.
pub const FULL_EIJ_LIMIT: usize = 1 << 20;
/// Quadruples sampled per matrix-unit check once sampling is active.
pub const SAMPLED_QUADRUPLES: usize = 100_000;
/// Largest `k²` for which every element operator of a sector is built.
pub const ELEMENT_FULL_LIMIT: usize = 1 << 16;
/// Element operators sampled per sector once sampling is active.
pub const SAMPLED_ELEMENTS: usize = 4096;
/// Sector dimension up to which the suite uses generalized Gell-Mann generators
/// for U(C(n,m)); above it, spin matrices of the same dimension.
pub const SUITE_GGM_MAX_DIM: usize = 10;
/// Seed for every sampled check.
pub const SAMPLE_SEED: u64 = 0x5eed_f0c5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    /// Number of identities (or operators) the residual covers.
    pub count: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    pub elapsed_secs: f64,
}

impl CheckResult {
    fn timed(
        name: impl Into<String>,
        tol: f64,
        f: impl FnOnce() -> Result<(f64, usize, String)>,
    ) -> Self {
        let start = Instant::now();
        let name = name.into();
        let (max_residual, count, detail) = match f() {
            Ok(v) => v,
            Err(e) => (f64::MAX, 0, e.to_string()),
        };
        Self {
            name,
            passed: max_residual < tol,
            max_residual,
            count,
            detail,
            elapsed_secs: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub variant: String,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: ReportParams,
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(params: ReportParams) -> Self {
        Self {
            params,
            checks: Vec::new(),
            overall: true,
        }
    }

    fn with_checks(params: ReportParams, checks: Vec<CheckResult>) -> Self {
        let mut report = Self::new(params);
        for c in checks {
            report.push(c);
        }
        report
    }

    pub fn push(&mut self, check: CheckResult) {
        self.overall &= check.passed;
        self.checks.push(check);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_residual)
            .fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Same checks with the same verdicts and residuals, ignoring timings.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.overall == other.overall
            && self.checks.len() == other.checks.len()
            && self.checks.iter().zip(&other.checks).all(|(a, b)| {
                a.name == b.name
                    && a.passed == b.passed
                    && a.count == b.count
                    && a.max_residual.to_bits() == b.max_residual.to_bits()
            })
    }

    /// One line per check plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} residual={:.3e} count={} time={:.3}s{}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_residual,
                c.count,
                c.elapsed_secs,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.detail)
                }
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{}: {} checks, {} failed, tol={:e}\n",
            if self.overall { "OK" } else { "FAILED" },
            self.checks.len(),
            failed,
            self.params.tol
        ));
        out
    }
}

fn params(n: Option<usize>, m: Option<usize>, variant: &str, tol: f64) -> ReportParams {
    ReportParams {
        n,
        m,
        variant: variant.to_string(),
        tol,
    }
}

fn anticommutation_checks(ladders: &LadderSet, prefix: &str, tol: f64) -> Vec<CheckResult> {
    let n = ladders.modes();
    let id = ladders.identity();
    let family = |label: &str, f: &dyn Fn(usize, usize) -> FockOperator| {
        CheckResult::timed(format!("{prefix}anticommutation/{label}"), tol, || {
            let mut worst = (0.0, String::new());
            for i in 1..=n {
                for j in 1..=n {
                    let r = f(i, j).max_abs();
                    if r > worst.0 {
                        worst = (r, format!("worst at i={i}, j={j}"));
                    }
                }
            }
            Ok((worst.0, n * n, worst.1))
        })
    };
    vec![
        family("a-adag", &|i, j| {
            let ac = ladders
                .a(i)
                .anticommutator(ladders.adag(j))
                .expect("same modes");
            if i == j {
                &ac - &id
            } else {
                ac
            }
        }),
        family("a-a", &|i, j| {
            ladders
                .a(i)
                .anticommutator(ladders.a(j))
                .expect("same modes")
        }),
        family("adag-adag", &|i, j| {
            ladders
                .adag(i)
                .anticommutator(ladders.adag(j))
                .expect("same modes")
        }),
    ]
}

/// `{a_i, a†_j} = δ_ij`, `{a_i, a_j} = 0`, `{a†_i, a†_j} = 0` for all pairs.
pub fn check_anticommutation(n: usize, tol: f64) -> Result<VerificationReport> {
    check_anticommutation_on(&LadderSet::new(n)?, tol)
}

pub fn check_anticommutation_on(ladders: &LadderSet, tol: f64) -> Result<VerificationReport> {
    Ok(VerificationReport::with_checks(
        params(Some(ladders.modes()), None, "anticommutation", tol),
        anticommutation_checks(ladders, "", tol),
    ))
}

/// `‖[ρ_i, ρ_j] − Σ_l c[i][j][l] ρ_l‖_max`.
pub fn closure_residual(
    ops: &[FockOperator],
    c: &StructureConstants,
    i: usize,
    j: usize,
) -> Result<f64> {
    let comm = ops[i].commutator(&ops[j])?;
    let rhs = FockOperator::linear_combination(
        ops[i].modes(),
        c.terms(i, j).iter().map(|&(l, coeff)| (coeff, &ops[l])),
    )?;
    comm.max_abs_diff(&rhs)
}

/// Unordered pairs `i < j`, all of them or a seeded sample.
fn pairs(k: usize, sampled: Option<usize>) -> Vec<(usize, usize)> {
    let all: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    match sampled {
        Some(count) if count < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            let mut picked: Vec<usize> = sample(&mut rng, all.len(), count).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|x| all[x]).collect()
        }
        _ => all,
    }
}

fn closure_check(
    name: String,
    ops: &[FockOperator],
    c: &StructureConstants,
    tol: f64,
    sampled: Option<usize>,
) -> CheckResult {
    CheckResult::timed(name, tol, || {
        if ops.len() != c.size() {
            return Err(Error::Argument(format!(
                "{} operators against structure constants of size {}",
                ops.len(),
                c.size()
            )));
        }
        let todo = pairs(ops.len(), sampled);
        let residuals: Vec<f64> = todo
            .par_iter()
            .map(|&(i, j)| closure_residual(ops, c, i, j))
            .collect::<Result<_>>()?;
        let (worst, at) = residuals
            .iter()
            .zip(&todo)
            .fold(
                (0.0, None),
                |acc, (&r, &p)| if r > acc.0 { (r, Some(p)) } else { acc },
            );
        let mut detail = at.map_or(String::new(), |(i, j)| format!("worst at ({i}, {j})"));
        if sampled.is_some() && todo.len() < ops.len() * (ops.len().saturating_sub(1)) / 2 {
            detail = format!("sampled {} pairs; {detail}", todo.len());
        }
        Ok((worst, todo.len(), detail))
    })
}

/// Closure of a representation under the given structure constants, over all
/// pairs `i < j` (the `j < i` and `i = j` cases follow from antisymmetry).
pub fn check_closure(
    rep: &RepresentationResult,
    c: &StructureConstants,
    tol: f64,
) -> Result<VerificationReport> {
    if rep.len() != c.size() {
        return Err(Error::Argument(format!(
            "{} operators against structure constants of size {}",
            rep.len(),
            c.size()
        )));
    }
    Ok(VerificationReport::with_checks(
        params(Some(rep.meta.n), rep.meta.m, rep.meta.variant.name(), tol),
        vec![closure_check("closure".into(), &rep.ops, c, tol, None)],
    ))
}

/// All `(i, j, k, l)` or a seeded sample when `k⁴` exceeds [`FULL_EIJ_LIMIT`].
fn quadruples(k: usize) -> (Vec<[usize; 4]>, bool) {
    let total = k.pow(4);
    let decode = |x: usize| [x / (k * k * k), (x / (k * k)) % k, (x / k) % k, x % k];
    if total <= FULL_EIJ_LIMIT {
        ((0..total).map(decode).collect(), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut picked = sample(&mut rng, total, SAMPLED_QUADRUPLES).into_vec();
        picked.sort_unstable();
        (picked.into_iter().map(decode).collect(), true)
    }
}

fn eij_check(name: String, q: &[FockOperator], k: usize, tol: f64) -> CheckResult {
    if q.len() != k * k {
        return CheckResult::timed(name, tol, || {
            Err(Error::Argument(format!(
                "{} operators, expected k² = {}",
                q.len(),
                k * k
            )))
        });
    }
    eij_check_with(name, k, tol, |i, j| Cow::Borrowed(&q[i * k + j]))
}

/// Matrix-unit algebra over operators produced on demand by `get(i, j)`.
fn eij_check_with<'a>(
    name: String,
    k: usize,
    tol: f64,
    get: impl Fn(usize, usize) -> Cow<'a, FockOperator> + Sync,
) -> CheckResult {
    CheckResult::timed(name, tol, || {
        let (todo, sampled) = quadruples(k);
        let residuals: Vec<f64> = todo
            .par_iter()
            .map(|&[i, j, a, b]| {
                let comm = get(i, j).commutator(&get(a, b))?;
                let (il, kj) = ((j == a).then(|| get(i, b)), (b == i).then(|| get(a, j)));
                let mut terms: Vec<(Complex64, &FockOperator)> = Vec::new();
                if let Some(op) = &il {
                    terms.push((Complex64::new(1.0, 0.0), op));
                }
                if let Some(op) = &kj {
                    terms.push((Complex64::new(-1.0, 0.0), op));
                }
                let rhs = FockOperator::linear_combination(comm.modes(), terms)?;
                comm.max_abs_diff(&rhs)
            })
            .collect::<Result<_>>()?;
        let (worst, at) = residuals
            .iter()
            .zip(&todo)
            .fold(
                (0.0, None),
                |acc, (&r, p)| if r > acc.0 { (r, Some(*p)) } else { acc },
            );
        let mut detail = at.map_or(String::new(), |[i, j, a, b]| {
            format!("worst at [Q{i}{j}, Q{a}{b}]")
        });
        if sampled {
            detail = format!(
                "sampled {} of {} quadruples; {detail}",
                todo.len(),
                k.pow(4)
            );
        }
        Ok((worst, todo.len(), detail))
    })
}

/// `[Q_ij, Q_kl] = δ_jk Q_il − δ_li Q_kj` for operators indexed `i·k + j`.
pub fn check_eij_algebra(q: &[FockOperator], k: usize, tol: f64) -> Result<VerificationReport> {
    if q.len() != k * k {
        return Err(Error::Argument(format!(
            "{} operators, expected k² = {}",
            q.len(),
            k * k
        )));
    }
    let n = q.first().map(FockOperator::modes);
    Ok(VerificationReport::with_checks(
        params(n, None, "eij", tol),
        vec![eij_check("eij-algebra".into(), q, k, tol)],
    ))
}

fn commutant_residual(op: &FockOperator, total: &FockOperator) -> Result<f64> {
    Ok(op.commutator(total)?.max_abs())
}

fn commutant_check(name: String, ops: &[FockOperator], n: usize, tol: f64) -> CheckResult {
    CheckResult::timed(name, tol, || {
        let total = crate::fock::total_number(n)?;
        let residuals: Vec<f64> = ops
            .par_iter()
            .map(|op| commutant_residual(op, &total))
            .collect::<Result<_>>()?;
        let (worst, at) = residuals
            .iter()
            .enumerate()
            .fold(
                (0.0, None),
                |acc, (k, &r)| if r > acc.0 { (r, Some(k)) } else { acc },
            );
        Ok((
            worst,
            ops.len(),
            at.map_or(String::new(), |k| format!("worst at operator {k}")),
        ))
    })
}

/// `‖[ρ_i, N]‖_max` for each operator, one check per operator.
pub fn check_number_commutant(
    ops: &[FockOperator],
    n: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if let Some(bad) = ops.iter().position(|op| op.modes() != n) {
        return Err(Error::Argument(format!(
            "operator {bad} acts on {} modes, expected {n}",
            ops[bad].modes()
        )));
    }
    let total = crate::fock::total_number(n)?;
    let checks = ops
        .iter()
        .enumerate()
        .map(|(k, op)| {
            CheckResult::timed(format!("commutant/{k:04}"), tol, || {
                Ok((commutant_residual(op, &total)?, 1, String::new()))
            })
        })
        .collect();
    Ok(VerificationReport::with_checks(
        params(Some(n), None, "commutant", tol),
        checks,
    ))
}

fn hermitian_check(name: String, ops: &[FockOperator], tol: f64) -> CheckResult {
    CheckResult::timed(name, tol, || {
        let mut worst: f64 = 0.0;
        for op in ops {
            worst = worst.max(op.max_abs_diff(&op.adjoint())?);
        }
        Ok((worst, ops.len(), String::new()))
    })
}

/// Per-sector diagonal blocks of an operator in the canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub n: usize,
    /// `blocks[m]` is the `C(n,m) × C(n,m)` block of the `N = m` sector.
    pub blocks: Vec<Matrix>,
    /// Largest absolute entry outside every diagonal block.
    pub off_block_norm: f64,
}

impl BlockDecomposition {
    /// Rebuilds the block-diagonal operator (off-block entries are dropped).
    pub fn reassemble(&self) -> FockOperator {
        let blocks: Vec<(usize, &Matrix)> = self.blocks.iter().enumerate().collect();
        embed_blocks(self.n, &blocks)
    }
}

fn sector_starts(n: usize) -> Vec<usize> {
    let mut starts = Vec::with_capacity(n + 2);
    let mut acc = 0;
    for m in 0..=n {
        starts.push(acc);
        acc += binomial(n, m);
    }
    starts.push(acc);
    starts
}

/// Places dense blocks on the diagonal sectors they name.
pub fn embed_blocks(n: usize, blocks: &[(usize, &Matrix)]) -> FockOperator {
    let starts = sector_starts(n);
    let triplets = blocks.iter().flat_map(|&(m, block)| {
        let s = starts[m];
        (0..block.nrows())
            .flat_map(move |r| (0..block.ncols()).map(move |c| (s + r, s + c, block[(r, c)])))
    });
    FockOperator::from_triplets(n, triplets).expect("blocks fit their sectors")
}

/// Extracts the sector blocks of `op`.
pub fn block_decompose(op: &FockOperator) -> BlockDecomposition {
    let n = op.modes();
    let starts = sector_starts(n);
    let basis = build_basis(n).expect("operator mode count is within the cap");
    let counts = basis.particle_counts();
    let mut blocks: Vec<Matrix> = (0..=n)
        .map(|m| Matrix::zeros(binomial(n, m), binomial(n, m)))
        .collect();
    let mut off: f64 = 0.0;
    for (r, c, v) in op.entries() {
        let (mr, mc) = (counts[r], counts[c]);
        if mr == mc {
            blocks[mr][(r - starts[mr], c - starts[mr])] = v;
        } else {
            off = off.max(v.norm());
        }
    }
    BlockDecomposition {
        n,
        blocks,
        off_block_norm: off,
    }
}

/// Residual of `op` against `expected`. Diagonal sectors listed in `free` are
/// ignored; every other entry of the difference counts.
fn sector_residual(
    op: &FockOperator,
    expected: &FockOperator,
    counts: &[usize],
    free: &[usize],
) -> (f64, String) {
    let diff = op - expected;
    let mut worst = (0.0, String::new());
    for (r, c, v) in diff.entries() {
        let (mr, mc) = (counts[r], counts[c]);
        if mr == mc && free.contains(&mr) {
            continue;
        }
        if v.norm() > worst.0 {
            worst = (
                v.norm(),
                if mr == mc {
                    format!("worst in sector N={mr}")
                } else {
                    format!("worst between sectors N={mr} and N={mc}")
                },
            );
        }
    }
    worst
}

/// Sector placement check: operator `k` must equal `expected(k)` outside the
/// `free` sectors.
fn placement_check(
    name: String,
    ops: &[FockOperator],
    expected: impl Fn(usize) -> FockOperator + Sync,
    free: &[usize],
    tol: f64,
) -> CheckResult {
    CheckResult::timed(name, tol, || {
        let Some(first) = ops.first() else {
            return Ok((0.0, 0, String::new()));
        };
        let counts = build_basis(first.modes())?.particle_counts();
        let results: Vec<(f64, String)> = ops
            .par_iter()
            .enumerate()
            .map(|(k, op)| {
                let (r, d) = sector_residual(op, &expected(k), &counts, free);
                (r, format!("operator {k}: {d}"))
            })
            .collect();
        let worst =
            results.into_iter().fold(
                (0.0, String::new()),
                |acc, x| if x.0 > acc.0 { x } else { acc },
            );
        Ok((worst.0, ops.len(), worst.1))
    })
}

fn blocks_check(
    name: String,
    ops: &[FockOperator],
    expected: impl Fn(usize) -> Vec<(usize, Matrix)> + Sync,
    free: &[usize],
    tol: f64,
) -> CheckResult {
    let n = ops.first().map_or(0, FockOperator::modes);
    placement_check(
        name,
        ops,
        |k| {
            let want = expected(k);
            let refs: Vec<(usize, &Matrix)> = want.iter().map(|(m, b)| (*m, b)).collect();
            embed_blocks(n, &refs)
        },
        free,
        tol,
    )
}

/// Per-generator maximum entrywise difference.
pub fn compare_ops(
    a: &RepresentationResult,
    b: &RepresentationResult,
    tol: f64,
) -> Result<VerificationReport> {
    if a.len() != b.len() || a.modes() != b.modes() {
        return Err(Error::Argument(format!(
            "cannot compare {} operators on {} modes with {} operators on {} modes",
            a.len(),
            a.modes(),
            b.len(),
            b.modes()
        )));
    }
    let checks = a
        .ops
        .iter()
        .zip(&b.ops)
        .enumerate()
        .map(|(k, (x, y))| {
            CheckResult::timed(format!("compare/{k:04}"), tol, || {
                Ok((x.max_abs_diff(y)?, 1, String::new()))
            })
        })
        .collect();
    Ok(VerificationReport::with_checks(
        params(Some(a.modes()), a.meta.m, "compare", tol),
        checks,
    ))
}

/// Closure, number commutant, hermiticity and sector placement of one
/// representation. `gens` are the generators it was built from; `gens2` is the
/// second set of a mixed construction.
pub fn verify_representation(
    rep: &RepresentationResult,
    gens: &GeneratorSet,
    gens2: Option<&GeneratorSet>,
    tol: f64,
) -> Result<VerificationReport> {
    let n = rep.modes();
    if rep.len() != gens.len() {
        return Err(Error::Argument(format!(
            "{} operators built from {} generators",
            rep.len(),
            gens.len()
        )));
    }
    if let Some(bad) = rep.ops.iter().position(|op| op.modes() != n) {
        return Err(Error::Argument(format!(
            "operator {bad} acts on {} modes, expected {n}",
            rep.ops[bad].modes()
        )));
    }
    let c = structure_constants(gens, tol)?;
    let sampled = (n > FULL_CLOSURE_MAX_MODES).then_some(SAMPLED_PAIRS);
    let needs_m = || {
        rep.meta
            .m
            .ok_or_else(|| Error::Argument("sector representation without m".into()))
    };
    // (sector, generator set) pairs the blocks must reproduce, plus unconstrained sectors.
    let (placed, free): (Vec<(usize, GeneratorSet)>, Vec<usize>) = match rep.meta.variant {
        Variant::Standard => {
            if n >= 3 {
                let conj = conjugate_rep(gens, n)?;
                (vec![(1, gens.clone()), (n - 1, conj)], (2..n - 1).collect())
            } else {
                (vec![(1, gens.clone())], Vec::new())
            }
        }
        Variant::Nonstandard | Variant::NonstandardU3Explicit => {
            (vec![(1, gens.clone()), (n - 1, gens.clone())], Vec::new())
        }
        Variant::Ucnm => (vec![(needs_m()?, gens.clone())], Vec::new()),
        Variant::Mixed => {
            let m = needs_m()?;
            let (minus, plus) = rep.meta.xi.unwrap_or((true, true));
            let mut placed = Vec::new();
            if minus {
                placed.push((m, gens.clone()));
            }
            if plus {
                let g2 = gens2.cloned().ok_or_else(|| {
                    Error::Argument("mixed representation without a second set".into())
                })?;
                placed.push((n - m, g2));
            }
            (placed, Vec::new())
        }
    };
    if let Some((m, g)) = placed
        .iter()
        .find(|(m, g)| *m > n || g.dim() != binomial(n, *m))
    {
        return Err(Error::Argument(format!(
            "generators of dimension {} cannot occupy the N={m} sector of {n} modes",
            g.dim()
        )));
    }
    let checks = vec![
        closure_check("closure".into(), &rep.ops, &c, tol, sampled),
        commutant_check("number-commutant".into(), &rep.ops, n, tol),
        hermitian_check("hermitian".into(), &rep.ops, tol),
        blocks_check(
            "sector-blocks".into(),
            &rep.ops,
            |k| placed.iter().map(|(m, g)| (*m, g.get(k).clone())).collect(),
            &free,
            tol,
        ),
    ];
    Ok(VerificationReport::with_checks(
        params(Some(n), rep.meta.m, rep.meta.variant.name(), tol),
        checks,
    ))
}

/// Suite configuration; `fault` corrupts one ladder matrix of the matching mode count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub n_max: usize,
    pub tol: f64,
    pub fault: Option<LadderFault>,
}

impl SuiteOptions {
    pub fn new(n_max: usize, tol: f64) -> Self {
        Self {
            n_max,
            tol,
            fault: None,
        }
    }
}

pub fn run_suite(n_max: usize, tol: f64) -> Result<VerificationReport> {
    run_suite_with(&SuiteOptions::new(n_max, tol))
}

type Job<'a> = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync + 'a>;

/// Generators the suite uses for a `d`-dimensional sector.
pub fn suite_sector_generators(d: usize) -> Result<GeneratorSet> {
    if d <= SUITE_GGM_MAX_DIM {
        generalized_gell_mann(d)
    } else {
        spin_matrices(d)
    }
}

fn fail(name: String, e: Error) -> Vec<CheckResult> {
    vec![CheckResult {
        name,
        passed: false,
        max_residual: f64::MAX,
        count: 0,
        detail: e.to_string(),
        elapsed_secs: 0.0,
    }]
}

/// Runs the full catalogue for every `1 ≤ n ≤ n_max` and merges the results
/// ordered by check name.
pub fn run_suite_with(opts: &SuiteOptions) -> Result<VerificationReport> {
    let cap = crate::max_modes();
    if opts.n_max == 0 || opts.n_max > cap {
        return Err(Error::Capacity(format!(
            "n_max = {} outside 1..={cap}",
            opts.n_max
        )));
    }
    let tol = opts.tol;
    let ladders: Vec<LadderSet> = (1..=opts.n_max)
        .map(|n| match opts.fault {
            Some(f) if f.modes == n => LadderSet::with_fault(n, f),
            _ => LadderSet::new(n),
        })
        .collect::<Result<_>>()?;

    let mut jobs: Vec<Job<'_>> = Vec::new();
    for lad in &ladders {
        let n = lad.modes();
        let p = format!("n{n:02}/");
        let sampled = (n > FULL_CLOSURE_MAX_MODES).then_some(SAMPLED_PAIRS);

        {
            let p = p.clone();
            jobs.push(Box::new(move || anticommutation_checks(lad, &p, tol)));
        }
        if n < 2 {
            continue;
        }

        {
            let p = p.clone();
            jobs.push(Box::new(move || standard_jobs(lad, &p, tol, sampled)));
        }
        {
            let p = p.clone();
            jobs.push(Box::new(move || {
                let hops: Vec<FockOperator> = (1..=n)
                    .flat_map(|a| (1..=n).map(move |b| (a, b)))
                    .map(|(a, b)| lad.hopping(a, b))
                    .collect();
                vec![eij_check(format!("{p}hopping/eij-algebra"), &hops, n, tol)]
            }));
        }
        if n == 3 {
            let p = p.clone();
            jobs.push(Box::new(move || three_mode_jobs(lad, &p, tol)));
        }
        if n >= 3 {
            let p = p.clone();
            jobs.push(Box::new(move || nssfr_jobs(lad, &p, tol, sampled)));
        }
        for m in 1..n {
            let (p1, p2) = (p.clone(), p.clone());
            jobs.push(Box::new(move || element_jobs(lad, m, &p1, tol)));
            jobs.push(Box::new(move || ucnm_jobs(lad, m, &p2, tol, sampled)));
        }
    }

    let mut checks: Vec<CheckResult> = jobs.par_iter().flat_map(|job| job()).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerificationReport::with_checks(
        params(Some(opts.n_max), None, "suite", tol),
        checks,
    ))
}

fn standard_jobs(lad: &LadderSet, p: &str, tol: f64, sampled: Option<usize>) -> Vec<CheckResult> {
    let n = lad.modes();
    let prefix = format!("{p}standard/");
    let built = generalized_gell_mann(n).and_then(|g| {
        let c = structure_constants(&g, tol)?;
        let conj = conjugate_rep(&g, n)?;
        let rep = schwinger::standard_rep_on(lad, &g)?;
        Ok((g, c, conj, rep))
    });
    let (g, c, conj, rep) = match built {
        Ok(v) => v,
        Err(e) => return fail(format!("{prefix}build"), e),
    };
    // N = 1 carries G, N = n − 1 carries U(−G*)U†; the middle sectors are unconstrained.
    let free: Vec<usize> = (2..n.saturating_sub(1)).collect();
    vec![
        closure_check(format!("{prefix}closure"), &rep.ops, &c, tol, sampled),
        commutant_check(format!("{prefix}number-commutant"), &rep.ops, n, tol),
        hermitian_check(format!("{prefix}hermitian"), &rep.ops, tol),
        blocks_check(
            format!("{prefix}sector-blocks"),
            &rep.ops,
            |k| {
                if n == 2 {
                    // N = 1 = n − 1: both descriptions must agree with the single block.
                    vec![(1, g.get(k).clone())]
                } else {
                    vec![(1, g.get(k).clone()), (n - 1, conj.get(k).clone())]
                }
            },
            &free,
            tol,
        ),
        blocks_check(
            format!("{prefix}conjugate-block"),
            &rep.ops,
            |k| vec![(n - 1, conj.get(k).clone())],
            &(0..=n)
                .filter(|&m| m != n - 1 && m != 0 && m != n)
                .collect::<Vec<_>>(),
            tol,
        ),
    ]
}

fn three_mode_jobs(lad: &LadderSet, p: &str, tol: f64) -> Vec<CheckResult> {
    let gm = gell_mann();
    let mut out = vec![CheckResult::timed(
        format!("{p}gellmann-from-spin1"),
        tol,
        || {
            let built = gellmann_from_spin1();
            let worst = built
                .mats()
                .iter()
                .zip(gm.mats())
                .map(|(a, b)| liealg::max_abs_diff(a, b))
                .fold(0.0, f64::max);
            Ok((worst, 8, String::new()))
        },
    )];
    let built = structure_constants(&gm, tol).and_then(|c| {
        let explicit = schwinger::nssfr_u3_explicit_on(lad)?;
        let uniform = schwinger::nssfr_un_on(lad, &gm)?;
        let standard = schwinger::standard_rep_on(lad, &gm)?;
        Ok((c, explicit, uniform, standard))
    });
    let (c, explicit, uniform, standard) = match built {
        Ok(v) => v,
        Err(e) => return fail(format!("{p}nssfr-u3/build"), e),
    };
    out.push(closure_check(
        format!("{p}nssfr-u3/explicit-closure"),
        &explicit.ops,
        &c,
        tol,
        None,
    ));
    out.push(closure_check(
        format!("{p}nssfr-u3/gell-mann-standard-closure"),
        &standard.ops,
        &c,
        tol,
        None,
    ));
    out.push(CheckResult::timed(
        format!("{p}nssfr-u3/explicit-vs-uniform"),
        tol,
        || {
            let mut worst: f64 = 0.0;
            for (a, b) in explicit.ops.iter().zip(&uniform.ops) {
                worst = worst.max(a.max_abs_diff(b)?);
            }
            Ok((worst, 8, String::new()))
        },
    ));
    out.push(blocks_check(
        format!("{p}nssfr-u3/explicit-blocks"),
        &explicit.ops,
        |k| vec![(1, gm.get(k).clone()), (2, gm.get(k).clone())],
        &[],
        tol,
    ));
    out
}

fn nssfr_jobs(lad: &LadderSet, p: &str, tol: f64, sampled: Option<usize>) -> Vec<CheckResult> {
    let n = lad.modes();
    let prefix = format!("{p}nonstandard/");
    let built = generalized_gell_mann(n).and_then(|g| {
        let c = structure_constants(&g, tol)?;
        let rep = schwinger::nssfr_un_on(lad, &g)?;
        Ok((g, c, rep))
    });
    let (g, c, rep) = match built {
        Ok(v) => v,
        Err(e) => return fail(format!("{prefix}build"), e),
    };
    vec![
        closure_check(format!("{prefix}closure"), &rep.ops, &c, tol, sampled),
        commutant_check(format!("{prefix}number-commutant"), &rep.ops, n, tol),
        hermitian_check(format!("{prefix}hermitian"), &rep.ops, tol),
        blocks_check(
            format!("{prefix}sector-blocks"),
            &rep.ops,
            |k| vec![(1, g.get(k).clone()), (n - 1, g.get(k).clone())],
            &[],
            tol,
        ),
    ]
}

fn element_jobs(lad: &LadderSet, m: usize, p: &str, tol: f64) -> Vec<CheckResult> {
    let n = lad.modes();
    let prefix = format!("{p}m{m:02}/element/");
    let basis = match ElementBasis::new(lad, m) {
        Ok(b) => b,
        Err(e) => return fail(format!("{prefix}build"), e),
    };
    let k = basis.k();
    // All k² operators, or a seeded sample of index pairs for large sectors.
    let pairs: Vec<(usize, usize)> = if k * k <= ELEMENT_FULL_LIMIT {
        (0..k * k).map(|x| (x / k, x % k)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut picked = sample(&mut rng, k * k, SAMPLED_ELEMENTS).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|x| (x / k, x % k)).collect()
    };
    let q: Vec<FockOperator> = pairs.par_iter().map(|&(i, j)| basis.q(i, j)).collect();
    // Q_ij acts as the matrix unit e_ij on N = m; the selective polynomial
    // removes sectors 1..n−1 other than m and the annihilators remove N < m.
    // The fully occupied sector keeps δ_ij f_n^(m)(n), which the matrix-unit
    // algebra tolerates because it is a scalar on a one-dimensional space.
    let start: usize = (0..m).map(|j| binomial(n, j)).sum();
    let mut units_check = placement_check(
        format!("{prefix}sector-units"),
        &q,
        |x| {
            let (i, j) = pairs[x];
            let unit = [(start + i, start + j, Complex64::new(1.0, 0.0))];
            FockOperator::from_triplets(n, unit).expect("unit inside the sector")
        },
        &[n],
        tol,
    );
    let mut commutant = commutant_check(format!("{prefix}number-commutant"), &q, n, tol);
    let eij = if pairs.len() == k * k {
        eij_check(format!("{prefix}eij-algebra"), &q, k, tol)
    } else {
        let note = format!("sampled {} of {} operators", pairs.len(), k * k);
        units_check.detail = format!("{note}; {}", units_check.detail);
        commutant.detail = format!("{note}; {}", commutant.detail);
        eij_check_with(format!("{prefix}eij-algebra"), k, tol, |i, j| {
            Cow::Owned(basis.q(i, j))
        })
    };
    vec![eij, commutant, units_check]
}

fn ucnm_jobs(
    lad: &LadderSet,
    m: usize,
    p: &str,
    tol: f64,
    sampled: Option<usize>,
) -> Vec<CheckResult> {
    let n = lad.modes();
    let k = binomial(n, m);
    let prefix = format!("{p}m{m:02}/ucnm/");
    let built = suite_sector_generators(k).and_then(|g| {
        let c = structure_constants(&g, tol)?;
        let rep = schwinger::rep_ucnm_on(lad, &g, m)?;
        Ok((g, c, rep))
    });
    let (g, c, rep) = match built {
        Ok(v) => v,
        Err(e) => return fail(format!("{prefix}build"), e),
    };
    let mut out = vec![
        closure_check(format!("{prefix}closure"), &rep.ops, &c, tol, sampled),
        commutant_check(format!("{prefix}number-commutant"), &rep.ops, n, tol),
        hermitian_check(format!("{prefix}hermitian"), &rep.ops, tol),
        blocks_check(
            format!("{prefix}support"),
            &rep.ops,
            |x| vec![(m, g.get(x).clone())],
            &[],
            tol,
        ),
    ];
    if 2 * m < n {
        let mprefix = format!("{p}m{m:02}/mixed/");
        let built = conjugate_rep(&g, k).and_then(|g2| {
            let rep = schwinger::mixed_rep_on(lad, &g, &g2, m, true, true)?;
            Ok((g2, rep))
        });
        match built {
            Ok((g2, mixed)) => {
                out.push(closure_check(
                    format!("{mprefix}closure"),
                    &mixed.ops,
                    &c,
                    tol,
                    sampled,
                ));
                out.push(commutant_check(
                    format!("{mprefix}number-commutant"),
                    &mixed.ops,
                    n,
                    tol,
                ));
                out.push(blocks_check(
                    format!("{mprefix}support"),
                    &mixed.ops,
                    |x| vec![(m, g.get(x).clone()), (n - m, g2.get(x).clone())],
                    &[],
                    tol,
                ));
            }
            Err(e) => out.extend(fail(format!("{mprefix}build"), e)),
        }
    }
    out
}
