//! Dense matrix generators, structure constants and the conjugate representation.
//!
//! Generator indices are 0-based; the `k`-th Gell-Mann matrix λ_{k+1} sits at
//! index `k` of [`gell_mann`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative pivot threshold below which a Gram matrix counts as singular.
const GRAM_PIVOT_TOL: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `tr(A† B)`.
pub fn trace_inner(a: &Matrix, b: &Matrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    max_abs(&(a - b))
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// An ordered, labelled, linearly independent list of `d×d` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    mats: Vec<Matrix>,
    labels: Vec<String>,
}

impl GeneratorSet {
    /// Validates shapes and linear independence.
    pub fn new(labels: Vec<String>, mats: Vec<Matrix>) -> Result<Self> {
        let set = Self::from_parts(labels, mats)?;
        set.gram_factor()?;
        Ok(set)
    }

    fn from_parts(labels: Vec<String>, mats: Vec<Matrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::Argument("generator set is empty".into()));
        }
        if labels.len() != mats.len() {
            return Err(Error::Argument(format!(
                "{} labels for {} matrices",
                labels.len(),
                mats.len()
            )));
        }
        let dim = mats[0].nrows();
        if let Some(bad) = mats
            .iter()
            .position(|m| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(Error::Argument(format!(
                "generator {bad} is {}x{}, expected {dim}x{dim}",
                mats[bad].nrows(),
                mats[bad].ncols()
            )));
        }
        Ok(Self { dim, mats, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, k: usize) -> &Matrix {
        &self.mats[k]
    }

    /// Multiplies every generator by a real factor (e.g. Pauli → Pauli/2).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            mats: self.mats.iter().map(|m| m * re(factor)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.mats
            .iter()
            .all(|m| max_abs_diff(m, &m.adjoint()) <= tol)
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| m.trace().norm() <= tol)
    }

    /// Gram matrix `G_ab = tr(G_a† G_b)`.
    pub fn gram(&self) -> Matrix {
        let k = self.len();
        Matrix::from_fn(k, k, |a, b| trace_inner(&self.mats[a], &self.mats[b]))
    }

    fn gram_factor(&self) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
        let gram = self.gram();
        let eigen = gram.clone().symmetric_eigenvalues();
        let largest = eigen.iter().cloned().fold(0.0, f64::max);
        let smallest = eigen.iter().cloned().fold(f64::INFINITY, f64::min);
        if smallest.is_nan() || smallest <= GRAM_PIVOT_TOL * largest {
            return Err(Error::Dependence(format!(
                "Gram matrix is singular (eigenvalue ratio {:.3e})",
                smallest / largest
            )));
        }
        gram.cholesky()
            .ok_or_else(|| Error::Dependence("Gram matrix is not positive definite".into()))
    }
}

/// Coefficients `c[i][j][l]` of `[G_i, G_j] = Σ_l c[i][j][l] G_l`, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    size: usize,
    terms: Vec<Vec<(usize, Complex64)>>,
}

/// Magnitude below which a projected coefficient is dropped.
const COEFF_FLOOR: f64 = 1e-14;

impl StructureConstants {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Complex64 {
        self.terms(i, j)
            .iter()
            .find(|&&(k, _)| k == l)
            .map_or(ZERO, |&(_, c)| c)
    }

    /// Nonzero `(l, c[i][j][l])` pairs.
    pub fn terms(&self, i: usize, j: usize) -> &[(usize, Complex64)] {
        &self.terms[i * self.size + j]
    }

    /// Largest difference between two tensors of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.size != other.size {
            return Err(Error::Argument(format!(
                "structure constants of sizes {} and {}",
                self.size, other.size
            )));
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.size {
            for j in 0..self.size {
                for &(l, c) in self.terms(i, j) {
                    worst = worst.max((c - other.get(i, j, l)).norm());
                }
                for &(l, c) in other.terms(i, j) {
                    worst = worst.max((c - self.get(i, j, l)).norm());
                }
            }
        }
        Ok(worst)
    }

    /// The real `f_ijk` of the convention `[G_i, G_j] = 2i Σ_k f_ijk G_k`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        (self.get(i, j, k) / (2.0 * I)).re
    }
}

/// Extracts structure constants by projecting each commutator onto the
/// generators through the Gram matrix.
pub fn structure_constants(gens: &GeneratorSet, tol: f64) -> Result<StructureConstants> {
    let chol = gens.gram_factor()?;
    let k = gens.len();
    let mut terms = vec![Vec::new(); k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let comm = commutator(gens.get(i), gens.get(j));
            let rhs = nalgebra::DVector::from_iterator(
                k,
                gens.mats().iter().map(|g| trace_inner(g, &comm)),
            );
            let coeffs = chol.solve(&rhs);
            let mut recon = Matrix::zeros(gens.dim(), gens.dim());
            let mut pair = Vec::new();
            for (l, &c) in coeffs.iter().enumerate() {
                if c.norm() > COEFF_FLOOR {
                    recon += gens.get(l) * c;
                    pair.push((l, c));
                }
            }
            let residual = max_abs_diff(&comm, &recon);
            if residual.is_nan() || residual >= tol {
                return Err(Error::Closure { i, j, residual });
            }
            terms[j * k + i] = pair.iter().map(|&(l, c)| (l, -c)).collect();
            terms[i * k + j] = pair;
        }
    }
    Ok(StructureConstants { size: k, terms })
}

fn labelled(prefix: &str, mats: Vec<Matrix>) -> GeneratorSet {
    let labels = (1..=mats.len()).map(|k| format!("{prefix}{k}")).collect();
    GeneratorSet::new(labels, mats).expect("built-in generator sets are independent")
}

/// The eight standard Gell-Mann matrices λ_1 … λ_8.
pub fn gell_mann() -> GeneratorSet {
    let m = |entries: &[(usize, usize, Complex64)]| {
        let mut out = Matrix::zeros(3, 3);
        for &(r, c, v) in entries {
            out[(r, c)] = v;
        }
        out
    };
    let s3 = 1.0 / 3f64.sqrt();
    labelled(
        "lambda",
        vec![
            m(&[(0, 1, ONE), (1, 0, ONE)]),
            m(&[(0, 1, -I), (1, 0, I)]),
            m(&[(0, 0, ONE), (1, 1, -ONE)]),
            m(&[(0, 2, ONE), (2, 0, ONE)]),
            m(&[(0, 2, -I), (2, 0, I)]),
            m(&[(1, 2, ONE), (2, 1, ONE)]),
            m(&[(1, 2, -I), (2, 1, I)]),
            m(&[(0, 0, re(s3)), (1, 1, re(s3)), (2, 2, re(-2.0 * s3))]),
        ],
    )
}

/// The `d² − 1` generalized Gell-Mann matrices, normalized to `tr(G_a G_b) = 2δ_ab`.
///
/// Ordered by column `k = 2..=d`: the symmetric and antisymmetric members for
/// each row `j < k`, then the `(k−1)`-th diagonal member. This gives the Pauli
/// matrices at `d = 2` and the standard Gell-Mann order at `d = 3`.
pub fn generalized_gell_mann(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::Argument(format!(
            "generalized Gell-Mann needs d >= 2, got {d}"
        )));
    }
    let mut mats = Vec::with_capacity(d * d - 1);
    let mut labels = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            let mut sym = Matrix::zeros(d, d);
            sym[(j, k)] = ONE;
            sym[(k, j)] = ONE;
            mats.push(sym);
            labels.push(format!("S{}{}", j + 1, k + 1));
            let mut anti = Matrix::zeros(d, d);
            anti[(j, k)] = -I;
            anti[(k, j)] = I;
            mats.push(anti);
            labels.push(format!("A{}{}", j + 1, k + 1));
        }
        let l = k as f64;
        let norm = (2.0 / (l * (l + 1.0))).sqrt();
        let mut diag = Matrix::zeros(d, d);
        for p in 0..k {
            diag[(p, p)] = re(norm);
        }
        diag[(k, k)] = re(-l * norm);
        mats.push(diag);
        labels.push(format!("D{k}"));
    }
    GeneratorSet::new(labels, mats)
}

fn spin_ladder(d: usize) -> Matrix {
    let j = (d as f64 - 1.0) / 2.0;
    let mut plus = Matrix::zeros(d, d);
    for p in 1..d {
        // column p carries m = j − p; J_+ raises it to row p − 1.
        let m = j - p as f64;
        plus[(p - 1, p)] = re((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    plus
}

fn spin_z(d: usize) -> Matrix {
    let j = (d as f64 - 1.0) / 2.0;
    Matrix::from_diagonal(&nalgebra::DVector::from_fn(d, |p, _| re(j - p as f64)))
}

/// The spin-1 triple `{J_+, J_−, J_3}` in the basis `m = 1, 0, −1`.
pub fn spin1_matrices() -> GeneratorSet {
    let plus = spin_ladder(3);
    let minus = plus.adjoint();
    GeneratorSet::new(
        vec!["J+".into(), "J-".into(), "J3".into()],
        vec![plus, minus, spin_z(3)],
    )
    .expect("independent")
}

/// Hermitian spin matrices `{J_1, J_2, J_3}` of spin `(d − 1)/2`, basis `m = j, …, −j`.
pub fn spin_matrices(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::Argument(format!(
            "spin matrices need d >= 2, got {d}"
        )));
    }
    let plus = spin_ladder(d);
    let minus = plus.adjoint();
    let jx = (&plus + &minus) * re(0.5);
    let jy = (&plus - &minus) * Complex64::new(0.0, -0.5);
    GeneratorSet::new(
        vec!["J1".into(), "J2".into(), "J3".into()],
        vec![jx, jy, spin_z(d)],
    )
}

/// Builds the eight Gell-Mann matrices as quadratic forms of the spin-1 triple.
///
/// With `J_3 = diag(1, 0, −1)`, the seventh and eighth forms need a minus sign
/// in front of their second term: `λ_7 = −(i√2/2)(J_3J_− − J_+J_3)` and
/// `λ_8 = [J_+², J_−²]/(4√3) − [J_3J_−, J_+J_3]/(2√3)`. With a plus sign they
/// evaluate to `−λ_7` and `λ_3/√3` respectively.
pub fn gellmann_from_spin1() -> GeneratorSet {
    let spin = spin1_matrices();
    let (jp, jm, j3) = (spin.get(0), spin.get(1), spin.get(2));
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let j3jp = j3 * jp;
    let jmj3 = jm * j3;
    let j3jm = j3 * jm;
    let jpj3 = jp * j3;
    let jp2 = jp * jp;
    let jm2 = jm * jm;
    let mats = vec![
        (&j3jp + &jmj3) * re(r2 / 2.0),
        (&j3jp - &jmj3) * Complex64::new(0.0, -r2 / 2.0),
        commutator(&j3jp, &jmj3) * re(0.5),
        (&jp2 + &jm2) * re(0.5),
        (&jp2 - &jm2) * Complex64::new(0.0, -0.5),
        (&j3jm + &jpj3) * re(-r2 / 2.0),
        (&j3jm - &jpj3) * Complex64::new(0.0, -r2 / 2.0),
        commutator(&jp2, &jm2) * re(1.0 / (4.0 * r3))
            - commutator(&j3jm, &jpj3) * re(1.0 / (2.0 * r3)),
    ];
    labelled("lambda", mats)
}

/// The `n×n` antidiagonal matrix with `U[m, n+1−m] = (−1)^(m+1)` (1-based).
pub fn conjugation_matrix(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "conjugation matrix needs n >= 2, got {n}"
        )));
    }
    let mut u = Matrix::zeros(n, n);
    for p in 0..n {
        u[(p, n - 1 - p)] = if p % 2 == 0 { ONE } else { -ONE };
    }
    Ok(u)
}

/// The conjugate representation `G′ = U (−G*) U†`.
pub fn conjugate_rep(gens: &GeneratorSet, n: usize) -> Result<GeneratorSet> {
    if gens.dim() != n {
        return Err(Error::Argument(format!(
            "generators are {0}x{0}, expected {n}x{n}",
            gens.dim()
        )));
    }
    let u = conjugation_matrix(n)?;
    let ud = u.adjoint();
    let mats = gens
        .mats()
        .iter()
        .map(|g| &u * (-g.conjugate()) * &ud)
        .collect();
    let labels = gens.labels().iter().map(|l| format!("{l}'")).collect();
    GeneratorSet::from_parts(labels, mats)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn diag(values: &[f64]) -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| re(v)),
        ))
    }

    #[test]
    fn gell_mann_lambda3() {
        assert_eq!(gell_mann().get(2), &diag(&[1.0, -1.0, 0.0]));
    }

    #[test]
    fn gell_mann_traceless_hermitian_orthonormal() {
        let gm = gell_mann();
        assert!(gm.is_hermitian(0.0));
        assert!(gm.is_traceless(TOL));
        let gram = gm.gram();
        for a in 0..8 {
            for b in 0..8 {
                let want = if a == b { 2.0 } else { 0.0 };
                assert!((gram[(a, b)] - re(want)).norm() < TOL);
            }
        }
    }

    #[test]
    fn generalized_reduces_to_pauli_and_gell_mann() {
        let pauli = generalized_gell_mann(2).unwrap();
        assert_eq!(pauli.len(), 3);
        assert_eq!(pauli.get(2), &diag(&[1.0, -1.0]));
        assert_eq!(pauli.get(1)[(0, 1)], -I);
        let ggm = generalized_gell_mann(3).unwrap();
        let gm = gell_mann();
        for k in 0..8 {
            assert!(max_abs_diff(ggm.get(k), gm.get(k)) < TOL, "lambda{}", k + 1);
        }
    }

    #[test]
    fn generalized_count_and_traces() {
        let g6 = generalized_gell_mann(6).unwrap();
        assert_eq!(g6.len(), 35);
        assert!(g6.is_traceless(TOL));
        assert!(g6.is_hermitian(0.0));
        assert!(matches!(generalized_gell_mann(1), Err(Error::Argument(_))));
    }

    #[test]
    fn spin1_shapes() {
        let s = spin1_matrices();
        assert_eq!(s.get(2), &diag(&[1.0, 0.0, -1.0]));
        assert_eq!(s.get(0)[(0, 1)], re(2f64.sqrt()));
        assert_eq!(s.get(0)[(1, 2)], re(2f64.sqrt()));
        assert_eq!(s.get(1), &s.get(0).adjoint());
        let c = commutator(s.get(2), s.get(0));
        assert!(max_abs_diff(&c, s.get(0)) < TOL);
    }

    #[test]
    fn spin1_quadratics_reproduce_gell_mann() {
        let built = gellmann_from_spin1();
        let gm = gell_mann();
        for k in 0..8 {
            assert!(
                max_abs_diff(built.get(k), gm.get(k)) < TOL,
                "lambda{}",
                k + 1
            );
        }
        let l4 = built.get(3);
        assert!((l4[(0, 2)] - ONE).norm() < TOL && (l4[(2, 0)] - ONE).norm() < TOL);
        let l2 = built.get(1);
        assert!(l2[(0, 1)].re.abs() < TOL && l2[(0, 1)].im != 0.0);
        assert!(max_abs_diff(l2, &l2.adjoint()) < TOL);
    }

    #[test]
    fn plus_signed_spin1_forms_miss_lambda7_and_lambda8() {
        let spin = spin1_matrices();
        let (jp, jm, j3) = (spin.get(0), spin.get(1), spin.get(2));
        let r2 = 2f64.sqrt();
        let r3 = 3f64.sqrt();
        let l7 = (j3 * jm - jp * j3) * Complex64::new(0.0, r2 / 2.0);
        let l8 = commutator(&(jp * jp), &(jm * jm)) * re(1.0 / (4.0 * r3))
            + commutator(&(j3 * jm), &(jp * j3)) * re(1.0 / (2.0 * r3));
        let gm = gell_mann();
        assert!(max_abs_diff(&l7, &-gm.get(6)) < TOL);
        assert!(max_abs_diff(&l8, &(gm.get(2) * re(1.0 / r3))) < TOL);
    }

    #[test]
    fn gell_mann_f123() {
        let c = structure_constants(&gell_mann(), 1e-10).unwrap();
        assert!((c.get(0, 1, 2) - Complex64::new(0.0, 2.0)).norm() < TOL);
        assert!((c.f(0, 1, 2) - 1.0).abs() < TOL);
        for i in 0..8 {
            assert!(c.terms(i, i).is_empty());
        }
    }

    #[test]
    fn gell_mann_f_is_real_and_totally_antisymmetric() {
        let c = structure_constants(&gell_mann(), 1e-10).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    let raw = c.get(i, j, k) / (2.0 * I);
                    assert!(raw.im.abs() < TOL);
                    let f = c.f(i, j, k);
                    assert!((f + c.f(j, i, k)).abs() < TOL);
                    assert!((f - c.f(j, k, i)).abs() < TOL);
                    assert!((f + c.f(i, k, j)).abs() < TOL);
                }
            }
        }
        // f_458 = √3/2
        assert!((c.f(3, 4, 7) - 3f64.sqrt() / 2.0).abs() < TOL);
    }

    #[test]
    fn half_pauli_structure_constant() {
        let half = generalized_gell_mann(2).unwrap().scaled(0.5);
        let c = structure_constants(&half, 1e-10).unwrap();
        assert!((c.get(0, 1, 2) - I).norm() < TOL);
    }

    #[test]
    fn non_orthogonal_spin_set() {
        // [J3, J±] = ±J±, [J+, J−] = 2 J3
        let c = structure_constants(&spin1_matrices(), 1e-10).unwrap();
        assert!((c.get(2, 0, 0) - ONE).norm() < TOL);
        assert!((c.get(2, 1, 1) + ONE).norm() < TOL);
        assert!((c.get(0, 1, 2) - re(2.0)).norm() < TOL);
    }

    #[test]
    fn dependent_set_is_rejected() {
        let gm = gell_mann();
        let mats = vec![gm.get(0).clone(), gm.get(1).clone(), gm.get(0) + gm.get(1)];
        let err = GeneratorSet::new(vec!["a".into(), "b".into(), "c".into()], mats);
        assert!(matches!(err, Err(Error::Dependence(_))), "{err:?}");
    }

    #[test]
    fn open_set_fails_closure() {
        let gm = gell_mann();
        let set = GeneratorSet::new(
            vec!["l1".into(), "l2".into()],
            vec![gm.get(0).clone(), gm.get(1).clone()],
        )
        .unwrap();
        assert!(matches!(
            structure_constants(&set, 1e-10),
            Err(Error::Closure { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn mismatched_shapes_rejected() {
        let err = GeneratorSet::new(
            vec!["a".into(), "b".into()],
            vec![Matrix::identity(2, 2), Matrix::identity(3, 3)],
        );
        assert!(matches!(err, Err(Error::Argument(_))));
    }

    #[test]
    fn conjugation_matrix_shapes() {
        let u3 = conjugation_matrix(3).unwrap();
        assert_eq!(u3[(0, 2)], ONE);
        assert_eq!(u3[(1, 1)], -ONE);
        assert_eq!(u3[(2, 0)], ONE);
        let u2 = conjugation_matrix(2).unwrap();
        assert_eq!(u2[(0, 1)], ONE);
        assert_eq!(u2[(1, 0)], -ONE);
        for n in 2..=8 {
            let u = conjugation_matrix(n).unwrap();
            assert_eq!(&u * u.adjoint(), Matrix::identity(n, n));
            assert_eq!(u.adjoint(), u.transpose());
            assert!(u.iter().all(|z| z.im == 0.0));
        }
        assert!(conjugation_matrix(1).is_err());
    }

    #[test]
    fn conjugate_lambda3() {
        // U(−diag(1,−1,0))U† with U = antidiag(1,−1,1) reverses the diagonal of −λ3.
        let conj = conjugate_rep(&gell_mann(), 3).unwrap();
        assert!(max_abs_diff(conj.get(2), &diag(&[0.0, 1.0, -1.0])) < TOL);
    }

    #[test]
    fn conjugate_rep_keeps_structure_constants() {
        for d in 2..=5 {
            let g = generalized_gell_mann(d).unwrap();
            let gc = conjugate_rep(&g, d).unwrap();
            let c = structure_constants(&g, 1e-10).unwrap();
            let cc = structure_constants(&gc, 1e-10).unwrap();
            assert!(c.max_abs_diff(&cc).unwrap() < TOL);
        }
    }

    #[test]
    fn conjugate_of_imaginary_antisymmetric_is_plain_conjugation() {
        let gm = gell_mann();
        let conj = conjugate_rep(&gm, 3).unwrap();
        let u = conjugation_matrix(3).unwrap();
        for k in [1, 4, 6] {
            let direct = &u * gm.get(k) * u.adjoint();
            assert!(max_abs_diff(conj.get(k), &direct) < TOL);
        }
    }

    #[test]
    fn conjugate_rep_dimension_mismatch() {
        assert!(matches!(
            conjugate_rep(&gell_mann(), 4),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn spin_matrices_close_as_su2() {
        for d in 2..=7 {
            let s = spin_matrices(d).unwrap();
            let c = structure_constants(&s, 1e-10).unwrap();
            assert!((c.get(0, 1, 2) - I).norm() < 1e-12);
            assert!((c.get(1, 2, 0) - I).norm() < 1e-12);
        }
    }
}
