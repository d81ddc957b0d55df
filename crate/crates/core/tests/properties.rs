use fermirep::fock::{build_basis, total_number, LadderSet};
use fermirep::liealg::{generalized_gell_mann, structure_constants, GeneratorSet, Matrix};
use fermirep::schwinger::{nssfr_un, rep_ucnm, selective_function, standard_rep};
use fermirep::verify::{block_decompose, check_closure, verify_representation};
use fermirep::{Complex64, FockOperator};
use proptest::prelude::*;

fn hermitian(d: usize, values: &[f64]) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    let mut it = values.iter().cycle();
    for r in 0..d {
        m[(r, r)] = Complex64::new(*it.next().unwrap(), 0.0);
        for c in (r + 1)..d {
            let v = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            m[(r, c)] = v;
            m[(c, r)] = v.conj();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ladder_relations_hold(n in 1usize..=7, i in 1usize..=7, j in 1usize..=7) {
        prop_assume!(i <= n && j <= n);
        let lad = LadderSet::new(n).unwrap();
        let ac = lad.a(i).anticommutator(lad.adag(j)).unwrap();
        let want = if i == j { lad.identity() } else { FockOperator::zero(n) };
        prop_assert_eq!(ac.max_abs_diff(&want).unwrap(), 0.0);
        prop_assert!(lad.a(i).anticommutator(lad.a(j)).unwrap().is_zero());
    }

    #[test]
    fn bilinears_are_block_diagonal(n in 2usize..=5, values in prop::collection::vec(-2.0f64..2.0, 8..40)) {
        let g = GeneratorSet::new(vec!["h".into()], vec![hermitian(n, &values)]).unwrap();
        let rep = standard_rep(&g, n).unwrap();
        let b = block_decompose(&rep.ops[0]);
        prop_assert_eq!(b.off_block_norm, 0.0);
        prop_assert!(rep.ops[0].is_hermitian(1e-12));
        let total = total_number(n).unwrap();
        prop_assert!(rep.ops[0].commutator(&total).unwrap().max_abs() < 1e-12);
        prop_assert!(b.reassemble().max_abs_diff(&rep.ops[0]).unwrap() < 1e-15);
    }

    #[test]
    fn selective_values_at_number_operator(n in 2usize..=9, m in 1usize..=8) {
        prop_assume!(m < n);
        let p = selective_function(n, m).unwrap();
        let counts = build_basis(n).unwrap().particle_counts();
        let op = fermirep::schwinger::eval_at_number_operator(&p, n).unwrap();
        for (k, &c) in counts.iter().enumerate() {
            let v = op.get(k, k).re;
            if c == m {
                prop_assert_eq!(v, 1.0);
            } else if (1..n).contains(&c) {
                prop_assert_eq!(v, 0.0);
            }
        }
    }
}

#[test]
fn dressed_representations_close_through_six_modes() {
    for n in 3..=6 {
        let g = generalized_gell_mann(n).unwrap();
        let report = verify_representation(&nssfr_un(&g, n).unwrap(), &g, None, 1e-10).unwrap();
        assert!(report.overall, "n={n}\n{}", report.to_text());
    }
}

#[test]
fn sector_representation_on_three_of_five() {
    let g = generalized_gell_mann(10).unwrap();
    let c = structure_constants(&g, 1e-10).unwrap();
    let rep = rep_ucnm(&g, 5, 3).unwrap();
    assert_eq!(rep.len(), 99);
    assert!(check_closure(&rep, &c, 1e-10).unwrap().overall);
}
