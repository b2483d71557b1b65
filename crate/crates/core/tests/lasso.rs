mod common;

use common::{gaussian_matrix, rng, RandomLasso};
use dssc::data::normalize_columns;
use dssc::linalg::dot;
use dssc::sparse::{kkt_residual, self_expression, solve_lasso_cd, solve_lasso_homotopy, LassoProblem, DEFAULT_DELTA};
use dssc::Matrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homotopy_is_optimal(seed in any::<u64>()) {
        let lp = RandomLasso::draw(seed);
        let p = lp.problem();
        let h = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
        prop_assert!(kkt_residual(&p, &h.coefficients) <= DEFAULT_DELTA);
        prop_assert!(h.objective <= 0.5 * dot(&lp.target, &lp.target) + 1e-12);
        if let Some(e) = lp.excluded {
            prop_assert_eq!(h.coefficients[e], 0.0);
        }
        let nonzero: Vec<usize> = (0..h.coefficients.len()).filter(|&j| h.coefficients[j] != 0.0).collect();
        prop_assert_eq!(&nonzero, &h.support);
    }

    #[test]
    fn homotopy_matches_coordinate_descent(seed in any::<u64>()) {
        let lp = RandomLasso::draw(seed);
        let p = lp.problem();
        let h = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
        // near-collinear draws can stall the oracle; those say nothing about homotopy
        let cd = solve_lasso_cd(&p, 200_000, 1e-12);
        prop_assume!(cd.is_ok());
        let cd = cd.unwrap();
        let rel = (h.objective - cd.objective).abs() / cd.objective.max(1e-300);
        prop_assert!(rel <= 1e-6, "homotopy {} cd {}", h.objective, cd.objective);
    }
}

#[test]
fn atom_may_leave_and_return_with_the_other_sign() {
    // on this draw atom 1 exits the path negative and ends up positive
    let lp = RandomLasso::draw(1998);
    let p = lp.problem();
    let h = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
    let cd = solve_lasso_cd(&p, 200_000, 1e-13).unwrap();
    assert!(h.coefficients[1] > 0.0);
    assert!((h.objective - cd.objective).abs() <= 1e-10 * cd.objective);
}

#[test]
fn large_gamma_gives_zero_code() {
    let lp = RandomLasso::draw(5);
    let dty = lp.dictionary.tr_matvec(&lp.target).unwrap();
    let gmax = dty.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let p = LassoProblem {
        gamma: 1.0001 * gmax,
        excluded: None,
        ..lp.problem()
    };
    let h = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
    assert!(h.coefficients.iter().all(|&v| v == 0.0));
    assert!(h.support.is_empty());
}

#[test]
fn duplicated_atoms_do_not_break_the_path() {
    let mut r = rng(7);
    let base = gaussian_matrix(&mut r, 6, 4, 1.0);
    let mut cols: Vec<Vec<f64>> = (0..4).map(|j| base.column(j)).collect();
    cols.push(base.column(0));
    cols.push(base.column(2).iter().map(|v| -v).collect());
    let dict = Matrix::from_columns(&cols).unwrap();
    let y = common::gaussian_vec(&mut r, 6, 1.0);
    let p = LassoProblem {
        dictionary: &dict,
        target: &y,
        gamma: 0.05,
        excluded: None,
    };
    let h = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
    let cd = solve_lasso_cd(&p, 200_000, 1e-13).unwrap();
    assert!(kkt_residual(&p, &h.coefficients) <= DEFAULT_DELTA);
    assert!((h.objective - cd.objective).abs() <= 1e-8 * cd.objective);
}

#[test]
fn self_expression_solves_each_column_with_itself_excluded() {
    let mut r = rng(3);
    let h = normalize_columns(&gaussian_matrix(&mut r, 5, 12, 1.0));
    let gamma = 0.05;
    let c = self_expression(&h, gamma, DEFAULT_DELTA).unwrap();
    for i in 0..h.cols() {
        let y = h.column(i);
        let p = LassoProblem {
            dictionary: &h,
            target: &y,
            gamma,
            excluded: Some(i),
        };
        let col = c.column(i);
        assert_eq!(col[i], 0.0);
        let direct = solve_lasso_homotopy(&p, DEFAULT_DELTA).unwrap();
        assert!((p.objective(&col) - direct.objective).abs() <= 1e-12 * direct.objective.max(1.0));
        assert!(kkt_residual(&p, &col) <= DEFAULT_DELTA);
    }
}
