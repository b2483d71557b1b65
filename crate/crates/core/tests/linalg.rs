mod common;

use common::{gaussian_matrix, random_symmetric, rng};
use dssc::data::pca_reduce;
use dssc::linalg::symmetric_eig;
use dssc::Matrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..12) {
        let s = random_symmetric(&mut rng(seed), n);
        let eig = symmetric_eig(&s).unwrap();
        let v = &eig.eigenvectors;
        let recon = v.matmul(&Matrix::diag(&eig.eigenvalues)).unwrap().matmul(&v.transpose()).unwrap();
        prop_assert!(recon.max_abs_diff(&s) <= 1e-9 * s.frobenius_norm().max(1.0));
        prop_assert!(v.gram().max_abs_diff(&Matrix::identity(n)) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = (0..n).map(|i| s[(i, i)]).sum();
        prop_assert!((eig.eigenvalues.iter().sum::<f64>() - trace).abs() <= 1e-9 * (1.0 + trace.abs()));
        for j in 0..n {
            let col = v.column(j);
            let big = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            prop_assert!(big >= 0.0);
        }
    }

    #[test]
    fn pca_residual_is_the_discarded_variance(seed in any::<u64>(), keep in 1usize..6) {
        let mut r = rng(seed);
        let x = gaussian_matrix(&mut r, 6, 15, 1.0);
        let pca = pca_reduce(&x, keep).unwrap();
        let residual = x.sub(&pca.reconstruct()).unwrap().frobenius_norm().powi(2);
        let discarded: f64 = pca.variances[keep..].iter().sum();
        prop_assert!((residual - 14.0 * discarded).abs() <= 1e-9 * (1.0 + residual));
        prop_assert!(pca.basis.gram().max_abs_diff(&Matrix::identity(keep)) <= 1e-10);
        prop_assert!(pca.variances.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn gram_matches_explicit_product() {
    let x = gaussian_matrix(&mut rng(4), 5, 7, 1.0);
    let g = x.gram();
    assert_eq!(g.asymmetry(), 0.0);
    assert!(g.max_abs_diff(&x.transpose().matmul(&x).unwrap()) < 1e-13);
}

#[test]
fn repeated_eigenvalues_still_give_an_orthonormal_basis() {
    let s = Matrix::from_rows(&[[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 5.0]]).unwrap();
    let eig = symmetric_eig(&s).unwrap();
    assert_eq!(eig.eigenvalues, vec![2.0, 2.0, 5.0]);
    assert!(eig.eigenvectors.gram().max_abs_diff(&Matrix::identity(3)) < 1e-15);
}

#[test]
fn asymmetric_input_is_rejected() {
    let s = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
    assert!(symmetric_eig(&s).is_err());
}
