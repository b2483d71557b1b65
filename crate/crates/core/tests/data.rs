mod common;

use common::{experiment_spec, gaussian_matrix, rng};
use dssc::data::{
    compact_labels, generate, load_labels, load_matrix_csv, matrix_to_csv, normalize_columns, Dataset, SynthSpec, Warp,
};
use dssc::linalg::norm2;
use std::fs;

#[test]
fn csv_round_trips_exactly() {
    let x = gaussian_matrix(&mut rng(1), 4, 9, 1.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    fs::write(&path, matrix_to_csv(&x)).unwrap();
    assert_eq!(load_matrix_csv(&path).unwrap(), x);
}

#[test]
fn csv_header_is_skipped_and_bad_cells_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    fs::write(&path, "a,b\n1,2\n3,4\n").unwrap();
    let x = load_matrix_csv(&path).unwrap();
    assert_eq!(x.shape(), (2, 2));
    assert_eq!(x.column(1), vec![3.0, 4.0]);

    fs::write(&path, "1,2\n3,oops\n").unwrap();
    let err = load_matrix_csv(&path).unwrap_err().to_string();
    assert!(err.contains("row 2") && err.contains("column 2"), "{err}");

    fs::write(&path, "1,2\n3\n").unwrap();
    assert!(load_matrix_csv(&path).is_err());
    fs::write(&path, "1,NaN\n").unwrap();
    assert!(load_matrix_csv(&path).is_err());
}

#[test]
fn labels_are_compacted_in_first_appearance_order() {
    assert_eq!(compact_labels(&[7, 3, 7, 9]), (vec![0, 1, 0, 2], 3));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.txt");
    fs::write(&path, "4\n4\n\n2\n").unwrap();
    assert_eq!(load_labels(&path).unwrap(), vec![4, 4, 2]);
    fs::write(&path, "4\n-1\n").unwrap();
    assert!(load_labels(&path).is_err());
    let ds = Dataset::new(gaussian_matrix(&mut rng(2), 2, 3, 1.0), Some(vec![5, 1, 5])).unwrap();
    assert_eq!(ds.labels, Some(vec![0, 1, 0]));
    assert_eq!(ds.k, Some(2));
    assert!(Dataset::new(gaussian_matrix(&mut rng(2), 2, 3, 1.0), Some(vec![0, 1])).is_err());
}

#[test]
fn normalized_columns_have_unit_norm() {
    let mut x = gaussian_matrix(&mut rng(3), 5, 6, 2.0);
    x.set_column(2, &[0.0; 5]);
    let y = normalize_columns(&x);
    for j in 0..6 {
        let n = norm2(&y.column(j));
        if j == 2 {
            assert_eq!(n, 0.0);
        } else {
            assert!((n - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn linear_points_lie_in_their_subspace() {
    let spec = SynthSpec {
        noise_sigma: 0.0,
        ..experiment_spec(Warp::Identity, 4)
    };
    let syn = generate(&spec).unwrap();
    let labels = syn.dataset.labels.as_ref().unwrap();
    for (j, &l) in labels.iter().enumerate() {
        let b = &syn.bases[l];
        let x = syn.dataset.x.column(j);
        let coords = b.tr_matvec(&x).unwrap();
        let back = b.matvec(&coords).unwrap();
        let off: Vec<f64> = x.iter().zip(&back).map(|(a, c)| a - c).collect();
        assert!(norm2(&off) < 1e-12);
    }
    assert_eq!(labels.len(), 150);
    assert_eq!(syn.dataset.k, Some(3));
}

#[test]
fn warps_share_the_linear_draw() {
    let lin = generate(&experiment_spec(Warp::Identity, 8)).unwrap();
    let non = generate(&experiment_spec(Warp::CubicRotate, 8)).unwrap();
    assert_eq!(lin.pre_warp, non.pre_warp);
    assert_eq!(lin.dataset.x, lin.pre_warp);
    assert_ne!(non.dataset.x, non.pre_warp);
}

#[test]
fn invalid_specs_are_rejected() {
    let base = experiment_spec(Warp::Identity, 0);
    assert!(generate(&SynthSpec {
        subspace_dim: 30,
        ..base.clone()
    })
    .is_err());
    assert!(generate(&SynthSpec {
        points_per: 4,
        ..base.clone()
    })
    .is_err());
    assert!(generate(&SynthSpec {
        noise_sigma: -1.0,
        ..base.clone()
    })
    .is_err());
    assert!(generate(&SynthSpec {
        num_subspaces: 0,
        ..base
    })
    .is_err());
}
