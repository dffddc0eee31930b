use nalgebra::DMatrix;
use proptest::prelude::*;
use symtensor_core::groups::{rot3, GroupElement};
use symtensor_core::spaces::{catalog_space, sym_identity};
use symtensor_core::tensor::*;
use symtensor_core::Error;

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

#[test]
fn flat_tensor_rejects_bad_length_and_nan() {
    assert!(matches!(FlatTensor::new(3, 2, vec![0.0; 8]), Err(Error::Shape(_))));
    let mut c = vec![0.0; 9];
    c[4] = f64::NAN;
    assert!(matches!(FlatTensor::new(3, 2, c), Err(Error::NonFinite(4))));
}

#[test]
fn row_major_flattening() {
    assert_eq!(flat_index(3, &[0, 1, 2]), 5);
    assert_eq!(multi_index(3, 4, 80), vec![2, 2, 2, 2]);
    let t = FlatTensor::basis(3, &[1, 0]);
    assert_eq!(t.coeffs[3], 1.0);
}

#[test]
fn kron_power_of_identity_is_identity() {
    let a = kron_power(&Mat::identity(3, 3), 4).unwrap();
    assert_eq!(a.matrix, Mat::identity(81, 81));
    assert_eq!(operator_trace(&a), 81.0);
}

#[test]
fn kron_power_signs_for_diagonal_q() {
    let q = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -1.0, 1.0]));
    let a = kron_power(&q, 2).unwrap();
    let s12 = flat_index(3, &[0, 1]);
    let s13 = flat_index(3, &[0, 2]);
    assert_eq!(a.matrix[(s12, s12)], 1.0);
    assert_eq!(a.matrix[(s13, s13)], -1.0);
}

#[test]
fn kron_power_rejects_non_orthogonal() {
    let q = Mat::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
    assert!(matches!(kron_power(&q, 2), Err(Error::NotOrthogonal { .. })));
}

#[test]
fn kron_power_matches_explicit_kronecker_product() {
    let q = rot3([0.3, -0.5, 0.8], 0.7);
    let dense = kron(&kron(&q, &q), &q);
    let a = kron_power(&q, 3).unwrap();
    assert!((a.matrix - dense).amax() < 1e-14);
}

#[test]
fn kron_power_preserves_elasticity_symmetries() {
    let ela = catalog_space("ela3").unwrap();
    let mut t = FlatTensor::zeros(3, 4);
    for (i, c) in t.coeffs.iter_mut().enumerate() {
        *c = ((i * 37) % 11) as f64 - 5.0;
    }
    let c = ela.symmetrize(&t).unwrap();
    let q = rot3([1.0, 2.0, 2.0], 1.1);
    let rotated = kron_power(&q, 4).unwrap().apply(&c).unwrap();
    let resymmetrized = ela.symmetrize(&rotated).unwrap();
    assert!(rotated.max_abs_diff(&resymmetrized) < 1e-12);
}

#[test]
fn traces_of_symmetrizers() {
    assert!((operator_trace(&sym_identity(&catalog_space("ela3").unwrap())) - 21.0).abs() < 1e-12);
    assert!((operator_trace(&sym_identity(&catalog_space("v2").unwrap())) - 171.0).abs() < 1e-9);
}

#[test]
fn image_basis_of_identity() {
    let a = FlatOperator::identity(2, 2);
    assert_eq!(image_basis(&a, &TolerancePolicy::default()).unwrap().len(), 4);
}

#[test]
fn image_basis_rejects_non_projector() {
    let a = FlatOperator::new(2, 1, Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
    assert!(matches!(
        image_basis(&a, &TolerancePolicy::default()),
        Err(Error::NotIdempotent { .. })
    ));
}

#[test]
fn snapping_examples() {
    let tol = TolerancePolicy::default();
    assert_eq!(rational_snap(0.4999999999, &tol).to_string(), "1/2");
    assert_eq!(rational_snap(0.7071067812, &tol).to_string(), "√2/2");
    assert_eq!(rational_snap(0.3333333333, &tol).to_string(), "1/3");
    assert_eq!(rational_snap(-1.5 * 3f64.sqrt(), &tol).to_string(), "-3√3/2");
    let odd = rational_snap(std::f64::consts::PI, &tol);
    assert!(!odd.exact);
}

#[test]
fn tolerance_policy_bounds() {
    assert!(TolerancePolicy::with_zero_tol(1e-7).is_ok());
    assert!(TolerancePolicy::with_zero_tol(1e-3).is_err());
    assert!(TolerancePolicy::with_zero_tol(0.0).is_err());
}

#[test]
fn orthonormal_range_of_rank_deficient_matrix() {
    let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0]);
    let u = orthonormal_range(&m, &TolerancePolicy::default());
    assert_eq!(u.ncols(), 2);
    assert!((u.transpose() * &u - Mat::identity(2, 2)).amax() < 1e-12);
}

fn rotation() -> impl Strategy<Value = Mat> {
    (-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0, -3.2f64..3.2).prop_map(|(x, y, z, t)| rot3([x, y, z], t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flat_index_roundtrip(n in 2usize..4, k in 1usize..7, seed in any::<u64>()) {
        let flat = (seed as usize) % flat_len(n, k);
        prop_assert_eq!(flat_index(n, &multi_index(n, k, flat)), flat);
    }

    #[test]
    fn kron_power_is_multiplicative(a in rotation(), b in rotation()) {
        let lhs = kron_power(&(&a * &b), 3).unwrap().matrix;
        let rhs = kron_power(&a, 3).unwrap().matrix * kron_power(&b, 3).unwrap().matrix;
        prop_assert!((lhs - rhs).amax() < 1e-12);
    }

    #[test]
    fn kron_power_stays_orthogonal(q in rotation()) {
        let a = kron_power(&q, 4).unwrap().matrix;
        prop_assert!(orthogonality_defect(&a) < 1e-12);
    }

    #[test]
    fn mode_products_match_dense_operator(q in rotation(), cols in 1usize..4) {
        let m = Mat::from_fn(27, cols, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let dense = kron_power(&q, 3).unwrap().matrix * &m;
        prop_assert!((apply_kron_power(&q, 3, &m) - dense).amax() < 1e-13);
    }

    #[test]
    fn snapped_rationals_are_exact(p in -40i64..40, q in 1i64..40) {
        let s = rational_snap(p as f64 / q as f64, &TolerancePolicy::default());
        prop_assert!(s.exact);
        prop_assert_eq!(s.num * q, p * s.den);
    }
}

#[test]
fn group_element_rejects_reflections_in_3d() {
    let m = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0]));
    assert!(GroupElement::new(m, "mirror").is_err());
}
