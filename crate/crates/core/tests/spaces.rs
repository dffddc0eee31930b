use proptest::prelude::*;
use symtensor_core::spaces::*;
use symtensor_core::tensor::{flat_index, FlatTensor, Mat};
use symtensor_core::Error;

#[test]
fn catalog_dimensions() {
    let want = [
        ("sym2", 3),
        ("sym3", 6),
        ("ela2", 6),
        ("ela3", 21),
        ("major3", 45),
        ("v1", 108),
        ("v1bar", 108),
        ("v2", 171),
        ("v2bar", 171),
        ("high2", 36),
    ];
    for (name, dim) in want {
        let s = catalog_space(name).unwrap();
        assert_eq!(space_dim(&s), dim, "{name}");
        assert_eq!(s.index_orbits().len(), dim, "{name}");
    }
}

#[test]
fn sym3_symmetrizer_entries() {
    let s = catalog_space("sym3").unwrap();
    let pi = sym_identity(&s).matrix;
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                    let want = 0.5 * (d(i, a) * d(j, b) + d(i, b) * d(j, a));
                    assert_eq!(pi[(flat_index(3, &[i, j]), flat_index(3, &[a, b]))], want);
                }
            }
        }
    }
}

#[test]
fn symmetrizers_are_orthogonal_projectors() {
    for name in CATALOG_NAMES {
        let s = catalog_space(name).unwrap();
        let pi = sym_identity(&s);
        assert!(pi.idempotence_defect() < 1e-12, "{name}");
        assert!((&pi.matrix - pi.matrix.transpose()).amax() < 1e-15, "{name}");
    }
}

#[test]
fn orbit_basis_is_orthonormal_and_spans_the_space() {
    let s = catalog_space("v1bar").unwrap();
    let v = s.orbit_basis();
    let d = v.ncols();
    assert!((v.transpose() * &v - Mat::identity(d, d)).amax() < 1e-14);
    let pi = sym_identity(&s).matrix;
    assert!((&v * v.transpose() - pi).amax() < 1e-14);
}

#[test]
fn membership_of_a_single_slot() {
    // e₁⊗e₂⊗e₁⊗e₁ has an orbit of four index slots, so Π spreads it to ¼
    // on each and the largest deviation is |¼ − 1| = ¾.
    let s = catalog_space("ela3").unwrap();
    let t = FlatTensor::basis(3, &[0, 1, 0, 0]);
    assert!((membership_residual(&s, &t).unwrap() - 0.75).abs() < 1e-15);
    assert_eq!(membership_residual(&s, &FlatTensor::zeros(3, 4)).unwrap(), 0.0);
}

#[test]
fn shape_mismatch_is_reported() {
    let s = catalog_space("ela3").unwrap();
    assert!(matches!(membership_residual(&s, &FlatTensor::zeros(3, 2)), Err(Error::Shape(_))));
}

#[test]
fn unknown_space_and_bad_generators() {
    assert!(matches!(catalog_space("ela4"), Err(Error::UnknownName { .. })));
    assert!(catalog_space("ELA3").is_ok());
    assert!(TensorSpace::new("bad", 3, 3, vec![vec![0, 0, 1]]).is_err());
    assert!(TensorSpace::new("bad", 4, 2, vec![]).is_err());
}

#[test]
fn generated_permutation_groups() {
    assert_eq!(catalog_space("ela3").unwrap().permutations.len(), 8);
    assert_eq!(catalog_space("major3").unwrap().permutations.len(), 2);
    assert_eq!(catalog_space("v2").unwrap().permutations.len(), 8);
    assert_eq!(catalog_space("high2").unwrap().permutations.len(), 2);
}

#[test]
fn digit_strings_index_row_major() {
    assert_eq!(flat_of_digits(3, "2323"), flat_index(3, &[1, 2, 1, 2]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symmetrized_tensors_are_members(seed in prop::collection::vec(-1.0f64..1.0, 243)) {
        let s = catalog_space("v1").unwrap();
        let t = FlatTensor::new(3, 5, seed).unwrap();
        let p = s.symmetrize(&t).unwrap();
        prop_assert!(membership_residual(&s, &p).unwrap() < 1e-12);
    }

    #[test]
    fn symmetrize_matches_dense_operator(seed in prop::collection::vec(-1.0f64..1.0, 81)) {
        let s = catalog_space("ela3").unwrap();
        let t = FlatTensor::new(3, 4, seed).unwrap();
        let dense = sym_identity(&s).apply(&t).unwrap();
        prop_assert!(s.symmetrize(&t).unwrap().max_abs_diff(&dense) < 1e-15);
    }
}
