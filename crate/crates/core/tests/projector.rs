use std::collections::BTreeMap;

use proptest::prelude::*;
use symtensor_core::groups::resolve_group;
use symtensor_core::projector::*;
use symtensor_core::spaces::{catalog_space, sym_identity, TensorSpace};
use symtensor_core::tensor::{FlatTensor, Mat, TolerancePolicy};
use symtensor_core::voigt::{induced_matrix, SpaceLayout, VoigtMap};
use symtensor_core::Error;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn pseudo_random(n: usize, k: usize, seed: f64) -> FlatTensor {
    let mut t = FlatTensor::zeros(n, k);
    for (i, c) in t.coeffs.iter_mut().enumerate() {
        *c = ((i as f64 + 1.0) * seed).sin();
    }
    t
}

#[test]
fn plane_average_keeps_only_the_mean_trace() {
    let s = catalog_space("sym2").unwrap();
    let g = resolve_group("so2", 2, None, None).unwrap();
    let a = averaged_projector(&s, &g).unwrap();
    let t = FlatTensor::new(2, 2, vec![0.3, -1.1, -1.1, 2.5]).unwrap();
    let p = a.apply(&t).unwrap();
    let m = (0.3 + 2.5) / 2.0;
    assert!(p.max_abs_diff(&FlatTensor::new(2, 2, vec![m, 0.0, 0.0, m]).unwrap()) < 1e-15);
}

#[test]
fn trivial_group_gives_the_symmetrizer() {
    for name in ["ela3", "ela2", "major3"] {
        let s = catalog_space(name).unwrap();
        let g = resolve_group("trivial", s.n, None, None).unwrap();
        let a = averaged_projector(&s, &g).unwrap();
        assert!((a.matrix - sym_identity(&s).matrix).amax() < 1e-15, "{name}");
    }
}

#[test]
fn sign_group_kills_the_off_diagonal() {
    let s = catalog_space("sym2").unwrap();
    let g = resolve_group("d2", 2, None, None).unwrap();
    let t = FlatTensor::new(2, 2, vec![4.0, 1.5, 1.5, -2.0]).unwrap();
    let p = project(&s, &g, &t).unwrap();
    assert!(p.max_abs_diff(&FlatTensor::new(2, 2, vec![4.0, 0.0, 0.0, -2.0]).unwrap()) < 1e-15);
}

#[test]
fn example_matrix_projects_to_three_times_identity() {
    let s = catalog_space("sym2").unwrap();
    let g = resolve_group("so2", 2, None, None).unwrap();
    let t = FlatTensor::new(2, 2, vec![1.0, 2.0, 2.0, 5.0]).unwrap();
    let p = project(&s, &g, &t).unwrap();
    assert!(p.max_abs_diff(&FlatTensor::new(2, 2, vec![3.0, 0.0, 0.0, 3.0]).unwrap()) < 1e-14);
}

#[test]
fn invariant_input_is_fixed_and_projection_is_idempotent() {
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("cubic", 3, None, None).unwrap();
    let t = s.symmetrize(&pseudo_random(3, 4, 0.61)).unwrap();
    let once = project(&s, &g, &t).unwrap();
    let twice = project(&s, &g, &once).unwrap();
    assert!(once.max_abs_diff(&twice) < 1e-15);
    assert!(invariance_residual(&g, &once) < 1e-12);
}

#[test]
fn projection_requires_membership() {
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("cubic", 3, None, None).unwrap();
    let err = project(&s, &g, &pseudo_random(3, 4, 0.3)).unwrap_err();
    assert!(matches!(err, Error::NotInSpace { .. }));
}

#[test]
fn fixed_basis_is_orthonormal_and_invariant() {
    let s = catalog_space("v1bar").unwrap();
    let g = resolve_group("o2-e3", 3, None, None).unwrap();
    let b = fixed_basis(&s, &g, &tol()).unwrap();
    let d = b.ncols();
    assert_eq!(d, 8);
    assert!((b.transpose() * &b - Mat::identity(d, d)).amax() < 1e-12);
    for c in b.column_iter() {
        let t = FlatTensor::new(3, 5, c.iter().cloned().collect()).unwrap();
        assert!(invariance_residual(&g, &t) < 1e-12);
    }
}

#[test]
fn report_invariants() {
    for (space, group) in [("ela3", "so2-e3"), ("major3", "so2-e3"), ("v2bar", "cubic"), ("v1bar", "cubic")] {
        let s = catalog_space(space).unwrap();
        let g = resolve_group(group, 3, None, None).unwrap();
        let r = structure_report(&s, &g, &tol()).unwrap();
        let free = r.free_labels();
        assert_eq!(free.len(), r.dim);
        assert_eq!(r.named_count() - r.constraints.len(), r.dim);
        for row in &r.entries {
            for e in row {
                if let StructureEntry::Dependent { combo, .. } = e {
                    assert!(combo.iter().all(|t| free.contains(&t.label.as_str()) && t.coef.exact));
                }
            }
        }
        if r.symmetric {
            for a in 0..r.shape.0 {
                for b in 0..a {
                    assert_eq!(r.entries[a][b], r.entries[b][a]);
                }
            }
        }
    }
}

#[test]
fn transverse_extended_report_names_and_signs() {
    let s = catalog_space("major3").unwrap();
    let g = resolve_group("so2-e3", 3, None, None).unwrap();
    let r = structure_report(&s, &g, &tol()).unwrap();
    assert_eq!(r.constraints, vec!["C11 = C12 + C88 + C89"]);
    assert_eq!(r.entries[0][7].display(), "C18");
    assert_eq!(r.entries[0][8].display(), "-C18");
    assert_eq!(r.entries[3][6].display(), "C47");
    assert_eq!(r.entries[4][5].display(), "-C47");
}

#[test]
fn labels_past_nine_use_a_comma() {
    assert_eq!(label_for("G", 11, 15), "G12,16");
    assert_eq!(label_for("C", 0, 8), "C19");
}

#[test]
fn json_roundtrips_through_the_schema() {
    let s = catalog_space("major3").unwrap();
    let g = resolve_group("so3", 3, None, None).unwrap();
    let r = structure_report(&s, &g, &tol()).unwrap().to_json();
    let text = serde_json::to_string(&r).unwrap();
    let back: ReportJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["space", "group", "dim", "shape", "entries", "constraints"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["entries"][0][0]["kind"], "free");
    assert_eq!(v["entries"][0][3]["kind"], "zero");
}

#[test]
fn latex_uses_sym_shorthand() {
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("so3", 3, None, None).unwrap();
    let tex = structure_report(&s, &g, &tol()).unwrap().to_latex();
    assert!(tex.starts_with("\\begin{pmatrix}"));
    assert!(tex.contains("\\textrm{sym}"));
    assert!(tex.contains("C_{11} = C_{12} + 2 C_{44}"));
}

#[test]
fn zero_dimensional_report_is_all_zero() {
    // odd-order tensors in the plane are killed by −I
    let s = TensorSpace::new("odd", 2, 3, vec![vec![0, 2, 1]]).unwrap();
    let g = resolve_group("z2", 2, None, None).unwrap();
    let layout = SpaceLayout {
        rows: VoigtMap::vector(2),
        cols: VoigtMap::voigt2(),
        prefix: "X",
        symmetric: false,
    };
    let r = structure_report_with_layout(&s, &g, &layout, &tol()).unwrap();
    assert_eq!(r.dim, 0);
    assert!(r.entries.iter().flatten().all(|e| *e == StructureEntry::Zero));
    assert_eq!(r.tensor_at(&[]).norm_inf(), 0.0);
}

#[test]
fn layouts_must_fit_the_space() {
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("cubic", 3, None, None).unwrap();
    let layout = SpaceLayout {
        rows: VoigtMap::vector(3),
        cols: VoigtMap::voigt3(),
        prefix: "X",
        symmetric: false,
    };
    assert!(matches!(structure_report_with_layout(&s, &g, &layout, &tol()), Err(Error::Shape(_))));
    let sym3 = catalog_space("sym3").unwrap();
    let custom = TensorSpace::new("other", 3, 4, vec![]).unwrap();
    assert!(structure_report(&custom, &g, &tol()).is_err());
    assert!(structure_report(&sym3, &g, &tol()).is_ok());
}

#[test]
fn tilted_axis_keeps_the_dimension() {
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("so2-e3", 3, Some([1.0, 1.0, 1.0]), None).unwrap();
    assert_eq!(structure_report(&s, &g, &tol()).unwrap().dim, 5);
}

fn isotropic_report() -> StructureReport {
    let s = catalog_space("major3").unwrap();
    let g = resolve_group("so3", 3, None, None).unwrap();
    structure_report(&s, &g, &tol()).unwrap()
}

fn values(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn moduli_from_label_values() {
    let r = isotropic_report();
    let m = extract_isotropic_moduli(&r, &values(&[("C12", 1.0), ("C44", 3.0), ("C45", 1.0)])).unwrap();
    assert!((m.lambda - 1.0).abs() < 1e-12 && (m.mu - 2.0).abs() < 1e-12 && (m.mu_c - 1.0).abs() < 1e-12);
    let m = extract_isotropic_moduli(&r, &values(&[("C12", 0.5), ("C44", 2.0), ("C45", 2.0)])).unwrap();
    assert!(m.mu_c.abs() < 1e-12);
    // C11 determines C45 through the constraint
    let m = extract_isotropic_moduli(&r, &values(&[("C11", 6.0), ("C12", 1.0), ("C44", 3.0)])).unwrap();
    assert!((m.mu - 2.5).abs() < 1e-12 && (m.mu_c - 0.5).abs() < 1e-12);
}

#[test]
fn moduli_errors() {
    let r = isotropic_report();
    assert!(extract_isotropic_moduli(&r, &values(&[("C12", 1.0)])).is_err());
    assert!(extract_isotropic_moduli(&r, &values(&[("C12", 1.0), ("C44", 3.0), ("C45", 1.0), ("C11", 0.0)])).is_err());
    assert!(matches!(
        extract_isotropic_moduli(&r, &values(&[("Z1", 1.0)])),
        Err(Error::UnknownName { .. })
    ));
    let s = catalog_space("ela3").unwrap();
    let g = resolve_group("so3", 3, None, None).unwrap();
    let other = structure_report(&s, &g, &tol()).unwrap();
    assert!(extract_isotropic_moduli(&other, &values(&[("C12", 1.0)])).is_err());
}

#[test]
fn projection_preserves_positive_definiteness() {
    let s = catalog_space("ela3").unwrap();
    let v = VoigtMap::voigt3();
    let mut identity = FlatTensor::zeros(3, 4);
    for i in 0..3 {
        for j in 0..3 {
            identity.set(&[i, j, i, j], identity.get(&[i, j, i, j]) + 0.5);
            identity.set(&[i, j, j, i], identity.get(&[i, j, j, i]) + 0.5);
        }
    }
    let noise = s.symmetrize(&pseudo_random(3, 4, 2.3)).unwrap();
    let mut c = identity.clone();
    for (x, n) in c.coeffs.iter_mut().zip(&noise.coeffs) {
        *x += 0.05 * n;
    }
    let min_eig = |t: &FlatTensor| {
        let m = induced_matrix(&v, &v, t).unwrap();
        m.symmetric_eigen().eigenvalues.min()
    };
    assert!(min_eig(&c) > 0.0);
    for group in ["d2", "so2-e3", "cubic", "so3"] {
        let g = resolve_group(group, 3, None, None).unwrap();
        assert!(min_eig(&project(&s, &g, &c).unwrap()) > 0.0, "{group}");
    }
}

#[test]
fn isotropic_matrix_roundtrip() {
    let m = IsotropicModuli { lambda: 0.7, mu: 1.9, mu_c: -0.4 };
    let back = moduli_from_matrix(&isotropic_moduli_matrix(&m));
    assert!((back.lambda - m.lambda).abs() + (back.mu - m.mu).abs() + (back.mu_c - m.mu_c).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projections_are_invariant(seed in 0.1f64..3.0, which in 0usize..6) {
        let group = ["z3", "d4", "cubic", "so2-e3", "o2-e3", "so3"][which];
        let s = catalog_space("major3").unwrap();
        let g = resolve_group(group, 3, None, None).unwrap();
        let t = s.symmetrize(&pseudo_random(3, 4, seed)).unwrap();
        let p = project(&s, &g, &t).unwrap();
        prop_assert!(invariance_residual(&g, &p) < 1e-10);
        prop_assert!(project(&s, &g, &p).unwrap().max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn moduli_roundtrip(l in -5.0f64..5.0, mu in -5.0f64..5.0, mc in -5.0f64..5.0) {
        let m = IsotropicModuli { lambda: l, mu, mu_c: mc };
        let back = moduli_from_matrix(&isotropic_moduli_matrix(&m));
        prop_assert!((back.lambda - l).abs() < 1e-12);
        prop_assert!((back.mu - mu).abs() < 1e-12);
        prop_assert!((back.mu_c - mc).abs() < 1e-12);
    }
}
