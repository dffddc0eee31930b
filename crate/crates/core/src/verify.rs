//! Reproduction checks against the published tables: dimensions,
//! characters, displayed Voigt patterns, quadrature, Voigt maps, isotropic
//! moduli and coefficient averages. Shared by `symtensor verify-paper` and
//! the acceptance tests.

use std::collections::BTreeMap;

use nalgebra::Matrix3;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::characters::{character_closed_form, character_direct, fix_dimension};
use crate::error::Result;
use crate::groups::{
    haar_rule, integrate, integrate_rule, random_element, resolve_group, SymmetryGroup,
    DEFAULT_MAX_POLY_DEGREE,
};
use crate::projector::{
    extract_isotropic_moduli, isotropic_moduli_matrix, moduli_from_matrix, project,
    structure_report, IsotropicModuli, StructureReport,
};
use crate::spaces::{catalog_space, flat_of_digits, space_dim, TensorSpace, CATALOG_NAMES};
use crate::tensor::{numerical_rank, FlatTensor, Mat, TolerancePolicy};
use crate::voigt::{
    induced_matrix, mandel_forward, VoigtMap, EXTENDED_N_ORDER,
};

/// Space lookup with optional replacements, used for fault injection.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    overrides: BTreeMap<String, TensorSpace>,
}

impl Catalog {
    pub fn with_space(mut self, space: TensorSpace) -> Self {
        self.overrides.insert(space.name.clone(), space);
        self
    }

    pub fn space(&self, name: &str) -> Result<TensorSpace> {
        match self.overrides.get(name) {
            Some(s) => Ok(s.clone()),
            None => catalog_space(name),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub category: &'static str,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Row {
    fn new(category: &'static str, name: impl Into<String>, expected: impl ToString, actual: impl ToString, pass: bool) -> Self {
        Row {
            category,
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

pub const CATEGORIES: [&str; 7] = ["dims", "characters", "structures", "haar", "voigt", "moduli", "spot"];

/// `(space, group, dim)` as tabulated in the published examples.
pub const DIMENSION_TABLE: [(&str, &str, usize); 28] = [
    ("ela3", "d2", 9),
    ("ela3", "so2-e3", 5),
    ("ela3", "cubic", 3),
    ("ela3", "so3", 2),
    ("major3", "trivial", 45),
    ("major3", "d2", 15),
    ("major3", "so2-e3", 11),
    ("major3", "o2-e3", 8),
    ("major3", "cubic", 4),
    ("major3", "so3", 3),
    ("v1", "cubic", 3),
    ("v1bar", "cubic", 3),
    ("v2", "cubic", 11),
    ("v2bar", "cubic", 11),
    ("v2bar", "so2-e3", 31),
    ("v2bar", "o2-e3", 21),
    ("sym2", "o2", 1),
    ("sym2", "d4", 1),
    ("sym2", "d2", 2),
    ("sym2", "z2", 3),
    ("ela2", "d4", 3),
    ("high2", "d4", 10),
    ("high2", "d2", 20),
    ("high2", "z2", 36),
    ("ela3", "o2-e3", 5),
    ("sym2", "so2", 1),
    ("sym3", "so3", 1),
    ("ela3", "trivial", 21),
];

/// `χ(I)` for each catalog space, i.e. its dimension.
pub const IDENTITY_CHARACTERS: [(&str, usize); 10] = [
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

fn group_for(space: &TensorSpace, name: &str) -> Result<SymmetryGroup> {
    resolve_group(name, space.n, None, None)
}

pub fn dimension_rows(catalog: &Catalog) -> Vec<Row> {
    DIMENSION_TABLE
        .iter()
        .map(|&(s, g, expected)| {
            let name = format!("dim {s} × {g}");
            let actual = catalog
                .space(s)
                .and_then(|sp| fix_dimension(&sp, &group_for(&sp, g)?));
            match actual {
                Ok(d) => Row::new("dims", name, expected, d, d == expected),
                Err(e) => Row::new("dims", name, expected, format!("error: {e}"), false),
            }
        })
        .collect()
}

/// Direct versus closed-form characters on `samples` random elements of the
/// largest group acting on each space, plus `χ(I)`.
pub fn character_rows(catalog: &Catalog, samples: usize, seed: u64) -> Vec<Row> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &(name, dim) in &IDENTITY_CHARACTERS {
        let space = match catalog.space(name) {
            Ok(s) => s,
            Err(e) => {
                rows.push(Row::new("characters", format!("χ {name}"), "space", format!("error: {e}"), false));
                continue;
            }
        };
        let group = if space.n == 2 { "o2" } else { "so3" };
        let group = group_for(&space, group).expect("catalog group");
        let mut worst = 0.0f64;
        let mut failure = None;
        for _ in 0..samples {
            let q = random_element(&group, &mut rng);
            match (character_direct(&space, &q), character_closed_form(&space, &q)) {
                (Ok(d), Ok(c)) => worst = worst.max((d - c.value).abs()),
                (Err(e), _) | (_, Err(e)) => failure = Some(e.to_string()),
            }
        }
        rows.push(match failure {
            Some(e) => Row::new("characters", format!("χ {name} direct = closed form"), "< 1e-9", e, false),
            None => Row::new(
                "characters",
                format!("χ {name} direct = closed form"),
                "< 1e-9",
                format!("{worst:.2e}"),
                worst < 1e-9,
            ),
        });
        let id = crate::groups::GroupElement::identity(space.n);
        let direct = character_direct(&space, &id).unwrap_or(f64::NAN);
        let closed = character_closed_form(&space, &id).map(|c| c.value).unwrap_or(f64::NAN);
        let ok = (direct - dim as f64).abs() < 1e-9 && (closed - dim as f64).abs() < 1e-9;
        rows.push(Row::new(
            "characters",
            format!("χ {name}(I)"),
            dim,
            format!("{direct} / {closed}"),
            ok,
        ));
    }
    rows
}

/// A displayed matrix from the published examples. Cells are `0`, a label,
/// or a negated label; equal labels must carry equal coordinates.
#[derive(Clone, Debug)]
pub struct PublishedPattern {
    pub space: &'static str,
    pub group: &'static str,
    pub cells: Vec<Vec<String>>,
    /// A linear relation `Σ cᵢ labelᵢ = 0` among displayed labels.
    pub relation: Option<Vec<(f64, &'static str)>>,
    /// The constraint text the report is expected to emit.
    pub constraint: Option<&'static str>,
}

fn parse_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

fn block_diag(blocks: &[Vec<Vec<String>>]) -> Vec<Vec<String>> {
    let size: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec!["0".to_string(); size]; size];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[off + i][off + j] = c.clone();
            }
        }
        off += b.len();
    }
    out
}

fn symmetric_block(prefix: &str, n: usize, offset: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    format!("{prefix}{}{}", a + offset, b + offset)
                })
                .collect()
        })
        .collect()
}

fn pattern(space: &'static str, group: &'static str, cells: Vec<Vec<String>>) -> PublishedPattern {
    PublishedPattern {
        space,
        group,
        cells,
        relation: None,
        constraint: None,
    }
}

const ELA3_ORTHOTROPIC: &str = "
    C11 C12 C13 0 0 0
    C12 C22 C23 0 0 0
    C13 C23 C33 0 0 0
    0 0 0 C44 0 0
    0 0 0 0 C55 0
    0 0 0 0 0 C66";
const ELA3_TRANSVERSE: &str = "
    C11 C12 C13 0 0 0
    C12 C11 C13 0 0 0
    C13 C13 C33 0 0 0
    0 0 0 C44 0 0
    0 0 0 0 C44 0
    0 0 0 0 0 C66";
const ELA3_CUBIC: &str = "
    C11 C12 C12 0 0 0
    C12 C11 C12 0 0 0
    C12 C12 C11 0 0 0
    0 0 0 C44 0 0
    0 0 0 0 C44 0
    0 0 0 0 0 C44";
const MAJOR3_ORTHOTROPIC: &str = "
    C11 C12 C13 0 0 0 0 0 0
    C12 C22 C23 0 0 0 0 0 0
    C13 C23 C33 0 0 0 0 0 0
    0 0 0 C44 C45 0 0 0 0
    0 0 0 C45 C55 0 0 0 0
    0 0 0 0 0 C66 C67 0 0
    0 0 0 0 0 C67 C77 0 0
    0 0 0 0 0 0 0 C88 C89
    0 0 0 0 0 0 0 C89 C99";
const MAJOR3_SO2: &str = "
    C11 C12 C13 0 0 0 0 C18 -C18
    C12 C11 C13 0 0 0 0 C18 -C18
    C13 C13 C33 0 0 0 0 C38 -C38
    0 0 0 C44 C45 0 -C56 0 0
    0 0 0 C45 C55 C56 0 0 0
    0 0 0 0 C56 C44 C45 0 0
    0 0 0 -C56 0 C45 C55 0 0
    C18 C18 C38 0 0 0 0 C88 C89
    -C18 -C18 -C38 0 0 0 0 C89 C88";
const MAJOR3_O2: &str = "
    C11 C12 C13 0 0 0 0 0 0
    C12 C11 C13 0 0 0 0 0 0
    C13 C13 C33 0 0 0 0 0 0
    0 0 0 C44 C45 0 0 0 0
    0 0 0 C45 C55 0 0 0 0
    0 0 0 0 0 C44 C45 0 0
    0 0 0 0 0 C45 C55 0 0
    0 0 0 0 0 0 0 C88 C89
    0 0 0 0 0 0 0 C89 C88";
const MAJOR3_CUBIC: &str = "
    C11 C12 C12 0 0 0 0 0 0
    C12 C11 C12 0 0 0 0 0 0
    C12 C12 C11 0 0 0 0 0 0
    0 0 0 C44 C45 0 0 0 0
    0 0 0 C45 C44 0 0 0 0
    0 0 0 0 0 C44 C45 0 0
    0 0 0 0 0 C45 C44 0 0
    0 0 0 0 0 0 0 C44 C45
    0 0 0 0 0 0 0 C45 C44";
const ELA2_D4: &str = "
    C11 C12 0
    C12 C11 0
    0 0 C22";
const V2BAR_CUBIC_G1: &str = "
    e11 e12 e13 e12 e13
    e12 e22 e23 e24 e25
    e13 e23 e33 e25 e35
    e12 e24 e25 e22 e23
    e13 e25 e35 e23 e33";
const V2BAR_CUBIC_G2: &str = "
    g11 g12 g12
    g12 g11 g12
    g12 g12 g11";

pub fn published_patterns() -> Vec<PublishedPattern> {
    let with = |mut p: PublishedPattern, rel: Vec<(f64, &'static str)>, text: &'static str| {
        p.relation = Some(rel);
        p.constraint = Some(text);
        p
    };
    let g1 = parse_rows(V2BAR_CUBIC_G1);
    vec![
        pattern("ela3", "d2", parse_rows(ELA3_ORTHOTROPIC)),
        with(
            pattern("ela3", "so2-e3", parse_rows(ELA3_TRANSVERSE)),
            vec![(1.0, "C11"), (-1.0, "C12"), (-2.0, "C66")],
            "C11 = C12 + 2 C66",
        ),
        pattern("ela3", "cubic", parse_rows(ELA3_CUBIC)),
        with(
            pattern("ela3", "so3", parse_rows(ELA3_CUBIC)),
            vec![(1.0, "C11"), (-1.0, "C12"), (-2.0, "C44")],
            "C11 = C12 + 2 C44",
        ),
        pattern("major3", "d2", parse_rows(MAJOR3_ORTHOTROPIC)),
        with(
            pattern("major3", "so2-e3", parse_rows(MAJOR3_SO2)),
            vec![(1.0, "C11"), (-1.0, "C12"), (-1.0, "C88"), (-1.0, "C89")],
            "C11 = C12 + C88 + C89",
        ),
        with(
            pattern("major3", "o2-e3", parse_rows(MAJOR3_O2)),
            vec![(1.0, "C11"), (-1.0, "C12"), (-1.0, "C88"), (-1.0, "C89")],
            "C11 = C12 + C88 + C89",
        ),
        pattern("major3", "cubic", parse_rows(MAJOR3_CUBIC)),
        with(
            pattern("major3", "so3", parse_rows(MAJOR3_CUBIC)),
            vec![(1.0, "C11"), (-1.0, "C12"), (-1.0, "C44"), (-1.0, "C45")],
            "C11 = C12 + C44 + C45",
        ),
        pattern("ela2", "d4", parse_rows(ELA2_D4)),
        pattern(
            "v2bar",
            "cubic",
            block_diag(&[g1.clone(), g1.clone(), g1, parse_rows(V2BAR_CUBIC_G2)]),
        ),
        pattern("high2", "d4", block_diag(&[symmetric_block("A", 4, 1), symmetric_block("A", 4, 1)])),
        pattern("high2", "d2", block_diag(&[symmetric_block("A", 4, 1), symmetric_block("B", 4, 1)])),
        pattern("high2", "z2", symmetric_block("A", 8, 1)),
    ]
}

/// Coordinates of entry `(a, b)` on the report's basis.
fn coords(report: &StructureReport, a: usize, b: usize) -> Vec<f64> {
    report.basis_matrices.iter().map(|m| m[(a, b)]).collect()
}

fn dist(x: &[f64], y: &[f64], sign: f64) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - sign * b).abs()))
}

/// Checks a report against a displayed pattern: zeros match, entries with
/// the same label agree (up to the displayed sign), distinct labels differ,
/// and the labels span the fixed subspace.
pub fn check_pattern(report: &StructureReport, p: &PublishedPattern) -> std::result::Result<(), String> {
    let rows = p.cells.len();
    let cols = p.cells.first().map_or(0, Vec::len);
    if report.shape != (rows, cols) {
        return Err(format!("shape {:?}, expected {rows}x{cols}", report.shape));
    }
    let mut refs: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for a in 0..rows {
        for b in 0..cols {
            let cell = p.cells[a][b].as_str();
            let c = coords(report, a, b);
            let zero = c.iter().all(|v| v.abs() < 1e-9);
            if cell == "0" {
                if !zero {
                    return Err(format!("entry ({},{}) should be zero", a + 1, b + 1));
                }
                continue;
            }
            if zero {
                return Err(format!("entry ({},{}) should be {cell}, found zero", a + 1, b + 1));
            }
            let (sign, label) = match cell.strip_prefix('-') {
                Some(l) => (-1.0, l),
                None => (1.0, cell),
            };
            match refs.get(label) {
                Some(r) => {
                    if dist(&c, r, sign) > 1e-9 {
                        return Err(format!("entry ({},{}) differs from {cell}", a + 1, b + 1));
                    }
                }
                None => {
                    refs.insert(label, c.iter().map(|v| sign * v).collect());
                }
            }
        }
    }
    let labels: Vec<(&str, &Vec<f64>)> = refs.iter().map(|(k, v)| (*k, v)).collect();
    for (i, (la, ra)) in labels.iter().enumerate() {
        for (lb, rb) in &labels[i + 1..] {
            if dist(ra, rb, 1.0) < 1e-9 || dist(ra, rb, -1.0) < 1e-9 {
                return Err(format!("labels {la} and {lb} coincide"));
            }
        }
    }
    let m = Mat::from_fn(labels.len(), report.dim, |i, j| labels[i].1[j]);
    let rank = numerical_rank(&m, &TolerancePolicy::default());
    if rank != report.dim {
        return Err(format!("labels span {rank} of {} directions", report.dim));
    }
    if let Some(rel) = &p.relation {
        let mut sum = vec![0.0; report.dim];
        for (c, l) in rel {
            let r = refs.get(l).ok_or_else(|| format!("relation label {l} not displayed"))?;
            for (s, v) in sum.iter_mut().zip(r) {
                *s += c * v;
            }
        }
        let resid = sum.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if resid > 1e-9 {
            return Err(format!("relation residual {resid:.2e}"));
        }
    }
    if let Some(text) = p.constraint {
        if !report.constraints.iter().any(|c| c == text) {
            return Err(format!("constraint '{text}' not emitted (got {:?})", report.constraints));
        }
    }
    Ok(())
}

pub fn structure_rows(catalog: &Catalog) -> Vec<Row> {
    let tol = TolerancePolicy::default();
    published_patterns()
        .iter()
        .map(|p| {
            let name = format!("pattern {} × {}", p.space, p.group);
            let expected = p.constraint.unwrap_or("pattern");
            let report = catalog
                .space(p.space)
                .and_then(|s| structure_report(&s, &group_for(&s, p.group)?, &tol));
            match report {
                Ok(r) => match check_pattern(&r, p) {
                    Ok(()) => Row::new("structures", name, expected, "match", true),
                    Err(e) => Row::new("structures", name, expected, e, false),
                },
                Err(e) => Row::new("structures", name, expected, format!("error: {e}"), false),
            }
        })
        .collect()
}

/// A fixed degree-4 polynomial in the matrix entries.
fn test_poly(q: &Mat) -> f64 {
    let n = q.nrows();
    let a: f64 = (0..n).map(|i| (i as f64 + 1.0) * q[(i, (i + 1) % n)]).sum();
    let b = q[(0, 0)] - 0.5 * q[(n - 1, 0)];
    a * a * b * b + a * b * q[(0, n - 1)] - 0.3 * a + 0.7
}

pub fn haar_rows(seed: u64) -> Vec<Row> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (name, ambient) in [("so2", 2), ("o2", 2), ("so2-e3", 3), ("o2-e3", 3), ("so3", 3), ("cubic", 3), ("d4", 2)] {
        let g = resolve_group(name, ambient, None, None).expect("catalog group");
        let rule = haar_rule(&g, DEFAULT_MAX_POLY_DEGREE).expect("rule");
        let norm = (integrate_rule(&rule, |_| 1.0) - 1.0).abs();
        rows.push(Row::new("haar", format!("normalization {name}"), "< 1e-12", format!("{norm:.2e}"), norm < 1e-12));

        let base = integrate_rule(&rule, |q| test_poly(&q.matrix));
        let h = random_element(&g, &mut rng).matrix;
        let left = integrate_rule(&rule, |q| test_poly(&(&h * &q.matrix)));
        let right = integrate_rule(&rule, |q| test_poly(&(&q.matrix * &h)));
        let err = (left - base).abs().max((right - base).abs());
        rows.push(Row::new("haar", format!("translation invariance {name}"), "< 1e-9", format!("{err:.2e}"), err < 1e-9));

        let coarse = integrate(&g, |q| test_poly(&q.matrix), 6).expect("rule");
        let fine = integrate(&g, |q| test_poly(&q.matrix), 12).expect("rule");
        let err = (coarse - fine).abs();
        rows.push(Row::new("haar", format!("node doubling {name}"), "< 1e-10", format!("{err:.2e}"), err < 1e-10));
    }
    let so2 = resolve_group("so2", 2, None, None).expect("so2");
    let v = integrate(
        &so2,
        |q| {
            let (c, s) = (q.matrix[(0, 0)], q.matrix[(1, 0)]);
            3.0 * c * c - s * s
        },
        DEFAULT_MAX_POLY_DEGREE,
    )
    .expect("rule");
    rows.push(Row::new("haar", "∫ 3cos²θ − sin²θ over SO(2)", 1, v, (v - 1.0).abs() < 1e-12));
    rows
}

fn random_vec(rng: &mut StdRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn voigt_rows(seed: u64) -> Vec<Row> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for map in VoigtMap::catalog() {
        let x = random_vec(&mut rng, map.len());
        let t = map.inverse(&x).expect("inverse");
        let back = map.forward(&t).expect("forward");
        let t2 = map.inverse(&back).expect("inverse");
        let err = dist(&x, &back, 1.0).max(dist(&t, &t2, 1.0));
        rows.push(Row::new("voigt", format!("roundtrip {}", map.name), "< 1e-14", format!("{err:.2e}"), err < 1e-14));
    }

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let x = a + a.transpose();
        let v = mandel_forward(&x).expect("symmetric");
        let n: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        worst = worst.max((n - x.norm()).abs());
    }
    rows.push(Row::new("voigt", "Mandel isometry", "< 1e-12", format!("{worst:.2e}"), worst < 1e-12));

    // each Voigt slot of an Ela(3) tensor reads the component named by its
    // first index pattern, e.g. M44 = C3232, M23 = C3322
    let space = catalog_space("ela3").expect("ela3");
    let v3 = VoigtMap::voigt3();
    let mut ok = true;
    for flat in 0..space.flat_len() {
        let mut e = FlatTensor::zeros(3, 4);
        e.coeffs[flat] = 1.0;
        let c = space.symmetrize(&e).expect("shape");
        let m = induced_matrix(&v3, &v3, &c).expect("shape");
        for (a, sa) in v3.slots.iter().enumerate() {
            for (b, sb) in v3.slots.iter().enumerate() {
                let idx: Vec<usize> = sa[0].index.iter().chain(&sb[0].index).cloned().collect();
                ok &= (m[(a, b)] - c.get(&idx)).abs() < 1e-14;
            }
        }
    }
    let mut c = FlatTensor::zeros(3, 4);
    c.coeffs = random_vec(&mut rng, 81);
    let c = space.symmetrize(&c).expect("shape");
    let m = induced_matrix(&v3, &v3, &c).expect("shape");
    ok &= m[(3, 3)] == c.coeffs[flat_of_digits(3, "3232")] && m[(1, 2)] == c.coeffs[flat_of_digits(3, "3322")];
    rows.push(Row::new("voigt", "Voigt slot sourcing (M44 = C3232, M23 = C3322)", "all slots", if ok { "all slots" } else { "mismatch" }, ok));

    let n = VoigtMap::extended_n();
    let names = n.slot_names();
    let ok = names.iter().map(String::as_str).eq(EXTENDED_N_ORDER.iter().cloned());
    rows.push(Row::new("voigt", "18-slot ordering", EXTENDED_N_ORDER.join(" "), names.join(" "), ok));
    rows
}

pub fn moduli_rows(seed: u64) -> Vec<Row> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let report = catalog_space("major3")
        .and_then(|s| structure_report(&s, &group_for(&s, "so3")?, &TolerancePolicy::default()));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            rows.push(Row::new("moduli", "isotropic report", "ok", format!("error: {e}"), false));
            return rows;
        }
    };
    let values: BTreeMap<String, f64> = [("C12", 1.0), ("C44", 3.0), ("C45", 1.0)]
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    match extract_isotropic_moduli(&report, &values) {
        Ok(m) => {
            let ok = (m.lambda - 1.0).abs() < 1e-12 && (m.mu - 2.0).abs() < 1e-12 && (m.mu_c - 1.0).abs() < 1e-12;
            rows.push(Row::new(
                "moduli",
                "C12=1, C44=3, C45=1",
                "(1, 2, 1)",
                format!("({}, {}, {})", m.lambda, m.mu, m.mu_c),
                ok,
            ));
        }
        Err(e) => rows.push(Row::new("moduli", "C12=1, C44=3, C45=1", "(1, 2, 1)", format!("error: {e}"), false)),
    }
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = IsotropicModuli {
            lambda: rng.gen_range(-1.0..1.0),
            mu: rng.gen_range(-1.0..1.0),
            mu_c: rng.gen_range(-1.0..1.0),
        };
        let back = moduli_from_matrix(&isotropic_moduli_matrix(&m));
        worst = worst
            .max((back.lambda - m.lambda).abs())
            .max((back.mu - m.mu).abs())
            .max((back.mu_c - m.mu_c).abs());
    }
    rows.push(Row::new("moduli", "moduli ↔ matrix roundtrip", "< 1e-12", format!("{worst:.2e}"), worst < 1e-12));

    // the isotropic 9×9 matrix is itself an so3-invariant major3 tensor
    let m = IsotropicModuli { lambda: 0.4, mu: 1.3, mu_c: 0.2 };
    let coords = report.solve_coordinates(&BTreeMap::from([
        ("C12".to_string(), m.lambda),
        ("C44".to_string(), m.mu + m.mu_c),
        ("C45".to_string(), m.mu - m.mu_c),
    ]));
    let ok = match coords {
        Ok(c) => {
            let diff = report.matrix_at(&c) - isotropic_moduli_matrix(&m);
            diff.amax() < 1e-12
        }
        Err(_) => false,
    };
    rows.push(Row::new("moduli", "report matrix = moduli matrix", "< 1e-12", if ok { "match" } else { "mismatch" }, ok));
    rows
}

/// One displayed coefficient average: each listed component (with sign) of
/// the projected tensor equals the signed mean of the listed components of
/// the input.
#[derive(Clone, Debug)]
pub struct SpotFormula {
    pub name: &'static str,
    pub space: &'static str,
    pub terms: &'static [(f64, &'static str)],
}

pub const SPOT_FORMULAS: [SpotFormula; 14] = [
    SpotFormula { name: "η11", space: "v2bar", terms: &[(1.0, "111111"), (1.0, "222222"), (1.0, "333333")] },
    SpotFormula {
        name: "η22",
        space: "v2bar",
        terms: &[(1.0, "112112"), (1.0, "113113"), (1.0, "221221"), (1.0, "223223"), (1.0, "331331"), (1.0, "332332")],
    },
    SpotFormula { name: "η24", space: "v2bar", terms: &[(1.0, "112332"), (1.0, "113223"), (1.0, "221331")] },
    SpotFormula {
        name: "η33",
        space: "v2bar",
        terms: &[(1.0, "121121"), (1.0, "122122"), (1.0, "131131"), (1.0, "133133"), (1.0, "232232"), (1.0, "233233")],
    },
    SpotFormula { name: "η35", space: "v2bar", terms: &[(1.0, "121233"), (1.0, "122133"), (1.0, "131232")] },
    SpotFormula {
        name: "η12",
        space: "v2bar",
        terms: &[(1.0, "111221"), (1.0, "111331"), (1.0, "112222"), (1.0, "113333"), (1.0, "222332"), (1.0, "223333")],
    },
    SpotFormula { name: "γ11", space: "v2bar", terms: &[(1.0, "123123"), (1.0, "132132"), (1.0, "231231")] },
    SpotFormula {
        name: "η13",
        space: "v2bar",
        terms: &[(1.0, "111122"), (1.0, "111133"), (1.0, "121222"), (1.0, "131333"), (1.0, "222233"), (1.0, "232333")],
    },
    SpotFormula { name: "γ12", space: "v2bar", terms: &[(1.0, "123132"), (1.0, "123231"), (1.0, "132231")] },
    SpotFormula {
        name: "η23",
        space: "v2bar",
        terms: &[(1.0, "112121"), (1.0, "113131"), (1.0, "122221"), (1.0, "133331"), (1.0, "223232"), (1.0, "233332")],
    },
    SpotFormula {
        name: "η25",
        space: "v2bar",
        terms: &[(1.0, "112233"), (1.0, "113232"), (1.0, "121332"), (1.0, "122331"), (1.0, "131223"), (1.0, "133221")],
    },
    SpotFormula {
        name: "ζ1",
        space: "v1bar",
        terms: &[(-1.0, "11213"), (1.0, "11312"), (1.0, "22123"), (-1.0, "22312"), (-1.0, "33123"), (1.0, "33213")],
    },
    SpotFormula {
        name: "ζ2",
        space: "v1bar",
        terms: &[(1.0, "12311"), (-1.0, "12322"), (-1.0, "13211"), (1.0, "13233"), (1.0, "23122"), (-1.0, "23133")],
    },
    SpotFormula {
        name: "ζ3",
        space: "v1bar",
        terms: &[(1.0, "12113"), (-1.0, "12223"), (-1.0, "13112"), (1.0, "13323"), (1.0, "23212"), (-1.0, "23313")],
    },
];

/// Largest deviation of a formula on a random tensor of its space,
/// projected onto the cubic fixed subspace.
pub fn spot_residual(catalog: &Catalog, f: &SpotFormula, seed: u64) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let space = catalog.space(f.space)?;
    let mut t = FlatTensor::zeros(space.n, space.k);
    t.coeffs = random_vec(&mut rng, space.flat_len());
    let t = space.symmetrize(&t)?;
    let p = project(&space, &group_for(&space, "cubic")?, &t)?;
    let mean = f
        .terms
        .iter()
        .map(|(s, d)| s * t.coeffs[flat_of_digits(3, d)])
        .sum::<f64>()
        / f.terms.len() as f64;
    Ok(f.terms
        .iter()
        .map(|(s, d)| (p.coeffs[flat_of_digits(3, d)] - s * mean).abs())
        .fold(0.0, f64::max))
}

pub fn spot_rows(catalog: &Catalog, seed: u64) -> Vec<Row> {
    SPOT_FORMULAS
        .iter()
        .map(|f| {
            let name = format!("{} average ({})", f.name, f.space);
            match spot_residual(catalog, f, seed) {
                Ok(r) => Row::new("spot", name, "< 1e-9", format!("{r:.2e}"), r < 1e-9),
                Err(e) => Row::new("spot", name, "< 1e-9", format!("error: {e}"), false),
            }
        })
        .collect()
}

/// Runs the selected categories (all when `only` is empty).
pub fn run(catalog: &Catalog, only: &[String]) -> Vec<Row> {
    let want = |c: &str| only.is_empty() || only.iter().any(|o| o.eq_ignore_ascii_case(c));
    let seed = 20_240_601;
    let mut rows = Vec::new();
    if want("dims") {
        rows.extend(dimension_rows(catalog));
    }
    if want("characters") {
        rows.extend(character_rows(catalog, 200, seed));
    }
    if want("structures") {
        rows.extend(structure_rows(catalog));
    }
    if want("haar") {
        rows.extend(haar_rows(seed));
    }
    if want("voigt") {
        rows.extend(voigt_rows(seed));
    }
    if want("moduli") {
        rows.extend(moduli_rows(seed));
    }
    if want("spot") {
        rows.extend(spot_rows(catalog, seed));
    }
    rows
}

/// The catalog spaces, their dimensions and `χ(I)` agree.
pub fn catalog_dims_consistent() -> bool {
    CATALOG_NAMES.iter().all(|n| {
        let s = catalog_space(n).expect("catalog");
        IDENTITY_CHARACTERS
            .iter()
            .find(|(m, _)| m == n)
            .is_some_and(|(_, d)| *d == space_dim(&s))
    })
}
