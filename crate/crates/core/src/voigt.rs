//! Vectorization isomorphisms and the induced matrix form of constitutive
//! tensors.
//!
//! A `VoigtMap` sends order-`order` tensors over `ℝⁿ` to `ℝ^len`. Each slot
//! is a list of terms `(multi-index, forward scale, inverse scale)`:
//! forward `x_α = Σ fwd · T_I`, inverse `T_I += inv · x_α`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{flat_index, flat_len, FlatTensor, Mat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotTerm {
    /// 0-based multi-index.
    pub index: Vec<usize>,
    pub forward: f64,
    pub inverse: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoigtMap {
    pub name: String,
    pub n: usize,
    pub order: usize,
    pub slots: Vec<Vec<SlotTerm>>,
}

fn idx(digits: &str) -> Vec<usize> {
    digits
        .chars()
        .map(|c| c.to_digit(10).expect("slot digit") as usize - 1)
        .collect()
}

fn unit(digits: &str) -> Vec<SlotTerm> {
    vec![SlotTerm {
        index: idx(digits),
        forward: 1.0,
        inverse: 1.0,
    }]
}

fn pair(a: &str, b: &str, forward: f64, inverse: f64) -> Vec<SlotTerm> {
    vec![
        SlotTerm {
            index: idx(a),
            forward,
            inverse,
        },
        SlotTerm {
            index: idx(b),
            forward,
            inverse,
        },
    ]
}

/// Slot order of the 18-dimensional map: `(i, j, k)` for `ς_ijk`.
pub const EXTENDED_N_ORDER: [&str; 18] = [
    "111", "221", "122", "331", "133", "222", "112", "121", "332", "233", "333", "113", "131",
    "223", "232", "123", "132", "231",
];

/// Slot order of the 8-dimensional `⊗³ℝ²` map: two parity blocks.
pub const HIGH2_ORDER: [&str; 8] = ["111", "122", "212", "221", "222", "211", "121", "112"];

impl VoigtMap {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Voigt 𝕸 on Sym(3): `(X₁₁, X₂₂, X₃₃, 2X₂₃, 2X₁₃, 2X₁₂)`.
    pub fn voigt3() -> Self {
        let mut slots = vec![unit("11"), unit("22"), unit("33")];
        for (a, b) in [("23", "32"), ("13", "31"), ("12", "21")] {
            slots.push(pair(a, b, 1.0, 0.5));
        }
        VoigtMap {
            name: "voigt3".into(),
            n: 3,
            order: 2,
            slots,
        }
    }

    /// Mandel: `(X₁₁, X₂₂, X₃₃, √2X₂₃, √2X₁₃, √2X₁₂)`.
    pub fn mandel3() -> Self {
        let mut slots = vec![unit("11"), unit("22"), unit("33")];
        for (a, b) in [("23", "32"), ("13", "31"), ("12", "21")] {
            slots.push(pair(a, b, FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        }
        VoigtMap {
            name: "mandel3".into(),
            n: 3,
            order: 2,
            slots,
        }
    }

    /// Planar Voigt: `(X₁₁, X₂₂, 2X₁₂)`.
    pub fn voigt2() -> Self {
        VoigtMap {
            name: "voigt2".into(),
            n: 2,
            order: 2,
            slots: vec![unit("11"), unit("22"), pair("12", "21", 1.0, 0.5)],
        }
    }

    /// Planar Mandel: `(X₁₁, X₂₂, √2X₁₂)`.
    pub fn mandel2() -> Self {
        VoigtMap {
            name: "mandel2".into(),
            n: 2,
            order: 2,
            slots: vec![
                unit("11"),
                unit("22"),
                pair("12", "21", FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            ],
        }
    }

    /// Non-symmetric 3×3 ordering `(11, 22, 33, 23, 32, 13, 31, 12, 21)`.
    pub fn nine_slot() -> Self {
        VoigtMap {
            name: "nine_slot".into(),
            n: 3,
            order: 2,
            slots: ["11", "22", "33", "23", "32", "13", "31", "12", "21"]
                .iter()
                .map(|d| unit(d))
                .collect(),
        }
    }

    /// 𝕹 on Sym(3)⊗ℝ³: coefficients in the orthonormal basis
    /// `ς_ijk = c (e_i⊗e_j + e_j⊗e_i)⊗e_k`, `c = 1/2` if `i = j`, `1/√2`
    /// otherwise.
    pub fn extended_n() -> Self {
        Self::extended_with_layout("extended_n", |i, j, k| (format!("{i}{j}{k}"), format!("{j}{i}{k}")))
    }

    /// The same table on ℝ³⊗Sym(3) (free index first): slot `(i, j, k)`
    /// reads components `T_{k i j}`.
    pub fn extended_n_left() -> Self {
        Self::extended_with_layout("extended_n_left", |i, j, k| (format!("{k}{i}{j}"), format!("{k}{j}{i}")))
    }

    fn extended_with_layout(name: &str, layout: impl Fn(char, char, char) -> (String, String)) -> Self {
        let slots = EXTENDED_N_ORDER
            .iter()
            .map(|s| {
                let c: Vec<char> = s.chars().collect();
                let (a, b) = layout(c[0], c[1], c[2]);
                if c[0] == c[1] {
                    unit(&a)
                } else {
                    pair(&a, &b, FRAC_1_SQRT_2, FRAC_1_SQRT_2)
                }
            })
            .collect();
        VoigtMap {
            name: name.into(),
            n: 3,
            order: 3,
            slots,
        }
    }

    /// Unit-scale map of `⊗³ℝ²` in the order of [`HIGH2_ORDER`].
    pub fn high2_slots() -> Self {
        VoigtMap {
            name: "high2_slots".into(),
            n: 2,
            order: 3,
            slots: HIGH2_ORDER.iter().map(|d| unit(d)).collect(),
        }
    }

    /// Vectors of ℝⁿ as themselves.
    pub fn vector(n: usize) -> Self {
        VoigtMap {
            name: format!("vector{n}"),
            n,
            order: 1,
            slots: (1..=n).map(|i| unit(&i.to_string())).collect(),
        }
    }

    pub fn catalog() -> Vec<VoigtMap> {
        vec![
            Self::voigt3(),
            Self::mandel3(),
            Self::voigt2(),
            Self::mandel2(),
            Self::nine_slot(),
            Self::extended_n(),
            Self::extended_n_left(),
            Self::high2_slots(),
            Self::vector(2),
            Self::vector(3),
        ]
    }

    fn check_len(&self, got: usize, what: &str) -> Result<()> {
        let want = if what == "tensor" {
            flat_len(self.n, self.order)
        } else {
            self.len()
        };
        if got != want {
            return Err(Error::Shape(format!(
                "{}: {what} needs {want} coefficients, got {got}",
                self.name
            )));
        }
        Ok(())
    }

    pub fn forward(&self, t: &[f64]) -> Result<Vec<f64>> {
        self.check_len(t.len(), "tensor")?;
        Ok(self
            .slots
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|s| s.forward * t[flat_index(self.n, &s.index)])
                    .sum()
            })
            .collect())
    }

    pub fn inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len(), "vector")?;
        let mut t = vec![0.0; flat_len(self.n, self.order)];
        for (terms, v) in self.slots.iter().zip(x) {
            for s in terms {
                t[flat_index(self.n, &s.index)] += s.inverse * v;
            }
        }
        Ok(t)
    }

    /// Human-readable 1-based slot names such as "23" or "123".
    pub fn slot_names(&self) -> Vec<String> {
        self.slots
            .iter()
            .map(|terms| terms[0].index.iter().map(|i| (i + 1).to_string()).collect())
            .collect()
    }
}

/// `M_{αβ} = Σ T_{IJ} (row⁻¹e_α)_I (col⁻¹e_β)_J`.
pub fn induced_matrix(row: &VoigtMap, col: &VoigtMap, t: &FlatTensor) -> Result<Mat> {
    if row.n != t.n || col.n != t.n || row.order + col.order != t.k {
        return Err(Error::Shape(format!(
            "maps {} × {} expect order {} over R^{}, tensor is order {} over R^{}",
            row.name,
            col.name,
            row.order + col.order,
            row.n,
            t.k,
            t.n
        )));
    }
    let mut m = Mat::zeros(row.len(), col.len());
    for (a, rterms) in row.slots.iter().enumerate() {
        for (b, cterms) in col.slots.iter().enumerate() {
            let mut acc = 0.0;
            for r in rterms {
                for c in cterms {
                    let mut full = r.index.clone();
                    full.extend_from_slice(&c.index);
                    acc += r.inverse * c.inverse * t.get(&full);
                }
            }
            m[(a, b)] = acc;
        }
    }
    Ok(m)
}

/// Inverse of [`induced_matrix`]: the tensor with matrix `m`, assuming it
/// lies in the image of the two maps.
pub fn tensor_from_matrix(row: &VoigtMap, col: &VoigtMap, m: &Mat) -> Result<FlatTensor> {
    if m.nrows() != row.len() || m.ncols() != col.len() {
        return Err(Error::Shape(format!(
            "matrix is {}x{}, maps need {}x{}",
            m.nrows(),
            m.ncols(),
            row.len(),
            col.len()
        )));
    }
    let n = row.n;
    let mut t = FlatTensor::zeros(n, row.order + col.order);
    for (a, rterms) in row.slots.iter().enumerate() {
        for (b, cterms) in col.slots.iter().enumerate() {
            for r in rterms {
                for c in cterms {
                    let mut full = r.index.clone();
                    full.extend_from_slice(&c.index);
                    let i = flat_index(n, &full);
                    t.coeffs[i] += r.forward * c.forward * m[(a, b)];
                }
            }
        }
    }
    Ok(t)
}

fn symmetry_defect(x: &Matrix3<f64>) -> f64 {
    (x - x.transpose()).abs().max()
}

fn check_symmetric(x: &Matrix3<f64>) -> Result<()> {
    let d = symmetry_defect(x);
    if d > 1e-12 * x.abs().max().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symmetric (defect {d:.3e})"
        )));
    }
    Ok(())
}

fn row_major(x: &Matrix3<f64>) -> Vec<f64> {
    (0..3).flat_map(|i| (0..3).map(move |j| x[(i, j)])).collect()
}

fn from_row_major(v: &[f64]) -> Matrix3<f64> {
    Matrix3::from_row_slice(v)
}

fn to6(v: Vec<f64>) -> [f64; 6] {
    v.try_into().expect("six slots")
}

pub fn voigt_forward(x: &Matrix3<f64>) -> Result<[f64; 6]> {
    check_symmetric(x)?;
    Ok(to6(VoigtMap::voigt3().forward(&row_major(x))?))
}

pub fn voigt_inverse(v: &[f64; 6]) -> Matrix3<f64> {
    from_row_major(&VoigtMap::voigt3().inverse(v).expect("six slots"))
}

pub fn mandel_forward(x: &Matrix3<f64>) -> Result<[f64; 6]> {
    check_symmetric(x)?;
    Ok(to6(VoigtMap::mandel3().forward(&row_major(x))?))
}

pub fn mandel_inverse(v: &[f64; 6]) -> Matrix3<f64> {
    from_row_major(&VoigtMap::mandel3().inverse(v).expect("six slots"))
}

pub fn nine_slot_forward(x: &Matrix3<f64>) -> [f64; 9] {
    VoigtMap::nine_slot()
        .forward(&row_major(x))
        .expect("nine slots")
        .try_into()
        .expect("nine slots")
}

pub fn nine_slot_inverse(v: &[f64; 9]) -> Matrix3<f64> {
    from_row_major(&VoigtMap::nine_slot().inverse(v).expect("nine slots"))
}

/// Coefficients of `T ∈ Sym(3)⊗ℝ³` (flat, symmetric in its first two
/// indices) in the ς basis.
pub fn extended_n_forward(t: &[f64; 27]) -> Result<[f64; 18]> {
    let mut defect: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                defect = defect.max((t[9 * i + 3 * j + k] - t[9 * j + 3 * i + k]).abs());
            }
        }
    }
    let scale = t.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if defect > 1e-12 * scale {
        return Err(Error::InvalidArgument(format!(
            "tensor is not symmetric in its first two indices (defect {defect:.3e})"
        )));
    }
    Ok(VoigtMap::extended_n()
        .forward(t)?
        .try_into()
        .expect("eighteen slots"))
}

pub fn extended_n_inverse(x: &[f64; 18]) -> [f64; 27] {
    VoigtMap::extended_n()
        .inverse(x)
        .expect("eighteen slots")
        .try_into()
        .expect("27 components")
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `(axl A)_k = −½ ε_kij A_ij` for skew `A`.
pub fn axl(a: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let d = (a + a.transpose()).abs().max();
    if d > 1e-12 * a.abs().max().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not skew-symmetric (defect {d:.3e})"
        )));
    }
    let mut v = Vector3::zeros();
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                v[k] -= 0.5 * levi_civita(k, i, j) * a[(i, j)];
            }
        }
    }
    Ok(v)
}

/// `(anti a)_ij = −ε_ijk a_k`.
pub fn anti(a: &Vector3<f64>) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[(i, j)] -= levi_civita(i, j, k) * a[k];
            }
        }
    }
    m
}

/// How a catalog space is rendered as a matrix.
#[derive(Clone, Debug)]
pub struct SpaceLayout {
    pub rows: VoigtMap,
    pub cols: VoigtMap,
    pub prefix: &'static str,
    /// Major symmetry: the rendered matrix is symmetric.
    pub symmetric: bool,
}

pub fn layout_for(space_name: &str) -> Option<SpaceLayout> {
    let (rows, cols, prefix, symmetric) = match space_name {
        "sym2" => (VoigtMap::vector(2), VoigtMap::vector(2), "L", true),
        "sym3" => (VoigtMap::vector(3), VoigtMap::vector(3), "C", true),
        "ela2" => (VoigtMap::voigt2(), VoigtMap::voigt2(), "C", true),
        "ela3" => (VoigtMap::voigt3(), VoigtMap::voigt3(), "C", true),
        "major3" => (VoigtMap::nine_slot(), VoigtMap::nine_slot(), "C", true),
        "v1" => (VoigtMap::extended_n_left(), VoigtMap::voigt3(), "H", false),
        "v1bar" => (VoigtMap::extended_n(), VoigtMap::voigt3(), "H", false),
        "v2" => (VoigtMap::extended_n_left(), VoigtMap::extended_n_left(), "G", true),
        "v2bar" => (VoigtMap::extended_n(), VoigtMap::extended_n(), "G", true),
        "high2" => (VoigtMap::high2_slots(), VoigtMap::high2_slots(), "L", true),
        _ => return None,
    };
    Some(SpaceLayout {
        rows,
        cols,
        prefix,
        symmetric,
    })
}
