//! Flattened dense tensors and operators on `⊗ᵏℝⁿ`.
//!
//! A tensor of order `k` over `ℝⁿ` is stored as `nᵏ` coefficients in
//! row-major order: the multi-index `(i₁, …, i_k)` lives at
//! `Σ i_m · n^(k−m)`. Every operator and Voigt table in the crate is
//! defined relative to this one convention.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

/// Orders supported by the catalog (plus order 1 and 3 for Voigt slot maps).
pub const SUPPORTED_ORDERS: [usize; 4] = [2, 4, 5, 6];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub zero_tol: f64,
    pub equality_tol: f64,
    pub snap_denominator_bound: i64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            zero_tol: 1e-9,
            equality_tol: 1e-9,
            snap_denominator_bound: 64,
        }
    }
}

impl TolerancePolicy {
    pub fn with_zero_tol(zero_tol: f64) -> Result<Self> {
        if !(zero_tol > 0.0 && zero_tol <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "zero_tol must lie in (0, 1e-6], got {zero_tol}"
            )));
        }
        Ok(TolerancePolicy {
            zero_tol,
            ..Default::default()
        })
    }

    /// Defaults, with `zero_tol` taken from `SYMTENSOR_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("SYMTENSOR_TOL") {
            Ok(raw) => {
                let v: f64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("SYMTENSOR_TOL is not a number: '{raw}'"))
                })?;
                Self::with_zero_tol(v)
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

pub fn flat_len(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

pub fn flat_index(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

pub fn multi_index(n: usize, k: usize, mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; k];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatTensor {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<f64>,
}

impl FlatTensor {
    pub fn new(n: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != flat_len(n, k) {
            return Err(Error::Shape(format!(
                "order-{k} tensor over R^{n} needs {} coefficients, got {}",
                flat_len(n, k),
                coeffs.len()
            )));
        }
        if let Some(pos) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(FlatTensor { n, k, coeffs })
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        FlatTensor {
            n,
            k,
            coeffs: vec![0.0; flat_len(n, k)],
        }
    }

    /// The elementary tensor `e_{i₁} ⊗ … ⊗ e_{i_k}` (0-based indices).
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        let mut t = Self::zeros(n, idx.len());
        t.coeffs[flat_index(n, idx)] = 1.0;
        t
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.coeffs[flat_index(self.n, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let i = flat_index(self.n, idx);
        self.coeffs[i] = v;
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &FlatTensor) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn as_column(&self) -> Mat {
        Mat::from_column_slice(self.coeffs.len(), 1, &self.coeffs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatOperator {
    pub n: usize,
    pub k: usize,
    pub matrix: Mat,
}

impl FlatOperator {
    pub fn new(n: usize, k: usize, matrix: Mat) -> Result<Self> {
        let len = flat_len(n, k);
        if matrix.nrows() != len || matrix.ncols() != len {
            return Err(Error::Shape(format!(
                "operator on order-{k} tensors over R^{n} must be {len}x{len}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(FlatOperator { n, k, matrix })
    }

    pub fn identity(n: usize, k: usize) -> Self {
        let len = flat_len(n, k);
        FlatOperator {
            n,
            k,
            matrix: Mat::identity(len, len),
        }
    }

    pub fn apply(&self, t: &FlatTensor) -> Result<FlatTensor> {
        if t.n != self.n || t.k != self.k {
            return Err(Error::Shape(format!(
                "operator acts on (n={}, k={}), tensor is (n={}, k={})",
                self.n, self.k, t.n, t.k
            )));
        }
        let out = &self.matrix * t.as_column();
        Ok(FlatTensor {
            n: self.n,
            k: self.k,
            coeffs: out.as_slice().to_vec(),
        })
    }

    /// `‖A² − A‖∞`, the largest entrywise deviation from idempotence.
    pub fn idempotence_defect(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        max_abs(&(sq - &self.matrix))
    }
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `‖QᵀQ − I‖∞`.
pub fn orthogonality_defect(q: &Mat) -> f64 {
    if q.nrows() != q.ncols() {
        return f64::INFINITY;
    }
    let qtq = q.transpose() * q;
    max_abs(&(qtq - Mat::identity(q.nrows(), q.ncols())))
}

pub fn check_orthogonal(q: &Mat, tol: f64) -> Result<()> {
    let defect = orthogonality_defect(q);
    if defect.is_nan() || defect >= tol {
        return Err(Error::NotOrthogonal { defect });
    }
    Ok(())
}

/// The matrix of `X_{i…} ↦ Q_{ia} … X_{a…}` on flattened order-`k` tensors.
pub fn kron_power(q: &Mat, k: usize) -> Result<FlatOperator> {
    if !(1..=6).contains(&k) {
        return Err(Error::InvalidArgument(format!("unsupported order {k}")));
    }
    check_orthogonal(q, 1e-12)?;
    let n = q.nrows();
    let len = flat_len(n, k);
    let mut m = Mat::zeros(len, len);
    for row in 0..len {
        let ri = multi_index(n, k, row);
        for col in 0..len {
            let ci = multi_index(n, k, col);
            let mut v = 1.0;
            for (a, b) in ri.iter().zip(&ci) {
                v *= q[(*a, *b)];
                if v == 0.0 {
                    break;
                }
            }
            m[(row, col)] = v;
        }
    }
    Ok(FlatOperator { n, k, matrix: m })
}

/// Computes `(⊗ᵏQ) · M` one tensor mode at a time, without forming the
/// `nᵏ × nᵏ` Kronecker power. Costs `k·n·nᵏ` per column instead of `n²ᵏ`.
pub fn apply_kron_power(q: &Mat, k: usize, m: &Mat) -> Mat {
    let n = q.nrows();
    let len = flat_len(n, k);
    assert_eq!(m.nrows(), len, "apply_kron_power: row count mismatch");
    let qv: Vec<f64> = (0..n * n).map(|i| q[(i / n, i % n)]).collect();
    let mut out = m.clone();
    let mut scratch = vec![0.0; n];
    let data = out.as_mut_slice();
    for col in data.chunks_mut(len) {
        for mode in 0..k {
            let stride = n.pow((k - 1 - mode) as u32);
            let block = n * stride;
            for base in (0..len).step_by(block) {
                for inner in 0..stride {
                    for (b, s) in scratch.iter_mut().enumerate() {
                        *s = col[base + b * stride + inner];
                    }
                    for (a, qrow) in qv.chunks_exact(n).enumerate() {
                        let acc: f64 = qrow.iter().zip(&scratch).map(|(x, s)| x * s).sum();
                        col[base + a * stride + inner] = acc;
                    }
                }
            }
        }
    }
    out
}

pub fn operator_trace(a: &FlatOperator) -> f64 {
    a.matrix.trace()
}

/// Orthonormal basis (as columns) of the column space of `m`. The rank is
/// the number of singular values above `zero_tol · σ_max`.
///
/// A column-pivoted QR first isolates a candidate subspace so the SVD runs
/// on an `r × N` matrix instead of `N × N`.
pub fn orthonormal_range(m: &Mat, tol: &TolerancePolicy) -> Mat {
    let nrows = m.nrows();
    if m.ncols() == 0 || nrows == 0 || max_abs(m) == 0.0 {
        return Mat::zeros(nrows, 0);
    }
    let qr = m.clone().col_piv_qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].abs()).collect();
    let top = diag.iter().cloned().fold(0.0, f64::max);
    // Loose cut: the SVD below makes the real decision.
    let candidates = diag.iter().filter(|d| **d > top * tol.zero_tol * 1e-3).count();
    let q = qr.q();
    let qc = q.columns(0, candidates).into_owned();
    let reduced = qc.transpose() * m;
    let svd = reduced.svd(true, false);
    let u = svd.u.expect("svd computed with u");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol.zero_tol * smax)
        .collect();
    let mut basis = Mat::zeros(nrows, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &(&qc * u.column(i)));
    }
    basis
}

pub fn numerical_rank(m: &Mat, tol: &TolerancePolicy) -> usize {
    orthonormal_range(m, tol).ncols()
}

/// Orthonormal basis of the image of a projector candidate.
pub fn image_basis(a: &FlatOperator, tol: &TolerancePolicy) -> Result<Vec<FlatTensor>> {
    let defect = a.idempotence_defect();
    if defect.is_nan() || defect >= 1e-6 {
        return Err(Error::NotIdempotent { defect });
    }
    let basis = orthonormal_range(&a.matrix, tol);
    Ok(basis
        .column_iter()
        .map(|c| FlatTensor {
            n: a.n,
            k: a.k,
            coeffs: c.iter().cloned().collect(),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Radical {
    One,
    Sqrt2,
    Sqrt3,
}

impl Radical {
    pub fn value(self) -> f64 {
        match self {
            Radical::One => 1.0,
            Radical::Sqrt2 => std::f64::consts::SQRT_2,
            Radical::Sqrt3 => 3f64.sqrt(),
        }
    }
}

/// A number recognised as `p/q`, `p/q·√2` or `p/q·√3`, or kept verbatim.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapped {
    pub value: f64,
    pub num: i64,
    pub den: i64,
    pub radical: Radical,
    pub exact: bool,
}

impl Snapped {
    pub fn is_zero(&self) -> bool {
        self.exact && self.num == 0
    }

    /// Snapped value recomputed from `num/den·radical`, or the raw value.
    pub fn snapped_value(&self) -> f64 {
        if self.exact {
            self.num as f64 / self.den as f64 * self.radical.value()
        } else {
            self.value
        }
    }
}

impl fmt::Display for Snapped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exact {
            return write!(f, "{}", self.value);
        }
        let sign = if self.num < 0 { "-" } else { "" };
        let p = self.num.abs();
        let root = match self.radical {
            Radical::One => "",
            Radical::Sqrt2 => "√2",
            Radical::Sqrt3 => "√3",
        };
        let head = if root.is_empty() {
            p.to_string()
        } else if p == 1 {
            root.to_string()
        } else {
            format!("{p}{root}")
        };
        if self.den == 1 {
            write!(f, "{sign}{head}")
        } else {
            write!(f, "{sign}{head}/{}", self.den)
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn rational_snap(x: f64, tol: &TolerancePolicy) -> Snapped {
    let unsnapped = Snapped {
        value: x,
        num: 0,
        den: 1,
        radical: Radical::One,
        exact: false,
    };
    if !x.is_finite() || x.abs() >= 1e6 {
        return unsnapped;
    }
    for radical in [Radical::One, Radical::Sqrt2, Radical::Sqrt3] {
        let r = radical.value();
        for den in 1..=tol.snap_denominator_bound.max(1) {
            let num = (x / r * den as f64).round();
            let approx = num / den as f64 * r;
            if (approx - x).abs() < tol.equality_tol {
                let num = num as i64;
                let g = gcd(num, den).max(1);
                let (num, den) = (num / g, den / g);
                let radical = if num == 0 { Radical::One } else { radical };
                return Snapped {
                    value: x,
                    num,
                    den,
                    radical,
                    exact: true,
                };
            }
        }
    }
    unsnapped
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_roundtrip() {
        for flat in 0..81 {
            let idx = multi_index(3, 4, flat);
            assert_eq!(flat_index(3, &idx), flat);
        }
        assert_eq!(flat_index(3, &[1, 2]), 5);
    }

    #[test]
    fn snap_display() {
        let tol = TolerancePolicy::default();
        assert_eq!(rational_snap(-0.5, &tol).to_string(), "-1/2");
        assert_eq!(rational_snap(2.0, &tol).to_string(), "2");
        assert_eq!(rational_snap(-std::f64::consts::SQRT_2, &tol).to_string(), "-√2");
        assert_eq!(rational_snap(3f64.sqrt() * 1.5, &tol).to_string(), "3√3/2");
        assert_eq!(rational_snap(0.0, &tol).to_string(), "0");
        assert!(!rational_snap(std::f64::consts::PI, &tol).exact);
    }

    #[test]
    fn mode_product_matches_dense_kron() {
        let q = Mat::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let dense = kron_power(&q, 3).unwrap();
        let m = Mat::from_fn(8, 3, |i, j| (i * 3 + j) as f64 * 0.1 - 0.7);
        let fast = apply_kron_power(&q, 3, &m);
        assert!(max_abs(&(fast - &dense.matrix * &m)) < 1e-14);
    }
}
