//! Characters `χ(Q) = tr(⊗ᵏQ · Π)` and the trace formula
//! `dim Fix = ∫ χ dμ`.

use crate::error::{Error, Result};
use crate::groups::{integrate, GroupElement, SymmetryGroup};
use crate::spaces::{ClosedForm, TensorSpace};
use crate::tensor::{flat_len, multi_index, Mat};

/// `tr Qᵐ` as a polynomial in `t = tr Q` (lowest degree first), from
/// Cayley–Hamilton. In 3D only proper rotations are admitted.
pub fn trace_power_poly(n: usize, m: usize, det_sign: i32) -> Result<Vec<f64>> {
    let s = match det_sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::InvalidArgument(format!("det sign {det_sign}"))),
    };
    match (n, m) {
        (_, 1) => Ok(vec![0.0, 1.0]),
        (3, _) if det_sign != 1 => Err(Error::InvalidArgument(
            "3D trace reduction assumes det Q = +1".into(),
        )),
        (3, 2) => Ok(vec![0.0, -2.0, 1.0]),
        (3, 3) => Ok(vec![3.0, 0.0, -3.0, 1.0]),
        (3, 4) => Ok(vec![0.0, 4.0, 2.0, -4.0, 1.0]),
        (2, 2) => Ok(vec![-2.0 * s, 0.0, 1.0]),
        (2, 3) => Ok(vec![0.0, -3.0 * s, 0.0, 1.0]),
        (2, 4) => Ok(vec![2.0, 0.0, -4.0 * s, 0.0, 1.0]),
        _ => Err(Error::InvalidArgument(format!(
            "trace power m={m} in dimension n={n} is outside m ∈ {{2,3,4}}, n ∈ {{2,3}}"
        ))),
    }
}

pub fn eval_poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

pub fn trace_power_reduce(n: usize, m: usize, t: f64, det_sign: i32) -> Result<f64> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!("power m={m} outside {{2,3,4}}")));
    }
    Ok(eval_poly(&trace_power_poly(n, m, det_sign)?, t))
}

fn check_ambient(space: &TensorSpace, q: &Mat) -> Result<()> {
    if q.nrows() != space.n || q.ncols() != space.n {
        return Err(Error::Shape(format!(
            "space '{}' lives in R^{}, element is {}x{}",
            space.name,
            space.n,
            q.nrows(),
            q.ncols()
        )));
    }
    Ok(())
}

/// Direct contraction `Σ_σ Σ_J Π_m Q[j_σ(m), j_m] / |S|`, i.e. the trace
/// of `⊗ᵏQ · Π` using the sparsity of `Π`.
pub fn character_direct(space: &TensorSpace, q: &GroupElement) -> Result<f64> {
    character_direct_matrix(space, &q.matrix)
}

pub fn character_direct_matrix(space: &TensorSpace, q: &Mat) -> Result<f64> {
    check_ambient(space, q)?;
    let (n, k) = (space.n, space.k);
    let mut total = 0.0;
    for sigma in &space.permutations {
        let mut acc = 0.0;
        for flat in 0..flat_len(n, k) {
            let j = multi_index(n, k, flat);
            let mut v = 1.0;
            for m in 0..k {
                v *= q[(j[sigma[m]], j[m])];
                if v == 0.0 {
                    break;
                }
            }
            acc += v;
        }
        total += acc;
    }
    Ok(total / space.permutations.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacterValue {
    pub value: f64,
    /// True when no closed form is registered and the direct contraction
    /// was used instead.
    pub fell_back: bool,
}

pub fn character_closed_form(space: &TensorSpace, q: &GroupElement) -> Result<CharacterValue> {
    check_ambient(space, &q.matrix)?;
    let Some(cf) = &space.closed_form else {
        return Ok(CharacterValue {
            value: character_direct(space, q)?,
            fell_back: true,
        });
    };
    let t = q.matrix.trace();
    let coeffs = if q.det() < 0.0 {
        cf.improper.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "space '{}' has no closed form for improper elements",
                space.name
            ))
        })?
    } else {
        &cf.proper
    };
    Ok(CharacterValue {
        value: eval_poly(coeffs, t),
        fell_back: false,
    })
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn cycle_lengths(sigma: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; sigma.len()];
    let mut out = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Derives the closed form from the cycle structure of the permutation
/// group: `tr(⊗ᵏQ · P_σ) = Π_cycles tr Q^len`, each power reduced by
/// Cayley–Hamilton.
pub fn derive_closed_form(space: &TensorSpace) -> Result<ClosedForm> {
    let branch = |det_sign: i32| -> Result<Vec<f64>> {
        let mut acc = vec![0.0; space.k + 1];
        for sigma in &space.permutations {
            let mut term = vec![1.0];
            for len in cycle_lengths(sigma) {
                term = poly_mul(&term, &trace_power_poly(space.n, len, det_sign)?);
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
        }
        let w = space.permutations.len() as f64;
        Ok(acc.into_iter().map(|c| c / w).collect())
    };
    Ok(ClosedForm {
        proper: branch(1)?,
        improper: if space.n == 2 { Some(branch(-1)?) } else { None },
    })
}

/// Quadrature degree used by the trace formula for an order-`k` space.
pub fn trace_formula_degree(k: usize) -> usize {
    k + 2
}

/// Haar average of the character, before rounding.
pub fn fix_dimension_raw(space: &TensorSpace, group: &SymmetryGroup) -> Result<f64> {
    if space.n != group.ambient {
        return Err(Error::Shape(format!(
            "space '{}' lives in R^{}, group '{}' in R^{}",
            space.name, space.n, group.catalog_id, group.ambient
        )));
    }
    // Shapes already agree, so the direct character cannot fail here.
    let value = integrate(
        group,
        |g| character_direct(space, g).unwrap_or(f64::NAN),
        trace_formula_degree(space.k),
    )?;
    Ok(value)
}

pub fn fix_dimension(space: &TensorSpace, group: &SymmetryGroup) -> Result<usize> {
    let value = fix_dimension_raw(space, group)?;
    let rounded = value.round();
    let residual = (value - rounded).abs();
    if !residual.is_finite() || residual >= 1e-6 || rounded < 0.0 {
        return Err(Error::QuadratureNotConverged { value, residual });
    }
    Ok(rounded as usize)
}
