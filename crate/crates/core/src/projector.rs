//! Group averaging `𝒫 = ∫ ⊗ᵏQ dμ ∘ Π`, fixed-subspace bases and labelled
//! Voigt structure reports.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::characters::{fix_dimension, trace_formula_degree};
use crate::error::{Error, Result};
use crate::groups::{haar_rule, QuadratureRule, SymmetryGroup};
use crate::spaces::{membership_residual, sym_identity, TensorSpace};
use crate::tensor::{
    apply_kron_power, max_abs, orthonormal_range, rational_snap, FlatOperator, FlatTensor, Mat,
    Radical, Snapped, TolerancePolicy,
};
use crate::voigt::{induced_matrix, layout_for, SpaceLayout};

fn check_ambient(space: &TensorSpace, group: &SymmetryGroup) -> Result<()> {
    if space.n != group.ambient {
        return Err(Error::Shape(format!(
            "space '{}' lives in R^{}, group '{}' in R^{}",
            space.name, space.n, group.catalog_id, group.ambient
        )));
    }
    Ok(())
}

/// `Σ wᵢ (⊗ᵏQᵢ) M`, evaluated factor by factor (last factor first) so
/// product rules never expand their node grid.
pub fn average_action(rule: &QuadratureRule, k: usize, m: &Mat) -> Mat {
    let mut cur = m.clone();
    for factor in rule.factors.iter().rev() {
        let mut acc = Mat::zeros(cur.nrows(), cur.ncols());
        for (q, w) in factor {
            acc += apply_kron_power(q, k, &cur) * *w;
        }
        cur = acc;
    }
    cur
}

fn rule_for(space: &TensorSpace, group: &SymmetryGroup) -> Result<QuadratureRule> {
    check_ambient(space, group)?;
    haar_rule(group, trace_formula_degree(space.k))
}

pub fn averaged_projector(space: &TensorSpace, group: &SymmetryGroup) -> Result<FlatOperator> {
    let rule = rule_for(space, group)?;
    let pi = sym_identity(space);
    Ok(FlatOperator {
        n: space.n,
        k: space.k,
        matrix: average_action(&rule, space.k, &pi.matrix),
    })
}

/// Largest `‖(⊗ᵏQ_g) t − t‖∞` over the group generators.
pub fn invariance_residual(group: &SymmetryGroup, t: &FlatTensor) -> f64 {
    let col = t.as_column();
    group
        .generators
        .iter()
        .map(|g| max_abs(&(apply_kron_power(&g.matrix, t.k, &col) - &col)))
        .fold(0.0, f64::max)
}

pub fn project(space: &TensorSpace, group: &SymmetryGroup, t: &FlatTensor) -> Result<FlatTensor> {
    let residual = membership_residual(space, t)?;
    if residual >= 1e-9 {
        return Err(Error::NotInSpace {
            space: space.name.clone(),
            residual,
        });
    }
    let rule = rule_for(space, group)?;
    let out = average_action(&rule, space.k, &t.as_column());
    Ok(FlatTensor {
        n: t.n,
        k: t.k,
        coeffs: out.as_slice().to_vec(),
    })
}

/// Orthonormal basis (columns) of the fixed subspace. The average is taken
/// on the orbit basis of the space only, so the SVD is at most 171×171.
pub fn fixed_basis(space: &TensorSpace, group: &SymmetryGroup, tol: &TolerancePolicy) -> Result<Mat> {
    let rule = rule_for(space, group)?;
    let v = space.orbit_basis();
    let av = average_action(&rule, space.k, &v);
    let reduced = v.transpose() * av;
    // a projector's nonzero singular values are 1, so pure rounding noise
    // must not be promoted by the relative cut
    if reduced.amax() < tol.zero_tol {
        return Ok(Mat::zeros(v.nrows(), 0));
    }
    let u = orthonormal_range(&reduced, tol);
    Ok(v * u)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: Snapped,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StructureEntry {
    Zero,
    Free {
        label: String,
    },
    /// `label` is set when the entry is a named symbol tied to the free
    /// labels by a constraint. `display` is the short form shown in the
    /// matrix (e.g. `-C18`); `combo` is always over free labels.
    Dependent {
        label: Option<String>,
        display: Vec<Term>,
        combo: Vec<Term>,
    },
}

/// A displayed symbol with its coordinates on the fixed-subspace basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub label: String,
    pub row: usize,
    pub col: usize,
    pub free: bool,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub space: String,
    pub group: String,
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    pub shape: (usize, usize),
    pub entries: Vec<Vec<StructureEntry>>,
    pub basis: Vec<FlatTensor>,
    pub constraints: Vec<String>,
    pub symbols: Vec<Symbol>,
    pub symmetric: bool,
    /// The rendered matrix of each basis tensor, for numeric evaluation.
    pub basis_matrices: Vec<Mat>,
}

pub fn label_for(prefix: &str, row: usize, col: usize) -> String {
    if row + 1 > 9 || col + 1 > 9 {
        format!("{prefix}{},{}", row + 1, col + 1)
    } else {
        format!("{prefix}{}{}", row + 1, col + 1)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_dist(a: &[f64], b: &[f64], c: f64) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - c * y).abs()))
}

/// Least-squares coefficients of `r` on the columns `cols`, and the
/// residual `‖r − Σ xᵢ colsᵢ‖∞`.
fn least_squares(cols: &[&[f64]], r: &[f64]) -> (Vec<f64>, f64) {
    if cols.is_empty() {
        return (vec![], r.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let f = Mat::from_fn(r.len(), cols.len(), |i, j| cols[j][i]);
    let rhs = DVector::from_column_slice(r);
    let svd = f.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-12).expect("svd solve");
    let resid = &f * &x - rhs;
    (x.iter().cloned().collect(), resid.amax())
}

struct Named {
    symbol: Symbol,
    /// Coefficients over free symbols, indexed by free order.
    combo: Vec<f64>,
}

pub fn structure_report(
    space: &TensorSpace,
    group: &SymmetryGroup,
    tol: &TolerancePolicy,
) -> Result<StructureReport> {
    let layout = layout_for(&space.name).ok_or_else(|| {
        Error::InvalidArgument(format!("no Voigt layout registered for space '{}'", space.name))
    })?;
    structure_report_with_layout(space, group, &layout, tol)
}

/// As [`structure_report`], with an explicit row/column layout for spaces
/// outside the catalog.
pub fn structure_report_with_layout(
    space: &TensorSpace,
    group: &SymmetryGroup,
    layout: &SpaceLayout,
    tol: &TolerancePolicy,
) -> Result<StructureReport> {
    if layout.rows.order + layout.cols.order != space.k || layout.rows.n != space.n {
        return Err(Error::Shape(format!(
            "layout of order {}+{} in R^{} does not fit space '{}'",
            layout.rows.order, layout.cols.order, layout.rows.n, space.name
        )));
    }
    let dim = fix_dimension(space, group)?;
    let basis_mat = fixed_basis(space, group, tol)?;
    if basis_mat.ncols() != dim {
        return Err(Error::Internal(format!(
            "averaged projector has rank {}, trace formula gives {dim}",
            basis_mat.ncols()
        )));
    }
    let basis: Vec<FlatTensor> = basis_mat
        .column_iter()
        .map(|c| FlatTensor {
            n: space.n,
            k: space.k,
            coeffs: c.iter().cloned().collect(),
        })
        .collect();
    build_report(space, group, layout, dim, basis, tol)
}

fn build_report(
    space: &TensorSpace,
    group: &SymmetryGroup,
    layout: &SpaceLayout,
    dim: usize,
    basis: Vec<FlatTensor>,
    tol: &TolerancePolicy,
) -> Result<StructureReport> {
    let shape = (layout.rows.len(), layout.cols.len());
    let mats: Vec<Mat> = basis
        .iter()
        .map(|b| induced_matrix(&layout.rows, &layout.cols, b))
        .collect::<Result<_>>()?;
    let scale = mats.iter().map(max_abs).fold(1e-300, f64::max);
    let zero_cut = tol.zero_tol * scale;
    let same_cut = 1e-8 * scale;

    let mut named: Vec<Named> = Vec::new();
    let mut free_ids: Vec<usize> = Vec::new();
    let mut raw: Vec<Vec<Option<RawEntry>>> = vec![vec![None; shape.1]; shape.0];

    for a in 0..shape.0 {
        for b in 0..shape.1 {
            if layout.symmetric && b < a {
                continue;
            }
            let r: Vec<f64> = mats.iter().map(|m| m[(a, b)]).collect();
            let entry = if r.iter().all(|v| v.abs() < zero_cut) {
                RawEntry::Zero
            } else if let Some((id, c)) = named.iter().enumerate().find_map(|(id, s)| {
                let c = dot(&r, &s.symbol.coords) / dot(&s.symbol.coords, &s.symbol.coords);
                (inf_dist(&r, &s.symbol.coords, c) < same_cut).then_some((id, c))
            }) {
                RawEntry::Multiple { of: id, coef: c }
            } else {
                let cols: Vec<&[f64]> = free_ids
                    .iter()
                    .map(|&i| named[i].symbol.coords.as_slice())
                    .collect();
                let (x, resid) = least_squares(&cols, &r);
                let label = label_for(layout.prefix, a, b);
                if resid > 1e-7 * scale {
                    if free_ids.len() == dim {
                        return Err(Error::Internal(format!(
                            "entry {label} adds an independent direction beyond dim {dim} (residual {resid:.3e})"
                        )));
                    }
                    let mut combo = vec![0.0; free_ids.len() + 1];
                    combo[free_ids.len()] = 1.0;
                    free_ids.push(named.len());
                    named.push(Named {
                        symbol: Symbol {
                            label,
                            row: a,
                            col: b,
                            free: true,
                            coords: r,
                        },
                        combo,
                    });
                } else {
                    named.push(Named {
                        symbol: Symbol {
                            label,
                            row: a,
                            col: b,
                            free: false,
                            coords: r,
                        },
                        combo: x,
                    });
                }
                RawEntry::Named(named.len() - 1)
            };
            raw[a][b] = Some(entry);
        }
    }
    if free_ids.len() != dim {
        return Err(Error::Internal(format!(
            "{} free labels found for a {dim}-dimensional fixed subspace",
            free_ids.len()
        )));
    }

    let free_labels: Vec<String> = free_ids.iter().map(|&i| named[i].symbol.label.clone()).collect();
    let combo_terms = |coeffs: &[f64], scale_by: f64| -> Vec<Term> {
        coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let s = rational_snap(c * scale_by, tol);
                (!s.is_zero() && (s.exact || (c * scale_by).abs() > tol.zero_tol)).then(|| Term {
                    coef: s,
                    label: free_labels[i].clone(),
                })
            })
            .collect()
    };

    let mut entries = vec![vec![StructureEntry::Zero; shape.1]; shape.0];
    for a in 0..shape.0 {
        for b in 0..shape.1 {
            let Some(entry) = &raw[a][b] else { continue };
            entries[a][b] = match entry {
                RawEntry::Zero => StructureEntry::Zero,
                RawEntry::Named(id) => {
                    let s = &named[*id];
                    if s.symbol.free {
                        StructureEntry::Free {
                            label: s.symbol.label.clone(),
                        }
                    } else {
                        StructureEntry::Dependent {
                            label: Some(s.symbol.label.clone()),
                            display: vec![Term {
                                coef: rational_snap(1.0, tol),
                                label: s.symbol.label.clone(),
                            }],
                            combo: combo_terms(&s.combo, 1.0),
                        }
                    }
                }
                RawEntry::Multiple { of, coef } => StructureEntry::Dependent {
                    label: None,
                    display: vec![Term {
                        coef: rational_snap(*coef, tol),
                        label: named[*of].symbol.label.clone(),
                    }],
                    combo: combo_terms(&named[*of].combo, *coef),
                },
            };
        }
    }
    if layout.symmetric {
        for a in 0..shape.0 {
            for b in 0..a {
                entries[a][b] = entries[b][a].clone();
            }
        }
    }

    let constraints = named
        .iter()
        .filter(|s| !s.symbol.free)
        .map(|s| render_constraint(&s.symbol, &s.combo, &named, &free_ids, tol))
        .collect();

    let basis_matrices = mats;
    Ok(StructureReport {
        space: space.name.clone(),
        group: group.catalog_id.clone(),
        n: space.n,
        k: space.k,
        dim,
        shape,
        entries,
        basis,
        constraints,
        symbols: named.into_iter().map(|s| s.symbol).collect(),
        symmetric: layout.symmetric,
        basis_matrices,
    })
}

#[derive(Clone, Debug)]
enum RawEntry {
    Zero,
    Named(usize),
    Multiple { of: usize, coef: f64 },
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Renders `label = Σ cᵢ freeᵢ` with integer coefficients where possible,
/// putting the lowest-index symbol on the left with a positive coefficient.
fn render_constraint(
    sym: &Symbol,
    combo: &[f64],
    named: &[Named],
    free_ids: &[usize],
    tol: &TolerancePolicy,
) -> String {
    // (row, col, label, coefficient) with the equation Σ coef·label = 0
    let mut terms: Vec<(usize, usize, String, Snapped)> =
        vec![(sym.row, sym.col, sym.label.clone(), rational_snap(1.0, tol))];
    for (i, c) in combo.iter().enumerate() {
        let s = rational_snap(-c, tol);
        if s.is_zero() || (!s.exact && c.abs() < tol.zero_tol) {
            continue;
        }
        let f = &named[free_ids[i]].symbol;
        terms.push((f.row, f.col, f.label.clone(), s));
    }
    terms.sort_by_key(|t| (t.0, t.1));

    let rational = terms.iter().all(|t| t.3.exact && t.3.radical == Radical::One);
    let coefs: Vec<Snapped> = if rational {
        let lcm = terms.iter().fold(1i64, |l, t| l / gcd(l, t.3.den) * t.3.den);
        let ints: Vec<i64> = terms.iter().map(|t| t.3.num * (lcm / t.3.den)).collect();
        let g = ints.iter().fold(0i64, |g, &v| gcd(g, v)).max(1);
        let sign = if ints[0] < 0 { -1 } else { 1 };
        ints.iter()
            .map(|v| rational_snap((sign * v / g) as f64, tol))
            .collect()
    } else {
        let lead = terms[0].3.snapped_value();
        terms.iter().map(|t| rational_snap(t.3.snapped_value() / lead, tol)).collect()
    };

    let fmt_coef = |c: &Snapped| -> String {
        if c.exact && c.num.abs() == 1 && c.den == 1 && c.radical == Radical::One {
            String::new()
        } else {
            let mut abs = *c;
            abs.num = abs.num.abs();
            abs.value = abs.value.abs();
            format!("{abs} ")
        }
    };
    let mut out = format!("{}{} =", fmt_coef(&coefs[0]), terms[0].2);
    let mut first = true;
    for (t, c) in terms.iter().zip(&coefs).skip(1) {
        // moved to the right-hand side: sign flips
        let negative = c.snapped_value() > 0.0;
        let sign = match (first, negative) {
            (true, true) => " -",
            (true, false) => "",
            (false, true) => " -",
            (false, false) => " +",
        };
        out.push_str(&format!("{sign} {}{}", fmt_coef(c), t.2));
        first = false;
    }
    if terms.len() == 1 {
        out.push_str(" 0");
    }
    out
}

impl StructureEntry {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureEntry::Zero => "zero",
            StructureEntry::Free { .. } => "free",
            StructureEntry::Dependent { .. } => "dependent",
        }
    }

    /// Compact text such as `0`, `C11`, `-C18`, `1/2 C11`.
    pub fn display(&self) -> String {
        match self {
            StructureEntry::Zero => "0".into(),
            StructureEntry::Free { label } => label.clone(),
            StructureEntry::Dependent { label: Some(l), .. } => l.clone(),
            StructureEntry::Dependent { display, .. } => render_terms(display),
        }
    }
}

fn render_terms(terms: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let v = t.coef.snapped_value();
        let neg = v < 0.0;
        let mut abs = t.coef;
        abs.num = abs.num.abs();
        abs.value = abs.value.abs();
        let unit = abs.exact && abs.num == 1 && abs.den == 1 && abs.radical == Radical::One;
        let body = if unit {
            t.label.clone()
        } else {
            format!("{abs} {}", t.label)
        };
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub value: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub display: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub combo: Option<Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub space: String,
    pub group: String,
    pub dim: usize,
    pub shape: [usize; 2],
    pub entries: Vec<Vec<EntryJson>>,
    pub constraints: Vec<String>,
}

impl StructureReport {
    pub fn free_labels(&self) -> Vec<&str> {
        self.symbols
            .iter()
            .filter(|s| s.free)
            .map(|s| s.label.as_str())
            .collect()
    }

    /// Number of displayed symbols (free plus constrained).
    pub fn named_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn to_json(&self) -> ReportJson {
        let term = |t: &Term| TermJson {
            coef: t.coef.to_string(),
            value: t.coef.snapped_value(),
            label: t.label.clone(),
        };
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        StructureEntry::Zero => EntryJson {
                            kind: "zero".into(),
                            label: None,
                            display: None,
                            combo: None,
                        },
                        StructureEntry::Free { label } => EntryJson {
                            kind: "free".into(),
                            label: Some(label.clone()),
                            display: None,
                            combo: None,
                        },
                        StructureEntry::Dependent { label, combo, .. } => EntryJson {
                            kind: "dependent".into(),
                            label: label.clone(),
                            display: Some(e.display()),
                            combo: Some(combo.iter().map(term).collect()),
                        },
                    })
                    .collect()
            })
            .collect();
        ReportJson {
            space: self.space.clone(),
            group: self.group.clone(),
            dim: self.dim,
            shape: [self.shape.0, self.shape.1],
            entries,
            constraints: self.constraints.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.display()).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(|c| c.chars().count())
            .max()
            .unwrap_or(1);
        let mut out = format!(
            "space {}  group {}  dim {}  shape {}x{}\n",
            self.space, self.group, self.dim, self.shape.0, self.shape.1
        );
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .map(|c| format!("{c:>width$}", width = width))
                .collect();
            out.push_str(&line.join("  "));
            out.push('\n');
        }
        for c in &self.constraints {
            out.push_str(&format!("where {c}\n"));
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let tex_label = |l: &str| {
            let split = l.find(|c: char| c.is_ascii_digit()).unwrap_or(l.len());
            format!("{}_{{{}}}", &l[..split], &l[split..])
        };
        let tex_entry = |e: &StructureEntry| -> String {
            match e {
                StructureEntry::Zero => "0".into(),
                StructureEntry::Free { label } | StructureEntry::Dependent { label: Some(label), .. } => {
                    tex_label(label)
                }
                StructureEntry::Dependent { display, .. } => {
                    let mut s = render_terms(display);
                    for t in display {
                        s = s.replace(&t.label, &tex_label(&t.label));
                    }
                    s.replace('√', "\\sqrt")
                }
            }
        };
        let (rows, cols) = self.shape;
        let mut out = String::from("\\begin{pmatrix}\n");
        for a in 0..rows {
            let mut line = Vec::with_capacity(cols);
            for b in 0..cols {
                if self.symmetric && b < a {
                    let sym_row = (rows * 2) / 3;
                    let sym_col = rows / 3;
                    line.push(if a == sym_row && b == sym_col {
                        "\\textrm{sym}".to_string()
                    } else {
                        String::new()
                    });
                } else {
                    line.push(tex_entry(&self.entries[a][b]));
                }
            }
            out.push_str(&line.join(" & "));
            if a + 1 < rows {
                out.push_str(" \\\\");
            }
            out.push('\n');
        }
        out.push_str("\\end{pmatrix}\n");
        for c in &self.constraints {
            let tex: Vec<String> = c
                .split(' ')
                .map(|tok| {
                    if self.symbols.iter().any(|s| s.label == tok) {
                        tex_label(tok)
                    } else {
                        tok.replace('√', "\\sqrt")
                    }
                })
                .collect();
            out.push_str(&format!("\\[ {} \\]\n", tex.join(" ")));
        }
        out
    }

    /// Basis coordinates reproducing the given symbol values.
    pub fn solve_coordinates(&self, values: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (label, v) in values {
            let sym = self
                .symbols
                .iter()
                .find(|s| &s.label == label)
                .ok_or_else(|| Error::UnknownName {
                    kind: "label",
                    name: label.clone(),
                })?;
            rows.push(sym.coords.clone());
            rhs.push(*v);
        }
        if rows.is_empty() {
            return Err(Error::InvalidArgument("no label values given".into()));
        }
        let a = Mat::from_fn(rows.len(), self.dim, |i, j| rows[i][j]);
        let rank = crate::tensor::numerical_rank(&a, &TolerancePolicy::default());
        if rank < self.dim {
            return Err(Error::InvalidArgument(format!(
                "{} values pin down only {rank} of {} independent constants",
                values.len(),
                self.dim
            )));
        }
        let b = DVector::from_vec(rhs);
        let x = a.clone().svd(true, true).solve(&b, 1e-12).expect("svd solve");
        let resid = (&a * &x - &b).amax();
        if resid > 1e-9 * b.amax().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "label values are inconsistent with the report constraints (residual {resid:.3e})"
            )));
        }
        Ok(x.iter().cloned().collect())
    }

    /// The rendered matrix for given basis coordinates.
    pub fn matrix_at(&self, coords: &[f64]) -> Mat {
        let mut m = Mat::zeros(self.shape.0, self.shape.1);
        for (c, bm) in coords.iter().zip(&self.basis_matrices) {
            m += bm * *c;
        }
        m
    }

    pub fn tensor_at(&self, coords: &[f64]) -> FlatTensor {
        let mut t = FlatTensor::zeros(self.n, self.k);
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, v) in t.coeffs.iter_mut().zip(&b.coeffs) {
                *o += c * v;
            }
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicModuli {
    pub lambda: f64,
    pub mu: f64,
    pub mu_c: f64,
}

/// The 9×9 isotropic matrix in the `(11, 22, 33, 23, 32, 13, 31, 12, 21)`
/// ordering.
pub fn isotropic_moduli_matrix(m: &IsotropicModuli) -> Mat {
    let mut out = Mat::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = m.lambda + if i == j { 2.0 * m.mu } else { 0.0 };
        }
    }
    for p in [3, 5, 7] {
        out[(p, p)] = m.mu + m.mu_c;
        out[(p + 1, p + 1)] = m.mu + m.mu_c;
        out[(p, p + 1)] = m.mu - m.mu_c;
        out[(p + 1, p)] = m.mu - m.mu_c;
    }
    out
}

/// `λ = C₁₂`, `μ = (C₄₄ + C₄₅)/2`, `μ_c = (C₄₄ − C₄₅)/2`.
pub fn moduli_from_matrix(m: &Mat) -> IsotropicModuli {
    IsotropicModuli {
        lambda: m[(0, 1)],
        mu: (m[(3, 3)] + m[(3, 4)]) / 2.0,
        mu_c: (m[(3, 3)] - m[(3, 4)]) / 2.0,
    }
}

pub fn extract_isotropic_moduli(
    report: &StructureReport,
    values: &BTreeMap<String, f64>,
) -> Result<IsotropicModuli> {
    if report.space != "major3" || report.group != "so3" {
        return Err(Error::InvalidArgument(format!(
            "isotropic moduli need the (major3, so3) report, got ({}, {})",
            report.space, report.group
        )));
    }
    let coords = report.solve_coordinates(values)?;
    Ok(moduli_from_matrix(&report.matrix_at(&coords)))
}
