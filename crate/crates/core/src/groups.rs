//! Closed subgroups of SO(3) and O(2): finite element lists, continuous
//! groups with exact quadrature, and normalized Haar integration.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tensor::{check_orthogonal, max_abs, Mat};

pub const DEFAULT_MAX_POLY_DEGREE: usize = 8;
pub const MAX_POLY_DEGREE: usize = 12;

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Mat,
    pub label: String,
}

impl GroupElement {
    pub fn new(matrix: Mat, label: impl Into<String>) -> Result<Self> {
        check_orthogonal(&matrix, 1e-12)?;
        let det = matrix.determinant();
        if (det.abs() - 1.0).abs() >= 1e-12 {
            return Err(Error::NotOrthogonal {
                defect: (det.abs() - 1.0).abs(),
            });
        }
        if matrix.nrows() == 3 && det < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "improper 3D element '{}': only rotations are admitted in 3D",
                label.into()
            )));
        }
        Ok(GroupElement {
            matrix,
            label: label.into(),
        })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            matrix: Mat::identity(n, n),
            label: "id".into(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }
}

/// Rotation by `theta` in the plane.
pub fn rot2(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Rotation by `theta` about `axis` (Rodrigues). The axis is normalized;
/// a zero axis gives the identity.
pub fn rot3(axis: [f64; 3], theta: f64) -> Mat {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Mat::identity(3, 3);
    }
    let [x, y, z] = axis.map(|a| a / norm);
    let (s, c) = theta.sin_cos();
    let t = 1.0 - c;
    Mat::from_row_slice(
        3,
        3,
        &[
            c + x * x * t,
            x * y * t - z * s,
            x * z * t + y * s,
            y * x * t + z * s,
            c + y * y * t,
            y * z * t - x * s,
            z * x * t - y * s,
            z * y * t + x * s,
            c + z * z * t,
        ],
    )
}

/// The planar reflection `R = diag(−1, 1)`.
pub fn reflection_r() -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0]))
}

/// Rotation by π about e₁, `diag(1, −1, −1)`.
pub fn flip_e1() -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0]))
}

pub fn normalize_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || norm < 1e-12 {
        return Err(Error::InvalidArgument(format!("axis {axis:?} has no direction")));
    }
    Ok([axis[0] / norm, axis[1] / norm, axis[2] / norm])
}

/// A rotation carrying e₃ onto the unit vector `axis`.
pub fn rotation_to_axis(axis: [f64; 3]) -> Mat {
    let [x, y, z] = axis;
    if (z - 1.0).abs() < 1e-15 {
        return Mat::identity(3, 3);
    }
    if (z + 1.0).abs() < 1e-15 {
        return rot3([1.0, 0.0, 0.0], PI);
    }
    // e₃ × axis = (−y, x, 0)
    let s = (x * x + y * y).sqrt();
    rot3([-y / s, x / s, 0.0], z.clamp(-1.0, 1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuousKind {
    So2Plane,
    O2Plane,
    So2Axis,
    O2Axis,
    So3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteCatalog {
    Trivial { ambient: usize },
    CyclicPlane(usize),
    DihedralPlane(usize),
    CyclicAxis(usize),
    DihedralAxis(usize),
    Cubic,
}

#[derive(Clone, Debug)]
pub enum GroupKind {
    Finite(Vec<GroupElement>),
    Continuous(ContinuousKind),
}

#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub ambient: usize,
    pub kind: GroupKind,
    pub catalog_id: String,
    /// Elements whose generated closed subgroup is the whole group. For
    /// continuous groups these are rotations by 1 rad, which generate a
    /// dense subgroup.
    pub generators: Vec<GroupElement>,
    /// Conjugation applied to e₃-aligned constructions (identity otherwise).
    pub frame: Mat,
}

fn conjugate(frame: &Mat, m: &Mat) -> Mat {
    frame * m * frame.transpose()
}

fn fmt_angle(j: usize, n: usize) -> String {
    if j == 0 {
        return "0".into();
    }
    let g = gcd(2 * j, n);
    let (p, q) = (2 * j / g, n / g);
    match (p, q) {
        (1, 1) => "π".into(),
        (p, 1) => format!("{p}π"),
        (1, q) => format!("π/{q}"),
        (p, q) => format!("{p}π/{q}"),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cubic_elements() -> Vec<GroupElement> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(24);
    for p in perms {
        for signs in 0..8u32 {
            let mut m = Mat::zeros(3, 3);
            for (row, &col) in p.iter().enumerate() {
                m[(row, col)] = if signs >> row & 1 == 1 { -1.0 } else { 1.0 };
            }
            if m.determinant() > 0.0 {
                let label = format!(
                    "[{}]",
                    (0..3)
                        .map(|r| {
                            let sign = if m[(r, p[r])] < 0.0 { "-" } else { "+" };
                            format!("{sign}e{}", p[r] + 1)
                        })
                        .collect::<Vec<_>>()
                        .join(",")
                );
                out.push(GroupElement { matrix: m, label });
            }
        }
    }
    out
}

pub fn make_finite_group(id: FiniteCatalog, axis: Option<[f64; 3]>) -> Result<SymmetryGroup> {
    let frame = match (&id, axis) {
        (FiniteCatalog::CyclicAxis(_) | FiniteCatalog::DihedralAxis(_), Some(a)) => {
            rotation_to_axis(normalize_axis(a)?)
        }
        (FiniteCatalog::Trivial { ambient }, _) => Mat::identity(*ambient, *ambient),
        (FiniteCatalog::CyclicPlane(_) | FiniteCatalog::DihedralPlane(_), _) => Mat::identity(2, 2),
        _ => Mat::identity(3, 3),
    };
    let (ambient, catalog_id, elements, generators) = match id {
        FiniteCatalog::Trivial { ambient } => {
            if ambient != 2 && ambient != 3 {
                return Err(Error::InvalidArgument(format!("ambient dimension {ambient}")));
            }
            let e = GroupElement::identity(ambient);
            (ambient, "trivial".to_string(), vec![e.clone()], vec![e])
        }
        FiniteCatalog::CyclicPlane(n) | FiniteCatalog::DihedralPlane(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("group order must be >= 1".into()));
            }
            let dihedral = matches!(id, FiniteCatalog::DihedralPlane(_));
            let mut els: Vec<GroupElement> = (0..n)
                .map(|j| GroupElement {
                    matrix: rot2(2.0 * PI * j as f64 / n as f64),
                    label: format!("rot({})", fmt_angle(j, n)),
                })
                .collect();
            let mut gens = vec![GroupElement {
                matrix: rot2(2.0 * PI / n as f64),
                label: format!("rot({})", fmt_angle(1, n)),
            }];
            if dihedral {
                let r = reflection_r();
                let coset: Vec<GroupElement> = els
                    .iter()
                    .map(|g| GroupElement {
                        matrix: &r * &g.matrix,
                        label: format!("R·{}", g.label),
                    })
                    .collect();
                els.extend(coset);
                gens.push(GroupElement {
                    matrix: r,
                    label: "R".into(),
                });
            }
            let name = format!("{}{n}", if dihedral { "d" } else { "z" });
            (2, name, els, gens)
        }
        FiniteCatalog::CyclicAxis(n) | FiniteCatalog::DihedralAxis(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("group order must be >= 1".into()));
            }
            let dihedral = matches!(id, FiniteCatalog::DihedralAxis(_));
            let e3 = [0.0, 0.0, 1.0];
            let mut els: Vec<GroupElement> = (0..n)
                .map(|j| GroupElement {
                    matrix: conjugate(&frame, &rot3(e3, 2.0 * PI * j as f64 / n as f64)),
                    label: format!("rot(e3, {})", fmt_angle(j, n)),
                })
                .collect();
            let mut gens = vec![GroupElement {
                matrix: conjugate(&frame, &rot3(e3, 2.0 * PI / n as f64)),
                label: format!("rot(e3, {})", fmt_angle(1, n)),
            }];
            if dihedral {
                let f = conjugate(&frame, &flip_e1());
                let coset: Vec<GroupElement> = els
                    .iter()
                    .map(|g| GroupElement {
                        matrix: &f * &g.matrix,
                        label: format!("rot(e1, π)·{}", g.label),
                    })
                    .collect();
                els.extend(coset);
                gens.push(GroupElement {
                    matrix: f,
                    label: "rot(e1, π)".into(),
                });
            }
            let name = format!("{}{n}", if dihedral { "d" } else { "z" });
            (3, name, els, gens)
        }
        FiniteCatalog::Cubic => {
            let gens = vec![
                GroupElement {
                    matrix: rot3([0.0, 0.0, 1.0], PI / 2.0),
                    label: "rot(e3, π/2)".into(),
                },
                GroupElement {
                    matrix: rot3([1.0, 0.0, 0.0], PI / 2.0),
                    label: "rot(e1, π/2)".into(),
                },
            ];
            (3, "cubic".to_string(), cubic_elements(), gens)
        }
    };
    let expected = match id {
        FiniteCatalog::Trivial { .. } => 1,
        FiniteCatalog::CyclicPlane(n) | FiniteCatalog::CyclicAxis(n) => n,
        FiniteCatalog::DihedralPlane(n) | FiniteCatalog::DihedralAxis(n) => 2 * n,
        FiniteCatalog::Cubic => 24,
    };
    if elements.len() != expected {
        return Err(Error::Internal(format!(
            "{catalog_id}: expected {expected} elements, built {}",
            elements.len()
        )));
    }
    closure_check(&elements)?;
    Ok(SymmetryGroup {
        ambient,
        kind: GroupKind::Finite(elements),
        catalog_id,
        generators,
        frame,
    })
}

pub fn make_continuous_group(kind: ContinuousKind, axis: Option<[f64; 3]>) -> Result<SymmetryGroup> {
    let frame = match (kind, axis) {
        (ContinuousKind::So2Axis | ContinuousKind::O2Axis, Some(a)) => {
            rotation_to_axis(normalize_axis(a)?)
        }
        (ContinuousKind::So2Plane | ContinuousKind::O2Plane, _) => Mat::identity(2, 2),
        _ => Mat::identity(3, 3),
    };
    let e1 = [1.0, 0.0, 0.0];
    let e3 = [0.0, 0.0, 1.0];
    let (ambient, id, generators) = match kind {
        ContinuousKind::So2Plane => (2, "so2", vec![("rot(1)", rot2(1.0))]),
        ContinuousKind::O2Plane => (2, "o2", vec![("rot(1)", rot2(1.0)), ("R", reflection_r())]),
        ContinuousKind::So2Axis => (3, "so2-e3", vec![("rot(e3, 1)", rot3(e3, 1.0))]),
        ContinuousKind::O2Axis => (
            3,
            "o2-e3",
            vec![("rot(e3, 1)", rot3(e3, 1.0)), ("rot(e1, π)", flip_e1())],
        ),
        ContinuousKind::So3 => (
            3,
            "so3",
            vec![("rot(e3, 1)", rot3(e3, 1.0)), ("rot(e1, 1)", rot3(e1, 1.0))],
        ),
    };
    let generators = generators
        .into_iter()
        .map(|(label, m)| GroupElement {
            matrix: conjugate(&frame, &m),
            label: label.into(),
        })
        .collect();
    Ok(SymmetryGroup {
        ambient,
        kind: GroupKind::Continuous(kind),
        catalog_id: id.into(),
        generators,
        frame,
    })
}

/// Resolves a CLI catalog name (case-insensitive). `z<n>`/`d<n>` pick the
/// planar or axial family from `ambient`.
pub fn resolve_group(
    name: &str,
    ambient: usize,
    axis: Option<[f64; 3]>,
    order_param: Option<usize>,
) -> Result<SymmetryGroup> {
    let lower = name.trim().to_ascii_lowercase();
    let unknown = || Error::UnknownName {
        kind: "group",
        name: name.to_string(),
    };
    let wrong_ambient = |needed: usize| {
        Error::UnknownName {
            kind: "group",
            name: format!("{name} (defined for R^{needed}, space lives in R^{ambient})"),
        }
    };
    let cyclic_order = |rest: &str| -> Result<usize> {
        let parsed = if rest.is_empty() {
            order_param.ok_or_else(unknown)?
        } else {
            rest.parse::<usize>().map_err(|_| unknown())?
        };
        if let Some(o) = order_param {
            if o != parsed {
                return Err(Error::InvalidArgument(format!(
                    "--order {o} contradicts group name '{name}'"
                )));
            }
        }
        if parsed == 0 {
            return Err(unknown());
        }
        Ok(parsed)
    };
    match lower.as_str() {
        "trivial" => make_finite_group(FiniteCatalog::Trivial { ambient }, None),
        "cubic" => {
            if ambient != 3 {
                return Err(wrong_ambient(3));
            }
            make_finite_group(FiniteCatalog::Cubic, None)
        }
        "so2" | "o2" => {
            if ambient != 2 {
                return Err(wrong_ambient(2));
            }
            let kind = if lower == "so2" {
                ContinuousKind::So2Plane
            } else {
                ContinuousKind::O2Plane
            };
            make_continuous_group(kind, None)
        }
        "so2-e3" | "o2-e3" | "so3" => {
            if ambient != 3 {
                return Err(wrong_ambient(3));
            }
            let kind = match lower.as_str() {
                "so2-e3" => ContinuousKind::So2Axis,
                "o2-e3" => ContinuousKind::O2Axis,
                _ => ContinuousKind::So3,
            };
            make_continuous_group(kind, axis)
        }
        s if s.starts_with('z') || s.starts_with('d') => {
            let order = cyclic_order(&s[1..])?;
            let id = match (s.starts_with('z'), ambient) {
                (true, 2) => FiniteCatalog::CyclicPlane(order),
                (false, 2) => FiniteCatalog::DihedralPlane(order),
                (true, 3) => FiniteCatalog::CyclicAxis(order),
                (false, 3) => FiniteCatalog::DihedralAxis(order),
                _ => return Err(Error::InvalidArgument(format!("ambient dimension {ambient}"))),
            };
            make_finite_group(id, axis)
        }
        _ => Err(unknown()),
    }
}

/// Catalog names valid for a given ambient dimension.
pub fn catalog_names(ambient: usize) -> Vec<&'static str> {
    let mut names = vec!["trivial", "z2", "z3", "z4", "z6", "d2", "d3", "d4", "d6"];
    if ambient == 2 {
        names.extend(["so2", "o2"]);
    } else {
        names.extend(["cubic", "so2-e3", "o2-e3", "so3"]);
    }
    names
}

fn position(elements: &[GroupElement], m: &Mat) -> Option<usize> {
    elements
        .iter()
        .position(|e| max_abs(&(&e.matrix - m)) < 1e-10)
}

/// Verifies identity membership, closure under products and inverses.
pub fn closure_check(elements: &[GroupElement]) -> Result<()> {
    let n = match elements.first() {
        Some(e) => e.ambient(),
        None => return Err(Error::InvalidArgument("empty element list".into())),
    };
    if position(elements, &Mat::identity(n, n)).is_none() {
        return Err(Error::NotClosed {
            a: "identity".into(),
            b: "identity".into(),
        });
    }
    for a in elements {
        if position(elements, &a.matrix.transpose()).is_none() {
            return Err(Error::NotClosed {
                a: format!("inverse of {}", a.label),
                b: "id".into(),
            });
        }
        for b in elements {
            if position(elements, &(&a.matrix * &b.matrix)).is_none() {
                return Err(Error::NotClosed {
                    a: a.label.clone(),
                    b: b.label.clone(),
                });
            }
        }
    }
    Ok(())
}

/// A normalized quadrature rule. `factors` records a product structure:
/// every node is `F₁·F₂·…` with one matrix picked from each factor and the
/// weight the product of factor weights. Averaging a representation can
/// then proceed factor by factor.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<(GroupElement, f64)>,
    pub factors: Vec<Vec<(Mat, f64)>>,
    /// True for finite groups: weights are exactly `1/|G|`.
    pub uniform: bool,
}

impl QuadratureRule {
    fn from_factors(factors: Vec<Vec<(GroupElement, f64)>>, uniform: bool) -> Self {
        let mut nodes: Vec<(GroupElement, f64)> = vec![(
            GroupElement::identity(factors[0][0].0.ambient()),
            1.0,
        )];
        for factor in &factors {
            let mut next = Vec::with_capacity(nodes.len() * factor.len());
            for (g, w) in &nodes {
                for (h, v) in factor {
                    let label = if g.label == "id" {
                        h.label.clone()
                    } else {
                        format!("{}·{}", g.label, h.label)
                    };
                    next.push((
                        GroupElement {
                            matrix: &g.matrix * &h.matrix,
                            label,
                        },
                        w * v,
                    ));
                }
            }
            nodes = next;
        }
        let factors = factors
            .into_iter()
            .map(|f| f.into_iter().map(|(g, w)| (g.matrix, w)).collect())
            .collect();
        QuadratureRule {
            nodes,
            factors,
            uniform,
        }
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton on Pₘ).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn circle_factor(n_pts: usize, make: impl Fn(f64) -> Mat, axis_label: &str) -> Vec<(GroupElement, f64)> {
    (0..n_pts)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n_pts as f64;
            (
                GroupElement {
                    matrix: make(theta),
                    label: format!("rot({axis_label}{})", fmt_angle(j, n_pts)),
                },
                1.0 / n_pts as f64,
            )
        })
        .collect()
}

/// Cardan factors `R_φ`, `R_θ`, `R_ψ` of `Q = R_φ R_θ R_ψ`.
pub fn cardan_phi(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    Mat::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, c, s, 0.0, -s, c])
}

pub fn cardan_theta(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(3, 3, &[c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c])
}

pub fn cardan_psi(psi: f64) -> Mat {
    let (s, c) = psi.sin_cos();
    Mat::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

pub fn haar_rule(g: &SymmetryGroup, max_poly_degree: usize) -> Result<QuadratureRule> {
    match &g.kind {
        GroupKind::Finite(elements) => {
            let w = 1.0 / elements.len() as f64;
            let factor = elements.iter().map(|e| (e.clone(), w)).collect();
            Ok(QuadratureRule::from_factors(vec![factor], true))
        }
        GroupKind::Continuous(kind) => {
            if max_poly_degree > MAX_POLY_DEGREE {
                return Err(Error::UnsupportedDegree {
                    degree: max_poly_degree,
                    max: MAX_POLY_DEGREE,
                });
            }
            let n_circle = 2 * max_poly_degree + 2;
            let f = &g.frame;
            let e3 = [0.0, 0.0, 1.0];
            let half = |m: Mat, label: &str| {
                vec![
                    (GroupElement::identity(m.nrows()), 0.5),
                    (
                        GroupElement {
                            matrix: m,
                            label: label.into(),
                        },
                        0.5,
                    ),
                ]
            };
            let factors = match kind {
                ContinuousKind::So2Plane => vec![circle_factor(n_circle, rot2, "")],
                ContinuousKind::O2Plane => vec![
                    half(reflection_r(), "R"),
                    circle_factor(n_circle, rot2, ""),
                ],
                ContinuousKind::So2Axis => vec![circle_factor(
                    n_circle,
                    |t| conjugate(f, &rot3(e3, t)),
                    "e3, ",
                )],
                ContinuousKind::O2Axis => vec![
                    half(conjugate(f, &flip_e1()), "rot(e1, π)"),
                    circle_factor(n_circle, |t| conjugate(f, &rot3(e3, t)), "e3, "),
                ],
                ContinuousKind::So3 => {
                    let (us, ws) = gauss_legendre(max_poly_degree + 1);
                    let theta_factor = us
                        .iter()
                        .zip(&ws)
                        .map(|(u, w)| {
                            // θ′ = arccos u ∈ (0, π); the chart angle is θ′ − π/2.
                            let theta = u.acos() - PI / 2.0;
                            (
                                GroupElement {
                                    matrix: cardan_theta(theta),
                                    label: format!("Rθ({theta:.6})"),
                                },
                                w / 2.0,
                            )
                        })
                        .collect();
                    vec![
                        circle_factor(n_circle, cardan_phi, "φ="),
                        theta_factor,
                        circle_factor(n_circle, cardan_psi, "ψ="),
                    ]
                }
            };
            Ok(QuadratureRule::from_factors(factors, false))
        }
    }
}

/// Normalized Haar integral of `f`. Finite groups return the plain
/// arithmetic mean; continuous groups use `haar_rule(g, degree)` summed in
/// node order.
pub fn integrate<F>(g: &SymmetryGroup, f: F, degree: usize) -> Result<f64>
where
    F: Fn(&GroupElement) -> f64,
{
    let rule = haar_rule(g, degree)?;
    Ok(integrate_rule(&rule, f))
}

pub fn integrate_rule<F>(rule: &QuadratureRule, f: F) -> f64
where
    F: Fn(&GroupElement) -> f64,
{
    if rule.uniform {
        let sum: f64 = rule.nodes.iter().map(|(g, _)| f(g)).sum();
        sum / rule.nodes.len() as f64
    } else {
        rule.nodes.iter().map(|(g, w)| w * f(g)).sum()
    }
}

/// A Haar-distributed random element (uniform for finite groups, random
/// unit quaternion for SO(3)).
pub fn random_element<R: rand::Rng + ?Sized>(g: &SymmetryGroup, rng: &mut R) -> GroupElement {
    let angle = |rng: &mut R| rng.gen_range(0.0..2.0 * PI);
    let matrix = match &g.kind {
        GroupKind::Finite(elements) => return elements[rng.gen_range(0..elements.len())].clone(),
        GroupKind::Continuous(ContinuousKind::So2Plane) => rot2(angle(rng)),
        GroupKind::Continuous(ContinuousKind::O2Plane) => {
            let r = rot2(angle(rng));
            if rng.gen_bool(0.5) {
                reflection_r() * r
            } else {
                r
            }
        }
        GroupKind::Continuous(ContinuousKind::So2Axis) => {
            conjugate(&g.frame, &rot3([0.0, 0.0, 1.0], angle(rng)))
        }
        GroupKind::Continuous(ContinuousKind::O2Axis) => {
            let r = rot3([0.0, 0.0, 1.0], angle(rng));
            let m = if rng.gen_bool(0.5) { flip_e1() * r } else { r };
            conjugate(&g.frame, &m)
        }
        GroupKind::Continuous(ContinuousKind::So3) => {
            let q = loop {
                let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 > 1e-4 && n2 <= 1.0 {
                    let n = n2.sqrt();
                    break v.map(|x| x / n);
                }
            };
            let [w, x, y, z] = q;
            Mat::from_row_slice(
                3,
                3,
                &[
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            )
        }
    };
    GroupElement {
        matrix,
        label: "random".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_to_axis_hits_target() {
        let a = normalize_axis([1.0, 2.0, -0.5]).unwrap();
        let r = rotation_to_axis(a);
        let v = &r * nalgebra::DVector::from_vec(vec![0.0, 0.0, 1.0]);
        for i in 0..3 {
            assert!((v[i] - a[i]).abs() < 1e-14);
        }
    }
}
