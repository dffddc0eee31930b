//! Constitutive-tensor spaces described by index-permutation symmetries.
//!
//! A permutation `σ` of the `k` index positions acts by
//! `(P_σ T)_{i₀…i_{k−1}} = T_{i_σ(0)…i_σ(k−1)}`. The symmetrization
//! identity `Π` is the average of `P_σ` over the generated group.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::tensor::{flat_index, flat_len, multi_index, FlatOperator, FlatTensor, Mat};

/// Closed-form character as polynomial coefficients in `t = tr Q`,
/// lowest degree first. `improper` is the det = −1 branch (2D only).
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub proper: Vec<f64>,
    pub improper: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub symmetry_generators: Vec<Vec<usize>>,
    /// The generated permutation group, sorted, identity first.
    pub permutations: Vec<Vec<usize>>,
    pub closed_form: Option<ClosedForm>,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // m ↦ b(a(m)); the generated set does not depend on the order convention
    a.iter().map(|&x| b[x]).collect()
}

impl TensorSpace {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: usize,
        generators: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        if n != 2 && n != 3 {
            return Err(Error::InvalidArgument(format!("ambient dimension {n}")));
        }
        if k == 0 || k > 6 {
            return Err(Error::InvalidArgument(format!("tensor order {k}")));
        }
        for g in &generators {
            let mut seen = vec![false; k];
            if g.len() != k || g.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidArgument(format!(
                    "{g:?} is not a permutation of {k} positions"
                )));
            }
        }
        let identity: Vec<usize> = (0..k).collect();
        let mut group: BTreeSet<Vec<usize>> = BTreeSet::new();
        group.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let q = compose(&p, g);
                if group.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        Ok(TensorSpace {
            name,
            n,
            k,
            symmetry_generators: generators,
            permutations: group.into_iter().collect(),
            closed_form: None,
        })
    }

    pub fn with_closed_form(mut self, cf: ClosedForm) -> Self {
        self.closed_form = Some(cf);
        self
    }

    pub fn flat_len(&self) -> usize {
        flat_len(self.n, self.k)
    }

    /// Flat index reached by permuting the positions of `idx`.
    fn permuted(&self, sigma: &[usize], idx: &[usize]) -> usize {
        sigma.iter().fold(0, |acc, &s| acc * self.n + idx[s])
    }

    /// `Π t` without forming the dense operator.
    pub fn symmetrize(&self, t: &FlatTensor) -> Result<FlatTensor> {
        self.check_shape(t)?;
        let mut out = vec![0.0; t.coeffs.len()];
        let w = 1.0 / self.permutations.len() as f64;
        for (flat, o) in out.iter_mut().enumerate() {
            let idx = multi_index(self.n, self.k, flat);
            let mut acc = 0.0;
            for sigma in &self.permutations {
                acc += t.coeffs[self.permuted(sigma, &idx)];
            }
            *o = acc * w;
        }
        Ok(FlatTensor {
            n: self.n,
            k: self.k,
            coeffs: out,
        })
    }

    pub fn check_shape(&self, t: &FlatTensor) -> Result<()> {
        if t.n != self.n || t.k != self.k {
            return Err(Error::Shape(format!(
                "space '{}' holds (n={}, k={}) tensors, got (n={}, k={})",
                self.name, self.n, self.k, t.n, t.k
            )));
        }
        Ok(())
    }

    /// Orbits of multi-indices under the permutation group, each sorted,
    /// listed by smallest member.
    pub fn index_orbits(&self) -> Vec<Vec<usize>> {
        let len = self.flat_len();
        let mut seen = vec![false; len];
        let mut orbits = Vec::new();
        for flat in 0..len {
            if seen[flat] {
                continue;
            }
            let idx = multi_index(self.n, self.k, flat);
            let orbit: BTreeSet<usize> = self
                .permutations
                .iter()
                .map(|s| self.permuted(s, &idx))
                .collect();
            for &o in &orbit {
                seen[o] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Orthonormal basis of the space as columns: normalized orbit
    /// indicators.
    pub fn orbit_basis(&self) -> Mat {
        let orbits = self.index_orbits();
        let mut v = Mat::zeros(self.flat_len(), orbits.len());
        for (j, orbit) in orbits.iter().enumerate() {
            let c = 1.0 / (orbit.len() as f64).sqrt();
            for &i in orbit {
                v[(i, j)] = c;
            }
        }
        v
    }
}

pub fn sym_identity(space: &TensorSpace) -> FlatOperator {
    let len = space.flat_len();
    let w = 1.0 / space.permutations.len() as f64;
    let mut m = Mat::zeros(len, len);
    for row in 0..len {
        let idx = multi_index(space.n, space.k, row);
        for sigma in &space.permutations {
            m[(row, space.permuted(sigma, &idx))] += w;
        }
    }
    FlatOperator {
        n: space.n,
        k: space.k,
        matrix: m,
    }
}

pub fn space_dim(space: &TensorSpace) -> usize {
    sym_identity(space).matrix.trace().round() as usize
}

/// `‖Π t − t‖∞`.
pub fn membership_residual(space: &TensorSpace, t: &FlatTensor) -> Result<f64> {
    let s = space.symmetrize(t)?;
    Ok(s.max_abs_diff(t))
}

fn swap(k: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    for &(a, b) in pairs {
        p.swap(a, b);
    }
    p
}

pub const CATALOG_NAMES: [&str; 10] = [
    "sym2", "sym3", "ela2", "ela3", "major3", "v1", "v1bar", "v2", "v2bar", "high2",
];

fn poly(c: &[f64]) -> Vec<f64> {
    c.to_vec()
}

/// Catalog spaces with their generators and registered closed forms.
pub fn catalog_space(name: &str) -> Result<TensorSpace> {
    let lower = name.trim().to_ascii_lowercase();
    let block_swap = swap(6, &[(0, 3), (1, 4), (2, 5)]);
    let ela_gens = || vec![swap(4, &[(0, 1)]), swap(4, &[(2, 3)]), swap(4, &[(0, 2), (1, 3)])];
    let space = match lower.as_str() {
        // t² ∓ 1
        "sym2" => TensorSpace::new("sym2", 2, 2, vec![swap(2, &[(0, 1)])])?.with_closed_form(ClosedForm {
            proper: poly(&[-1.0, 0.0, 1.0]),
            improper: Some(poly(&[1.0, 0.0, 1.0])),
        }),
        // ½(t² + tr Q²) = t² − t
        "sym3" => TensorSpace::new("sym3", 3, 2, vec![swap(2, &[(0, 1)])])?.with_closed_form(ClosedForm {
            proper: poly(&[0.0, -1.0, 1.0]),
            improper: None,
        }),
        // t⁴ ∓ 3t² + 2
        "ela2" => TensorSpace::new("ela2", 2, 4, ela_gens())?.with_closed_form(ClosedForm {
            proper: poly(&[2.0, 0.0, -3.0, 0.0, 1.0]),
            improper: Some(poly(&[2.0, 0.0, 3.0, 0.0, 1.0])),
        }),
        // t⁴ − 3t³ + 2t² + t
        "ela3" => TensorSpace::new("ela3", 3, 4, ela_gens())?.with_closed_form(ClosedForm {
            proper: poly(&[0.0, 1.0, 2.0, -3.0, 1.0]),
            improper: None,
        }),
        // t⁴ − 2t³ + 2t²
        "major3" => TensorSpace::new("major3", 3, 4, vec![swap(4, &[(0, 2), (1, 3)])])?
            .with_closed_form(ClosedForm {
                proper: poly(&[0.0, 0.0, 2.0, -2.0, 1.0]),
                improper: None,
            }),
        // t⁵ − 2t⁴ + t³
        "v1" | "v1bar" => {
            let gens = if lower == "v1" {
                vec![swap(5, &[(1, 2)]), swap(5, &[(3, 4)])]
            } else {
                vec![swap(5, &[(0, 1)]), swap(5, &[(3, 4)])]
            };
            TensorSpace::new(lower.clone(), 3, 5, gens)?.with_closed_form(ClosedForm {
                proper: poly(&[0.0, 0.0, 0.0, 1.0, -2.0, 1.0]),
                improper: None,
            })
        }
        // t⁶ − 4t⁵ + 6t⁴ − 2t³ − 2t²
        "v2" | "v2bar" => {
            let gens = if lower == "v2" {
                vec![swap(6, &[(1, 2)]), swap(6, &[(4, 5)]), block_swap]
            } else {
                vec![swap(6, &[(0, 1)]), swap(6, &[(3, 4)]), block_swap]
            };
            TensorSpace::new(lower.clone(), 3, 6, gens)?.with_closed_form(ClosedForm {
                proper: poly(&[0.0, 0.0, -2.0, -2.0, 6.0, -4.0, 1.0]),
                improper: None,
            })
        }
        // t⁶ ∓ 3t⁴ + 6t² ∓ 4
        "high2" => TensorSpace::new("high2", 2, 6, vec![block_swap])?.with_closed_form(ClosedForm {
            proper: poly(&[-4.0, 0.0, 6.0, 0.0, -3.0, 0.0, 1.0]),
            improper: Some(poly(&[4.0, 0.0, 6.0, 0.0, 3.0, 0.0, 1.0])),
        }),
        _ => {
            return Err(Error::UnknownName {
                kind: "space",
                name: name.to_string(),
            })
        }
    };
    Ok(space)
}

/// Index of a 1-based digit string such as "2323" (helper for tests and docs).
pub fn flat_of_digits(n: usize, digits: &str) -> usize {
    let idx: Vec<usize> = digits
        .chars()
        .map(|c| c.to_digit(10).expect("digit") as usize - 1)
        .collect();
    flat_index(n, &idx)
}
