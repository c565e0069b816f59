use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::intlinalg::{signature, signature_rational, RatMatrix, SymIntMatrix};
use crate::{Error, Result};

/// `ω = [[0, I_d], [−I_d, 0]]` on `Q^{2d}`.
pub fn standard_symplectic(d: usize) -> RatMatrix {
    RatMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if i < d && j == i + d {
            BigRational::one()
        } else if i >= d && j + d == i {
            -BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// Three Lagrangian subspaces of `(Q^{2d}, ω)`, each stored as a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianTriple {
    omega: RatMatrix,
    bases: [RatMatrix; 3],
}

fn check_symplectic(omega: &RatMatrix) -> Result<usize> {
    let n = omega.rows();
    if omega.cols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: omega.cols(),
        });
    }
    if omega != &omega.transpose().scale(&-BigRational::one()) {
        return Err(Error::NotLagrangian("form is not antisymmetric".into()));
    }
    if n % 2 != 0 || omega.rank() != n {
        return Err(Error::NotLagrangian("form is degenerate".into()));
    }
    Ok(n / 2)
}

/// Extracts a basis from a spanning set and checks it is Lagrangian.
pub fn lagrangian_basis(omega: &RatMatrix, span: &[Vec<BigRational>]) -> Result<RatMatrix> {
    let d = check_symplectic(omega)?;
    let n = 2 * d;
    if let Some(v) = span.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let mut chosen: Vec<Vec<BigRational>> = Vec::new();
    for v in span {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if RatMatrix::from_rows(&trial)?.rank() == trial.len() {
            chosen = trial;
        }
    }
    if chosen.len() != d {
        return Err(Error::NotLagrangian(format!(
            "span has dimension {}, expected {d}",
            chosen.len()
        )));
    }
    let basis = RatMatrix::from_rows(&chosen)?.transpose();
    if !(&(&basis.transpose() * omega) * &basis).is_zero() {
        return Err(Error::NotLagrangian("subspace is not isotropic".into()));
    }
    Ok(basis)
}

impl LagrangianTriple {
    pub fn new(omega: RatMatrix, spans: [&[Vec<BigRational>]; 3]) -> Result<Self> {
        let b0 = lagrangian_basis(&omega, spans[0])?;
        let b1 = lagrangian_basis(&omega, spans[1])?;
        let b2 = lagrangian_basis(&omega, spans[2])?;
        Ok(LagrangianTriple {
            omega,
            bases: [b0, b1, b2],
        })
    }

    /// The triple `(L_{π(0)}, L_{π(1)}, L_{π(2)})`.
    pub fn permuted(&self, perm: [usize; 3]) -> LagrangianTriple {
        LagrangianTriple {
            omega: self.omega.clone(),
            bases: perm.map(|i| self.bases[i].clone()),
        }
    }

    pub fn omega(&self) -> &RatMatrix {
        &self.omega
    }

    pub fn half_dimension(&self) -> usize {
        self.omega.rows() / 2
    }

    /// Gram matrix (up to a factor 2) of the Wall form on `L₁⊕L₂⊕L₃`.
    pub fn wall_form(&self) -> RatMatrix {
        let d = self.half_dimension();
        let pair =
            |a: usize, b: usize| &(&self.bases[a].transpose() * &self.omega) * &self.bases[b];
        let blocks = [pair(0, 1), pair(1, 2), pair(2, 0)];
        let mut out = RatMatrix::zeros(3 * d, 3 * d);
        for (s, block) in blocks.iter().enumerate() {
            let (a, b) = (s, (s + 1) % 3);
            for i in 0..d {
                for j in 0..d {
                    out[(a * d + i, b * d + j)] = block[(i, j)].clone();
                    out[(b * d + j, a * d + i)] = block[(i, j)].clone();
                }
            }
        }
        out
    }
}

/// Signature of `B(x₁,x₂,x₃) = ω(x₁,x₂) + ω(x₂,x₃) + ω(x₃,x₁)`.
pub fn maslov_index(t: &LagrangianTriple) -> i64 {
    signature_rational(&t.wall_form()).sigma()
}

/// `μ_K = σ(K)·μ`.
pub fn toral_maslov_index(t: &LagrangianTriple, k: &SymIntMatrix) -> i64 {
    signature(k).sigma() * maslov_index(t)
}

/// `μ(L₁,L₂,L₃) − μ(L₁,L₂,L₄) + μ(L₁,L₃,L₄) − μ(L₂,L₃,L₄)`.
pub fn maslov_cocycle_defect(omega: &RatMatrix, spans: [&[Vec<BigRational>]; 4]) -> Result<i64> {
    let mu = |a: usize, b: usize, c: usize| -> Result<i64> {
        Ok(maslov_index(&LagrangianTriple::new(
            omega.clone(),
            [spans[a], spans[b], spans[c]],
        )?))
    };
    Ok(mu(0, 1, 2)? - mu(0, 1, 3)? + mu(0, 2, 3)? - mu(1, 2, 3)?)
}
