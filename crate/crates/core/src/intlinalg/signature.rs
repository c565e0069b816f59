use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{RatMatrix, SymIntMatrix};

/// Inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignatureTriple {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureTriple {
    pub fn sigma(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

pub fn signature(m: &SymIntMatrix) -> SignatureTriple {
    signature_rational(&m.to_rational())
}

/// Inertia by congruence diagonalization over the rationals.
///
/// When every remaining diagonal entry vanishes but some off-diagonal entry
/// `a_ij` does not, the basis vector `e_i` is replaced by `e_i + e_j`, which
/// produces the nonzero diagonal entry `2·a_ij`.
pub fn signature_rational(m: &RatMatrix) -> SignatureTriple {
    assert!(m.is_symmetric(), "signature of a non-symmetric matrix");
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = m.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = SignatureTriple::default();

    while !active.is_empty() {
        let pivot = active.iter().position(|&i| !a[i][i].is_zero());
        let Some(pos) = pivot else {
            let pair = active.iter().enumerate().find_map(|(x, &i)| {
                active[x + 1..]
                    .iter()
                    .find(|&&j| !a[i][j].is_zero())
                    .map(|&j| (i, j))
            });
            match pair {
                Some((i, j)) => {
                    for &k in &active {
                        let v = a[j][k].clone();
                        a[i][k] += v;
                    }
                    for &k in &active {
                        let v = a[k][j].clone();
                        a[k][i] += v;
                    }
                    continue;
                }
                None => {
                    out.n_zero += active.len();
                    break;
                }
            }
        };
        let p = active.remove(pos);
        let piv = a[p][p].clone();
        if piv.is_positive() {
            out.n_plus += 1;
        } else {
            out.n_minus += 1;
        }
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &piv;
            for &j in &active {
                let v = &f * &a[p][j];
                a[i][j] -= v;
            }
        }
        for &i in &active {
            a[i][p] = BigRational::zero();
            a[p][i] = BigRational::zero();
        }
    }
    out
}
