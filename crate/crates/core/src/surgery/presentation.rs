use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactnum::PhaseQ;
use crate::intlinalg::{
    block_split, signature, smith_normal_form, BlockSplit, IntMatrix, SignatureTriple, SymIntMatrix,
};
use crate::quadmod::{FiniteQuadraticModule, GroupElement};
use crate::{Error, Result};

/// A linking matrix together with its block split and signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPresentation {
    l: SymIntMatrix,
    split: BlockSplit,
    signature: SignatureTriple,
}

impl SurgeryPresentation {
    pub fn new(l: SymIntMatrix) -> Self {
        let split = block_split(&l);
        let signature = signature(&l);
        SurgeryPresentation {
            l,
            split,
            signature,
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        Ok(SurgeryPresentation::new(SymIntMatrix::from_rows(rows)?))
    }

    /// The empty link, presenting `S³`.
    pub fn empty() -> Self {
        SurgeryPresentation::new(SymIntMatrix::empty())
    }

    pub fn linking_matrix(&self) -> &SymIntMatrix {
        &self.l
    }

    pub fn split(&self) -> &BlockSplit {
        &self.split
    }

    pub fn l_reg(&self) -> &SymIntMatrix {
        &self.split.l_reg
    }

    pub fn signature_triple(&self) -> SignatureTriple {
        self.signature
    }

    pub fn components(&self) -> usize {
        self.l.dim()
    }

    pub fn rank(&self) -> usize {
        self.split.rank
    }

    pub fn nullity(&self) -> usize {
        self.split.nullity
    }

    pub fn sigma(&self) -> i64 {
        self.signature.sigma()
    }

    /// Orientation reversal `L ↦ −L`.
    pub fn mirror(&self) -> SurgeryPresentation {
        SurgeryPresentation::new(self.l.neg())
    }
}

/// First homology of the surgered manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub b1: usize,
    /// Nontrivial elementary divisors of `L_reg`.
    pub torsion_divisors: Vec<BigInt>,
    pub torsion_order: BigInt,
    /// `(b1 − 1)/2`.
    pub m_m: BigRational,
}

pub fn homology(p: &SurgeryPresentation) -> HomologySummary {
    let torsion_divisors: Vec<BigInt> = smith_normal_form(p.l_reg().matrix())
        .elementary_divisors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    let b1 = p.nullity();
    HomologySummary {
        b1,
        torsion_order: p.split.abs_det_reg(),
        torsion_divisors,
        m_m: BigRational::new(BigInt::from(b1 as i64 - 1), BigInt::from(2)),
    }
}

/// Exponent of `e^{2πi·Q_{L,K}(a)}` for a coloring `a ∈ G^m`, i.e.
/// `Σ_{ij} L_ij·aᵢᵀQaⱼ mod 2`.
pub fn q_lk(
    l: &SymIntMatrix,
    module: &FiniteQuadraticModule,
    coloring: &[GroupElement],
) -> Result<PhaseQ> {
    if coloring.len() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: coloring.len(),
        });
    }
    for a in coloring {
        module.validate(a)?;
    }
    let flat: Vec<BigInt> = coloring.iter().flat_map(|a| a.to_bigints()).collect();
    let form = l.to_rational().kronecker(module.q_gram());
    Ok(PhaseQ::new(form.quadratic_value(&flat)))
}

/// Same exponent from explicit lattice lifts `xᵢ ∈ Z^n`: `xᵀ(L⊗K⁻¹)x mod 2`.
pub fn q_lk_from_lifts(
    l: &SymIntMatrix,
    k: &SymIntMatrix,
    lifts: &[Vec<BigInt>],
) -> Result<PhaseQ> {
    if lifts.len() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: lifts.len(),
        });
    }
    if let Some(x) = lifts.iter().find(|x| x.len() != k.dim()) {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: x.len(),
        });
    }
    let k_inv = k.to_rational().inverse().ok_or(Error::Degenerate)?;
    let flat: Vec<BigInt> = lifts.iter().flatten().cloned().collect();
    Ok(PhaseQ::new(
        l.to_rational().kronecker(&k_inv).quadratic_value(&flat),
    ))
}

/// First Kirby move: `L ⊕ [±1]`.
pub fn kirby_stabilize(p: &SurgeryPresentation, sign: i32) -> SurgeryPresentation {
    let s = if sign < 0 { -1 } else { 1 };
    let unknot = SymIntMatrix::from_rows(&[vec![s]]).expect("1x1 is symmetric");
    SurgeryPresentation::new(p.l.direct_sum(&unknot))
}

/// Slides component `i` over component `j`: `L' = EᵀLE` with `E = I + ε·e_j e_iᵀ`.
pub fn kirby_slide(
    p: &SurgeryPresentation,
    i: usize,
    j: usize,
    epsilon: i32,
) -> Result<SurgeryPresentation> {
    let m = p.components();
    for index in [i, j] {
        if index >= m {
            return Err(Error::IndexOutOfRange { index, len: m });
        }
    }
    if i == j {
        return Err(Error::SlideOnSelf(i));
    }
    let mut e = IntMatrix::identity(m);
    e[(j, i)] = BigInt::from(epsilon.signum());
    Ok(SurgeryPresentation::new(p.l.congruent(&e)))
}
