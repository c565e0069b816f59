use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enumerate::{box_gauss_sum, box_size, check_budget};
use crate::exactnum::{ComplexApprox, PhaseQ, PhaseSum};
use crate::intlinalg::{is_even, smith_normal_form, IntMatrix, RatMatrix, SymIntMatrix};
use crate::{Error, Result};

/// Default cap on the number of terms in any enumerated sum.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Element of `Z/d_1 × … × Z/d_r`, coordinate `i` reduced mod `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Data tying a discriminant module back to its lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDiscriminantData {
    pub k: SymIntMatrix,
    pub k_inverse: RatMatrix,
    /// Columns send SNF coordinates of `G_K` to representatives in `Z^n`.
    pub lift_map: IntMatrix,
    /// Rows send `Z^n` to SNF coordinates (reduce mod the divisors).
    pub reduce_map: IntMatrix,
    pub order: BigInt,
}

impl LatticeDiscriminantData {
    pub fn lift(&self, a: &GroupElement) -> Vec<BigInt> {
        self.lift_map.apply(&a.to_bigints())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Lattice(Box<LatticeDiscriminantData>),
    Cyclic(u64),
    UserSpecified,
}

/// Finite abelian group `⊕ Z/d_i` with quadratic form `q(x) = xᵀQx mod 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticModule {
    divisors: Vec<u64>,
    q_gram: RatMatrix,
    provenance: Provenance,
}

impl FiniteQuadraticModule {
    /// Validated construction. Trivial factors (`d_i = 1`) are dropped together
    /// with the matching rows and columns of `q_gram`.
    pub fn new(divisors: Vec<u64>, q_gram: RatMatrix) -> Result<Self> {
        FiniteQuadraticModule::with_provenance(divisors, q_gram, Provenance::UserSpecified)
    }

    fn with_provenance(
        divisors: Vec<u64>,
        q_gram: RatMatrix,
        provenance: Provenance,
    ) -> Result<Self> {
        let r = divisors.len();
        if q_gram.rows() != r || q_gram.cols() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: q_gram.rows(),
            });
        }
        if !q_gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if divisors.iter().any(|&d| d == 0) {
            return Err(Error::InvalidDivisors("divisors must be at least 1".into()));
        }
        let keep: Vec<usize> = (0..r).filter(|&i| divisors[i] > 1).collect();
        let divisors: Vec<u64> = keep.iter().map(|&i| divisors[i]).collect();
        if let Some(w) = divisors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidDivisors(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
        let q_gram = RatMatrix::from_fn(keep.len(), keep.len(), |i, j| {
            q_gram[(keep[i], keep[j])].clone()
        });
        let module = FiniteQuadraticModule {
            divisors,
            q_gram,
            provenance,
        };
        module.check_well_defined()?;
        let radical = module.nondegeneracy_radical();
        if !radical.is_empty() {
            return Err(Error::DegenerateModule(radical.len()));
        }
        Ok(module)
    }

    // shifting x_i by d_i changes xᵀQx by 2·d_i·(Qx)_i + d_i²·Q_ii
    fn check_well_defined(&self) -> Result<()> {
        let two = BigRational::from_integer(BigInt::from(2));
        for (i, &d) in self.divisors.iter().enumerate() {
            let d = BigRational::from_integer(BigInt::from(d));
            for j in 0..self.rank() {
                if !(&d * &self.q_gram[(i, j)]).is_integer() {
                    return Err(Error::IllDefinedForm(format!(
                        "d_{i}·Q[{i}][{j}] is not integral"
                    )));
                }
            }
            let diag = &d * &d * &self.q_gram[(i, i)] / &two;
            if !diag.is_integer() {
                return Err(Error::IllDefinedForm(format!(
                    "d_{i}²·Q[{i}][{i}] is not even"
                )));
            }
        }
        Ok(())
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn q_gram(&self) -> &RatMatrix {
        &self.q_gram
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn lattice(&self) -> Option<&LatticeDiscriminantData> {
        match &self.provenance {
            Provenance::Lattice(data) => Some(data),
            _ => None,
        }
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn order(&self) -> BigUint {
        box_size(&self.divisors)
    }

    pub fn order_u64(&self) -> Result<u64> {
        self.order()
            .to_u64()
            .ok_or_else(|| Error::TooLarge(format!("group order {}", self.order())))
    }

    /// Exponent of the group (the largest divisor).
    pub fn exponent(&self) -> u64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        self.validate(&GroupElement(coords.clone()))?;
        Ok(GroupElement(coords))
    }

    pub fn validate(&self, a: &GroupElement) -> Result<()> {
        if a.0.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: a.0.len(),
            });
        }
        for (i, (&x, &d)) in a.0.iter().zip(&self.divisors).enumerate() {
            if x >= d {
                return Err(Error::CoordinateOutOfRange {
                    index: i,
                    value: x,
                    divisor: d,
                });
            }
        }
        Ok(())
    }

    /// Elements in odometer order, last coordinate fastest.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            divisors: &self.divisors,
            next: Some(vec![0; self.rank()]),
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.divisors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.divisors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn scalar_mul(&self, n: u64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.divisors)
                .map(|(&x, &d)| ((x as u128 * n as u128) % d as u128) as u64)
                .collect(),
        )
    }

    /// Position of an element in the enumeration order.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.0.iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn q_value(&self, a: &GroupElement) -> Result<PhaseQ> {
        self.validate(a)?;
        Ok(PhaseQ::new(self.q_gram.quadratic_value(&a.to_bigints())))
    }

    /// `b(a, b) = q(a+b) − q(a) − q(b) = 2·aᵀQb mod 2`.
    pub fn bicharacter(&self, a: &GroupElement, b: &GroupElement) -> Result<PhaseQ> {
        self.validate(a)?;
        self.validate(b)?;
        let v = self.q_gram.bilinear_value(&a.to_bigints(), &b.to_bigints());
        Ok(PhaseQ::new(v * BigRational::from_integer(BigInt::from(2))))
    }

    /// Exact `Σ_x q(x)^{±1}`.
    pub fn gauss_phase_sum(&self, sign: i32, budget: u64) -> Result<PhaseSum> {
        let s = box_gauss_sum(&self.divisors, &self.q_gram, budget)?;
        Ok(if sign < 0 { s.conj() } else { s })
    }

    /// `p_±` evaluated at the given precision.
    pub fn gauss_sum(&self, sign: i32, precision: u32) -> Result<ComplexApprox> {
        Ok(self
            .gauss_phase_sum(sign, DEFAULT_BUDGET)?
            .evaluate(precision))
    }

    /// Elements `x` with `b(x, y) = 0` for all `y`, found by exhaustive scan.
    ///
    /// Bilinearity reduces the test to the generators: `x` is in the radical
    /// iff `(Qx)_j` is an integer for every `j`.
    pub fn nondegeneracy_radical(&self) -> Vec<GroupElement> {
        let r = self.rank();
        let den = self.q_gram.common_denominator();
        let scaled: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (&self.q_gram[(i, j)] * BigRational::from_integer(den.clone()))
                            .to_integer()
                            .mod_floor(&den)
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for x in self.elements() {
            let in_radical = (0..r).all(|j| {
                let s: BigInt = (0..r).map(|i| &scaled[j][i] * BigInt::from(x.0[i])).sum();
                s.is_multiple_of(&den)
            });
            if in_radical {
                out.push(x);
            }
        }
        // the zero element is always in the radical; only report nontrivial ones
        if out.len() == 1 {
            out.clear();
        }
        out
    }

    /// Exact Gauss sum of the form scaled by an integer `p`: `Σ_x q(x)^p`.
    pub fn power_gauss_sum(&self, p: i64, budget: u64) -> Result<PhaseSum> {
        let form = self
            .q_gram
            .scale(&BigRational::from_integer(BigInt::from(p)));
        box_gauss_sum(&self.divisors, &form, budget)
    }

    /// Sum over `G^m` of `e^{iπ·aᵀ(L⊗Q)a}`: the colored surgery link evaluation.
    pub fn link_phase_sum(&self, l: &SymIntMatrix, budget: u64) -> Result<PhaseSum> {
        let m = l.dim();
        let radices: Vec<u64> = (0..m).flat_map(|_| self.divisors.iter().copied()).collect();
        check_budget(&box_size(&radices), budget)?;
        let form = l.to_rational().kronecker(&self.q_gram);
        box_gauss_sum(&radices, &form, budget)
    }
}

pub struct Elements<'a> {
    divisors: &'a [u64],
    next: Option<Vec<u64>>,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut t = nxt.len();
        let mut done = true;
        while t > 0 {
            t -= 1;
            nxt[t] += 1;
            if nxt[t] < self.divisors[t] {
                done = false;
                break;
            }
            nxt[t] = 0;
        }
        if !done {
            self.next = Some(nxt);
        }
        Some(GroupElement(cur))
    }
}

/// `(G_K, q_K)` for an even nondegenerate lattice `K`, with `G_K = Z^n / K·Z^n`
/// and `q_K([x]) = xᵀK⁻¹x mod 2`.
pub fn discriminant_module(k: &SymIntMatrix) -> Result<FiniteQuadraticModule> {
    if let Some(index) = (0..k.dim()).find(|&i| k[(i, i)].is_odd()) {
        return Err(Error::OddLattice { index });
    }
    debug_assert!(is_even(k));
    let det = k.det();
    if det.is_zero() {
        return Err(Error::Degenerate);
    }
    let k_inverse = k.to_rational().inverse().expect("nonzero determinant");
    let snf = smith_normal_form(k.matrix());
    let diag = snf.diagonal();
    let keep: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
    let divisors = keep
        .iter()
        .map(|&i| {
            diag[i]
                .to_u64()
                .ok_or_else(|| Error::TooLarge(format!("elementary divisor {}", diag[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    let u_inv = snf
        .u
        .unimodular_inverse()
        .expect("SNF transform is unimodular");
    let lift_map = u_inv.select_columns(&keep);
    let reduce_map = IntMatrix::from_fn(keep.len(), k.dim(), |i, j| snf.u[(keep[i], j)].clone());
    let q_gram = k_inverse.congruent(&lift_map);
    let data = LatticeDiscriminantData {
        k: k.clone(),
        k_inverse,
        lift_map,
        reduce_map,
        order: det.abs(),
    };
    FiniteQuadraticModule::with_provenance(divisors, q_gram, Provenance::Lattice(Box::new(data)))
}

/// `(Z/k, x²/k)` for even `k > 0`.
pub fn cyclic_module(k: i64) -> Result<FiniteQuadraticModule> {
    if k <= 0 || k % 2 != 0 {
        return Err(Error::InvalidCyclicLevel(k));
    }
    let q = RatMatrix::from_fn(1, 1, |_, _| {
        BigRational::new(BigInt::one(), BigInt::from(k))
    });
    FiniteQuadraticModule::with_provenance(vec![k as u64], q, Provenance::Cyclic(k as u64))
}

impl LatticeDiscriminantData {
    /// Class of a lattice vector in SNF coordinates.
    pub fn reduce(&self, x: &[BigInt], divisors: &[u64]) -> GroupElement {
        let y = self.reduce_map.apply(x);
        GroupElement(
            y.iter()
                .zip(divisors)
                .map(|(v, &d)| v.mod_floor(&BigInt::from(d)).to_u64().unwrap())
                .collect(),
        )
    }
}

impl fmt::Display for FiniteQuadraticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G = ")?;
        if self.divisors.is_empty() {
            write!(f, "0")?;
        }
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        write!(f, ", Q = {}", self.q_gram)
    }
}

pub(crate) fn abs_det(k: &SymIntMatrix) -> BigInt {
    k.det().abs()
}
