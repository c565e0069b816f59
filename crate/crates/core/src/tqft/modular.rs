use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::exactnum::{real_power, ComplexApprox, PhaseQ, Real, ToleranceByPrecision};
use crate::intlinalg::{signature, SymIntMatrix};
use crate::quadmod::{discriminant_module, FiniteQuadraticModule, GroupElement, Provenance};
use crate::Result;

/// Genus-`g` state space with basis indexed by `G^g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    pub genus: usize,
    pub divisors: Vec<u64>,
}

impl StateSpace {
    pub fn new(module: &FiniteQuadraticModule, genus: usize) -> Self {
        StateSpace {
            genus,
            divisors: module.divisors().to_vec(),
        }
    }

    pub fn dimension(&self) -> BigUint {
        let order: BigUint = self.divisors.iter().map(|&d| BigUint::from(d)).product();
        order.pow(self.genus as u32)
    }

    /// Basis labels in odometer order, last handle fastest.
    pub fn labels(&self, module: &FiniteQuadraticModule) -> Vec<Vec<GroupElement>> {
        let mut out: Vec<Vec<GroupElement>> = vec![vec![]];
        for _ in 0..self.genus {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    module.elements().map(move |a| {
                        let mut v = prefix.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

/// `|det K|^g`, the dimension of the genus-`g` state space.
pub fn genus_g_dimension(k: &SymIntMatrix, g: usize) -> Result<BigUint> {
    Ok(StateSpace::new(&discriminant_module(k)?, g).dimension())
}

/// Cylinder scalar `|det K|^{g/2}` of `Σ_g × I`.
pub fn cylinder_scalar(k: &SymIntMatrix, g: usize, precision: u32) -> Result<ComplexApprox> {
    let order = BigRational::from_integer(BigInt::from(discriminant_module(k)?.order()));
    let exponent = BigRational::new(BigInt::from(g), BigInt::from(2));
    Ok(ComplexApprox::from_real(real_power(
        &order, &exponent, precision,
    )?))
}

/// Square complex matrix indexed by group elements in odometer order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    n: usize,
    entries: Vec<ComplexApprox>,
    precision: u32,
}

impl OperatorMatrix {
    pub fn from_fn(
        n: usize,
        precision: u32,
        mut f: impl FnMut(usize, usize) -> ComplexApprox,
    ) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        OperatorMatrix {
            n,
            entries,
            precision,
        }
    }

    pub fn identity(n: usize, precision: u32) -> Self {
        OperatorMatrix::from_fn(n, precision, |i, j| {
            if i == j {
                ComplexApprox::one(precision)
            } else {
                ComplexApprox::zero(precision)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexApprox {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ComplexApprox]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix::from_fn(self.n, self.precision, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        OperatorMatrix::from_fn(self.n, self.precision, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, z: &ComplexApprox) -> Self {
        OperatorMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * z).collect(),
            precision: self.precision,
        }
    }

    /// Largest entrywise distance.
    pub fn max_dist(&self, other: &OperatorMatrix) -> Real {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.dist(b))
            .fold(Real::zero(self.precision), Real::max)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        OperatorMatrix::from_fn(n, self.precision.min(rhs.precision), |i, j| {
            (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
        })
    }
}

/// `S[a][b] = |G|^{−1/2}·e^{−πi·b(a,b)}`.
///
/// The conjugated bicharacter is what makes `(ST)³` come out as
/// `e^{πiσ/4}·S²` with `T = diag q(a)`.
pub fn s_matrix(module: &FiniteQuadraticModule, precision: u32) -> Result<OperatorMatrix> {
    let elems: Vec<GroupElement> = module.elements().collect();
    let order = BigRational::from_integer(BigInt::from(module.order()));
    let norm = real_power(&order, &BigRational::new((-1).into(), 2.into()), precision)?;
    let mut phases = Vec::with_capacity(elems.len() * elems.len());
    for a in &elems {
        for b in &elems {
            phases.push(module.bicharacter(a, b)?);
        }
    }
    let n = elems.len();
    Ok(OperatorMatrix::from_fn(n, precision, |i, j| {
        (-&phases[i * n + j]).eval(precision).mul_real(&norm)
    }))
}

/// `T = diag(q(a))`.
pub fn t_matrix(module: &FiniteQuadraticModule, precision: u32) -> Result<OperatorMatrix> {
    let q: Vec<PhaseQ> = module
        .elements()
        .map(|a| module.q_value(&a))
        .collect::<Result<_>>()?;
    Ok(OperatorMatrix::from_fn(q.len(), precision, |i, j| {
        if i == j {
            q[i].eval(precision)
        } else {
            ComplexApprox::zero(precision)
        }
    }))
}

/// Permutation matrix of `a ↦ −a`.
pub fn charge_conjugation(module: &FiniteQuadraticModule, precision: u32) -> OperatorMatrix {
    let neg: Vec<usize> = module
        .elements()
        .map(|a| module.index_of(&module.neg(&a)))
        .collect();
    OperatorMatrix::from_fn(neg.len(), precision, |i, j| {
        if neg[i] == j {
            ComplexApprox::one(precision)
        } else {
            ComplexApprox::zero(precision)
        }
    })
}

/// Hopf-link pairing of colours `a` and `b`: the bicharacter exponent.
pub fn hopf_pairing(
    module: &FiniteQuadraticModule,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<PhaseQ> {
    module.bicharacter(a, b)
}

/// Phase `p_+/|G|^{1/2}`; equal to `e^{πiσ(K)/4}` for discriminant modules.
pub fn central_charge_phase(
    module: &FiniteQuadraticModule,
    precision: u32,
) -> Result<ComplexApprox> {
    match module.provenance() {
        Provenance::Lattice(data) => {
            Ok(PhaseQ::from_ratio(signature(&data.k).sigma(), 4).eval(precision))
        }
        _ => {
            let order = BigRational::from_integer(BigInt::from(module.order()));
            let inv_root = real_power(&order, &BigRational::new((-1).into(), 2.into()), precision)?;
            Ok(module.gauss_sum(1, precision)?.mul_real(&inv_root))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularReport {
    pub s: OperatorMatrix,
    pub t: OperatorMatrix,
    /// `max |S·S† − I|`.
    pub unitarity_residual: Real,
    /// `max |S² − C|`.
    pub charge_residual: Real,
    /// `max |(ST)³ − ζ·S²|`.
    pub st_cubed_residual: Real,
    pub phase: ComplexApprox,
    pub symmetric: bool,
    pub pass: bool,
}

pub fn modular_relations_check(
    module: &FiniteQuadraticModule,
    precision: u32,
) -> Result<ModularReport> {
    let s = s_matrix(module, precision)?;
    let t = t_matrix(module, precision)?;
    let n = s.dim();
    let id = OperatorMatrix::identity(n, precision);
    let unitarity_residual = (&s * &s.adjoint()).max_dist(&id);
    let s2 = &s * &s;
    let charge_residual = s2.max_dist(&charge_conjugation(module, precision));
    let st = &s * &t;
    let st3 = &(&st * &st) * &st;
    let phase = central_charge_phase(module, precision)?;
    let st_cubed_residual = st3.max_dist(&s2.scale(&phase));
    let symmetric = s == s.transpose();
    let tol = ToleranceByPrecision::new(precision);
    let one = Real::one(precision);
    let pass = symmetric
        && [&unitarity_residual, &charge_residual, &st_cubed_residual]
            .iter()
            .all(|r| tol.accepts(r, &one));
    Ok(ModularReport {
        s,
        t,
        unitarity_residual,
        charge_residual,
        st_cubed_residual,
        phase,
        symmetric,
        pass,
    })
}
