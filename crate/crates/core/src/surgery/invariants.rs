use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{
    real_power, ComplexApprox, PhaseQ, PhaseSum, Real, ToleranceByPrecision, DEFAULT_PRECISION,
};
use crate::intlinalg::{signature, IntMatrix, SymIntMatrix};
use crate::quadmod::{
    discriminant_module, quotient_gauss_sum, FiniteQuadraticModule, Provenance, DEFAULT_BUDGET,
};
use crate::{Error, Result};

use super::presentation::SurgeryPresentation;

/// How the RT colouring sum is enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// All of `G^m`.
    Direct,
    /// `|G|^ν` times the sum over `G^ρ` with `L_reg`.
    NullSeparated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    RtDirect,
    RtNullSeparated,
    CsTorsionForm,
}

impl From<Strategy> for Method {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Direct => Method::RtDirect,
            Strategy::NullSeparated => Method::RtNullSeparated,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::NullSeparated => "reduced",
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::RtDirect => "rt-direct",
            Method::RtNullSeparated => "rt-reduced",
            Method::CsTorsionForm => "cs-torsion",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub precision: u32,
    /// Maximum number of enumerated terms.
    pub budget: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            precision: DEFAULT_PRECISION,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl EvalOptions {
    pub fn with_precision(precision: u32) -> Self {
        EvalOptions {
            precision,
            ..Default::default()
        }
    }

    pub fn tolerance(&self) -> ToleranceByPrecision {
        ToleranceByPrecision::new(self.precision)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantMetadata {
    pub m: usize,
    pub rho: usize,
    pub nu: usize,
    pub sigma: i64,
    pub group_order: BigUint,
    pub method: Method,
    /// Terms actually enumerated.
    pub term_count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantValue {
    pub value: ComplexApprox,
    pub metadata: InvariantMetadata,
}

fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// `p_−/|G|^{1/2}`, the unit-modulus part of the negative Gauss sum.
///
/// Exact for discriminant modules (`e^{−πiσ(K)/4}`); evaluated from the Gauss
/// sum otherwise.
pub fn gauss_phase_minus(module: &FiniteQuadraticModule, precision: u32) -> Result<ComplexApprox> {
    match module.provenance() {
        Provenance::Lattice(data) => {
            Ok(PhaseQ::from_ratio(-signature(&data.k).sigma(), 4).eval(precision))
        }
        _ => {
            let order = rational(module.order());
            let inv_root = real_power(&order, &half(-1), precision)?;
            Ok(module.gauss_sum(-1, precision)?.mul_real(&inv_root))
        }
    }
}

/// `|G|^{−1/2}·p_+^{(−m−σ)/2}·p_−^{(−m+σ)/2}` written as
/// `|G|^{−(m+1)/2}·(p_−/|G|^{1/2})^σ`, which needs no branch choice.
pub fn rt_prefactor(
    module: &FiniteQuadraticModule,
    m: usize,
    sigma: i64,
    precision: u32,
) -> Result<ComplexApprox> {
    let order = rational(module.order());
    let modulus = real_power(&order, &half(-(m as i64) - 1), precision)?;
    let u = gauss_phase_minus(module, precision)?;
    Ok(u.powi(sigma).mul_real(&modulus))
}

/// Raw RT surgery scalar for an arbitrary finite quadratic module.
pub fn rt_raw_for_module(
    p: &SurgeryPresentation,
    module: &FiniteQuadraticModule,
    strategy: Strategy,
    opts: &EvalOptions,
) -> Result<InvariantValue> {
    let order = module.order();
    let (sum, term_count) = match strategy {
        Strategy::Direct => {
            let s = module.link_phase_sum(p.linking_matrix(), opts.budget)?;
            (s, order.pow(p.components() as u32))
        }
        Strategy::NullSeparated => {
            let s = module.link_phase_sum(p.l_reg(), opts.budget)?;
            let null = order.pow(p.nullity() as u32);
            (s.scaled(&null), order.pow(p.rank() as u32))
        }
    };
    let prefactor = rt_prefactor(module, p.components(), p.sigma(), opts.precision)?;
    Ok(InvariantValue {
        value: &prefactor * &sum.evaluate(opts.precision),
        metadata: InvariantMetadata {
            m: p.components(),
            rho: p.rank(),
            nu: p.nullity(),
            sigma: p.sigma(),
            group_order: order,
            method: strategy.into(),
            term_count,
        },
    })
}

/// `Z^{RT,raw}(M_L)` for the discriminant module of an even lattice `K`.
pub fn rt_raw_invariant(
    p: &SurgeryPresentation,
    k: &SymIntMatrix,
    strategy: Strategy,
    opts: &EvalOptions,
) -> Result<InvariantValue> {
    rt_raw_for_module(p, &discriminant_module(k)?, strategy, opts)
}

/// `Z^{CS,raw}(M_L) = |G|^{m_M}·|det L_reg|^{−n/2}·Σ e^{−πi·xᵀ(L_reg⁻¹⊗K)x}`, the
/// sum running over `Z^{ρn}/(L_reg⊗I_n)`.
pub fn cs_raw_invariant(
    p: &SurgeryPresentation,
    k: &SymIntMatrix,
    opts: &EvalOptions,
) -> Result<InvariantValue> {
    let module = discriminant_module(k)?;
    let n = k.dim();
    let rho = p.rank();
    let l_reg = p.l_reg();
    let det_reg = p.split().abs_det_reg();
    let (sum, term_count) = if rho == 0 {
        (PhaseSum::single(PhaseQ::zero()), BigUint::one())
    } else {
        let m = l_reg.matrix().kronecker(&IntMatrix::identity(n));
        let l_inv = l_reg
            .to_rational()
            .inverse()
            .expect("L_reg is nondegenerate");
        // reciprocity conjugates the phase on the reciprocal side
        let form = l_inv
            .kronecker(&k.to_rational())
            .scale(&-BigRational::one());
        let s = quotient_gauss_sum(&m, &form, opts.budget)?;
        let count = s.term_count();
        (s, count)
    };
    // |G|^{(ν−1)/2}·|det L_reg|^{−n/2} = (|G|^{ν−1} / |det L_reg|^n)^{1/2}
    let order = BigInt::from(module.order());
    let base = BigRational::new(
        order.pow(p.nullity() as u32),
        &order * det_reg.pow(n as u32),
    );
    let prefactor = real_power(&base, &half(1), opts.precision)?;
    Ok(InvariantValue {
        value: sum.evaluate(opts.precision).mul_real(&prefactor),
        metadata: InvariantMetadata {
            m: p.components(),
            rho,
            nu: p.nullity(),
            sigma: p.sigma(),
            group_order: module.order(),
            method: Method::CsTorsionForm,
            term_count,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub rt: InvariantValue,
    pub cs: InvariantValue,
    pub residual: Real,
    pub pass: bool,
}

/// Compares the RT and CS scalars of the same presentation.
pub fn verify_closed_equivalence(
    p: &SurgeryPresentation,
    k: &SymIntMatrix,
    strategy: Strategy,
    opts: &EvalOptions,
) -> Result<EquivalenceReport> {
    let rt = rt_raw_invariant(p, k, strategy, opts)?;
    let cs = cs_raw_invariant(p, k, opts)?;
    let residual = rt.value.dist(&cs.value);
    let pass = opts.tolerance().close(&rt.value, &cs.value);
    Ok(EquivalenceReport {
        rt,
        cs,
        residual,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityReport {
    /// `σ(A⊗K)`.
    pub sigma: i64,
    pub left: ComplexApprox,
    pub right: ComplexApprox,
    pub left_terms: BigUint,
    pub right_terms: BigUint,
    pub residual: Real,
    pub pass: bool,
}

/// Block reciprocity:
/// `Σ_{Z^{ρn}/(I⊗K)} e^{πi·xᵀ(A⊗K⁻¹)x}
///   = e^{πiσ(A⊗K)/4}·|G|^{ρ/2}·|det A|^{−n/2}·Σ_{Z^{ρn}/(A⊗I)} e^{πi·xᵀ(A⁻¹⊗K)x}`.
pub fn reciprocity_check(
    a: &SymIntMatrix,
    k: &SymIntMatrix,
    opts: &EvalOptions,
) -> Result<ReciprocityReport> {
    let module = discriminant_module(k)?;
    let det_a = a.det();
    if det_a.is_zero() {
        return Err(Error::Degenerate);
    }
    let (rho, n) = (a.dim(), k.dim());
    let a_rat = a.to_rational();
    let k_rat = k.to_rational();
    let a_inv = a_rat.inverse().expect("nonzero determinant");
    let k_inv = k_rat.inverse().expect("nonzero determinant");

    let left_lattice = IntMatrix::identity(rho).kronecker(k.matrix());
    let left_sum = quotient_gauss_sum(&left_lattice, &a_rat.kronecker(&k_inv), opts.budget)?;
    let right_lattice = a.matrix().kronecker(&IntMatrix::identity(n));
    let right_form = a_inv.kronecker(&k_rat).scale(&-BigRational::one());
    let right_sum = quotient_gauss_sum(&right_lattice, &right_form, opts.budget)?;

    let sigma = signature(&a.kronecker(k)).sigma();
    let order = BigInt::from(module.order());
    let base = BigRational::new(order.pow(rho as u32), det_a.abs().pow(n as u32));
    let modulus = real_power(&base, &half(1), opts.precision)?;
    let left = left_sum.evaluate(opts.precision);
    let right = (&PhaseQ::from_ratio(sigma, 4).eval(opts.precision)
        * &right_sum.evaluate(opts.precision))
        .mul_real(&modulus);
    let residual = left.dist(&right);
    let pass = opts.tolerance().close(&left, &right);
    Ok(ReciprocityReport {
        sigma,
        left,
        right,
        left_terms: left_sum.term_count(),
        right_terms: right_sum.term_count(),
        residual,
        pass,
    })
}

/// Measure used on `G` in the Haar-normalized functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaarMeasure {
    /// Counting measure: `α_± = p_±`.
    Counting,
    /// Probability measure: `α_± = p_±/|G|` and the colouring sum carries `|G|^{−m}`.
    Probability,
}

/// `τ(M_L) = α_+^{−m_+}·α_−^{−m_−}·∫_{G^m} e^{πi·aᵀ(L⊗Q)a}`.
pub fn haar_functional(
    module: &FiniteQuadraticModule,
    p: &SurgeryPresentation,
    measure: HaarMeasure,
    opts: &EvalOptions,
) -> Result<ComplexApprox> {
    let prec = opts.precision;
    let order = rational(module.order());
    let (mut alpha_plus, mut alpha_minus) =
        (module.gauss_sum(1, prec)?, module.gauss_sum(-1, prec)?);
    let mut sum = module
        .link_phase_sum(p.linking_matrix(), opts.budget)?
        .evaluate(prec);
    if measure == HaarMeasure::Probability {
        let inv = real_power(&order, &rational(-1), prec)?;
        alpha_plus = alpha_plus.mul_real(&inv);
        alpha_minus = alpha_minus.mul_real(&inv);
        let m = p.components() as i64;
        sum = sum.mul_real(&real_power(&order, &rational(-m), prec)?);
    }
    let tol = opts.tolerance();
    let zero = Real::zero(prec);
    if tol.accepts(&alpha_plus.abs(), &zero) || tol.accepts(&alpha_minus.abs(), &zero) {
        return Err(Error::VanishingGaussFactor);
    }
    let t = p.signature_triple();
    let factor = &alpha_plus.powi(-(t.n_plus as i64)) * &alpha_minus.powi(-(t.n_minus as i64));
    Ok(&factor * &sum)
}

/// Power of `|G|` relating the functional to the RT scalar:
/// `Z^{RT,raw} = |G|^e·τ` with `e = −(b1+1)/2` (counting) or `(b1−1)/2`
/// (probability).
pub fn haar_rt_exponent(measure: HaarMeasure, b1: usize) -> BigRational {
    let b1 = b1 as i64;
    match measure {
        HaarMeasure::Counting => half(-b1 - 1),
        HaarMeasure::Probability => half(b1 - 1),
    }
}

/// Prediction of the RT scalar from the functional.
pub fn rt_from_haar(
    tau: &ComplexApprox,
    module: &FiniteQuadraticModule,
    measure: HaarMeasure,
    b1: usize,
    precision: u32,
) -> Result<ComplexApprox> {
    let scale = real_power(
        &rational(module.order()),
        &haar_rt_exponent(measure, b1),
        precision,
    )?;
    Ok(tau.mul_real(&scale))
}

/// Number of terms the direct RT enumeration would need.
pub fn direct_term_count(p: &SurgeryPresentation, module: &FiniteQuadraticModule) -> BigUint {
    module.order().pow(p.components() as u32)
}
