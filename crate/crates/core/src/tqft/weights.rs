use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exactnum::{real_power, ComplexApprox, PhaseQ, Real, ToleranceByPrecision};
use crate::intlinalg::{signature, SymIntMatrix};
use crate::quadmod::{discriminant_module, kappa_phase, DEFAULT_BUDGET};
use crate::surgery::{rt_raw_invariant, EvalOptions, Strategy, SurgeryPresentation};
use crate::{Error, Result};

/// A raw closed scalar together with its extended weight and the corrected value
/// `κ(K)^{−n}·raw`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedScalar {
    pub raw: ComplexApprox,
    pub weight: i64,
    pub sigma_k: i64,
    pub corrected: ComplexApprox,
}

impl ExtendedScalar {
    /// Applies a further weight shift.
    pub fn shift(&self, n: i64, precision: u32) -> ExtendedScalar {
        let corrected = &self.corrected
            * &kappa_phase(self.sigma_k)
                .times(&BigInt::from(-n))
                .eval(precision);
        ExtendedScalar {
            raw: self.raw.clone(),
            weight: self.weight + n,
            sigma_k: self.sigma_k,
            corrected,
        }
    }
}

pub fn extended_correct(
    raw: &ComplexApprox,
    n: i64,
    k: &SymIntMatrix,
    precision: u32,
) -> Result<ExtendedScalar> {
    discriminant_module(k)?;
    let sigma_k = signature(k).sigma();
    let factor = kappa_phase(sigma_k)
        .times(&BigInt::from(-n))
        .eval(precision);
    Ok(ExtendedScalar {
        raw: raw.clone(),
        weight: n,
        sigma_k,
        corrected: raw * &factor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    /// `n = σ(L_reg)`.
    pub weight: i64,
    pub sigma_k: i64,
    /// `σ(L_reg⊗K)`, from the Kronecker product itself.
    pub sigma_product: i64,
    pub value: ComplexApprox,
    pub residual: Real,
    pub pass: bool,
}

/// Checks `κ(K)^{−σ(L_reg)}·e^{−πiσ(L_reg⊗K)/4} = 1`, with `κ` taken from the
/// normalized Gauss sum `|G|^{−1/2}·p_−`.
pub fn closure_weight_consistency(
    l_reg: &SymIntMatrix,
    k: &SymIntMatrix,
    precision: u32,
) -> Result<WeightReport> {
    if l_reg.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let module = discriminant_module(k)?;
    let weight = signature(l_reg).sigma();
    let sigma_k = signature(k).sigma();
    let sigma_product = signature(&l_reg.kronecker(k)).sigma();
    let order = BigRational::from_integer(BigInt::from(module.order()));
    let inv_root = real_power(&order, &BigRational::new((-1).into(), 2.into()), precision)?;
    let kappa = module.gauss_sum(-1, precision)?.mul_real(&inv_root);
    let value = &kappa.powi(-weight) * &PhaseQ::from_ratio(-sigma_product, 4).eval(precision);
    let one = ComplexApprox::one(precision);
    let residual = value.dist(&one);
    let pass = ToleranceByPrecision::new(precision).accepts(&residual, &Real::one(precision));
    Ok(WeightReport {
        weight,
        sigma_k,
        sigma_product,
        value,
        residual,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensReport {
    pub p: i64,
    pub rt: ComplexApprox,
    pub predicted: ComplexApprox,
    pub residual: Real,
    pub pass: bool,
}

/// Compares `Z^{RT,raw}` of surgery on `[[p]]` with the one-component closure
/// `e^{−πi·sgn(p)σ(K)/4}·|G|^{−1}·Σ_a q(a)^p`.
pub fn lens_space_consistency(p: i64, k: &SymIntMatrix, precision: u32) -> Result<LensReport> {
    let module = discriminant_module(k)?;
    let opts = EvalOptions {
        precision,
        budget: DEFAULT_BUDGET,
    };
    let pres = SurgeryPresentation::from_rows(&[vec![p]])?;
    let rt = rt_raw_invariant(&pres, k, Strategy::Direct, &opts)?.value;
    let sigma_k = signature(k).sigma();
    let sum = module.power_gauss_sum(p, opts.budget)?.evaluate(precision);
    let order = BigRational::from_integer(BigInt::from(module.order()));
    let inv = real_power(&order, &BigRational::from_integer((-1).into()), precision)?;
    let phase = PhaseQ::from_ratio(-p.signum() * sigma_k, 4).eval(precision);
    let predicted = (&phase * &sum).mul_real(&inv);
    let residual = rt.dist(&predicted);
    let pass = ToleranceByPrecision::new(precision).close(&rt, &predicted);
    Ok(LensReport {
        p,
        rt,
        predicted,
        residual,
        pass,
    })
}
