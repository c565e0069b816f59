use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::approx::{cos_sin_pi, ComplexApprox};

/// Unit complex number `e^{iπr}` stored by its exponent `r ∈ [0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseQ(BigRational);

impl PhaseQ {
    pub fn new(r: BigRational) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let reduced = &r - &two * (&r / &two).floor();
        PhaseQ(reduced)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        PhaseQ::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        PhaseQ(BigRational::zero())
    }

    pub fn exponent(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `k`-th power of the phase.
    pub fn times(&self, k: &BigInt) -> Self {
        PhaseQ::new(&self.0 * BigRational::from_integer(k.clone()))
    }

    pub fn eval(&self, precision: u32) -> ComplexApprox {
        phase_eval(self, precision)
    }
}

impl fmt::Display for PhaseQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for &PhaseQ {
    type Output = PhaseQ;
    fn add(self, rhs: &PhaseQ) -> PhaseQ {
        PhaseQ::new(&self.0 + &rhs.0)
    }
}

impl Add for PhaseQ {
    type Output = PhaseQ;
    fn add(self, rhs: PhaseQ) -> PhaseQ {
        &self + &rhs
    }
}

impl Sub for &PhaseQ {
    type Output = PhaseQ;
    fn sub(self, rhs: &PhaseQ) -> PhaseQ {
        PhaseQ::new(&self.0 - &rhs.0)
    }
}

impl Sub for PhaseQ {
    type Output = PhaseQ;
    fn sub(self, rhs: PhaseQ) -> PhaseQ {
        &self - &rhs
    }
}

impl Neg for &PhaseQ {
    type Output = PhaseQ;
    fn neg(self) -> PhaseQ {
        PhaseQ::new(-&self.0)
    }
}

impl Neg for PhaseQ {
    type Output = PhaseQ;
    fn neg(self) -> PhaseQ {
        -&self
    }
}

pub fn phase_add(a: &PhaseQ, b: &PhaseQ) -> PhaseQ {
    a + b
}

/// `cos(πr) + i·sin(πr)`.
pub fn phase_eval(a: &PhaseQ, precision: u32) -> ComplexApprox {
    debug_assert!(!a.0.is_negative());
    let (c, s) = cos_sin_pi(&a.0, precision);
    ComplexApprox::new(c, s)
}
