use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::approx::ComplexApprox;
use super::phase::PhaseQ;

/// Formal sum `Σ count · e^{iπr}` with nonnegative integer multiplicities.
///
/// Sums are accumulated exactly and evaluated once, in the sorted order of
/// their phases, so the numeric result does not depend on how the terms
/// were produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseSum {
    terms: BTreeMap<PhaseQ, BigUint>,
}

impl PhaseSum {
    pub fn new() -> Self {
        PhaseSum::default()
    }

    pub fn single(phase: PhaseQ) -> Self {
        let mut s = PhaseSum::new();
        s.add_term(phase, 1u32);
        s
    }

    pub fn add_term(&mut self, phase: PhaseQ, count: impl Into<BigUint>) {
        let count = count.into();
        if count.is_zero() {
            return;
        }
        *self.terms.entry(phase).or_default() += count;
    }

    pub fn merge(&mut self, other: &PhaseSum) {
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c.clone());
        }
    }

    /// Multiplies every multiplicity by `k`.
    pub fn scaled(&self, k: &BigUint) -> PhaseSum {
        if k.is_zero() {
            return PhaseSum::new();
        }
        PhaseSum {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    /// Complex conjugate: negates every phase.
    pub fn conj(&self) -> PhaseSum {
        let mut out = PhaseSum::new();
        for (p, c) in &self.terms {
            out.add_term(-p, c.clone());
        }
        out
    }

    /// Total number of summed unit terms.
    pub fn term_count(&self) -> BigUint {
        self.terms.values().sum()
    }

    pub fn distinct_phases(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PhaseQ, &BigUint)> {
        self.terms.iter()
    }

    pub fn evaluate(&self, precision: u32) -> ComplexApprox {
        let mut acc = ComplexApprox::zero(precision);
        for (p, c) in &self.terms {
            acc = acc + p.eval(precision).mul_int(&BigInt::from(c.clone()));
        }
        acc
    }
}
