//! Exhaustive evaluation of quadratic phases over finite boxes and quotient
//! lattices.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::{PhaseQ, PhaseSum};
use crate::intlinalg::{smith_normal_form, IntMatrix, RatMatrix};
use crate::{Error, Result};

/// Largest admissible modulus `2·D` for the running phase numerator.
const MAX_MODULUS: u64 = 1 << 62;
const DENSE_HISTOGRAM_LIMIT: u64 = 1 << 22;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// Number of points in the box `Π [0, d_i)`.
pub fn box_size(radices: &[u64]) -> BigUint {
    radices.iter().map(|&d| BigUint::from(d)).product()
}

pub(crate) fn check_budget(terms: &BigUint, budget: u64) -> Result<()> {
    if *terms > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            terms: terms.clone(),
            budget,
        });
    }
    Ok(())
}

enum Histogram {
    Dense(Vec<u64>),
    Sparse(HashMap<u64, u64>),
}

impl Histogram {
    fn new(modulus: u64) -> Self {
        if modulus <= DENSE_HISTOGRAM_LIMIT {
            Histogram::Dense(vec![0; modulus as usize])
        } else {
            Histogram::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn record(&mut self, v: u64) {
        match self {
            Histogram::Dense(h) => h[v as usize] += 1,
            Histogram::Sparse(h) => *h.entry(v).or_default() += 1,
        }
    }

    fn into_phase_sum(self, den: &BigInt) -> PhaseSum {
        let mut out = PhaseSum::new();
        let mut push = |k: u64, c: u64| {
            if c > 0 {
                out.add_term(
                    PhaseQ::new(BigRational::new(BigInt::from(k), den.clone())),
                    c,
                );
            }
        };
        match self {
            Histogram::Dense(h) => h
                .into_iter()
                .enumerate()
                .for_each(|(k, c)| push(k as u64, c)),
            Histogram::Sparse(h) => h.into_iter().for_each(|(k, c)| push(k, c)),
        }
        out
    }
}

/// `Σ_{x ∈ Π[0,d_i)} e^{iπ·xᵀFx}` as an exact phase sum.
///
/// The box is walked as a mixed-radix odometer with the last coordinate
/// fastest; `xᵀ(D·F)x mod 2D` is updated incrementally, `D` being the
/// common denominator of `F`.
pub fn box_gauss_sum(radices: &[u64], form: &RatMatrix, budget: u64) -> Result<PhaseSum> {
    let k = radices.len();
    if form.rows() != k || form.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: form.rows(),
        });
    }
    if radices.iter().any(|&d| d == 0) {
        return Err(Error::InvalidDivisors("zero radix".into()));
    }
    check_budget(&box_size(radices), budget)?;

    let den = form.common_denominator();
    let modulus_big: BigInt = &den * 2;
    let modulus = modulus_big
        .to_u64()
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or_else(|| Error::TooLarge(format!("phase denominator {den}")))?;
    let coeff: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let c = (&form[(i, j)] * BigRational::from_integer(den.clone())).to_integer();
                    c.mod_floor(&modulus_big).to_u64().unwrap()
                })
                .collect()
        })
        .collect();
    let wrap: Vec<u64> = radices
        .iter()
        .map(|&d| (modulus - (d - 1) % modulus) % modulus)
        .collect();

    let mut hist = Histogram::new(modulus);
    let mut a = vec![0u64; k];
    let mut lin = vec![0u64; k];
    let mut val = 0u64;
    hist.record(val);
    'outer: loop {
        let mut t = k;
        loop {
            if t == 0 {
                break 'outer;
            }
            t -= 1;
            if a[t] + 1 < radices[t] {
                a[t] += 1;
                // val += 2·lin[t] + C_tt
                val = addmod(val, addmod(lin[t], lin[t], modulus), modulus);
                val = addmod(val, coeff[t][t], modulus);
                for s in 0..k {
                    lin[s] = addmod(lin[s], coeff[s][t], modulus);
                }
                break;
            }
            let delta = wrap[t];
            a[t] = 0;
            if delta != 0 {
                let two_lin = addmod(lin[t], lin[t], modulus);
                val = addmod(val, mulmod(delta, two_lin, modulus), modulus);
                let dd = mulmod(delta, delta, modulus);
                val = addmod(val, mulmod(dd, coeff[t][t], modulus), modulus);
                for s in 0..k {
                    lin[s] = addmod(lin[s], mulmod(delta, coeff[s][t], modulus), modulus);
                }
            }
        }
        hist.record(val);
    }
    Ok(hist.into_phase_sum(&den))
}

/// Coset representatives of `Z^N / M·Z^N` for nondegenerate square `M`:
/// returns radices `d_i > 1` and the integer matrix whose columns map box
/// coordinates to representatives.
pub fn quotient_coordinates(m: &IntMatrix) -> Result<(Vec<u64>, IntMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate);
    }
    let keep: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
    let radices = keep
        .iter()
        .map(|&i| {
            diag[i]
                .to_u64()
                .ok_or_else(|| Error::TooLarge(format!("elementary divisor {}", diag[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = snf
        .u
        .unimodular_inverse()
        .expect("SNF transform is unimodular");
    Ok((radices, w.select_columns(&keep)))
}

/// `Σ_{[x] ∈ Z^N/M·Z^N} e^{iπ·xᵀFx}`.
///
/// Requires `F·M` integral and `Mᵀ·F·M` integral with even diagonal, which is
/// exactly the condition for `xᵀFx mod 2` to descend to the quotient.
pub fn quotient_gauss_sum(m: &IntMatrix, form: &RatMatrix, budget: u64) -> Result<PhaseSum> {
    let n = m.rows();
    if form.rows() != n || form.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: form.rows(),
        });
    }
    let mr = m.to_rational();
    let fm = form * &mr;
    if fm.to_integer().is_none() {
        return Err(Error::IllDefinedForm("F·M is not integral".into()));
    }
    let mfm = &mr.transpose() * &fm;
    let even = mfm
        .to_integer()
        .is_some_and(|x| (0..n).all(|i| x[(i, i)].is_even()));
    if !even {
        return Err(Error::IllDefinedForm("Mᵀ·F·M is not even".into()));
    }
    let (radices, reps) = quotient_coordinates(m)?;
    check_budget(&box_size(&radices), budget)?;
    box_gauss_sum(&radices, &form.congruent(&reps), budget)
}
