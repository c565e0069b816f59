//! Finite quadratic modules, discriminant forms of even lattices and their
//! Gauss sums.

mod enumerate;
mod module;

pub use enumerate::{box_gauss_sum, box_size, quotient_coordinates, quotient_gauss_sum};
pub use module::{
    cyclic_module, discriminant_module, Elements, FiniteQuadraticModule, GroupElement,
    LatticeDiscriminantData, Provenance, DEFAULT_BUDGET,
};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactnum::{real_power, ComplexApprox, PhaseQ, Real, ToleranceByPrecision};
use crate::intlinalg::{signature, SymIntMatrix};
use crate::Result;

/// Outcome of comparing a Gauss sum against its closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilgramReport {
    pub sigma: i64,
    pub order: BigInt,
    pub gauss_sum: ComplexApprox,
    pub expected: ComplexApprox,
    pub residual: Real,
    pub pass: bool,
}

/// Compares `p_+(K)` with `e^{πiσ(K)/4}·|det K|^{1/2}`.
pub fn milgram_check(k: &SymIntMatrix, precision: u32) -> Result<MilgramReport> {
    let module = discriminant_module(k)?;
    let sigma = signature(k).sigma();
    let order = module::abs_det(k);
    let gauss_sum = module.gauss_sum(1, precision)?;
    let root = real_power(
        &BigRational::from_integer(order.clone()),
        &half(),
        precision,
    )?;
    let expected = PhaseQ::from_ratio(sigma, 4).eval(precision).mul_real(&root);
    let residual = gauss_sum.dist(&expected);
    let pass = ToleranceByPrecision::new(precision).accepts(&residual, &root);
    Ok(MilgramReport {
        sigma,
        order,
        gauss_sum,
        expected,
        residual,
        pass,
    })
}

/// Anomaly constant `κ(K) = e^{−πiσ(K)/4}`, checked against `|G_K|^{-1/2}·p_−(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaReport {
    pub value: ComplexApprox,
    pub from_gauss_sum: ComplexApprox,
    pub residual: Real,
    pub pass: bool,
}

pub fn anomaly_kappa(k: &SymIntMatrix, precision: u32) -> Result<KappaReport> {
    let module = discriminant_module(k)?;
    let sigma = signature(k).sigma();
    let value = kappa_phase(sigma).eval(precision);
    let order = BigRational::from_integer(module::abs_det(k));
    let inv_root = real_power(&order, &-half(), precision)?;
    let from_gauss_sum = module.gauss_sum(-1, precision)?.mul_real(&inv_root);
    let residual = value.dist(&from_gauss_sum);
    let pass = ToleranceByPrecision::new(precision).accepts(&residual, &Real::one(precision));
    Ok(KappaReport {
        value,
        from_gauss_sum,
        residual,
        pass,
    })
}

/// Exponent of `κ = e^{−πiσ/4}`.
pub fn kappa_phase(sigma: i64) -> PhaseQ {
    PhaseQ::from_ratio(-sigma, 4)
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::{a2_gram, e8_gram};
    use crate::Error;
    use num_bigint::BigUint;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    const P: u32 = 256;

    fn k1(k: i64) -> SymIntMatrix {
        SymIntMatrix::from_rows(&[vec![k]]).unwrap()
    }

    fn c(re: f64, im: f64, z: &ComplexApprox) -> bool {
        let (a, b) = z.to_f64_pair();
        (a - re).abs() < 1e-14 && (b - im).abs() < 1e-14
    }

    #[test]
    fn discriminant_examples() {
        let m = discriminant_module(&k1(2)).unwrap();
        assert_eq!(m.divisors(), &[2]);
        assert_eq!(m.q_value(&m.zero()).unwrap(), PhaseQ::zero());
        assert_eq!(
            m.q_value(&GroupElement(vec![1])).unwrap(),
            PhaseQ::from_ratio(1, 2)
        );

        let a2 = discriminant_module(&a2_gram()).unwrap();
        assert_eq!(a2.divisors(), &[3]);
        let g = GroupElement(vec![1]);
        assert_eq!(a2.q_value(&g).unwrap(), PhaseQ::from_ratio(2, 3));
        let lat = a2.lattice().unwrap();
        assert_eq!(lat.order, BigInt::from(3));
        // lift then reduce is the identity
        for x in a2.elements() {
            assert_eq!(lat.reduce(&lat.lift(&x), a2.divisors()), x);
        }

        let e8 = discriminant_module(&e8_gram()).unwrap();
        assert!(e8.divisors().is_empty());
        assert_eq!(e8.order(), BigUint::one());
    }

    #[test]
    fn discriminant_errors() {
        assert_eq!(
            discriminant_module(&k1(1)),
            Err(Error::OddLattice { index: 0 })
        );
        let degenerate = SymIntMatrix::from_rows(&[vec![2, 2], vec![2, 2]]).unwrap();
        assert_eq!(discriminant_module(&degenerate), Err(Error::Degenerate));
    }

    #[test]
    fn lattice_inverse_is_exact() {
        let k = SymIntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 4, 1], vec![0, 1, -6]]).unwrap();
        let m = discriminant_module(&k).unwrap();
        let lat = m.lattice().unwrap();
        assert_eq!(
            &k.to_rational() * &lat.k_inverse,
            crate::intlinalg::RatMatrix::identity(3)
        );
        assert_eq!(BigInt::from(m.order_u64().unwrap()), lat.order);
    }

    #[test]
    fn cyclic_examples() {
        let c2 = cyclic_module(2).unwrap();
        let d2 = discriminant_module(&k1(2)).unwrap();
        for x in c2.elements() {
            assert_eq!(c2.q_value(&x).unwrap(), d2.q_value(&x).unwrap());
        }
        let c4 = cyclic_module(4).unwrap();
        let q = |x| c4.q_value(&GroupElement(vec![x])).unwrap();
        assert_eq!(q(1), PhaseQ::from_ratio(1, 4));
        assert_eq!(q(2), PhaseQ::from_ratio(1, 1));
        assert_eq!(q(3), PhaseQ::from_ratio(1, 4));
        let one = GroupElement(vec![1]);
        assert_eq!(
            c2.bicharacter(&one, &one).unwrap(),
            PhaseQ::from_ratio(1, 1)
        );
        assert_eq!(cyclic_module(3), Err(Error::InvalidCyclicLevel(3)));
        assert_eq!(cyclic_module(-2), Err(Error::InvalidCyclicLevel(-2)));
        assert_eq!(cyclic_module(0), Err(Error::InvalidCyclicLevel(0)));
    }

    #[test]
    fn cyclic_agrees_with_discriminant() {
        for k in [2i64, 4, 6, 8, 10, 12] {
            let c = cyclic_module(k).unwrap();
            let d = discriminant_module(&k1(k)).unwrap();
            assert_eq!(c.divisors(), d.divisors());
            for x in c.elements() {
                assert_eq!(c.q_value(&x).unwrap(), d.q_value(&x).unwrap());
            }
        }
    }

    #[test]
    fn q_value_rejects_bad_elements() {
        let m = cyclic_module(4).unwrap();
        assert!(matches!(
            m.q_value(&GroupElement(vec![4])),
            Err(Error::CoordinateOutOfRange { .. })
        ));
        assert!(matches!(
            m.q_value(&GroupElement(vec![0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bicharacter_examples() {
        let m = discriminant_module(&k1(2)).unwrap();
        let one = GroupElement(vec![1]);
        assert_eq!(m.bicharacter(&one, &one).unwrap(), PhaseQ::from_ratio(1, 1));
        for a in m.elements() {
            assert_eq!(m.bicharacter(&a, &m.zero()).unwrap(), PhaseQ::zero());
        }
        let a2 = discriminant_module(&a2_gram()).unwrap();
        for a in a2.elements() {
            for b in a2.elements() {
                assert_eq!(
                    a2.bicharacter(&a, &b).unwrap(),
                    a2.bicharacter(&b, &a).unwrap()
                );
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let m = discriminant_module(&k1(2)).unwrap();
        assert!(c(1.0, 1.0, &m.gauss_sum(1, P).unwrap()));
        let a2 = discriminant_module(&a2_gram()).unwrap();
        assert!(c(0.0, 3f64.sqrt(), &a2.gauss_sum(1, P).unwrap()));
        let e8 = discriminant_module(&e8_gram()).unwrap();
        assert_eq!(e8.gauss_sum(1, P).unwrap(), ComplexApprox::one(P));
        assert_eq!(e8.gauss_sum(-1, P).unwrap(), ComplexApprox::one(P));
    }

    #[test]
    fn milgram_examples() {
        let r = milgram_check(&k1(2), P).unwrap();
        assert!(r.pass && r.sigma == 1);
        assert!(c(1.0, 1.0, &r.expected));
        let r = milgram_check(&a2_gram(), P).unwrap();
        assert!(r.pass && r.sigma == 2);
        let r = milgram_check(
            &SymIntMatrix::from_rows(&[vec![2, 0], vec![0, -2]]).unwrap(),
            P,
        )
        .unwrap();
        assert!(r.pass && r.sigma == 0);
        assert!(c(2.0, 0.0, &r.gauss_sum));
        assert!(milgram_check(&e8_gram(), P).unwrap().pass);
    }

    #[test]
    fn kappa_examples() {
        let r = anomaly_kappa(&k1(2), P).unwrap();
        assert!(r.pass);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(c(s, -s, &r.value));
        assert_eq!(
            anomaly_kappa(&e8_gram(), P).unwrap().value,
            ComplexApprox::one(P)
        );
        let k = a2_gram();
        let sum = k.direct_sum(&k.neg());
        let r = anomaly_kappa(&sum, P).unwrap();
        assert!(r.pass);
        assert_eq!(r.value, ComplexApprox::one(P));
    }

    #[test]
    fn radical_examples() {
        assert!(discriminant_module(&a2_gram())
            .unwrap()
            .nondegeneracy_radical()
            .is_empty());
        assert!(cyclic_module(4).unwrap().nondegeneracy_radical().is_empty());
        let zero_form = crate::intlinalg::RatMatrix::zeros(1, 1);
        assert_eq!(
            FiniteQuadraticModule::new(vec![2], zero_form),
            Err(Error::DegenerateModule(2))
        );
    }

    #[test]
    fn user_module_validation() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        // x²/4 is not well defined on Z/2
        let bad = crate::intlinalg::RatMatrix::from_rows(&[vec![r(1, 4)]]).unwrap();
        assert!(matches!(
            FiniteQuadraticModule::new(vec![2], bad),
            Err(Error::IllDefinedForm(_))
        ));
        // Z/2 x Z/2 hyperbolic-type form x·y
        let h = crate::intlinalg::RatMatrix::from_rows(&[
            vec![r(0, 1), r(1, 2)],
            vec![r(1, 2), r(0, 1)],
        ])
        .unwrap();
        let m = FiniteQuadraticModule::new(vec![2, 2], h).unwrap();
        assert_eq!(m.order(), BigUint::from(4u32));
        // trivial factors are dropped
        let t = crate::intlinalg::RatMatrix::from_rows(&[
            vec![r(7, 1), r(0, 1)],
            vec![r(0, 1), r(1, 4)],
        ])
        .unwrap();
        let m = FiniteQuadraticModule::new(vec![1, 4], t).unwrap();
        assert_eq!(m.divisors(), &[4]);
        let chain = crate::intlinalg::RatMatrix::from_rows(&[
            vec![r(1, 2), r(0, 1)],
            vec![r(0, 1), r(2, 3)],
        ])
        .unwrap();
        assert!(matches!(
            FiniteQuadraticModule::new(vec![2, 3], chain),
            Err(Error::InvalidDivisors(_))
        ));
    }

    fn arb_module() -> impl Strategy<Value = FiniteQuadraticModule> {
        prop_oneof![
            (1i64..=6).prop_map(|k| cyclic_module(2 * k).unwrap()),
            (proptest::collection::vec(-3i64..=3, 3), 1i64..=3, 1i64..=3).prop_filter_map(
                "nondegenerate even lattice",
                |(off, a, b)| {
                    let k = SymIntMatrix::from_rows(&[
                        vec![2 * a, off[0]],
                        vec![off[0], -2 * b + off[1] * 2],
                    ])
                    .ok()?;
                    if k.det().is_zero() {
                        return None;
                    }
                    let m = discriminant_module(&k).ok()?;
                    (m.order() <= BigUint::from(100u32)).then_some(m)
                }
            ),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bicharacter_is_bilinear(m in arb_module()) {
            let elems: Vec<_> = m.elements().collect();
            for a in &elems {
                for a2 in elems.iter().step_by(2) {
                    let sum = m.add(a, a2);
                    for b in elems.iter().step_by(3) {
                        let lhs = m.bicharacter(&sum, b).unwrap();
                        let rhs = m.bicharacter(a, b).unwrap() + m.bicharacter(a2, b).unwrap();
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }

        #[test]
        fn quadratic_scaling(m in arb_module()) {
            for a in m.elements() {
                let qa = m.q_value(&a).unwrap();
                prop_assert_eq!(m.q_value(&m.neg(&a)).unwrap(), qa.clone());
                for n in 0..m.exponent() {
                    let lhs = m.q_value(&m.scalar_mul(n, &a)).unwrap();
                    prop_assert_eq!(lhs, qa.times(&BigInt::from(n * n)));
                }
            }
        }

        #[test]
        fn gauss_sum_magnitude_and_conjugation(m in arb_module()) {
            let p = 192;
            let plus = m.gauss_sum(1, p).unwrap();
            let minus = m.gauss_sum(-1, p).unwrap();
            let order = Real::from_int(BigInt::from(m.order()), p);
            let tol = ToleranceByPrecision::new(p);
            prop_assert!(tol.accepts(&(&plus.norm_sqr() - &order), &order));
            prop_assert!(tol.close(&minus, &plus.conj()));
            prop_assert!(m.nondegeneracy_radical().is_empty());
        }
    }
}
