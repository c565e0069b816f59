//! Exact phases and a fixed-point complex backend.

mod approx;
mod phase;
mod sum;

pub use approx::{
    cos_sin_pi, pi, real_power, ComplexApprox, Real, ToleranceByPrecision, DEFAULT_PRECISION,
    MIN_PRECISION,
};
pub use phase::{phase_add, phase_eval, PhaseQ};
pub use sum::PhaseSum;

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn real_power_examples() {
        let p = 256;
        let two = real_power(&rat(4, 1), &rat(1, 2), p).unwrap();
        assert_eq!(two, Real::from_int(2, p));
        let r = real_power(&rat(2, 1), &rat(-1, 2), p).unwrap();
        assert!((r.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        let one = real_power(&rat(3, 1), &rat(0, 1), p).unwrap();
        assert_eq!(one, Real::one(p));
    }

    #[test]
    fn real_power_rejects_bad_input() {
        assert!(matches!(
            real_power(&rat(0, 1), &rat(1, 1), 128),
            Err(crate::Error::NonPositiveBase(_))
        ));
        assert!(matches!(
            real_power(&rat(-2, 1), &rat(1, 2), 128),
            Err(crate::Error::NonPositiveBase(_))
        ));
        assert!(matches!(
            real_power(&rat(2, 1), &rat(1, 3), 128),
            Err(crate::Error::UnsupportedExponent(_))
        ));
    }

    #[test]
    fn pi_digits() {
        let s = pi(256).to_decimal(60);
        assert_eq!(
            s,
            "3.141592653589793238462643383279502884197169399375105820974945"
        );
    }

    #[test]
    fn tolerance_shrinks_with_precision() {
        let one = Real::one(512);
        let mut last = ToleranceByPrecision::new(64).bound(&one);
        for p in [96, 128, 256, 512] {
            let b = ToleranceByPrecision::new(p).bound(&one);
            assert!(b < last);
            last = b;
        }
        let big = Real::from_int(1000, 128);
        assert!(
            ToleranceByPrecision::new(128).bound(&big) > ToleranceByPrecision::new(128).bound(&one)
        );
    }

    #[test]
    fn decimal_formatting() {
        let p = 128;
        let x = Real::from_rational(&rat(-1, 8), p);
        assert_eq!(x.to_decimal(4), "-0.1250");
        let tiny = Real::pow2(-100, p);
        assert_eq!((-tiny).to_decimal(5), "0.00000");
        let z = ComplexApprox::new(Real::from_int(1, p), Real::from_rational(&rat(-3, 2), p));
        assert_eq!(z.to_decimal(2), "1.00-1.50i");
    }

    #[test]
    fn doubling_precision_shrinks_discrepancy() {
        // replay sqrt(3)·e^{iπ·5/12} at P, 2P against a 4P reference
        let value = |p: u32| {
            let r = real_power(&rat(3, 1), &rat(1, 2), p).unwrap();
            phase_eval(&PhaseQ::from_ratio(5, 12), p).mul_real(&r)
        };
        for p in [64u32, 96, 128] {
            let reference = value(4 * p);
            let d1 = value(p).with_precision(4 * p).dist(&reference);
            let d2 = value(2 * p).with_precision(4 * p).dist(&reference);
            let factor = Real::pow2((p / 4) as i64, 4 * p);
            assert!(d1.is_zero() || &d2 * &factor <= d1, "p={p}");
        }
    }

    fn arb_phase() -> impl Strategy<Value = PhaseQ> {
        (-50i64..50, 1i64..24).prop_map(|(n, d)| PhaseQ::from_ratio(n, d))
    }

    proptest! {
        #[test]
        fn phase_group_laws(a in arb_phase(), b in arb_phase(), c in arb_phase()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a + &(-&a), PhaseQ::zero());
            prop_assert_eq!(&a + &PhaseQ::zero(), a.clone());
        }

        #[test]
        fn phase_eval_is_a_homomorphism(a in arb_phase(), b in arb_phase()) {
            let p = 128;
            let lhs = phase_eval(&(&a + &b), p);
            let rhs = &phase_eval(&a, p) * &phase_eval(&b, p);
            prop_assert!(ToleranceByPrecision::new(p).close(&lhs, &rhs));
        }

        #[test]
        fn phase_eval_has_unit_modulus(a in arb_phase()) {
            let z = phase_eval(&a, 128);
            let n = z.norm_sqr();
            prop_assert!(ToleranceByPrecision::new(128).accepts(&(&n - &Real::one(128)), &Real::one(128)));
        }
    }
}
