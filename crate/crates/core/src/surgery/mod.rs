//! Closed 3-manifold invariants from integer surgery presentations.

mod invariants;
mod presentation;

pub use invariants::{
    cs_raw_invariant, direct_term_count, gauss_phase_minus, haar_functional, haar_rt_exponent,
    reciprocity_check, rt_from_haar, rt_prefactor, rt_raw_for_module, rt_raw_invariant,
    verify_closed_equivalence, EquivalenceReport, EvalOptions, HaarMeasure, InvariantMetadata,
    InvariantValue, Method, ReciprocityReport, Strategy,
};
pub use presentation::{
    homology, kirby_slide, kirby_stabilize, q_lk, q_lk_from_lifts, HomologySummary,
    SurgeryPresentation,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ComplexApprox, PhaseQ};
    use crate::intlinalg::{a2_gram, e8_gram, SymIntMatrix};
    use crate::quadmod::{cyclic_module, discriminant_module, GroupElement};
    use crate::Error;
    use num_bigint::{BigInt, BigUint};
    use num_rational::BigRational;
    use proptest::prelude::{
        prop_assert, prop_assert_eq, prop_assume, prop_oneof, proptest, Just, ProptestConfig,
    };
    use proptest::strategy::Strategy as Gen;

    fn sym(rows: &[Vec<i64>]) -> SymIntMatrix {
        SymIntMatrix::from_rows(rows).unwrap()
    }

    fn pres(rows: &[Vec<i64>]) -> SurgeryPresentation {
        SurgeryPresentation::from_rows(rows).unwrap()
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    fn approx(z: &ComplexApprox, re: f64, im: f64) -> bool {
        let (a, b) = z.to_f64_pair();
        (a - re).abs() < 1e-14 && (b - im).abs() < 1e-14
    }

    fn rt(p: &SurgeryPresentation, k: &SymIntMatrix) -> ComplexApprox {
        rt_raw_invariant(p, k, Strategy::Direct, &opts())
            .unwrap()
            .value
    }

    fn close(a: &ComplexApprox, b: &ComplexApprox) -> bool {
        opts().tolerance().close(a, b)
    }

    #[test]
    fn homology_examples() {
        let h = homology(&SurgeryPresentation::empty());
        assert_eq!((h.b1, h.torsion_order.clone()), (0, BigInt::from(1)));
        assert!(h.torsion_divisors.is_empty());
        assert_eq!(h.m_m, BigRational::new((-1).into(), 2.into()));

        let h = homology(&pres(&[vec![0]]));
        assert_eq!(h.b1, 1);
        assert!(h.torsion_divisors.is_empty());
        assert_eq!(h.m_m, BigRational::from_integer(0.into()));

        for p in 2..8 {
            let h = homology(&pres(&[vec![p]]));
            assert_eq!(h.b1, 0);
            assert_eq!(h.torsion_divisors, vec![BigInt::from(p)]);
        }
        // Z/2 x Z/2 from diag(2, 2); Z ⊕ Z/3 from diag(0, 3)
        let h = homology(&pres(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(h.torsion_divisors, vec![BigInt::from(2), BigInt::from(2)]);
        let h = homology(&pres(&[vec![0, 0], vec![0, -3]]));
        assert_eq!((h.b1, h.torsion_order), (1, BigInt::from(3)));
    }

    #[test]
    fn q_lk_examples() {
        let k = sym(&[vec![2]]);
        let m = discriminant_module(&k).unwrap();
        let l = sym(&[vec![3]]);
        assert_eq!(q_lk(&l, &m, &[m.zero()]).unwrap(), PhaseQ::zero());
        assert_eq!(
            q_lk(&l, &m, &[GroupElement(vec![1])]).unwrap(),
            PhaseQ::from_ratio(3, 2)
        );
        assert_eq!(
            q_lk_from_lifts(&l, &k, &[vec![BigInt::from(1)]]).unwrap(),
            PhaseQ::from_ratio(3, 2)
        );
        assert!(matches!(
            q_lk(&l, &m, &[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rt_examples() {
        for (k, det) in [
            (sym(&[vec![2]]), 2.0f64),
            (a2_gram(), 3.0),
            (e8_gram(), 1.0),
        ] {
            let v = rt(&SurgeryPresentation::empty(), &k);
            assert!(approx(&v, det.powf(-0.5), 0.0));
            assert!(approx(&rt(&pres(&[vec![0]]), &k), 1.0, 0.0));
        }
        assert!(approx(&rt(&pres(&[vec![2]]), &sym(&[vec![2]])), 0.0, 0.0));
    }

    #[test]
    fn rt_metadata() {
        let k = a2_gram();
        let p = pres(&[vec![1, 1], vec![1, 1]]);
        let d = rt_raw_invariant(&p, &k, Strategy::Direct, &opts()).unwrap();
        let r = rt_raw_invariant(&p, &k, Strategy::NullSeparated, &opts()).unwrap();
        assert_eq!(d.metadata.term_count, BigUint::from(9u32));
        assert_eq!(r.metadata.term_count, BigUint::from(3u32));
        assert_eq!((r.metadata.rho, r.metadata.nu, r.metadata.sigma), (1, 1, 1));
        assert!(close(&d.value, &r.value));
    }

    #[test]
    fn rt_budget() {
        let k = a2_gram();
        let p = pres(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let tight = EvalOptions {
            budget: 26,
            ..opts()
        };
        assert!(matches!(
            rt_raw_invariant(&p, &k, Strategy::Direct, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(rt_raw_invariant(
            &p,
            &k,
            Strategy::Direct,
            &EvalOptions {
                budget: 27,
                ..opts()
            }
        )
        .is_ok());
    }

    #[test]
    fn cs_examples() {
        let k = sym(&[vec![2]]);
        let v = cs_raw_invariant(&SurgeryPresentation::empty(), &k, &opts()).unwrap();
        assert!(approx(&v.value, std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let v = cs_raw_invariant(&pres(&[vec![0]]), &k, &opts()).unwrap();
        assert_eq!(v.value, ComplexApprox::one(256));
        let v = cs_raw_invariant(&pres(&[vec![2]]), &k, &opts()).unwrap();
        assert!(approx(&v.value, 0.0, 0.0));
        assert_eq!(v.metadata.term_count, BigUint::from(2u32));
    }

    #[test]
    fn equivalence_examples() {
        let k1 = sym(&[vec![2]]);
        for l in [vec![], vec![vec![0]], vec![vec![2]]] {
            let p = if l.is_empty() {
                SurgeryPresentation::empty()
            } else {
                pres(&l)
            };
            assert!(
                verify_closed_equivalence(&p, &k1, Strategy::Direct, &opts())
                    .unwrap()
                    .pass
            );
        }
        let k = sym(&[vec![2, 0], vec![0, -2]]);
        let p = pres(&[vec![1, 2], vec![2, 1]]);
        let r = verify_closed_equivalence(&p, &k, Strategy::Direct, &opts()).unwrap();
        assert!(r.pass, "residual {}", r.residual);
    }

    #[test]
    fn reciprocity_examples() {
        let k = sym(&[vec![2]]);
        let r = reciprocity_check(&sym(&[vec![1]]), &k, &opts()).unwrap();
        assert!(r.pass);
        assert!(approx(&r.left, 1.0, 1.0));
        let r = reciprocity_check(&sym(&[vec![-1]]), &k, &opts()).unwrap();
        assert!(r.pass);
        assert_eq!(r.sigma, -1);
        let r = reciprocity_check(&sym(&[vec![2, 1], vec![1, 1]]), &k, &opts()).unwrap();
        assert!(r.pass);
        assert_eq!(
            (r.left_terms, r.right_terms),
            (BigUint::from(4u32), BigUint::from(1u32))
        );
        assert!(matches!(
            reciprocity_check(&sym(&[vec![0]]), &k, &opts()),
            Err(Error::Degenerate)
        ));
    }

    // Σ_{y mod 4} e^{3πi y²/4} = 2e^{3πi/4}; the three-term reciprocal sum fixes its sign
    #[test]
    fn reciprocity_reciprocal_sign() {
        let r = reciprocity_check(&sym(&[vec![3]]), &sym(&[vec![4]]), &opts()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(&r.left, -2.0 * h, 2.0 * h));
        assert!(r.pass, "residual {}", r.residual);
    }

    // L(3,1) from [[−3]] with K=[[4]]: RT = −i/2 by hand
    #[test]
    fn lens_equivalence_by_hand() {
        let p = pres(&[vec![-3]]);
        let k = sym(&[vec![4]]);
        let r = verify_closed_equivalence(&p, &k, Strategy::Direct, &opts()).unwrap();
        assert!(approx(&r.rt.value, 0.0, -0.5));
        assert!(r.pass, "residual {}", r.residual);
    }

    #[test]
    fn kirby_examples() {
        let s = kirby_stabilize(&SurgeryPresentation::empty(), 1);
        assert_eq!(s.linking_matrix(), &sym(&[vec![1]]));
        let s = kirby_stabilize(&pres(&[vec![0]]), -1);
        assert_eq!(s.linking_matrix(), &sym(&[vec![0, 0], vec![0, -1]]));

        let p = pres(&[vec![1, 0], vec![0, 1]]);
        let q = kirby_slide(&p, 1, 0, 1).unwrap();
        assert_eq!(q.linking_matrix(), &sym(&[vec![1, 1], vec![1, 2]]));
        let k = a2_gram();
        assert!(close(&rt(&p, &k), &rt(&q, &k)));
        let back = kirby_slide(&q, 1, 0, -1).unwrap();
        assert_eq!(back.linking_matrix(), p.linking_matrix());
        assert_eq!(kirby_slide(&p, 1, 1, 1), Err(Error::SlideOnSelf(1)));
        assert!(matches!(
            kirby_slide(&p, 0, 2, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn haar_examples() {
        let m = discriminant_module(&sym(&[vec![2]])).unwrap();
        let one = ComplexApprox::one(256);
        for measure in [HaarMeasure::Counting, HaarMeasure::Probability] {
            let t = haar_functional(&m, &SurgeryPresentation::empty(), measure, &opts()).unwrap();
            assert!(close(&t, &one));
        }
        let p = pres(&[vec![0]]);
        let t = haar_functional(&m, &p, HaarMeasure::Counting, &opts()).unwrap();
        assert!(approx(&t, 2.0, 0.0));
        let predicted = rt_from_haar(&t, &m, HaarMeasure::Counting, 1, 256).unwrap();
        assert!(close(&predicted, &rt(&p, &sym(&[vec![2]]))));
        let t = haar_functional(&m, &p, HaarMeasure::Probability, &opts()).unwrap();
        assert!(approx(&t, 1.0, 0.0));
    }

    #[test]
    fn cyclic_module_matches_lattice() {
        let p = pres(&[vec![3, 1], vec![1, -2]]);
        for k in [2, 4, 6] {
            let lattice = rt(&p, &sym(&[vec![k]]));
            let cyclic =
                rt_raw_for_module(&p, &cyclic_module(k).unwrap(), Strategy::Direct, &opts())
                    .unwrap();
            assert!(close(&lattice, &cyclic.value));
        }
    }

    fn arb_k() -> impl Gen<Value = SymIntMatrix> {
        prop_oneof![
            Just(sym(&[vec![2]])),
            Just(sym(&[vec![4]])),
            Just(a2_gram()),
            Just(sym(&[vec![2, 0], vec![0, -2]])),
            Just(sym(&[vec![2, 1], vec![1, -2]])),
        ]
    }

    fn arb_l(max_m: usize) -> impl Gen<Value = SurgeryPresentation> {
        (1..=max_m)
            .prop_flat_map(|m| {
                proptest::collection::vec(-3i64..=3, m * m).prop_map(move |v| (m, v))
            })
            .prop_map(|(m, v)| {
                let rows: Vec<Vec<i64>> = (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| if i <= j { v[i * m + j] } else { v[j * m + i] })
                            .collect()
                    })
                    .collect();
                pres(&rows)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn orientation_reversal_conjugates(p in arb_l(3), k in arb_k()) {
            let a = rt_raw_invariant(&p, &k, Strategy::NullSeparated, &opts()).unwrap().value;
            let b = rt_raw_invariant(&p.mirror(), &k, Strategy::NullSeparated, &opts()).unwrap().value;
            prop_assert!(close(&a.conj(), &b));
        }

        #[test]
        fn rt_equals_cs(p in arb_l(3), k in arb_k()) {
            let r = verify_closed_equivalence(&p, &k, Strategy::NullSeparated, &opts()).unwrap();
            prop_assert!(r.pass, "residual {}", r.residual);
        }

        #[test]
        fn reciprocity_holds(a in arb_l(2), k in arb_k()) {
            prop_assume!(a.nullity() == 0);
            let r = reciprocity_check(a.linking_matrix(), &k, &opts()).unwrap();
            prop_assert!(r.pass, "residual {}", r.residual);
        }

        #[test]
        fn strategies_agree(p in arb_l(3), k in arb_k()) {
            let a = rt_raw_invariant(&p, &k, Strategy::Direct, &opts()).unwrap().value;
            let b = rt_raw_invariant(&p, &k, Strategy::NullSeparated, &opts()).unwrap().value;
            prop_assert!(close(&a, &b));
        }

        #[test]
        fn slides_preserve_congruence_data(p in arb_l(3), i in 0usize..3, j in 0usize..3, e in prop_oneof![Just(1), Just(-1)]) {
            let m = p.components();
            let (i, j) = (i % m, j % m);
            prop_assume!(i != j);
            let q = kirby_slide(&p, i, j, e).unwrap();
            prop_assert_eq!(q.sigma(), p.sigma());
            prop_assert_eq!(q.nullity(), p.nullity());
            prop_assert_eq!(homology(&q), homology(&p));
        }

        #[test]
        fn q_lk_is_lift_independent(p in arb_l(2), k in arb_k(), seed in proptest::collection::vec(-5i64..=5, 4 * 50)) {
            let module = discriminant_module(&k).unwrap();
            let lat = module.lattice().unwrap();
            let n = k.dim();
            let m = p.components();
            let colors: Vec<GroupElement> = module.elements().take(m).collect();
            let colors: Vec<GroupElement> = (0..m).map(|i| colors.get(i).cloned().unwrap_or_else(|| module.zero())).collect();
            let lifts: Vec<Vec<BigInt>> = colors.iter().map(|a| lat.lift(a)).collect();
            let base = q_lk(p.linking_matrix(), &module, &colors).unwrap();
            prop_assert_eq!(&q_lk_from_lifts(p.linking_matrix(), &k, &lifts).unwrap(), &base);
            for t in 0..50 {
                let shifted: Vec<Vec<BigInt>> = lifts
                    .iter()
                    .enumerate()
                    .map(|(c, x)| {
                        let lambda: Vec<BigInt> = (0..n).map(|r| BigInt::from(seed[(t * 4 + c * 2 + r) % seed.len()])).collect();
                        let kl = k.matrix().apply(&lambda);
                        x.iter().zip(kl).map(|(a, b)| a + b).collect()
                    })
                    .collect();
                prop_assert_eq!(&q_lk_from_lifts(p.linking_matrix(), &k, &shifted).unwrap(), &base);
            }
        }
    }

    #[test]
    fn haar_unknot_is_normalized() {
        // α_+^{-1}·Σ q(a) = 1 for the +1-framed unknot
        let m = cyclic_module(8).unwrap();
        let t = haar_functional(&m, &pres(&[vec![1]]), HaarMeasure::Counting, &opts()).unwrap();
        assert!(close(&t, &ComplexApprox::one(256)));
    }
}
