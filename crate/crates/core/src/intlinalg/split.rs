use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{IntMatrix, SymIntMatrix};
use super::snf::smith_normal_form;

/// `Uᵀ · L · U = diag(L_reg, 0_ν)` with `U` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    pub u: IntMatrix,
    pub l_reg: SymIntMatrix,
    pub rank: usize,
    pub nullity: usize,
}

/// Splits off the radical of a symmetric integer form.
///
/// The rational kernel is cleared of denominators, made primitive, sorted
/// lexicographically, and saturated through the Smith form of the kernel
/// matrix `B = U⁻¹·D·V⁻¹`: the first `ν` columns of `U⁻¹` span the
/// saturated kernel and the remaining columns complete a `Z`-basis.
pub fn block_split(l: &SymIntMatrix) -> BlockSplit {
    let m = l.dim();
    let mut kernel: Vec<Vec<BigInt>> = l
        .to_rational()
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v
                .iter()
                .map(|x| (x * num_rational::BigRational::from_integer(den.clone())).to_integer())
                .collect();
            let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.into_iter().map(|x| x / &content).collect()
        })
        .collect();
    kernel.sort();
    let nullity = kernel.len();
    let rank = m - nullity;

    let u = if nullity == 0 {
        IntMatrix::identity(m)
    } else {
        let b = IntMatrix::from_fn(m, nullity, |i, j| kernel[j][i].clone());
        let snf = smith_normal_form(&b);
        let w = snf
            .u
            .unimodular_inverse()
            .expect("SNF transform is unimodular");
        let order: Vec<usize> = (nullity..m).chain(0..nullity).collect();
        w.select_columns(&order)
    };
    let full = l.congruent(&u);
    debug_assert!((0..m).all(|i| (rank..m).all(|j| full[(i, j)].is_zero())));
    let l_reg = SymIntMatrix::new(full.matrix().submatrix(0..rank, 0..rank))
        .expect("congruence preserves symmetry");
    BlockSplit {
        u,
        l_reg,
        rank,
        nullity,
    }
}

impl BlockSplit {
    pub fn det_reg(&self) -> BigInt {
        self.l_reg.det()
    }

    pub fn abs_det_reg(&self) -> BigInt {
        self.l_reg.det().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::signature;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(l: &SymIntMatrix) -> BlockSplit {
        let s = block_split(l);
        assert!(s.u.det().abs().is_one());
        let full = l.congruent(&s.u);
        let expect = s
            .l_reg
            .matrix()
            .direct_sum(&IntMatrix::zeros(s.nullity, s.nullity));
        assert_eq!(full.matrix(), &expect);
        assert!(!s.l_reg.det().is_zero());
        assert_eq!(s.nullity, l.dim() - l.to_rational().rank());
        s
    }

    #[test]
    fn examples() {
        let s = check(&SymIntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap());
        assert_eq!(s.l_reg, SymIntMatrix::from_rows(&[vec![1]]).unwrap());
        assert_eq!(s.nullity, 1);
        let s = check(&SymIntMatrix::from_rows(&[vec![0]]).unwrap());
        assert_eq!((s.rank, s.nullity), (0, 1));
        let l = SymIntMatrix::from_rows(&[vec![2, 1], vec![1, -3]]).unwrap();
        let s = check(&l);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.l_reg, l);
        check(&SymIntMatrix::empty());
    }

    #[test]
    fn torsion_order_matches_elementary_divisors() {
        let l = SymIntMatrix::from_rows(&[vec![2, 4, 2], vec![4, 2, -2], vec![2, -2, -4]]).unwrap();
        let s = check(&l);
        let divs: BigInt = smith_normal_form(l.matrix())
            .elementary_divisors()
            .iter()
            .product();
        assert_eq!(s.abs_det_reg(), divs);
        assert_eq!(signature(&l).sigma(), signature(&s.l_reg).sigma());
    }

    proptest! {
        #[test]
        fn random_symmetric(n in 1usize..5, vals in proptest::collection::vec(-3i64..=3, 10), rank_cut in 0usize..3) {
            // build a possibly degenerate form as Aᵀ D A
            let mut idx = 0;
            let mut a = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = BigInt::from(vals[idx % vals.len()] + if i == j { 1 } else { 0 });
                    idx += 1;
                }
            }
            let d: Vec<i64> = (0..n).map(|i| if i < rank_cut { 0 } else { vals[i] }).collect();
            let l = SymIntMatrix::new(IntMatrix::diagonal(&d)).unwrap().congruent(&a);
            let s = check(&l);
            prop_assert_eq!(signature(&l).sigma(), signature(&s.l_reg).sigma());
        }
    }
}
