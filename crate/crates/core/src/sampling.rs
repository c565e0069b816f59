//! Seeded random inputs for property suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::intlinalg::{IntMatrix, SymIntMatrix};
use crate::surgery::{kirby_slide, kirby_stabilize, SurgeryPresentation};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform symmetric `m×m` matrix with entries in `[lo, hi]`; diagonal entries
/// are forced even when `even` is set.
pub fn random_symmetric(
    rng: &mut SuiteRng,
    m: usize,
    lo: i64,
    hi: i64,
    even: bool,
) -> SymIntMatrix {
    let mut a = IntMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = if i == j && even {
                2 * rng.gen_range((lo + 1).div_euclid(2)..=hi.div_euclid(2))
            } else {
                rng.gen_range(lo..=hi)
            };
            a[(i, j)] = BigInt::from(v);
            a[(j, i)] = BigInt::from(v);
        }
    }
    SymIntMatrix::new(a).expect("symmetric by construction")
}

/// Rejection-samples a nondegenerate symmetric matrix of dimension in
/// `1..=max_dim` with `|det| ≤ max_abs_det`.
pub fn random_nondegenerate(
    rng: &mut SuiteRng,
    max_dim: usize,
    lo: i64,
    hi: i64,
    even: bool,
    max_abs_det: u64,
) -> SymIntMatrix {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let k = random_symmetric(rng, n, lo, hi, even);
        let det = k.det();
        if !det.is_zero() && det.abs() <= BigInt::from(max_abs_det) {
            return k;
        }
    }
}

/// Even nondegenerate lattice of rank `≤ max_n`.
pub fn random_even_lattice(
    rng: &mut SuiteRng,
    max_n: usize,
    bound: i64,
    max_abs_det: u64,
) -> SymIntMatrix {
    random_nondegenerate(rng, max_n, -bound, bound, true, max_abs_det)
}

/// Linking matrix with `1 ≤ m ≤ max_m` components and entries in `[−bound, bound]`.
pub fn random_presentation(rng: &mut SuiteRng, max_m: usize, bound: i64) -> SurgeryPresentation {
    let m = rng.gen_range(1..=max_m);
    SurgeryPresentation::new(random_symmetric(rng, m, -bound, bound, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KirbyMove {
    Stabilize(i32),
    Slide { i: usize, j: usize, epsilon: i32 },
}

impl KirbyMove {
    pub fn apply(&self, p: &SurgeryPresentation) -> SurgeryPresentation {
        match *self {
            KirbyMove::Stabilize(s) => kirby_stabilize(p, s),
            KirbyMove::Slide { i, j, epsilon } => {
                kirby_slide(p, i, j, epsilon).expect("valid slide indices")
            }
        }
    }
}

/// A random stabilization or slide. A stabilization is replaced by a slide
/// when it would push the reduced colouring count `|G|^{ρ+1}` past
/// `term_limit`; slides need at least two components.
pub fn random_kirby_move(
    rng: &mut SuiteRng,
    p: &SurgeryPresentation,
    group_order: u64,
    term_limit: u64,
) -> KirbyMove {
    let m = p.components();
    let stabilize_fits = (group_order as f64).powi(p.rank() as i32 + 1) <= term_limit as f64;
    let want_slide = m >= 2 && (!stabilize_fits || rng.gen_bool(0.5));
    if want_slide {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        KirbyMove::Slide {
            i,
            j,
            epsilon: if rng.gen_bool(0.5) { 1 } else { -1 },
        }
    } else {
        KirbyMove::Stabilize(if rng.gen_bool(0.5) { 1 } else { -1 })
    }
}

fn small_rational(rng: &mut SuiteRng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-3..=3)),
        BigInt::from(rng.gen_range(1..=3)),
    )
}

/// Random Lagrangian of `(Q^{2d}, ω_std)`: the graph `{(x, Sx)}` of a random
/// rational symmetric `S`, followed by the symplectic swaps
/// `(x_j, y_j) ↦ (−y_j, x_j)` on a random subset of coordinates. Returns a
/// spanning set of `d` vectors.
pub fn random_lagrangian(rng: &mut SuiteRng, d: usize) -> Vec<Vec<BigRational>> {
    let mut s = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let v = small_rational(rng);
            s[i][j] = v.clone();
            s[j][i] = v;
        }
    }
    let swaps: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.3)).collect();
    (0..d)
        .map(|c| {
            let mut v: Vec<BigRational> = (0..d)
                .map(|r| {
                    if r == c {
                        BigRational::from_integer(1.into())
                    } else {
                        BigRational::zero()
                    }
                })
                .chain((0..d).map(|r| s[r][c].clone()))
                .collect();
            for (j, &sw) in swaps.iter().enumerate() {
                if sw {
                    let (x, y) = (v[j].clone(), v[j + d].clone());
                    v[j] = -y;
                    v[j + d] = x;
                }
            }
            v
        })
        .collect()
}

/// Four Lagrangians; occasionally one repeats an earlier member.
pub fn random_lagrangian_quadruple(rng: &mut SuiteRng, d: usize) -> [Vec<Vec<BigRational>>; 4] {
    let mut out: Vec<Vec<Vec<BigRational>>> = (0..4).map(|_| random_lagrangian(rng, d)).collect();
    if rng.gen_bool(0.15) {
        let dst = rng.gen_range(1..4);
        let src = *(0..dst).collect::<Vec<_>>().choose(rng).expect("nonempty");
        out[dst] = out[src].clone();
    }
    out.try_into().expect("four entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::is_even;
    use crate::tqft::{lagrangian_basis, standard_symplectic};

    #[test]
    fn lattices_are_even_and_bounded() {
        let mut r = rng(7);
        for _ in 0..200 {
            let k = random_even_lattice(&mut r, 3, 4, 16);
            assert!(is_even(&k));
            let det = k.det().abs();
            assert!(det >= BigInt::from(1) && det <= BigInt::from(16));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a: Vec<_> = (0..10)
            .map(|_| random_presentation(&mut rng(3), 3, 3))
            .collect();
        let b: Vec<_> = (0..10)
            .map(|_| random_presentation(&mut rng(3), 3, 3))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn lagrangians_validate() {
        let mut r = rng(11);
        for d in 1..=3 {
            let omega = standard_symplectic(d);
            for _ in 0..30 {
                assert!(lagrangian_basis(&omega, &random_lagrangian(&mut r, d)).is_ok());
            }
        }
    }

    #[test]
    fn stabilization_respects_term_limit() {
        let mut r = rng(5);
        let p = SurgeryPresentation::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        for _ in 0..50 {
            assert!(matches!(
                random_kirby_move(&mut r, &p, 16, 256),
                KirbyMove::Slide { .. }
            ));
        }
    }
}
