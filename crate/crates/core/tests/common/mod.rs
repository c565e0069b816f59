//! Floating-point brute force, independent of the exact library code paths.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub struct Discriminant {
    pub kinv: DMatrix<f64>,
    /// One integer lift per element of `Z^n / K Z^n`.
    pub lifts: Vec<Vec<f64>>,
}

/// Enumerates `Z^n / K Z^n` by fractional parts of `K^{-1}x` over a box.
pub fn discriminant(k: &[Vec<i64>]) -> Discriminant {
    let n = k.len();
    let km = DMatrix::from_fn(n, n, |i, j| k[i][j] as f64);
    let det = km.determinant().round().abs() as i64;
    assert!(det > 0, "degenerate K");
    let kinv = km.try_inverse().expect("invertible");
    let mut seen: Vec<Vec<i64>> = Vec::new();
    let mut lifts = Vec::new();
    let total = (det as usize).pow(n as u32);
    for idx in 0..total {
        let mut r = idx;
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let v = (r % det as usize) as f64;
                r /= det as usize;
                v
            })
            .collect();
        let y = &kinv * DMatrix::from_column_slice(n, 1, &x);
        let key: Vec<i64> = y
            .iter()
            .map(|v| ((v - v.floor()) * 1e6).round() as i64 % 1_000_000)
            .collect();
        if !seen.contains(&key) {
            seen.push(key);
            lifts.push(x);
        }
    }
    assert_eq!(lifts.len() as i64, det);
    Discriminant { kinv, lifts }
}

impl Discriminant {
    pub fn order(&self) -> f64 {
        self.lifts.len() as f64
    }

    fn pair(&self, a: usize, b: usize) -> f64 {
        let n = self.kinv.nrows();
        let (x, y) = (&self.lifts[a], &self.lifts[b]);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.kinv[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn gauss(&self, sign: f64) -> Complex64 {
        (0..self.lifts.len())
            .map(|a| Complex64::from_polar(1.0, sign * PI * self.pair(a, a)))
            .sum()
    }

    /// `Σ_{a∈G^m} e^{πi Σ_ij L_ij a_iᵀK⁻¹a_j}`.
    pub fn link_sum(&self, l: &[Vec<i64>]) -> Complex64 {
        let m = l.len();
        let g = self.lifts.len();
        let mut total = Complex64::new(0.0, 0.0);
        for idx in 0..g.pow(m as u32) {
            let mut r = idx;
            let c: Vec<usize> = (0..m)
                .map(|_| {
                    let v = r % g;
                    r /= g;
                    v
                })
                .collect();
            let mut e = 0.0;
            for i in 0..m {
                for j in 0..m {
                    e += l[i][j] as f64 * self.pair(c[i], c[j]);
                }
            }
            total += Complex64::from_polar(1.0, PI * e);
        }
        total
    }
}

/// Eigenvalue counts `(m_+, m_-)` of a symmetric integer matrix.
pub fn inertia(l: &[Vec<i64>]) -> (i32, i32) {
    let m = l.len();
    if m == 0 {
        return (0, 0);
    }
    let a = DMatrix::from_fn(m, m, |i, j| l[i][j] as f64);
    let ev = a.symmetric_eigenvalues();
    (
        ev.iter().filter(|&&x| x > 1e-9).count() as i32,
        ev.iter().filter(|&&x| x < -1e-9).count() as i32,
    )
}

/// Raw RT scalar with integer powers of `p_±` and the odd half-power resolved
/// through `ζ = p_+/|p_+|`, i.e. `|G|^{-(m+1)/2} ζ^{-σ(L)} Σ`.
pub fn rt_raw(k: &[Vec<i64>], l: &[Vec<i64>]) -> Complex64 {
    let d = discriminant(k);
    let (mp, mm) = inertia(l);
    let sigma = mp - mm;
    let m = l.len() as f64;
    let pp = d.gauss(1.0);
    let zeta = pp / pp.norm();
    d.link_sum(l) * zeta.powi(-sigma) * d.order().powf(-(m + 1.0) / 2.0)
}

/// Counting-measure Haar functional `p_+^{-m_+} p_-^{-m_-} Σ`.
pub fn haar_counting(k: &[Vec<i64>], l: &[Vec<i64>]) -> Complex64 {
    let d = discriminant(k);
    let (mp, mm) = inertia(l);
    d.link_sum(l) * d.gauss(1.0).powi(-mp) * d.gauss(-1.0).powi(-mm)
}

/// `b_1 = m - rank L`.
pub fn betti(l: &[Vec<i64>]) -> i32 {
    let (mp, mm) = inertia(l);
    l.len() as i32 - mp - mm
}

pub fn to_complex(z: &toral_core::exactnum::ComplexApprox) -> Complex64 {
    let (re, im) = z.to_f64_pair();
    Complex64::new(re, im)
}
