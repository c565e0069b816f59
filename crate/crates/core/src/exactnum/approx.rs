//! Fixed-point real and complex numbers on top of `BigInt`.
//!
//! A value with precision `P` is stored as an integer mantissa scaled by
//! `2^-(P + GUARD_BITS)`. The guard bits absorb rounding from long chains of
//! additions, so results are good to roughly `P` bits in absolute terms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 256;
const GUARD_BITS: u32 = 32;

fn scale_of(precision: u32) -> u32 {
    assert!(
        precision >= MIN_PRECISION,
        "precision must be at least {MIN_PRECISION} bits, got {precision}"
    );
    precision + GUARD_BITS
}

fn round_shr(x: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x;
    }
    (x + (BigInt::one() << (bits - 1))) >> bits
}

fn div_round(num: BigInt, den: &BigInt) -> BigInt {
    // den > 0
    let twice = (num << 1usize) + den;
    num_integer::Integer::div_floor(&twice, &(den << 1usize))
}

/// Real number `mant · 2^-(precision + guard)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    mant: BigInt,
    precision: u32,
}

impl Real {
    fn raw(mant: BigInt, precision: u32) -> Self {
        Real { mant, precision }
    }

    fn scale(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    pub fn zero(precision: u32) -> Self {
        scale_of(precision);
        Real::raw(BigInt::zero(), precision)
    }

    pub fn one(precision: u32) -> Self {
        Real::from_int(1, precision)
    }

    pub fn from_int(v: impl Into<BigInt>, precision: u32) -> Self {
        let s = scale_of(precision);
        Real::raw(v.into() << s, precision)
    }

    pub fn from_rational(v: &BigRational, precision: u32) -> Self {
        let s = scale_of(precision);
        Real::raw(div_round(v.numer() << s, v.denom()), precision)
    }

    /// `2^exp` at the given precision (underflows to zero below the scale).
    pub fn pow2(exp: i64, precision: u32) -> Self {
        let s = scale_of(precision) as i64;
        let shift = s + exp;
        if shift < 0 {
            Real::zero(precision)
        } else {
            Real::raw(BigInt::one() << (shift as u64), precision)
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        let s = scale_of(precision);
        let cur = self.scale();
        let mant = match s.cmp(&cur) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (s - cur),
            Ordering::Less => round_shr(self.mant.clone(), cur - s),
        };
        Real::raw(mant, precision)
    }

    fn aligned(a: &Real, b: &Real) -> (BigInt, BigInt, u32) {
        if a.precision == b.precision {
            (a.mant.clone(), b.mant.clone(), a.precision)
        } else {
            let p = a.precision.min(b.precision);
            (a.with_precision(p).mant, b.with_precision(p).mant, p)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real::raw(self.mant.abs(), self.precision)
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Real::raw(&self.mant * k, self.precision)
    }

    pub fn div(&self, other: &Real) -> Self {
        let (a, b, p) = Real::aligned(self, other);
        assert!(!b.is_zero(), "division by zero");
        let s = scale_of(p);
        let (a, b) = if b.is_negative() { (-a, -b) } else { (a, b) };
        Real::raw(div_round(a << s, &b), p)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "square root of a negative number");
        let s = self.scale();
        Real::raw((&self.mant << s).sqrt(), self.precision)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits();
        let (m, extra) = if bits > 60 {
            let shift = bits - 60;
            ((&self.mant >> shift).to_f64().unwrap_or(0.0), shift as i64)
        } else {
            (self.mant.to_f64().unwrap_or(0.0), 0)
        };
        let e = extra - self.scale() as i64;
        m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Decimal expansion rounded to `places` digits after the point.
    pub fn to_decimal(&self, places: usize) -> String {
        let ten_pow = num_traits::pow(BigInt::from(10), places);
        let q = round_shr(self.mant.abs() * ten_pow, self.scale());
        let mut digits = q.to_string();
        if digits.len() <= places {
            digits = "0".repeat(places + 1 - digits.len()) + &digits;
        }
        let split = digits.len() - places;
        let mut out = String::new();
        if self.mant.is_negative() && !q.is_zero() {
            out.push('-');
        }
        out.push_str(&digits[..split]);
        if places > 0 {
            out.push('.');
            out.push_str(&digits[split..]);
        }
        out
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Real::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal((self.precision / 4) as usize))
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let (a, b, p) = Real::aligned(self, rhs);
        Real::raw(a + b, p)
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let (a, b, p) = Real::aligned(self, rhs);
        Real::raw(a - b, p)
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let (a, b, p) = Real::aligned(self, rhs);
        Real::raw(round_shr(a * b, scale_of(p)), p)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::raw(-&self.mant, self.precision)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Real, Add add, Sub sub, Mul mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::raw(-self.mant, self.precision)
    }
}

/// Complex number with fixed-point real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexApprox {
    re: BigInt,
    im: BigInt,
    precision: u32,
}

impl ComplexApprox {
    pub fn new(re: Real, im: Real) -> Self {
        let p = re.precision.min(im.precision);
        ComplexApprox {
            re: re.with_precision(p).mant,
            im: im.with_precision(p).mant,
            precision: p,
        }
    }

    pub fn zero(precision: u32) -> Self {
        scale_of(precision);
        ComplexApprox {
            re: BigInt::zero(),
            im: BigInt::zero(),
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        ComplexApprox::from_real(Real::one(precision))
    }

    pub fn from_real(re: Real) -> Self {
        ComplexApprox {
            precision: re.precision,
            re: re.mant,
            im: BigInt::zero(),
        }
    }

    pub fn re(&self) -> Real {
        Real::raw(self.re.clone(), self.precision)
    }

    pub fn im(&self) -> Real {
        Real::raw(self.im.clone(), self.precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        ComplexApprox::new(
            self.re().with_precision(precision),
            self.im().with_precision(precision),
        )
    }

    fn aligned<'a>(
        a: &'a ComplexApprox,
        b: &'a ComplexApprox,
    ) -> (
        std::borrow::Cow<'a, ComplexApprox>,
        std::borrow::Cow<'a, ComplexApprox>,
    ) {
        use std::borrow::Cow;
        match a.precision.cmp(&b.precision) {
            Ordering::Equal => (Cow::Borrowed(a), Cow::Borrowed(b)),
            Ordering::Less => (Cow::Borrowed(a), Cow::Owned(b.with_precision(a.precision))),
            Ordering::Greater => (Cow::Owned(a.with_precision(b.precision)), Cow::Borrowed(b)),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexApprox {
            re: self.re.clone(),
            im: -&self.im,
            precision: self.precision,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        ComplexApprox {
            re: &self.re * k,
            im: &self.im * k,
            precision: self.precision,
        }
    }

    pub fn mul_real(&self, r: &Real) -> Self {
        let r = r.with_precision(self.precision);
        let s = self.scale();
        ComplexApprox {
            re: round_shr(&self.re * &r.mant, s),
            im: round_shr(&self.im * &r.mant, s),
            precision: self.precision,
        }
    }

    pub fn div_real(&self, r: &Real) -> Self {
        ComplexApprox::new(self.re().div(r), self.im().div(r))
    }

    fn scale(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    pub fn norm_sqr(&self) -> Real {
        let s = self.scale();
        Real::raw(
            round_shr(&self.re * &self.re + &self.im * &self.im, s),
            self.precision,
        )
    }

    pub fn abs(&self) -> Real {
        // the square sits at scale 2s, so its integer root lands back at scale s
        Real::raw(
            (&self.re * &self.re + &self.im * &self.im).sqrt(),
            self.precision,
        )
    }

    /// `|self - other|`.
    pub fn dist(&self, other: &ComplexApprox) -> Real {
        (self - other).abs()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "reciprocal of zero");
        self.conj().div_real(&n)
    }

    pub fn powi(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = ComplexApprox::one(self.precision);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Decimal rendering `a+bi` with `places` digits after the point.
    pub fn to_decimal(&self, places: usize) -> String {
        let re = self.re().to_decimal(places);
        let im = self.im().to_decimal(places);
        match im.strip_prefix('-') {
            Some(mag) => format!("{re}-{mag}i"),
            None => format!("{re}+{im}i"),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal((self.precision / 4) as usize))
    }
}

impl Add for &ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: &ComplexApprox) -> ComplexApprox {
        let (a, b) = ComplexApprox::aligned(self, rhs);
        ComplexApprox {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
            precision: a.precision,
        }
    }
}

impl Sub for &ComplexApprox {
    type Output = ComplexApprox;
    fn sub(self, rhs: &ComplexApprox) -> ComplexApprox {
        let (a, b) = ComplexApprox::aligned(self, rhs);
        ComplexApprox {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
            precision: a.precision,
        }
    }
}

impl Mul for &ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: &ComplexApprox) -> ComplexApprox {
        let (a, b) = ComplexApprox::aligned(self, rhs);
        let s = a.scale();
        let re = &a.re * &b.re - &a.im * &b.im;
        let im = &a.re * &b.im + &a.im * &b.re;
        ComplexApprox {
            re: round_shr(re, s),
            im: round_shr(im, s),
            precision: a.precision,
        }
    }
}

impl Neg for &ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        ComplexApprox {
            re: -&self.re,
            im: -&self.im,
            precision: self.precision,
        }
    }
}

forward_owned!(ComplexApprox, Add add, Sub sub, Mul mul);

impl Neg for ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        (&self).neg()
    }
}

impl std::iter::Sum for ComplexApprox {
    fn sum<I: Iterator<Item = ComplexApprox>>(mut iter: I) -> ComplexApprox {
        let first = iter
            .next()
            .expect("sum of an empty iterator has no precision");
        iter.fold(first, |acc, z| acc + z)
    }
}

/// Comparison tolerance `2^(-P/2) · max(1, scale)` for precision `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToleranceByPrecision {
    pub precision: u32,
}

impl ToleranceByPrecision {
    pub fn new(precision: u32) -> Self {
        ToleranceByPrecision { precision }
    }

    pub fn bound(&self, magnitude: &Real) -> Real {
        let base = Real::pow2(-((self.precision / 2) as i64), self.precision);
        let scale = magnitude.abs().max(Real::one(self.precision));
        &base * &scale
    }

    pub fn accepts(&self, residual: &Real, magnitude: &Real) -> bool {
        residual.abs() <= self.bound(magnitude)
    }

    /// Checks `|a - b|` against the tolerance scaled by the larger operand.
    pub fn close(&self, a: &ComplexApprox, b: &ComplexApprox) -> bool {
        let mag = a.abs().max(b.abs());
        self.accepts(&a.dist(b), &mag)
    }
}

// π at a given scale, cached.
fn pi_mant(scale: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&scale) {
        return v.clone();
    }
    let ws = scale + 16;
    // Machin: π = 16·atan(1/5) − 4·atan(1/239)
    let atan_inv = |n: u32| -> BigInt {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut term = (BigInt::one() << ws) / &n;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &n2;
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    let v = round_shr(pi, 16);
    cache.lock().unwrap().insert(scale, v.clone());
    v
}

pub fn pi(precision: u32) -> Real {
    Real::raw(pi_mant(scale_of(precision)), precision)
}

/// `(cos(π·x), sin(π·x))` for rational `x`.
pub fn cos_sin_pi(x: &BigRational, precision: u32) -> (Real, Real) {
    let two = BigRational::from_integer(BigInt::from(2));
    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));

    let mut s = x - &two * (x / &two).floor();
    let mut cos_sign = 1i32;
    let mut sin_sign = 1i32;
    if s >= one {
        s -= &one;
        cos_sign = -cos_sign;
        sin_sign = -sin_sign;
    }
    if s > half {
        s = &one - &s;
        cos_sign = -cos_sign;
    }
    let swap = s > quarter;
    if swap {
        s = &half - &s;
    }

    let scale = scale_of(precision);
    let ws = scale + 16;
    let pi_w = pi_mant(ws);
    let t = div_round(pi_w * s.numer(), s.denom());
    let t2 = round_shr(&t * &t, ws);

    let mut sin = t.clone();
    let mut term = t;
    let mut k = 1u64;
    loop {
        term = -round_shr(&term * &t2, ws) / BigInt::from((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        sin += &term;
        k += 1;
    }
    let mut cos = BigInt::one() << ws;
    let mut term = cos.clone();
    let mut k = 1u64;
    loop {
        term = -round_shr(&term * &t2, ws) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        cos += &term;
        k += 1;
    }
    let (mut c, mut sn) = (round_shr(cos, 16), round_shr(sin, 16));
    if swap {
        std::mem::swap(&mut c, &mut sn);
    }
    if cos_sign < 0 {
        c = -c;
    }
    if sin_sign < 0 {
        sn = -sn;
    }
    (Real::raw(c, precision), Real::raw(sn, precision))
}

/// Positive real power `base^exponent` where the exponent is an integer or a
/// half-integer; half-integers take the positive square root.
pub fn real_power(
    base: &BigRational,
    exponent: &BigRational,
    precision: u32,
) -> crate::Result<Real> {
    if !base.is_positive() {
        return Err(crate::Error::NonPositiveBase(base.to_string()));
    }
    let den = exponent.denom();
    if !(den.is_one() || *den == BigInt::from(2)) {
        return Err(crate::Error::UnsupportedExponent(exponent.to_string()));
    }
    let k = exponent
        .numer()
        .abs()
        .to_u32()
        .ok_or_else(|| crate::Error::UnsupportedExponent(exponent.to_string()))?;
    let mut value = num_traits::pow(base.clone(), k as usize);
    if exponent.is_negative() {
        value = value.recip();
    }
    let r = Real::from_rational(&value, precision);
    Ok(if den.is_one() { r } else { r.sqrt() })
}
