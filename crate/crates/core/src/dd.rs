//! Double-double arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 bits of significand. Every
//! evaluation path in this crate accumulates in this type so that results
//! near `1e6` in magnitude still carry absolute accuracy well below `1e-10`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Unit roundoff of the double-double format (2^-104).
pub const DD_EPSILON: f64 = 4.930380657631324e-32;

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

// Dekker product; avoids `mul_add`, which is a slow libm call on targets
// without hardware FMA.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    pub const EULER_GAMMA: Self = Self {
        hi: 0.5772156649015329,
        lo: -4.942915152430645e-18,
    };
    pub const LN_2PI: Self = Self {
        hi: 1.8378770664093456,
        lo: -7.756588316134483e-17,
    };
    pub const LN_PI: Self = Self {
        hi: 1.1447298858494002,
        lo: 1.0265951162707826e-17,
    };

    /// Builds a value from two components, renormalising them.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Builds a value from components that are already normalised.
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest `f64`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    pub fn signum(self) -> f64 {
        if self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0) {
            1.0
        } else if self.is_sign_negative() {
            -1.0
        } else {
            0.0
        }
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn square(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let s = self.hi.sqrt();
        let s_dd = Self::from_f64(s);
        let r = self - s_dd.square();
        s_dd + Self::from_f64(r.hi / (2.0 * s))
    }

    /// Multiplies by `2^k` exactly.
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// `exp(x) - 1` with full double-double relative accuracy for small `x`.
    pub fn exp_m1(self) -> Self {
        if self.hi.abs() > 0.5 {
            return self.exp() - Self::ONE;
        }
        expm1_reduced(self)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = self - Self::LN_2.mul_f64(k);
        let em1 = expm1_reduced(r);
        (em1 + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm via one Newton step on `exp`.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        if !self.hi.is_finite() {
            return self;
        }
        let y = Self::from_f64(self.hi.ln());
        y + self * (-y).exp() - Self::ONE
    }

    /// `ln(1 + self)`, accurate when `self` is small.
    pub fn ln_1p(self) -> Self {
        if self.hi.abs() > 0.25 {
            return (Self::ONE + self).ln();
        }
        // Newton on exp_m1 keeps relative accuracy near zero.
        let y = Self::from_f64(self.hi.ln_1p());
        let e = y.exp_m1();
        y - (e - self) / (e + Self::ONE)
    }
}

// exp(r) - 1 for |r| <= ~0.5: scale down by 2^-10, Taylor, then undo the
// scaling with the doubling identity em1(2r) = em1(r) * (em1(r) + 2).
fn expm1_reduced(r: DoubleDouble) -> DoubleDouble {
    const HALVINGS: i32 = 10;
    let s = r.ldexp(-HALVINGS);
    let mut term = s;
    let mut sum = s;
    let mut k = 2.0;
    loop {
        term = term * s / k;
        sum += term;
        if term.hi.abs() <= 1e-36 * sum.hi.abs().max(1e-300) || k > 30.0 {
            break;
        }
        k += 1.0;
    }
    let two = DoubleDouble::from_f64(2.0);
    for _ in 0..HALVINGS {
        sum = sum * (sum + two);
    }
    sum
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl From<i32> for DoubleDouble {
    fn from(x: i32) -> Self {
        Self::from_f64(x as f64)
    }
}

impl From<u32> for DoubleDouble {
    fn from(x: u32) -> Self {
        Self::from_f64(x as f64)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64(q3)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident $atr:ident $am:ident),*) => {$(
        impl $tr<f64> for DoubleDouble {
            type Output = Self;
            #[inline]
            fn $m(self, b: f64) -> Self {
                $tr::$m(self, Self::from_f64(b))
            }
        }
        impl $tr<DoubleDouble> for f64 {
            type Output = DoubleDouble;
            #[inline]
            fn $m(self, b: DoubleDouble) -> DoubleDouble {
                $tr::$m(DoubleDouble::from_f64(self), b)
            }
        }
        impl $atr for DoubleDouble {
            #[inline]
            fn $am(&mut self, b: Self) {
                *self = $tr::$m(*self, b);
            }
        }
        impl $atr<f64> for DoubleDouble {
            #[inline]
            fn $am(&mut self, b: f64) {
                *self = $tr::$m(*self, Self::from_f64(b));
            }
        }
    )*};
}

scalar_ops!(
    Add add AddAssign add_assign,
    Sub sub SubAssign sub_assign,
    Mul mul MulAssign mul_assign,
    Div div DivAssign div_assign
);

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, b: DoubleDouble, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1.0)
    }

    #[test]
    fn third_times_three_is_one() {
        let third = DoubleDouble::ONE / DoubleDouble::from(3.0);
        let back = third * 3.0;
        assert!((back - DoubleDouble::ONE).abs().to_f64() < 1e-31);
    }

    #[test]
    fn exp_and_ln_constants() {
        let ln2 = DoubleDouble::from(2.0).ln();
        assert!(close(ln2, DoubleDouble::LN_2, 1e-31), "{ln2:?}");
        let back = DoubleDouble::LN_2.exp();
        assert!(close(back, DoubleDouble::from(2.0), 1e-31), "{back:?}");
        let lnpi = DoubleDouble::PI.ln();
        assert!(close(lnpi, DoubleDouble::LN_PI, 1e-31));
        let ln2pi = (DoubleDouble::PI * 2.0).ln();
        assert!(close(ln2pi, DoubleDouble::LN_2PI, 1e-31));
    }

    #[test]
    fn expm1_small_argument_is_relative() {
        let x = DoubleDouble::from(1e-20);
        let e = x.exp_m1();
        // exp(1e-20) - 1 = 1e-20 + 5e-41
        assert!(((e - x) / x).to_f64() - 5e-21 < 1e-30);
        let l = x.ln_1p();
        assert!(((l - x) / x).to_f64() + 5e-21 < 1e-30);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let r = DoubleDouble::from(2.0).sqrt();
        assert!((r.square() - 2.0).abs().to_f64() < 1e-31);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = DoubleDouble::from(1.3);
        let mut p = DoubleDouble::ONE;
        for _ in 0..7 {
            p *= x;
        }
        assert!(close(x.powi(7), p, 1e-31));
        assert!(close(x.powi(-7), p.recip(), 1e-31));
    }

    #[test]
    fn ordering_uses_low_word() {
        let a = DoubleDouble::new(1.0, 1e-20);
        let b = DoubleDouble::new(1.0, -1e-20);
        assert!(a > b);
    }
}
