//! Exact rational arithmetic for thresholds and certificate claims.
//!
//! Every strict inequality taken from a lemma statement is evaluated here,
//! never in floating point. Fractional exponents are handled by integer
//! cross-powering (`u >= v^(p/q)` iff `u^q >= v^p` for positive values);
//! astronomically large integer exponents are clamped downward only in the
//! direction that strengthens the claim being recorded.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// An exact rational number. Serializes as `"p/q"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_usize(v: usize) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_u128(v: u128) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rat(BigRational::from_integer(v))
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Rat(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.clone().recip())
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact integer power with i64 exponent (negative allowed for nonzero base).
    pub fn pow(&self, exp: i64) -> Self {
        Rat(self.0.pow(
            i32::try_from(exp).expect("exponent fits i32 after clamping"),
        ))
    }

    /// `self^min(exp, clamp)`. Clamping the exponent down strengthens claims of
    /// the form `x >= base^e * y` for `base <= 1` and `x <= base^e * y` for
    /// `base >= 1`, which are the only forms the crate records with huge `e`.
    pub fn pow_clamped(&self, exp: u128, clamp: u32) -> Self {
        let e = exp.min(clamp as u128) as i64;
        self.pow(e)
    }

    /// Largest integer `m >= 0` with `2^m <= self`, for `self >= 1`.
    pub fn floor_log2(&self) -> u32 {
        assert!(*self >= Rat::one());
        let mut m = 0;
        let mut p = Rat::one();
        let two = Rat::from_int(2);
        while &p * &two <= *self {
            p = &p * &two;
            m += 1;
        }
        m
    }

    /// Least integer `m` with `2^m >= self`, for `self > 0` (so `ceil(log2 self)`,
    /// possibly negative).
    pub fn ceil_log2(&self) -> i64 {
        assert!(self.is_positive());
        let mut m: i64 = 0;
        let mut p = Rat::one();
        let two = Rat::from_int(2);
        let half = Rat::new(1, 2);
        if p >= *self {
            while &p * &half >= *self {
                p = &p * &half;
                m -= 1;
            }
            return m;
        }
        while p < *self {
            p = &p * &two;
            m += 1;
        }
        m
    }

    /// Exact check of `self >= base^(p/q)` for positive `self`, `base` and
    /// positive integers `p`, `q`, via cross-powering.
    pub fn ge_pow_frac(&self, base: &Rat, p: u32, q: u32) -> bool {
        assert!(self.is_positive() && base.is_positive());
        self.pow(q as i64) >= base.pow(p as i64)
    }

    /// Exact check of `self <= base^(p/q)`.
    pub fn le_pow_frac(&self, base: &Rat, p: u32, q: u32) -> bool {
        assert!(self.is_positive() && base.is_positive());
        self.pow(q as i64) <= base.pow(p as i64)
    }

    /// Exact square root when numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let n = self.0.numer().sqrt();
        let d = self.0.denom().sqrt();
        if &(&n * &n) == self.0.numer() && &(&d * &d) == self.0.denom() {
            Some(Rat(BigRational::new(n, d)))
        } else {
            None
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64_lossy(&self) -> f64 {
        let num = self.0.numer();
        let den = self.0.denom();
        // Good enough for reporting; never used for inequality testing.
        let nf: f64 = num.to_string().parse().unwrap_or(f64::NAN);
        let df: f64 = den.to_string().parse().unwrap_or(f64::NAN);
        nf / df
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator: {e}"))?;
        let den = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rat::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Rat = "3/512".parse().unwrap();
        assert_eq!(r, Rat::new(3, 512));
        assert_eq!(r.to_string(), "3/512");
        let i: Rat = "7".parse().unwrap();
        assert_eq!(i.to_string(), "7/1");
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn cross_powering() {
        // 3 >= 8^(1/2) ? 9 >= 8 yes
        assert!(Rat::from_int(3).ge_pow_frac(&Rat::from_int(8), 1, 2));
        // 2 >= 8^(1/2) ? 4 >= 8 no
        assert!(!Rat::from_int(2).ge_pow_frac(&Rat::from_int(8), 1, 2));
        // 6 >= sqrt(1/8)^-1 ... k >= y^(-1/2) with y = 1/8: k^2 * y >= 1
        let y = Rat::new(1, 8);
        assert!(&(&Rat::from_int(6) * &Rat::from_int(6)) * &y >= Rat::one());
    }

    #[test]
    fn logs() {
        assert_eq!(Rat::from_int(8).floor_log2(), 3);
        assert_eq!(Rat::from_int(9).floor_log2(), 3);
        assert_eq!(Rat::from_int(2).ceil_log2(), 1);
        // ceil(log2(1/eps)) for eps = 1/2 is 1; for eps = 1/3 it is 2
        assert_eq!(Rat::new(2, 1).ceil_log2(), 1);
        assert_eq!(Rat::new(3, 1).ceil_log2(), 2);
        assert_eq!(Rat::new(1, 4).ceil_log2(), -2);
    }

    #[test]
    fn clamped_powers_strengthen() {
        // base < 1: base^clamp >= base^huge, so "x >= base^clamp * y" is the
        // stronger claim.
        let half = Rat::new(1, 2);
        let clamped = half.pow_clamped(u128::MAX, 200);
        assert_eq!(clamped, half.pow(200));
    }
}
