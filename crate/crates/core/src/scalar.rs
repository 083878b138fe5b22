//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Rough size of the representation; used to pick simple pivots.
    pub fn complexity(&self) -> u64 {
        fn bits(q: &BigRational) -> u64 {
            q.numer().bits() + q.denom().bits()
        }
        bits(&self.re) + bits(&self.im)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `[re_num, re_den, im_num, im_den]`, or `None` if a part does not fit in `i64`.
    pub fn to_parts(&self) -> Option<[i64; 4]> {
        fn small(x: &BigInt) -> Option<i64> {
            x.to_i64()
        }
        Some([
            small(self.re.numer())?,
            small(self.re.denom())?,
            small(self.im.numer())?,
            small(self.im.denom())?,
        ])
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        // Fast paths: the structure constants are almost always real integers.
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::new(&self.re * &rhs.re, BigRational::zero());
        }
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let z = GaussRat::from_parts(1, 2, 3, 4);
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GaussRat::one());
        assert_eq!(GaussRat::i() * GaussRat::i(), GaussRat::from_int(-1));
        assert_eq!(z.conj().conj(), z);
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(GaussRat::from_parts(1, 2, -3, 1).to_string(), "1/2-3i");
        assert_eq!(GaussRat::from_int(5).to_string(), "5");
        assert_eq!(GaussRat::i().to_string(), "1i");
    }
}
