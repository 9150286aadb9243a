//! The scalar interface shared by every algebraic computation in the crate.
//!
//! Computations are written once against [`Field`] and run either
//! symbolically ([`RatFunc`](super::RatFunc)), over exact rationals
//! ([`BigRational`]), or modulo the Mersenne prime 2^61 − 1 ([`Fp`]).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// A short label for reports: "symbolic", "rational" or "mod-p".
    fn mode_name() -> &'static str;
}

/// Sum of an iterator of field elements.
pub fn sum<'a, F: Field, I: IntoIterator<Item = &'a F>>(it: I) -> F {
    it.into_iter().fold(F::zero(), |acc, x| acc.add(x))
}

/// Product of an iterator of field elements.
pub fn product<'a, F: Field, I: IntoIterator<Item = &'a F>>(it: I) -> F {
    it.into_iter().fold(F::one(), |acc, x| acc.mul(x))
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn mode_name() -> &'static str {
        "rational"
    }
}

/// The prime modulus 2^61 − 1 used for randomized identity testing.
pub const MODULUS: u64 = (1u64 << 61) - 1;

/// A residue modulo [`MODULUS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let m = MODULUS as u128;
        let lo = x & m;
        let hi = x >> 61;
        let mut s = lo + hi;
        while s >= m {
            s -= m;
        }
        s as u64
    }

    fn pow_u(self, mut e: u64) -> Fp {
        let mut b = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &b);
            }
            b = Field::mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Uniform nonzero residue.
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Fp {
        Fp(rng.gen_range(1..MODULUS))
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^61-1)", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let mut r = n % &m;
        if r.is_negative() {
            r += &m;
        }
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }
    fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(MODULUS as i64);
        Fp(r as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + MODULUS - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * o.0 as u128))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
    fn inv(&self) -> Result<Self> {
        if self.0 == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.pow_u(MODULUS - 2))
        }
    }
    fn mode_name() -> &'static str {
        "mod-p"
    }
}

/// Draws a nonzero rational with numerator and denominator bounded by `bound`
/// in absolute value, numerator sign uniform.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    let n: i64 = rng.gen_range(1..=bound);
    let d: i64 = rng.gen_range(1..=bound);
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(BigInt::from(s * n), BigInt::from(d))
}

/// Scalars that can be drawn at random for Schwartz–Zippel style testing.
pub trait Sample: Field {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Numerator/denominator bound for random rational specializations.
pub const RATIONAL_SAMPLE_BOUND: i64 = 1_000_000;

impl Sample for Fp {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp::random_nonzero(rng)
    }
}

impl Sample for BigRational {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        random_rational(rng, RATIONAL_SAMPLE_BOUND)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fp_inverse() {
        let a = Fp::new(123456789);
        assert!(Field::mul(&a, &a.inv().unwrap()).is_one());
        assert_eq!(Fp::from_i64(-1), Fp(MODULUS - 1));
        assert_eq!(Fp::from_bigint(&BigInt::from(-1)), Fp(MODULUS - 1));
        assert!(Fp::zero().inv().is_err());
    }

    proptest! {
        #[test]
        fn fp_mul_matches_bigint(a in 0u64..MODULUS, b in 0u64..MODULUS) {
            let prod = Field::mul(&Fp(a), &Fp(b));
            let expect = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(MODULUS);
            prop_assert_eq!(BigInt::from(prod.0), expect);
        }
    }
}
