use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Rational;

/// Scalar operations needed by the elimination kernels.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;

    /// `self - a * b`
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self.sub(&a.mul(b))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Residue class modulo [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp(pub u64);

impl Fp {
    fn reduce(x: u128) -> u64 {
        // x mod 2^61-1 via the Mersenne folding identity
        let lo = (x as u64) & MODULUS;
        let hi = (x >> 61) as u64;
        let mut s = lo + (hi & MODULUS) + ((x >> 122) as u64);
        while s >= MODULUS {
            s -= MODULUS;
        }
        s
    }

    pub fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(MODULUS as i64);
        Fp(r as u64)
    }

    fn from_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let r = ((n % &m) + &m) % &m;
        Fp(r.to_u64().expect("residue fits"))
    }

    /// Image of a rational number, or `None` when the denominator vanishes
    /// modulo the prime.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let (num, den) = match r.as_small() {
            Some((n, d)) => (Fp::from_i64(n), Fp::from_i64(d)),
            None => (Fp::from_bigint(&r.numer()), Fp::from_bigint(&r.denom())),
        };
        if den.0 == 0 {
            None
        } else {
            Some(num.mul(&den.inv()))
        }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + MODULUS - rhs.0
        })
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * rhs.0 as u128))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero residue");
        self.pow(MODULUS - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse() {
        for n in [1i64, 2, 3, 12345, -7, MODULUS as i64 - 1] {
            let x = Fp::from_i64(n);
            assert_eq!(Field::mul(&x, &x.inv()), Fp(1));
        }
    }

    #[test]
    fn rational_image() {
        let half = Fp::from_rational(&Rational::new(1, 2)).unwrap();
        assert_eq!(Field::add(&half, &half), Fp(1));
        let neg = Fp::from_rational(&Rational::from_int(-1)).unwrap();
        assert_eq!(Field::add(&neg, &Fp(1)), Fp(0));
    }

    #[test]
    fn reduce_wraps() {
        let a = Fp(MODULUS - 1);
        assert_eq!(Field::mul(&a, &a), Fp(1));
    }
}
