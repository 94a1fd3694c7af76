//! Fixed-precision p-adic integers.
//!
//! A value is stored as its first `K` canonical digits `a_0, a_1, ..., a_{K-1}`
//! (little-endian: `x = a_0 + a_1 p + a_2 p^2 + ...` with `0 <= a_i < p`), which
//! identifies the disc `x + p^K Z_p` of radius `p^-K`. Arithmetic is exact on
//! those digits; precision never grows or shrinks implicitly, and mixing
//! precisions or primes is an error rather than a coercion.

use crate::error::{Error, Result};
use num::bigint::BigUint;
use num::traits::Zero;
use std::fmt;

/// A validated prime base, `2 <= p <= 2^16`.
///
/// The upper limit keeps every digit product inside 64-bit intermediates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p > 1 << 16 {
            return Err(Error::PrimeTooLarge(p));
        }
        let p32 = p as u32;
        if p32 < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u32;
        while d * d <= p32 {
            if p32 % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `p^exp` if it fits in a u64.
    pub fn pow_u64(self, exp: u32) -> Result<u64> {
        let mut acc = 1u64;
        for _ in 0..exp {
            acc = acc
                .checked_mul(self.0 as u64)
                .ok_or(Error::SizeLimit { exponent: exp })?;
        }
        Ok(acc)
    }

    /// `p^exp` if it fits in a u128.
    pub fn pow_u128(self, exp: u32) -> Result<u128> {
        let mut acc = 1u128;
        for _ in 0..exp {
            acc = acc
                .checked_mul(self.0 as u128)
                .ok_or(Error::SizeLimit { exponent: exp })?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Absolute value of a fixed-precision p-adic integer.
///
/// `Exact { exponent: j }` means `|x| = p^-j` (first nonzero digit at index
/// `j`). A value whose stored digits are all zero is only known to satisfy
/// `|x| <= p^-K`; that state is kept distinct instead of being conflated with
/// the rational number 0 or with `p^-K` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicAbs {
    Exact { exponent: u32 },
    BelowResolution { precision: u32 },
}

impl PadicAbs {
    /// Exponent `e` such that `|x| <= p^-e` is known to hold.
    pub fn upper_bound_exponent(self) -> u32 {
        match self {
            PadicAbs::Exact { exponent } => exponent,
            PadicAbs::BelowResolution { precision } => precision,
        }
    }

    pub fn is_one(self) -> bool {
        self == PadicAbs::Exact { exponent: 0 }
    }
}

/// A p-adic integer known to precision `K`: exactly `K` canonical digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    p: Prime,
    digits: Vec<u32>,
}

impl PadicApprox {
    /// Builds from explicit little-endian digits. Digits must lie in `[0, p)`
    /// and at least one digit must be present.
    pub fn from_digits(digits: Vec<u32>, p: Prime) -> Result<PadicApprox> {
        if digits.is_empty() {
            return Err(Error::Precision {
                needed: 1,
                available: 0,
            });
        }
        for &d in &digits {
            if d >= p.get() {
                return Err(Error::DigitOutOfRange { digit: d, p: p.get() });
            }
        }
        Ok(PadicApprox { p, digits })
    }

    /// Canonical expansion of an ordinary integer, reduced into `[0, p^K)`.
    /// Negative inputs wrap: `from_integer(-1, 3, 3)` has digits `[2, 2, 2]`.
    pub fn from_integer(v: i64, p: Prime, precision: u32) -> PadicApprox {
        assert!(precision >= 1, "precision must be at least 1");
        let pw = p.get() as i128;
        let mut v = v as i128;
        let mut digits = Vec::with_capacity(precision as usize);
        for _ in 0..precision {
            let mut r = v % pw;
            if r < 0 {
                r += pw;
            }
            digits.push(r as u32);
            v = (v - r) / pw;
        }
        PadicApprox { p, digits }
    }

    /// Builds from a nonnegative residue that must already lie in `[0, p^K)`.
    pub fn from_residue(value: &BigUint, p: Prime, precision: u32) -> Result<PadicApprox> {
        assert!(precision >= 1, "precision must be at least 1");
        let pw = BigUint::from(p.get());
        let mut v = value.clone();
        let mut digits = Vec::with_capacity(precision as usize);
        for _ in 0..precision {
            let d = (&v % &pw)
                .try_into()
                .expect("digit below p fits in u32");
            digits.push(d);
            v /= &pw;
        }
        if !v.is_zero() {
            return Err(Error::ResidueOutOfRange {
                value: value.to_string(),
                precision,
            });
        }
        Ok(PadicApprox { p, digits })
    }

    pub fn zero(p: Prime, precision: u32) -> PadicApprox {
        PadicApprox::from_integer(0, p, precision)
    }

    pub fn one(p: Prime, precision: u32) -> PadicApprox {
        PadicApprox::from_integer(1, p, precision)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    fn check_compatible(&self, other: &PadicApprox) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        if self.digits.len() != other.digits.len() {
            return Err(Error::PrecisionMismatch(
                self.precision(),
                other.precision(),
            ));
        }
        Ok(())
    }

    /// Digit addition with carry, exact modulo `p^K`.
    pub fn add(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.check_compatible(other)?;
        let pw = self.p.get() as u64;
        let mut carry = 0u64;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| {
                let s = a as u64 + b as u64 + carry;
                carry = s / pw;
                (s % pw) as u32
            })
            .collect();
        Ok(PadicApprox { p: self.p, digits })
    }

    /// Schoolbook digit multiplication, exact modulo `p^K`.
    pub fn mul(&self, other: &PadicApprox) -> Result<PadicApprox> {
        self.check_compatible(other)?;
        let pw = self.p.get() as u64;
        let k = self.digits.len();
        let mut digits = Vec::with_capacity(k);
        let mut carry = 0u64;
        for j in 0..k {
            // Column sum stays below K * p^2 + carry, well inside u64.
            let mut s = carry;
            for i in 0..=j {
                s += self.digits[i] as u64 * other.digits[j - i] as u64;
            }
            digits.push((s % pw) as u32);
            carry = s / pw;
        }
        Ok(PadicApprox { p: self.p, digits })
    }

    /// A p-adic integer is a unit iff its absolute value is 1, i.e. the
    /// constant digit is nonzero.
    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    pub fn abs(&self) -> PadicAbs {
        match self.digits.iter().position(|&d| d != 0) {
            Some(j) => PadicAbs::Exact { exponent: j as u32 },
            None => PadicAbs::BelowResolution {
                precision: self.precision(),
            },
        }
    }

    /// The integer `a_0 + a_1 p + ... + a_{n-1} p^{n-1}` in `[0, p^n)` read off
    /// the first `n` digits. `truncate(x, 0) = 0`.
    pub fn truncate(&self, n: u32) -> Result<u128> {
        if n > self.precision() {
            return Err(Error::Precision {
                needed: n,
                available: self.precision(),
            });
        }
        let pw = self.p.get() as u128;
        let mut acc: u128 = 0;
        for &d in self.digits[..n as usize].iter().rev() {
            acc = acc
                .checked_mul(pw)
                .and_then(|a| a.checked_add(d as u128))
                .ok_or(Error::SizeLimit { exponent: n })?;
        }
        Ok(acc)
    }

    /// Value of the full digit string as an ordinary integer.
    pub fn to_biguint(&self) -> BigUint {
        let pw = BigUint::from(self.p.get());
        let mut acc = BigUint::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * &pw + BigUint::from(d);
        }
        acc
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (base {})", self.to_biguint(), self.p)
    }
}
