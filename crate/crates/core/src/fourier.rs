//! Closed-form Fourier data on Z_p: coefficients of disc indicator
//! functions, the radial integral of |y| against a character over a ball,
//! and brute-force Haar-integration oracles that certify both.
//!
//! When the coefficients of a function are absolutely summable, the function
//! is recovered pointwise as the sum of coefficient times character. Nothing
//! here needs that expansion algorithmically, so only the coefficient side
//! carries code.

use std::f64::consts::TAU;

use num::complex::Complex64;
use num::integer::gcd;
use num::rational::BigRational;
use num::{BigInt, Zero};

use crate::characters::Character;
use crate::discrepancy::Disc;
use crate::error::{Error, Result};
use crate::padic::Prime;
use crate::ratio::{big_pow, ratio, ratio_f64};

/// Largest residue count `haar_integrate` will enumerate.
const MAX_ORACLE_RESIDUES: u64 = 1 << 26;

/// A Fourier coefficient of a disc indicator: an exact nonnegative rational
/// magnitude times the root of unity e^{2 pi i num/den}.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscCoeff {
    magnitude: BigRational,
    phase_num: u64,
    phase_den: u64,
}

impl DiscCoeff {
    pub fn zero() -> DiscCoeff {
        DiscCoeff {
            magnitude: BigRational::zero(),
            phase_num: 0,
            phase_den: 1,
        }
    }

    fn new(magnitude: BigRational, num: u64, den: u64) -> DiscCoeff {
        let num = num % den;
        let g = gcd(num, den);
        DiscCoeff {
            magnitude,
            phase_num: num / g,
            phase_den: den / g,
        }
    }

    pub fn magnitude(&self) -> &BigRational {
        &self.magnitude
    }

    /// Phase as a reduced fraction of a full turn, in [0, 1).
    pub fn phase(&self) -> (u64, u64) {
        (self.phase_num, self.phase_den)
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.magnitude.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = ratio_f64(&self.magnitude);
        if self.phase_num == 0 {
            return Complex64::new(m, 0.0);
        }
        let angle = TAU * self.phase_num as f64 / self.phase_den as f64;
        Complex64::new(m * angle.cos(), m * angle.sin())
    }
}

/// Coefficient of the indicator of `disc` against `zeta`: the integral of
/// indicator times conjugated character.
///
/// When the character order divides the disc modulus the character is
/// constant on the disc and the coefficient is that constant conjugated,
/// zeta^{-a}, times the measure p^{-k}. Otherwise the disc is a union of
/// cosets of a subgroup on which the character averages to zero, and the
/// coefficient is exactly zero.
pub fn disc_fourier_coeff(disc: &Disc, zeta: &Character) -> Result<DiscCoeff> {
    if disc.p() != zeta.p() {
        return Err(Error::PrimeMismatch(disc.p().get(), zeta.p().get()));
    }
    if zeta.level() > disc.depth() {
        return Ok(DiscCoeff::zero());
    }
    let magnitude = ratio(1, big_pow(disc.p().get(), disc.depth()));
    if zeta.is_trivial() {
        return Ok(DiscCoeff::new(magnitude, 0, 1));
    }
    let order = zeta.order();
    let a = (disc.center() % order as u128) as u64;
    let forward = ((zeta.numerator() as u128 * a as u128) % order as u128) as u64;
    Ok(DiscCoeff::new(magnitude, (order - forward) % order, order))
}

/// Exact Haar integral of a function constant on discs of depth `d`:
/// the average of `g` over residues mod p^d. Depth 0 admits only globally
/// constant functions and returns `g(0)`.
pub fn haar_integrate<F: Fn(u64) -> Complex64>(p: Prime, d: u32, g: F) -> Result<Complex64> {
    let modulus = p.pow_u64(d)?;
    if modulus > MAX_ORACLE_RESIDUES {
        return Err(Error::SizeLimit { exponent: d });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..modulus {
        sum += g(r);
    }
    Ok(sum / modulus as f64)
}

/// The integral of |y| omega^{-y} over the ball |y| <= R, with the inputs
/// that produced it. R = p^{-radius_exponent} and the value is real.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialIntegral {
    pub radius_exponent: u32,
    pub omega: Character,
    pub value: BigRational,
}

impl RadialIntegral {
    /// Coarse magnitude estimate the value always obeys:
    /// p / max(1/R, order of omega)^2.
    pub fn magnitude_bound(&self) -> BigRational {
        let p = self.omega.p().get();
        let e = self.radius_exponent.max(self.omega.level());
        ratio(p, big_pow(p, 2 * e))
    }
}

/// Integral of |y| omega^{-y} over the ball of radius R = p^{-k}, k >= 1.
///
/// Splitting the ball into shells |y| = p^{-j} gives a geometric series:
/// p R^2/(p+1) when the order of omega is at most 1/R. A character of
/// larger order p^l cancels every shell except |y| = p^{1-l}, leaving
/// -p^2/((p+1) p^{2l}).
pub fn radial_integral(p: Prime, k: u32, omega: &Character) -> Result<RadialIntegral> {
    if p != omega.p() {
        return Err(Error::PrimeMismatch(p.get(), omega.p().get()));
    }
    if k == 0 {
        return Err(Error::RadiusOutOfRange);
    }
    let pb = BigInt::from(p.get());
    let l = omega.level();
    let value = if l <= k {
        ratio(pb.clone(), (pb + 1) * big_pow(p.get(), 2 * k))
    } else {
        ratio(-(pb.clone() * pb.clone()), (pb + 1) * big_pow(p.get(), 2 * l))
    };
    Ok(RadialIntegral {
        radius_exponent: k,
        omega: *omega,
        value,
    })
}

/// Sum of squared radial integrals over the whole dual group, in closed
/// form, paired with the coarse bound 2 p^2 R^3.
///
/// The p^k characters of order at most 1/R contribute (p R^2/(p+1))^2 each;
/// the p^l - p^{l-1} characters of order p^l > 1/R contribute
/// p^4/((p+1)^2 p^{4l}) each, summing to a geometric series in p^{-3l}.
pub fn radial_sq_sum(p: Prime, k: u32) -> Result<(BigRational, BigRational)> {
    if k == 0 {
        return Err(Error::RadiusOutOfRange);
    }
    let pb = BigInt::from(p.get());
    let p3 = pb.clone() * pb.clone() * pb.clone();
    let sq: BigInt = (pb.clone() + 1) * (pb.clone() + 1);
    let head = ratio(pb.clone() * pb.clone(), sq.clone());
    let tail = ratio(p3.clone() * (pb.clone() - 1), sq * (p3 - 1));
    let r3 = ratio(1, big_pow(p.get(), 3 * k));
    let exact = (head + tail) * r3.clone();
    let bound = ratio(BigInt::from(2) * pb.clone() * pb, big_pow(p.get(), 3 * k));
    Ok((exact, bound))
}
