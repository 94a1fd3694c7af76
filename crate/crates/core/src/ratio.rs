//! Small helpers around exact big-rational arithmetic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::ToPrimitive;

/// `base^exp` as a big integer.
pub fn big_pow(base: u32, exp: u32) -> BigInt {
    num::pow::pow(BigInt::from(base), exp as usize)
}

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Canonical `num/den` rendering (always includes the denominator).
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_reduced_and_signed() {
        assert_eq!(ratio_string(&ratio(2, 8)), "1/4");
        assert_eq!(ratio_string(&ratio(-2, 8)), "-1/4");
        assert_eq!(ratio_string(&ratio(3, 1)), "3/1");
        assert_eq!(ratio_string(&ratio(0, 5)), "0/1");
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(ratio_f64(&ratio(1, 4)), 0.25);
        assert!((ratio_f64(&ratio(2, 21)) - 2.0 / 21.0).abs() < 1e-15);
    }
}
