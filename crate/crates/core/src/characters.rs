//! Characters of the p-adic integers with values in the unit circle.
//!
//! Every continuous character has finite order `p^n` and is determined by a
//! numerator `m` coprime to `p` with `1 <= m < p^n` (the trivial character is
//! `n = 0`, `m = 0`). Applied to a value `x` it reads only the first `n`
//! digits: `x  |->  exp(2 pi i * m * truncate(x, n) / p^n)`. Phases are kept
//! as exact integers modulo `p^n` until the final single sin/cos call, so
//! evaluation at 0 is exactly 1 and no rounding accumulates across digits.

use crate::error::{Error, Result};
use crate::padic::{PadicApprox, Prime};
use num::complex::Complex64;
use std::fmt;

/// Character enumeration and direct evaluation stay inside u64 tables; this
/// caps `p^n` for constructed characters.
const MAX_ORDER_EXPONENT_BITS: u32 = 62;

/// Hard ceiling for full-level enumeration (`p^K` characters).
const MAX_ENUMERATION: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Character {
    p: Prime,
    level: u32,
    numerator: u64,
}

impl Character {
    pub fn trivial(p: Prime) -> Character {
        Character {
            p,
            level: 0,
            numerator: 0,
        }
    }

    /// A character of exact order `p^level` with numerator `m`.
    pub fn new(p: Prime, level: u32, m: u64) -> Result<Character> {
        if level == 0 {
            return if m == 0 {
                Ok(Character::trivial(p))
            } else {
                Err(Error::BadCharacter {
                    p: p.get(),
                    level,
                    m,
                })
            };
        }
        if (level as u64) * (64 - (p.get() as u64).leading_zeros() as u64)
            > MAX_ORDER_EXPONENT_BITS as u64
        {
            return Err(Error::SizeLimit { exponent: level });
        }
        let order = p.pow_u64(level)?;
        if m == 0 || m >= order || m % p.get() as u64 == 0 {
            return Err(Error::BadCharacter {
                p: p.get(),
                level,
                m,
            });
        }
        Ok(Character {
            p,
            level,
            numerator: m,
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    /// Exponent `n` with order `p^n`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn order(&self) -> u64 {
        self.p.pow_u64(self.level).expect("validated at construction")
    }

    pub fn is_trivial(&self) -> bool {
        self.level == 0
    }

    /// The complex-conjugate character (numerator `p^n - m`).
    pub fn conjugate(&self) -> Character {
        if self.is_trivial() {
            *self
        } else {
            Character {
                p: self.p,
                level: self.level,
                numerator: self.order() - self.numerator,
            }
        }
    }

    /// Exact phase numerator: `m * truncate(x, n) mod p^n`.
    fn phase(&self, x: &PadicApprox) -> Result<u64> {
        if x.precision() < self.level {
            return Err(Error::Precision {
                needed: self.level,
                available: x.precision(),
            });
        }
        let order = self.order() as u128;
        let t = x.truncate(self.level)?;
        Ok(((self.numerator as u128 * t) % order) as u64)
    }

    /// Evaluates the character at `x`, which must carry at least `n` digits.
    pub fn eval(&self, x: &PadicApprox) -> Result<Complex64> {
        let phase = self.phase(x)?;
        if phase == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let angle = std::f64::consts::TAU * phase as f64 / self.order() as f64;
        Ok(Complex64::new(angle.cos(), angle.sin()))
    }

    /// Evaluates the conjugate character at `x` without constructing it.
    pub fn eval_conj(&self, x: &PadicApprox) -> Result<Complex64> {
        Ok(self.eval(x)?.conj())
    }

    /// Serialized form `p^n:m`, e.g. `2^3:5`.
    pub fn label(&self) -> String {
        format!("{}^{}:{}", self.p.get(), self.level, self.numerator)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// All nontrivial characters of order at most `p^max_level` in canonical
/// order: ascending level, then ascending numerator. There are exactly
/// `p^max_level - 1` of them, `p^n - p^{n-1}` of each exact order `p^n`.
pub fn enumerate_nontrivial(p: Prime, max_level: u32) -> Result<Vec<Character>> {
    let total = p.pow_u64(max_level)?;
    if total > MAX_ENUMERATION {
        return Err(Error::SizeLimit {
            exponent: max_level,
        });
    }
    let mut out = Vec::with_capacity((total - 1) as usize);
    for level in 1..=max_level {
        let order = p.pow_u64(level)?;
        for m in 1..order {
            if m % p.get() as u64 != 0 {
                out.push(Character {
                    p,
                    level,
                    numerator: m,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn construction_validation() {
        assert!(Character::new(p(2), 3, 5).is_ok());
        assert!(Character::new(p(2), 0, 0).is_ok());
        // Numerator must be nonzero, in range, and coprime to p.
        assert!(Character::new(p(2), 3, 0).is_err());
        assert!(Character::new(p(2), 3, 8).is_err());
        assert!(Character::new(p(2), 3, 4).is_err());
        assert!(Character::new(p(3), 2, 6).is_err());
        assert!(Character::new(p(2), 0, 1).is_err());
    }

    #[test]
    fn order_and_label() {
        let z = Character::new(p(3), 3, 7).unwrap();
        assert_eq!(z.order(), 27);
        assert_eq!(z.label(), "3^3:7");
        assert_eq!(Character::trivial(p(2)).label(), "2^0:0");
    }

    #[test]
    fn enumeration_counts_and_order() {
        let two = enumerate_nontrivial(p(2), 2).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(
            two.iter().map(Character::label).collect::<Vec<_>>(),
            ["2^1:1", "2^2:1", "2^2:3"]
        );

        let three = enumerate_nontrivial(p(3), 2).unwrap();
        assert_eq!(three.len(), 8);

        for (base, max_level) in [(2u64, 8u32), (3, 5), (5, 4)] {
            let base = p(base);
            let chars = enumerate_nontrivial(base, max_level).unwrap();
            assert_eq!(chars.len() as u64, base.pow_u64(max_level).unwrap() - 1);
            for level in 1..=max_level {
                let per_level =
                    chars.iter().filter(|c| c.level() == level).count() as u64;
                let order = base.pow_u64(level).unwrap();
                assert_eq!(per_level, order - order / base.get() as u64);
            }
        }
    }

    #[test]
    fn eval_example_order_four() {
        let z = Character::new(p(2), 2, 1).unwrap();
        let x = PadicApprox::from_integer(3, p(2), 4);
        let v = z.eval(&x).unwrap();
        // exp(2 pi i * 3/4) = -i
        assert!((v.re - 0.0).abs() < 1e-15);
        assert!((v.im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_at_zero_is_exactly_one() {
        for base in [p(2), p(3), p(5)] {
            let zero = PadicApprox::zero(base, 6);
            for z in enumerate_nontrivial(base, 3).unwrap() {
                assert_eq!(z.eval(&zero).unwrap(), Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn eval_requires_precision() {
        let z = Character::new(p(2), 3, 3).unwrap();
        let x = PadicApprox::from_integer(1, p(2), 2);
        assert_eq!(
            z.eval(&x),
            Err(Error::Precision {
                needed: 3,
                available: 2
            })
        );
    }

    #[test]
    fn homomorphism_exhaustive() {
        // eval(x + y) = eval(x) * eval(y) for every pair of residues,
        // every character of level <= 3, p in {2, 3}.
        for base in [p(2), p(3)] {
            let precision = 3u32;
            let count = base.pow_u64(precision).unwrap() as i64;
            let values: Vec<_> = (0..count)
                .map(|v| PadicApprox::from_integer(v, base, precision))
                .collect();
            let mut chars = enumerate_nontrivial(base, precision).unwrap();
            chars.push(Character::trivial(base));
            for z in &chars {
                for x in &values {
                    for y in &values {
                        let lhs = z.eval(&x.add(y).unwrap()).unwrap();
                        let rhs = z.eval(x).unwrap() * z.eval(y).unwrap();
                        assert!(
                            (lhs - rhs).norm() < 1e-12,
                            "{z} at {x}, {y}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn depends_only_on_truncation() {
        // Changing digits above the character level never changes the value.
        let z = Character::new(p(3), 2, 2).unwrap();
        let x = PadicApprox::from_digits(vec![1, 2, 0, 0], p(3)).unwrap();
        let y = PadicApprox::from_digits(vec![1, 2, 2, 1], p(3)).unwrap();
        assert_eq!(z.eval(&x).unwrap(), z.eval(&y).unwrap());
    }

    #[test]
    fn distinct_characters_differ_at_one() {
        for base in [p(2), p(3)] {
            let one = PadicApprox::one(base, 4);
            let chars = enumerate_nontrivial(base, 3).unwrap();
            let values: Vec<Complex64> =
                chars.iter().map(|z| z.eval(&one).unwrap()).collect();
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    assert!(
                        (values[i] - values[j]).norm() > 1e-9,
                        "{} and {} coincide at 1",
                        chars[i],
                        chars[j]
                    );
                }
            }
        }
    }

    #[test]
    fn conjugate_pairs() {
        for z in enumerate_nontrivial(p(5), 2).unwrap() {
            let x = PadicApprox::from_integer(7, p(5), 4);
            let direct = z.conjugate().eval(&x).unwrap();
            let conj = z.eval(&x).unwrap().conj();
            assert!((direct - conj).norm() < 1e-14);
        }
        let t = Character::trivial(p(5));
        assert_eq!(t.conjugate(), t);
    }

    #[test]
    fn enumeration_size_guard() {
        assert!(matches!(
            enumerate_nontrivial(p(2), 40),
            Err(Error::SizeLimit { .. })
        ));
    }
}
