use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Operations are total on validated inputs; each variant corresponds to a
/// contract violation that callers can hit with untrusted input (CLI flags,
/// sequence files) and is therefore reported instead of panicking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported maximum 2^16")]
    PrimeTooLarge(u64),

    #[error("operands use different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),

    #[error("operands carry different precisions ({0} and {1} digits)")]
    PrecisionMismatch(u32, u32),

    #[error("operation needs {needed} digits but the value carries {available}")]
    Precision { needed: u32, available: u32 },

    #[error("invalid digit {digit} for base {p}")]
    DigitOutOfRange { digit: u32, p: u32 },

    #[error("character numerator {m} invalid for level {level} (base {p})")]
    BadCharacter { p: u32, level: u32, m: u64 },

    #[error("p^{exponent} exceeds the supported size limit")]
    SizeLimit { exponent: u32 },

    #[error("disc center {center} is not a residue modulo p^{depth}")]
    BadCenter { center: u128, depth: u32 },

    #[error("radius must be a power p^-k with k >= 1")]
    RadiusOutOfRange,

    #[error("sequence is empty")]
    EmptySequence,

    #[error("value {value} is out of range [0, p^{precision})")]
    ResidueOutOfRange { value: String, precision: u32 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("geometric ratio is degenerate: the character is trivial on the step")]
    DegenerateRatio,

    #[error("verification failed in {check}: {detail}")]
    Verification { check: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
