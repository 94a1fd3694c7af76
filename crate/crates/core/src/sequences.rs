//! Finite sequences of fixed-precision p-adic integers.
//!
//! A [`SequenceSpec`] is a recipe: arithmetic progressions `n*a + b`
//! (n = 1..=N), explicit digit lists, or seeded random digits. `generate`
//! realizes the recipe; the text format lets sequences round-trip through
//! files.
//!
//! # Random sequences, generator version 1
//!
//! Random digits come from SplitMix64 (Steele-Lea-Flood finalizer) applied to
//! the raw seed: each call advances the state by 0x9E3779B97F4A7C15 and mixes
//! with the 30/27/31 xor-shift-multiply chain. Digits are drawn element-major
//! (all K digits of the first element, then the second, ...) by rejection
//! sampling: a 64-bit output `x` is discarded iff `x >= 2^64 - (2^64 mod p)`,
//! otherwise the digit is `x mod p`. This pins the byte-exact digit stream
//! for a given `(p, K, N, seed)` across platforms and releases; any change
//! to the scheme must bump this documented version.

use crate::error::{Error, Result};
use crate::padic::{PadicApprox, Prime};
use num::bigint::BigUint;
use std::fmt;

/// SplitMix64 stream; see the module docs for the exact contract.
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform digit in `[0, p)` by rejection, so there is no modulo bias.
    fn digit(&mut self, p: u64) -> u32 {
        // 2^64 mod p; outputs at or above 2^64 - rem are rejected.
        let rem = (u64::MAX % p + 1) % p;
        loop {
            let x = self.next_u64();
            if rem == 0 || x < u64::MAX - rem + 1 {
                return (x % p) as u32;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceVariant {
    /// `alpha_n = n*a + b` for `n = 1..=N`.
    Linear { a: PadicApprox, b: PadicApprox },
    Explicit(Vec<PadicApprox>),
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    p: Prime,
    precision: u32,
    count: usize,
    variant: SequenceVariant,
}

impl SequenceSpec {
    pub fn linear(a: PadicApprox, b: PadicApprox, count: usize) -> Result<SequenceSpec> {
        if a.p() != b.p() {
            return Err(Error::PrimeMismatch(a.p().get(), b.p().get()));
        }
        if a.precision() != b.precision() {
            return Err(Error::PrecisionMismatch(a.precision(), b.precision()));
        }
        if count == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(SequenceSpec {
            p: a.p(),
            precision: a.precision(),
            count,
            variant: SequenceVariant::Linear { a, b },
        })
    }

    pub fn explicit(values: Vec<PadicApprox>) -> Result<SequenceSpec> {
        let first = values.first().ok_or(Error::EmptySequence)?;
        let (p, precision) = (first.p(), first.precision());
        for v in &values {
            if v.p() != p {
                return Err(Error::PrimeMismatch(p.get(), v.p().get()));
            }
            if v.precision() != precision {
                return Err(Error::PrecisionMismatch(precision, v.precision()));
            }
        }
        Ok(SequenceSpec {
            p,
            precision,
            count: values.len(),
            variant: SequenceVariant::Explicit(values),
        })
    }

    pub fn random(p: Prime, precision: u32, count: usize, seed: u64) -> Result<SequenceSpec> {
        if count == 0 {
            return Err(Error::EmptySequence);
        }
        assert!(precision >= 1, "precision must be at least 1");
        Ok(SequenceSpec {
            p,
            precision,
            count,
            variant: SequenceVariant::Random { seed },
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn variant(&self) -> &SequenceVariant {
        &self.variant
    }

    /// Realizes the sequence, `count` values of `precision` digits each.
    pub fn generate(&self) -> Vec<PadicApprox> {
        match &self.variant {
            SequenceVariant::Linear { a, b } => {
                let mut out = Vec::with_capacity(self.count);
                let mut cur = b.clone();
                for _ in 0..self.count {
                    cur = cur.add(a).expect("parameters validated");
                    out.push(cur.clone());
                }
                out
            }
            SequenceVariant::Explicit(values) => values.clone(),
            SequenceVariant::Random { seed } => {
                let mut rng = SplitMix64::new(*seed);
                let p = self.p.get() as u64;
                (0..self.count)
                    .map(|_| {
                        let digits =
                            (0..self.precision).map(|_| rng.digit(p)).collect();
                        PadicApprox::from_digits(digits, self.p)
                            .expect("digits sampled below p")
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} K={} N={} ", self.p, self.precision, self.count)?;
        match &self.variant {
            SequenceVariant::Linear { a, b } => {
                write!(f, "linear a={} b={}", a.to_biguint(), b.to_biguint())
            }
            SequenceVariant::Explicit(_) => write!(f, "explicit"),
            SequenceVariant::Random { seed } => write!(f, "random seed={seed}"),
        }
    }
}

/// Parses the sequence text format:
///
/// ```text
/// # comment
/// p=2 K=4
/// 5
/// 6
/// ```
///
/// One header line, then one decimal value in `[0, p^K)` per line. Blank
/// lines and `#` comments are skipped anywhere. Errors carry the 1-based
/// line number.
pub fn parse_sequence_file(text: &str) -> Result<SequenceSpec> {
    let mut header: Option<(Prime, u32)> = None;
    let mut values: Vec<PadicApprox> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        match header {
            None => {
                header = Some(parse_header(content, line)?);
            }
            Some((p, precision)) => {
                let value: BigUint = content.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("expected a decimal value, found {content:?}"),
                })?;
                let v = PadicApprox::from_residue(&value, p, precision).map_err(|_| {
                    Error::Parse {
                        line,
                        message: format!(
                            "value {value} is out of range [0, {}^{precision})",
                            p.get()
                        ),
                    }
                })?;
                values.push(v);
            }
        }
    }
    if header.is_none() {
        return Err(Error::Parse {
            line: 1,
            message: "missing header line `p=<prime> K=<precision>`".into(),
        });
    }
    if values.is_empty() {
        return Err(Error::EmptySequence);
    }
    SequenceSpec::explicit(values)
}

fn parse_header(content: &str, line: usize) -> Result<(Prime, u32)> {
    let mut tokens = content.split_whitespace();
    let p_tok = tokens.next().unwrap_or_default();
    let k_tok = tokens.next().unwrap_or_default();
    let trailing = tokens.next();
    let (Some(p_str), Some(k_str), None) = (
        p_tok.strip_prefix("p="),
        k_tok.strip_prefix("K="),
        trailing,
    ) else {
        return Err(Error::Parse {
            line,
            message: format!("expected header `p=<prime> K=<precision>`, found {content:?}"),
        });
    };
    let p_val: u64 = p_str.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid prime {p_str:?}"),
    })?;
    let p = Prime::new(p_val).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })?;
    let precision: u32 = k_str.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid precision {k_str:?}"),
    })?;
    if precision == 0 {
        return Err(Error::Parse {
            line,
            message: "precision must be at least 1".into(),
        });
    }
    Ok((p, precision))
}

/// Renders a spec in the text format, realizing the values. For explicit
/// specs this inverts [`parse_sequence_file`] exactly.
pub fn emit_sequence_file(spec: &SequenceSpec) -> String {
    let mut out = format!("p={} K={}\n", spec.p().get(), spec.precision());
    for v in spec.generate() {
        out.push_str(&v.to_biguint().to_string());
        out.push('\n');
    }
    out
}
