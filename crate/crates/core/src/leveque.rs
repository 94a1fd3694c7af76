//! Exponential sums and the discrepancy upper bound: direct and
//! transform-based Weyl sums, the explicit constant with its rigorous
//! truncation tail, closed forms for linear sequences, and a two-sided
//! check of the bounding chain on concrete sequences.

use std::f64::consts::{PI, TAU};

use num::complex::Complex64;
use num::rational::BigRational;
use num::BigInt;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::characters::Character;
use crate::discrepancy::{check_uniform, exact_discrepancy, l2_norm_sq};
use crate::error::{Error, Result};
use crate::padic::{PadicApprox, Prime};
use crate::ratio::{big_pow, ratio, ratio_f64};

/// Largest transform length `weyl_table` will process.
const MAX_TRANSFORM_SIZE: u64 = 1 << 26;

/// Normalized exponential sum (1/N) sum of zeta at each element.
pub fn weyl_sum(seq: &[PadicApprox], zeta: &Character) -> Result<Complex64> {
    let (p, _) = check_uniform(seq)?;
    if p != zeta.p() {
        return Err(Error::PrimeMismatch(p.get(), zeta.p().get()));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for x in seq {
        sum += zeta.eval(x)?;
    }
    Ok(sum / seq.len() as f64)
}

/// Normalized Weyl sums for every nontrivial character of order up to
/// p^k_trunc, stored per level in ascending coprime-numerator order.
#[derive(Clone, Debug)]
pub struct WeylTable {
    p: Prime,
    count: u64,
    k_trunc: u32,
    levels: Vec<Vec<Complex64>>,
}

impl WeylTable {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn k_trunc(&self) -> u32 {
        self.k_trunc
    }

    /// Entry for `zeta`, or None when the character is trivial, beyond the
    /// truncation level, or belongs to a different prime.
    pub fn get(&self, zeta: &Character) -> Option<Complex64> {
        if zeta.p() != self.p || zeta.is_trivial() || zeta.level() > self.k_trunc {
            return None;
        }
        let m = zeta.numerator();
        let idx = (m - 1 - (m - 1) / self.p.get() as u64) as usize;
        Some(self.levels[zeta.level() as usize - 1][idx])
    }

    /// All (character, sum) pairs in canonical order.
    pub fn entries(&self) -> Vec<(Character, Complex64)> {
        let mut out = Vec::new();
        for (i, vals) in self.levels.iter().enumerate() {
            let level = i as u32 + 1;
            let modulus = self.p.pow_u64(level).expect("guarded at construction");
            let mut idx = 0usize;
            for m in 1..modulus {
                if m % self.p.get() as u64 == 0 {
                    continue;
                }
                let zeta = Character::new(self.p, level, m).expect("canonical entry");
                out.push((zeta, vals[idx]));
                idx += 1;
            }
        }
        out
    }

    /// Truncated weight sum: each entry squared, weighted by the inverse
    /// cube of its character order.
    pub fn s_trunc(&self) -> f64 {
        let mut total = 0.0;
        for (i, vals) in self.levels.iter().enumerate() {
            let weight = (self.p.get() as f64).powi(-3 * (i as i32 + 1));
            total += weight * vals.iter().map(|w| w.norm_sqr()).sum::<f64>();
        }
        total
    }
}

/// Radix-p decimation in time over length p^j, plus-sign convention:
/// out[m] = sum_r x[r] e^{+2 pi i m r / len}. `twiddles[i]` holds
/// e^{2 pi i i / top} for the top-level length; `stride` is top/len.
fn transform(x: &[Complex64], p: usize, twiddles: &[Complex64], stride: usize) -> Vec<Complex64> {
    let len = x.len();
    if len == 1 {
        return x.to_vec();
    }
    let sub_len = len / p;
    let subs: Vec<Vec<Complex64>> = (0..p)
        .map(|s| {
            let part: Vec<Complex64> = (0..sub_len).map(|r| x[r * p + s]).collect();
            transform(&part, p, twiddles, stride * p)
        })
        .collect();
    let unit = twiddles.len() / p;
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for k in 0..sub_len {
        for (s, sub) in subs.iter().enumerate() {
            // k*s*stride < sub_len*p*stride = twiddles.len(): no wraparound.
            let w = twiddles[k * s * stride] * sub[k];
            for q in 0..p {
                out[q * sub_len + k] += twiddles[(q * s % p) * unit] * w;
            }
        }
    }
    out
}

/// Builds the full table from one histogram pass and one top-level
/// transform: the level-j sum at numerator m is the top-level spectrum at
/// index m * p^{k_trunc - j}.
pub fn weyl_table(seq: &[PadicApprox], k_trunc: u32) -> Result<WeylTable> {
    let (p, precision) = check_uniform(seq)?;
    if k_trunc > precision {
        return Err(Error::Precision {
            needed: k_trunc,
            available: precision,
        });
    }
    let top = p.pow_u64(k_trunc)?;
    if top > MAX_TRANSFORM_SIZE {
        return Err(Error::SizeLimit { exponent: k_trunc });
    }
    let count = seq.len() as u64;

    let mut hist = vec![Complex64::new(0.0, 0.0); top as usize];
    for x in seq {
        hist[x.truncate(k_trunc)? as usize].re += 1.0;
    }

    let spectrum = if top == 1 {
        hist
    } else {
        let twiddles: Vec<Complex64> = (0..top)
            .map(|i| Complex64::from_polar(1.0, TAU * i as f64 / top as f64))
            .collect();
        transform(&hist, p.get() as usize, &twiddles, 1)
    };

    let mut levels = Vec::with_capacity(k_trunc as usize);
    for level in 1..=k_trunc {
        let modulus = p.pow_u64(level)?;
        let step = top / modulus;
        let mut vals = Vec::with_capacity((modulus - modulus / p.get() as u64) as usize);
        for m in 1..modulus {
            if m % p.get() as u64 == 0 {
                continue;
            }
            vals.push(spectrum[(m * step) as usize] / count as f64);
        }
        levels.push(vals);
    }
    Ok(WeylTable {
        p,
        count,
        k_trunc,
        levels,
    })
}

/// Exact constant with D^4 <= constant * l2 norm squared for every
/// sequence: p^9 / (p-1)^3.
pub fn comparison_constant(p: Prime) -> BigRational {
    let q = BigInt::from(p.get() - 1);
    ratio(big_pow(p.get(), 9), q.clone() * q.clone() * q)
}

/// Exact constant with l2 norm squared <= constant * (S_trunc + tail): 2p^2.
pub fn parseval_constant(p: Prime) -> BigRational {
    ratio(2 * p.get() as u64 * p.get() as u64, 1)
}

/// Explicit constant in the discrepancy bound, composed as the fourth root
/// of the product of the two chain constants: (2 p^11 / (p-1)^3)^{1/4}.
/// No claim of minimality: it is what the chain of estimates yields.
pub fn leveque_constant(p: Prime) -> f64 {
    ratio_f64(&(comparison_constant(p) * parseval_constant(p)))
        .sqrt()
        .sqrt()
}

/// Rigorous bound on the weight omitted beyond level `k_trunc`: the
/// p^k - p^{k-1} characters of order p^k carry weight p^{-3k} each, every
/// squared sum is at most 1, and the geometric series sums to
/// p^{-2 k_trunc} / (p (p + 1)).
pub fn tail_bound(p: Prime, k_trunc: u32) -> BigRational {
    let pb = BigInt::from(p.get());
    ratio(1, pb.clone() * (pb + 1) * big_pow(p.get(), 2 * k_trunc))
}

/// The discrepancy bound and every quantity entering it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub p: u32,
    pub count: u64,
    pub k_trunc: u32,
    pub s_trunc: f64,
    pub tail: BigRational,
    pub c_p: f64,
    pub bound: f64,
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundReport", 7)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("N", &self.count)?;
        s.serialize_field("k_trunc", &self.k_trunc)?;
        s.serialize_field("s_trunc", &self.s_trunc)?;
        s.serialize_field("tail", &crate::ratio::ratio_string(&self.tail))?;
        s.serialize_field("c_p", &self.c_p)?;
        s.serialize_field("bound", &self.bound)?;
        s.end()
    }
}

/// Discrepancy upper bound c_p * (S_trunc + tail)^{1/4}. With k_trunc equal
/// to the sequence precision the bound provably dominates the exact
/// discrepancy; smaller truncations stay rigorous through the tail term.
pub fn discrepancy_bound(seq: &[PadicApprox], k_trunc: u32) -> Result<BoundReport> {
    let table = weyl_table(seq, k_trunc)?;
    let p = table.p();
    let s_trunc = table.s_trunc();
    let tail = tail_bound(p, k_trunc);
    let c_p = leveque_constant(p);
    let bound = c_p * (s_trunc + ratio_f64(&tail)).sqrt().sqrt();
    Ok(BoundReport {
        p: p.get(),
        count: table.count(),
        k_trunc,
        s_trunc,
        tail,
        c_p,
        bound,
    })
}

/// Geometric closed form of a linear-sequence Weyl sum, with the sine
/// decay bound that controls it.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormWeyl {
    pub value: Complex64,
    pub sine_bound: f64,
}

/// Closed form of (1/N) sum_{n=1}^N zeta^{n a + b} as the geometric sum
/// zeta^b z (1 - z^N) / (N (1 - z)) with z = zeta^a, evaluated from exact
/// integer phases. |value| <= 1 / (N |sin(pi m a_k / p^k)|).
///
/// z = 1 (step not a unit, or trivial zeta) degenerates the ratio; the
/// direct sum then equals zeta^b and this returns an error instead.
pub fn linear_weyl_closed_form(
    a: &PadicApprox,
    b: &PadicApprox,
    zeta: &Character,
    count: u64,
) -> Result<ClosedFormWeyl> {
    if a.p() != b.p() {
        return Err(Error::PrimeMismatch(a.p().get(), b.p().get()));
    }
    if a.p() != zeta.p() {
        return Err(Error::PrimeMismatch(a.p().get(), zeta.p().get()));
    }
    if count == 0 {
        return Err(Error::EmptySequence);
    }
    let order = zeta.order() as u128;
    let m = zeta.numerator() as u128;
    let e_a = ((m * a.truncate(zeta.level())?) % order) as u64;
    if e_a == 0 {
        return Err(Error::DegenerateRatio);
    }
    let e_b = ((m * b.truncate(zeta.level())?) % order) as u64;
    let e_an = ((e_a as u128 * count as u128) % order) as u64;
    let turn = |e: u64| Complex64::from_polar(1.0, TAU * e as f64 / order as f64);
    let z = turn(e_a);
    let numer = z * (Complex64::new(1.0, 0.0) - turn(e_an));
    let denom = (Complex64::new(1.0, 0.0) - z) * count as f64;
    let sine = (PI * e_a as f64 / order as f64).sin();
    Ok(ClosedFormWeyl {
        value: turn(e_b) * numer / denom,
        sine_bound: 1.0 / (count as f64 * sine),
    })
}

/// Both sides of the bounding chain evaluated on one sequence, with the
/// truncation depth set to the sequence precision.
#[derive(Clone, Debug)]
pub struct SandwichRecord {
    pub discrepancy: BigRational,
    pub l2_norm_sq: BigRational,
    pub s_trunc: f64,
    pub tail: BigRational,
}

/// Verifies the chain on a concrete sequence: D^4 <= C1 * l2 (exact
/// rational arithmetic) and l2 <= C2 * (S_trunc + tail) with 1e-9 slack on
/// the floating side. Returns all four quantities, or a verification error
/// naming the failed inequality.
pub fn check_sandwich(seq: &[PadicApprox]) -> Result<SandwichRecord> {
    let (p, precision) = check_uniform(seq)?;
    let discrepancy = exact_discrepancy(seq)?.value;
    let l2 = l2_norm_sq(seq)?;
    let table = weyl_table(seq, precision)?;
    let s_trunc = table.s_trunc();
    let tail = tail_bound(p, precision);

    let d4 = &discrepancy * &discrepancy * &discrepancy * &discrepancy;
    if d4 > comparison_constant(p) * l2.clone() {
        return Err(Error::Verification {
            check: "fourth power versus squared norm",
            detail: format!(
                "p={} N={} K={}: D^4 = {} exceeds the norm side",
                p.get(),
                seq.len(),
                precision,
                d4
            ),
        });
    }
    let rhs = ratio_f64(&parseval_constant(p)) * (s_trunc + ratio_f64(&tail));
    if ratio_f64(&l2) > rhs + 1e-9 {
        return Err(Error::Verification {
            check: "squared norm versus truncated sum",
            detail: format!(
                "p={} N={} K={}: l2 = {} exceeds {}",
                p.get(),
                seq.len(),
                precision,
                ratio_f64(&l2),
                rhs
            ),
        });
    }
    Ok(SandwichRecord {
        discrepancy,
        l2_norm_sq: l2,
        s_trunc,
        tail,
    })
}
