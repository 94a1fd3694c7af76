//! Exact discrepancy of a finite sequence of p-adic integers.
//!
//! The discrepancy is the supremum over all discs of |relative hit count
//! minus Haar measure|. A value with `K` digits is treated as the exact
//! integer its digits spell, so the supremum over arbitrarily deep discs is
//! still a finite, exactly computable quantity:
//!
//! * depths `k <= K` contribute a maximum over actual residue counts
//!   (`finite_max`),
//! * depths `k > K` contribute counts that have stabilized to the
//!   multiplicities of the distinct values, and their supremum is
//!   `max multiplicity / N` (`limit_term`), approached but not attained.
//!
//! Depth 0 (the full space) always contributes |N/N - 1| = 0 and is skipped.
//! Everything here is exact rational arithmetic; floating point appears only
//! in the numeric cross-check oracle.

use crate::error::{Error, Result};
use crate::padic::{PadicApprox, Prime};
use crate::ratio::{big_pow, ratio, ratio_string};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::collections::HashMap;

/// The disc `center + p^depth Z_p` of radius `p^-depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disc {
    p: Prime,
    depth: u32,
    center: u128,
}

impl Disc {
    pub fn new(p: Prime, depth: u32, center: u128) -> Result<Disc> {
        // When p^depth overflows u128 every u128 center is a valid residue.
        if let Ok(modulus) = p.pow_u128(depth) {
            if center >= modulus {
                return Err(Error::BadCenter { center, depth });
            }
        }
        Ok(Disc { p, depth, center })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn center(&self) -> u128 {
        self.center
    }

    /// Haar measure `p^-depth`.
    pub fn measure(&self) -> BigRational {
        ratio(BigInt::one(), big_pow(self.p.get(), self.depth))
    }

    pub fn contains(&self, x: &PadicApprox) -> Result<bool> {
        if x.p() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), x.p().get()));
        }
        Ok(x.truncate(self.depth)? == self.center)
    }
}

/// Checks a slice is a valid sequence: nonempty, one prime, one precision.
pub(crate) fn check_uniform(seq: &[PadicApprox]) -> Result<(Prime, u32)> {
    let first = seq.first().ok_or(Error::EmptySequence)?;
    let (p, precision) = (first.p(), first.precision());
    for x in seq {
        if x.p() != p {
            return Err(Error::PrimeMismatch(p.get(), x.p().get()));
        }
        if x.precision() != precision {
            return Err(Error::PrecisionMismatch(precision, x.precision()));
        }
    }
    Ok((p, precision))
}

/// Signed local discrepancy `count/N - p^-depth` of one disc, exact.
pub fn local_discrepancy(seq: &[PadicApprox], disc: &Disc) -> Result<BigRational> {
    let (p, precision) = check_uniform(seq)?;
    if p != disc.p() {
        return Err(Error::PrimeMismatch(disc.p().get(), p.get()));
    }
    if disc.depth() > precision {
        return Err(Error::Precision {
            needed: disc.depth(),
            available: precision,
        });
    }
    let mut count = 0u64;
    for x in seq {
        if disc.contains(x)? {
            count += 1;
        }
    }
    Ok(ratio(count, seq.len() as u64) - disc.measure())
}

/// Which disc family attains the discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A concrete disc of depth `<= K` attains the value.
    Disc(Disc),
    /// The supremum is only approached as the depth grows past `K`; its
    /// value is `max multiplicity / N`.
    DepthLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub value: BigRational,
    pub witness: Witness,
    pub limit_term: BigRational,
    pub finite_max: BigRational,
    pub count: usize,
    pub precision: u32,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Witness::DepthLimit => s.serialize_str("depth-limit"),
            Witness::Disc(d) => {
                let mut st = s.serialize_struct("Disc", 2)?;
                st.serialize_field("depth", &d.depth())?;
                st.serialize_field("center", &d.center())?;
                st.end()
            }
        }
    }
}

impl Serialize for DiscrepancyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiscrepancyReport", 6)?;
        st.serialize_field("value", &ratio_string(&self.value))?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("limit_term", &ratio_string(&self.limit_term))?;
        st.serialize_field("finite_max", &ratio_string(&self.finite_max))?;
        st.serialize_field("N", &(self.count as u64))?;
        st.serialize_field("K", &self.precision)?;
        st.end()
    }
}

/// Sequence indices sorted by digit string, with common-prefix lengths of
/// neighbors. Discs of depth `k` correspond to maximal runs in which all
/// consecutive common prefixes are at least `k`, so one sort serves every
/// depth at once.
struct SortedPrefixes<'a> {
    sorted: Vec<&'a PadicApprox>,
    /// `cpl[i]` = length of the common digit prefix of `sorted[i]`,
    /// `sorted[i+1]`.
    cpl: Vec<u32>,
}

/// A maximal group of equal depth-`k` prefixes.
struct Run {
    start: usize,
    count: u64,
}

impl<'a> SortedPrefixes<'a> {
    fn new(seq: &'a [PadicApprox]) -> SortedPrefixes<'a> {
        let mut sorted: Vec<&PadicApprox> = seq.iter().collect();
        sorted.sort_by(|a, b| a.digits().cmp(b.digits()));
        let cpl = sorted
            .windows(2)
            .map(|w| {
                let (da, db) = (w[0].digits(), w[1].digits());
                da.iter().zip(db).take_while(|(x, y)| x == y).count() as u32
            })
            .collect();
        SortedPrefixes { sorted, cpl }
    }

    fn runs_at_depth(&self, depth: u32) -> Vec<Run> {
        let mut runs = Vec::new();
        let mut start = 0usize;
        for i in 0..self.cpl.len() {
            if self.cpl[i] < depth {
                runs.push(Run {
                    start,
                    count: (i + 1 - start) as u64,
                });
                start = i + 1;
            }
        }
        runs.push(Run {
            start,
            count: (self.sorted.len() - start) as u64,
        });
        runs
    }
}

/// Exact discrepancy with a witness.
pub fn exact_discrepancy(seq: &[PadicApprox]) -> Result<DiscrepancyReport> {
    let (p, precision) = check_uniform(seq)?;
    let n = seq.len() as u64;
    let n_big = BigInt::from(n);
    let prefixes = SortedPrefixes::new(seq);

    let max_multiplicity = prefixes
        .runs_at_depth(precision)
        .iter()
        .map(|r| r.count)
        .max()
        .expect("sequence is nonempty");
    let limit_term = ratio(max_multiplicity, n);

    // Track the best |count/N - p^-k| over k = 1..=K. Candidates at each
    // depth: the largest count, the smallest count, and (when some disc of
    // that depth is unoccupied) count zero, whose deviation is p^-k itself.
    let mut finite_max = BigRational::zero();
    let mut finite_witness: Option<Disc> = None;
    let mut modulus = BigInt::one();
    for depth in 1..=precision {
        modulus *= p.get();
        let runs = prefixes.runs_at_depth(depth);
        let occupied = runs.len() as u64;
        let extreme_runs = {
            let max_run = runs
                .iter()
                .max_by_key(|r| r.count)
                .expect("at least one run");
            let min_run = runs
                .iter()
                .min_by_key(|r| r.count)
                .expect("at least one run");
            [(max_run.start, max_run.count), (min_run.start, min_run.count)]
        };
        for (start, count) in extreme_runs {
            let deviation =
                (ratio(count, n) - ratio(BigInt::one(), modulus.clone())).abs();
            if deviation > finite_max {
                let center = prefixes.sorted[start].truncate(depth)?;
                finite_max = deviation;
                finite_witness = Some(Disc::new(p, depth, center)?);
            }
        }
        let has_empty_disc = match p.pow_u128(depth) {
            Ok(m) => (occupied as u128) < m,
            Err(_) => true, // p^depth exceeds u128 and thus certainly N
        };
        if has_empty_disc {
            let deviation = ratio(BigInt::one(), modulus.clone());
            if deviation > finite_max {
                // An empty deviation can only win while p^depth < 2N, so the
                // sort over at most N occupied centers is cheap and the
                // center fits in u128.
                let mut occupied_centers: Vec<u128> = runs
                    .iter()
                    .map(|r| prefixes.sorted[r.start].truncate(depth))
                    .collect::<Result<_>>()?;
                occupied_centers.sort_unstable();
                let mut center = occupied_centers.len() as u128;
                for (i, &c) in occupied_centers.iter().enumerate() {
                    if c != i as u128 {
                        center = i as u128;
                        break;
                    }
                }
                finite_max = deviation;
                finite_witness = Some(Disc::new(p, depth, center)?);
            }
        }
    }

    let (value, witness) = if finite_max >= limit_term {
        (
            finite_max.clone(),
            Witness::Disc(finite_witness.expect("nonzero max has a witness")),
        )
    } else {
        (limit_term.clone(), Witness::DepthLimit)
    };
    debug_assert!(value >= ratio(BigInt::one(), n_big.clone()));
    debug_assert!(value <= BigRational::one());
    Ok(DiscrepancyReport {
        value,
        witness,
        limit_term,
        finite_max,
        count: seq.len(),
        precision,
    })
}

/// Exact squared L2 norm of the local discrepancy function
/// `f(x, y) = count(disc(x, |y|))/N - |y|` over the product of the p-adic
/// integers with themselves (radial second coordinate).
///
/// Splitting the y-integral over the shells `|y| = p^-j` gives
///
/// ```text
/// ||f||^2 = sum_{j>=1} (1 - 1/p) p^{-2j} * p^{-... } sum_{a mod p^j} (c_a/N - p^-j)^2
/// ```
///
/// Depths `j <= K` are summed directly from residue counts; past the stored
/// precision the counts are frozen multiplicities, the level sum collapses
/// to `sum_v (m_v/N)^2 - p^-j`, and the remaining geometric series is summed
/// in closed form. The result is exact.
pub fn l2_norm_sq(seq: &[PadicApprox]) -> Result<BigRational> {
    let (p, precision) = check_uniform(seq)?;
    let n = seq.len() as u64;
    let prefixes = SortedPrefixes::new(seq);
    let n_sq = BigInt::from(n) * BigInt::from(n);
    let p_big = BigInt::from(p.get());

    let mut total = BigRational::zero();
    let mut modulus = BigInt::one();
    for depth in 1..=precision {
        modulus *= p.get();
        // sum over all residues of (c*p^j - N)^2, empty residues included.
        let runs = prefixes.runs_at_depth(depth);
        let mut bracket_num = BigInt::zero();
        for run in &runs {
            let d = BigInt::from(run.count) * &modulus - BigInt::from(n);
            bracket_num += &d * &d;
        }
        bracket_num += (&modulus - BigInt::from(runs.len() as u64)) * &n_sq;
        // weight (1 - 1/p) p^{-2j}, level measure p^{-2j} folded in already
        // through the common denominator N^2 p^{4j}.
        let m4 = &modulus * &modulus * &modulus * &modulus;
        total += ratio(
            (p_big.clone() - 1) * bracket_num,
            p_big.clone() * m4 * &n_sq,
        );
    }

    // Tail j > K: counts equal multiplicities m_v of the distinct values.
    let s2: BigInt = prefixes
        .runs_at_depth(precision)
        .iter()
        .map(|r| BigInt::from(r.count) * BigInt::from(r.count))
        .sum();
    let p2k = &modulus * &modulus;
    let p3k = &p2k * &modulus;
    let p_sq_minus = &p_big * &p_big - 1;
    let p_cube_minus = &p_big * &p_big * &p_big - 1;
    let tail = ratio(
        (p_big.clone() - 1) * s2,
        p_big.clone() * n_sq * p2k * p_sq_minus,
    ) - ratio(p_big.clone() - 1, p_big * p3k * p_cube_minus);
    Ok(total + tail)
}

/// Floating-point cross-check for [`l2_norm_sq`]: brute-force counts per
/// residue at each level up to `level_cap`, multiplicity-based level sums
/// beyond the precision, truncated at `level_cap` (the neglected tail is
/// below p^(-2*level_cap)). Independent of the sorted-prefix machinery.
pub fn l2_norm_sq_numeric(seq: &[PadicApprox], level_cap: u32) -> Result<f64> {
    let (p, precision) = check_uniform(seq)?;
    let n = seq.len() as f64;
    let pf = p.get() as f64;
    let mut total = 0.0;
    for j in 1..=level_cap {
        let q = pf.powi(-(j as i32)); // p^-j
        let weight = (1.0 - 1.0 / pf) * q * q;
        let bracket = if j <= precision {
            let residues = p.pow_u128(j).map_err(|_| Error::SizeLimit { exponent: j })?;
            let mut sum = 0.0;
            for a in 0..residues {
                let mut count = 0u64;
                for x in seq {
                    if x.truncate(j)? == a {
                        count += 1;
                    }
                }
                let dev = count as f64 / n - q;
                sum += dev * dev;
            }
            sum
        } else {
            // Counts are multiplicity counts of the full values.
            let mut mult: HashMap<Vec<u32>, u64> = HashMap::new();
            for x in seq {
                *mult.entry(x.digits().to_vec()).or_insert(0) += 1;
            }
            let mut sum = q; // p^j empty residues contribute p^j * q^2 = q
            for (_, m) in &mult {
                let dev = *m as f64 / n - q;
                sum += dev * dev - q * q; // occupied cell replaces an empty one
            }
            sum
        };
        total += weight * bracket;
    }
    Ok(total)
}
