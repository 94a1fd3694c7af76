//! Exact discrepancy computation for finite sequences of p-adic integers,
//! together with a Fourier-analytic upper bound that is certified digit by
//! digit rather than estimated.
//!
//! A sequence element is a p-adic integer carried to a fixed precision of
//! K digits, and every set that matters here is a disc: the residues that
//! share a prefix of the digit expansion. The star discrepancy of the first
//! N elements is the worst deviation between the empirical measure of a
//! disc and its Haar measure, over all discs of all depths. Because discs
//! of depth at most K are finitely many and deeper discs only repeat the
//! multiplicity pattern, this maximum is a rational number and is computed
//! exactly ([`discrepancy::exact_discrepancy`]).
//!
//! The upper bound goes through the dual group. Characters of the p-power
//! roots of unity ([`characters::Character`]) turn averages over the
//! sequence into Weyl sums; a radix-p transform over truncated residues
//! produces every Weyl sum up to a chosen level in one pass
//! ([`leveque::weyl_table`]). A weighted square sum of those entries, plus
//! a closed-form tail for the levels beyond the truncation, dominates the
//! fourth power of the discrepancy up to an explicit constant
//! ([`leveque::discrepancy_bound`]). Each inequality in that chain is also
//! checkable at runtime against brute-force oracles ([`verify::run_suite`]).
//!
//! Supporting pieces: disc indicator coefficients and Haar integration
//! ([`fourier`]), closed forms for Weyl sums of linear sequences
//! ([`leveque::linear_weyl_closed_form`]), and exact L2 norms of the
//! discrepancy function ([`discrepancy::l2_norm_sq`]).

pub mod characters;
pub mod discrepancy;
pub mod error;
pub mod fourier;
pub mod leveque;
pub mod padic;
pub mod ratio;
pub mod sequences;
pub mod verify;

pub use characters::{enumerate_nontrivial, Character};
pub use discrepancy::{
    exact_discrepancy, l2_norm_sq, local_discrepancy, Disc, DiscrepancyReport, Witness,
};
pub use error::{Error, Result};
pub use fourier::{
    disc_fourier_coeff, haar_integrate, radial_integral, radial_sq_sum, DiscCoeff, RadialIntegral,
};
pub use leveque::{
    check_sandwich, comparison_constant, discrepancy_bound, leveque_constant,
    linear_weyl_closed_form, parseval_constant, tail_bound, weyl_sum, weyl_table, BoundReport,
    ClosedFormWeyl, SandwichRecord, WeylTable,
};
pub use padic::{PadicApprox, Prime};
pub use ratio::{ratio, ratio_f64, ratio_string};
pub use sequences::{parse_sequence_file, SequenceSpec, SequenceVariant};
pub use verify::{run_suite, CheckOutcome, Suite};
