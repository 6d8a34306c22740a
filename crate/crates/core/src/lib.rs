//! Additive complements of finite sets of nonnegative integers.
//!
//! - [`intpoly`]: exact integer polynomials and cyclotomic polynomials.
//! - [`finset`]: finite sets, counting functions and the two routes for
//!   recognizing sets of the form `{a + i*m^s + k_i*m^(s+1)}`.
//! - [`complement`]: eventually periodic sets and complement constructions.
//! - [`tiling`]: exact cyclic complements and generating-function identity checks.
//! - [`harness`]: brute-force representation counts, deficit traces and
//!   periodicity detection.
//! - [`cli`]: the `addcomp` command-line front end.

pub mod arith;
pub mod cli;
pub mod complement;
pub mod finset;
pub mod harness;
pub mod intpoly;
pub mod tiling;

pub use complement::{
    canonical_complement, greedy_complement, theorem2_sets, ComplementError, PeriodicSet,
};
pub use finset::{
    cyclotomic_form_witness, detect_form, realize_form, FiniteSet, FormError, FormWitness,
    Membership,
};
pub use harness::{
    deficit_trace, detect_periodicity, divergence_probe, rep_profile, representation, DeficitTrace,
    ProbeVerdict, RepProfile,
};
pub use intpoly::{cyclotomic, IntPolynomial, PolyError};
pub use tiling::{
    build_complement_from_tiling, find_cyclic_complement, periodic_identity_check,
    search_cyclic_complements, CyclicTiling, IdentityReport, Verdict,
};
