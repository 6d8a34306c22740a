//! Exact periodic complements as tilings of `Z_M`, and exact verification of
//! the generating-function identities an eventually exact complement must obey.
//!
//! If `B` is eventually periodic with period `M` and `R_{A+B}(n) = 1` from
//! `n1` on, then with `f_B = F_B + T / (1 - z^M)`:
//!
//! ```text
//! (1 - z^M) f_A F_B + f_A T = (1 - z^M) p1 + (1 + z + ... + z^(M-1)) z^n1
//! f_A(1) T(1) = M
//! ```
//!
//! where `p1 = sum_{n < n1} R(n) z^n`. [`periodic_identity_check`] builds each
//! side as an exact polynomial and compares them coefficient by coefficient.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complement::{ComplementError, PeriodicSet};
use crate::finset::{FiniteSet, Membership};
use crate::intpoly::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {0} appears twice or lies outside Z_M")]
    BadResidue(u64),
    #[error("residue {residue} is covered {count} times")]
    NotExact { residue: u64, count: usize },
    #[error("horizon {horizon} is below the certification minimum {required}")]
    HorizonTooSmall { horizon: u64, required: u64 },
    #[error("empty set")]
    EmptySet,
    #[error(transparent)]
    Complement(#[from] ComplementError),
}

/// `A_residues ⊕ T = Z_M` with every residue covered exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicTiling {
    #[serde(rename = "M")]
    pub modulus: u64,
    #[serde(rename = "A_residues")]
    pub a_residues: Vec<u64>,
    #[serde(rename = "T")]
    pub t: Vec<u64>,
}

impl CyclicTiling {
    /// Re-checks exact single coverage by enumerating all sums.
    pub fn verify(&self) -> Result<(), TilingError> {
        let m = self.modulus;
        if m == 0 {
            return Err(TilingError::ZeroModulus);
        }
        for side in [&self.a_residues, &self.t] {
            if let Some(&r) = side.iter().find(|&&r| r >= m) {
                return Err(TilingError::BadResidue(r));
            }
            if let Some(w) = side.windows(2).find(|w| w[0] >= w[1]) {
                return Err(TilingError::BadResidue(w[1]));
            }
        }
        let mut count = vec![0usize; m as usize];
        for &a in &self.a_residues {
            for &t in &self.t {
                count[((a + t) % m) as usize] += 1;
            }
        }
        match count.iter().position(|&c| c != 1) {
            Some(r) => Err(TilingError::NotExact {
                residue: r as u64,
                count: count[r],
            }),
            None => Ok(()),
        }
    }
}

/// Residues of `a` mod `m`, sorted, or `None` if two elements collide.
fn distinct_residues(a: &FiniteSet, m: u64) -> Option<Vec<u64>> {
    let mut res: Vec<u64> = a.iter().map(|x| x % m).collect();
    res.sort_unstable();
    let before = res.len();
    res.dedup();
    (res.len() == before).then_some(res)
}

struct Search<'a> {
    m: usize,
    tile: &'a [u64],
    covered: Vec<bool>,
    chosen: Vec<u64>,
}

impl Search<'_> {
    fn fits(&self, t: usize) -> bool {
        self.tile
            .iter()
            .all(|&a| !self.covered[(a as usize + t) % self.m])
    }

    fn place(&mut self, t: usize, on: bool) {
        for &a in self.tile {
            self.covered[(a as usize + t) % self.m] = on;
        }
        if on {
            self.chosen.push(t as u64);
        } else {
            self.chosen.pop();
        }
    }

    /// Translates that would cover `r` without overlap, increasing.
    fn candidates(&self, r: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .tile
            .iter()
            .map(|&a| (r + self.m - a as usize) % self.m)
            .filter(|&t| self.fits(t))
            .collect();
        out.sort_unstable();
        out
    }

    /// Branches on the uncovered residue with the fewest fitting translates
    /// (smallest residue on ties), trying translates in increasing order.
    fn solve(&mut self) -> bool {
        let mut best: Option<Vec<usize>> = None;
        for r in (0..self.m).filter(|&r| !self.covered[r]) {
            let c = self.candidates(r);
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                let done = c.len() <= 1;
                best = Some(c);
                if done {
                    break;
                }
            }
        }
        let Some(candidates) = best else {
            return true;
        };
        for t in candidates {
            self.place(t, true);
            if self.solve() {
                return true;
            }
            self.place(t, false);
        }
        false
    }
}

/// Backtracking search for `T` with `A mod M ⊕ T = Z_M`.
///
/// The first translate covers residue 0 through the smallest residue of `A`
/// (every tiling has such a translate). After that the search always branches
/// on the uncovered residue with the fewest fitting translates, so forced
/// placements propagate and dead ends surface immediately. The first tiling
/// found is returned with `T` sorted.
pub fn find_cyclic_complement(a: &FiniteSet, m: u64) -> Option<CyclicTiling> {
    if m == 0 || a.is_empty() || !m.is_multiple_of(a.len() as u64) {
        return None;
    }
    let a_residues = distinct_residues(a, m)?;
    let mut search = Search {
        m: m as usize,
        tile: &a_residues,
        covered: vec![false; m as usize],
        chosen: Vec::with_capacity(m as usize / a_residues.len()),
    };
    let first = (m - a_residues[0]) % m;
    search.place(first as usize, true);
    if !search.solve() {
        return None;
    }
    let mut t = search.chosen;
    t.sort_unstable();
    Some(CyclicTiling {
        modulus: m,
        a_residues,
        t,
    })
}

/// Outcome of sweeping every multiple of `|A|` up to a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub tried: Vec<u64>,
    pub tilings: Vec<CyclicTiling>,
}

/// Tilings for every `M` in `|A|, 2|A|, ... <= m_max`, ordered by `M`.
///
/// Moduli are searched in parallel; each search is independent and the output
/// is identical to a sequential sweep.
pub fn search_cyclic_complements(a: &FiniteSet, m_max: u64) -> SweepReport {
    let step = a.len() as u64;
    if step == 0 {
        return SweepReport {
            tried: Vec::new(),
            tilings: Vec::new(),
        };
    }
    let tried: Vec<u64> = (1..=m_max / step).map(|j| j * step).collect();
    let tilings = tried
        .par_iter()
        .filter_map(|&m| find_cyclic_complement(a, m))
        .collect();
    SweepReport { tried, tilings }
}

/// The purely periodic complement `{n : n mod M in T}`.
pub fn build_complement_from_tiling(t: &CyclicTiling) -> Result<PeriodicSet, TilingError> {
    t.verify()?;
    Ok(PeriodicSet::purely_periodic(t.modulus, t.t.clone())?)
}

/// Certification status of a candidate exact complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    /// `R = 1` over the last full period and both identities hold.
    Pass,
    /// `R(at) = 0` inside the last period; it recurs forever.
    NotComplement { at: u64 },
    /// `R(at) > 1` inside the last period; coverage never becomes exact.
    NotExact { at: u64, count: u64 },
    /// `R` is eventually 1 but an identity failed.
    IdentityFailed,
}

/// First coefficient where the two sides of the polynomial identity differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientMismatch {
    pub exponent: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub verdict: Verdict,
    /// Least `n1` with `R(n) = 1` on `[n1, horizon]`; the start of the last
    /// period when `R` is not eventually 1.
    pub n1: u64,
    pub period: u64,
    pub horizon: u64,
    /// `None` when the cleared-denominator identity holds exactly.
    pub first_mismatch: Option<CoefficientMismatch>,
    /// `f_A(1) * T(1)` and `M`.
    pub size_product: (String, String),
    pub justification: String,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Smallest horizon the check accepts: `L + 2M + max A`.
pub fn minimum_horizon(a: &FiniteSet, b: &PeriodicSet) -> u64 {
    b.threshold() + 2 * b.period() + a.max().unwrap_or(0)
}

/// Verifies that `B` is an exact complement of `A` from some `n1` on, and that
/// the cleared-denominator identity and `f_A(1) T(1) = M` hold exactly.
///
/// For `n >= L + max A`, every `n - a` lies in the periodic region of `B`, so
/// `R` is periodic there with period `M`; one clean period at the end of the
/// horizon therefore certifies `R = 1` for all larger `n`.
pub fn periodic_identity_check(
    a: &FiniteSet,
    b: &PeriodicSet,
    horizon: u64,
) -> Result<IdentityReport, TilingError> {
    if a.is_empty() {
        return Err(TilingError::EmptySet);
    }
    let required = minimum_horizon(a, b);
    if horizon < required {
        return Err(TilingError::HorizonTooSmall { horizon, required });
    }
    let m = b.period();
    let reps: Vec<u64> = (0..=horizon)
        .map(|n| a.iter().filter(|&x| x <= n && b.contains(n - x)).count() as u64)
        .collect();

    let last_start = horizon + 1 - m;
    let last = &reps[last_start as usize..];
    let tail_fault = last
        .iter()
        .position(|&r| r == 0)
        .map(|i| Verdict::NotComplement {
            at: last_start + i as u64,
        })
        .or_else(|| {
            last.iter().position(|&r| r > 1).map(|i| Verdict::NotExact {
                at: last_start + i as u64,
                count: last[i],
            })
        });
    let n1 = if tail_fault.is_some() {
        last_start
    } else {
        reps.iter()
            .rposition(|&r| r != 1)
            .map_or(0, |i| i as u64 + 1)
    };

    let f_a = a.gen_poly();
    let f_pre = b.preperiod().gen_poly();
    let lo = b.threshold();
    let t_poly =
        IntPolynomial::from_exponents((lo..lo + m).filter(|&n| b.contains(n)).map(|n| n as usize));
    let p1 = IntPolynomial::from_coeffs(
        reps[..n1 as usize]
            .iter()
            .map(|&r| BigInt::from(r))
            .collect(),
    );
    let one_minus_zm = -&IntPolynomial::z_pow_minus_one(m as usize);

    let lhs = &(&(&one_minus_zm * &f_a) * &f_pre) + &(&f_a * &t_poly);
    let rhs = &(&one_minus_zm * &p1) + &IntPolynomial::geometric(m as usize).shift(n1 as usize);
    let first_mismatch = first_difference(&lhs, &rhs);

    let size_lhs = f_a.eval_at_one() * t_poly.eval_at_one();
    let size_rhs = BigInt::from(m);
    let verdict = match tail_fault {
        Some(v) => v,
        None if first_mismatch.is_none() && size_lhs == size_rhs => Verdict::Pass,
        None => Verdict::IdentityFailed,
    };
    Ok(IdentityReport {
        verdict,
        n1,
        period: m,
        horizon,
        first_mismatch,
        size_product: (size_lhs.to_string(), size_rhs.to_string()),
        justification: format!(
            "R is periodic with period {m} for n >= {}; R over [{last_start}, {horizon}] decides all n >= {last_start}",
            lo + a.max().unwrap_or(0)
        ),
    })
}

fn first_difference(lhs: &IntPolynomial, rhs: &IntPolynomial) -> Option<CoefficientMismatch> {
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    (0..len).find_map(|i| {
        let (l, r) = (lhs.coeff(i), rhs.coeff(i));
        (l != r).then(|| CoefficientMismatch {
            exponent: i,
            lhs: l.to_string(),
            rhs: r.to_string(),
        })
    })
}
