//! Explicit complement constructions: eventually periodic sets, the canonical
//! complement of a structured set, the composite-cardinality family, and a
//! greedy baseline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::finset::{FiniteSet, FormError, FormWitness, Membership};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplementError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("residue {residue} is not below the period {period}")]
    ResidueOutOfRange { residue: u64, period: u64 },
    #[error("residues must be strictly increasing")]
    UnsortedResidues,
    #[error("preperiod element {element} is not below the threshold {threshold}")]
    PreperiodAboveThreshold { element: u64, threshold: u64 },
    #[error("construction parameters must both exceed 1 (got d1 = {d1}, d2 = {d2})")]
    BadFactors { d1: u64, d2: u64 },
    #[error("greedy complement needs a nonempty set")]
    EmptySet,
    #[error("parameters overflow")]
    Overflow,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Eventually periodic subset of the nonnegative integers.
///
/// Below `threshold` membership is read from `preperiod`; from `threshold` on,
/// `n` is a member iff `n mod period` is one of `residues`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PeriodicRepr", into = "PeriodicRepr")]
pub struct PeriodicSet {
    preperiod: FiniteSet,
    threshold: u64,
    period: u64,
    residues: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct PeriodicRepr {
    preperiod: FiniteSet,
    threshold: u64,
    period: u64,
    residues: Vec<u64>,
}

impl TryFrom<PeriodicRepr> for PeriodicSet {
    type Error = ComplementError;

    fn try_from(r: PeriodicRepr) -> Result<Self, ComplementError> {
        PeriodicSet::new(r.preperiod, r.threshold, r.period, r.residues)
    }
}

impl From<PeriodicSet> for PeriodicRepr {
    fn from(p: PeriodicSet) -> Self {
        PeriodicRepr {
            preperiod: p.preperiod,
            threshold: p.threshold,
            period: p.period,
            residues: p.residues,
        }
    }
}

impl PeriodicSet {
    pub fn new(
        preperiod: FiniteSet,
        threshold: u64,
        period: u64,
        residues: Vec<u64>,
    ) -> Result<Self, ComplementError> {
        if period == 0 {
            return Err(ComplementError::ZeroPeriod);
        }
        if residues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplementError::UnsortedResidues);
        }
        if let Some(&residue) = residues.iter().find(|&&r| r >= period) {
            return Err(ComplementError::ResidueOutOfRange { residue, period });
        }
        if let Some(element) = preperiod.max().filter(|&e| e >= threshold) {
            return Err(ComplementError::PreperiodAboveThreshold { element, threshold });
        }
        Ok(Self {
            preperiod,
            threshold,
            period,
            residues,
        })
    }

    /// Pure residue-class set: threshold 0, no preperiod.
    pub fn purely_periodic(period: u64, residues: Vec<u64>) -> Result<Self, ComplementError> {
        Self::new(FiniteSet::empty(), 0, period, residues)
    }

    pub fn preperiod(&self) -> &FiniteSet {
        &self.preperiod
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Membership indicator for `0..len`.
    pub fn indicator(&self, len: usize) -> Vec<bool> {
        (0..len as u64).map(|n| self.contains(n)).collect()
    }

    /// Members in `[0, limit]` as a finite set.
    pub fn truncate(&self, limit: u64) -> FiniteSet {
        FiniteSet::new((0..=limit).filter(|&n| self.contains(n)).collect())
            .expect("ascending scan has no duplicates")
    }

    fn residues_upto(&self, r: u64) -> u64 {
        self.residues.partition_point(|&x| x <= r) as u64
    }
}

impl Membership for PeriodicSet {
    fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            self.preperiod.contains(n)
        } else {
            self.residues.binary_search(&(n % self.period)).is_ok()
        }
    }

    fn count_upto(&self, x: u64) -> u64 {
        if x < self.threshold {
            return self.preperiod.counting(x) as u64;
        }
        let below = self.preperiod.len() as u64;
        // members of [threshold, x] by whole periods plus partial residues
        let tail = |y: u64| -> u64 {
            let full = (y / self.period) * self.residues.len() as u64;
            full + self.residues_upto(y % self.period)
        };
        let start = if self.threshold == 0 {
            0
        } else {
            tail(self.threshold - 1)
        };
        below + tail(x) - start
    }
}

/// Complement `{n : n mod m^(s+1) < m^s}` of the set a witness describes.
///
/// Each residue class mod `m^(s+1)` is reached by exactly one element of the
/// set, so the representation count is 1 from [`canonical_threshold`] on.
pub fn canonical_complement(w: &FormWitness) -> Result<PeriodicSet, ComplementError> {
    let step = arith::checked_pow(w.m, w.s).ok_or(ComplementError::Overflow)?;
    let block = step
        .checked_mul(w.m as u128)
        .and_then(|b| u64::try_from(b).ok())
        .ok_or(ComplementError::Overflow)?;
    PeriodicSet::purely_periodic(block, (0..step as u64).collect())
}

/// `a + (max k_i + 1) * m^(s+1)`: an upper bound past which the canonical
/// complement represents every integer exactly once.
pub fn canonical_threshold(w: &FormWitness) -> Result<u64, ComplementError> {
    let step = arith::checked_pow(w.m, w.s).ok_or(ComplementError::Overflow)? as i128;
    let block = step * w.m as i128;
    let kmax = w.k.iter().copied().max().unwrap_or(0) as i128;
    let n1 = w.a as i128 + (kmax + 1) * block;
    u64::try_from(n1.max(0)).map_err(|_| ComplementError::Overflow)
}

/// `A = {u + v*d1*d2 : u < d1, v < d2}` and its complement
/// `B = {k*d1*d2^2 + w*d1 : k >= 0, w < d2}`.
pub fn theorem2_sets(d1: u64, d2: u64) -> Result<(FiniteSet, PeriodicSet), ComplementError> {
    if d1 <= 1 || d2 <= 1 {
        return Err(ComplementError::BadFactors { d1, d2 });
    }
    let n = d1.checked_mul(d2).ok_or(ComplementError::Overflow)?;
    let period = n.checked_mul(d2).ok_or(ComplementError::Overflow)?;
    let a = FiniteSet::new(
        (0..d2)
            .flat_map(|v| (0..d1).map(move |u| u + v * n))
            .collect(),
    )
    .expect("distinct by construction");
    let b = PeriodicSet::purely_periodic(period, (0..d2).map(|w| w * d1).collect())?;
    Ok((a, b))
}

/// Greedy baseline complement covering every `n` in `[min A, limit]`.
///
/// Scans `n` upward from `min A`; when `n` is not yet represented, adds the
/// largest `b` that covers it, `n - min A`.
pub fn greedy_complement(a: &FiniteSet, limit: u64) -> Result<FiniteSet, ComplementError> {
    let lo = a.min().ok_or(ComplementError::EmptySet)?;
    let size = usize::try_from(limit).map_err(|_| ComplementError::Overflow)? + 1;
    let mut covered = vec![false; size];
    let mut b = Vec::new();
    for n in lo..=limit {
        if covered[n as usize] {
            continue;
        }
        let new = n - lo;
        b.push(new);
        for x in a.iter() {
            if let Some(sum) = new.checked_add(x).filter(|&s| s <= limit) {
                covered[sum as usize] = true;
            }
        }
    }
    Ok(FiniteSet::new(b).expect("strictly increasing by construction"))
}
