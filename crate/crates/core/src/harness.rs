//! Brute-force ground truth: representation counts, counting-function deficit
//! traces, an empirical probe for a growing deficit, and eventual-periodicity
//! detection for 0/1 sequences.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complement::PeriodicSet;
use crate::finset::{FiniteSet, Membership};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("no windows given")]
    NoWindows,
    #[error("window [{start}, {end}] exceeds trace end {last}")]
    OutOfRange { start: u64, end: u64, last: u64 },
}

/// Number of pairs `(a, b)` with `a + b = n`.
pub fn representation(a: &FiniteSet, b: &impl Membership, n: u64) -> u64 {
    a.iter().filter(|&x| x <= n && b.contains(n - x)).count() as u64
}

/// Representation counts `R(0..=N)` with the thresholds past which they stay
/// positive (`n0`) and exactly one (`n1`).
///
/// A threshold is only reported when the stable run covers at least the upper
/// half of the horizon; a run that only starts near `N` says nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProfile {
    pub values: Vec<u64>,
    pub n0: Option<u64>,
    pub n1: Option<u64>,
}

pub fn rep_profile(a: &FiniteSet, b: &impl Membership, limit: u64) -> RepProfile {
    let values: Vec<u64> = (0..=limit).map(|n| representation(a, b, n)).collect();
    let threshold = |ok: fn(u64) -> bool| -> Option<u64> {
        let start = values
            .iter()
            .rposition(|&r| !ok(r))
            .map_or(0, |i| i as u64 + 1);
        (start <= limit / 2).then_some(start)
    };
    let n0 = threshold(|r| r >= 1);
    let n1 = threshold(|r| r == 1);
    RepProfile { values, n0, n1 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficitRow {
    pub x: u64,
    pub a_count: u64,
    pub b_count: u64,
    pub deficit: i128,
}

/// `A(x)`, `B(x)` and `D(x) = A(x)B(x) - x` for `x = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficitTrace {
    pub rows: Vec<DeficitRow>,
}

impl DeficitTrace {
    /// Checks monotone counts and `D(x) - D(x-1) = A(x)B(x) - A(x-1)B(x-1) - 1`.
    pub fn is_consistent(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.x == i as u64 && r.deficit == r.a_count as i128 * r.b_count as i128 - r.x as i128
        }) && self.rows.windows(2).all(|w| {
            let (p, q) = (w[0], w[1]);
            q.a_count >= p.a_count
                && q.b_count >= p.b_count
                && q.deficit - p.deficit
                    == q.a_count as i128 * q.b_count as i128
                        - p.a_count as i128 * p.b_count as i128
                        - 1
        })
    }

    /// Largest `|D(x)|` over `x` in `[lo, hi]` (clamped to the trace).
    pub fn max_abs_deficit(&self, lo: u64, hi: u64) -> Option<i128> {
        self.window(lo, hi).map(|r| r.deficit.abs()).max()
    }

    pub fn min_deficit(&self, lo: u64, hi: u64) -> Option<i128> {
        self.window(lo, hi).map(|r| r.deficit).min()
    }

    fn window(&self, lo: u64, hi: u64) -> impl Iterator<Item = &DeficitRow> {
        let end = (hi as usize).saturating_add(1).min(self.rows.len());
        let start = (lo as usize).min(end);
        self.rows[start..end].iter()
    }

    pub fn last_x(&self) -> Option<u64> {
        self.rows.last().map(|r| r.x)
    }

    /// CSV with header `x,A,B,D`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,A,B,D")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.x, r.a_count, r.b_count, r.deficit)?;
        }
        Ok(())
    }
}

pub fn deficit_trace(a: &FiniteSet, b: &impl Membership, limit: u64) -> DeficitTrace {
    let mut b_count = 0u64;
    let rows = (0..=limit)
        .map(|x| {
            if b.contains(x) {
                b_count += 1;
            }
            let a_count = a.counting(x) as u64;
            DeficitRow {
                x,
                a_count,
                b_count,
                deficit: a_count as i128 * b_count as i128 - x as i128,
            }
        })
        .collect();
    DeficitTrace { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    /// Window minima strictly increase.
    ConsistentWithDivergence,
    /// Window minima are all equal.
    Bounded,
    /// Neither pattern.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMinimum {
    pub start: u64,
    pub end: u64,
    pub min: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub windows: Vec<WindowMinimum>,
    pub verdict: ProbeVerdict,
}

/// Minimum of `D` over each window `[X, 2X]`. Never claims a limit: the
/// verdict only describes how the observed minima move.
pub fn divergence_probe(
    trace: &DeficitTrace,
    window_starts: &[u64],
) -> Result<ProbeReport, ProbeError> {
    if window_starts.is_empty() {
        return Err(ProbeError::NoWindows);
    }
    let last = trace.last_x().unwrap_or(0);
    let mut windows = Vec::with_capacity(window_starts.len());
    for &start in window_starts {
        let end = start.saturating_mul(2);
        if trace.rows.is_empty() || end > last {
            return Err(ProbeError::OutOfRange { start, end, last });
        }
        let min = trace.min_deficit(start, end).expect("window inside trace");
        windows.push(WindowMinimum { start, end, min });
    }
    let mins: Vec<i128> = windows.iter().map(|w| w.min).collect();
    let verdict = if mins.windows(2).all(|w| w[0] == w[1]) {
        ProbeVerdict::Bounded
    } else if mins.windows(2).all(|w| w[0] < w[1]) {
        ProbeVerdict::ConsistentWithDivergence
    } else {
        ProbeVerdict::Inconclusive
    };
    Ok(ProbeReport { windows, verdict })
}

/// Decade window starts `10, 100, ...` whose windows fit in `[0, limit]`.
pub fn decade_windows(limit: u64) -> Vec<u64> {
    std::iter::successors(Some(10u64), |&x| x.checked_mul(10))
        .take_while(|&x| x.saturating_mul(2) <= limit)
        .collect()
}

/// Eventually periodic decomposition of a 0/1 sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    pub threshold: u64,
    pub period: u64,
    /// Set positions below `threshold`.
    pub preperiod: Vec<u64>,
    /// `n mod period` for set positions in `[threshold, threshold + period)`.
    pub residues: Vec<u64>,
}

impl Periodicity {
    pub fn to_periodic_set(&self) -> PeriodicSet {
        let mut residues = self.residues.clone();
        residues.sort_unstable();
        PeriodicSet::new(
            FiniteSet::new(self.preperiod.clone()).expect("ascending positions"),
            self.threshold,
            self.period,
            residues,
        )
        .expect("consistent by construction")
    }
}

/// Smallest period `M <= len/4`, then smallest preperiod `L`, with
/// `bits[n + M] == bits[n]` for all `L <= n < len - M`.
///
/// A candidate only counts when the periodic part covers at least the second
/// half of the sequence (`L <= len/2`); otherwise every `M` would fit with a
/// large enough `L`.
pub fn detect_periodicity(bits: &[bool]) -> Option<Periodicity> {
    let len = bits.len();
    for m in 1..=len / 4 {
        let threshold = (0..len - m)
            .rev()
            .find(|&n| bits[n] != bits[n + m])
            .map_or(0, |n| n + 1);
        if threshold > len / 2 {
            continue;
        }
        let preperiod = (0..threshold)
            .filter(|&n| bits[n])
            .map(|n| n as u64)
            .collect();
        let mut residues: Vec<u64> = (threshold..threshold + m)
            .filter(|&n| bits[n])
            .map(|n| (n % m) as u64)
            .collect();
        residues.sort_unstable();
        return Some(Periodicity {
            threshold: threshold as u64,
            period: m as u64,
            preperiod,
            residues,
        });
    }
    None
}
