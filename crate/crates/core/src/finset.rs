//! Finite sets of nonnegative integers and the structured form
//! `{a + i*m^s + k_i*m^(s+1) : 0 <= i < m}`.
//!
//! Two independent routes decide whether a set has that form:
//!
//! - [`detect_form`] works on residues directly: every element must share one
//!   residue mod `m^s`, and the quotients must sweep a complete residue system
//!   mod `m`.
//! - [`cyclotomic_form_witness`] (prime cardinality only) finds the least `s`
//!   with `Phi_{p^(s+1)} | f_A` and rebuilds the parameters from the sorted
//!   residues mod `p^(s+1)` and the widest gap between them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::intpoly::{self, IntPolynomial, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("negative element `{0}`")]
    Negative(String),
    #[error("malformed token `{0}`")]
    Malformed(String),
}

/// Membership oracle shared by finite and eventually periodic sets.
pub trait Membership {
    fn contains(&self, n: u64) -> bool;

    /// Number of members `<= x`.
    fn count_upto(&self, x: u64) -> u64 {
        (0..=x).filter(|&n| self.contains(n)).count() as u64
    }
}

/// Strictly increasing sequence of nonnegative integers.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    /// Sorts the input; duplicates are rejected.
    pub fn new(mut elements: Vec<u64>) -> Result<Self, SetError> {
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SetError::Duplicate(w[0]));
        }
        Ok(Self(elements))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// `max - min`, zero for sets with fewer than two elements.
    pub fn diameter(&self) -> u64 {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// Number of elements `<= x`.
    pub fn counting(&self, x: u64) -> usize {
        self.0.partition_point(|&a| a <= x)
    }

    /// `sum z^a` over the elements.
    pub fn gen_poly(&self) -> IntPolynomial {
        IntPolynomial::from_exponents(self.iter().map(|a| a as usize))
    }
}

impl Membership for FiniteSet {
    fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    fn count_upto(&self, x: u64) -> u64 {
        self.counting(x) as u64
    }
}

impl TryFrom<Vec<u64>> for FiniteSet {
    type Error = SetError;

    fn try_from(v: Vec<u64>) -> Result<Self, SetError> {
        Self::new(v)
    }
}

impl From<FiniteSet> for Vec<u64> {
    fn from(s: FiniteSet) -> Self {
        s.0
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Text format: decimal integers separated by whitespace and/or commas.
impl FromStr for FiniteSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, SetError> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            match tok.parse::<u64>() {
                Ok(v) => out.push(v),
                Err(_) if tok.starts_with('-') && tok[1..].parse::<u64>().is_ok() => {
                    return Err(SetError::Negative(tok.to_string()))
                }
                Err(_) => return Err(SetError::Malformed(tok.to_string())),
            }
        }
        Self::new(out)
    }
}

pub fn counting(a: &FiniteSet, x: u64) -> usize {
    a.counting(x)
}

pub fn gen_poly(a: &FiniteSet) -> IntPolynomial {
    a.gen_poly()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form modulus m must be positive")]
    ZeroModulus,
    #[error("set has {len} elements but m = {m}")]
    CardinalityMismatch { len: usize, m: u64 },
    #[error("set cardinality {0} is not prime")]
    NotPrime(usize),
    #[error("witness has {got} shifts but m = {m}")]
    ShiftCount { got: usize, m: u64 },
    #[error("realization has negative value {0}")]
    NegativeValue(i128),
    #[error("realization value {0} repeats")]
    Collision(i128),
    #[error("parameters overflow")]
    Overflow,
    #[error("cyclotomic extraction failed at s = {s}: {reason}")]
    Extraction { s: u32, reason: &'static str },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Parameters `(m, s, a, k)` of `{a + i*m^s + k_i*m^(s+1) : 0 <= i < m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormWitness {
    pub m: u64,
    pub s: u32,
    pub a: i64,
    pub k: Vec<i64>,
}

impl FormWitness {
    fn moduli(&self) -> Result<(i128, i128), FormError> {
        let step = arith::checked_pow(self.m, self.s).ok_or(FormError::Overflow)?;
        let block = step
            .checked_mul(self.m as u128)
            .ok_or(FormError::Overflow)?;
        let to_i = |v: u128| i128::try_from(v).map_err(|_| FormError::Overflow);
        Ok((to_i(step)?, to_i(block)?))
    }

    /// Realized value for each index `i`, unsorted and unchecked.
    pub fn values(&self) -> Result<Vec<i128>, FormError> {
        if self.m == 0 {
            return Err(FormError::ZeroModulus);
        }
        if self.k.len() as u64 != self.m {
            return Err(FormError::ShiftCount {
                got: self.k.len(),
                m: self.m,
            });
        }
        let (step, block) = self.moduli()?;
        self.k
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                (i as i128)
                    .checked_mul(step)
                    .and_then(|v| v.checked_add(self.a as i128))
                    .and_then(|v| v.checked_add((k as i128).checked_mul(block)?))
                    .ok_or(FormError::Overflow)
            })
            .collect()
    }

    /// Position in the sorted realization of the element produced by index `i`.
    pub fn assignment(&self) -> Result<Vec<usize>, FormError> {
        let values = self.values()?;
        let mut sorted = values.clone();
        sorted.sort_unstable();
        Ok(values
            .iter()
            .map(|v| sorted.binary_search(v).expect("value is present"))
            .collect())
    }
}

/// The set a witness describes. Negative values and collisions are rejected.
pub fn realize_form(w: &FormWitness) -> Result<FiniteSet, FormError> {
    let mut values = w.values()?;
    values.sort_unstable();
    if let Some(&v) = values.iter().find(|&&v| v < 0) {
        return Err(FormError::NegativeValue(v));
    }
    if let Some(pair) = values.windows(2).find(|p| p[0] == p[1]) {
        return Err(FormError::Collision(pair[0]));
    }
    let elements = values
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| FormError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSet(elements))
}

/// Decides whether `set` has the structured form for modulus `m` by residue
/// analysis, returning the witness for the smallest qualifying `s`.
///
/// The offset is normalized to `1 <= a <= m^(s+1)` with `a` congruent to
/// `min A` modulo `m^(s+1)`, so the smallest element always takes index 0.
pub fn detect_form(set: &FiniteSet, m: u64) -> Result<Option<FormWitness>, FormError> {
    if m == 0 {
        return Err(FormError::ZeroModulus);
    }
    if set.len() as u64 != m {
        return Err(FormError::CardinalityMismatch { len: set.len(), m });
    }
    if m == 1 {
        let x = set.elements()[0] as i128;
        let k = i64::try_from(x - 1).map_err(|_| FormError::Overflow)?;
        return Ok(Some(FormWitness {
            m: 1,
            s: 0,
            a: 1,
            k: vec![k],
        }));
    }
    // Two elements with different quotients differ by at least m^s.
    let diameter = set.diameter() as u128;
    let mut s = 0u32;
    while let Some(step) = arith::checked_pow(m, s).filter(|&st| st <= diameter) {
        let block = step.checked_mul(m as u128).ok_or(FormError::Overflow)?;
        if let Some(w) = witness_from(set, m, s, step, block)? {
            return Ok(Some(w));
        }
        s += 1;
    }
    Ok(None)
}

fn witness_from(
    set: &FiniteSet,
    m: u64,
    s: u32,
    step: u128,
    block: u128,
) -> Result<Option<FormWitness>, FormError> {
    let rho = set.elements()[0] as u128 % step;
    let mut quotient_seen = vec![false; m as usize];
    for x in set.iter() {
        let r = x as u128 % block;
        if r % step != rho {
            return Ok(None);
        }
        let q = ((r - rho) / step) as usize;
        if std::mem::replace(&mut quotient_seen[q], true) {
            return Ok(None);
        }
    }
    // Offset congruent to the smallest element, taken in [1, m^(s+1)].
    let (step, block) = (step as i128, block as i128);
    let a = match set.elements()[0] as i128 % block {
        0 => block,
        r => r,
    };
    let mut k = vec![0i64; m as usize];
    for x in set.iter() {
        let d = x as i128 - a;
        let i = (d.rem_euclid(block) / step) as usize;
        let diff = d - i as i128 * step;
        debug_assert_eq!(diff.rem_euclid(block), 0);
        k[i] = i64::try_from(diff.div_euclid(block)).map_err(|_| FormError::Overflow)?;
    }
    Ok(Some(FormWitness {
        m,
        s,
        a: i64::try_from(a).map_err(|_| FormError::Overflow)?,
        k,
    }))
}

/// For a set of prime size `p`: the least `s` with `Phi_{p^(s+1)} | f_A`, and
/// the witness rebuilt from that divisibility.
///
/// The extraction sorts residues `r_1 <= ... <= r_p` mod `p^(s+1)`, appends
/// `r_{p+1} = p^(s+1) + r_1`, takes the first gap `r_{j+1} - r_j >= p^s`, and
/// reduces every element relative to `r_{j+1}`. The reduced offsets `t_i` must
/// then be exactly `{0, p^s, ..., (p-1)p^s}`, which is checked by comparing
/// `sum z^(t_i)` against `Phi_{p^(s+1)}`.
pub fn cyclotomic_form_witness(set: &FiniteSet) -> Result<Option<(u32, FormWitness)>, FormError> {
    let p = set.len();
    if !arith::is_prime(p as u64) {
        return Err(FormError::NotPrime(p));
    }
    let f = set.gen_poly();
    let top = set.max().unwrap_or(0) as u128;
    let mut s = 0u32;
    while let Some(step) = arith::checked_pow(p as u64, s).filter(|&st| st <= top.max(1)) {
        let order = u64::try_from(step * p as u128).map_err(|_| FormError::Overflow)?;
        let phi = intpoly::cyclotomic(order)?;
        if intpoly::divides(&phi, &f)? {
            return extract(set, s, &phi).map(|w| Some((s, w)));
        }
        s += 1;
    }
    Ok(None)
}

fn extract(set: &FiniteSet, s: u32, phi: &IntPolynomial) -> Result<FormWitness, FormError> {
    let p = set.len();
    let step = (p as i128).pow(s);
    let block = step * p as i128;
    let fail = |reason| FormError::Extraction { s, reason };

    let mut r: Vec<i128> = set.iter().map(|x| x as i128 % block).collect();
    r.sort_unstable();
    r.push(block + r[0]);
    let j = (0..p)
        .find(|&j| r[j + 1] - r[j] >= step)
        .ok_or_else(|| fail("no residue gap of width p^s"))?;
    let offset = r[j + 1];

    let mut t = Vec::with_capacity(p);
    let mut n = Vec::with_capacity(p);
    for x in set.iter() {
        let d = x as i128 - offset;
        let ti = d.rem_euclid(block);
        if ti > block - step {
            return Err(fail("reduced offset exceeds p^(s+1) - p^s"));
        }
        t.push(ti);
        n.push(d.div_euclid(block));
    }
    let h = IntPolynomial::from_exponents(t.iter().map(|&ti| ti as usize));
    if &h != phi {
        return Err(fail("reduced offsets do not form Phi_{p^(s+1)}"));
    }

    // Normalize the offset into [1, p^(s+1)].
    let (a, carry) = if offset > block {
        (offset - block, 1)
    } else {
        (offset, 0)
    };
    let mut k = vec![0i64; p];
    for (ti, ni) in t.into_iter().zip(n) {
        let i = (ti / step) as usize;
        k[i] = i64::try_from(ni + carry).map_err(|_| FormError::Overflow)?;
    }
    Ok(FormWitness {
        m: p as u64,
        s,
        a: i64::try_from(a).map_err(|_| FormError::Overflow)?,
        k,
    })
}

/// Exact evaluation `f_A(1)`, i.e. the cardinality as a big integer.
pub fn gen_poly_at_one(a: &FiniteSet) -> BigInt {
    a.gen_poly().eval_at_one()
}
