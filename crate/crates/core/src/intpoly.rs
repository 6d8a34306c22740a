//! Dense univariate polynomials with arbitrary-precision integer coefficients,
//! plus cyclotomic polynomial generation.
//!
//! Coefficients are stored in ascending order of exponent and the vector never
//! carries trailing zeros, so structural equality is polynomial equality. The
//! zero polynomial is the empty vector.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("divisor leading coefficient {0} is not a unit")]
    NonMonicDivisor(BigInt),
    #[error("cyclotomic polynomial of order 0 is undefined")]
    ZeroOrder,
    #[error("cyclic reduction modulus must be positive")]
    ZeroModulus,
    #[error("cannot parse polynomial term `{0}`")]
    Parse(String),
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Builds a polynomial from ascending coefficients, stripping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * z^exp`.
    pub fn monomial(c: BigInt, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self::from_coeffs(coeffs)
    }

    /// Sum of `z^e` over the given exponents; repeated exponents accumulate.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for e in exps {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += 1;
        }
        Self::from_coeffs(coeffs)
    }

    /// `1 + z + ... + z^(n-1)`; zero for `n == 0`.
    pub fn geometric(n: usize) -> Self {
        Self::from_coeffs(vec![BigInt::one(); n])
    }

    /// `z^n - 1`.
    pub fn z_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] -= 1;
        coeffs[n] += 1;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Sum of coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Quotient and remainder by a divisor with leading coefficient `±1`.
    ///
    /// A unit leading coefficient keeps every step inside the integers; this
    /// covers all cyclotomics as well as `1 - z^M`.
    pub fn divrem(&self, divisor: &IntPolynomial) -> Result<(Self, Self), PolyError> {
        let lead = divisor.leading().ok_or(PolyError::ZeroDivisor)?;
        if !(lead.is_one() || (-lead).is_one()) {
            return Err(PolyError::NonMonicDivisor(lead.clone()));
        }
        let lead_is_one = lead.is_one();
        let dg = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(), self.clone()));
        }
        let terms: Vec<(usize, BigInt)> = divisor
            .nonzero_terms()
            .filter(|&(j, _)| j < dg)
            .map(|(j, c)| (j, c.clone()))
            .collect();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = std::mem::take(&mut rem[i]);
            let q = if lead_is_one { q } else { -q };
            let shift = i - dg;
            for (j, c) in &terms {
                rem[shift + j] -= &q * c;
            }
            quot[shift] = q;
        }
        rem.truncate(dg);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// True iff `divisor` divides `self` exactly.
    pub fn is_divisible_by(&self, divisor: &IntPolynomial) -> Result<bool, PolyError> {
        Ok(self.divrem(divisor)?.1.is_zero())
    }

    /// Reduces modulo `z^m - 1` by folding exponents.
    pub fn reduce_cyclic(&self, m: usize) -> Result<Self, PolyError> {
        if m == 0 {
            return Err(PolyError::ZeroModulus);
        }
        let mut out = vec![BigInt::zero(); m.min(self.coeffs.len())];
        for (i, c) in self.nonzero_terms() {
            out[i % m] += c;
        }
        Ok(Self::from_coeffs(out))
    }

    /// Product reduced modulo `z^m - 1` (cyclic convolution of length `m`).
    pub fn mul_mod_cyclic(&self, other: &IntPolynomial, m: usize) -> Result<Self, PolyError> {
        let f = self.reduce_cyclic(m)?;
        let g = other.reduce_cyclic(m)?;
        if f.is_zero() || g.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![BigInt::zero(); m];
        let gt: Vec<(usize, &BigInt)> = g.nonzero_terms().collect();
        for (i, a) in f.nonzero_terms() {
            for &(j, b) in &gt {
                out[(i + j) % m] += a * b;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }
}

pub fn add(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    f + g
}

pub fn mul(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    f * g
}

pub fn divrem(
    f: &IntPolynomial,
    g: &IntPolynomial,
) -> Result<(IntPolynomial, IntPolynomial), PolyError> {
    f.divrem(g)
}

/// True iff `g` divides `f`. `g` must have a unit leading coefficient.
pub fn divides(g: &IntPolynomial, f: &IntPolynomial) -> Result<bool, PolyError> {
    f.is_divisible_by(g)
}

pub fn eval_at_one(f: &IntPolynomial) -> BigInt {
    f.eval_at_one()
}

pub fn mul_mod_cyclic(
    f: &IntPolynomial,
    g: &IntPolynomial,
    m: usize,
) -> Result<IntPolynomial, PolyError> {
    f.mul_mod_cyclic(g, m)
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial.
///
/// Prime powers `p^e` take the closed form `sum_{j<p} z^(j p^(e-1))`; every
/// other order is `(z^n - 1)` divided by the product of `Phi_d` over proper
/// divisors `d`. Results are memoized for the life of the process.
pub fn cyclotomic(n: u64) -> Result<IntPolynomial, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroOrder);
    }
    if let Some(hit) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let phi = if n == 1 {
        IntPolynomial::from_i64(&[-1, 1])
    } else if let Some((p, _)) = arith::prime_power(n) {
        let step = (n / p) as usize;
        IntPolynomial::from_exponents((0..p as usize).map(|j| j * step))
    } else {
        let mut denom = IntPolynomial::one();
        for d in arith::divisors(n) {
            if d < n {
                denom = &denom * &cyclotomic(d)?;
            }
        }
        divide_exact(&IntPolynomial::z_pow_minus_one(n as usize), &denom)
    };
    cyclotomic_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| phi.clone());
    Ok(phi)
}

/// `Phi_n` computed only by repeated exact division of `z^n - 1`, never using
/// the prime-power closed form or the cache.
pub fn cyclotomic_by_division(n: u64) -> Result<IntPolynomial, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroOrder);
    }
    let mut table: Vec<Option<IntPolynomial>> = vec![None; n as usize + 1];
    for k in arith::divisors(n) {
        let mut denom = IntPolynomial::one();
        for d in arith::divisors(k) {
            if d < k {
                denom = &denom * table[d as usize].as_ref().expect("divisors ascend");
            }
        }
        table[k as usize] = Some(divide_exact(
            &IntPolynomial::z_pow_minus_one(k as usize),
            &denom,
        ));
    }
    Ok(table[n as usize].take().expect("n divides itself"))
}

fn divide_exact(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let (q, r) = f.divrem(g).expect("cyclotomic products are monic");
    debug_assert!(r.is_zero());
    q
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, d) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += d;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        let rt: Vec<(usize, &BigInt)> = rhs.nonzero_terms().collect();
        for (i, a) in self.nonzero_terms() {
            for &(j, b) in &rt {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Ascending-exponent rendering, e.g. `1 + -1*z^3`. Zero terms are omitted;
/// the zero polynomial renders as `0`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.nonzero_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Parses the `Display` form. Whitespace is ignored; terms are `c`, `c*z` or
/// `c*z^e` joined by `+`, and an exponent may repeat.
impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut coeffs: Vec<BigInt> = Vec::new();
        for term in compact.split('+') {
            let bad = || PolyError::Parse(term.to_string());
            let (c, e) = match term.split_once('*') {
                None => (term, 0usize),
                Some((c, rest)) => {
                    let e = match rest {
                        "z" => 1,
                        _ => rest
                            .strip_prefix("z^")
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(bad)?,
                    };
                    (c, e)
                }
            };
            let c: BigInt = c.parse().map_err(|_| bad())?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl IntPolynomial {
    /// Largest absolute coefficient; zero for the zero polynomial.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}
