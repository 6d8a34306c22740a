#![allow(dead_code)]

pub mod small {
    //! i128 polynomials, ascending coefficients, trailing zeros trimmed.

    pub fn trim(mut v: Vec<i128>) -> Vec<i128> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(f: &[i128], g: &[i128]) -> Vec<i128> {
        if f.is_empty() || g.is_empty() {
            return vec![];
        }
        let mut out = vec![0; f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trim(out)
    }

    /// Schoolbook division by a monic divisor.
    pub fn divrem(f: &[i128], g: &[i128]) -> (Vec<i128>, Vec<i128>) {
        assert_eq!(g.last(), Some(&1));
        let dg = g.len() - 1;
        let mut r = f.to_vec();
        if r.len() <= dg {
            return (vec![], trim(r));
        }
        let mut q = vec![0; r.len() - dg];
        for i in (dg..r.len()).rev() {
            let c = r[i];
            q[i - dg] = c;
            for (j, gj) in g.iter().enumerate() {
                r[i - dg + j] -= c * gj;
            }
        }
        r.truncate(dg);
        (trim(q), trim(r))
    }

    pub fn z_pow_minus_one(n: usize) -> Vec<i128> {
        let mut v = vec![0; n + 1];
        v[0] = -1;
        v[n] = 1;
        v
    }

    fn mobius(mut n: u64) -> i32 {
        let mut mu = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }

    /// `prod_{d | n} (z^d - 1)^mu(n/d)`: multiply the positive factors, then
    /// divide out the negative ones.
    pub fn cyclotomic(n: u64) -> Vec<i128> {
        let mut num = vec![1i128];
        let mut den = vec![1i128];
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            match mobius(n / d) {
                1 => num = mul(&num, &z_pow_minus_one(d as usize)),
                -1 => den = mul(&den, &z_pow_minus_one(d as usize)),
                _ => {}
            }
        }
        // den is monic up to sign
        let sign = *den.last().unwrap();
        let den: Vec<i128> = den.iter().map(|c| c * sign).collect();
        let (q, r) = divrem(&num, &den);
        assert!(r.is_empty());
        q.iter().map(|c| c * sign).collect()
    }

    pub fn euler_phi(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
}
