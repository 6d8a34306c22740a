//! Acceptance suite. Runs every criterion, prints one `criterion N: PASS|FAIL`
//! line each, and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use addcomp::complement::{greedy_complement, theorem2_sets, PeriodicSet};
use addcomp::finset::{
    cyclotomic_form_witness, detect_form, realize_form, FiniteSet, FormWitness, Membership,
};
use addcomp::harness::{deficit_trace, detect_periodicity, divergence_probe, representation};
use addcomp::intpoly::{cyclotomic, cyclotomic_by_division, IntPolynomial};
use addcomp::tiling::{
    build_complement_from_tiling, minimum_horizon, periodic_identity_check,
    search_cyclic_complements, CyclicTiling,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::small;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn set(v: &[u64]) -> FiniteSet {
    FiniteSet::new(v.to_vec()).unwrap()
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

/// Every `k`-subset of `0..bound`, ascending.
fn subsets(bound: u64, k: usize) -> Vec<Vec<u64>> {
    fn go(start: u64, bound: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..bound {
            cur.push(x);
            go(x + 1, bound, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, bound, k, &mut Vec::new(), &mut out);
    out
}

fn poly_of(exps: impl IntoIterator<Item = u64>) -> Vec<i128> {
    let exps: Vec<u64> = exps.into_iter().collect();
    let top = exps.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut v = vec![0i128; top];
    for e in exps {
        v[e as usize] += 1;
    }
    small::trim(v)
}

/// `1 + z^(p^s) + ... + z^((p-1) p^s)`.
fn prime_power_closed_form(p: u64, s: u32) -> Vec<i128> {
    let step = p.pow(s);
    poly_of((0..p).map(|i| i * step))
}

fn to_small(p: &IntPolynomial) -> Vec<i128> {
    p.coeffs()
        .iter()
        .map(|c| i128::try_from(c).expect("fits in i128"))
        .collect()
}

/// Least `s` with `Phi_{p^(s+1)} | f_A`, by i128 long division against the
/// closed form.
fn divisibility_oracle(a: &[u64], p: u64) -> Option<u32> {
    let f = poly_of(a.iter().copied());
    let top = *a.iter().max().unwrap();
    let mut s = 0u32;
    while p.pow(s) <= top {
        let (_, r) = small::divrem(&f, &prime_power_closed_form(p, s));
        if r.is_empty() {
            return Some(s);
        }
        s += 1;
    }
    None
}

fn factorizations() -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 4..=16u64 {
        for d1 in 2..n {
            if n % d1 == 0 && n / d1 > 1 {
                out.push((d1, n / d1));
            }
        }
    }
    out
}

/// Sets of size `p` with elements `< bound` that have a tiling within `M <= 200`.
fn criterion4_tilings(p: usize, bound: u64) -> Vec<(FiniteSet, bool, Vec<CyclicTiling>)> {
    subsets(bound, p)
        .into_iter()
        .map(|v| {
            let a = set(&v);
            let form = detect_form(&a, p as u64).unwrap().is_some();
            let tilings = search_cyclic_complements(&a, 200).tilings;
            (a, form, tilings)
        })
        .collect()
}

/// Independent exact-cover check of `A mod M (+) T = Z_M`.
fn exact_cover(a: &FiniteSet, t: &CyclicTiling) -> bool {
    let m = t.modulus;
    let mut hits = vec![0u32; m as usize];
    for x in a.iter() {
        for &y in &t.t {
            hits[((x + y) % m) as usize] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=200u64 {
        let mut prod = vec![1i128];
        for l in 2..=n {
            if n % l == 0 {
                prod = small::mul(&prod, &to_small(&cyclotomic(l).unwrap()));
            }
        }
        if prod != vec![1i128; n as usize] {
            failures.push(format!("product over divisors of {n}"));
        }
    }
    let mut prime_powers = 0;
    for p in (2..=200u64).filter(|&p| (2..p).all(|d| p % d != 0)) {
        let mut s = 0;
        while p.pow(s + 1) <= 200 {
            let q = p.pow(s + 1);
            let closed = prime_power_closed_form(p, s);
            if to_small(&cyclotomic(q).unwrap()) != closed {
                failures.push(format!("cyclotomic({q})"));
            }
            if to_small(&cyclotomic_by_division(q).unwrap()) != closed {
                failures.push(format!("cyclotomic_by_division({q})"));
            }
            prime_powers += 1;
            s += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 5),
        format!(
            "199 divisor products, {prime_powers} prime powers, failures {:?}, {:.2?} (limit 5s)",
            failures, elapsed
        ),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let mut rep_ok = true;
    let mut form_ok = true;
    let mut deficit_ok = true;
    let mut lines = Vec::new();
    for (d1, d2) in factorizations() {
        let n = d1 * d2;
        let (a, b) = theorem2_sets(d1, d2).unwrap();
        let bad_rep = (0..=5000).find(|&m| representation(&a, &b, m) != 1);
        let form = detect_form(&a, n).unwrap();
        let trace = deficit_trace(&a, &b, 10_000);
        let max_d = trace.max_abs_deficit(a.max().unwrap(), 10_000).unwrap();
        rep_ok &= bad_rep.is_none();
        form_ok &= form.is_none();
        deficit_ok &= max_d <= n as i128;
        lines.push(format!(
            "({d1},{d2}) R=1:{} form:{} max|D|={max_d}{}",
            bad_rep.map_or("ok".to_string(), |m| format!("fails at {m}")),
            if form.is_none() { "none" } else { "FOUND" },
            if max_d <= n as i128 { "" } else { " > n" },
        ));
    }
    let elapsed = start.elapsed();
    outcome(
        rep_ok && form_ok && deficit_ok && within(elapsed, 30),
        format!(
            "R=1 on [0,5000] {}, detect_form none {}, max|D| <= n {}, {:.2?} (limit 30s)\n    {}",
            pass_word(rep_ok),
            pass_word(form_ok),
            pass_word(deficit_ok),
            elapsed,
            lines.join("\n    ")
        ),
    )
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn check_equivalence(v: &[u64], p: u64) -> Result<bool, String> {
    let a = set(v);
    let detected = detect_form(&a, p).map_err(|e| format!("{v:?}: {e}"))?;
    let oracle = divisibility_oracle(v, p);
    let cyclo = cyclotomic_form_witness(&a).map_err(|e| format!("{v:?}: {e}"))?;
    let realizes = |w: &FormWitness| realize_form(w).ok().as_ref() == Some(&a);
    match (&detected, oracle, &cyclo) {
        (None, None, None) => Ok(false),
        (Some(w), Some(s), Some((cs, cw)))
            if w.s == s && *cs == s && realizes(w) && realizes(cw) =>
        {
            Ok(true)
        }
        _ => Err(format!(
            "{v:?}: detect {detected:?}, oracle {oracle:?}, cyclotomic {cyclo:?}"
        )),
    }
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut positives = 0;
    let mut exhaustive = 0;
    for p in [2u64, 3] {
        for v in subsets(30, p as usize) {
            exhaustive += 1;
            match check_equivalence(&v, p) {
                Ok(true) => positives += 1,
                Ok(false) => {}
                Err(e) => mismatches.push(e),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut random_pos = 0;
    let trials = 12_000;
    for i in 0..trials {
        let p = [2u64, 3, 5][i % 3];
        // Half uniform subsets, half realized witnesses, so both sides of the
        // equivalence get exercised.
        let v = if i % 2 == 0 {
            sample(&mut rng, 200, p as usize)
                .into_iter()
                .map(|x| x as u64)
                .collect::<Vec<_>>()
        } else {
            match random_witness_below(&mut rng, p, 200) {
                Some(v) => v,
                None => continue,
            }
        };
        let mut v = v;
        v.sort_unstable();
        match check_equivalence(&v, p) {
            Ok(true) => random_pos += 1,
            Ok(false) => {}
            Err(e) => mismatches.push(e),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty(),
        format!(
            "{exhaustive} exhaustive sets ({positives} of form), {trials} random sets ({random_pos} of form), {} mismatches {:?}, {:.2?}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>(),
            elapsed
        ),
    )
}

/// Elements of a random form set with modulus `p`, if all land in `[0, bound)`.
fn random_witness_below(rng: &mut ChaCha8Rng, p: u64, bound: u64) -> Option<Vec<u64>> {
    let max_s = (0..).take_while(|&s| p.pow(s) < bound).last().unwrap();
    let s = rng.gen_range(0..=max_s);
    let block = p.pow(s + 1);
    let a = rng.gen_range(1..=block) as i64;
    let reach = (bound / block) as i64 + 1;
    let k: Vec<i64> = (0..p).map(|_| rng.gen_range(-1..reach)).collect();
    let w = FormWitness { m: p, s, a, k };
    let v = realize_form(&w).ok()?;
    (v.max()? < bound).then(|| v.elements().to_vec())
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut form_sets = 0;
    let mut tilings = 0;
    for p in [2usize, 3] {
        for (a, form, found) in criterion4_tilings(p, 20) {
            form_sets += form as usize;
            tilings += found.len();
            if form != !found.is_empty() {
                violations.push(format!("{a}: form {form}, {} tilings", found.len()));
            }
            for t in &found {
                if !exact_cover(&a, t) {
                    violations.push(format!(
                        "{a}: M={} T={:?} not an exact cover",
                        t.modulus, t.t
                    ));
                }
                if (a.len() * t.t.len()) as u64 != t.modulus {
                    violations.push(format!("{a}: |A||T| != {}", t.modulus));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations.is_empty() && within(elapsed, 60),
        format!(
            "{form_sets} form sets, {tilings} tilings re-verified, {} violations {:?}, {:.2?} (limit 60s)",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>(),
            elapsed
        ),
    )
}

/// First `n` in the last period of the horizon with `R(n) != 1`, by direct
/// pair enumeration.
fn expected_bad_exponent(a: &FiniteSet, b: &PeriodicSet, horizon: u64) -> Option<u64> {
    let members: BTreeSet<u64> = (0..=horizon).filter(|&n| b.contains(n)).collect();
    (horizon + 1 - b.period()..=horizon).find(|&n| {
        a.iter()
            .filter(|&x| x <= n && members.contains(&(n - x)))
            .count()
            != 1
    })
}

fn mutants(b: &PeriodicSet) -> Vec<PeriodicSet> {
    let mut out = Vec::new();
    let res = b.residues();
    let rebuild = |r: Vec<u64>| {
        PeriodicSet::new(b.preperiod().clone(), b.threshold(), b.period(), r).unwrap()
    };
    if let Some(extra) = (0..b.period()).find(|r| !res.contains(r)) {
        let mut r = res.to_vec();
        r.push(extra);
        r.sort_unstable();
        out.push(rebuild(r));
    }
    if res.len() > 1 {
        out.push(rebuild(res[..res.len() - 1].to_vec()));
    }
    out
}

fn criterion5() -> Outcome {
    let start = Instant::now();
    let family = factorizations().len();
    let mut cases: Vec<(FiniteSet, PeriodicSet)> = factorizations()
        .into_iter()
        .map(|(d1, d2)| theorem2_sets(d1, d2).unwrap())
        .collect();
    for p in [2usize, 3] {
        for (a, _, found) in criterion4_tilings(p, 20) {
            for t in &found {
                cases.push((a.clone(), build_complement_from_tiling(t).unwrap()));
            }
        }
    }
    let mut failures = Vec::new();
    let mut mutations = 0;
    for (i, (a, b)) in cases.iter().enumerate() {
        let horizon = minimum_horizon(a, b);
        let report = periodic_identity_check(a, b, horizon).unwrap();
        if !report.passed()
            || report.first_mismatch.is_some()
            || report.size_product.0 != report.size_product.1
        {
            failures.push(format!(
                "{a} with period {}: {:?}",
                b.period(),
                report.verdict
            ));
        }
        // every two-factor case, then every seventh tiling complement
        if i >= family && i % 7 != 0 {
            continue;
        }
        for bad in mutants(b) {
            mutations += 1;
            let horizon = minimum_horizon(a, &bad);
            let report = periodic_identity_check(a, &bad, horizon).unwrap();
            let expected = expected_bad_exponent(a, &bad, horizon);
            let located = report.first_mismatch.as_ref().map(|m| m.exponent as u64);
            if report.passed() || expected.is_none() || located != expected {
                failures.push(format!(
                    "mutant of {a} (residues {:?}): verdict {:?}, located {located:?}, expected {expected:?}",
                    bad.residues(),
                    report.verdict
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty(),
        format!(
            "{} complements certified, {mutations} mutants rejected at the brute-force exponent, {} failures {:?}, {:.2?}",
            cases.len(),
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            elapsed
        ),
    )
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let windows = [100, 1000, 10_000];
    let a = set(&[0, 1, 3]);
    let greedy = greedy_complement(&a, 100_000).unwrap();
    let g = divergence_probe(&deficit_trace(&a, &greedy, 100_000), &windows).unwrap();
    let (a2, b2) = theorem2_sets(2, 2).unwrap();
    let t = divergence_probe(&deficit_trace(&a2, &b2, 100_000), &windows).unwrap();
    let minima =
        |r: &addcomp::harness::ProbeReport| r.windows.iter().map(|w| w.min).collect::<Vec<_>>();
    let gm = minima(&g);
    let tm = minima(&t);
    let increasing = gm.windows(2).all(|w| w[0] < w[1]);
    let equal = tm.windows(2).all(|w| w[0] == w[1]);
    let elapsed = start.elapsed();
    outcome(
        increasing && equal && within(elapsed, 30),
        format!(
            "greedy {{0,1,3}} minima {gm:?} ({}), theorem2_sets(2,2) minima {tm:?} ({}), {:.2?} (limit 30s)",
            if increasing { "strictly increasing" } else { "NOT increasing" },
            if equal { "equal" } else { "NOT equal" },
            elapsed
        ),
    )
}

fn criterion7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut failures = Vec::new();
    let mut witnesses = 0;
    while witnesses < 10_000 {
        let m = rng.gen_range(1..=7u64);
        let s = rng.gen_range(0..=3u32);
        let block = m.pow(s + 1) as i64;
        let a = rng.gen_range(1..=block);
        let k: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..6)).collect();
        let w = FormWitness { m, s, a, k };
        let Ok(realized) = realize_form(&w) else {
            continue;
        };
        witnesses += 1;
        let back = detect_form(&realized, m)
            .ok()
            .flatten()
            .and_then(|d| realize_form(&d).ok());
        if back.as_ref() != Some(&realized) {
            failures.push(format!("witness {w:?} -> {realized}"));
        }
    }
    let mut periodic = 0;
    for _ in 0..2000 {
        let period = rng.gen_range(1..=30u64);
        let threshold = rng.gen_range(0..=8 * period);
        let residues: Vec<u64> = (0..period).filter(|_| rng.gen_bool(0.4)).collect();
        let pre: Vec<u64> = (0..threshold).filter(|_| rng.gen_bool(0.4)).collect();
        let b =
            PeriodicSet::new(FiniteSet::new(pre).unwrap(), threshold, period, residues).unwrap();
        periodic += 1;
        let len = (8 * period + threshold) as usize;
        match detect_periodicity(&b.indicator(len)) {
            Some(found) if period % found.period == 0 => {
                let check = 4 * len;
                if found.to_periodic_set().indicator(check) != b.indicator(check) {
                    failures.push(format!("{b:?}: recovered set disagrees past the sample"));
                }
            }
            other => failures.push(format!("{b:?}: detected {other:?}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty(),
        format!(
            "{witnesses} witnesses, {periodic} periodic sets, {} failures {:?}, {:.2?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            elapsed
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 7] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
    ];
    // optional criterion numbers on the command line select a subset
    let only: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (n, run) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let result = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let word = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {word} {}", result.detail);
        if !result.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
