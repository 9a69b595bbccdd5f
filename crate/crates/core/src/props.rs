//! Seeded randomized self-checks of the numerical core.
//!
//! Each check draws a batch of random instances from per-instance RNG
//! streams (so the batch parallelizes without changing its outcome) and
//! returns the first violation with enough detail to replay it.

use crate::bounds::{hl_exponent, lower_bound};
use crate::norm::{sup_norm, sup_norm_oracle, OptConfig};
use crate::poly::HomoPoly2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type CheckResult = std::result::Result<(), String>;

/// Batch size the integration suites run with.
pub const DEFAULT_INSTANCES: usize = 100;

fn run_batch<F>(seed: u64, instances: usize, f: F) -> CheckResult
where
    F: Fn(usize, &mut ChaCha8Rng) -> Option<String> + Sync,
{
    let failures: Vec<Option<String>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            f(i, &mut rng)
        })
        .collect();
    match failures.into_iter().flatten().next() {
        None => Ok(()),
        Some(msg) => Err(msg),
    }
}

/// Random dense form of degree 2..=max_degree with coefficients in [-2, 2],
/// redrawn until it is comfortably nonzero.
pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> HomoPoly2 {
    let m = rng.gen_range(2..=max_degree);
    loop {
        let coeffs: Vec<f64> = (0..=m).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        if coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs())) >= 0.05 {
            return HomoPoly2::new(coeffs).unwrap();
        }
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// The l_p unit ball grows with p, so the sup-norm is nondecreasing in p.
pub fn ball_monotonicity(seed: u64, instances: usize) -> CheckResult {
    let cfg = OptConfig::default();
    run_batch(seed, instances, |i, rng| {
        let poly = random_poly(rng, 8);
        let mut p1: f64 = rng.gen_range(1.0..=64.0);
        let mut p2: f64 = rng.gen_range(1.0..=64.0);
        if p1 > p2 {
            std::mem::swap(&mut p1, &mut p2);
        }
        if i % 7 == 0 {
            p2 = f64::INFINITY;
        }
        let s1 = sup_norm(&poly, p1, &cfg).unwrap().value;
        let s2 = sup_norm(&poly, p2, &cfg).unwrap().value;
        if s1 <= s2 * (1.0 + 1e-12) {
            None
        } else {
            Some(format!(
                "instance {i}: sup at p={p1} is {s1}, exceeds sup at p={p2} = {s2}"
            ))
        }
    })
}

/// Both norms are absolutely homogeneous, so the quotient ignores nonzero
/// scalings of the polynomial.
pub fn scale_invariance(seed: u64, instances: usize) -> CheckResult {
    let cfg = OptConfig::default();
    run_batch(seed, instances, |i, rng| {
        let poly = random_poly(rng, 8);
        let m = poly.degree() as f64;
        let p = rng.gen_range(m + 0.3..=2.0 * m + 20.0);
        let c = loop {
            let c: f64 = rng.gen_range(-50.0..=50.0);
            if c.abs() >= 0.01 {
                break c;
            }
        };
        let base = lower_bound(&poly, p, &cfg).unwrap().lower_bound;
        let scaled = lower_bound(&poly.scaled(c).unwrap(), p, &cfg)
            .unwrap()
            .lower_bound;
        let d = rel_diff(base, scaled);
        if d <= 1e-12 {
            None
        } else {
            Some(format!(
                "instance {i}: quotient moved by {d:.3e} under scaling by {c} (p={p})"
            ))
        }
    })
}

/// Flipping the sign of every odd-index coefficient is the substitution
/// y -> -y; both norms are blind to it.
pub fn reflection_invariance(seed: u64, instances: usize) -> CheckResult {
    let cfg = OptConfig::default();
    run_batch(seed, instances, |i, rng| {
        let poly = random_poly(rng, 8);
        let m = poly.degree() as f64;
        let p = rng.gen_range(m + 0.3..=2.0 * m + 20.0);
        let base = lower_bound(&poly, p, &cfg).unwrap().lower_bound;
        let refl = lower_bound(&poly.reflected(), p, &cfg).unwrap().lower_bound;
        let d = rel_diff(base, refl);
        if d <= 1e-12 {
            None
        } else {
            Some(format!(
                "instance {i}: quotient moved by {d:.3e} under reflection (p={p})"
            ))
        }
    })
}

/// |P^k| = |P|^k pointwise, so the sup-norm of a power is the power of the
/// sup-norm.
pub fn power_identity(seed: u64, instances: usize) -> CheckResult {
    let cfg = OptConfig::default();
    run_batch(seed, instances, |i, rng| {
        let poly = random_poly(rng, 5);
        let k = [2u32, 3, 5][i % 3];
        let p = if i % 11 == 0 {
            f64::INFINITY
        } else {
            rng.gen_range(1.0..=50.0)
        };
        let direct = sup_norm(&poly.power(k).unwrap(), p, &cfg).unwrap().value;
        let shortcut = sup_norm(&poly, p, &cfg).unwrap().value.powi(k as i32);
        let d = rel_diff(direct, shortcut);
        if d <= 1e-9 {
            None
        } else {
            Some(format!(
                "instance {i}: sup(P^{k}) = {direct} vs sup(P)^{k} = {shortcut} (p={p}, rel {d:.3e})"
            ))
        }
    })
}

/// The two exponent regime formulas meet at p = 2m with no rounding at all.
pub fn exponent_branch_agreement(seed: u64, instances: usize) -> CheckResult {
    run_batch(seed, instances, |i, rng| {
        let m = rng.gen_range(1usize..=200);
        let mf = m as f64;
        let p = 2.0 * mf;
        let high = 2.0 * mf * p / (mf * p + p - 2.0 * mf);
        let low = p / (p - mf);
        let q = hl_exponent(m, p).unwrap();
        if high == 2.0 && low == 2.0 && q == 2.0 {
            None
        } else {
            Some(format!(
                "instance {i}: m={m} gives branch values {high} and {low}, exponent {q}"
            ))
        }
    })
}

/// Random sphere sampling can only ever find values at or below the true
/// sup, so the optimizer must dominate it.
pub fn oracle_domination(seed: u64, instances: usize, samples: usize) -> CheckResult {
    let cfg = OptConfig::default();
    run_batch(seed, instances, |i, rng| {
        let poly = random_poly(rng, 8);
        let p = if i % 9 == 0 {
            f64::INFINITY
        } else {
            rng.gen_range(1.0..=64.0)
        };
        let oracle_seed = rng.gen::<u64>();
        let sup = sup_norm(&poly, p, &cfg).unwrap().value;
        let oracle = sup_norm_oracle(&poly, p, samples, oracle_seed);
        if sup >= oracle * (1.0 - 1e-12) - 1e-15 {
            None
        } else {
            Some(format!(
                "instance {i}: optimizer found {sup} but random sampling found {oracle} (p={p})"
            ))
        }
    })
}
