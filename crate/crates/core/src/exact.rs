//! Exact big-integer oracle for the floating-point convolution pipeline.
//!
//! Coefficients given as decimal strings are scaled by a common power of
//! ten into integers, powered with exact integer convolutions, and compared
//! against the f64 path without ever rounding the reference side. This is a
//! test oracle, not a production path.

use crate::error::{Error, Result};
use crate::poly::HomoPoly2;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// A polynomial with exactly represented coefficients: coefficient j equals
/// num[j] / 10^pow10.
#[derive(Debug, Clone)]
pub struct ExactPoly {
    pub num: Vec<BigInt>,
    pub pow10: u32,
}

impl ExactPoly {
    /// Parse decimal strings ("1", "-2.2654", "0.5") into a common-denominator
    /// scaled integer vector: -2.2654 becomes -22654 over 10^4.
    pub fn parse(decimals: &[&str]) -> Result<Self> {
        let mut parsed: Vec<(BigInt, u32)> = Vec::with_capacity(decimals.len());
        let mut max_frac = 0u32;
        for s in decimals {
            let (num, frac) = parse_decimal(s)?;
            max_frac = max_frac.max(frac);
            parsed.push((num, frac));
        }
        let num = parsed
            .into_iter()
            .map(|(n, frac)| n * BigInt::from(10u32).pow(max_frac - frac))
            .collect();
        Ok(Self {
            num,
            pow10: max_frac,
        })
    }

    pub fn degree(&self) -> usize {
        self.num.len() - 1
    }

    /// Parse decimal strings into the exact oracle polynomial and its
    /// nearest-f64 image (stdlib parsing is correctly rounded), so both
    /// computation paths start from the same literals.
    pub fn parse_pair(decimals: &[&str]) -> Result<(Self, HomoPoly2)> {
        let exact = Self::parse(decimals)?;
        let coeffs = decimals
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Domain(format!("decimal literal {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let float = HomoPoly2::new(coeffs)?;
        Ok((exact, float))
    }

    /// Exact k-th power by repeated squaring on integer convolutions.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("power k must be >= 1".into()));
        }
        let mut result: Option<Vec<BigInt>> = None;
        let mut base = self.num.clone();
        let mut remaining = k;
        loop {
            if remaining & 1 == 1 {
                result = Some(match &result {
                    None => base.clone(),
                    Some(r) => convolve_int(r, &base),
                });
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            base = convolve_int(&base, &base);
        }
        Ok(Self {
            num: result.expect("k >= 1 always sets a result"),
            pow10: self.pow10 * k,
        })
    }

    /// True iff every f64 coefficient of p equals the corresponding exact
    /// rational coefficient, with no error at all. Every f64 is a dyadic
    /// rational, so the comparison m*2^e = num/10^pow10 clears exactly.
    pub fn matches_exactly(&self, p: &HomoPoly2) -> bool {
        if p.coeffs().len() != self.num.len() {
            return false;
        }
        let ten = BigInt::from(10u32).pow(self.pow10);
        p.coeffs()
            .iter()
            .zip(&self.num)
            .all(|(&c, n)| compare_scaled(c, n, &ten) == Some(BigInt::zero()))
    }

    /// Largest relative error |c - exact| / |exact| over coefficients with a
    /// nonzero exact value; coefficients that are exactly zero in the oracle
    /// must be exactly zero in p (returns infinity otherwise).
    pub fn max_rel_error(&self, p: &HomoPoly2) -> f64 {
        assert_eq!(p.coeffs().len(), self.num.len(), "degree mismatch");
        let ten = BigInt::from(10u32).pow(self.pow10);
        let mut worst = 0.0f64;
        for (&c, n) in p.coeffs().iter().zip(&self.num) {
            if n.is_zero() {
                if c != 0.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            // diff and reference are on the same scale, so their ratio is
            // the relative error; both stay exact until the final division.
            let (diff, reference) = scaled_difference(c, n, &ten);
            worst = worst.max(big_ratio_to_f64(&diff, &reference).abs());
        }
        worst
    }
}

/// Parse one decimal literal into (numerator, fractional digit count).
fn parse_decimal(s: &str) -> Result<(BigInt, u32)> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Domain(format!("empty decimal literal {s:?}")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Domain(format!("malformed decimal literal {s:?}")));
    }
    let digits: String = int_part.chars().chain(frac_part.chars()).collect();
    let n: BigInt = digits.parse().expect("digits only");
    Ok((n * sign, frac_part.len() as u32))
}

/// Exact integer convolution.
fn convolve_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Decompose a finite f64 into (mantissa, exponent) with value = m * 2^e.
fn decompose(c: f64) -> (i64, i32) {
    assert!(c.is_finite());
    if c == 0.0 {
        return (0, 0);
    }
    let bits = c.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if biased == 0 {
        (sign * frac, -1074) // subnormal
    } else {
        (sign * (frac + (1i64 << 52)), biased - 1075)
    }
}

/// c*10^pow - n as an exact integer on a common scale, i.e. the difference
/// lhs - rhs where both sides were multiplied by 2^max(0,-e). Returns None
/// only for non-finite c (never, given finite polynomials).
fn compare_scaled(c: f64, n: &BigInt, ten: &BigInt) -> Option<BigInt> {
    let (m, e) = decompose(c);
    let mut lhs = BigInt::from(m) * ten;
    let mut rhs = n.clone();
    if e >= 0 {
        lhs <<= e as u32;
    } else {
        rhs <<= (-e) as u32;
    }
    Some(lhs - rhs)
}

/// (|c*10^pow*2^s - n*2^s|, |n*2^s|): the exact difference and reference
/// brought to one common integer scale.
fn scaled_difference(c: f64, n: &BigInt, ten: &BigInt) -> (BigInt, BigInt) {
    let (m, e) = decompose(c);
    let mut lhs = BigInt::from(m) * ten;
    let mut rhs = n.clone();
    if e >= 0 {
        lhs <<= e as u32;
    } else {
        rhs <<= (-e) as u32;
    }
    ((lhs - &rhs).abs(), rhs.abs())
}

/// a/b for nonneg-or-any BigInts of arbitrary size: shift both down to at
/// most 80 significant bits, then divide in f64. Good to ~1e-16 relative,
/// which is plenty for reporting errors around 1e-9.
fn big_ratio_to_f64(a: &BigInt, b: &BigInt) -> f64 {
    assert!(!b.is_zero());
    let bits = a.bits().max(b.bits());
    let shift = bits.saturating_sub(80);
    let (sa, sb) = (a >> shift, b >> shift);
    let (fa, fb) = (
        sa.to_f64().expect("<= 80 bits"),
        sb.to_f64().expect("<= 80 bits"),
    );
    if fb == 0.0 {
        // b vanished under the shift: |b| << |a|, ratio overflows.
        return if fa >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    fa / fb
}
