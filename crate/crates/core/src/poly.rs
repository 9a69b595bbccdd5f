//! Bivariate homogeneous polynomials: the seven parametrized families,
//! evaluation, coefficient norms and powering.

use crate::error::{Error, Result};
use crate::kahan::{two_product, two_sum, Compensated};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Default cap on the degree a polynomial may be raised to.
pub const DEFAULT_DEGREE_CAP: usize = 2048;

/// Identifier of one of the seven parametrized families.
///
/// The subscript is the degree: P2 is quadratic, P10 has degree 10.
/// Coefficient patterns (index j holds the coefficient of x^(m-j) y^j):
///
/// ```text
/// P2  (a)          -> (a, 2 sqrt(a(1-a)), -a)            a in (0,1)
/// P3  (a, b)       -> (a, b, b, a)
/// P5  (a, b, c)    -> (a, -b, -c, c, b, -a)
/// P6  (a, b)       -> (0, a, 0, b, 0, a, 0)
/// P7  (a, b, c, d) -> (-a, b, c, -d, -d, c, b, -a)
/// P8  (a, b)       -> (0, -a, 0, b, 0, -b, 0, a, 0)
/// P10 (a, b)       -> (0, a, 0, b, 0, 1, 0, b, 0, a, 0)
/// ```
///
/// P2's two sign choices both leave |P| invariant up to the reflection
/// y -> -y of the l_p ball, so both signs are fixed to +.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    P2,
    P3,
    P5,
    P6,
    P7,
    P8,
    P10,
}

pub const ALL_FAMILIES: [FamilyId; 7] = [
    FamilyId::P2,
    FamilyId::P3,
    FamilyId::P5,
    FamilyId::P6,
    FamilyId::P7,
    FamilyId::P8,
    FamilyId::P10,
];

impl FamilyId {
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::P2 => "P2",
            FamilyId::P3 => "P3",
            FamilyId::P5 => "P5",
            FamilyId::P6 => "P6",
            FamilyId::P7 => "P7",
            FamilyId::P8 => "P8",
            FamilyId::P10 => "P10",
        }
    }

    pub fn degree(self) -> usize {
        match self {
            FamilyId::P2 => 2,
            FamilyId::P3 => 3,
            FamilyId::P5 => 5,
            FamilyId::P6 => 6,
            FamilyId::P7 => 7,
            FamilyId::P8 => 8,
            FamilyId::P10 => 10,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            FamilyId::P2 => 1,
            FamilyId::P3 | FamilyId::P6 | FamilyId::P8 | FamilyId::P10 => 2,
            FamilyId::P5 => 3,
            FamilyId::P7 => 4,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        &["a", "b", "c", "d"][..self.param_count()]
    }

    /// Closed parameter box, if the family constrains a parameter.
    /// Only P2 is constrained: a must stay strictly inside (0, 1) so the
    /// square root in its middle coefficient is real.
    pub fn param_domain(self, index: usize) -> Option<(f64, f64)> {
        match (self, index) {
            (FamilyId::P2, 0) => Some((0.0, 1.0)),
            _ => None,
        }
    }

    /// Build the family member for the given parameter tuple.
    pub fn build(self, params: &[f64]) -> Result<HomoPoly2> {
        if params.len() != self.param_count() {
            return Err(Error::Arity {
                family: self.name(),
                expected: self.param_count(),
                got: params.len(),
            });
        }
        if let Some(bad) = params.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite parameter {bad} for {}",
                self.name()
            )));
        }
        let coeffs = match self {
            FamilyId::P2 => {
                let a = params[0];
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::Domain(format!(
                        "P2 parameter a={a} outside (0,1): sqrt(a(1-a)) must be real and the \
                         boundary degenerates the family"
                    )));
                }
                vec![a, 2.0 * (a * (1.0 - a)).sqrt(), -a]
            }
            FamilyId::P3 => {
                let (a, b) = (params[0], params[1]);
                vec![a, b, b, a]
            }
            FamilyId::P5 => {
                let (a, b, c) = (params[0], params[1], params[2]);
                vec![a, -b, -c, c, b, -a]
            }
            FamilyId::P6 => {
                let (a, b) = (params[0], params[1]);
                vec![0.0, a, 0.0, b, 0.0, a, 0.0]
            }
            FamilyId::P7 => {
                let (a, b, c, d) = (params[0], params[1], params[2], params[3]);
                vec![-a, b, c, -d, -d, c, b, -a]
            }
            FamilyId::P8 => {
                let (a, b) = (params[0], params[1]);
                vec![0.0, -a, 0.0, b, 0.0, -b, 0.0, a, 0.0]
            }
            FamilyId::P10 => {
                let (a, b) = (params[0], params[1]);
                vec![0.0, a, 0.0, b, 0.0, 1.0, 0.0, b, 0.0, a, 0.0]
            }
        };
        HomoPoly2::new(coeffs)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P2" => Ok(FamilyId::P2),
            "P3" => Ok(FamilyId::P3),
            "P5" => Ok(FamilyId::P5),
            "P6" => Ok(FamilyId::P6),
            "P7" => Ok(FamilyId::P7),
            "P8" => Ok(FamilyId::P8),
            "P10" => Ok(FamilyId::P10),
            other => Err(Error::Domain(format!(
                "unknown family {other:?} (expected one of P2, P3, P5, P6, P7, P8, P10)"
            ))),
        }
    }
}

/// A bivariate homogeneous polynomial of degree m, stored as the dense
/// coefficient vector (c_0, ..., c_m) of sum_j c_j x^(m-j) y^j.
#[derive(Debug, Clone, PartialEq)]
pub struct HomoPoly2 {
    degree: usize,
    coeffs: Vec<f64>,
}

impl HomoPoly2 {
    /// Wrap a coefficient vector; the degree is its length minus one.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain(format!(
                "a homogeneous polynomial needs degree >= 1, got {} coefficient(s)",
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {bad}")));
        }
        Ok(Self {
            degree: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Scale every coefficient by c.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    /// The reflected polynomial P(x, -y): coefficient j picks up (-1)^j.
    pub fn reflected(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
            .collect();
        Self {
            degree: self.degree,
            coeffs,
        }
    }

    /// Evaluate at (x, y) by compensated Horner recursion.
    ///
    /// The sum is factored through the larger coordinate so the Horner
    /// variable has magnitude <= 1; homogeneity
    /// P(tx, ty) = t^m P(x, y) then holds to ~1e-13 relative for |t| <= 2.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let m = self.degree;
        if x == 0.0 && y == 0.0 {
            return 0.0;
        }
        if y.abs() <= x.abs() {
            // P = x^m * sum_j c_j r^j with r = y/x; Horner from j = m down.
            let r = y / x;
            horner_compensated(self.coeffs.iter().rev(), r) * x.powi(m as i32)
        } else {
            // P = y^m * sum_i c_{m-i} s^i with s = x/y; Horner from i = m down,
            // i.e. over the coefficients in natural order.
            let s = x / y;
            horner_compensated(self.coeffs.iter(), s) * y.powi(m as i32)
        }
    }

    /// l_q norm of the coefficient vector; q = infinity gives max |c_j|.
    /// Scaled by the largest magnitude so huge coefficient ranges (powers
    /// of degree 600 reach ~1e145) cannot overflow when raised to q.
    pub fn coefficient_norm(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::Domain(format!(
                "coefficient norm needs q >= 1, got {q}"
            )));
        }
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        if q.is_infinite() {
            return Ok(scale);
        }
        let mut acc = Compensated::new();
        if q == 2.0 {
            for &c in &self.coeffs {
                let t = c / scale;
                acc.add_product(t, t);
            }
            Ok(scale * acc.value().sqrt())
        } else {
            for &c in &self.coeffs {
                if c != 0.0 {
                    acc.add((c.abs() / scale).powf(q));
                }
            }
            Ok(scale * acc.value().powf(1.0 / q))
        }
    }

    /// Multiply two homogeneous polynomials: coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let coeffs = convolve(&self.coeffs, &other.coeffs);
        if let Some(bad) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Domain(format!(
                "product coefficient {bad} is not finite"
            )));
        }
        Ok(Self {
            degree: self.degree + other.degree,
            coeffs,
        })
    }

    /// P^k by repeated squaring, with the default degree cap.
    pub fn power(&self, k: u32) -> Result<Self> {
        self.power_capped(k, DEFAULT_DEGREE_CAP)
    }

    /// P^k by repeated squaring (O(log k) convolutions), erroring out if the
    /// final degree exceeds `cap` or an intermediate coefficient overflows.
    pub fn power_capped(&self, k: u32, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("power k must be >= 1".into()));
        }
        let final_degree = self.degree * k as usize;
        if final_degree > cap {
            return Err(Error::DegreeCap {
                degree: final_degree,
                cap,
            });
        }

        let mut result: Option<Vec<f64>> = None;
        let mut acquired: u32 = 0; // power accumulated into result so far
        let mut base = self.coeffs.clone();
        let mut base_pow: u32 = 1;
        let mut remaining = k;
        loop {
            if remaining & 1 == 1 {
                let next = match &result {
                    None => base.clone(),
                    Some(r) => convolve(r, &base),
                };
                acquired += base_pow;
                if next.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Overflow { k: acquired });
                }
                result = Some(next);
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            base = convolve(&base, &base);
            base_pow *= 2;
            if base.iter().any(|c| !c.is_finite()) {
                return Err(Error::Overflow { k: base_pow });
            }
        }

        Ok(Self {
            degree: final_degree,
            coeffs: result.expect("k >= 1 always sets a result"),
        })
    }
}

/// Horner evaluation sum_j c_j r^j over coefficients given highest-j first,
/// with compensated products and sums (Graillat-style compensated Horner).
fn horner_compensated<'a, I: Iterator<Item = &'a f64>>(mut coeffs: I, r: f64) -> f64 {
    let first = *coeffs.next().expect("degree >= 1");
    let mut acc = first;
    let mut err = 0.0f64;
    for &c in coeffs {
        let (p, ep) = two_product(acc, r);
        let (s, es) = two_sum(p, c);
        acc = s;
        err = err * r + (ep + es);
    }
    acc + err
}

/// Dense convolution c[n] = sum_{i+j=n} a[i] b[j], each output accumulated
/// with error-free transformations. Output order is fixed regardless of the
/// worker count: every c[n] is produced by one task scanning i upward.
fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n_out = a.len() + b.len() - 1;
    let one = |n: usize| {
        let lo = (n + 1).saturating_sub(b.len());
        let hi = n.min(a.len() - 1);
        let mut acc = Compensated::new();
        for i in lo..=hi {
            acc.add_product(a[i], b[n - i]);
        }
        acc.value()
    };
    if n_out < 256 {
        (0..n_out).map(one).collect()
    } else {
        (0..n_out).into_par_iter().map(one).collect()
    }
}
