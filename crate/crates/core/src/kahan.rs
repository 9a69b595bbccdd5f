//! Error-free transformations and compensated accumulation.
//!
//! The convolutions behind large polynomial powers and the polynomial
//! evaluations inside the norm optimizer both sum many terms of mixed sign.
//! Plain summation would lose O(n*eps) relative accuracy to cancellation;
//! carrying the exact rounding error of every addition and product in a
//! separate compensation term keeps the result within a few ulps.

/// Error-free transformation of a sum: returns (s, e) with s = fl(a+b) and
/// a + b = s + e exactly. Branch-free Knuth two-sum.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let ap = s - b;
    let bp = s - ap;
    (s, (a - ap) + (b - bp))
}

/// Error-free transformation of a product: returns (p, e) with p = fl(a*b)
/// and a * b = p + e exactly, via a fused multiply-add.
#[inline]
pub fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

/// Running sum with a first-order compensation term. Adding a value feeds
/// the exact two-sum error into the compensation; adding a product also
/// feeds the exact multiplication error. The final value is sum + comp.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    #[inline]
    pub fn add_product(&mut self, a: f64, b: f64) {
        let (p, e) = two_product(a, b);
        self.add(p);
        self.comp += e;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
