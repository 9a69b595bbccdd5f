//! Derivative-free scalar maximization on a bracket.
//!
//! Classic Brent localmin (golden section with parabolic interpolation
//! steps where they are safe), run on -f. Used to polish the local maxima
//! found by the coarse grid scans.

/// Outcome of a bracketed refinement.
#[derive(Debug, Clone, Copy)]
pub struct BrentResult {
    pub x: f64,
    pub fx: f64,
    pub iters: usize,
    /// Width of the final uncertainty interval around x.
    pub width: f64,
    pub converged: bool,
}

const GOLD: f64 = 0.381_966_011_250_105_2; // (3 - sqrt(5)) / 2

/// Maximize f on [a, b] to absolute abscissa tolerance `tol`.
///
/// Stops once the bracket is within 2 * (tol + eps-scaled fuzz) of the
/// candidate, or after `max_iters` iterations (converged = false then;
/// the best point seen is still returned).
pub fn maximize<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iters: usize,
) -> BrentResult {
    debug_assert!(a <= b);
    let (mut lo, mut hi) = (a, b);
    let mut x = lo + GOLD * (hi - lo);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    // d is the last step, e the one before it (controls parabolic steps).
    let (mut d, mut e) = (0.0f64, 0.0f64);

    for iter in 0..max_iters {
        let m = 0.5 * (lo + hi);
        let t = tol + f64::EPSILON * x.abs();
        if (x - m).abs() <= 2.0 * t - 0.5 * (hi - lo) {
            return BrentResult {
                x,
                fx,
                iters: iter,
                width: hi - lo,
                converged: true,
            };
        }

        let mut use_golden = true;
        if e.abs() > t {
            // Fit a parabola through (v, fv), (w, fw), (x, fx); maximizing,
            // so the signs are flipped relative to the minimizer.
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_old = e;
            e = d;
            // Accept the parabolic step only if it falls inside the bracket
            // and is shorter than half the step before last.
            if p.abs() < (0.5 * q * e_old).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < 2.0 * t || hi - u < 2.0 * t {
                    d = if x < m { t } else { -t };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { hi - x } else { lo - x };
            d = GOLD * e;
        }

        let u = if d.abs() >= t {
            x + d
        } else if d > 0.0 {
            x + t
        } else {
            x - t
        };
        let fu = f(u);

        if fu >= fx {
            if u < x {
                hi = x;
            } else {
                lo = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu >= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu >= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }

    BrentResult {
        x,
        fx,
        iters: max_iters,
        width: hi - lo,
        converged: false,
    }
}
