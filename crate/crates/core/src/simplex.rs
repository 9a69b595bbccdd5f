//! Box-constrained Nelder-Mead maximization.
//!
//! Every proposed vertex is clamped into the box, so the method degrades
//! gracefully to a face or corner search when the optimum sits on the
//! boundary. Fully deterministic: fixed coefficients, stable ordering, no
//! randomness.

/// Standard reflection / expansion / contraction / shrink coefficients.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iters: usize,
    pub evals: usize,
}

/// Maximize f over the box [lo, hi] starting from `start`, with an initial
/// vertex offset of `step[i]` along coordinate i (flipped inward when the
/// offset would leave the box). Stops when the vertex values agree to
/// `ftol_rel` relative, the simplex diameter drops below `xtol_abs`, or
/// `max_iters` reflections have run.
#[allow(clippy::too_many_arguments)]
pub fn maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    lo: &[f64],
    hi: &[f64],
    ftol_rel: f64,
    xtol_abs: f64,
    max_iters: usize,
) -> SimplexResult {
    let n = start.len();
    assert!(n >= 1 && step.len() == n && lo.len() == n && hi.len() == n);
    let clamp = |x: &mut [f64]| {
        for i in 0..n {
            x[i] = x[i].clamp(lo[i], hi[i]);
        }
    };

    let mut evals = 0usize;
    let eval = |x: &[f64], f: &mut F, evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    // n+1 vertices: the start plus one offset per coordinate.
    let mut verts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    let f0 = eval(&x0, &mut f, &mut evals);
    verts.push((x0.clone(), f0));
    for i in 0..n {
        let mut v = x0.clone();
        let inward = if v[i] + step[i] > hi[i] {
            -step[i].abs()
        } else {
            step[i]
        };
        v[i] += inward;
        // A zero-width box leaves this vertex on top of the start; the
        // simplex then stays pinned along that coordinate, as it should.
        clamp(&mut v);
        let fv = eval(&v, &mut f, &mut evals);
        verts.push((v, fv));
    }

    let mut iters = 0usize;
    while iters < max_iters {
        iters += 1;
        // Best first; stable so equal values keep a deterministic order.
        verts.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite objective"));
        let (best, worst) = (verts[0].1, verts[n].1);
        let spread = best - worst;
        if spread <= ftol_rel * (best.abs() + 1e-300) {
            break;
        }
        let diam = (1..=n)
            .map(|k| {
                verts[k]
                    .0
                    .iter()
                    .zip(&verts[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diam <= xtol_abs {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut c = vec![0.0; n];
        for v in verts.iter().take(n) {
            for (ci, vi) in c.iter_mut().zip(&v.0) {
                *ci += vi / n as f64;
            }
        }
        let shifted = |coef: f64| {
            let mut x: Vec<f64> = (0..n)
                .map(|i| c[i] + coef * (c[i] - verts[n].0[i]))
                .collect();
            clamp(&mut x);
            x
        };

        let xr = shifted(ALPHA);
        let fr = eval(&xr, &mut f, &mut evals);
        if fr > verts[0].1 {
            let xe = shifted(GAMMA);
            let fe = eval(&xe, &mut f, &mut evals);
            verts[n] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > verts[n - 1].1 {
            verts[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr > verts[n].1 {
            let x = shifted(RHO);
            let v = eval(&x, &mut f, &mut evals);
            (x, v)
        } else {
            let x = shifted(-RHO);
            let v = eval(&x, &mut f, &mut evals);
            (x, v)
        };
        if fc > verts[n].1.max(fr) {
            verts[n] = (xc, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let xb = verts[0].0.clone();
        for v in verts.iter_mut().skip(1) {
            for (vi, bi) in v.0.iter_mut().zip(&xb) {
                *vi = bi + SIGMA * (*vi - bi);
            }
            clamp(&mut v.0);
            v.1 = eval(&v.0, &mut f, &mut evals);
        }
    }

    verts.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite objective"));
    SimplexResult {
        x: verts[0].0.clone(),
        fx: verts[0].1,
        iters,
        evals,
    }
}
