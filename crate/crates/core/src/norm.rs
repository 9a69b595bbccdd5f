//! Global maximization of |P| over the unit sphere of l_p^2.
//!
//! The sphere is parametrized as (t, sign * (1 - |t|^p)^(1/p)) for
//! t in [-1, 1] and again with the roles of the coordinates swapped,
//! reducing the problem to 1-D: a dense deterministic grid locates every
//! sampled local maximum and a bracketed derivative-free refinement polishes
//! each one. p = infinity walks the four edges of the square with the same
//! machinery.

use crate::brent;
use crate::error::{Error, Result};
use crate::poly::HomoPoly2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Tunables shared by every optimizer in the crate. The same config value
/// reproduces the same output bit for bit, independent of worker count.
#[derive(Debug, Clone)]
pub struct OptConfig {
    /// Samples of t in [-1, 1]; odd so t = 0 and t = +-1 are on the grid.
    pub coarse_grid: usize,
    /// Abscissa tolerance of the local refinement.
    pub local_tol: f64,
    /// Iteration cap per refinement bracket.
    pub max_refine_iters: usize,
    /// Simplex restarts in the parameter search.
    pub multistart_count: usize,
    /// Seed for every randomized component (restart jitter, oracle sampling).
    pub rng_seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            coarse_grid: 20001,
            local_tol: 1e-13,
            max_refine_iters: 200,
            multistart_count: 32,
            rng_seed: 0,
        }
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid < 3 || self.coarse_grid.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "coarse_grid must be odd and >= 3, got {}",
                self.coarse_grid
            )));
        }
        // Negated so a NaN tolerance is rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.local_tol > 0.0) {
            return Err(Error::Domain(format!(
                "local_tol must be positive, got {}",
                self.local_tol
            )));
        }
        if self.max_refine_iters == 0 {
            return Err(Error::Domain("max_refine_iters must be >= 1".into()));
        }
        if self.multistart_count == 0 {
            return Err(Error::Domain("multistart_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// A computed sup-norm with its witness and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct NormResult {
    pub value: f64,
    pub argmax: (f64, f64),
    pub p: f64,
    pub grid_size: usize,
    /// Total refinement iterations across all polished brackets.
    pub refinement_iters: usize,
    /// max(final bracket width * local slope estimate, spread between the
    /// two best local maxima when they agree to 1e-10 relative).
    pub est_error: f64,
}

/// Point on the l_p unit sphere for parameter t and a sign for the second
/// coordinate. For finite p the second coordinate is (1 - |t|^p)^(1/p),
/// computed in the log domain so p ~ 1200 keeps full precision near |t| = 1;
/// for p = infinity the sphere is the square, y = sign * 1.
pub fn sphere_point(t: f64, sign: f64, p: f64) -> (f64, f64) {
    debug_assert!((-1.0..=1.0).contains(&t));
    if p.is_infinite() {
        return (t, sign);
    }
    let a = t.abs();
    let y = if a == 1.0 {
        0.0
    } else if a == 0.0 {
        1.0
    } else {
        let e = p * a.ln();
        if e < -700.0 {
            // |t|^p is below 1e-304: y = (1 - |t|^p)^(1/p) rounds to 1.
            1.0
        } else {
            (f64::ln_1p(-e.exp()) / p).exp()
        }
    };
    (t, sign * y)
}

/// Candidate produced by refining one sampled local maximum.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    t: f64,
    point: (f64, f64),
    value: f64,
    iters: usize,
    /// Zero when the argmax is pinned exactly (domain endpoint).
    abscissa_err: f64,
    branch: usize,
}

/// Near-equal maxima are treated as ties and broken toward the smallest |t|
/// (then toward the smaller t, then the lower branch index) so symmetric
/// families report a deterministic witness.
const TIE_REL: f64 = 1e-13;
/// Window in which the runner-up spread is folded into est_error.
const SPREAD_REL: f64 = 1e-10;

/// Sup of |P| over the unit sphere of l_p^2.
///
/// Every coarse-grid local maximum of each search branch is refined to the
/// configured abscissa tolerance; the largest refined value wins. The sphere
/// is scanned in both chart orientations (parametrized by x and by y), so
/// every point sits in a chart whose parameter is its smaller coordinate and
/// no region hides in the steep end of a chart; the negative-sign branches
/// are dropped when the coefficient pattern certifies the reflection
/// symmetry |P(x,-y)| = |P(x,y)| (all nonzero coefficients on one index
/// parity).
pub fn sup_norm(poly: &HomoPoly2, p: f64, cfg: &OptConfig) -> Result<NormResult> {
    cfg.validate()?;
    if poly.is_zero() {
        return Err(Error::Domain(
            "sup-norm of the zero polynomial is not a useful bound".into(),
        ));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!(
            "sup-norm needs p >= 1 or p = inf, got {p}"
        )));
    }

    // Branches are scanned in a fixed order; the grids inside parallelize
    // but collect by index, so the candidate list is schedule-independent.
    let branches = search_branches(poly, p);
    let mut candidates: Vec<Candidate> = Vec::new();
    for (bi, branch) in branches.iter().enumerate() {
        candidates.extend(scan_branch(poly, branch, bi, cfg));
    }

    if candidates.iter().any(|c| c.iters >= cfg.max_refine_iters) {
        let best = candidates.iter().map(|c| c.value).fold(0.0, f64::max);
        return Err(Error::NonConvergence {
            iters: cfg.max_refine_iters,
            best,
        });
    }

    let fmax = candidates.iter().map(|c| c.value).fold(0.0, f64::max);
    let winner = candidates
        .iter()
        .filter(|c| c.value >= fmax - TIE_REL * fmax)
        .min_by(|a, b| {
            (a.t.abs(), a.t, a.branch)
                .partial_cmp(&(b.t.abs(), b.t, b.branch))
                .expect("finite candidates")
        })
        .expect("at least one candidate on a nonzero polynomial");

    // Slope scale around the winner, for the abscissa-uncertainty term.
    let w = winner.abscissa_err.max(1e-9 * cfg.local_tol);
    let slope = branches[winner.branch].slope_estimate(poly, winner.t, w);
    let width_term = if winner.abscissa_err == 0.0 {
        0.0
    } else {
        winner.abscissa_err * slope
    };
    let spread_term = candidates
        .iter()
        .filter(|c| {
            !std::ptr::eq(*c, winner) && (c.value - winner.value).abs() <= SPREAD_REL * fmax
        })
        .map(|c| (c.value - winner.value).abs())
        .fold(0.0, f64::max);

    Ok(NormResult {
        value: winner.value,
        argmax: winner.point,
        p,
        grid_size: cfg.coarse_grid,
        refinement_iters: candidates.iter().map(|c| c.iters).sum(),
        est_error: width_term.max(spread_term),
    })
}

/// One 1-D search domain: a map from the grid parameter to a sphere point.
struct Branch {
    p: f64,
    kind: BranchKind,
}

enum BranchKind {
    /// (t, sign * (1 - |t|^p)^(1/p)) on the l_p sphere.
    Sphere { sign: f64 },
    /// The same map with the coordinates swapped. Near |t| = 1 the implicit
    /// coordinate of a chart varies arbitrarily fast in t, so each chart only
    /// resolves the half of the sphere where its own parameter is the smaller
    /// coordinate; the transposed charts cover the other half.
    SphereT { sign: f64 },
    /// An edge of the square for p = infinity: one coordinate pinned.
    Edge { x_fixed: bool, fixed: f64 },
}

impl Branch {
    fn point(&self, t: f64) -> (f64, f64) {
        match self.kind {
            BranchKind::Sphere { sign } => sphere_point(t, sign, self.p),
            BranchKind::SphereT { sign } => {
                let (u, x) = sphere_point(t, sign, self.p);
                (x, u)
            }
            BranchKind::Edge { x_fixed, fixed } => {
                if x_fixed {
                    (fixed, t)
                } else {
                    (t, fixed)
                }
            }
        }
    }

    fn eval(&self, poly: &HomoPoly2, t: f64) -> f64 {
        let (x, y) = self.point(t);
        poly.evaluate(x, y).abs()
    }

    /// Central-difference magnitude of the slope at distance w, one-sided at
    /// the domain boundary.
    fn slope_estimate(&self, poly: &HomoPoly2, t: f64, w: f64) -> f64 {
        let f0 = self.eval(poly, t);
        let mut slope = 0.0f64;
        for tt in [t - w, t + w] {
            if (-1.0..=1.0).contains(&tt) {
                slope = slope.max((self.eval(poly, tt) - f0).abs() / w);
            }
        }
        slope
    }
}

fn search_branches(poly: &HomoPoly2, p: f64) -> Vec<Branch> {
    if p.is_infinite() {
        return vec![
            Branch {
                p,
                kind: BranchKind::Edge {
                    x_fixed: false,
                    fixed: 1.0,
                },
            },
            Branch {
                p,
                kind: BranchKind::Edge {
                    x_fixed: false,
                    fixed: -1.0,
                },
            },
            Branch {
                p,
                kind: BranchKind::Edge {
                    x_fixed: true,
                    fixed: 1.0,
                },
            },
            Branch {
                p,
                kind: BranchKind::Edge {
                    x_fixed: true,
                    fixed: -1.0,
                },
            },
        ];
    }
    // One index parity makes |P| even in each coordinate separately (the two
    // substitutions differ by the global sign (-1)^m), so the certificate
    // drops the minus branch of both chart families at once.
    let sym = reflection_symmetric(poly);
    let mut branches = vec![Branch {
        p,
        kind: BranchKind::Sphere { sign: 1.0 },
    }];
    if !sym {
        branches.push(Branch {
            p,
            kind: BranchKind::Sphere { sign: -1.0 },
        });
    }
    branches.push(Branch {
        p,
        kind: BranchKind::SphereT { sign: 1.0 },
    });
    if !sym {
        branches.push(Branch {
            p,
            kind: BranchKind::SphereT { sign: -1.0 },
        });
    }
    branches
}

/// True when all nonzero coefficients sit on indices of one parity, which
/// makes |P(x, -y)| = |P(x, y)| pointwise and the y < 0 half redundant.
fn reflection_symmetric(poly: &HomoPoly2) -> bool {
    let mut parity = None;
    for (j, &c) in poly.coeffs().iter().enumerate() {
        if c != 0.0 {
            match parity {
                None => parity = Some(j % 2),
                Some(q) if q != j % 2 => return false,
                _ => {}
            }
        }
    }
    true
}

/// Evaluate the branch on the coarse grid, refine every sampled local
/// maximum (plateau-aware), and return the polished candidates.
fn scan_branch(
    poly: &HomoPoly2,
    branch: &Branch,
    branch_idx: usize,
    cfg: &OptConfig,
) -> Vec<Candidate> {
    let n = cfg.coarse_grid;
    // Symmetric form: t = 0 and t = +-1 land on the grid exactly (n is odd).
    let half = ((n - 1) / 2) as f64;
    let t_of = move |i: usize| (i as f64 - half) / half;
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| branch.eval(poly, t_of(i)))
        .collect();

    // Local maxima of the sampled sequence; a flat run counts once. Runs of
    // (run_lo, run_hi) keep their extent so constant plateaus can report
    // their midpoint instead of letting the refiner wander.
    let mut maxima: Vec<(usize, usize)> = Vec::new();
    let mut i = 0usize;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_ok = i == 0 || values[i - 1] < values[i];
        let right_ok = j == n - 1 || values[j + 1] < values[j];
        if left_ok && right_ok {
            maxima.push((i, j));
        }
        i = j + 1;
    }

    maxima
        .into_par_iter()
        .map(|(run_lo, run_hi)| {
            if run_hi - run_lo >= 2 {
                // Constant to grid resolution: the midpoint is as good a
                // witness as any and the sampled value is exact there.
                let t_mid = t_of((run_lo + run_hi) / 2);
                return Candidate {
                    t: t_mid,
                    point: branch.point(t_mid),
                    value: values[run_lo],
                    iters: 0,
                    abscissa_err: 0.0,
                    branch: branch_idx,
                };
            }
            let (lo_i, hi_i) = (run_lo.saturating_sub(1), (run_hi + 1).min(n - 1));
            let (lo, hi) = (t_of(lo_i), t_of(hi_i));
            let r = brent::maximize(
                |t| branch.eval(poly, t),
                lo,
                hi,
                cfg.local_tol,
                cfg.max_refine_iters,
            );
            let mut t_best = r.x;
            let mut f_best = r.fx;
            let mut abscissa_err = r.width.abs();
            let mut iters = r.iters;
            if !r.converged {
                iters = cfg.max_refine_iters;
            }
            // A maximum within tolerance of a domain endpoint or of the
            // midline is attained there whenever the value does not drop:
            // pin it for a clean witness and drop the abscissa uncertainty.
            for pin in [-1.0f64, 0.0, 1.0] {
                if (t_best - pin).abs() <= abscissa_err + cfg.local_tol {
                    let fp = branch.eval(poly, pin);
                    if fp >= f_best {
                        t_best = pin;
                        f_best = fp;
                        abscissa_err = 0.0;
                    }
                }
            }
            Candidate {
                t: t_best,
                point: branch.point(t_best),
                value: f_best,
                iters,
                abscissa_err,
                branch: branch_idx,
            }
        })
        .collect()
}

/// Monte-Carlo check value: max of |P| over n sphere points drawn from two
/// stratifications (t uniform, and t = (1 - u^p)^(1/p) which piles samples
/// near |t| = 1), both second-coordinate signs. Always a lower bound on the
/// true sup, so sup_norm must dominate it.
pub fn sup_norm_oracle(poly: &HomoPoly2, p: f64, n_samples: usize, seed: u64) -> f64 {
    assert!(n_samples >= 1000, "oracle needs at least 1e3 samples");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for i in 0..n_samples {
        let v = if p.is_infinite() {
            let t: f64 = rng.gen_range(-1.0..=1.0);
            let (x, y) = match rng.gen_range(0..4u8) {
                0 => (t, 1.0),
                1 => (t, -1.0),
                2 => (1.0, t),
                _ => (-1.0, t),
            };
            poly.evaluate(x, y).abs()
        } else {
            let t = if i % 2 == 0 {
                rng.gen_range(-1.0..=1.0)
            } else {
                // Transformed stratum: u uniform, t on the complementary
                // coordinate of the sphere map, random side.
                let u: f64 = rng.gen_range(0.0..=1.0);
                let side = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                side * sphere_point(u, 1.0, p).1
            };
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let (x, y) = sphere_point(t, sign, p);
            poly.evaluate(x, y).abs()
        };
        best = best.max(v);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FamilyId;

    fn cfg() -> OptConfig {
        OptConfig::default()
    }

    #[test]
    fn sphere_point_basics() {
        assert_eq!(sphere_point(0.0, 1.0, 4.0), (0.0, 1.0));
        let (x, y) = sphere_point(1.0, -1.0, 12.0);
        assert_eq!((x, y), (1.0, -0.0));
        let t = 2f64.powf(-0.25);
        let (x, y) = sphere_point(t, 1.0, 4.0);
        assert!((x - y).abs() < 1e-15);
        assert!(p_residual(x, y, 4.0) < 1e-14);
    }

    #[test]
    fn sphere_point_residual_small_even_for_huge_p() {
        for p in [2.0, 6.0, 20.0, 600.0, 1200.0] {
            for &t in &[-0.999999, -0.73, -0.2, 0.11, 0.5, 0.987, 0.99999999] {
                let (x, y) = sphere_point(t, 1.0, p);
                // The checker recomputes y^p from the rounded y, which
                // amplifies its half-ulp representation error by p; the
                // tolerance has to carry that factor.
                let tol = 1e-14 + 1e-16 * p;
                assert!(
                    p_residual(x, y, p) < tol,
                    "p={p} t={t} residual={}",
                    p_residual(x, y, p)
                );
            }
        }
    }

    /// | |x|^p + |y|^p - 1 | computed in the log domain.
    fn p_residual(x: f64, y: f64, p: f64) -> f64 {
        let term = |v: f64| {
            let a: f64 = v.abs();
            if a == 0.0 {
                0.0
            } else {
                (p * a.ln()).exp()
            }
        };
        (term(x) + term(y) - 1.0).abs()
    }

    #[test]
    fn monomial_sup_is_one_at_pole() {
        let xm = HomoPoly2::new(vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for p in [1.0, 4.0, 17.5, f64::INFINITY] {
            let r = sup_norm(&xm, p, &cfg()).unwrap();
            assert!((r.value - 1.0).abs() < 1e-14);
            assert_eq!(r.argmax.0.abs(), 1.0);
            assert_eq!(r.argmax.1.abs(), 0.0);
        }
    }

    #[test]
    fn cubic_symmetric_point() {
        // sup of x^3 + y^3 on the l_6 sphere is sqrt(2), at x = y = 2^(-1/6).
        let p3 = FamilyId::P3.build(&[1.0, 0.0]).unwrap();
        let r = sup_norm(&p3, 6.0, &cfg()).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);
        let c = 2f64.powf(-1.0 / 6.0);
        assert!((r.argmax.0.abs() - c).abs() < 1e-7);
        assert!((r.argmax.0 - r.argmax.1).abs() < 1e-7);
    }

    #[test]
    fn square_edges_for_p2() {
        // P2 at a = 1/2 is (x^2 + 2xy - y^2)/2, coefficients (0.5, 1, -0.5);
        // its sup on the square is 1, at (x, y) = (1, 1).
        let p2 = FamilyId::P2.build(&[0.5]).unwrap();
        let r = sup_norm(&p2, f64::INFINITY, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.argmax.0.abs() - 1.0).abs() < 1e-9 || (r.argmax.1.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reference_norm_values_reproduce() {
        let p2 = FamilyId::P2.build(&[0.867835]).unwrap();
        let r = sup_norm(&p2, 4.0, &cfg()).unwrap();
        assert!(
            (r.value - 0.991227730027263).abs() < 1e-9,
            "got {}",
            r.value
        );

        let p10 = FamilyId::P10.build(&[0.0938, -0.5938]).unwrap();
        let r = sup_norm(&p10, 20.0, &cfg()).unwrap();
        assert!(
            (r.value - 0.015289940437748).abs() < 1e-9,
            "got {}",
            r.value
        );
    }

    #[test]
    fn argmax_lies_on_sphere_and_value_matches() {
        let p5 = FamilyId::P5.build(&[0.19462, 0.66008, 0.97833]).unwrap();
        let r = sup_norm(&p5, 10.0, &cfg()).unwrap();
        let (x, y) = r.argmax;
        assert!(p_residual(x, y, 10.0) < 1e-12);
        let v = p5.evaluate(x, y).abs();
        assert!((v - r.value).abs() <= 1e-12 * r.value);
        assert!(r.est_error <= cfg().local_tol * r.value + 1e-14);
        assert!(r.grid_size == cfg().coarse_grid);
    }

    #[test]
    fn oracle_never_beats_optimizer() {
        let polys = [
            FamilyId::P3.build(&[1.0, -2.0]).unwrap(),
            FamilyId::P6.build(&[1.0, -2.2654]).unwrap(),
            FamilyId::P7
                .build(&[0.05126, 0.22070, 0.50537, 0.71044])
                .unwrap(),
        ];
        for poly in &polys {
            let p = 2.0 * poly.degree() as f64;
            let sup = sup_norm(poly, p, &cfg()).unwrap().value;
            let oracle = sup_norm_oracle(poly, p, 200_000, 42);
            assert!(sup >= oracle - 1e-12, "sup={sup} oracle={oracle}");
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.coarse_grid = 4; // even
        assert!(c.validate().is_err());
        c.coarse_grid = 1;
        assert!(c.validate().is_err());
        c = cfg();
        c.local_tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_zero_polynomial_and_bad_p() {
        let zero = HomoPoly2::new(vec![0.0, 0.0]).unwrap();
        assert!(sup_norm(&zero, 4.0, &cfg()).is_err());
        let p = FamilyId::P3.build(&[1.0, 0.5]).unwrap();
        assert!(sup_norm(&p, 0.5, &cfg()).is_err());
        assert!(sup_norm(&p, f64::NAN, &cfg()).is_err());
    }
}
