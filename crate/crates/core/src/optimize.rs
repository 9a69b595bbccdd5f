//! Search for the best family parameters at a given p.
//!
//! The quotient is scale invariant for the families whose coefficients all
//! scale linearly with the parameters, so the search runs over a normalized
//! box: a = 1 for the (a, b) families, each coordinate pinned to 1 in turn
//! for the sign-patterned families, and the natural domains for the rest.
//! A coarse grid seeds downhill-simplex refinements; every random draw comes
//! from a stream seeded by the config, so results repeat bit for bit.

use crate::bounds::{hl_exponent, lower_bound_family, BoundReport};
use crate::error::{Error, Result};
use crate::norm::OptConfig;
use crate::poly::FamilyId;
use crate::simplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Search resolution. The final report is always recomputed at the caller's
/// full config; only the exploration runs at this cheaper setting.
const SEARCH_GRID: usize = 2001;
const SEARCH_TOL: f64 = 1e-11;
const NM_FTOL: f64 = 1e-11;
const NM_XTOL: f64 = 1e-10;
const NM_MAX_ITERS: usize = 140;
const SWEEP_ROUNDS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMode {
    /// Coarse grid, then simplex refinements from the best cells.
    GridSimplex,
    /// Cyclic 1-D refinement, holding all but one parameter fixed.
    CoordinateSweep,
}

impl fmt::Display for OptimizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizeMode::GridSimplex => "grid-simplex",
            OptimizeMode::CoordinateSweep => "coordinate-sweep",
        })
    }
}

impl FromStr for OptimizeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grid-simplex" => Ok(OptimizeMode::GridSimplex),
            "coordinate-sweep" => Ok(OptimizeMode::CoordinateSweep),
            other => Err(Error::Domain(format!(
                "unknown mode '{other}'; use grid-simplex or coordinate-sweep"
            ))),
        }
    }
}

/// Best parameters found for one family, with the full-precision report at
/// those parameters and the number of quotient evaluations spent searching.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub params: Vec<f64>,
    pub report: BoundReport,
    pub mode: OptimizeMode,
    pub evaluations: usize,
}

/// One normalized slice of a family's parameter space: some coordinates
/// pinned, the rest boxed.
struct SearchSpace {
    pins: Vec<(usize, f64)>,
    free: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Coarse-grid point count per free coordinate.
    grid: Vec<usize>,
}

impl SearchSpace {
    fn assemble(&self, family: FamilyId, free_vals: &[f64]) -> Vec<f64> {
        let mut params = vec![0.0; family.param_count()];
        for &(i, v) in &self.pins {
            params[i] = v;
        }
        for (slot, &i) in self.free.iter().enumerate() {
            params[i] = free_vals[slot];
        }
        params
    }

    fn cell_count(&self) -> usize {
        self.grid.iter().product()
    }

    fn cell_coords(&self, mut idx: usize) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.grid.len());
        for (d, &g) in self.grid.iter().enumerate() {
            let i = idx % g;
            idx /= g;
            v.push(self.lo[d] + (self.hi[d] - self.lo[d]) * i as f64 / (g - 1) as f64);
        }
        v
    }

    fn cell_width(&self, d: usize) -> f64 {
        (self.hi[d] - self.lo[d]) / (self.grid[d] - 1) as f64
    }
}

/// Pin each coordinate to +1 in turn; scale invariance makes the slices with
/// the largest-magnitude coordinate normalized to +1 cover everything, with
/// a little headroom past 1 for refinement near the slice boundary.
fn pinned_spaces(n_params: usize, grid_per_dim: usize) -> Vec<SearchSpace> {
    (0..n_params)
        .map(|pin| {
            let free: Vec<usize> = (0..n_params).filter(|&i| i != pin).collect();
            let d = free.len();
            SearchSpace {
                pins: vec![(pin, 1.0)],
                free,
                lo: vec![-1.05; d],
                hi: vec![1.05; d],
                grid: vec![grid_per_dim; d],
            }
        })
        .collect()
}

fn search_spaces(family: FamilyId) -> Vec<SearchSpace> {
    match family {
        // Single parameter on its open domain; stay strictly inside.
        FamilyId::P2 => vec![SearchSpace {
            pins: vec![],
            free: vec![0],
            lo: vec![1e-6],
            hi: vec![1.0 - 1e-6],
            grid: vec![601],
        }],
        // Scale invariance fixes a = 1; b stays free.
        FamilyId::P3 | FamilyId::P6 => vec![SearchSpace {
            pins: vec![(0, 1.0)],
            free: vec![1],
            lo: vec![-3.0],
            hi: vec![3.0],
            grid: vec![601],
        }],
        // The built-in middle coefficient already sets the scale.
        FamilyId::P10 => vec![SearchSpace {
            pins: vec![],
            free: vec![0, 1],
            lo: vec![-3.0, -3.0],
            hi: vec![3.0, 3.0],
            grid: vec![61, 61],
        }],
        FamilyId::P5 => pinned_spaces(3, 41),
        FamilyId::P7 => pinned_spaces(4, 15),
        FamilyId::P8 => pinned_spaces(2, 601),
    }
}

/// Maximize the lower-bound quotient over the family's parameters.
///
/// Search runs at a reduced internal resolution; the winning parameters are
/// then re-evaluated at the caller's config, and that report is returned.
pub fn optimize_parameters(
    family: FamilyId,
    p: f64,
    mode: OptimizeMode,
    cfg: &OptConfig,
) -> Result<OptimizeOutcome> {
    cfg.validate()?;
    hl_exponent(family.degree(), p)?;
    let search_cfg = OptConfig {
        coarse_grid: SEARCH_GRID,
        local_tol: SEARCH_TOL,
        ..cfg.clone()
    };

    let mut evaluations = 0usize;
    let quotient = |free_vals: &[f64], space: &SearchSpace| -> f64 {
        let params = space.assemble(family, free_vals);
        match lower_bound_family(family, &params, p, &search_cfg) {
            Ok(r) => r.lower_bound,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let spaces = search_spaces(family);

    // Coarse stage: every cell of every slice, pooled.
    struct Cell {
        space: usize,
        idx: usize,
        free_vals: Vec<f64>,
        value: f64,
    }
    let mut cells: Vec<Cell> = Vec::new();
    for (si, space) in spaces.iter().enumerate() {
        let n = space.cell_count();
        let vals: Vec<(Vec<f64>, f64)> = (0..n)
            .into_par_iter()
            .map(|idx| {
                let fv = space.cell_coords(idx);
                let v = quotient(&fv, space);
                (fv, v)
            })
            .collect();
        evaluations += n;
        cells.extend(
            vals.into_iter()
                .enumerate()
                .map(|(idx, (free_vals, value))| Cell {
                    space: si,
                    idx,
                    free_vals,
                    value,
                }),
        );
    }
    cells.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .expect("quotient is never NaN")
            .then(a.space.cmp(&b.space))
            .then(a.idx.cmp(&b.idx))
    });
    if cells.is_empty() || cells[0].value == f64::NEG_INFINITY {
        return Err(Error::Domain(format!(
            "no feasible parameters for {family} at p = {p}"
        )));
    }

    let mut best_vals = cells[0].free_vals.clone();
    let mut best_space = cells[0].space;
    let mut best_q = cells[0].value;

    match mode {
        OptimizeMode::GridSimplex => {
            // Refinement starts: the top cells verbatim, then jittered copies
            // of the same cells until the configured start count is reached.
            let n_top = cells.len().min(cfg.multistart_count.div_ceil(2)).max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            for s in 0..cfg.multistart_count {
                let cell = &cells[s % n_top];
                let space = &spaces[cell.space];
                let mut start = cell.free_vals.clone();
                if s >= n_top {
                    for (d, v) in start.iter_mut().enumerate() {
                        let w = space.cell_width(d);
                        *v = (*v + rng.gen_range(-0.5..=0.5) * w).clamp(space.lo[d], space.hi[d]);
                    }
                }
                let step: Vec<f64> = (0..start.len())
                    .map(|d| (space.cell_width(d) * 0.5).max(1e-3))
                    .collect();
                let r = simplex::maximize(
                    |fv| quotient(fv, space),
                    &start,
                    &step,
                    &space.lo,
                    &space.hi,
                    NM_FTOL,
                    NM_XTOL,
                    NM_MAX_ITERS,
                );
                evaluations += r.evals;
                if r.fx > best_q {
                    best_q = r.fx;
                    best_vals = r.x;
                    best_space = cell.space;
                }
            }
        }
        OptimizeMode::CoordinateSweep => {
            // From the best cell of each slice, refine one coordinate at a
            // time with the others held fixed, cycling until a full round
            // stops improving.
            for (si, space) in spaces.iter().enumerate() {
                let Some(seed_cell) = cells.iter().find(|c| c.space == si) else {
                    continue;
                };
                let mut vals = seed_cell.free_vals.clone();
                let mut q = seed_cell.value;
                for _ in 0..SWEEP_ROUNDS {
                    let before = q;
                    for d in 0..vals.len() {
                        let r = simplex::maximize(
                            |one: &[f64]| {
                                let mut fv = vals.clone();
                                fv[d] = one[0];
                                quotient(&fv, space)
                            },
                            &[vals[d]],
                            &[(space.cell_width(d) * 0.5).max(1e-3)],
                            &[space.lo[d]],
                            &[space.hi[d]],
                            NM_FTOL,
                            NM_XTOL,
                            NM_MAX_ITERS,
                        );
                        evaluations += r.evals;
                        if r.fx > q {
                            q = r.fx;
                            vals[d] = r.x[0];
                        }
                    }
                    if q - before <= 1e-12 * q.abs() {
                        break;
                    }
                }
                if q > best_q {
                    best_q = q;
                    best_vals = vals;
                    best_space = si;
                }
            }
        }
    }

    let mut params = spaces[best_space].assemble(family, &best_vals);
    if matches!(family, FamilyId::P5 | FamilyId::P7 | FamilyId::P8) {
        // The quotient is scale invariant for these families, so the winner is
        // only defined up to a common factor. Divide by the signed
        // largest-magnitude parameter: that coordinate becomes exactly +1 and
        // every other one lands in [-1, 1].
        let pivot = params
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap();
        for v in &mut params {
            *v /= pivot;
        }
    }
    let report = lower_bound_family(family, &params, p, cfg)?;
    Ok(OptimizeOutcome {
        params,
        report,
        mode,
        evaluations,
    })
}

/// Quotient as a function of the coefficient ratio λ = b/a, for the
/// two-parameter families: a is set to 1 and b to λ. This is the series the
/// quotient-versus-ratio plots are drawn from.
pub fn parameter_sweep(
    family: FamilyId,
    p: f64,
    range: (f64, f64, f64),
    cfg: &OptConfig,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    if !matches!(
        family,
        FamilyId::P3 | FamilyId::P6 | FamilyId::P8 | FamilyId::P10
    ) {
        return Err(Error::Domain(format!(
            "ratio sweep needs a two-parameter family (P3, P6, P8, P10), got {family}"
        )));
    }
    let (lo, hi, step) = range;
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && lo <= hi) {
        return Err(Error::Domain(format!(
            "invalid sweep range {lo}..{hi} step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if n > 200_000 {
        return Err(Error::Domain(format!(
            "sweep would emit {n} points; cap is 200000"
        )));
    }
    let mut series = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = lo + step * i as f64;
        let r = lower_bound_family(family, &[1.0, lambda], p, cfg)?;
        series.push((lambda, r.lower_bound));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OptConfig {
        OptConfig::default()
    }

    #[test]
    fn cubic_search_recovers_ratio_minus_two() {
        let r = optimize_parameters(FamilyId::P3, 6.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        assert_eq!(r.params[0], 1.0);
        assert!((r.params[1] + 2.0).abs() < 0.01, "b = {}", r.params[1]);
        assert!(
            r.report.lower_bound >= 2.236067 - 1e-6,
            "lb = {}",
            r.report.lower_bound
        );
        assert_eq!(r.report.family, Some(FamilyId::P3));
    }

    #[test]
    fn quadratic_search_finds_flat_optimum() {
        // The quadratic family's quotient is constant in a (every member is
        // extremal), so only the value is pinned; any interior a is a valid
        // argmax.
        let r = optimize_parameters(FamilyId::P2, 4.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        assert!(
            r.params[0] > 0.0 && r.params[0] < 1.0,
            "a = {}",
            r.params[0]
        );
        assert!(
            (r.report.lower_bound - std::f64::consts::SQRT_2).abs() < 1e-9,
            "lb = {}",
            r.report.lower_bound
        );
    }

    #[test]
    fn sextic_search_meets_reference() {
        let r = optimize_parameters(FamilyId::P6, 12.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        assert!(
            r.report.lower_bound >= 10.636287 - 1e-5,
            "lb = {}",
            r.report.lower_bound
        );
    }

    #[test]
    fn octic_search_meets_reference() {
        let r = optimize_parameters(FamilyId::P8, 16.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        assert!(
            r.report.lower_bound >= 31.727174 - 1e-5,
            "lb = {}",
            r.report.lower_bound
        );
    }

    #[test]
    fn sweep_mode_agrees_on_cubic() {
        let a = optimize_parameters(FamilyId::P3, 6.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        let b =
            optimize_parameters(FamilyId::P3, 6.0, OptimizeMode::CoordinateSweep, &cfg()).unwrap();
        assert_eq!(b.mode, OptimizeMode::CoordinateSweep);
        assert!((a.report.lower_bound - b.report.lower_bound).abs() < 1e-6);
    }

    #[test]
    fn search_is_deterministic() {
        let a = optimize_parameters(FamilyId::P3, 6.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        let b = optimize_parameters(FamilyId::P3, 6.0, OptimizeMode::GridSimplex, &cfg()).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.report.lower_bound, b.report.lower_bound);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn ratio_sweep_hits_reference_points() {
        let s = parameter_sweep(FamilyId::P3, 6.0, (-2.5, -1.5, 0.25), &cfg()).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s[2].0 + 2.0).abs() < 1e-12);
        assert!((s[2].1 - 5f64.sqrt()).abs() < 1e-6, "q = {}", s[2].1);

        // b = 0 drops the middle coefficients; the quotient is exactly 1.
        let s = parameter_sweep(FamilyId::P3, 6.0, (0.0, 0.0, 1.0), &cfg()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].1 - 1.0).abs() < 1e-9, "q = {}", s[0].1);
    }

    #[test]
    fn sweep_rejects_bad_input() {
        assert!(parameter_sweep(FamilyId::P5, 10.0, (-1.0, 1.0, 0.5), &cfg()).is_err());
        assert!(parameter_sweep(FamilyId::P3, 6.0, (1.0, -1.0, 0.5), &cfg()).is_err());
        assert!(parameter_sweep(FamilyId::P3, 6.0, (-1.0, 1.0, 0.0), &cfg()).is_err());
        assert!(parameter_sweep(FamilyId::P3, 6.0, (-1.0, 1.0, 1e-9), &cfg()).is_err());
    }

    #[test]
    fn mode_strings_round_trip() {
        for m in [OptimizeMode::GridSimplex, OptimizeMode::CoordinateSweep] {
            assert_eq!(m.to_string().parse::<OptimizeMode>().unwrap(), m);
        }
        assert!("hillclimb".parse::<OptimizeMode>().is_err());
    }
}
