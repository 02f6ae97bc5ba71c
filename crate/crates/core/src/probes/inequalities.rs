//! Empirical constants for the Fefferman–Stein inequality
//! `‖(Σ_k |M_t f_k|^q)^{1/q}‖_p ≤ C ‖(Σ_k |f_k|^q)^{1/q}‖_p` (`t < min(p, q)`)
//! and the Nikolskiĭ inequality `‖f‖_1 ≤ C R^{n/t−n} ‖f‖_t` for
//! `supp f̂ ⊂ B(0, R)`.
//!
//! Each constant is calibrated as the maximum ratio over one seed set on a
//! base grid, recomputed on the refined grid from the same trigonometric
//! polynomials, and then validated against fresh seeds on the refined grid
//! with the bound fixed at twice the calibrated value.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{idft, lp_norm, GridFunction, TorusGrid};
use crate::random::random_box_spectrum;
use crate::spaces::{maximal, mixed_norm};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InequalityOptions {
    pub dim: usize,
    /// Base grid; the refined grid has twice as many points per axis.
    pub n_points: usize,
    pub samples: usize,
    pub seed: u64,
    /// Offset of the validation seeds.
    pub validation_offset: u64,
}

impl Default for InequalityOptions {
    fn default() -> Self {
        Self { dim: 1, n_points: 128, samples: 100, seed: 0, validation_offset: 1_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCase {
    pub label: String,
    pub calibrated: f64,
    pub refined: f64,
    /// `refined / calibrated − 1`.
    pub drift: f64,
    pub validation_max: f64,
    /// `2 · calibrated`.
    pub bound: f64,
    pub violations: usize,
}

/// FS families: `f_k` for `k = 0..=4`, spectrum in the shell `2^{k−1} < |ξ| ≤ 2^k`
/// (`|ξ| ≤ 1` for `k = 0`).
fn fs_family(grid: TorusGrid, seed: u64) -> Vec<GridFunction> {
    (0..=4u32)
        .map(|k| {
            let hi = 2f64.powi(k as i32);
            let lo = if k == 0 { -1.0 } else { hi / 2.0 };
            let s = random_box_spectrum(grid, hi as i64, seed * 8 + k as u64, |r| if r > lo && r <= hi { 1.0 } else { 0.0 });
            idft(&s)
        })
        .collect()
}

fn fs_ratio(grid: TorusGrid, seed: u64, p: f64, q: f64, t: f64) -> Result<f64> {
    let fam = fs_family(grid, seed);
    let max: Vec<GridFunction> = fam.iter().map(|f| maximal(f, t)).collect::<Result<_>>()?;
    Ok(mixed_norm(&max, p, q)? / mixed_norm(&fam, p, q)?)
}

fn nik_ratio(grid: TorusGrid, seed: u64, radius: i64, t: f64) -> Result<f64> {
    let r = radius as f64;
    let f = idft(&random_box_spectrum(grid, radius, seed, |rho| if rho <= r { 1.0 } else { 0.0 }));
    let n = grid.dim() as f64;
    Ok(lp_norm(&f, 1.0)? / (r.powf(n / t - n) * lp_norm(&f, t)?))
}

fn run_case(label: String, opts: &InequalityOptions, ratio: impl Fn(TorusGrid, u64) -> Result<f64> + Sync) -> Result<InequalityCase> {
    let base = TorusGrid::new(opts.dim, opts.n_points)?;
    let fine = TorusGrid::new(opts.dim, 2 * opts.n_points)?;
    let max_over = |g: TorusGrid, first: u64| -> Result<Vec<f64>> {
        (0..opts.samples as u64).into_par_iter().map(|i| ratio(g, first + i)).collect()
    };
    let fold = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let calibrated = fold(&max_over(base, opts.seed)?);
    let refined = fold(&max_over(fine, opts.seed)?);
    let validation = max_over(fine, opts.seed + opts.validation_offset)?;
    let bound = 2.0 * calibrated;
    Ok(InequalityCase {
        label,
        calibrated,
        refined,
        drift: refined / calibrated - 1.0,
        validation_max: fold(&validation),
        bound,
        violations: validation.iter().filter(|r| !(**r <= bound)).count(),
    })
}

/// Cases `(p, q, t)`; each needs `t < min(p, q)` and `t ≤ 1`.
pub fn fefferman_stein_suite(cases: &[(f64, f64, f64)], opts: &InequalityOptions) -> Result<Vec<InequalityCase>> {
    cases
        .iter()
        .map(|&(p, q, t)| {
            if !(t > 0.0 && t <= 1.0 && t < p.min(q)) {
                return Err(Error::Inadmissible(format!("Fefferman-Stein needs 0 < t < min(p, q), t ≤ 1: ({p}, {q}, {t})")));
            }
            run_case(format!("fefferman-stein(p={p},q={q},t={t})"), opts, |g, s| fs_ratio(g, s, p, q, t))
        })
        .collect()
}

/// One case per `t`, with the ratio maximized over `radii` as well as seeds.
pub fn nikolskii_suite(ts: &[f64], radii: &[i64], opts: &InequalityOptions) -> Result<Vec<InequalityCase>> {
    let top = *radii.iter().max().ok_or_else(|| Error::Inadmissible("empty radius list".into()))?;
    if radii.iter().any(|&r| r < 1) || top as usize >= opts.n_points / 2 {
        return Err(Error::Inadmissible(format!("radii {radii:?} on {} points", opts.n_points)));
    }
    ts.iter()
        .map(|&t| {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::InvalidExponent { name: "t", value: t });
            }
            run_case(format!("nikolskii(t={t})"), opts, |g, s| {
                radii.iter().map(|&r| nik_ratio(g, s * 31 + r as u64, r, t)).try_fold(0.0f64, |m, v| Ok(m.max(v?)))
            })
        })
        .collect()
}
