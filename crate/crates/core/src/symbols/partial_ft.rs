//! The partially Fourier transformed symbol `â(ξ, η) = F_{x→ξ} a(x, η)` and
//! the twisted-diagonal condition.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::Symbol;
use crate::error::{Error, Result};
use crate::grid::{dft, Freq, GridFunction, SpectralFunction, TorusGrid};

/// Row access to `â(·, η)`. Separable symbols are transformed analytically
/// from their stored coefficients; others by one DFT in `x` per row.
pub struct PartialFt<'a> {
    symbol: &'a Symbol,
    // per term: nonzero (index, coefficient) pairs of m̂_t
    sparse: Option<Vec<Vec<(usize, Complex64)>>>,
}

pub fn partial_ft_x<'a>(a: &'a Symbol, grid: &TorusGrid) -> Result<PartialFt<'a>> {
    if a.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let sparse = a.structure().map(|terms| {
        terms
            .iter()
            .map(|t| {
                t.x_spectrum()
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
                    .map(|(i, c)| (i, *c))
                    .collect()
            })
            .collect()
    });
    Ok(PartialFt { symbol: a, sparse })
}

impl PartialFt<'_> {
    pub fn grid(&self) -> &TorusGrid {
        self.symbol.grid()
    }

    pub fn is_analytic(&self) -> bool {
        self.sparse.is_some()
    }

    /// `â(·, η)` for the lattice frequency with storage index `eta_idx`.
    pub fn row(&self, eta_idx: usize) -> SpectralFunction {
        let g = *self.grid();
        match &self.sparse {
            Some(sparse) => {
                let terms = self.symbol.structure().expect("sparse implies structure");
                let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
                for (t, nz) in terms.iter().zip(sparse) {
                    let p = t.lattice()[eta_idx];
                    if p == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for &(i, c) in nz {
                        coeffs[i] += c * p;
                    }
                }
                SpectralFunction::from_vec_unchecked(g, coeffs)
            }
            None => {
                let values = (0..g.len()).map(|x| self.symbol.eval_lattice(x, eta_idx)).collect();
                dft(&GridFunction::from_vec_unchecked(g, values))
            }
        }
    }

    /// Nonzero entries `(ξ index, â(ξ, η))` of one row.
    pub fn row_entries(&self, eta_idx: usize) -> Vec<(usize, Complex64)> {
        match &self.sparse {
            Some(sparse) => {
                let terms = self.symbol.structure().expect("sparse implies structure");
                let mut dense = vec![Complex64::new(0.0, 0.0); self.grid().len()];
                let mut touched = Vec::new();
                for (t, nz) in terms.iter().zip(sparse) {
                    let p = t.lattice()[eta_idx];
                    if p == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for &(i, c) in nz {
                        touched.push(i);
                        dense[i] += c * p;
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                touched.into_iter().filter(|&i| dense[i] != Complex64::new(0.0, 0.0)).map(|i| (i, dense[i])).collect()
            }
            None => self
                .row(eta_idx)
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
                .map(|(i, c)| (i, *c))
                .collect(),
        }
    }

    /// `max |â(ξ, η)|` over the whole lattice.
    pub fn global_max(&self) -> f64 {
        (0..self.grid().len())
            .into_par_iter()
            .map(|e| self.row_entries(e).iter().map(|(_, c)| c.norm()).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedWitness {
    pub xi: Freq,
    pub eta: Freq,
    pub magnitude: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedReport {
    pub c: f64,
    pub rel_threshold: f64,
    pub pass: bool,
    pub global_max: f64,
    pub max_in_region: f64,
    pub violations: usize,
    /// Largest violations first, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<TwistedWitness>,
}

pub const MAX_WITNESSES: usize = 64;

/// True iff `|â(ξ, η)| ≤ rel_threshold · max|â|` wherever
/// `C(|ξ+η| + 1) ≤ |η|` on the lattice.
pub fn twisted_diagonal_check(a: &Symbol, c: f64, grid: &TorusGrid, rel_threshold: f64) -> Result<TwistedReport> {
    if c.is_nan() || c < 1.0 {
        return Err(Error::Inadmissible(format!("twisted constant C = {c} < 1")));
    }
    let ft = partial_ft_x(a, grid)?;
    let global_max = ft.global_max();
    let cut = rel_threshold * global_max;
    let g = *grid;
    let per_row: Vec<(f64, Vec<TwistedWitness>, usize)> = (0..g.len())
        .into_par_iter()
        .map(|e| {
            let eta = g.freq_of(e);
            let eta_norm = ((eta[0] * eta[0] + eta[1] * eta[1]) as f64).sqrt();
            let mut worst: f64 = 0.0;
            let mut wit = Vec::new();
            let mut count = 0;
            for (i, v) in ft.row_entries(e) {
                let xi = g.freq_of(i);
                let s = [xi[0] + eta[0], xi[1] + eta[1]];
                let s_norm = ((s[0] * s[0] + s[1] * s[1]) as f64).sqrt();
                if c * (s_norm + 1.0) <= eta_norm {
                    let m = v.norm();
                    worst = worst.max(m);
                    if m > cut {
                        count += 1;
                        wit.push(TwistedWitness { xi, eta, magnitude: m });
                    }
                }
            }
            (worst, wit, count)
        })
        .collect();
    let max_in_region = per_row.iter().map(|r| r.0).fold(0.0, f64::max);
    let violations = per_row.iter().map(|r| r.2).sum();
    let mut witnesses: Vec<TwistedWitness> = per_row.into_iter().flat_map(|r| r.1).collect();
    witnesses.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude).then(a.eta.cmp(&b.eta)).then(a.xi.cmp(&b.xi)));
    witnesses.truncate(MAX_WITNESSES);
    Ok(TwistedReport { c, rel_threshold, pass: violations == 0, global_max, max_in_region, violations, witnesses })
}
