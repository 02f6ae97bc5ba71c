//! Sampled estimates of the `S^d_{1,1}` seminorms
//! `μ_{l,m}(a) = sup (1+|ξ|)^{−(d−|α|+|β|)} |D^β_x D^α_ξ a(x, ξ)|`,
//! the sup taken over `|α| ≤ m`, `|β| ≤ l`.
//!
//! `D = −i∂` only changes phases, so magnitudes of plain partial derivatives
//! are used throughout.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::Symbol;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SeminormOptions {
    /// Allow the finite-difference fallback.
    pub allow_fd: bool,
    /// Use finite differences even when closures exist.
    pub force_fd: bool,
    pub x_stride: usize,
    pub eta_stride: usize,
}

impl Default for SeminormOptions {
    fn default() -> Self {
        Self { allow_fd: true, force_fd: false, x_stride: 1, eta_stride: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    pub l: u32,
    pub m: u32,
    pub value: f64,
    pub x_samples: usize,
    pub eta_samples: usize,
    pub method: &'static str,
}

fn multi_indices(dim: usize, max: u32) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for a0 in 0..=max {
        if dim == 1 {
            out.push([a0, 0]);
            continue;
        }
        for a1 in 0..=(max - a0) {
            out.push([a0, a1]);
        }
    }
    out
}

const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// Nested fourth-order central differences: `η` step `h_eta`, `x` step one cell.
fn fd(a: &Symbol, x: usize, eta: [f64; 2], beta: [u32; 2], alpha: [u32; 2], h_eta: f64) -> Complex64 {
    if let Some(axis) = (0..2).find(|&i| alpha[i] > 0) {
        let mut rest = alpha;
        rest[axis] -= 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (off, w) in STENCIL {
            let mut e = eta;
            e[axis] += off * h_eta;
            acc += fd(a, x, e, beta, rest, h_eta) * w;
        }
        return acc / (12.0 * h_eta);
    }
    if let Some(axis) = (0..2).find(|&i| beta[i] > 0) {
        let g = a.grid();
        let n = g.n() as i64;
        let mut rest = beta;
        rest[axis] -= 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (off, w) in STENCIL {
            let mut m = g.unflatten(x);
            m[axis] = (m[axis] as i64 + off as i64).rem_euclid(n) as usize;
            acc += fd(a, g.flatten(m), eta, rest, alpha, h_eta) * w;
        }
        return acc / (12.0 * g.spacing());
    }
    a.eval(x, eta)
}

/// Estimates `μ_{l,m}(a)` on grid points × lattice frequencies with `|ξ| ≤ N/2`.
pub fn seminorm(a: &Symbol, l: u32, m: u32, opts: SeminormOptions) -> Result<SeminormReport> {
    let analytic = match a.derivatives() {
        Some(d) if !opts.force_fd && l <= d.max_l && m <= d.max_m => Some(d.f.clone()),
        _ => None,
    };
    if analytic.is_none() && !opts.allow_fd {
        return Err(Error::DerivativeUnavailable { l, m });
    }
    let g = *a.grid();
    let nyq = g.nyquist() as f64;
    let xs: Vec<usize> = (0..g.len()).step_by(opts.x_stride.max(1)).collect();
    let etas: Vec<[f64; 2]> = (0..g.len())
        .step_by(opts.eta_stride.max(1))
        .filter(|&i| g.freq_norm(i) <= nyq)
        .map(|i| {
            let f = g.freq_of(i);
            [f[0] as f64, f[1] as f64]
        })
        .collect();
    let alphas = multi_indices(g.dim(), m);
    let betas = multi_indices(g.dim(), l);
    let d = a.order();
    let value = etas
        .par_iter()
        .map(|&eta| {
            let r = (eta[0] * eta[0] + eta[1] * eta[1]).sqrt();
            let h_eta = (1.0 + r) / 128.0;
            let mut worst: f64 = 0.0;
            for &alpha in &alphas {
                for &beta in &betas {
                    let na = (alpha[0] + alpha[1]) as f64;
                    let nb = (beta[0] + beta[1]) as f64;
                    let weight = (1.0 + r).powf(-(d - na + nb));
                    for &x in &xs {
                        let v = match &analytic {
                            Some(f) => f(x, eta, beta, alpha),
                            None => fd(a, x, eta, beta, alpha, h_eta),
                        };
                        worst = worst.max(weight * v.norm());
                    }
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(SeminormReport {
        l,
        m,
        value,
        x_samples: xs.len(),
        eta_samples: etas.len(),
        method: if analytic.is_some() { "analytic" } else { "finite-difference" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use crate::symbols::{identity_symbol, multiplier_symbol, smooth_symbol};

    #[test]
    fn identity_seminorms_are_one() {
        let g = TorusGrid::new(1, 64).unwrap();
        let a = identity_symbol(g);
        for (l, m) in [(0, 0), (1, 2), (3, 3)] {
            assert_eq!(seminorm(&a, l, m, SeminormOptions::default()).unwrap().value, 1.0);
        }
    }

    #[test]
    fn analytic_and_finite_differences_agree() {
        for dim in [1, 2] {
            let g = TorusGrid::new(dim, 64).unwrap();
            for a in [multiplier_symbol(g, 1.0), smooth_symbol(g, -0.5)] {
                for (l, m) in [(0, 1), (1, 1), (1, 2)] {
                    let (xs, es) = if dim == 1 { (1, 1) } else { (97, 13) };
                    let opts = SeminormOptions { x_stride: xs, eta_stride: es, ..Default::default() };
                    let exact = seminorm(&a, l, m, opts).unwrap();
                    let approx = seminorm(&a, l, m, SeminormOptions { force_fd: true, ..opts }).unwrap();
                    assert_eq!(exact.method, "analytic");
                    assert_eq!(approx.method, "finite-difference");
                    let rel = (exact.value - approx.value).abs() / exact.value;
                    assert!(rel < 1e-5, "{} dim {dim} (l={l}, m={m}): {rel}", a.name());
                }
            }
        }
    }

    #[test]
    fn monotone_in_both_orders() {
        let g = TorusGrid::new(1, 128).unwrap();
        let a = smooth_symbol(g, 1.0);
        let o = SeminormOptions::default();
        let v = |l, m| seminorm(&a, l, m, o).unwrap().value;
        assert!(v(0, 0) <= v(1, 0));
        assert!(v(0, 1) <= v(1, 1));
        assert!(v(1, 0) <= v(1, 1));
    }

    #[test]
    fn fd_can_be_disabled() {
        let g = TorusGrid::new(1, 64).unwrap();
        let a = crate::symbols::random_symbol(g, 1);
        let opts = SeminormOptions { allow_fd: false, ..Default::default() };
        assert!(matches!(seminorm(&a, 1, 1, opts), Err(Error::DerivativeUnavailable { l: 1, m: 1 })));
    }
}
