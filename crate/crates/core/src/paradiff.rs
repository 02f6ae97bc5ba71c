//! Paradifferential evaluation `a(x,D)u = a⁽¹⁾u + a⁽²⁾u + a⁽³⁾u`.
//!
//! A piece is `a_{j,k}(x,D)u_k = OP(Φ_j(D_x)a(x,η)·Φ̃_k(η))Φ_k(D)u`. The
//! three series group the pieces `(j, k) ∈ [0, J]²`:
//!
//! * series 1, term `k ≥ 2`: `j = 0..=k−2`;
//! * series 2, term `k`: `(k, k)`, `(k−1, k)`, `(k, k−1)`;
//! * series 3, term `j ≥ 2`: `k = 0..=j−2`.
//!
//! Every pair occurs exactly once, so on resolved inputs the total equals
//! the direct quadrature `(2π)^{-n} Σ_η e^{ix·η} a(x,η) û(η)`.
//!
//! Separable symbols are evaluated term by term in physical space,
//! `Σ_t idft(Φ_j m̂_t) · idft(p_t Φ̃_k Φ_k û)`, skipping factors that vanish
//! identically. Other symbols go through one `x`-DFT per active row `η` and
//! an exact spectral accumulation.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{dft, idft, GridFunction, SpectralFunction, TorusGrid};
use crate::io::FunctionDoc;
use crate::lpdecomp::DyadicPartition;
use crate::reduce;
use crate::symbols::{partial_ft_x, Symbol};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum EvalPath {
    /// Separable structure when present, otherwise rows.
    #[default]
    Auto,
    Structured,
    Rows,
}

#[derive(Clone, Copy, Debug)]
pub struct ApplyOptions {
    pub path: EvalPath,
    /// Keep the `Φ̃_k` factor in each piece (it is redundant on `u_k`).
    pub with_tilde: bool,
    /// Record the spectrum of every series term.
    pub details: bool,
}

impl Default for ApplyOptions {
    fn default() -> Self {
        Self { path: EvalPath::Auto, with_tilde: true, details: false }
    }
}

/// One series term: series number (1..=3), its index (`k` for series 1 and 2,
/// `j` for series 3) and its spectrum.
#[derive(Clone, Debug)]
pub struct TermDetail {
    pub series: u8,
    pub index: u32,
    pub spectrum: SpectralFunction,
}

#[derive(Clone, Debug)]
pub struct ParaResult {
    pub term1: GridFunction,
    pub term2: GridFunction,
    pub term3: GridFunction,
    pub total: GridFunction,
    pub details: Option<Vec<TermDetail>>,
}

#[derive(Serialize)]
pub struct ParaResultDoc {
    pub term1: FunctionDoc,
    pub term2: FunctionDoc,
    pub term3: FunctionDoc,
    pub total: FunctionDoc,
}

impl ParaResult {
    pub fn to_doc(&self) -> ParaResultDoc {
        ParaResultDoc {
            term1: FunctionDoc::from_grid_function(&self.term1),
            term2: FunctionDoc::from_grid_function(&self.term2),
            term3: FunctionDoc::from_grid_function(&self.term3),
            total: FunctionDoc::from_grid_function(&self.total),
        }
    }
}

/// Which series term a piece `(j, k)` belongs to.
pub fn series_of(j: u32, k: u32) -> (u8, u32) {
    if j + 2 <= k {
        (1, k)
    } else if k + 2 <= j {
        (3, j)
    } else {
        (2, j.max(k))
    }
}

struct Engine<'a> {
    a: &'a Symbol,
    part: &'a DyadicPartition,
    u_hat: SpectralFunction,
    with_tilde: bool,
    structured: bool,
    // structured: x_blocks[t][j] = idft(Φ_j m̂_t) unless identically zero
    x_blocks: Vec<Vec<Option<GridFunction>>>,
}

fn all_zero(v: &[Complex64]) -> bool {
    v.iter().all(|c| *c == ZERO)
}

impl<'a> Engine<'a> {
    fn new(a: &'a Symbol, u: &GridFunction, part: &'a DyadicPartition, opts: &ApplyOptions) -> Result<Self> {
        part.check_grid(u.grid())?;
        part.check_grid(a.grid())?;
        let u_hat = dft(u);
        part.check_resolved(&u_hat)?;
        let structured = match opts.path {
            EvalPath::Auto => a.structure().is_some(),
            EvalPath::Structured => {
                if a.structure().is_none() {
                    return Err(Error::Missing(format!("symbol {} has no separable structure", a.name())));
                }
                true
            }
            EvalPath::Rows => false,
        };
        let mut x_blocks = Vec::new();
        if structured {
            let terms = a.structure().expect("checked above");
            x_blocks = terms
                .par_iter()
                .map(|t| {
                    (0..=part.j_max() as usize)
                        .map(|j| {
                            let s = part.block_spectrum(t.x_spectrum(), j).expect("index in range");
                            if all_zero(s.coeffs()) {
                                None
                            } else {
                                Some(idft(&s))
                            }
                        })
                        .collect()
                })
                .collect();
        }
        Ok(Self { a, part, u_hat, with_tilde: opts.with_tilde, structured, x_blocks })
    }

    fn grid(&self) -> TorusGrid {
        *self.part.grid()
    }

    /// `W_k = Φ̃_k Φ_k û` (or `Φ_k û`).
    fn weight(&self, k: u32) -> Vec<Complex64> {
        let g = self.grid();
        let phi = self.part.phi(k as usize).expect("index in range");
        (0..g.len())
            .map(|i| {
                let w = if self.with_tilde { phi[i] * self.part.phi_tilde_at(k as i64, i) } else { phi[i] };
                self.u_hat.coeffs()[i] * w
            })
            .collect()
    }

    /// All pieces `(j, k)` for one `k`, as `(j, piece)` with identically zero pieces omitted.
    fn pieces_for_k(&self, k: u32, only_j: Option<u32>) -> Vec<(u32, GridFunction)> {
        let w = self.weight(k);
        if all_zero(&w) {
            return Vec::new();
        }
        let js: Vec<u32> = match only_j {
            Some(j) => vec![j],
            None => (0..=self.part.j_max()).collect(),
        };
        if self.structured {
            self.structured_pieces(&w, &js)
        } else {
            self.row_pieces(&w, &js)
        }
    }

    fn structured_pieces(&self, w: &[Complex64], js: &[u32]) -> Vec<(u32, GridFunction)> {
        let g = self.grid();
        let terms = self.a.structure().expect("structured path");
        let eta_parts: Vec<Option<GridFunction>> = terms
            .par_iter()
            .zip(&self.x_blocks)
            .map(|(t, xb)| {
                if js.iter().all(|&j| xb[j as usize].is_none()) {
                    return None;
                }
                let prod: Vec<Complex64> = w.iter().zip(t.lattice()).map(|(a, b)| a * b).collect();
                if all_zero(&prod) {
                    None
                } else {
                    Some(idft(&SpectralFunction::from_vec_unchecked(g, prod)))
                }
            })
            .collect();
        js.par_iter()
            .filter_map(|&j| {
                let mut acc: Option<GridFunction> = None;
                for (xb, ep) in self.x_blocks.iter().zip(&eta_parts) {
                    if let (Some(x), Some(e)) = (&xb[j as usize], ep) {
                        let prod = x.mul(e).expect("same grid");
                        match &mut acc {
                            Some(a) => a.add_assign(&prod),
                            None => acc = Some(prod),
                        }
                    }
                }
                acc.map(|a| (j, a))
            })
            .collect()
    }

    fn row_pieces(&self, w: &[Complex64], js: &[u32]) -> Vec<(u32, GridFunction)> {
        let g = self.grid();
        let ft = partial_ft_x(self.a, &g).expect("grid checked");
        let norm = (2.0 * PI).powi(-(g.dim() as i32));
        let mut acc: Vec<Vec<Complex64>> = vec![vec![ZERO; g.len()]; js.len()];
        let phis: Vec<&[f64]> = js.iter().map(|&j| self.part.phi(j as usize).expect("in range")).collect();
        for (eta, &wk) in w.iter().enumerate() {
            if wk == ZERO {
                continue;
            }
            let e = g.freq_of(eta);
            let row = ft.row(eta);
            for (zeta, &r) in row.coeffs().iter().enumerate() {
                if r == ZERO {
                    continue;
                }
                let z = g.freq_of(zeta);
                let out = g.index_of([z[0] + e[0], z[1] + e[1]]);
                let base = r * wk * norm;
                for (slot, phi) in acc.iter_mut().zip(&phis) {
                    let p = phi[zeta];
                    if p != 0.0 {
                        slot[out] += base * p;
                    }
                }
            }
        }
        js.iter()
            .zip(acc)
            .filter(|(_, s)| !all_zero(s))
            .map(|(&j, s)| (j, idft(&SpectralFunction::from_vec_unchecked(g, s))))
            .collect()
    }
}

fn check_index(j: u32, part: &DyadicPartition) -> Result<()> {
    if j > part.j_max() {
        return Err(Error::IndexOutOfRange { index: j as i64, j_max: part.j_max() });
    }
    Ok(())
}

/// `a_{j,k}(x,D)u_k`.
pub fn piece_apply(a: &Symbol, j: u32, k: u32, u: &GridFunction, part: &DyadicPartition) -> Result<GridFunction> {
    piece_apply_with(a, j, k, u, part, &ApplyOptions::default())
}

pub fn piece_apply_with(
    a: &Symbol,
    j: u32,
    k: u32,
    u: &GridFunction,
    part: &DyadicPartition,
    opts: &ApplyOptions,
) -> Result<GridFunction> {
    check_index(j, part)?;
    check_index(k, part)?;
    let engine = Engine::new(a, u, part, opts)?;
    Ok(engine
        .pieces_for_k(k, Some(j))
        .into_iter()
        .next()
        .map(|(_, p)| p)
        .unwrap_or_else(|| GridFunction::zeros(*part.grid())))
}

/// The three series and their sum.
pub fn apply(a: &Symbol, u: &GridFunction, part: &DyadicPartition) -> Result<ParaResult> {
    apply_with(a, u, part, &ApplyOptions::default())
}

pub fn apply_with(a: &Symbol, u: &GridFunction, part: &DyadicPartition, opts: &ApplyOptions) -> Result<ParaResult> {
    let engine = Engine::new(a, u, part, opts)?;
    let g = *part.grid();
    let jn = part.j_max() as usize + 1;
    // terms[s][i]: term i of series s+1
    let mut terms: Vec<Vec<Option<GridFunction>>> = vec![vec![None; jn]; 3];
    for k in 0..=part.j_max() {
        for (j, piece) in engine.pieces_for_k(k, None) {
            let (s, idx) = series_of(j, k);
            let slot = &mut terms[s as usize - 1][idx as usize];
            match slot {
                Some(acc) => acc.add_assign(&piece),
                None => *slot = Some(piece),
            }
        }
    }
    let sum = |list: &[Option<GridFunction>]| {
        let mut acc = GridFunction::zeros(g);
        for t in list.iter().flatten() {
            acc.add_assign(t);
        }
        acc
    };
    let term1 = sum(&terms[0]);
    let term2 = sum(&terms[1]);
    let term3 = sum(&terms[2]);
    let mut total = term1.clone();
    total.add_assign(&term2);
    total.add_assign(&term3);
    let details = opts.details.then(|| {
        let mut out = Vec::new();
        for (s, list) in terms.iter().enumerate() {
            for (idx, t) in list.iter().enumerate() {
                let spectrum = match t {
                    Some(f) => dft(f),
                    None => SpectralFunction::zeros(g),
                };
                out.push(TermDetail { series: s as u8 + 1, index: idx as u32, spectrum });
            }
        }
        out
    });
    Ok(ParaResult { term1, term2, term3, total, details })
}

pub fn series1(a: &Symbol, u: &GridFunction, part: &DyadicPartition) -> Result<GridFunction> {
    Ok(apply(a, u, part)?.term1)
}

pub fn series2(a: &Symbol, u: &GridFunction, part: &DyadicPartition) -> Result<GridFunction> {
    Ok(apply(a, u, part)?.term2)
}

pub fn series3(a: &Symbol, u: &GridFunction, part: &DyadicPartition) -> Result<GridFunction> {
    Ok(apply(a, u, part)?.term3)
}

/// Errors unless at most `1e-12` of the energy of `û` lies outside the
/// inscribed ball `|ξ| ≤ N/2` of the lattice box.
fn check_grid_resolved(s: &SpectralFunction) -> Result<()> {
    let ratio = s.energy_fraction_above(s.grid().nyquist() as f64);
    if ratio > crate::lpdecomp::RESOLVED_TOLERANCE {
        return Err(Error::Unresolved { ratio });
    }
    Ok(())
}

/// `a(x,D)u(x) = (2π)^{-n} Σ_η e^{ix·η} a(x, η) û(η)` evaluated pointwise;
/// `O(N^n · |supp û|)` symbol evaluations.
pub fn direct_apply(a: &Symbol, u: &GridFunction) -> Result<GridFunction> {
    if a.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let g = *u.grid();
    let u_hat = dft(u);
    check_grid_resolved(&u_hat)?;
    let support: Vec<(usize, [i64; 2], Complex64)> = u_hat
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(i, c)| (i, g.freq_of(i), *c))
        .collect();
    let n = g.n();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|p| {
            let t = 2.0 * PI * p as f64 / n as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .collect();
    let norm = (2.0 * PI).powi(-(g.dim() as i32));
    let values: Vec<Complex64> = (0..g.len())
        .into_par_iter()
        .map(|x| {
            let m = g.unflatten(x);
            let term = |s: usize| {
                let (idx, f, c) = support[s];
                let mut p = (m[0] as i64 * f[0]).rem_euclid(n as i64);
                if g.dim() == 2 {
                    p = (p + (m[1] as i64 * f[1]).rem_euclid(n as i64)).rem_euclid(n as i64);
                }
                twiddle[p as usize] * a.eval_lattice(x, idx) * c
            };
            reduce::pairwise_sum_complex_by(support.len(), &term) * norm
        })
        .collect();
    GridFunction::new(g, values)
}
