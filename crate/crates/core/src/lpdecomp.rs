//! Littlewood–Paley partition on the lattice and the block operators.
//!
//! `Ψ(t) = 1` for `t ≤ 11/10` and `Ψ(t) = 0` for `t ≥ 13/10`. In between the
//! profile is `1 − I(s)/I(1)` with `s = (t − 11/10)/(2/10)` and
//! `I(s) = ∫₀^s exp(−1/(σ(1−σ))) dσ`. Then `Ψ_j(ξ) = Ψ(2^{-j}|ξ|)`,
//! `Φ_0 = Ψ_0` and `Φ_j = Ψ_j − Ψ_{j−1}`, so `Φ_j` lives on
//! `(11/20)2^j ≤ |ξ| ≤ (13/10)2^j` for `j ≥ 1`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{dft, idft, Freq, GridFunction, SpectralFunction, TorusGrid};
use crate::quadrature::GaussLegendre;

pub const PLATEAU_END: f64 = 1.1;
pub const SUPPORT_END: f64 = 1.3;

/// Inputs are considered resolved when at most this fraction of their
/// energy sits above `(11/10)2^{J_max}`.
pub const RESOLVED_TOLERANCE: f64 = 1e-12;

const PANELS: usize = 32;
const NODES: usize = 16;

fn bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        (-1.0 / (s * (1.0 - s))).exp()
    }
}

/// The smooth cutoff `Ψ`.
#[derive(Clone, Debug)]
pub struct CutoffProfile {
    rule: GaussLegendre,
    // prefix[k] = ∫₀^{k/PANELS} bump
    prefix: Vec<f64>,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        Self::new()
    }
}

impl CutoffProfile {
    pub fn new() -> Self {
        let rule = GaussLegendre::new(NODES);
        let mut prefix = Vec::with_capacity(PANELS + 1);
        prefix.push(0.0);
        let w = 1.0 / PANELS as f64;
        for k in 0..PANELS {
            let piece = rule.integrate(k as f64 * w, (k + 1) as f64 * w, bump);
            prefix.push(prefix[k] + piece);
        }
        Self { rule, prefix }
    }

    /// `I(s)` for `s ∈ [0, 1]`.
    fn integral(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let k = ((s * PANELS as f64).floor() as usize).min(PANELS - 1);
        let a = k as f64 / PANELS as f64;
        self.prefix[k] + self.rule.integrate(a, s, bump)
    }

    fn total(&self) -> f64 {
        self.prefix[PANELS]
    }

    /// `Ψ(t)`; exactly 1 on `t ≤ 11/10` and exactly 0 on `t ≥ 13/10`.
    pub fn psi(&self, t: f64) -> f64 {
        if t <= PLATEAU_END {
            return 1.0;
        }
        if t >= SUPPORT_END {
            return 0.0;
        }
        let s = (t - PLATEAU_END) / (SUPPORT_END - PLATEAU_END);
        // the bump is symmetric; integrate from the nearer end
        if s <= 0.5 {
            1.0 - self.integral(s) / self.total()
        } else {
            self.integral(1.0 - s) / self.total()
        }
    }

    /// `Ψ_j` at radius `r = |ξ|`, for any integer `j`.
    pub fn psi_j(&self, j: i32, r: f64) -> f64 {
        self.psi(r * 2f64.powi(-j))
    }

    /// Inhomogeneous `Φ_j` at radius `r`; `Φ_j ≡ 0` for `j < 0`.
    pub fn phi_j(&self, j: i32, r: f64) -> f64 {
        match j {
            j if j < 0 => 0.0,
            0 => self.psi(r),
            j => self.psi_j(j, r) - self.psi_j(j - 1, r),
        }
    }

    /// Homogeneous block `φ_j(ξ) = Φ_1(2^{1−j}ξ)` at radius `r`, for any `j ∈ ℤ`.
    pub fn hom_phi(&self, j: i32, r: f64) -> f64 {
        self.psi_j(j, r) - self.psi_j(j - 1, r)
    }
}

/// Sampled `Ψ_j` and `Φ_j` tables for `j = 0..=J_max+1`.
///
/// The extra index `J_max + 1` is kept so that `Φ̃_{J_max}` is available.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: TorusGrid,
    j_max: u32,
    profile: CutoffProfile,
    psi: Vec<Vec<f64>>,
    phi: Vec<Vec<f64>>,
}

/// Builds the partition tables.
///
/// Requires `(13/10)2^{J_max} ≤ N/2` so every block up to `J_max` fits in the
/// lattice box.
pub fn build_partition(grid: TorusGrid, j_max: u32) -> Result<DyadicPartition> {
    if j_max > 40 || SUPPORT_END * 2f64.powi(j_max as i32) > grid.nyquist() as f64 {
        return Err(Error::PartitionTooFine { j_max, n: grid.n() });
    }
    let profile = CutoffProfile::new();
    let radii: Vec<f64> = (0..grid.len()).map(|i| grid.freq_norm(i)).collect();
    let psi: Vec<Vec<f64>> = (0..=(j_max as i32 + 1))
        .into_par_iter()
        .map(|j| radii.iter().map(|&r| profile.psi_j(j, r)).collect())
        .collect();
    let mut phi = Vec::with_capacity(psi.len());
    phi.push(psi[0].clone());
    for j in 1..psi.len() {
        phi.push(psi[j].iter().zip(&psi[j - 1]).map(|(a, b)| a - b).collect());
    }
    Ok(DyadicPartition { grid, j_max, profile, psi, phi })
}

impl DyadicPartition {
    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn profile(&self) -> &CutoffProfile {
        &self.profile
    }

    fn check_index(&self, j: usize, allow_extra: bool) -> Result<()> {
        let top = self.j_max as usize + usize::from(allow_extra);
        if j > top {
            return Err(Error::IndexOutOfRange { index: j as i64, j_max: self.j_max });
        }
        Ok(())
    }

    /// `Φ_j` on the lattice, FFT order; `j ≤ J_max + 1`.
    pub fn phi(&self, j: usize) -> Result<&[f64]> {
        self.check_index(j, true)?;
        Ok(&self.phi[j])
    }

    /// `Ψ_j` on the lattice, FFT order; `j ≤ J_max + 1`.
    pub fn psi(&self, j: usize) -> Result<&[f64]> {
        self.check_index(j, true)?;
        Ok(&self.psi[j])
    }

    /// Value of `Φ_j` at lattice index `idx`, zero for `j` outside `0..=J_max+1`.
    pub(crate) fn phi_at(&self, j: i64, idx: usize) -> f64 {
        if j < 0 || j as usize >= self.phi.len() {
            0.0
        } else {
            self.phi[j as usize][idx]
        }
    }

    /// `Φ̃_k = Φ_{k−1} + Φ_k + Φ_{k+1}` at lattice index `idx`.
    pub(crate) fn phi_tilde_at(&self, k: i64, idx: usize) -> f64 {
        self.phi_at(k - 1, idx) + self.phi_at(k, idx) + self.phi_at(k + 1, idx)
    }

    /// `Φ̃_k` on the lattice for `k ≤ J_max`.
    pub fn phi_tilde(&self, k: usize) -> Result<Vec<f64>> {
        self.check_index(k, false)?;
        Ok((0..self.grid.len()).map(|i| self.phi_tilde_at(k as i64, i)).collect())
    }

    /// `Φ_j(D)` applied to coefficients.
    pub fn block_spectrum(&self, s: &SpectralFunction, j: usize) -> Result<SpectralFunction> {
        self.check_grid(s.grid())?;
        self.check_index(j, false)?;
        Ok(s.multiply(&self.phi[j]))
    }

    /// `Ψ_j(D)` applied to coefficients.
    pub fn low_pass_spectrum(&self, s: &SpectralFunction, j: usize) -> Result<SpectralFunction> {
        self.check_grid(s.grid())?;
        self.check_index(j, false)?;
        Ok(s.multiply(&self.psi[j]))
    }

    pub(crate) fn check_grid(&self, g: &TorusGrid) -> Result<()> {
        if *g != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Errors unless at most [`RESOLVED_TOLERANCE`] of the energy lies above
    /// `(11/10)2^{J_max}`.
    pub fn check_resolved(&self, s: &SpectralFunction) -> Result<()> {
        self.check_grid(s.grid())?;
        let ratio = s.energy_fraction_above(PLATEAU_END * 2f64.powi(self.j_max as i32));
        if ratio > RESOLVED_TOLERANCE {
            return Err(Error::Unresolved { ratio });
        }
        Ok(())
    }

    /// Block index `j` whose corona `Φ_j` equals 1 at lattice frequency `f`, if any.
    pub fn plateau_block(&self, f: Freq) -> Option<usize> {
        let idx = self.grid.index_of(f);
        (0..=self.j_max as usize).find(|&j| self.phi[j][idx] == 1.0)
    }

    /// Writes one row per lattice frequency on the `e_n` axis, ascending:
    /// `xi, phi_0, …, phi_J`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["xi".to_string()];
        header.extend((0..=self.j_max).map(|j| format!("phi_{j}")));
        out.write_record(&header)?;
        let half = self.grid.nyquist();
        for k in -half..half {
            let idx = self.grid.index_of(self.grid.e_n(k));
            let mut row = vec![k.to_string()];
            row.extend((0..=self.j_max as usize).map(|j| format!("{:.17e}", self.phi[j][idx])));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Φ_j(D)f`.
pub fn block(f: &GridFunction, j: usize, part: &DyadicPartition) -> Result<GridFunction> {
    part.check_grid(f.grid())?;
    Ok(idft(&part.block_spectrum(&dft(f), j)?))
}

/// `Ψ_j(D)f`.
pub fn low_pass(f: &GridFunction, j: usize, part: &DyadicPartition) -> Result<GridFunction> {
    part.check_grid(f.grid())?;
    Ok(idft(&part.low_pass_spectrum(&dft(f), j)?))
}

/// The dyadic blocks `u_j = Φ_j(D)u`, `j = 0..=J_max`.
#[derive(Clone, Debug)]
pub struct DyadicBlocks {
    pub source: GridFunction,
    pub blocks: Vec<(u32, GridFunction)>,
}

impl DyadicBlocks {
    /// `Σ_j u_j`, summed in ascending `j`.
    pub fn reconstruct(&self) -> GridFunction {
        let mut acc = GridFunction::zeros(*self.source.grid());
        for (_, b) in &self.blocks {
            acc.add_assign(b);
        }
        acc
    }

    /// Indices of blocks whose sup norm exceeds `rel · max_j sup|u_j|`.
    pub fn active(&self, rel: f64) -> Vec<u32> {
        let sups: Vec<f64> = self.blocks.iter().map(|(_, b)| b.max_abs()).collect();
        let top = sups.iter().cloned().fold(0.0, f64::max);
        self.blocks
            .iter()
            .zip(&sups)
            .filter(|(_, &s)| top > 0.0 && s > rel * top)
            .map(|((j, _), _)| *j)
            .collect()
    }
}

/// Splits a resolved `f` into its dyadic blocks.
pub fn decompose(f: &GridFunction, part: &DyadicPartition) -> Result<DyadicBlocks> {
    part.check_grid(f.grid())?;
    let s = dft(f);
    part.check_resolved(&s)?;
    let blocks = decompose_spectrum(&s, part)?;
    Ok(DyadicBlocks { source: f.clone(), blocks: blocks.into_iter().enumerate().map(|(j, b)| (j as u32, b)).collect() })
}

/// Blocks computed from coefficients; no resolvedness check.
pub(crate) fn decompose_spectrum(s: &SpectralFunction, part: &DyadicPartition) -> Result<Vec<GridFunction>> {
    (0..=part.j_max() as usize)
        .into_par_iter()
        .map(|j| part.block_spectrum(s, j).map(|b| idft(&b)))
        .collect()
}
