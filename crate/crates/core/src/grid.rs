//! Periodic grid geometry and the discrete Fourier transform.
//!
//! The torus is `[0, 2π)^n` sampled at `N` points per axis, `n ∈ {1, 2}`.
//! Frequencies live on the integer lattice `[-N/2, N/2)^n`; in storage they
//! follow FFT order (index `i` is frequency `i` for `i < N/2`, else `i - N`).
//!
//! Normalization: the coefficient at `ξ` approximates `∫ f(x) e^{-ix·ξ} dx`,
//!
//! ```text
//! F(ξ) = (2π/N)^n Σ_x f(x) e^{-ix·ξ},     f(x) = (2π)^{-n} Σ_ξ F(ξ) e^{ix·ξ},
//! ```
//!
//! so a pure mode `e^{ix·ξ₀}` has the single coefficient `(2π)^n` at `ξ₀` and
//! the inverse transform mirrors `(2π)^{-n} ∫ e^{ix·ξ} a(x, ξ) û(ξ) dξ` with unit
//! lattice cell measure.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce;

/// A lattice frequency. One-dimensional grids use only the first entry.
pub type Freq = [i64; 2];

/// Minimum number of points per axis.
pub const MIN_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    points_per_axis: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !points_per_axis.is_power_of_two() || points_per_axis < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{points_per_axis} points per axis; need a power of two >= {MIN_POINTS}"
            )));
        }
        Ok(Self { dim, points_per_axis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.points_per_axis
    }

    /// Total number of samples, `N^dim`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.points_per_axis as f64
    }

    /// Measure of one grid cell, `(2π/N)^dim`.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn nyquist(&self) -> i64 {
        (self.points_per_axis / 2) as i64
    }

    /// Axis carrying the distinguished direction `e_n`.
    pub fn last_axis(&self) -> usize {
        self.dim - 1
    }

    /// `scale · e_n` as a lattice frequency.
    pub fn e_n(&self, scale: i64) -> Freq {
        let mut f = [0, 0];
        f[self.last_axis()] = scale;
        f
    }

    fn axis_freq(&self, i: usize) -> i64 {
        let n = self.points_per_axis;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    fn axis_index(&self, k: i64) -> usize {
        k.rem_euclid(self.points_per_axis as i64) as usize
    }

    /// Multi-index of a flat storage index (row-major, axis 0 slowest).
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.points_per_axis, idx % self.points_per_axis]
        }
    }

    pub fn flatten(&self, m: [usize; 2]) -> usize {
        if self.dim == 1 {
            m[0]
        } else {
            m[0] * self.points_per_axis + m[1]
        }
    }

    pub fn freq_of(&self, idx: usize) -> Freq {
        let m = self.unflatten(idx);
        if self.dim == 1 {
            [self.axis_freq(m[0]), 0]
        } else {
            [self.axis_freq(m[0]), self.axis_freq(m[1])]
        }
    }

    /// Storage index of a frequency; coordinates are reduced modulo `N`.
    pub fn index_of(&self, f: Freq) -> usize {
        if self.dim == 1 {
            self.axis_index(f[0])
        } else {
            self.flatten([self.axis_index(f[0]), self.axis_index(f[1])])
        }
    }

    /// Frequency reduced into the lattice box `[-N/2, N/2)^dim`.
    pub fn wrap(&self, f: Freq) -> Freq {
        self.freq_of(self.index_of(f))
    }

    pub fn freq_norm_sq(&self, idx: usize) -> i64 {
        let f = self.freq_of(idx);
        f[0] * f[0] + f[1] * f[1]
    }

    pub fn freq_norm(&self, idx: usize) -> f64 {
        (self.freq_norm_sq(idx) as f64).sqrt()
    }

    /// Physical coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let m = self.unflatten(idx);
        let h = self.spacing();
        if self.dim == 1 {
            [m[0] as f64 * h, 0.0]
        } else {
            [m[0] as f64 * h, m[1] as f64 * h]
        }
    }

    /// `e^{i x·ξ}` at grid point `idx`, computed from the exact integer phase
    /// `(m·k mod N) / N`.
    pub fn phase(&self, idx: usize, f: Freq) -> Complex64 {
        let m = self.unflatten(idx);
        let n = self.points_per_axis as i64;
        let mut p = (m[0] as i64 * f[0]).rem_euclid(n);
        if self.dim == 2 {
            p = (p + (m[1] as i64 * f[1]).rem_euclid(n)).rem_euclid(n);
        }
        let angle = 2.0 * PI * p as f64 / n as f64;
        Complex64::new(angle.cos(), angle.sin())
    }
}

pub(crate) fn check_finite(values: &[Complex64]) -> Result<()> {
    match values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Complex samples at the grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: TorusGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), actual: values.len() });
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: TorusGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn constant(grid: TorusGrid, c: Complex64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self::new(grid, values)
    }

    /// The pure mode `e^{ix·ξ}`.
    pub fn mode(grid: TorusGrid, f: Freq) -> Self {
        let values = (0..grid.len()).map(|i| grid.phase(i, f)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Bilinear pairing `⟨f, g⟩ = ∫ f g dx` by rectangle quadrature.
    pub fn pairing(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s = reduce::pairwise_sum_complex_by(self.values.len(), &|i| self.values[i] * other.values[i]);
        Ok(s * self.grid.cell_measure())
    }

    /// Relative discrete `L_2` distance `‖self − other‖₂ / ‖other‖₂`.
    pub fn rel_l2_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.sub(reference)?;
        let denom = lp_norm(reference, 2.0)?;
        let num = lp_norm(&diff, 2.0)?;
        Ok(if denom == 0.0 { num } else { num / denom })
    }
}

/// Fourier coefficients on the lattice, FFT storage order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), actual: coeffs.len() });
        }
        check_finite(&coeffs)?;
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_vec_unchecked(grid: TorusGrid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Coefficients given at a few frequencies, zero elsewhere.
    pub fn from_modes(grid: TorusGrid, modes: &[(Freq, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(grid);
        for &(f, c) in modes {
            let i = grid.index_of(f);
            s.coeffs[i] += c;
        }
        check_finite(&s.coeffs)?;
        Ok(s)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn at(&self, f: Freq) -> Complex64 {
        self.coeffs[self.grid.index_of(f)]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Pointwise multiplication by a real lattice multiplier.
    pub fn multiply(&self, m: &[f64]) -> Self {
        debug_assert_eq!(m.len(), self.coeffs.len());
        let coeffs = self.coeffs.iter().zip(m).map(|(c, w)| c * *w).collect();
        Self { grid: self.grid, coeffs }
    }

    /// Fraction of `Σ|F|²` carried by frequencies with `|ξ| > radius`.
    pub fn energy_fraction_above(&self, radius: f64) -> f64 {
        let r2 = radius * radius;
        let total = reduce::pairwise_sum_by(self.coeffs.len(), &|i| self.coeffs[i].norm_sqr());
        if total == 0.0 {
            return 0.0;
        }
        let above = reduce::pairwise_sum_by(self.coeffs.len(), &|i| {
            if (self.grid.freq_norm_sq(i) as f64) > r2 {
                self.coeffs[i].norm_sqr()
            } else {
                0.0
            }
        });
        above / total
    }
}

type PlanKey = (usize, bool);

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = plans.lock().expect("fft plan cache poisoned");
    guard
        .entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::<f64>::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Unnormalized in-place FFT over all axes of a row-major buffer.
pub(crate) fn fft_in_place(grid: &TorusGrid, buf: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let fft = plan(n, inverse);
    let rows = |data: &mut [Complex64]| {
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    };
    if grid.dim() == 1 {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(buf, &mut scratch);
        return;
    }
    rows(buf);
    let mut t = transpose(buf, n);
    rows(&mut t);
    let back = transpose(&t, n);
    buf.copy_from_slice(&back);
}

fn transpose(buf: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = buf[r * n + c];
        }
    }
    out
}

/// Forward transform with the normalization documented at module level.
pub fn dft(f: &GridFunction) -> SpectralFunction {
    let grid = *f.grid();
    let mut buf = f.values().to_vec();
    fft_in_place(&grid, &mut buf, false);
    let w = grid.cell_measure();
    buf.iter_mut().for_each(|z| *z *= w);
    SpectralFunction { grid, coeffs: buf }
}

/// Inverse of [`dft`].
pub fn idft(s: &SpectralFunction) -> GridFunction {
    let grid = *s.grid();
    let mut buf = s.coeffs().to_vec();
    fft_in_place(&grid, &mut buf, true);
    let w = (2.0 * PI).powi(-(grid.dim() as i32));
    buf.iter_mut().for_each(|z| *z *= w);
    GridFunction { grid, values: buf }
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidExponent { name, value: p });
    }
    Ok(())
}

/// `(Σ|f|^p (2π/N)^n)^{1/p}`, the max norm for `p = ∞`. For `p < 1` this is
/// the quasinorm.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    lp_norm_of_abs(f.grid(), |i| f.values()[i].norm(), p)
}

/// `L_p` norm of a nonnegative sampled function given by index.
pub(crate) fn lp_norm_of_abs(grid: &TorusGrid, abs: impl Fn(usize) -> f64 + Sync, p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    let len = grid.len();
    if p.is_infinite() {
        return Ok(reduce::max_by(len, abs));
    }
    let s = if p == 2.0 {
        reduce::pairwise_sum_by(len, &|i| {
            let a = abs(i);
            a * a
        })
    } else if p == 1.0 {
        reduce::pairwise_sum_by(len, &abs)
    } else {
        reduce::pairwise_sum_by(len, &|i| abs(i).powf(p))
    };
    Ok((s * grid.cell_measure()).powf(1.0 / p))
}

/// The Parseval side: `((2π)^{-n} Σ_ξ |F(ξ)|²)^{1/2}`.
pub fn parseval_l2(s: &SpectralFunction) -> f64 {
    let sum = reduce::pairwise_sum_by(s.coeffs().len(), &|i| s.coeffs()[i].norm_sqr());
    (sum * (2.0 * PI).powi(-(s.grid().dim() as i32))).sqrt()
}

/// Frequencies where `|F(ξ)| > rel_threshold · max|F|`, in storage order.
pub fn numerical_support(s: &SpectralFunction, rel_threshold: f64) -> Vec<Freq> {
    let max = s.max_abs();
    if max == 0.0 {
        return Vec::new();
    }
    let cut = rel_threshold * max;
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > cut)
        .map(|(i, _)| s.grid().freq_of(i))
        .collect()
}
