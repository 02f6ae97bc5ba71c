//! Besov, Triebel–Lizorkin and homogeneous Besov (quasi-)norms, and the
//! dyadic maximal function `M_t`.
//!
//! `‖u‖_{F^s_{p,q}} = ‖(Σ_j 2^{sjq}|u_j|^q)^{1/q}‖_{L_p}` and
//! `‖u‖_{B^s_{p,q}} = (Σ_j 2^{sjq}‖u_j‖_p^q)^{1/q}`, with the usual sup for
//! `q = ∞`. The same formulas are used for `p, q < 1`; no triangle
//! inequality is assumed anywhere.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dft, idft, lp_norm_of_abs, GridFunction, SpectralFunction, TorusGrid};
use crate::lpdecomp::{decompose_spectrum, CutoffProfile, DyadicPartition, PLATEAU_END, SUPPORT_END};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    Besov,
    TriebelLizorkin,
    HomogeneousBesov,
}

/// A space descriptor; `p` and `q` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub s: f64,
    #[serde(with = "crate::io::exponent")]
    pub p: f64,
    #[serde(with = "crate::io::exponent")]
    pub q: f64,
}

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        return Err(Error::InvalidExponent { name, value: v });
    }
    Ok(())
}

impl NormSpec {
    pub fn new(kind: NormKind, s: f64, p: f64, q: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidSpec(format!("smoothness s = {s}")));
        }
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        if kind == NormKind::TriebelLizorkin && p.is_infinite() {
            return Err(Error::InvalidSpec("Triebel-Lizorkin spaces need p < infinity".into()));
        }
        Ok(Self { kind, s, p, q })
    }

    pub fn besov(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(NormKind::Besov, s, p, q)
    }

    pub fn triebel_lizorkin(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(NormKind::TriebelLizorkin, s, p, q)
    }

    /// `p < 1` or `q < 1`.
    pub fn is_quasi(&self) -> bool {
        self.p < 1.0 || self.q < 1.0
    }

    pub fn with_s(&self, s: f64) -> Self {
        Self { s, ..*self }
    }

    pub fn with_q(&self, q: f64) -> Self {
        Self { q, ..*self }
    }
}

/// `(Σ v_i^q)^{1/q}` over nonnegative `v_i` in the given order; max for `q = ∞`.
pub fn lq_combine(values: impl IntoIterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        return values.into_iter().fold(0.0, f64::max);
    }
    let sum: f64 = values.into_iter().map(|v| if q == 1.0 { v } else { v.powf(q) }).sum();
    if q == 1.0 {
        sum
    } else {
        sum.powf(1.0 / q)
    }
}

fn weighted_blocks(f: &GridFunction, s: f64, part: &DyadicPartition) -> Result<Vec<(f64, GridFunction)>> {
    part.check_grid(f.grid())?;
    let spec = dft(f);
    part.check_resolved(&spec)?;
    let blocks = decompose_spectrum(&spec, part)?;
    Ok(blocks.into_iter().enumerate().map(|(j, b)| (2f64.powf(s * j as f64), b)).collect())
}

/// Triebel–Lizorkin norm.
pub fn f_norm(f: &GridFunction, spec: &NormSpec, part: &DyadicPartition) -> Result<f64> {
    let spec = NormSpec::new(NormKind::TriebelLizorkin, spec.s, spec.p, spec.q)?;
    let blocks = weighted_blocks(f, spec.s, part)?;
    let g = *f.grid();
    let pointwise: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|i| lq_combine(blocks.iter().map(|(w, b)| w * b.values()[i].norm()), spec.q))
        .collect();
    lp_norm_of_abs(&g, |i| pointwise[i], spec.p)
}

/// Besov norm.
pub fn b_norm(f: &GridFunction, spec: &NormSpec, part: &DyadicPartition) -> Result<f64> {
    let spec = NormSpec::new(NormKind::Besov, spec.s, spec.p, spec.q)?;
    let blocks = weighted_blocks(f, spec.s, part)?;
    let norms: Vec<f64> = blocks
        .par_iter()
        .map(|(w, b)| crate::grid::lp_norm(b, spec.p).map(|n| w * n))
        .collect::<Result<_>>()?;
    Ok(lq_combine(norms, spec.q))
}

/// Dispatches on `spec.kind`. The homogeneous kind treats `f` as a sampled
/// row on `[−π, π)^n`.
pub fn norm(f: &GridFunction, spec: &NormSpec, part: &DyadicPartition) -> Result<f64> {
    match spec.kind {
        NormKind::Besov => b_norm(f, spec, part),
        NormKind::TriebelLizorkin => f_norm(f, spec, part),
        NormKind::HomogeneousBesov => {
            let row = SampledRow { grid: *f.grid(), half_width: PI, values: f.values().to_vec() };
            hom_besov_norm_in_xi(&row, spec.s, spec.p, spec.q)
        }
    }
}

/// A function of `ξ ∈ ℝ^n` sampled on the window `[−R, R)^n` with `M` points
/// per axis at `ξ_m = m·2R/M`, stored in FFT order (index `i` ↔ `m = freq_of(i)`).
///
/// The window is identified with a `2π`-torus by `ξ = (R/π)·y`, so the dual
/// variable of `ξ` takes the values `z = (π/R)·k` on the integer lattice `k`.
#[derive(Clone, Debug)]
pub struct SampledRow {
    grid: TorusGrid,
    half_width: f64,
    values: Vec<Complex64>,
}

impl SampledRow {
    pub fn from_fn(dim: usize, points: usize, half_width: f64, f: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Inadmissible(format!("window half-width {half_width}")));
        }
        let grid = TorusGrid::new(dim, points)?;
        let h = 2.0 * half_width / points as f64;
        let values: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let m = grid.freq_of(i);
                f([m[0] as f64 * h, m[1] as f64 * h])
            })
            .collect();
        crate::grid::check_finite(&values)?;
        Ok(Self { grid, half_width, values })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Range of `j` such that `{0.55·2^j ≤ |z| ≤ 1.3·2^j}` meets `[z_min, z_max]`.
fn hom_range(z_min: f64, z_max: f64) -> (i32, i32) {
    let mut lo = 0i32;
    while SUPPORT_END * 2f64.powi(lo) >= z_min {
        lo -= 1;
    }
    while SUPPORT_END * 2f64.powi(lo) < z_min {
        lo += 1;
    }
    let mut hi = lo;
    while 0.5 * PLATEAU_END * 2f64.powi(hi + 1) <= z_max {
        hi += 1;
    }
    (lo, hi)
}

/// Homogeneous Besov norm `(Σ_j 2^{sjq}‖φ_j(D)b‖_{L_p(dξ)}^q)^{1/q}` of a
/// sampled row, `φ_j(z) = Φ_1(2^{1−j}z)`, over every `j` whose corona meets
/// the dual lattice. The zero dual frequency carries no block.
pub fn hom_besov_norm_in_xi(row: &SampledRow, s: f64, p: f64, q: f64) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let g = row.grid;
    let spec = dft(&GridFunction::from_vec_unchecked(g, row.values.clone()));
    let dual = PI / row.half_width;
    let radii: Vec<f64> = (0..g.len()).map(|i| g.freq_norm(i) * dual).collect();
    let z_max = radii.iter().cloned().fold(0.0, f64::max);
    let (lo, hi) = hom_range(dual, z_max);
    let profile = CutoffProfile::new();
    let measure_scale = if p.is_infinite() { 1.0 } else { (row.half_width / PI).powf(g.dim() as f64 / p) };
    let terms: Vec<f64> = (lo..=hi)
        .into_par_iter()
        .map(|j| {
            let mult: Vec<f64> = radii.iter().map(|&r| if r == 0.0 { 0.0 } else { profile.hom_phi(j, r) }).collect();
            if mult.iter().all(|m| *m == 0.0) {
                return Ok(0.0);
            }
            let b = idft(&spec.multiply(&mult));
            let n = lp_norm_of_abs(&g, |i| b.values()[i].norm(), p)? * measure_scale;
            Ok(2f64.powf(s * j as f64) * n)
        })
        .collect::<Result<_>>()?;
    Ok(lq_combine(terms, q))
}

/// `L_p` norm of the pointwise `ℓ_q` norm of a family, `‖(Σ_k |f_k|^q)^{1/q}‖_p`.
pub fn mixed_norm(family: &[GridFunction], p: f64, q: f64) -> Result<f64> {
    check_exponent("q", q)?;
    let Some(first) = family.first() else { return Ok(0.0) };
    let g = *first.grid();
    if family.iter().any(|f| *f.grid() != g) {
        return Err(Error::GridMismatch);
    }
    let pointwise: Vec<f64> =
        (0..g.len()).map(|i| lq_combine(family.iter().map(|f| f.values()[i].norm()), q)).collect();
    lp_norm_of_abs(&g, |i| pointwise[i], p)
}

/// Dyadic radii in cells: `N·2^{-m}` for `m = 0..=log₂N`, then the
/// single-cell ball (radius 0).
pub fn dyadic_radii(n: usize) -> Vec<usize> {
    let mut r = Vec::new();
    let mut v = n;
    while v >= 1 {
        r.push(v);
        v /= 2;
    }
    r.push(0);
    r
}

fn isqrt(v: i64) -> i64 {
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Offsets `o ∈ [−N/2, N/2)` with `|o| ≤ w`.
fn offset_range(w: i64, n: usize) -> (i64, i64) {
    let half = (n / 2) as i64;
    (-(w.min(half)), w.min(half - 1))
}

/// Row half-widths of the periodic lattice ball of radius `rho` cells: each
/// residue offset is represented once by its minimal lift in `[−N/2, N/2)^n`.
fn ball_rows(rho: i64, dim: usize, n: usize) -> Vec<(i64, i64, i64)> {
    if dim == 1 {
        let (a, b) = offset_range(rho, n);
        return vec![(0, a, b)];
    }
    let (ra, rb) = offset_range(rho, n);
    (ra..=rb)
        .map(|a| {
            let (lo, hi) = offset_range(isqrt(rho * rho - a * a), n);
            (a, lo, hi)
        })
        .collect()
}

/// Periodic prefix sums along the last axis for each row.
struct RowPrefix {
    n: usize,
    // per row: n + 1 running sums
    sums: Vec<f64>,
}

impl RowPrefix {
    fn new(g: &TorusGrid, v: &[f64]) -> Self {
        let n = g.n();
        let rows = g.len() / n;
        let mut sums = Vec::with_capacity(rows * (n + 1));
        for r in 0..rows {
            let mut acc = 0.0;
            sums.push(0.0);
            for c in 0..n {
                acc += v[r * n + c];
                sums.push(acc);
            }
        }
        Self { n, sums }
    }

    /// Sum of row `r` over columns `c + lo ..= c + hi` (periodic, `hi − lo < n`).
    fn range(&self, r: usize, c: usize, lo: i64, hi: i64) -> f64 {
        let n = self.n as i64;
        let base = r * (self.n + 1);
        let s = &self.sums[base..base + self.n + 1];
        let a = c as i64 + lo;
        let b = c as i64 + hi + 1;
        let at = |k: i64| {
            let q = k.div_euclid(n);
            let rem = k.rem_euclid(n) as usize;
            q as f64 * s[self.n] + s[rem]
        };
        at(b) - at(a)
    }
}

/// `M_t f(x) = sup_r (|B(x,r)|^{-1} Σ_{y∈B(x,r)} |f(y)|^t)^{1/t}` over the
/// dyadic radii `r = 2π·2^{-m} ≥ 2π/N` and the single-cell ball, with
/// balls counted exactly on the periodic lattice.
pub fn maximal(f: &GridFunction, t: f64) -> Result<GridFunction> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidExponent { name: "t", value: t });
    }
    let g = *f.grid();
    let powered: Vec<f64> = f.values().iter().map(|z| z.norm().powf(t)).collect();
    let radii = dyadic_radii(g.n());
    let balls: Vec<Vec<(i64, i64, i64)>> = radii.iter().map(|&r| ball_rows(r as i64, g.dim(), g.n())).collect();
    let counts: Vec<f64> =
        balls.iter().map(|rows| rows.iter().map(|(_, lo, hi)| (hi - lo + 1) as f64).sum()).collect();
    let prefix = RowPrefix::new(&g, &powered);
    let n = g.n() as i64;
    let values: Vec<Complex64> = (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let m = g.unflatten(idx);
            let (row, col) = if g.dim() == 1 { (0usize, m[0]) } else { (m[0], m[1]) };
            let mut best = f.values()[idx].norm();
            for (rows, count) in balls.iter().zip(&counts) {
                let mut sum = 0.0;
                for &(a, lo, hi) in rows {
                    let r = (row as i64 + a).rem_euclid(n) as usize;
                    sum += prefix.range(r, col, lo, hi);
                }
                let avg = (sum.max(0.0) / count).powf(1.0 / t);
                if avg > best {
                    best = avg;
                }
            }
            Complex64::new(best, 0.0)
        })
        .collect();
    Ok(GridFunction::from_vec_unchecked(g, values))
}

/// One row of a norm table.
#[derive(Clone, Debug, Serialize)]
pub struct NormRow {
    pub family: String,
    pub parameter: f64,
    pub kind: NormKind,
    pub s: f64,
    #[serde(serialize_with = "crate::io::exponent::serialize")]
    pub p: f64,
    #[serde(serialize_with = "crate::io::exponent::serialize")]
    pub q: f64,
    pub value: f64,
}

pub fn write_norm_table_csv<W: Write>(w: W, rows: &[NormRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Coefficients of `f` restricted to `|ξ| ≤ radius`.
pub fn restrict_to_ball(s: &SpectralFunction, radius: f64) -> SpectralFunction {
    let g = *s.grid();
    let coeffs =
        s.coeffs().iter().enumerate().map(|(i, c)| if g.freq_norm(i) <= radius { *c } else { Complex64::new(0.0, 0.0) }).collect();
    SpectralFunction::from_vec_unchecked(g, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::lp_norm;
    use crate::lpdecomp::build_partition;
    use crate::random;

    fn part(dim: usize, n: usize, j: u32) -> DyadicPartition {
        build_partition(TorusGrid::new(dim, n).unwrap(), j).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(NormSpec::triebel_lizorkin(0.0, f64::INFINITY, 2.0).is_err());
        assert!(NormSpec::besov(0.0, f64::INFINITY, 2.0).is_ok());
        assert!(NormSpec::besov(0.0, 0.0, 2.0).is_err());
        assert!(NormSpec::besov(0.0, 1.0, -1.0).is_err());
        assert!(NormSpec::besov(0.0, 0.5, 2.0).unwrap().is_quasi());
        assert!(!NormSpec::besov(0.0, 1.0, 1.0).unwrap().is_quasi());
    }

    #[test]
    fn constant_has_single_block_norm() {
        let p = part(1, 128, 5);
        let one = GridFunction::constant(*p.grid(), Complex64::new(1.0, 0.0));
        for s in [-1.0, 0.0, 2.5] {
            for (pp, q) in [(1.0, 1.0), (2.0, 0.5), (3.0, f64::INFINITY)] {
                let expect = lp_norm(&one, pp).unwrap();
                let fv = f_norm(&one, &NormSpec::triebel_lizorkin(s, pp, q).unwrap(), &p).unwrap();
                let bv = b_norm(&one, &NormSpec::besov(s, pp, q).unwrap(), &p).unwrap();
                assert!((fv - expect).abs() < 1e-12 * expect);
                assert!((bv - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn pure_mode_closed_form() {
        let p = part(1, 256, 6);
        for j in 2..=6 {
            let f = GridFunction::mode(*p.grid(), [1 << j, 0]);
            for (s, pp, q) in [(1.0, 2.0, 2.0), (-0.5, 1.0, 1.0), (0.3, 0.5, 0.7)] {
                let expect = 2f64.powf(s * j as f64) * (2.0 * PI).powf(1.0 / pp);
                let fv = f_norm(&f, &NormSpec::triebel_lizorkin(s, pp, q).unwrap(), &p).unwrap();
                assert!((fv - expect).abs() < 1e-10 * expect, "j={j}");
                let bv = b_norm(&f, &NormSpec::besov(s, pp, q).unwrap(), &p).unwrap();
                assert!((bv - expect).abs() < 1e-10 * expect);
            }
        }
    }

    #[test]
    fn unresolved_norm_errors() {
        let p = part(1, 128, 4);
        let f = GridFunction::mode(*p.grid(), [30, 0]);
        assert!(matches!(
            f_norm(&f, &NormSpec::triebel_lizorkin(0.0, 2.0, 2.0).unwrap(), &p),
            Err(Error::Unresolved { .. })
        ));
    }

    #[test]
    fn hom_range_brackets_the_lattice() {
        let (lo, hi) = hom_range(0.5, 100.0);
        assert!(SUPPORT_END * 2f64.powi(lo) >= 0.5 && SUPPORT_END * 2f64.powi(lo - 1) < 0.5);
        assert!(0.55 * 2f64.powi(hi) <= 100.0 && 0.55 * 2f64.powi(hi + 1) > 100.0);
    }

    #[test]
    fn dyadic_scaling_of_homogeneous_norm() {
        let prof = CutoffProfile::new();
        let b = |xi: [f64; 2]| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            Complex64::new(prof.phi_j(1, 4.0 * r) + prof.phi_j(2, 4.0 * r), 0.0)
        };
        for (dim, m) in [(1usize, 512usize), (2, 64)] {
            let base = SampledRow::from_fn(dim, m, 8.0, b).unwrap();
            for t in [0.5, 0.75, 1.0] {
                let s = dim as f64 / t;
                let v0 = hom_besov_norm_in_xi(&base, s, 1.0, t).unwrap();
                assert!(v0 > 0.0 && v0.is_finite());
                for k in 1..=3 {
                    let scale = 2f64.powi(k);
                    let row = SampledRow::from_fn(dim, m, 8.0 / scale, |xi| b([xi[0] * scale, xi[1] * scale])).unwrap();
                    let vk = hom_besov_norm_in_xi(&row, s, 1.0, t).unwrap();
                    let expect = 2f64.powf(k as f64 * (s - dim as f64)) * v0;
                    assert!((vk - expect).abs() < 1e-9 * expect, "dim {dim} t {t} k {k}");
                }
            }
        }
    }

    fn brute_maximal(f: &GridFunction, t: f64) -> Vec<f64> {
        // every radius: offsets sorted by squared length, averages over each prefix ending at a shell boundary
        let g = *f.grid();
        let n = g.n() as i64;
        let half = n / 2;
        let mut offsets: Vec<[i64; 2]> = if g.dim() == 1 {
            (-half..half).map(|a| [a, 0]).collect()
        } else {
            (-half..half).flat_map(|a| (-half..half).map(move |b| [a, b])).collect()
        };
        offsets.sort_by_key(|o| o[0] * o[0] + o[1] * o[1]);
        let d2: Vec<i64> = offsets.iter().map(|o| o[0] * o[0] + o[1] * o[1]).collect();
        (0..g.len())
            .map(|idx| {
                let m = g.unflatten(idx);
                let mut best: f64 = f.values()[idx].norm();
                let mut sum = 0.0;
                for (i, o) in offsets.iter().enumerate() {
                    let y = if g.dim() == 1 {
                        [(m[0] as i64 + o[0]).rem_euclid(n) as usize, 0]
                    } else {
                        [(m[0] as i64 + o[0]).rem_euclid(n) as usize, (m[1] as i64 + o[1]).rem_euclid(n) as usize]
                    };
                    sum += f.values()[g.flatten(y)].norm().powf(t);
                    if i + 1 == offsets.len() || d2[i + 1] != d2[i] {
                        best = best.max((sum / (i + 1) as f64).powf(1.0 / t));
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn maximal_constant_and_pointwise_bound() {
        let g = TorusGrid::new(2, 64).unwrap();
        let c = GridFunction::constant(g, Complex64::new(-3.0, 4.0));
        let m = maximal(&c, 0.5).unwrap();
        assert!(m.values().iter().all(|v| (v.re - 5.0).abs() < 1e-12));
        let f = random::random_function(g, 10.0, 0.0, 1);
        let mf = maximal(&f, 0.7).unwrap();
        for (a, b) in mf.values().iter().zip(f.values()) {
            assert!(a.re >= b.norm());
        }
        assert!(maximal(&f, 0.0).is_err());
        assert!(maximal(&f, 1.5).is_err());
    }

    #[test]
    fn maximal_against_all_radii_oracle() {
        for (dim, n, factor) in [(1usize, 64usize, 2.0f64), (2, 64, 2.5)] {
            let g = TorusGrid::new(dim, n).unwrap();
            let mut spike = GridFunction::zeros(g);
            spike.values_mut()[g.flatten([5, 7 % n])] = Complex64::new(1.0, 0.0);
            let f = random::random_function(g, 6.0, 0.0, 3);
            for t in [0.5, 1.0] {
                for h in [&spike, &f] {
                    let dyadic = maximal(h, t).unwrap();
                    let brute = brute_maximal(h, t);
                    let limit = factor.powf(dim as f64 / t);
                    for (d, b) in dyadic.values().iter().zip(&brute) {
                        assert!(d.re <= b * (1.0 + 1e-12));
                        assert!(d.re * limit * (1.0 + 1e-12) >= *b);
                    }
                }
            }
        }
    }

    #[test]
    fn spike_decay_rate() {
        let g = TorusGrid::new(1, 256).unwrap();
        let mut spike = GridFunction::zeros(g);
        spike.values_mut()[0] = Complex64::new(1.0, 0.0);
        let t = 0.5;
        let m = maximal(&spike, t).unwrap();
        // at distance d cells the best ball has at most 4d+1 points
        for d in [4usize, 16, 64] {
            let v = m.values()[d].re;
            let upper = (1.0 / (2.0 * d as f64 + 1.0)).powf(1.0 / t);
            let lower = (1.0 / (4.0 * d as f64 + 1.0)).powf(1.0 / t);
            assert!(v <= upper * (1.0 + 1e-12) && v >= lower * (1.0 - 1e-12), "d={d}: {v}");
        }
    }

    #[test]
    fn mixed_norm_examples() {
        let g = TorusGrid::new(1, 64).unwrap();
        let one = GridFunction::constant(g, Complex64::new(1.0, 0.0));
        let v = mixed_norm(&[one.clone(), one.clone()], 2.0, 2.0).unwrap();
        assert!((v - (2.0 * 2.0 * PI).sqrt()).abs() < 1e-12);
        assert_eq!(mixed_norm(&[], 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn norm_table_csv() {
        let rows = vec![NormRow {
            family: "theta".into(),
            parameter: 2.0,
            kind: NormKind::TriebelLizorkin,
            s: 0.0,
            p: 1.0,
            q: 2.0,
            value: 1.5,
        }];
        let mut buf = Vec::new();
        write_norm_table_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,parameter,kind,s,p,q,value\ntheta,2.0,TriebelLizorkin"));
    }
}
