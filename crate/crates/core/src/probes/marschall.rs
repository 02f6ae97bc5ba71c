//! Pointwise ratio in Marschall's inequality
//! `|b(x,D)v(x)| ≤ c ‖b(x, 2^k·)‖_{Ḃ^{n/t}_{1,t}} M_t v(x)`
//! for `v̂` and `b(x, ·)` supported in `B(0, 2^k)`.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{dft, idft, GridFunction};
use crate::lpdecomp::DyadicPartition;
use crate::paradiff::direct_apply;
use crate::random;
use crate::spaces::{hom_besov_norm_in_xi, maximal, SampledRow};
use crate::symbols::{random_symbol, Symbol};

/// Sampling of `ζ ↦ b(x, 2^k ζ)` on `[−window, window)^n`. The narrowest
/// features of `b(x, 2^k ·)` have width about `2^{−k}`; with `adaptive` the
/// point count grows to eight cells per such width.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MarschallOptions {
    pub window: f64,
    pub points: usize,
    pub adaptive: bool,
}

impl MarschallOptions {
    pub fn for_dim(dim: usize) -> Self {
        if dim == 1 {
            Self { window: 4.0, points: 512, adaptive: true }
        } else {
            Self { window: 4.0, points: 64, adaptive: false }
        }
    }

    pub fn points_for(&self, k: u32) -> usize {
        if !self.adaptive {
            return self.points;
        }
        let want = (16.0 * self.window * 2f64.powi(k as i32)).ceil() as usize;
        self.points.max(want.next_power_of_two())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarschallReport {
    pub symbol: String,
    pub k: u32,
    pub t: f64,
    pub sup_ratio: f64,
    /// Grid index where the sup is attained.
    pub argmax: usize,
    pub lhs_max: f64,
    pub finite: bool,
}

fn radius(eta: [f64; 2]) -> f64 {
    (eta[0] * eta[0] + eta[1] * eta[1]).sqrt()
}

/// Both `a` and `v` are cut off by `Ψ_{k−1}(|η|)`, whose support
/// `|η| ≤ (13/20)2^k` lies inside `B(0, 2^k)`.
pub fn marschall_probe(
    a: &Symbol,
    v: &GridFunction,
    k: u32,
    t: f64,
    part: &DyadicPartition,
    opts: MarschallOptions,
) -> Result<MarschallReport> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidExponent { name: "t", value: t });
    }
    part.check_grid(v.grid())?;
    part.check_grid(a.grid())?;
    let g = *v.grid();
    if k == 0 || crate::lpdecomp::SUPPORT_END * 2f64.powi(k as i32 - 1) > g.nyquist() as f64 {
        return Err(Error::Inadmissible(format!("k = {k} on a grid with {} points", g.n())));
    }
    let prof = part.profile().clone();
    let cut = {
        let prof = prof.clone();
        move |eta: [f64; 2]| prof.psi_j(k as i32 - 1, radius(eta))
    };
    let chi = Arc::new(move |eta: [f64; 2]| Complex64::new(cut(eta), 0.0));
    let b = a.times_profile("psi", chi.clone());
    let mult: Vec<f64> = (0..g.len()).map(|i| prof.psi_j(k as i32 - 1, g.freq_norm(i))).collect();
    let vk = idft(&dft(v).multiply(&mult));
    let lhs = direct_apply(&b, &vk)?;
    let mt = maximal(&vk, t)?;
    let n = g.dim() as f64;
    let scale = 2f64.powi(k as i32);
    let points = opts.points_for(k);
    let ratios: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|x| {
            let row = SampledRow::from_fn(g.dim(), points, opts.window, |z| b.eval(x, [scale * z[0], scale * z[1]]))?;
            let h = hom_besov_norm_in_xi(&row, n / t, 1.0, t)?;
            let num = lhs.values()[x].norm();
            let den = h * mt.values()[x].re;
            Ok(if den > 0.0 {
                num / den
            } else if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            })
        })
        .collect::<Result<_>>()?;
    let (argmax, sup_ratio) =
        ratios.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, &r)| if r > bv || r.is_nan() { (i, r) } else { (bi, bv) });
    Ok(MarschallReport {
        symbol: a.name().to_string(),
        k,
        t,
        sup_ratio,
        argmax,
        lhs_max: lhs.max_abs(),
        finite: ratios.iter().all(|r| r.is_finite()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MarschallTriple {
    pub seed: u64,
    pub k: u32,
    pub sup_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarschallEnsemble {
    pub t: f64,
    pub triples: Vec<MarschallTriple>,
    /// `(k, max sup ratio over the triples at k)`.
    pub per_k: Vec<(u32, f64)>,
    pub median: f64,
    /// `max_k |c_k / median − 1|`.
    pub spread: f64,
    pub all_finite: bool,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Triple `i` uses `k = ks[i mod |ks|]`, the random `S^0_{1,0}` symbol with
/// seed `seed + i` and a random `v` with spectrum in `B(0, 2^k)`.
pub fn marschall_ensemble(
    part: &DyadicPartition,
    ks: &[u32],
    t: f64,
    count: usize,
    seed: u64,
    opts: MarschallOptions,
) -> Result<MarschallEnsemble> {
    if ks.is_empty() {
        return Err(Error::Inadmissible("empty k list".into()));
    }
    let g = *part.grid();
    let triples: Vec<MarschallTriple> = (0..count)
        .map(|i| {
            let k = ks[i % ks.len()];
            let s = seed + i as u64;
            let a = random_symbol(g, s);
            let v = random::random_function(g, 2f64.powi(k as i32), 0.0, s + 10_000);
            let r = marschall_probe(&a, &v, k, t, part, opts)?;
            Ok(MarschallTriple { seed: s, k, sup_ratio: r.sup_ratio })
        })
        .collect::<Result<_>>()?;
    let per_k: Vec<(u32, f64)> = ks
        .iter()
        .map(|&k| (k, triples.iter().filter(|r| r.k == k).map(|r| r.sup_ratio).fold(0.0, f64::max)))
        .collect();
    let values: Vec<f64> = per_k.iter().map(|(_, c)| *c).collect();
    let med = median(&values);
    let spread = values.iter().map(|c| (c / med - 1.0).abs()).fold(0.0, f64::max);
    Ok(MarschallEnsemble {
        t,
        all_finite: triples.iter().all(|r| r.sup_ratio.is_finite()),
        triples,
        per_k,
        median: med,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use crate::lpdecomp::build_partition;
    use crate::symbols::identity_symbol;

    fn part() -> DyadicPartition {
        build_partition(TorusGrid::new(1, 256).unwrap(), 6).unwrap()
    }

    #[test]
    fn constant_input_has_finite_ratio() {
        let p = part();
        let g = *p.grid();
        let v = GridFunction::constant(g, Complex64::new(2.0, 0.0));
        let r = marschall_probe(&identity_symbol(g), &v, 3, 1.0, &p, MarschallOptions::for_dim(1)).unwrap();
        assert!(r.finite && r.sup_ratio > 0.0);
    }

    #[test]
    fn homogeneous_in_both_slots() {
        let p = part();
        let g = *p.grid();
        let a = random_symbol(g, 4);
        let v = random::random_function(g, 16.0, 0.0, 5);
        let o = MarschallOptions::for_dim(1);
        let base = marschall_probe(&a, &v, 4, 0.5, &p, o).unwrap();
        let v10 = marschall_probe(&a, &v.scale(Complex64::new(10.0, 0.0)), 4, 0.5, &p, o).unwrap();
        let a3 = marschall_probe(&a.scaled(Complex64::new(0.0, 3.0)), &v, 4, 0.5, &p, o).unwrap();
        for r in [&v10, &a3] {
            assert!((r.sup_ratio - base.sup_ratio).abs() < 1e-10 * base.sup_ratio);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = part();
        let g = *p.grid();
        let v = GridFunction::constant(g, Complex64::new(1.0, 0.0));
        let a = identity_symbol(g);
        let o = MarschallOptions::for_dim(1);
        assert!(marschall_probe(&a, &v, 3, 0.0, &p, o).is_err());
        assert!(marschall_probe(&a, &v, 0, 1.0, &p, o).is_err());
        assert!(marschall_probe(&a, &v, 9, 1.0, &p, o).is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
