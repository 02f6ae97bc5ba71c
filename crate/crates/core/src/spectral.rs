//! Checks of the support rule
//! `supp F(b(x,D)v) ⊂ {ξ + η : (ξ, η) ∈ supp â, η ∈ supp v̂}` and of the
//! corona/ball inclusions satisfied by the three paradifferential series.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{dft, numerical_support, Freq, SpectralFunction, TorusGrid};
use crate::paradiff::{direct_apply, ParaResult};
use crate::symbols::{partial_ft_x, Symbol};
use crate::GridFunction;

/// Relative threshold used for series-term spectra.
pub const INCLUSION_THRESHOLD: f64 = 1e-10;

/// What a claim predicts for the output spectrum.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Region {
    /// An explicit set of lattice frequencies (possibly after dilation).
    Set {
        #[serde(skip)]
        members: Vec<Freq>,
        size: usize,
        min_radius: f64,
        max_radius: f64,
    },
    /// `{inner ≤ |ξ| ≤ outer}`, tested with a one-cell neighbourhood.
    Annulus { inner: f64, outer: f64 },
}

impl Region {
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Region::Set { min_radius, max_radius, .. } => (*min_radius, *max_radius),
            Region::Annulus { inner, outer } => (*inner, *outer),
        }
    }

    fn set(members: Vec<Freq>) -> Self {
        let (lo, hi) = radius_bounds(&members);
        Region::Set { size: members.len(), members, min_radius: lo, max_radius: hi }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportClaim {
    pub id: String,
    pub predicted: Region,
    #[serde(skip)]
    pub observed: Vec<Freq>,
    pub observed_count: usize,
    /// `(min |ξ|, max |ξ|)` over the observed support; zeros when empty.
    pub observed_bounds: (f64, f64),
    pub threshold: f64,
    pub max_coefficient: f64,
    /// Largest coefficient outside the predicted region.
    pub worst_violation: f64,
    pub pass: bool,
}

fn freq_radius(f: &Freq) -> f64 {
    ((f[0] * f[0] + f[1] * f[1]) as f64).sqrt()
}

fn radius_bounds(set: &[Freq]) -> (f64, f64) {
    if set.is_empty() {
        return (0.0, 0.0);
    }
    set.iter().map(freq_radius).fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

fn neighbourhood(dim: usize, r: i64) -> Vec<Freq> {
    let second: Vec<i64> = if dim == 2 { (-r..=r).collect() } else { vec![0] };
    (-r..=r).flat_map(|a| second.iter().map(move |&b| [a, b])).collect()
}

fn dilate(g: &TorusGrid, mask: &[bool], r: i64) -> Vec<bool> {
    let offs = neighbourhood(g.dim(), r);
    let mut out = vec![false; mask.len()];
    for (i, _) in mask.iter().enumerate().filter(|(_, m)| **m) {
        let f = g.freq_of(i);
        for o in &offs {
            out[g.index_of([f[0] + o[0], f[1] + o[1]])] = true;
        }
    }
    out
}

fn erode(g: &TorusGrid, mask: &[bool], r: i64) -> Vec<bool> {
    let offs = neighbourhood(g.dim(), r);
    (0..mask.len())
        .map(|i| {
            let f = g.freq_of(i);
            offs.iter().all(|o| mask[g.index_of([f[0] + o[0], f[1] + o[1]])])
        })
        .collect()
}

fn mask_members(g: &TorusGrid, mask: &[bool]) -> Vec<Freq> {
    mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| g.freq_of(i)).collect()
}

fn judge(id: String, predicted: Region, allowed: impl Fn(usize) -> bool, s: &SpectralFunction, threshold: f64) -> SupportClaim {
    let observed = numerical_support(s, threshold);
    let max = s.max_abs();
    let worst = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(i, _)| !allowed(*i))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    SupportClaim {
        id,
        predicted,
        observed_count: observed.len(),
        observed_bounds: radius_bounds(&observed),
        observed,
        threshold,
        max_coefficient: max,
        worst_violation: worst,
        pass: worst <= threshold * max,
    }
}

/// The Minkowski set `{ξ + η}` (wrapped to the lattice) over products
/// `|â(ξ, η) v̂(η)|` above `threshold` times their maximum.
pub fn predicted_support(a: &Symbol, v_hat: &SpectralFunction, threshold: f64) -> Result<Vec<bool>> {
    let g = *v_hat.grid();
    let ft = partial_ft_x(a, &g)?;
    let rows: Vec<(Freq, f64, Vec<(usize, f64)>)> = v_hat
        .coeffs()
        .par_iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(e, c)| {
            let w = c.norm();
            let entries = ft.row_entries(e).into_iter().map(|(i, z)| (i, z.norm() * w)).collect();
            (g.freq_of(e), w, entries)
        })
        .collect();
    let max = rows.iter().flat_map(|(_, _, r)| r.iter().map(|(_, m)| *m)).fold(0.0, f64::max);
    let mut mask = vec![false; g.len()];
    if max == 0.0 {
        return Ok(mask);
    }
    for (eta, _, entries) in &rows {
        for &(i, m) in entries {
            if m > threshold * max {
                let xi = g.freq_of(i);
                mask[g.index_of([xi[0] + eta[0], xi[1] + eta[1]])] = true;
            }
        }
    }
    Ok(mask)
}

/// Compares the spectrum of `direct_apply(a, v)` with the predicted set
/// dilated by one cell and then eroded by `shrink` cells.
pub fn support_rule_check_with(a: &Symbol, v: &GridFunction, threshold: f64, shrink: i64) -> Result<SupportClaim> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Inadmissible(format!("threshold {threshold}")));
    }
    let g = *v.grid();
    let v_hat = dft(v);
    let v_thr = SpectralFunction::from_vec_unchecked(
        g,
        v_hat
            .coeffs()
            .iter()
            .map(|c| if c.norm() > threshold * v_hat.max_abs() { *c } else { Default::default() })
            .collect(),
    );
    let raw = predicted_support(a, &v_thr, threshold)?;
    let mut mask = dilate(&g, &raw, 1);
    if shrink > 0 {
        mask = erode(&g, &mask, shrink);
    }
    let out = dft(&direct_apply(a, v)?);
    let id = if shrink > 0 { format!("support-rule:{}:eroded{shrink}", a.name()) } else { format!("support-rule:{}", a.name()) };
    let predicted = Region::set(mask_members(&g, &mask));
    Ok(judge(id, predicted, |i| mask[i], &out, threshold))
}

pub fn support_rule_check(a: &Symbol, v: &GridFunction, threshold: f64) -> Result<SupportClaim> {
    support_rule_check_with(a, v, threshold, 0)
}

/// Admissible range of `k` for the annulus bound with twisted constant `c`.
pub fn twisted_annulus_applies(k: u32, c: f64) -> bool {
    k as f64 > 3.0 + (5.0 * c).log2()
}

fn annulus_claim(id: String, inner: f64, outer: f64, s: &SpectralFunction) -> SupportClaim {
    let g = *s.grid();
    let offs = neighbourhood(g.dim(), 1);
    let allowed = |i: usize| {
        let f = g.freq_of(i);
        offs.iter().any(|o| {
            let r = freq_radius(&[f[0] + o[0], f[1] + o[1]]);
            r >= inner && r <= outer
        })
    };
    judge(id, Region::Annulus { inner, outer }, allowed, s, INCLUSION_THRESHOLD)
}

/// One claim per series term:
/// series 1 and 3 against `{2^k/5 ≤ |ξ| ≤ 5·2^k/4}`, series 2 against
/// `{|ξ| ≤ 4·2^k}`, and, with a twisted constant `C`, series 2 for
/// `k > 3 + log₂(5C)` against `{2^k/(4C) ≤ |ξ| ≤ 4·2^k}`.
pub fn inclusion_check(result: &ParaResult, c_twisted: Option<f64>) -> Result<Vec<SupportClaim>> {
    let details = result
        .details
        .as_ref()
        .ok_or_else(|| Error::Missing("series-term spectra (apply with details)".into()))?;
    if let Some(c) = c_twisted {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::Inadmissible(format!("twisted constant C = {c}")));
        }
    }
    let mut jobs = Vec::new();
    for d in details {
        let scale = 2f64.powi(d.index as i32);
        match d.series {
            1 | 3 => jobs.push((format!("S{}:{}", d.series, d.index), 0.2 * scale, 1.25 * scale, &d.spectrum)),
            _ => {
                jobs.push((format!("S2:{}", d.index), 0.0, 4.0 * scale, &d.spectrum));
                if let Some(c) = c_twisted.filter(|&c| twisted_annulus_applies(d.index, c)) {
                    jobs.push((format!("S2'(C={c}):{}", d.index), scale / (4.0 * c), 4.0 * scale, &d.spectrum));
                }
            }
        }
    }
    Ok(jobs.into_par_iter().map(|(id, lo, hi, s)| annulus_claim(id, lo, hi, s)).collect())
}

pub fn write_claims_csv<W: Write>(w: W, claims: &[SupportClaim]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "term",
        "predicted_inner",
        "predicted_outer",
        "observed_min",
        "observed_max",
        "pass",
        "worst_violation",
    ])?;
    for c in claims {
        let (pi, po) = c.predicted.bounds();
        out.write_record([
            c.id.clone(),
            pi.to_string(),
            po.to_string(),
            c.observed_bounds.0.to_string(),
            c.observed_bounds.1.to_string(),
            c.pass.to_string(),
            format!("{:e}", c.worst_violation),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpdecomp::build_partition;
    use crate::paradiff::{apply_with, ApplyOptions};
    use crate::random;
    use crate::symbols::{ching_symbol, identity_symbol, reduced_symbol};
    use rustfft::num_complex::Complex64;

    #[test]
    fn identity_predicts_input_support() {
        let p = build_partition(TorusGrid::new(1, 256).unwrap(), 6).unwrap();
        let g = *p.grid();
        let v = random::random_function(g, 20.0, 0.0, 2);
        let c = support_rule_check(&identity_symbol(g), &v, 1e-10).unwrap();
        assert!(c.pass);
        match &c.predicted {
            Region::Set { size, max_radius, .. } => {
                assert_eq!(*size, 43);
                assert_eq!(*max_radius, 21.0);
            }
            _ => unreachable!(),
        }
        assert_eq!(c.observed, numerical_support(&dft(&v), 1e-10));
    }

    #[test]
    fn ching_on_single_mode() {
        let p = build_partition(TorusGrid::new(1, 256).unwrap(), 6).unwrap();
        let g = *p.grid();
        let a = ching_symbol(0.0, &p);
        let v = GridFunction::mode(g, [16, 0]);
        let c = support_rule_check(&a, &v, 1e-10).unwrap();
        assert!(c.pass);
        assert_eq!(c.observed, vec![[0, 0]]);
        let tight = support_rule_check_with(&a, &v, 1e-10, 2).unwrap();
        assert!(!tight.pass);
    }

    #[test]
    fn reduced_symbol_matches_convolution() {
        let p = build_partition(TorusGrid::new(1, 256).unwrap(), 6).unwrap();
        let g = *p.grid();
        let ms: Vec<GridFunction> = (0..4).map(|s| random::random_function(g, 3.0, 0.0, 10 + s)).collect();
        let a = reduced_symbol(&ms, &p).unwrap();
        let v = random::random_function(g, 40.0, 0.0, 5);
        let v_hat = dft(&v);
        // (2π)^{-1} Σ_j m̂_j * (Φ_j v̂)
        let mut conv = vec![Complex64::new(0.0, 0.0); g.len()];
        for (j, m) in ms.iter().enumerate() {
            let mh = dft(m);
            let b = p.block_spectrum(&v_hat, j).unwrap();
            for (xi, c1) in mh.coeffs().iter().enumerate() {
                for (eta, c2) in b.coeffs().iter().enumerate() {
                    let f = g.freq_of(xi);
                    let e = g.freq_of(eta);
                    conv[g.index_of([f[0] + e[0], 0])] += c1 * c2 / (2.0 * std::f64::consts::PI);
                }
            }
        }
        let out = dft(&direct_apply(&a, &v).unwrap());
        let scale = out.max_abs();
        for (x, y) in out.coeffs().iter().zip(&conv) {
            assert!((x - y).norm() < 1e-11 * scale);
        }
        let c = support_rule_check(&a, &v, 1e-10).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn inclusions_for_ching_and_missing_details() {
        let p = build_partition(TorusGrid::new(1, 512).unwrap(), 7).unwrap();
        let g = *p.grid();
        let u = random::random_function(g, 2f64.powi(7), 0.0, 1);
        let a = ching_symbol(0.0, &p);
        let plain = crate::paradiff::apply(&a, &u, &p).unwrap();
        assert!(inclusion_check(&plain, None).is_err());
        let r = apply_with(&a, &u, &p, &ApplyOptions { details: true, ..Default::default() }).unwrap();
        let claims = inclusion_check(&r, None).unwrap();
        assert_eq!(claims.len(), 3 * 8);
        for c in claims.iter().filter(|c| c.id.starts_with("S2") || c.id.starts_with("S1")) {
            assert!(c.pass, "{}", c.id);
        }
        let s3_2 = claims.iter().find(|c| c.id == "S3:2").unwrap();
        assert!(s3_2.pass);
        assert!(inclusion_check(&r, Some(0.5)).is_err());
    }

    #[test]
    fn annulus_range_rule() {
        assert!(!twisted_annulus_applies(6, 2.0));
        assert!(twisted_annulus_applies(7, 2.0));
    }

    #[test]
    fn erosion_and_dilation() {
        let g = TorusGrid::new(2, 64).unwrap();
        let mut m = vec![false; g.len()];
        m[g.index_of([0, 0])] = true;
        let d = dilate(&g, &m, 1);
        assert_eq!(d.iter().filter(|b| **b).count(), 9);
        assert_eq!(erode(&g, &d, 1), m);
        assert!(erode(&g, &d, 2).iter().all(|b| !b));
    }

    #[test]
    fn claims_csv_header() {
        let g = TorusGrid::new(1, 64).unwrap();
        let s = dft(&GridFunction::mode(g, [3, 0]));
        let c = annulus_claim("x".into(), 2.0, 4.0, &s);
        assert!(c.pass);
        let mut buf = Vec::new();
        write_claims_csv(&mut buf, &[c]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("term,predicted_inner,predicted_outer,observed_min,observed_max,pass,worst_violation\nx,2,4,3,3,true,"));
    }
}
