//! Experiments: the θ_N family and the Ching counterexample, boundedness
//! ratios, Marschall's inequality and the maximal/Nikolskiĭ inequalities.

pub mod inequalities;
pub mod marschall;

use std::f64::consts::PI;
use std::io::Write;

use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{idft, lp_norm, GridFunction, SpectralFunction, TorusGrid};
use crate::lpdecomp::DyadicPartition;
use crate::paradiff::apply;
use crate::spaces::{b_norm, f_norm, lq_combine, NormKind, NormSpec};
use crate::symbols::{ching_symbol, Symbol};

pub use inequalities::{fefferman_stein_suite, nikolskii_suite, InequalityCase, InequalityOptions};
pub use marschall::{marschall_ensemble, marschall_probe, MarschallEnsemble, MarschallOptions, MarschallReport};

/// `θ_N = Σ_{j=N}^{N²} (2^{−jd}/j) θ e^{i2^j x_n}`.
#[derive(Clone, Debug)]
pub struct ThetaFamily {
    pub d: f64,
    pub r_theta: u32,
    pub theta: GridFunction,
    pub members: Vec<(u32, GridFunction)>,
}

/// `θ̂` supported in the lattice ball of radius `r_theta`: the constant 1 for
/// radius 0, otherwise the real bump `θ̂(ξ) ∝ 1 − |ξ|²/(r+1)²`.
fn theta_spectrum(grid: TorusGrid, r_theta: u32) -> SpectralFunction {
    let cell = (2.0 * PI).powi(grid.dim() as i32);
    let r = r_theta as f64;
    let coeffs = (0..grid.len())
        .map(|i| {
            let rho = grid.freq_norm(i);
            if rho <= r {
                Complex64::new(cell * (1.0 - rho * rho / ((r + 1.0) * (r + 1.0))), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralFunction::from_vec_unchecked(grid, coeffs)
}

pub fn build_theta_family(d: f64, n_range: &[u32], r_theta: u32, part: &DyadicPartition) -> Result<ThetaFamily> {
    if r_theta > 2 {
        return Err(Error::Inadmissible(format!("r_theta = {r_theta} (allowed 0, 1, 2)")));
    }
    let grid = *part.grid();
    let base = theta_spectrum(grid, r_theta);
    let mut members = Vec::new();
    for &n in n_range {
        if n == 0 || (n as u64) * (n as u64) > part.j_max() as u64 {
            return Err(Error::Inadmissible(format!("N = {n} needs 1 ≤ N and N² ≤ J_max = {}", part.j_max())));
        }
        if r_theta > 0 && 20 * r_theta as u64 > 1u64 << n {
            return Err(Error::Inadmissible(format!("r_theta = {r_theta} exceeds 2^N/20 for N = {n}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        for j in n..=n * n {
            let w = 2f64.powf(-(j as f64) * d) / j as f64;
            let shift = grid.e_n(1i64 << j);
            for (i, c) in base.coeffs().iter().enumerate() {
                if c.norm() > 0.0 {
                    let f = grid.freq_of(i);
                    coeffs[grid.index_of([f[0] + shift[0], f[1] + shift[1]])] += c * w;
                }
            }
        }
        members.push((n, idft(&SpectralFunction::from_vec_unchecked(grid, coeffs))));
    }
    Ok(ThetaFamily { d, r_theta, theta: idft(&base), members })
}

/// `Σ_{j=N}^{N²} 1/j` exactly.
pub fn harmonic_exact(n: u32) -> BigRational {
    (n..=n * n).fold(BigRational::zero(), |acc, j| acc + BigRational::new(BigInt::one(), BigInt::from(j)))
}

/// `(Σ_{j=N}^{N²} j^{−q})^{1/q}`, with the inner sum exact for integer `q`;
/// `1/N` for `q = ∞`.
pub fn lq_weight_closed_form(n: u32, q: f64) -> f64 {
    if q.is_infinite() {
        return 1.0 / n as f64;
    }
    if q.fract() == 0.0 && q >= 1.0 {
        let k = q as u32;
        let sum = (n..=n * n).fold(BigRational::zero(), |acc, j| {
            acc + BigRational::new(BigInt::one(), BigInt::from(j).pow(k))
        });
        return sum.to_f64().unwrap_or(f64::NAN).powf(1.0 / q);
    }
    lq_combine((n..=n * n).map(|j| 1.0 / j as f64), q)
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleRow {
    pub n_family: u32,
    pub harmonic: f64,
    pub harmonic_exact: String,
    /// `‖apply(a, θ_N).total − (Σ1/j)θ‖₂ / ‖(Σ1/j)θ‖₂`.
    pub identity_error: f64,
    /// `⟨a(x,D)θ_N, φ⟩ / ⟨θ, φ⟩`.
    pub pairing_ratio: f64,
    pub pairing_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaNormRow {
    pub n_family: u32,
    pub kind: NormKind,
    #[serde(serialize_with = "crate::io::exponent::serialize")]
    pub t: f64,
    #[serde(serialize_with = "crate::io::exponent::serialize")]
    pub q: f64,
    pub measured: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    /// pairing ratio over `‖θ_N‖/‖θ‖_t`.
    pub ratio: f64,
    /// `(Σ1/j)/(Σj^{−q})^{1/q}`.
    pub ratio_reference: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n_family: u32,
    #[serde(serialize_with = "crate::io::exponent::serialize")]
    pub q: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub d: f64,
    pub r_theta: u32,
    pub dim: usize,
    pub n_points: usize,
    pub j_max: u32,
    pub rows: Vec<CounterexampleRow>,
    pub norms: Vec<ThetaNormRow>,
    /// Exact reference ratios for `N` beyond the grid.
    pub growth: Vec<GrowthRow>,
}

/// Test function with `⟨θ, φ⟩ = 1`, `φ ∝ e^{cos x_n}`.
fn pairing_function(theta: &GridFunction) -> Result<GridFunction> {
    let g = *theta.grid();
    let n = g.last_axis();
    let raw = GridFunction::from_fn(g, |x| Complex64::new(x[n].cos().exp(), 0.0))?;
    let z = theta.pairing(&raw)?;
    Ok(raw.scale(z.inv()))
}

/// Runs the Ching symbol on the θ_N family and measures its norms; `t_list`
/// entries with `t = ∞` use the Besov norm `B^d_{∞,q}`, finite `t` both
/// `F^d_{t,q}` and `B^d_{t,q}`.
pub fn counterexample_run(
    d: f64,
    n_range: &[u32],
    t_list: &[f64],
    q_list: &[f64],
    part: &DyadicPartition,
    growth_range: std::ops::RangeInclusive<u32>,
) -> Result<CounterexampleReport> {
    let fam = build_theta_family(d, n_range, 0, part)?;
    let a = ching_symbol(d, part);
    let phi = pairing_function(&fam.theta)?;
    let theta_pair = fam.theta.pairing(&phi)?;
    let mut rows = Vec::new();
    let mut norms = Vec::new();
    for (n, member) in &fam.members {
        let h = harmonic_exact(*n);
        let hf = h.to_f64().unwrap_or(f64::NAN);
        let out = apply(&a, member, part)?.total;
        let expect = fam.theta.scale(Complex64::new(hf, 0.0));
        let identity_error = out.rel_l2_error(&expect)?;
        let pr = (out.pairing(&phi)? / theta_pair).re;
        rows.push(CounterexampleRow {
            n_family: *n,
            harmonic: hf,
            harmonic_exact: rational_string(&h),
            identity_error,
            pairing_ratio: pr,
            pairing_error: (pr - hf).abs() / hf,
        });
        for &t in t_list {
            let theta_t = lp_norm(&fam.theta, t)?;
            let kinds: &[NormKind] =
                if t.is_infinite() { &[NormKind::Besov] } else { &[NormKind::TriebelLizorkin, NormKind::Besov] };
            for &q in q_list {
                let w = lq_weight_closed_form(*n, q);
                for &kind in kinds {
                    let spec = NormSpec::new(kind, d, t, q)?;
                    let measured = match kind {
                        NormKind::TriebelLizorkin => f_norm(member, &spec, part)?,
                        _ => b_norm(member, &spec, part)?,
                    };
                    let closed = theta_t * w;
                    norms.push(ThetaNormRow {
                        n_family: *n,
                        kind,
                        t,
                        q,
                        measured,
                        closed_form: closed,
                        rel_error: (measured - closed).abs() / closed,
                        ratio: pr / (measured / theta_t),
                        ratio_reference: hf / w,
                    });
                }
            }
        }
    }
    let mut growth = Vec::new();
    for n in growth_range {
        let hf = harmonic_exact(n).to_f64().unwrap_or(f64::NAN);
        for &q in q_list {
            growth.push(GrowthRow { n_family: n, q, ratio: hf / lq_weight_closed_form(n, q) });
        }
    }
    let g = part.grid();
    Ok(CounterexampleReport { d, r_theta: 0, dim: g.dim(), n_points: g.n(), j_max: part.j_max(), rows, norms, growth })
}

pub fn write_growth_csv<W: Write>(w: W, rows: &[GrowthRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessReport {
    pub symbol: String,
    pub source: NormSpec,
    /// `None` means the plain `L_p` norm.
    pub target: Option<NormSpec>,
    pub d: f64,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
    pub diagnosis: String,
    /// Last ratio over first.
    pub growth_factor: f64,
}

/// Target space for source smoothness `s + d`: `L_p` when `s = 0`,
/// otherwise `F^s_{p,r}` with `r = q` if `q > n/(n+s)` and `r = 1` else, or
/// `B^s_{p,q}` for Besov sources.
pub fn boundedness_target(spec: &NormSpec, dim: usize) -> Result<Option<NormSpec>> {
    if spec.s == 0.0 {
        return Ok(None);
    }
    match spec.kind {
        NormKind::TriebelLizorkin => {
            if spec.s < 0.0 {
                return Err(Error::InvalidSpec("Triebel-Lizorkin targets need s >= 0".into()));
            }
            let n = dim as f64;
            let r = if spec.q > n / (n + spec.s) { spec.q } else { 1.0 };
            Ok(Some(NormSpec::triebel_lizorkin(spec.s, spec.p, r)?))
        }
        NormKind::Besov => Ok(Some(*spec)),
        NormKind::HomogeneousBesov => Err(Error::InvalidSpec("homogeneous spaces are not probe sources".into())),
    }
}

/// Ratios `‖a(x,D)u‖_target / ‖u‖_source` with source `F^{s+d}_{p,q}` or
/// `B^{s+d}_{p,q}`; `spec` carries `s`.
pub fn boundedness_probe(
    a: &Symbol,
    spec: &NormSpec,
    d: f64,
    inputs: &[GridFunction],
    part: &DyadicPartition,
) -> Result<BoundednessReport> {
    let spec = NormSpec::new(spec.kind, spec.s, spec.p, spec.q)?;
    let source = spec.with_s(spec.s + d);
    let target = boundedness_target(&spec, part.grid().dim())?;
    let norm_of = |f: &GridFunction, sp: &NormSpec| match sp.kind {
        NormKind::TriebelLizorkin => f_norm(f, sp, part),
        _ => b_norm(f, sp, part),
    };
    let mut ratios = Vec::with_capacity(inputs.len());
    for u in inputs {
        let out = apply(a, u, part)?.total;
        let num = match &target {
            None => lp_norm(&out, spec.p)?,
            Some(t) => norm_of(&out, t)?,
        };
        ratios.push(num / norm_of(u, &source)?);
    }
    let sup_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let growth_factor = match (ratios.first(), ratios.last()) {
        (Some(f), Some(l)) if *f > 0.0 => l / f,
        _ => 1.0,
    };
    let diagnosis = if ratios.is_empty() || sup_ratio <= 1.1 * lo {
        "bounded".to_string()
    } else if growth_factor > 1.1 {
        format!("growing (x{growth_factor:.4} over the inputs)")
    } else {
        "varying".to_string()
    };
    Ok(BoundednessReport { symbol: a.name().to_string(), source, target, d, ratios, sup_ratio, diagnosis, growth_factor })
}

/// Random input with blocks of independent complex Gaussian coefficients,
/// scaled to norm 1 in `spec`.
pub fn normalized_random_input(spec: &NormSpec, part: &DyadicPartition, seed: u64) -> Result<GridFunction> {
    let g = *part.grid();
    let top = PLATEAU_TOP * 2f64.powi(part.j_max() as i32);
    let f = crate::random::random_function(g, top, 0.0, seed);
    let n = match spec.kind {
        NormKind::TriebelLizorkin => f_norm(&f, spec, part)?,
        _ => b_norm(&f, spec, part)?,
    };
    Ok(f.scale(Complex64::new(1.0 / n, 0.0)))
}

const PLATEAU_TOP: f64 = crate::lpdecomp::PLATEAU_END;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{dft, numerical_support};
    use crate::lpdecomp::{build_partition, decompose};
    use crate::symbols::identity_symbol;

    fn part(n: usize, j: u32) -> DyadicPartition {
        build_partition(TorusGrid::new(1, n).unwrap(), j).unwrap()
    }

    #[test]
    fn theta_two_coefficients() {
        let p = part(256, 4);
        let fam = build_theta_family(0.0, &[2], 0, &p).unwrap();
        let s = dft(&fam.members[0].1);
        for (f, w) in [(4, 0.5), (8, 1.0 / 3.0), (16, 0.25)] {
            assert!((s.at([f, 0]).re / (2.0 * PI) - w).abs() < 1e-14);
        }
        let supp = numerical_support(&s, 1e-10);
        assert_eq!(supp, vec![[4, 0], [8, 0], [16, 0]]);
    }

    #[test]
    fn single_term_member_and_blocks() {
        let p = part(256, 4);
        let d = 0.5;
        let fam = build_theta_family(d, &[1], 0, &p).unwrap();
        let expect = GridFunction::mode(*p.grid(), [2, 0]).scale(Complex64::new(2f64.powf(-d), 0.0));
        assert!(fam.members[0].1.rel_l2_error(&expect).unwrap() < 1e-14);
        let fam = build_theta_family(d, &[2], 0, &p).unwrap();
        let blocks = decompose(&fam.members[0].1, &p).unwrap();
        for (j, b) in &blocks.blocks {
            let w = if (2..=4).contains(j) { 2f64.powf(-(*j as f64) * d) / *j as f64 } else { 0.0 };
            let expect = GridFunction::mode(*p.grid(), [1 << j, 0]).scale(Complex64::new(w, 0.0));
            assert!(b.sub(&expect).unwrap().max_abs() < 1e-13, "j={j}");
        }
    }

    #[test]
    fn inadmissible_families() {
        let p = part(256, 4);
        assert!(build_theta_family(0.0, &[3], 0, &p).is_err());
        assert!(build_theta_family(0.0, &[2], 1, &p).is_err());
        assert!(build_theta_family(0.0, &[2], 3, &p).is_err());
        assert!(build_theta_family(0.0, &[0], 0, &p).is_err());
    }

    #[test]
    fn exact_sums() {
        assert_eq!(rational_string(&harmonic_exact(2)), "13/12");
        let l2 = lq_weight_closed_form(2, 2.0);
        assert!((l2 - (0.25f64 + 1.0 / 9.0 + 1.0 / 16.0).sqrt()).abs() < 1e-15);
        assert!((lq_weight_closed_form(2, 1.0) - 13.0 / 12.0).abs() < 1e-15);
        assert_eq!(lq_weight_closed_form(3, f64::INFINITY), 1.0 / 3.0);
        let half = lq_weight_closed_form(2, 0.5);
        assert!((half - (0.5f64.sqrt() + (1.0f64 / 3.0).sqrt() + 0.5).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn small_counterexample() {
        let p = part(2048, 9);
        let r = counterexample_run(0.0, &[2, 3], &[1.0, 2.0, f64::INFINITY], &[1.0, 2.0, f64::INFINITY], &p, 2..=6)
            .unwrap();
        assert!((r.rows[0].harmonic - 13.0 / 12.0).abs() < 1e-15);
        for row in &r.rows {
            assert!(row.identity_error < 1e-10);
            assert!(row.pairing_error < 1e-9);
        }
        for n in &r.norms {
            assert!(n.rel_error < 1e-6, "{n:?}");
            assert!((n.ratio - n.ratio_reference).abs() < 1e-6 * n.ratio_reference);
        }
        let q2: Vec<f64> = r.growth.iter().filter(|g| g.q == 2.0).map(|g| g.ratio).collect();
        assert!(q2.windows(2).all(|w| w[1] > w[0]));
        assert!(r.growth.iter().filter(|g| g.q == 1.0).all(|g| (g.ratio - 1.0).abs() < 1e-14));
    }

    #[test]
    fn boundedness_identity_and_ching() {
        let p = part(2048, 9);
        let g = *p.grid();
        let spec = NormSpec::triebel_lizorkin(0.0, 2.0, 1.0).unwrap();
        let inputs: Vec<GridFunction> =
            (0..3).map(|s| normalized_random_input(&spec, &p, s).unwrap()).collect();
        let r = boundedness_probe(&identity_symbol(g), &spec, 0.0, &inputs, &p).unwrap();
        assert!(r.sup_ratio <= 1.0 + 1e-10);
        let fam = build_theta_family(0.0, &[2, 3], 0, &p).unwrap();
        let members: Vec<GridFunction> = fam.members.iter().map(|(_, m)| m.clone()).collect();
        let a = ching_symbol(0.0, &p);
        let q1 = boundedness_probe(&a, &spec, 0.0, &members, &p).unwrap();
        assert_eq!(q1.diagnosis, "bounded");
        let q2 = boundedness_probe(&a, &spec.with_q(2.0), 0.0, &members, &p).unwrap();
        let expect = (harmonic_exact(3).to_f64().unwrap() / lq_weight_closed_form(3, 2.0))
            / (harmonic_exact(2).to_f64().unwrap() / lq_weight_closed_form(2, 2.0));
        assert!((q2.growth_factor - expect).abs() < 1e-6 * expect);
        assert!(q2.diagnosis.starts_with("growing"));
    }

    #[test]
    fn target_rule() {
        let f = NormSpec::triebel_lizorkin(0.5, 0.5, 0.5).unwrap();
        assert_eq!(boundedness_target(&f, 1).unwrap().unwrap().q, 1.0);
        let f = NormSpec::triebel_lizorkin(2.0, 0.5, 0.5).unwrap();
        assert_eq!(boundedness_target(&f, 1).unwrap().unwrap().q, 0.5);
        assert!(boundedness_target(&f.with_s(0.0), 1).unwrap().is_none());
    }
}
