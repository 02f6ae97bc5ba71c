//! Named verification suites. Every suite returns a list of named checks
//! with the measured value and the bound it was held to; reports contain
//! no timings, so identical configurations give identical JSON.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dft, GridFunction, TorusGrid};
use crate::lpdecomp::{build_partition, decompose, DyadicPartition, PLATEAU_END, SUPPORT_END};
use crate::paradiff::{apply_with, ApplyOptions};
use crate::probes::{
    build_theta_family, fefferman_stein_suite, marschall_ensemble, nikolskii_suite, InequalityOptions,
    MarschallOptions,
};
use crate::random;
use crate::spectral::{inclusion_check, support_rule_check, support_rule_check_with, SupportClaim};
use crate::symbols::{named_symbol, twisted_diagonal_check, Symbol, SymbolSpec};

pub const PARTITION_TOLERANCE: f64 = 1e-12;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;
pub const SUPPORT_THRESHOLD: f64 = 1e-10;
pub const TWISTED_THRESHOLD: f64 = 1e-10;
pub const MARSCHALL_SPREAD: f64 = 0.3;
pub const REFINEMENT_DRIFT: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Partition,
    SupportRule,
    Inclusions,
    Marschall,
    FeffermanStein,
    Nikolskii,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Partition, Suite::SupportRule, Suite::Inclusions, Suite::Marschall, Suite::FeffermanStein, Suite::Nikolskii];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Partition => "partition",
            Suite::SupportRule => "support-rule",
            Suite::Inclusions => "inclusions",
            Suite::Marschall => "marschall",
            Suite::FeffermanStein => "fefferman-stein",
            Suite::Nikolskii => "nikolskii",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Inadmissible(format!("unknown suite {s:?}")))
    }
}

/// Suite parameters. `grid` overrides the grid of the partition, support-rule
/// and inclusion suites; `symbols` restricts the families they cover.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub dim: usize,
    pub grid: Option<(usize, u32)>,
    pub seed: u64,
    pub twisted_c: f64,
    pub symbols: Option<Vec<String>>,
    pub marschall_triples: usize,
    pub inequality_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { dim: 1, grid: None, seed: 0, twisted_c: 2.0, symbols: None, marschall_triples: 50, inequality_samples: 100 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    fn le(id: impl Into<String>, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self { id: id.into(), pass: value <= bound, value, bound, detail: detail.into() }
    }

    fn flag(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { id: id.into(), pass, value: pass as u8 as f64, bound: 1.0, detail: detail.into() }
    }

    fn from_claim(c: &SupportClaim) -> Self {
        let (lo, hi) = c.predicted.bounds();
        Self {
            id: c.id.clone(),
            pass: c.pass,
            value: c.worst_violation,
            bound: c.threshold * c.max_coefficient,
            detail: format!(
                "predicted [{lo}, {hi}], observed [{}, {}] ({} frequencies)",
                c.observed_bounds.0, c.observed_bounds.1, c.observed_count
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|s| run_one(*s, cfg)).collect(),
        s => Ok(vec![run_one(s, cfg)?]),
    }
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Partition => partition_suite(cfg),
        Suite::SupportRule => support_rule_suite(cfg),
        Suite::Inclusions => inclusions_suite(cfg),
        Suite::Marschall => marschall_suite(cfg),
        Suite::FeffermanStein => fefferman_stein(cfg),
        Suite::Nikolskii => nikolskii(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn default_grid(dim: usize, one_d: (usize, u32), two_d: (usize, u32)) -> (usize, u32) {
    if dim == 1 {
        one_d
    } else {
        two_d
    }
}

fn partition_for(cfg: &VerifyConfig, one_d: (usize, u32), two_d: (usize, u32)) -> Result<DyadicPartition> {
    let (n, j) = cfg.grid.unwrap_or_else(|| default_grid(cfg.dim, one_d, two_d));
    build_partition(TorusGrid::new(cfg.dim, n)?, j)
}

/// Random resolved input with spectrum in `|ξ| ≤ (11/10)2^J`.
pub fn resolved_input(part: &DyadicPartition, seed: u64) -> GridFunction {
    random::random_function(*part.grid(), PLATEAU_END * 2f64.powi(part.j_max() as i32), 0.5, seed)
}

/// Partition of unity, exact support constants, adjacent-only overlap and
/// block reconstruction.
pub fn partition_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let part = partition_for(cfg, (4096, 10), (256, 6))?;
    let g = *part.grid();
    let j_max = part.j_max() as usize;
    let top = 2f64.powi(j_max as i32);
    let mut checks = Vec::new();
    let phis: Vec<&[f64]> = (0..=j_max + 1).map(|j| part.phi(j)).collect::<Result<_>>()?;
    let mut unity: f64 = 0.0;
    for i in 0..g.len() {
        if g.freq_norm(i) <= top {
            let s: f64 = phis[..=j_max].iter().map(|p| p[i]).sum();
            unity = unity.max((s - 1.0).abs());
        }
    }
    checks.push(Check::le("partition-of-unity", unity, PARTITION_TOLERANCE, format!("sup over |xi| <= 2^{j_max}")));
    let mut outside = 0usize;
    for (j, p) in phis.iter().enumerate().skip(1) {
        let scale = 2f64.powi(j as i32);
        for i in 0..g.len() {
            let r = g.freq_norm(i);
            if (r < 0.55 * scale || r > SUPPORT_END * scale) && p[i] != 0.0 {
                outside += 1;
            }
        }
    }
    checks.push(Check::le("support-constants", outside as f64, 0.0, "nonzero Phi_j outside [11/20, 13/10]2^j"));
    let mut overlap: f64 = 0.0;
    let mut tilde: f64 = 0.0;
    for j in 0..=j_max {
        for k in (j + 2)..=j_max {
            overlap = overlap.max((0..g.len()).map(|i| (phis[j][i] * phis[k][i]).abs()).fold(0.0, f64::max));
        }
        let t = part.phi_tilde(j)?;
        tilde = tilde.max((0..g.len()).map(|i| (t[i] * phis[j][i] - phis[j][i]).abs()).fold(0.0, f64::max));
    }
    checks.push(Check::le("adjacent-overlap", overlap, 0.0, "max |Phi_j Phi_k|, |j-k| >= 2"));
    checks.push(Check::le("tilde-identity", tilde, 1e-15, "max |Phi~_j Phi_j - Phi_j|"));
    let mut plateau: f64 = 0.0;
    for j in 1..=j_max {
        let i = g.index_of(g.e_n(1 << j));
        plateau = plateau.max((phis[j][i] - 1.0).abs());
    }
    checks.push(Check::le("plateau", plateau, 0.0, "max |Phi_j(2^j e_n) - 1|"));
    let mut recon: f64 = 0.0;
    for s in 0..4 {
        let f = resolved_input(&part, cfg.seed + s);
        let b = decompose(&f, &part)?;
        recon = recon.max(b.reconstruct().rel_l2_error(&f)?);
    }
    checks.push(Check::le("reconstruction", recon, RECONSTRUCTION_TOLERANCE, "4 random resolved inputs"));
    Ok(SuiteReport {
        suite: Suite::Partition.name().into(),
        checks,
        data: serde_json::json!({"dim": g.dim(), "n_points": g.n(), "j_max": part.j_max()}),
    })
}

fn wanted(cfg: &VerifyConfig, family: &str) -> bool {
    cfg.symbols.as_ref().is_none_or(|s| s.iter().any(|n| n == family))
}

/// The shipped (symbol, input) pairs of the support rule, for one grid.
pub fn support_pairs(part: &DyadicPartition, cfg: &VerifyConfig) -> Result<Vec<(Symbol, String, GridFunction)>> {
    let g = *part.grid();
    let seed = cfg.seed;
    let rand_u = |s: u64| resolved_input(part, seed + s);
    let k = (part.j_max() / 2).max(1);
    let mode = GridFunction::mode(g, g.e_n(1 << k));
    let mut pairs: Vec<(SymbolSpec, String, GridFunction)> = vec![
        (SymbolSpec::new("identity"), "random".into(), rand_u(1)),
        (SymbolSpec::new("zero"), "random".into(), rand_u(2)),
        (SymbolSpec::new("multiplier").with_d(1.0), "random".into(), rand_u(3)),
        (SymbolSpec::new("bessel").with_d(-1.0), "random".into(), rand_u(4)),
        (SymbolSpec::new("smooth").with_d(0.5), "random".into(), rand_u(5)),
        (SymbolSpec::new("ching"), format!("mode(2^{k})"), mode.clone()),
        (SymbolSpec::new("ching").with_d(1.0), "random".into(), rand_u(6)),
        (SymbolSpec::new("reduced").with_seed(seed + 7), "random".into(), rand_u(7)),
        (SymbolSpec::new("nonlinear").with_seed(seed + 8), "random".into(), rand_u(8)),
        (SymbolSpec::new("random").with_seed(seed + 9), "random".into(), rand_u(9)),
        (SymbolSpec::new("random").with_seed(seed + 10), format!("mode(2^{k})"), mode),
        (SymbolSpec::new("cutoff").with_seed(seed + 11).with_c(cfg.twisted_c), "random".into(), rand_u(11)),
    ];
    if part.j_max() >= 4 {
        let theta = build_theta_family(0.0, &[2], 0, part)?.members.remove(0).1;
        pairs.push((SymbolSpec::new("ching"), "theta_2".into(), theta));
    }
    pairs
        .into_iter()
        .filter(|(s, _, _)| wanted(cfg, &s.name))
        .map(|(s, label, u)| Ok((named_symbol(&s, part)?, label, u)))
        .collect()
}

/// The support rule for every shipped pair on the main grid (and on a 2D
/// grid when the main grid is 1D), plus the erosion tightness check.
pub fn support_rule_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut parts = vec![partition_for(cfg, (2048, 8), (64, 4))?];
    if cfg.dim == 1 && cfg.grid.is_none() {
        parts.push(build_partition(TorusGrid::new(2, 64)?, 4)?);
    }
    let mut checks = Vec::new();
    let mut any_eroded_failure = false;
    let mut pairs_run = 0usize;
    for part in &parts {
        let dim = part.grid().dim();
        for (a, label, u) in support_pairs(part, cfg)? {
            let mut c = Check::from_claim(&support_rule_check(&a, &u, SUPPORT_THRESHOLD)?);
            c.id = format!("{}:{label}:{dim}d", c.id);
            checks.push(c);
            let eroded = support_rule_check_with(&a, &u, SUPPORT_THRESHOLD, 2)?;
            any_eroded_failure |= !eroded.pass;
            pairs_run += 1;
        }
    }
    checks.push(Check::flag(
        "support-rule:pair-count",
        pairs_run >= 12 || cfg.symbols.is_some(),
        format!("{pairs_run} (symbol, input) pairs"),
    ));
    checks.push(Check::flag(
        "support-rule:tightness",
        any_eroded_failure || pairs_run == 0,
        "eroding the predicted set by 2 cells breaks at least one pair",
    ));
    Ok(SuiteReport { suite: Suite::SupportRule.name().into(), checks, data: serde_json::json!({"pairs": pairs_run}) })
}

/// Symbol families of the inclusion suite.
pub fn inclusion_symbols(cfg: &VerifyConfig) -> Vec<SymbolSpec> {
    let s = cfg.seed;
    vec![
        SymbolSpec::new("identity"),
        SymbolSpec::new("multiplier").with_d(1.0),
        SymbolSpec::new("bessel").with_d(-1.0),
        SymbolSpec::new("smooth").with_d(0.5),
        SymbolSpec::new("ching"),
        SymbolSpec::new("ching").with_d(1.0),
        SymbolSpec::new("ching").with_d(-1.0),
        SymbolSpec::new("reduced").with_seed(s + 1),
        SymbolSpec::new("nonlinear").with_seed(s + 2),
        SymbolSpec::new("random").with_seed(s + 3),
        SymbolSpec::new("cutoff").with_seed(s + 4).with_c(cfg.twisted_c),
    ]
    .into_iter()
    .filter(|sp| wanted(cfg, &sp.name))
    .collect()
}

/// `(S1)–(S3)` for every family on a random resolved input; `(S2′)` for the
/// twisted-cutoff family once its twisted-diagonal condition is confirmed.
pub fn inclusions_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let part = partition_for(cfg, (2048, 8), (128, 5))?;
    let g = *part.grid();
    let opts = ApplyOptions { details: true, ..Default::default() };
    let mut checks = Vec::new();
    let mut twisted = Vec::new();
    for (i, spec) in inclusion_symbols(cfg).into_iter().enumerate() {
        let a = named_symbol(&spec, &part)?;
        let u = resolved_input(&part, cfg.seed + 100 + i as u64);
        let r = apply_with(&a, &u, &part, &opts)?;
        let c_twisted = if spec.name == "cutoff" {
            let t = twisted_diagonal_check(&a, spec.c, &g, TWISTED_THRESHOLD)?;
            checks.push(Check::le(
                format!("twisted-diagonal:{}", a.name()),
                t.max_in_region,
                TWISTED_THRESHOLD * t.global_max,
                format!("{} violations", t.violations),
            ));
            let ok = t.pass;
            twisted.push(t);
            ok.then_some(spec.c)
        } else {
            None
        };
        for claim in inclusion_check(&r, c_twisted)? {
            let mut c = Check::from_claim(&claim);
            c.id = format!("{}:{}", a.name(), c.id);
            checks.push(c);
        }
    }
    let want_cutoff = wanted(cfg, "cutoff");
    let annulus = checks.iter().filter(|c| c.id.contains("S2'")).count();
    let needed = (0..=part.j_max()).filter(|&k| crate::spectral::twisted_annulus_applies(k, cfg.twisted_c)).count();
    checks.push(Check::flag(
        "inclusions:annulus-coverage",
        !want_cutoff || annulus == needed,
        format!("{annulus} of {needed} annulus terms checked"),
    ));
    Ok(SuiteReport {
        suite: Suite::Inclusions.name().into(),
        checks,
        data: serde_json::json!({
            "dim": g.dim(), "n_points": g.n(), "j_max": part.j_max(), "twisted": to_value(&twisted)
        }),
    })
}

/// Ensemble sup ratios per `k ∈ 3..=7` for `t ∈ {1/2, 1}`.
pub fn marschall_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (n, j) = default_grid(cfg.dim, (256, 6), (64, 4));
    let part = build_partition(TorusGrid::new(cfg.dim, n)?, j)?;
    let ks: Vec<u32> = if cfg.dim == 1 { (3..=7).collect() } else { (3..=5).collect() };
    let mut checks = Vec::new();
    let mut data = Vec::new();
    for t in [0.5, 1.0] {
        let e = marschall_ensemble(&part, &ks, t, cfg.marschall_triples, cfg.seed, MarschallOptions::for_dim(cfg.dim))?;
        checks.push(Check::le(
            format!("marschall:t={t}:spread"),
            e.spread,
            MARSCHALL_SPREAD,
            format!("per-k constants {:?} around median {}", e.per_k, e.median),
        ));
        checks.push(Check::flag(format!("marschall:t={t}:finite"), e.all_finite, "no infinite or NaN ratio"));
        data.push(e);
    }
    Ok(SuiteReport { suite: Suite::Marschall.name().into(), checks, data: to_value(&data) })
}

fn inequality_checks(cases: &[crate::probes::InequalityCase]) -> Vec<Check> {
    let mut checks = Vec::new();
    for c in cases {
        checks.push(Check::le(
            format!("{}:refinement", c.label),
            c.drift.abs(),
            REFINEMENT_DRIFT,
            format!("C = {} -> {}", c.calibrated, c.refined),
        ));
        checks.push(Check::le(
            format!("{}:validation", c.label),
            c.validation_max,
            c.bound,
            format!("{} violations of 2 x calibrated constant", c.violations),
        ));
    }
    checks
}

fn inequality_options(cfg: &VerifyConfig) -> InequalityOptions {
    InequalityOptions {
        dim: cfg.dim,
        n_points: if cfg.dim == 1 { 128 } else { 64 },
        samples: cfg.inequality_samples,
        seed: cfg.seed,
        ..Default::default()
    }
}

pub const FS_CASES: [(f64, f64, f64); 3] = [(2.0, 2.0, 0.5), (1.5, 3.0, 1.0), (3.0, 1.5, 0.75)];

pub fn fefferman_stein(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let cases = fefferman_stein_suite(&FS_CASES, &inequality_options(cfg))?;
    Ok(SuiteReport { suite: Suite::FeffermanStein.name().into(), checks: inequality_checks(&cases), data: to_value(&cases) })
}

pub fn nikolskii(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let opts = inequality_options(cfg);
    let radii: &[i64] = if cfg.dim == 1 { &[4, 8, 16] } else { &[2, 4, 8] };
    let cases = nikolskii_suite(&[0.5, 0.75, 1.0], radii, &opts)?;
    Ok(SuiteReport { suite: Suite::Nikolskii.name().into(), checks: inequality_checks(&cases), data: to_value(&cases) })
}

/// Identity check used by the CLI `apply --oracle` path and the oracle suite
/// of the acceptance tests: relative `L²` distance between the
/// paradifferential total and the direct quadrature.
pub fn oracle_error(a: &Symbol, u: &GridFunction, part: &DyadicPartition) -> Result<f64> {
    let r = crate::paradiff::apply(a, u, part)?;
    let direct = crate::paradiff::direct_apply(a, u)?;
    r.total.rel_l2_error(&direct)
}

/// Coefficient of `θ` in `f` when `θ ≡ 1`: the mean of `f̂(0)/(2π)^n`.
pub fn constant_coefficient(f: &GridFunction) -> Complex64 {
    let g = f.grid();
    dft(f).coeffs()[0] / (2.0 * std::f64::consts::PI).powi(g.dim() as i32)
}
