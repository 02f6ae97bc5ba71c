use std::process::ExitCode;
use std::time::{Duration, Instant};

use paradiff::lpdecomp::PLATEAU_END;
use paradiff::probes::build_theta_family;
use paradiff::spaces::{hom_besov_norm_in_xi, norm, NormSpec, SampledRow};
use paradiff::symbols::{ching_symbol, identity_symbol, multiplier_symbol, named_symbol, smooth_symbol, SymbolSpec};
use paradiff::verify::{self, Suite, SuiteReport, VerifyConfig};
use paradiff::{apply, build_partition, direct_apply, lp_norm, random, Complex64, DyadicPartition, GridFunction, TorusGrid};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn part(dim: usize, n: usize, j: u32) -> DyadicPartition {
    build_partition(TorusGrid::new(dim, n).unwrap(), j).unwrap()
}

fn resolved(p: &DyadicPartition, seed: u64) -> GridFunction {
    random::random_function(*p.grid(), PLATEAU_END * 2f64.powi(p.j_max() as i32), 0.5, seed)
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn partition_of_unity() -> Outcome {
    let start = Instant::now();
    let p = part(1, 4096, 10);
    let g = *p.grid();
    let phis: Vec<&[f64]> = (0..=11).map(|j| p.phi(j).unwrap()).collect();
    let mut unity: f64 = 0.0;
    let mut outside = 0usize;
    for i in 0..g.len() {
        let r = g.freq_norm(i);
        if r <= 1024.0 {
            let s: f64 = phis[..=10].iter().map(|f| f[i]).sum();
            unity = unity.max((s - 1.0).abs());
        }
        for (j, f) in phis.iter().enumerate().skip(1) {
            let scale = 2f64.powi(j as i32);
            if f[i] != 0.0 && (r < 0.55 * scale || r > 1.3 * scale) {
                outside += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        unity <= 1e-12 && outside == 0 && within(elapsed, Duration::from_secs(1)),
        format!("sup |sum Phi_j - 1| = {unity:.2e}, {outside} values outside [11/20, 13/10]2^j, {elapsed:.2?}"),
    )
}

fn identity_reproduces() -> Outcome {
    let start = Instant::now();
    let p = part(1, 2048, 8);
    let a = identity_symbol(*p.grid());
    let worst = (0..20)
        .map(|s| {
            let u = resolved(&p, 100 + s);
            apply(&a, &u, &p).unwrap().total.rel_l2_error(&u).unwrap()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(worst <= 1e-10 && within(elapsed, Duration::from_secs(10)), format!("max rel error {worst:.2e} over 20 inputs, {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let p = part(1, 2048, 9);
    let g = *p.grid();
    let symbols = [
        identity_symbol(g),
        multiplier_symbol(g, 0.0),
        smooth_symbol(g, 0.0),
        named_symbol(&SymbolSpec::new("reduced").with_seed(21), &p).unwrap(),
        ching_symbol(0.0, &p),
        ching_symbol(1.0, &p),
        ching_symbol(-1.0, &p),
    ];
    let mut worst: (f64, String) = (0.0, String::new());
    for (i, a) in symbols.iter().enumerate() {
        let u = resolved(&p, 200 + i as u64);
        let e = apply(a, &u, &p).unwrap().total.rel_l2_error(&direct_apply(a, &u).unwrap()).unwrap();
        if e >= worst.0 {
            worst = (e, a.name().to_string());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst.0 <= 1e-8 && within(elapsed, Duration::from_secs(120)),
        format!("max rel error {:.2e} ({}) over {} symbols, {elapsed:.2?}", worst.0, worst.1, symbols.len()),
    )
}

fn cos_test_function(g: TorusGrid) -> GridFunction {
    let n = g.last_axis();
    GridFunction::from_fn(g, |x| Complex64::new(x[n].cos().exp(), 0.0)).unwrap()
}

fn ching_identity() -> Outcome {
    let start = Instant::now();
    let p = part(1, 65536, 12);
    let fam = build_theta_family(0.0, &[2], 0, &p).unwrap();
    let a = ching_symbol(0.0, &p);
    let out = apply(&a, &fam.members[0].1, &p).unwrap().total;
    let h = 1.0 / 2.0 + 1.0 / 3.0 + 1.0 / 4.0;
    let expected = fam.theta.scale(Complex64::new(h, 0.0));
    let err = out.rel_l2_error(&expected).unwrap();
    let phi = cos_test_function(*p.grid());
    let ratio = out.pairing(&phi).unwrap() / fam.theta.pairing(&phi).unwrap();
    let pair_err = (ratio - Complex64::new(13.0 / 12.0, 0.0)).norm();
    let elapsed = start.elapsed();
    outcome(
        err <= 1e-10 && pair_err <= 1e-9 && within(elapsed, Duration::from_secs(120)),
        format!("rel error {err:.2e}, pairing {:.12} (off by {pair_err:.2e}), {elapsed:.2?}", ratio.re),
    )
}

fn power_sum(n: u32, q: f64) -> f64 {
    let js = n..=n * n;
    if q.is_infinite() {
        1.0 / n as f64
    } else {
        js.map(|j| (j as f64).powf(-q)).sum::<f64>().powf(1.0 / q)
    }
}

fn harmonic(n: u32) -> f64 {
    (n..=n * n).map(|j| 1.0 / j as f64).sum()
}

struct ThetaRow {
    n: u32,
    t: f64,
    q: f64,
    rel_error: f64,
    ratio: f64,
    reference: f64,
}

fn theta_rows() -> Vec<ThetaRow> {
    let p = part(1, 16384, 12);
    let a = ching_symbol(0.0, &p);
    let fam = build_theta_family(0.0, &[2, 3], 0, &p).unwrap();
    let phi = cos_test_function(*p.grid());
    let mut rows = Vec::new();
    for (n, member) in &fam.members {
        let out = apply(&a, member, &p).unwrap().total;
        let pairing = (out.pairing(&phi).unwrap() / fam.theta.pairing(&phi).unwrap()).re;
        for t in [1.0, 2.0, f64::INFINITY] {
            let theta_t = lp_norm(&fam.theta, t).unwrap();
            for q in [1.0, 2.0, f64::INFINITY] {
                let spec = if t.is_infinite() { NormSpec::besov(0.0, t, q) } else { NormSpec::triebel_lizorkin(0.0, t, q) }.unwrap();
                let measured = norm(member, &spec, &p).unwrap();
                let closed = theta_t * power_sum(*n, q);
                rows.push(ThetaRow {
                    n: *n,
                    t,
                    q,
                    rel_error: (measured - closed).abs() / closed,
                    ratio: pairing / (measured / theta_t),
                    reference: harmonic(*n) / power_sum(*n, q),
                });
            }
        }
    }
    rows
}

fn closed_form_norms(rows: &[ThetaRow]) -> Outcome {
    let worst = rows.iter().max_by(|a, b| a.rel_error.total_cmp(&b.rel_error)).unwrap();
    outcome(
        worst.rel_error <= 1e-6,
        format!("max rel error {:.2e} (N={}, t={}, q={}) over {} norms", worst.rel_error, worst.n, worst.t, worst.q, rows.len()),
    )
}

fn dichotomy(rows: &[ThetaRow]) -> Outcome {
    let worst = rows.iter().map(|r| (r.ratio - r.reference).abs() / r.reference).fold(0.0, f64::max);
    let pick = |n: u32, q: f64| rows.iter().find(|r| r.n == n && r.q == q && r.t == 2.0).unwrap().ratio;
    let increasing = pick(3, 2.0) > pick(2, 2.0);
    let flat = (pick(3, 1.0) - pick(2, 1.0)).abs() <= 1e-6;
    outcome(
        worst <= 1e-6 && increasing && flat,
        format!(
            "max rel deviation {worst:.2e}; q=2: {:.6} -> {:.6}; q=1: {:.6} -> {:.6}",
            pick(2, 2.0),
            pick(3, 2.0),
            pick(2, 1.0),
            pick(3, 1.0)
        ),
    )
}

fn dyadic_scaling() -> Outcome {
    let b = |xi: [f64; 2]| {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1];
        Complex64::new((-8.0 * r2).exp() * (1.0 + xi[0]), 0.0)
    };
    let mut worst: f64 = 0.0;
    for (dim, m) in [(1usize, 512usize), (2, 64)] {
        let base = SampledRow::from_fn(dim, m, 8.0, b).unwrap();
        for t in [0.5, 0.75, 1.0] {
            let s = dim as f64 / t;
            let v0 = hom_besov_norm_in_xi(&base, s, 1.0, t).unwrap();
            for k in 1..=3 {
                let scale = 2f64.powi(k);
                let row = SampledRow::from_fn(dim, m, 8.0 / scale, |xi| b([scale * xi[0], scale * xi[1]])).unwrap();
                let vk = hom_besov_norm_in_xi(&row, s, 1.0, t).unwrap();
                let expected = 2f64.powf(k as f64 * (s - dim as f64)) * v0;
                worst = worst.max((vk - expected).abs() / expected);
            }
        }
    }
    outcome(worst <= 1e-9, format!("max rel deviation {worst:.2e} over dims 1, 2, t in {{0.5, 0.75, 1}}, k in {{1, 2, 3}}"))
}

fn suite_outcome(reports: &[SuiteReport], names: &[&str]) -> Outcome {
    let mut total = 0;
    let mut failed = Vec::new();
    for r in reports.iter().filter(|r| names.contains(&r.suite.as_str())) {
        total += r.checks.len();
        failed.extend(r.checks.iter().filter(|c| !c.pass).map(|c| format!("{}:{}", r.suite, c.id)));
    }
    let detail = match failed.first() {
        None => format!("{total} checks passed"),
        Some(first) => format!("{} of {total} checks failed, first {first}", failed.len()),
    };
    outcome(failed.is_empty() && total > 0, detail)
}

fn run_all(threads: usize) -> (Vec<SuiteReport>, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let start = Instant::now();
    let reports = pool.install(|| verify::run(Suite::All, &VerifyConfig::default())).unwrap();
    (reports, start.elapsed())
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id: u32, name: &'static str, o: Outcome| {
        println!("{} {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "partition of unity", partition_of_unity());
    record(2, "identity symbol", identity_reproduces());
    record(3, "oracle equivalence", oracle_equivalence());
    record(4, "Ching identity", ching_identity());
    let rows = theta_rows();
    record(5, "closed-form norms", closed_form_norms(&rows));
    record(6, "dichotomy table", dichotomy(&rows));
    let (one, t1) = run_all(1);
    record(7, "support rule", suite_outcome(&one, &["support-rule"]));
    record(8, "spectral inclusions", suite_outcome(&one, &["inclusions"]));
    record(9, "dyadic scaling", dyadic_scaling());
    record(10, "Marschall ratio", suite_outcome(&one, &["marschall"]));
    record(11, "Fefferman-Stein / Nikolskii", suite_outcome(&one, &["fefferman-stein", "nikolskii"]));
    let (eight, t8) = run_all(8);
    let a = serde_json::to_string(&one).unwrap();
    let b = serde_json::to_string(&eight).unwrap();
    record(
        12,
        "determinism",
        outcome(
            a == b && within(t1, Duration::from_secs(900)),
            format!("reports {} across 1 and 8 threads ({} bytes), suite runtime {t1:.1?} / {t8:.1?}", if a == b { "identical" } else { "differ" }, a.len()),
        ),
    );
    let failed: Vec<String> = results.iter().filter(|r| !r.2.pass).map(|r| r.0.to_string()).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
