use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use paradiff::grid::{lp_norm, TorusGrid};
use paradiff::lpdecomp::{build_partition, decompose as split, DyadicPartition};
use paradiff::paradiff::{apply as para_apply, direct_apply};
use paradiff::probes::{
    boundedness_probe, build_theta_family, counterexample_run, fefferman_stein_suite, harmonic_exact,
    marschall_ensemble, nikolskii_suite, normalized_random_input, write_growth_csv, InequalityOptions,
    MarschallOptions,
};
use paradiff::spaces::{norm as space_norm, write_norm_table_csv, NormRow};
use paradiff::symbols::named_symbol;
use paradiff::verify::{self, constant_coefficient, Suite, VerifyConfig};
use paradiff::io;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::inputs;

const ORACLE_TOLERANCE: f64 = 1e-8;

fn partition(c: &RunConfig, default: (usize, u32)) -> Result<DyadicPartition> {
    let (n, j) = c.grid(default);
    Ok(build_partition(TorusGrid::new(c.dim, n)?, j)?)
}

fn out_dir(c: &RunConfig) -> Result<Option<&Path>> {
    match &c.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn write_report<T: Serialize>(dir: Option<&Path>, c: &RunConfig, result: &T) -> Result<()> {
    if let Some(dir) = dir {
        io::write_json(&dir.join("report.json"), &json!({"config": c, "result": result}))?;
    }
    Ok(())
}

fn csv_file(dir: &Path, name: &str) -> Result<fs::File> {
    let path = dir.join(name);
    fs::File::create(&path).with_context(|| format!("creating {}", path.display()))
}

pub fn decompose(c: &RunConfig) -> Result<bool> {
    let part = partition(c, (1024, 8))?;
    let input = inputs::resolve(c.input.as_deref().unwrap_or("theta:N=2"), &part, c.seed)?;
    let blocks = split(&input.function, &part)?;
    let active = blocks.active(1e-10);
    let err = blocks.reconstruct().rel_l2_error(&input.function)?;
    let list: Vec<String> = active.iter().map(|j| j.to_string()).collect();
    println!("active blocks: j = {}", list.join(", "));
    println!("reconstruction error: {err:.3e}");
    let dir = out_dir(c)?;
    if let Some(dir) = dir {
        for (j, b) in blocks.blocks.iter().filter(|(j, _)| active.contains(j)) {
            io::write_grid_function_json(&dir.join(format!("block_{j}.json")), b)?;
        }
        let mut w = csv_file(dir, "partition.csv")?;
        part.write_csv(&mut w)?;
    }
    write_report(dir, c, &json!({"active_blocks": active, "reconstruction_error": err}))?;
    Ok(true)
}

#[derive(Serialize)]
struct ApplyResult {
    symbol: String,
    term_l2: [f64; 3],
    total_l2: f64,
    theta_coefficient: Option<(f64, f64)>,
    harmonic_exact: Option<String>,
    oracle_error: Option<f64>,
}

pub fn apply(c: &RunConfig) -> Result<bool> {
    let part = partition(c, (2048, 8))?;
    let a = named_symbol(&c.symbol, &part)?;
    let input = inputs::resolve(c.input.as_deref().unwrap_or("random"), &part, c.seed)?;
    let r = para_apply(&a, &input.function, &part)?;
    let l2 = |f: &paradiff::GridFunction| lp_norm(f, 2.0);
    let term_l2 = [l2(&r.term1)?, l2(&r.term2)?, l2(&r.term3)?];
    let total_l2 = l2(&r.total)?;
    println!("symbol {}: |a1 u| = {:.6e}, |a2 u| = {:.6e}, |a3 u| = {:.6e}, |total| = {total_l2:.6e}", a.name(), term_l2[0], term_l2[1], term_l2[2]);
    let mut theta_coefficient = None;
    let mut harmonic = None;
    if let Some(n) = input.theta {
        let z = constant_coefficient(&r.total);
        let h = harmonic_exact(n);
        println!("theta coefficient: {:.15} (harmonic sum {}/{})", z.re, h.numer(), h.denom());
        theta_coefficient = Some((z.re, z.im));
        harmonic = Some(format!("{}/{}", h.numer(), h.denom()));
    }
    let mut ok = true;
    let mut oracle_error = None;
    if c.oracle {
        let direct = direct_apply(&a, &input.function)?;
        let e = r.total.rel_l2_error(&direct)?;
        println!("paradiff vs direct: {e:.3e} (tolerance {ORACLE_TOLERANCE:e})");
        ok = e <= ORACLE_TOLERANCE;
        oracle_error = Some(e);
    }
    let dir = out_dir(c)?;
    if let Some(dir) = dir {
        io::write_json(&dir.join("result.json"), &r.to_doc())?;
    }
    let result = ApplyResult { symbol: a.name().into(), term_l2, total_l2, theta_coefficient, harmonic_exact: harmonic, oracle_error };
    write_report(dir, c, &result)?;
    if !ok {
        eprintln!("FAIL apply:oracle");
    }
    Ok(ok)
}

pub fn norm(c: &RunConfig) -> Result<bool> {
    let part = partition(c, (1024, 8))?;
    let spec = c.norm_spec()?;
    let label = c.input.clone().unwrap_or_else(|| "random".into());
    let input = inputs::resolve(&label, &part, c.seed)?;
    let value = space_norm(&input.function, &spec, &part)?;
    println!("{value:.15e}");
    let row = NormRow {
        family: label,
        parameter: input.theta.map(f64::from).unwrap_or(0.0),
        kind: spec.kind,
        s: spec.s,
        p: spec.p,
        q: spec.q,
        value,
    };
    let dir = out_dir(c)?;
    if let Some(dir) = dir {
        write_norm_table_csv(csv_file(dir, "norms.csv")?, std::slice::from_ref(&row))?;
    }
    write_report(dir, c, &row)?;
    Ok(true)
}

pub fn verify(c: &RunConfig) -> Result<bool> {
    let suite = Suite::parse(&c.suite)?;
    let mut cfg = VerifyConfig { dim: c.dim, seed: c.seed, twisted_c: c.twisted_c, symbols: c.verify_symbols.clone(), ..Default::default() };
    if c.n_points.is_some() || c.j_max.is_some() {
        let (n, j) = match (c.n_points, c.j_max) {
            (Some(n), Some(j)) => (n, j),
            _ => bail!("--N and --J must be given together for verify"),
        };
        cfg.grid = Some((n, j));
    }
    if let Some(s) = c.samples {
        cfg.marschall_triples = s;
        cfg.inequality_samples = s;
    }
    let reports = verify::run(suite, &cfg)?;
    let mut first_failure = None;
    for r in &reports {
        let passed = r.checks.iter().filter(|k| k.pass).count();
        println!("{}: {passed}/{} checks passed", r.suite, r.checks.len());
        if first_failure.is_none() {
            first_failure = r.first_failure().map(|f| (r.suite.clone(), f.clone()));
        }
    }
    let dir = out_dir(c)?;
    if let Some(dir) = dir {
        let mut w = csv::Writer::from_writer(csv_file(dir, "checks.csv")?);
        w.write_record(["suite", "id", "pass", "value", "bound", "detail"])?;
        for r in &reports {
            for k in &r.checks {
                w.write_record([&r.suite, &k.id, &k.pass.to_string(), &format!("{:e}", k.value), &format!("{:e}", k.bound), &k.detail])?;
            }
        }
        w.flush()?;
    }
    write_report(dir, c, &reports)?;
    match first_failure {
        Some((suite, f)) => {
            eprintln!("FAIL {suite}:{} (value {:e}, bound {:e}; {})", f.id, f.value, f.bound, f.detail);
            Ok(false)
        }
        None => Ok(true),
    }
}

pub fn counterexample(c: &RunConfig) -> Result<bool> {
    let part = partition(c, (16384, 12))?;
    let r = counterexample_run(c.symbol.d, &c.family, &c.t_list, &c.q_list, &part, 2..=8)?;
    for row in &r.rows {
        println!(
            "N = {}: sum 1/j = {} = {:.12}, identity error {:.2e}, pairing ratio {:.12}",
            row.n_family, row.harmonic_exact, row.harmonic, row.identity_error, row.pairing_ratio
        );
    }
    let dir = out_dir(c)?;
    if let Some(dir) = dir {
        let mut w = csv::Writer::from_writer(csv_file(dir, "norms.csv")?);
        for n in &r.norms {
            w.serialize(n)?;
        }
        w.flush()?;
        write_growth_csv(csv_file(dir, "growth_all.csv")?, &r.growth)?;
        for &q in &c.q_list {
            let name = if q.is_infinite() { "growth_q_inf.csv".to_string() } else { format!("growth_q{q}.csv") };
            let mut w = csv::Writer::from_writer(csv_file(dir, &name)?);
            w.write_record(["N", "ratio"])?;
            for g in r.growth.iter().filter(|g| g.q == q) {
                w.write_record([g.n_family.to_string(), g.ratio.to_string()])?;
            }
            w.flush()?;
        }
    }
    write_report(dir, c, &r)?;
    Ok(true)
}

pub fn probe(c: &RunConfig) -> Result<bool> {
    let dir = out_dir(c)?;
    match c.probe.as_str() {
        "marschall" => {
            let part = partition(c, if c.dim == 1 { (256, 6) } else { (64, 4) })?;
            let e = marschall_ensemble(&part, &c.k, c.t, c.samples.unwrap_or(50), c.seed, MarschallOptions::for_dim(c.dim))?;
            for (k, v) in &e.per_k {
                println!("k = {k}: sup ratio {v:.6e}");
            }
            println!("median {:.6e}, spread {:.3}", e.median, e.spread);
            if let Some(dir) = dir {
                let mut w = csv::Writer::from_writer(csv_file(dir, "marschall.csv")?);
                for t in &e.triples {
                    w.serialize(t)?;
                }
                w.flush()?;
            }
            write_report(dir, c, &e)?;
        }
        "boundedness" => {
            let part = partition(c, (2048, 9))?;
            let a = named_symbol(&c.symbol, &part)?;
            let spec = c.norm_spec()?;
            let inputs = match c.input.as_deref() {
                Some(s) if s.starts_with("theta") => {
                    build_theta_family(c.symbol.d, &c.family, 0, &part)?.members.into_iter().map(|(_, m)| m).collect()
                }
                _ => (0..c.samples.unwrap_or(5) as u64)
                    .map(|i| normalized_random_input(&spec.with_s(spec.s + c.symbol.d), &part, c.seed + i))
                    .collect::<paradiff::Result<Vec<_>>>()?,
            };
            let r = boundedness_probe(&a, &spec, c.symbol.d, &inputs, &part)?;
            println!("sup ratio {:.6e}: {}", r.sup_ratio, r.diagnosis);
            if let Some(dir) = dir {
                let mut w = csv::Writer::from_writer(csv_file(dir, "ratios.csv")?);
                w.write_record(["input", "ratio"])?;
                for (i, v) in r.ratios.iter().enumerate() {
                    w.write_record([i.to_string(), v.to_string()])?;
                }
                w.flush()?;
            }
            write_report(dir, c, &r)?;
        }
        "fefferman-stein" | "nikolskii" => {
            let opts = InequalityOptions {
                dim: c.dim,
                n_points: c.n_points.unwrap_or(if c.dim == 1 { 128 } else { 64 }),
                samples: c.samples.unwrap_or(100),
                seed: c.seed,
                ..Default::default()
            };
            let cases = if c.probe == "nikolskii" {
                nikolskii_suite(&c.t_list.iter().cloned().filter(|t| *t <= 1.0).collect::<Vec<_>>(), &[4, 8, 16], &opts)?
            } else {
                fefferman_stein_suite(&[(c.p, c.q, c.t)], &opts)?
            };
            for k in &cases {
                println!("{}: C = {:.6e} (refined {:.6e}, validation max {:.6e})", k.label, k.calibrated, k.refined, k.validation_max);
            }
            if let Some(dir) = dir {
                let mut w = csv::Writer::from_writer(csv_file(dir, "constants.csv")?);
                for k in &cases {
                    w.serialize(k)?;
                }
                w.flush()?;
            }
            write_report(dir, c, &cases)?;
        }
        other => bail!("unknown probe {other:?} (marschall, boundedness, fefferman-stein, nikolskii)"),
    }
    Ok(true)
}
