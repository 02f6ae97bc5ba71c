mod commands;
mod config;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use paradiff::spaces::NormKind;

use crate::config::RunConfig;

#[derive(Parser)]
#[command(name = "paradiff", version, about = "Paradifferential experiments on the periodic torus")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "PARADIFF_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split an input into its dyadic blocks.
    Decompose(Common),
    /// Apply a symbol through the paradifferential series.
    Apply(Common),
    /// Besov, Triebel-Lizorkin or homogeneous Besov norm of an input.
    Norm(Common),
    /// Run a verification suite; exits nonzero on the first failed claim.
    Verify(Common),
    /// The θ_N family against the Ching symbol.
    Counterexample(Common),
    /// marschall | boundedness | fefferman-stein | nikolskii.
    Probe(Common),
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    paradiff::io::exponent::parse(s)
}

fn parse_kind(s: &str) -> Result<NormKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "f" | "triebel-lizorkin" => Ok(NormKind::TriebelLizorkin),
        "b" | "besov" => Ok(NormKind::Besov),
        "hom" | "homogeneous-besov" => Ok(NormKind::HomogeneousBesov),
        _ => Err(format!("unknown norm kind {s:?} (F, B, hom)")),
    }
}

#[derive(Args, Default)]
struct Common {
    /// JSON run configuration; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    /// Grid points per axis.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Top dyadic block J_max.
    #[arg(long = "J")]
    j: Option<u32>,
    /// Symbol family (identity, zero, multiplier, bessel, smooth, ching, reduced, nonlinear, random, cutoff).
    #[arg(long)]
    symbol: Option<String>,
    /// Symbol order d.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, value_parser = parse_exponent)]
    p: Option<f64>,
    #[arg(long, value_parser = parse_exponent)]
    q: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Norm kind: F, B or hom.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<NormKind>,
    /// theta:N=2, random[:seed=S][:radius=R], constant[:c=V], mode:k=K or a file.
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compare against the direct quadrature.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long = "twisted-C")]
    twisted_c: Option<f64>,
    /// θ-family indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    family: Option<Vec<u32>>,
    #[arg(long = "q-list", value_delimiter = ',', value_parser = parse_exponent)]
    q_list: Option<Vec<f64>>,
    #[arg(long = "t-list", value_delimiter = ',', value_parser = parse_exponent)]
    t_list: Option<Vec<f64>>,
    #[arg(long)]
    probe: Option<String>,
    /// Dyadic levels k, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    /// Ensemble size for probes and suites.
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn into_config(self, command: &str) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => config::load(path)?,
            None => RunConfig::default(),
        };
        c.command = command.to_string();
        macro_rules! set {
            ($field:ident, $target:expr) => {
                if let Some(v) = self.$field {
                    $target = v;
                }
            };
        }
        set!(dim, c.dim);
        if self.n.is_some() {
            c.n_points = self.n;
        }
        if self.j.is_some() {
            c.j_max = self.j;
        }
        if let Some(name) = self.symbol {
            if command == "verify" {
                c.verify_symbols = Some(name.split(',').map(|s| s.trim().to_string()).collect());
            } else {
                c.symbol.name = name;
            }
        }
        set!(d, c.symbol.d);
        set!(s, c.s);
        set!(p, c.p);
        set!(q, c.q);
        set!(t, c.t);
        set!(kind, c.kind);
        if self.input.is_some() {
            c.input = self.input;
        }
        set!(seed, c.seed);
        if self.seed.is_some() {
            c.symbol.seed = c.seed;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        c.oracle |= self.oracle;
        set!(suite, c.suite);
        set!(twisted_c, c.twisted_c);
        c.symbol.c = c.twisted_c;
        set!(family, c.family);
        set!(q_list, c.q_list);
        set!(t_list, c.t_list);
        set!(probe, c.probe);
        set!(k, c.k);
        if self.samples.is_some() {
            c.samples = self.samples;
        }
        c.validate()?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Decompose(c) => c.into_config("decompose").and_then(|c| commands::decompose(&c)),
        Command::Apply(c) => c.into_config("apply").and_then(|c| commands::apply(&c)),
        Command::Norm(c) => c.into_config("norm").and_then(|c| commands::norm(&c)),
        Command::Verify(c) => c.into_config("verify").and_then(|c| commands::verify(&c)),
        Command::Counterexample(c) => c.into_config("counterexample").and_then(|c| commands::counterexample(&c)),
        Command::Probe(c) => c.into_config("probe").and_then(|c| commands::probe(&c)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
