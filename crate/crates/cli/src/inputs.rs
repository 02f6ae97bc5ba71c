//! Input functions named on the command line:
//! `theta:N=2`, `random[:seed=S][:radius=R]`, `constant[:c=V]`, `mode:k=K`
//! (the mode `e^{iK x_n}`), or a path to a JSON/PDGF grid-function file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use paradiff::grid::GridFunction;
use paradiff::lpdecomp::{DyadicPartition, PLATEAU_END};
use paradiff::probes::build_theta_family;
use paradiff::{io, random, Complex64};

pub struct Input {
    pub function: GridFunction,
    /// `Some(N)` for members of the θ family.
    pub theta: Option<u32>,
}

fn params(rest: &str) -> Result<BTreeMap<String, String>> {
    rest.split(':')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {kv:?}"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn get<T: std::str::FromStr>(p: &BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match p.get(key) {
        Some(v) => v.parse().map_err(|e| anyhow!("bad value for {key}: {e}")),
        None => default.ok_or_else(|| anyhow!("missing parameter {key}")),
    }
}

pub fn resolve(spec: &str, part: &DyadicPartition, seed: u64) -> Result<Input> {
    let g = *part.grid();
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let function = match head {
        "theta" => {
            let p = params(rest)?;
            let n: u32 = get(&p, "N", None)?;
            let d: f64 = get(&p, "d", Some(0.0))?;
            let fam = build_theta_family(d, &[n], 0, part)?;
            return Ok(Input { function: fam.members[0].1.clone(), theta: Some(n) });
        }
        "random" => {
            let p = params(rest)?;
            let top = PLATEAU_END * 2f64.powi(part.j_max() as i32);
            random::random_function(g, get(&p, "radius", Some(top))?, 0.5, get(&p, "seed", Some(seed))?)
        }
        "constant" => {
            let p = params(rest)?;
            GridFunction::constant(g, Complex64::new(get(&p, "c", Some(1.0))?, 0.0))
        }
        "mode" => {
            let p = params(rest)?;
            GridFunction::mode(g, g.e_n(get(&p, "k", None)?))
        }
        _ => {
            let path = Path::new(spec);
            if !path.exists() {
                bail!("input {spec:?} is neither a generator (theta, random, constant, mode) nor a file");
            }
            let f = io::read_grid_function(path).with_context(|| format!("reading {spec}"))?;
            if f.grid() != &g {
                bail!("input grid {}x{} does not match the run grid {}x{}", f.grid().dim(), f.grid().n(), g.dim(), g.n());
            }
            f
        }
    };
    Ok(Input { function, theta: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use paradiff::grid::TorusGrid;
    use paradiff::lpdecomp::build_partition;

    #[test]
    fn generators() {
        let p = build_partition(TorusGrid::new(1, 256).unwrap(), 4).unwrap();
        assert_eq!(resolve("theta:N=2", &p, 0).unwrap().theta, Some(2));
        assert!(resolve("theta", &p, 0).is_err());
        let c = resolve("constant:c=3", &p, 0).unwrap().function;
        assert_eq!(c.values()[5], Complex64::new(3.0, 0.0));
        assert!(resolve("mode:k=4", &p, 0).is_ok());
        let a = resolve("random:seed=4", &p, 0).unwrap().function;
        let b = resolve("random", &p, 4).unwrap().function;
        assert_eq!(a.values(), b.values());
        assert!(resolve("/no/such/file", &p, 0).is_err());
    }
}
