//! Construction of the shipped symbol families by name.

use serde::{Deserialize, Serialize};

use super::*;

pub const SYMBOL_NAMES: [&str; 10] =
    ["identity", "zero", "multiplier", "bessel", "smooth", "ching", "reduced", "nonlinear", "random", "cutoff"];

/// Name plus the parameters any family may use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub name: String,
    /// Order for `multiplier`, `bessel`, `smooth`, `ching`.
    #[serde(default)]
    pub d: f64,
    /// Seed for `reduced`, `nonlinear`, `random`, `cutoff`.
    #[serde(default)]
    pub seed: u64,
    /// Twisted constant for `cutoff`.
    #[serde(default = "default_c")]
    pub c: f64,
}

fn default_c() -> f64 {
    2.0
}

impl SymbolSpec {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), d: 0.0, seed: 0, c: default_c() }
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }
}

/// Multipliers for the `reduced` family: five random trigonometric
/// polynomials of degree ≤ 6.
pub fn reduced_multipliers(grid: TorusGrid, seed: u64) -> Vec<GridFunction> {
    (0..5u64).map(|j| random::random_function(grid, 6.0, 1.0, seed.wrapping_mul(97).wrapping_add(j))).collect()
}

pub fn named_symbol(spec: &SymbolSpec, part: &DyadicPartition) -> Result<Symbol> {
    let grid = *part.grid();
    let d = spec.d;
    Ok(match spec.name.as_str() {
        "identity" => identity_symbol(grid),
        "zero" => zero_symbol(grid),
        "multiplier" => multiplier_symbol(grid, d),
        "bessel" => bessel_symbol(grid, d),
        "smooth" => smooth_symbol(grid, d),
        "ching" => ching_symbol(d, part),
        "reduced" => {
            let ms = reduced_multipliers(grid, spec.seed);
            let ms = if ms.len() > part.j_max() as usize + 1 { ms[..part.j_max() as usize + 1].to_vec() } else { ms };
            reduced_symbol(&ms, part)?
        }
        "nonlinear" => {
            let top = crate::lpdecomp::PLATEAU_END * 2f64.powi(part.j_max() as i32);
            let u = random::random_real_function(grid, top, 1.0, spec.seed);
            let u = u.scale(Complex64::new(1.0 / u.max_abs().max(f64::MIN_POSITIVE), 0.0));
            nonlinear_symbol(&|v: f64| v.cos(), &u, part)?
        }
        "random" => random_symbol(grid, spec.seed),
        "cutoff" => twisted_cutoff_symbol(part, spec.c, spec.seed)?,
        other => {
            return Err(Error::Inadmissible(format!("unknown symbol {other:?}; known: {}", SYMBOL_NAMES.join(", "))))
        }
    })
}
