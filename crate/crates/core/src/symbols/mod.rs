//! Symbols `a(x, η)` on grid × lattice and the concrete families.
//!
//! A symbol is an evaluator at (grid point, real frequency). Families with a
//! known spectral form also carry a separable structure
//! `a(x, η) = Σ_t m_t(x) p_t(η)`, where each `m_t` is stored both as samples
//! and as exact Fourier coefficients; the paradifferential evaluator uses it
//! to act term by term.

pub mod jet;
pub mod named;
pub mod partial_ft;
pub mod seminorm;

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{dft, idft, Freq, GridFunction, SpectralFunction, TorusGrid};
use crate::io::SampledSymbolDoc;
use crate::lpdecomp::DyadicPartition;
use crate::quadrature::GaussLegendre;
use crate::random;

pub use named::{named_symbol, reduced_multipliers, SymbolSpec, SYMBOL_NAMES};
pub use partial_ft::{partial_ft_x, twisted_diagonal_check, PartialFt, TwistedReport};
pub use seminorm::{seminorm, SeminormOptions, SeminormReport};

/// `(x index, η) ↦ a(x, η)`.
pub type EvalFn = Arc<dyn Fn(usize, [f64; 2]) -> Complex64 + Send + Sync>;
/// `(x index, η lattice index) ↦ a(x, η)`.
pub type LatticeFn = Arc<dyn Fn(usize, usize) -> Complex64 + Send + Sync>;
/// `η ↦ p(η)`.
pub type ProfileFn = Arc<dyn Fn([f64; 2]) -> Complex64 + Send + Sync>;
/// `(x index, η, β, α) ↦ ∂^β_x ∂^α_η a(x, η)`.
pub type DerivFn = Arc<dyn Fn(usize, [f64; 2], [u32; 2], [u32; 2]) -> Complex64 + Send + Sync>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn japanese(eta: [f64; 2]) -> f64 {
    (1.0 + eta[0] * eta[0] + eta[1] * eta[1]).sqrt()
}

fn radius(eta: [f64; 2]) -> f64 {
    (eta[0] * eta[0] + eta[1] * eta[1]).sqrt()
}

fn lattice_eta(grid: &TorusGrid, idx: usize) -> [f64; 2] {
    let f = grid.freq_of(idx);
    [f[0] as f64, f[1] as f64]
}

/// One term `m(x) p(η)` of a separable symbol.
#[derive(Clone)]
pub struct SeparableTerm {
    x_values: GridFunction,
    x_spectrum: SpectralFunction,
    profile: ProfileFn,
    lattice: Vec<Complex64>,
}

impl SeparableTerm {
    /// Term with `m̂ = dft(m)` and `p` sampled on the lattice.
    pub fn new(x_values: GridFunction, profile: ProfileFn) -> Self {
        let grid = *x_values.grid();
        let lattice = (0..grid.len()).map(|i| profile(lattice_eta(&grid, i))).collect();
        let x_spectrum = dft(&x_values);
        Self { x_values, x_spectrum, profile, lattice }
    }

    /// Term with independently supplied coefficients and lattice samples.
    pub fn from_parts(
        x_values: GridFunction,
        x_spectrum: SpectralFunction,
        profile: ProfileFn,
        lattice: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(lattice.len(), x_values.grid().len());
        Self { x_values, x_spectrum, profile, lattice }
    }

    /// Term whose `x`-part is the single mode `c·e^{ix·ζ}`.
    pub fn mode(grid: TorusGrid, zeta: Freq, c: Complex64, profile: ProfileFn, lattice: Vec<Complex64>) -> Self {
        let x_values = GridFunction::mode(grid, zeta).scale(c);
        let cell = (2.0 * PI).powi(grid.dim() as i32);
        let x_spectrum = SpectralFunction::from_modes(grid, &[(zeta, c * cell)]).expect("finite coefficient");
        Self { x_values, x_spectrum, profile, lattice }
    }

    pub fn x_values(&self) -> &GridFunction {
        &self.x_values
    }

    pub fn x_spectrum(&self) -> &SpectralFunction {
        &self.x_spectrum
    }

    pub fn profile(&self, eta: [f64; 2]) -> Complex64 {
        (self.profile)(eta)
    }

    pub fn lattice(&self) -> &[Complex64] {
        &self.lattice
    }
}

#[derive(Clone)]
pub struct Derivatives {
    pub f: DerivFn,
    pub max_l: u32,
    pub max_m: u32,
}

#[derive(Clone)]
pub struct Symbol {
    name: String,
    order: f64,
    grid: TorusGrid,
    eval: EvalFn,
    lattice: Option<LatticeFn>,
    derivs: Option<Derivatives>,
    structure: Option<Arc<Vec<SeparableTerm>>>,
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("grid", &self.grid)
            .field("terms", &self.structure.as_ref().map(|s| s.len()))
            .finish()
    }
}

impl Symbol {
    pub fn from_fn(name: impl Into<String>, order: f64, grid: TorusGrid, eval: EvalFn) -> Self {
        Self { name: name.into(), order, grid, eval, lattice: None, derivs: None, structure: None }
    }

    pub fn from_terms(name: impl Into<String>, order: f64, grid: TorusGrid, terms: Vec<SeparableTerm>) -> Self {
        let terms = Arc::new(terms);
        let t = terms.clone();
        let eval: EvalFn = Arc::new(move |x, eta| {
            let mut acc = ZERO;
            for term in t.iter() {
                acc += term.x_values.values()[x] * term.profile(eta);
            }
            acc
        });
        Self { name: name.into(), order, grid, eval, lattice: None, derivs: None, structure: Some(terms) }
    }

    pub fn with_derivatives(mut self, f: DerivFn, max_l: u32, max_m: u32) -> Self {
        self.derivs = Some(Derivatives { f, max_l, max_m });
        self
    }

    pub fn with_lattice(mut self, f: LatticeFn) -> Self {
        self.lattice = Some(f);
        self
    }

    /// Same evaluator without the separable structure, forcing generic code paths.
    pub fn without_structure(&self) -> Self {
        let mut s = self.clone();
        if let Some(terms) = s.structure.take() {
            let lat: LatticeFn = Arc::new(move |x, e| {
                let mut acc = ZERO;
                for t in terms.iter() {
                    acc += t.x_values.values()[x] * t.lattice[e];
                }
                acc
            });
            s.lattice = Some(lat);
            s.name = format!("{}(unstructured)", s.name);
        }
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn structure(&self) -> Option<&[SeparableTerm]> {
        self.structure.as_deref().map(|v| v.as_slice())
    }

    pub fn derivatives(&self) -> Option<&Derivatives> {
        self.derivs.as_ref()
    }

    pub fn eval(&self, x: usize, eta: [f64; 2]) -> Complex64 {
        (self.eval)(x, eta)
    }

    /// `a(x, η)` at a lattice frequency given by storage index.
    pub fn eval_lattice(&self, x: usize, eta_idx: usize) -> Complex64 {
        if let Some(terms) = &self.structure {
            let mut acc = ZERO;
            for t in terms.iter() {
                acc += t.x_values.values()[x] * t.lattice[eta_idx];
            }
            return acc;
        }
        if let Some(f) = &self.lattice {
            return f(x, eta_idx);
        }
        (self.eval)(x, lattice_eta(&self.grid, eta_idx))
    }

    /// `c·a`.
    pub fn scaled(&self, c: Complex64) -> Self {
        match &self.structure {
            Some(terms) => {
                let terms = terms
                    .iter()
                    .map(|t| SeparableTerm {
                        x_values: t.x_values.scale(c),
                        x_spectrum: SpectralFunction::from_vec_unchecked(
                            *t.x_spectrum.grid(),
                            t.x_spectrum.coeffs().iter().map(|z| z * c).collect(),
                        ),
                        profile: t.profile.clone(),
                        lattice: t.lattice.clone(),
                    })
                    .collect();
                let mut s = Self::from_terms(self.name.clone(), self.order, self.grid, terms);
                s.derivs = self.derivs.as_ref().map(|d| {
                    let f = d.f.clone();
                    Derivatives { f: Arc::new(move |x, e, b, a| f(x, e, b, a) * c), max_l: d.max_l, max_m: d.max_m }
                });
                s
            }
            None => {
                let e = self.eval.clone();
                let mut s = Self::from_fn(self.name.clone(), self.order, self.grid, Arc::new(move |x, eta| e(x, eta) * c));
                if let Some(l) = &self.lattice {
                    let l = l.clone();
                    s.lattice = Some(Arc::new(move |x, i| l(x, i) * c));
                }
                s
            }
        }
    }

    /// `a(x, η)·χ(η)` for a real `η`-cutoff; the structure is kept.
    pub fn times_profile(&self, name: &str, chi: ProfileFn) -> Self {
        let grid = self.grid;
        match &self.structure {
            Some(terms) => {
                let terms = terms
                    .iter()
                    .map(|t| {
                        let p = t.profile.clone();
                        let c = chi.clone();
                        let profile: ProfileFn = Arc::new(move |eta| p(eta) * c(eta));
                        let lattice =
                            t.lattice.iter().enumerate().map(|(i, v)| v * chi(lattice_eta(&grid, i))).collect();
                        SeparableTerm::from_parts(t.x_values.clone(), t.x_spectrum.clone(), profile, lattice)
                    })
                    .collect();
                Self::from_terms(format!("{}*{}", self.name, name), self.order, grid, terms)
            }
            None => {
                let e = self.eval.clone();
                let c = chi.clone();
                let s = Self::from_fn(
                    format!("{}*{}", self.name, name),
                    self.order,
                    grid,
                    Arc::new(move |x, eta| e(x, eta) * c(eta)),
                );
                let me = self.clone();
                s.with_lattice(Arc::new(move |x, i| me.eval_lattice(x, i) * chi(lattice_eta(&grid, i))))
            }
        }
    }

    /// Largest `|eval − structure|` over a strided sample of grid × lattice.
    pub fn structure_mismatch(&self, stride: usize) -> f64 {
        let Some(terms) = &self.structure else { return 0.0 };
        let stride = stride.max(1);
        let from_spectrum: Vec<GridFunction> = terms.iter().map(|t| idft(&t.x_spectrum)).collect();
        let mut worst: f64 = 0.0;
        for x in (0..self.grid.len()).step_by(stride) {
            for e in (0..self.grid.len()).step_by(stride) {
                let via_eval = (self.eval)(x, lattice_eta(&self.grid, e));
                let mut via_terms = ZERO;
                for (t, m) in terms.iter().zip(&from_spectrum) {
                    via_terms += m.values()[x] * t.lattice[e];
                }
                worst = worst.max((via_eval - via_terms).norm());
            }
        }
        worst
    }
}

fn constant_term(grid: TorusGrid, profile: ProfileFn) -> SeparableTerm {
    let lattice = (0..grid.len()).map(|i| profile(lattice_eta(&grid, i))).collect();
    SeparableTerm::mode(grid, [0, 0], ONE, profile, lattice)
}

const PROFILE_DERIV_ORDER: u32 = 6;

/// `a ≡ 1`.
pub fn identity_symbol(grid: TorusGrid) -> Symbol {
    let term = constant_term(grid, Arc::new(|_| ONE));
    Symbol::from_terms("identity", 0.0, grid, vec![term]).with_derivatives(
        Arc::new(|_, _, b, a| if b == [0, 0] && a == [0, 0] { ONE } else { ZERO }),
        PROFILE_DERIV_ORDER,
        PROFILE_DERIV_ORDER,
    )
}

/// `a ≡ 0`.
pub fn zero_symbol(grid: TorusGrid) -> Symbol {
    Symbol::from_terms("zero", 0.0, grid, Vec::new())
        .with_derivatives(Arc::new(|_, _, _, _| ZERO), PROFILE_DERIV_ORDER, PROFILE_DERIV_ORDER)
}

fn multiplier_jet(eta: [f64; 2], dim: usize, d: f64, order: usize) -> jet::Jet {
    let sq = jet::japanese_sq(eta, dim, order);
    let last = jet::Jet::variable(eta[dim - 1], dim - 1, order);
    sq.powf(-0.5).mul(&last).add_const(2.0).mul(&sq.powf(d / 2.0))
}

/// The `x`-independent symbol `(2 + η_n/⟨η⟩)⟨η⟩^d` in `S^d_{1,0}`.
pub fn multiplier_symbol(grid: TorusGrid, d: f64) -> Symbol {
    let n = grid.last_axis();
    let profile: ProfileFn = Arc::new(move |eta| {
        let j = japanese(eta);
        real((2.0 + eta[n] / j) * j.powf(d))
    });
    let dim = grid.dim();
    Symbol::from_terms(format!("multiplier(d={d})"), d, grid, vec![constant_term(grid, profile)]).with_derivatives(
        Arc::new(move |_, eta, b, a| {
            if b != [0, 0] {
                return ZERO;
            }
            real(multiplier_jet(eta, dim, d, (a[0] + a[1]) as usize).derivative(a))
        }),
        PROFILE_DERIV_ORDER,
        PROFILE_DERIV_ORDER,
    )
}

/// `⟨η⟩^d = (1 + |η|²)^{d/2}`.
pub fn bessel_symbol(grid: TorusGrid, d: f64) -> Symbol {
    let profile: ProfileFn = Arc::new(move |eta| real(japanese(eta).powf(d)));
    let dim = grid.dim();
    Symbol::from_terms(format!("bessel(d={d})"), d, grid, vec![constant_term(grid, profile)]).with_derivatives(
        Arc::new(move |_, eta, b, a| {
            if b != [0, 0] {
                return ZERO;
            }
            let order = (a[0] + a[1]) as usize;
            real(jet::japanese_sq(eta, dim, order).powf(d / 2.0).derivative(a))
        }),
        PROFILE_DERIV_ORDER,
        PROFILE_DERIV_ORDER,
    )
}

/// `(1 + ½ cos x_n)·⟨η⟩^d`, a smooth `x`-dependent symbol in `S^d_{1,0}`.
pub fn smooth_symbol(grid: TorusGrid, d: f64) -> Symbol {
    let n = grid.last_axis();
    let m = GridFunction::from_fn(grid, |x| real(1.0 + 0.5 * x[n].cos())).expect("finite samples");
    let cell = (2.0 * PI).powi(grid.dim() as i32);
    let spectrum = SpectralFunction::from_modes(
        grid,
        &[([0, 0], real(cell)), (grid.e_n(1), real(0.25 * cell)), (grid.e_n(-1), real(0.25 * cell))],
    )
    .expect("finite coefficients");
    let profile: ProfileFn = Arc::new(move |eta| real(japanese(eta).powf(d)));
    let lattice = (0..grid.len()).map(|i| profile(lattice_eta(&grid, i))).collect();
    let term = SeparableTerm::from_parts(m, spectrum, profile, lattice);
    let dim = grid.dim();
    Symbol::from_terms(format!("smooth(d={d})"), d, grid, vec![term]).with_derivatives(
        Arc::new(move |x, eta, b, a| {
            let xn = grid.point(x)[n];
            let other = if n == 0 { 1 } else { 0 };
            let mx = if dim == 2 && b[other] != 0 {
                0.0
            } else if b[n] == 0 {
                1.0 + 0.5 * xn.cos()
            } else {
                0.5 * (xn + b[n] as f64 * PI / 2.0).cos()
            };
            let order = (a[0] + a[1]) as usize;
            real(mx * jet::japanese_sq(eta, dim, order).powf(d / 2.0).derivative(a))
        }),
        PROFILE_DERIV_ORDER,
        PROFILE_DERIV_ORDER,
    )
}

/// `Φ_j` as a term profile: continuous evaluator plus the partition table.
fn phi_profile(part: &DyadicPartition, j: usize, weight: f64) -> (ProfileFn, Vec<Complex64>) {
    let prof = part.profile().clone();
    let f: ProfileFn = Arc::new(move |eta| real(weight * prof.phi_j(j as i32, radius(eta))));
    let lattice = part.phi(j).expect("index checked by caller").iter().map(|v| real(weight * v)).collect();
    (f, lattice)
}

/// `a(x, ξ) = Σ_{j=1}^{J} 2^{jd} Φ_j(ξ) e^{−i x_n 2^j}`.
pub fn ching_symbol(d: f64, part: &DyadicPartition) -> Symbol {
    let grid = *part.grid();
    let terms = (1..=part.j_max() as usize)
        .map(|j| {
            let (profile, lattice) = phi_profile(part, j, 2f64.powf(j as f64 * d));
            SeparableTerm::mode(grid, grid.e_n(-(1i64 << j)), ONE, profile, lattice)
        })
        .collect();
    Symbol::from_terms(format!("ching(d={d})"), d, grid, terms)
}

/// `Σ_j m_j(x) Φ_j(ξ)`.
pub fn reduced_symbol(multipliers: &[GridFunction], part: &DyadicPartition) -> Result<Symbol> {
    if multipliers.len() > part.j_max() as usize + 1 {
        return Err(Error::Inadmissible(format!(
            "{} multipliers for J_max = {}",
            multipliers.len(),
            part.j_max()
        )));
    }
    let grid = *part.grid();
    let mut terms = Vec::with_capacity(multipliers.len());
    for (j, m) in multipliers.iter().enumerate() {
        part.check_grid(m.grid())?;
        let (profile, lattice) = phi_profile(part, j, 1.0);
        terms.push(SeparableTerm::from_parts(m.clone(), dft(m), profile, lattice));
    }
    Ok(Symbol::from_terms("reduced", 0.0, grid, terms))
}

/// Nodes of the fixed rule used for `m_j`.
pub const NONLINEAR_NODES: usize = 16;

/// Paralinearization multipliers `m_j = ∫₀¹ F′(u^{j−1} + t u_j) dt`, with
/// `u^{−1} = 0`, `u^{j} = Ψ_j(D)u`, `u_j = Φ_j(D)u`, for `j = 0..=J_max`.
pub fn nonlinear_multipliers(
    f_prime: &(dyn Fn(f64) -> f64 + Sync),
    u: &GridFunction,
    part: &DyadicPartition,
) -> Result<Vec<GridFunction>> {
    part.check_grid(u.grid())?;
    let scale = u.max_abs().max(1.0);
    if u.max_imag() > 1e-12 * scale {
        return Err(Error::NotReal(u.max_imag()));
    }
    let grid = *u.grid();
    let spec = dft(u);
    let rule = GaussLegendre::new(NONLINEAR_NODES);
    let wsum: f64 = rule.weights().iter().sum();
    let mut out = Vec::with_capacity(part.j_max() as usize + 1);
    for j in 0..=part.j_max() as usize {
        let low = if j == 0 {
            vec![0.0; grid.len()]
        } else {
            idft(&part.low_pass_spectrum(&spec, j - 1)?).values().iter().map(|z| z.re).collect()
        };
        let blk: Vec<f64> = idft(&part.block_spectrum(&spec, j)?).values().iter().map(|z| z.re).collect();
        let values = (0..grid.len())
            .map(|i| {
                let mut acc = 0.0;
                for (t, w) in rule.nodes().iter().zip(rule.weights()) {
                    acc += w * f_prime(low[i] + t * blk[i]);
                }
                real(acc / wsum)
            })
            .collect();
        out.push(GridFunction::new(grid, values)?);
    }
    Ok(out)
}

/// The paralinearized symbol `a_u(x, ξ) = Σ_j m_j(x) Φ_j(ξ)` of `F(u)`.
pub fn nonlinear_symbol(
    f_prime: &(dyn Fn(f64) -> f64 + Sync),
    u: &GridFunction,
    part: &DyadicPartition,
) -> Result<Symbol> {
    let ms = nonlinear_multipliers(f_prime, u, part)?;
    let mut s = reduced_symbol(&ms, part)?;
    s.name = "nonlinear".into();
    Ok(s)
}

/// Random `S^0_{1,0}` test symbol `Σ_{t=0}^{3} m_t(x)(η_n/⟨η⟩)^t`, with
/// `m_t` random trigonometric polynomials of degree ≤ 3 (and `m_0` offset by 1).
pub fn random_symbol(grid: TorusGrid, seed: u64) -> Symbol {
    let n = grid.last_axis();
    let cell = (2.0 * PI).powi(grid.dim() as i32);
    let mut terms = Vec::new();
    for t in 0..4u64 {
        let mut spec = random::random_spectrum(grid, 3.0, 2.0, seed.wrapping_mul(31).wrapping_add(t));
        let scale = 0.5 * cell;
        spec.coeffs_mut().iter_mut().for_each(|c| *c *= scale);
        if t == 0 {
            spec.coeffs_mut()[0] += cell;
        }
        let x_values = idft(&spec);
        let profile: ProfileFn = Arc::new(move |eta| real((eta[n] / japanese(eta)).powi(t as i32)));
        let lattice = (0..grid.len()).map(|i| profile(lattice_eta(&grid, i))).collect();
        terms.push(SeparableTerm::from_parts(x_values, spec, profile, lattice));
    }
    Symbol::from_terms(format!("random(seed={seed})"), 0.0, grid, terms)
}

/// Cutoff vanishing where `C(|ξ+η|+1) ≤ |η|`: `Ψ(1.3 ρ/C)` with
/// `ρ = |η| / (|ξ+η|² + 1)^{1/2}`.
pub fn twisted_cutoff(profile: &crate::lpdecomp::CutoffProfile, c: f64, xi: [f64; 2], eta: [f64; 2]) -> f64 {
    let s = [xi[0] + eta[0], xi[1] + eta[1]];
    let rho = radius(eta) / (s[0] * s[0] + s[1] * s[1] + 1.0).sqrt();
    profile.psi(crate::lpdecomp::SUPPORT_END * rho / c)
}

/// Order-0 symbol with diagonal interactions removed near the twisted
/// diagonal: Ching terms `Φ_j(η)e^{−ix_n2^j}` plus random single-mode terms
/// with `x`-frequency of size `~2^j` opposite to `e_n`, each multiplied by
/// the cutoff of [`twisted_cutoff`].
pub fn twisted_cutoff_symbol(part: &DyadicPartition, c: f64, seed: u64) -> Result<Symbol> {
    if c < 1.0 {
        return Err(Error::Inadmissible(format!("twisted constant C = {c} < 1")));
    }
    let grid = *part.grid();
    let mut rng = random::rng(seed);
    let mut terms = Vec::new();
    for j in 1..=part.j_max() as usize {
        let scale = (1u64 << j) as f64;
        let mut modes: Vec<(Freq, Complex64)> = vec![(grid.e_n(-(1i64 << j)), ONE)];
        let mag = -(random::uniform(&mut rng, 0.6, 1.2) * scale).round() as i64;
        let mut zeta = grid.e_n(mag);
        if grid.dim() == 2 {
            let spread = (0.3 * scale).max(1.0);
            zeta[0] = random::uniform(&mut rng, -spread, spread).round() as i64;
        }
        modes.push((zeta, random::complex_gaussian(&mut rng)));
        for (zeta, amp) in modes {
            let prof = part.profile().clone();
            let xi = [zeta[0] as f64, zeta[1] as f64];
            let profile: ProfileFn =
                Arc::new(move |eta| real(prof.phi_j(j as i32, radius(eta)) * twisted_cutoff(&prof, c, xi, eta)));
            let lattice = (0..grid.len()).map(|i| profile(lattice_eta(&grid, i))).collect();
            terms.push(SeparableTerm::mode(grid, zeta, amp, profile, lattice));
        }
    }
    Ok(Symbol::from_terms(format!("cutoff(C={c},seed={seed})"), 0.0, grid, terms))
}

/// Symbol given by samples on grid × lattice; off-lattice `η` is linear
/// (bilinear in 2D) interpolation between neighbouring lattice points.
pub fn sampled_symbol(doc: &SampledSymbolDoc) -> Result<Symbol> {
    let (grid, rows) = doc.rows()?;
    let rows = Arc::new(rows);
    let r1 = rows.clone();
    let lattice: LatticeFn = Arc::new(move |x, e| r1[x][e]);
    let eval: EvalFn = Arc::new(move |x, eta| {
        let row = &rows[x];
        let at = |f: Freq| row[grid.index_of(f)];
        let (f0, t0) = (eta[0].floor(), eta[0] - eta[0].floor());
        if grid.dim() == 1 {
            let k = f0 as i64;
            at([k, 0]) * (1.0 - t0) + at([k + 1, 0]) * t0
        } else {
            let (f1, t1) = (eta[1].floor(), eta[1] - eta[1].floor());
            let (k0, k1) = (f0 as i64, f1 as i64);
            at([k0, k1]) * ((1.0 - t0) * (1.0 - t1))
                + at([k0 + 1, k1]) * (t0 * (1.0 - t1))
                + at([k0, k1 + 1]) * ((1.0 - t0) * t1)
                + at([k0 + 1, k1 + 1]) * (t0 * t1)
        }
    });
    Ok(Symbol::from_fn("sampled", doc.order, grid, eval).with_lattice(lattice))
}

/// Samples a symbol into the sampled-symbol document format.
pub fn sample_symbol(a: &Symbol) -> SampledSymbolDoc {
    let g = a.grid();
    let values = (0..g.len())
        .map(|x| (0..g.len()).flat_map(|e| {
            let z = a.eval_lattice(x, e);
            [z.re, z.im]
        }).collect())
        .collect();
    SampledSymbolDoc { dim: g.dim(), n_points: g.n(), order: a.order(), values }
}
