//! Seeded generators for test inputs. Draw order is fixed (lattice storage
//! order), so a seed determines the output bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;

use crate::grid::{idft, GridFunction, SpectralFunction, TorusGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Random coefficients on `|ξ| ≤ radius` weighted by `(1 + |ξ|)^{-decay}`,
/// exactly zero outside that ball.
pub fn random_spectrum(grid: TorusGrid, radius: f64, decay: f64, seed: u64) -> SpectralFunction {
    random_spectrum_where(grid, seed, |r| if r <= radius { (1.0 + r).powf(-decay) } else { 0.0 })
}

/// Random coefficients `g(ξ)·w(|ξ|)` for a radial weight `w`.
pub fn random_spectrum_where(grid: TorusGrid, seed: u64, weight: impl Fn(f64) -> f64) -> SpectralFunction {
    let mut r = rng(seed);
    let coeffs = (0..grid.len())
        .map(|i| {
            let z = complex_gaussian(&mut r);
            z * weight(grid.freq_norm(i))
        })
        .collect();
    SpectralFunction::from_vec_unchecked(grid, coeffs)
}

/// Random coefficients on the lattice box `[−R, R]^n`, drawn in lexicographic
/// frequency order so that the same seed gives the same trigonometric
/// polynomial on every grid; `weight(|ξ|)` shapes (and cuts) the spectrum.
pub fn random_box_spectrum(grid: TorusGrid, box_radius: i64, seed: u64, weight: impl Fn(f64) -> f64) -> SpectralFunction {
    let mut r = rng(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let second: Vec<i64> = if grid.dim() == 2 { (-box_radius..=box_radius).collect() } else { vec![0] };
    for a in -box_radius..=box_radius {
        for &b in &second {
            let z = complex_gaussian(&mut r);
            let w = weight(((a * a + b * b) as f64).sqrt());
            if w != 0.0 {
                coeffs[grid.index_of([a, b])] += z * w;
            }
        }
    }
    SpectralFunction::from_vec_unchecked(grid, coeffs)
}

/// Hermitian symmetrization, so the inverse transform is real.
pub fn hermitian(s: &SpectralFunction) -> SpectralFunction {
    let g = *s.grid();
    let c = s.coeffs();
    let coeffs = (0..g.len())
        .map(|i| {
            let f = g.freq_of(i);
            let j = g.index_of([-f[0], -f[1]]);
            (c[i] + c[j].conj()) * 0.5
        })
        .collect();
    SpectralFunction::from_vec_unchecked(g, coeffs)
}

/// Random resolved function with spectrum in `|ξ| ≤ radius`.
pub fn random_function(grid: TorusGrid, radius: f64, decay: f64, seed: u64) -> GridFunction {
    idft(&random_spectrum(grid, radius, decay, seed))
}

/// Real random function with spectrum in `|ξ| ≤ radius`.
pub fn random_real_function(grid: TorusGrid, radius: f64, decay: f64, seed: u64) -> GridFunction {
    let f = idft(&hermitian(&random_spectrum(grid, radius, decay, seed)));
    let values = f.values().iter().map(|z| Complex64::new(z.re, 0.0)).collect();
    GridFunction::from_vec_unchecked(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::dft;

    #[test]
    fn same_seed_same_output() {
        let g = TorusGrid::new(1, 128).unwrap();
        let a = random_function(g, 20.0, 0.5, 11);
        let b = random_function(g, 20.0, 0.5, 11);
        assert_eq!(a, b);
        assert_ne!(a, random_function(g, 20.0, 0.5, 12));
    }

    #[test]
    fn spectrum_is_confined() {
        let g = TorusGrid::new(2, 64).unwrap();
        let s = random_spectrum(g, 10.0, 0.0, 3);
        for (i, c) in s.coeffs().iter().enumerate() {
            if g.freq_norm(i) > 10.0 {
                assert_eq!(*c, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn real_function_is_real_with_confined_spectrum() {
        let g = TorusGrid::new(1, 128).unwrap();
        let f = random_real_function(g, 12.0, 1.0, 5);
        assert_eq!(f.max_imag(), 0.0);
        let s = dft(&f);
        for (i, c) in s.coeffs().iter().enumerate() {
            if g.freq_norm(i) > 12.0 {
                assert!(c.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn box_spectrum_is_grid_independent() {
        for dim in [1, 2] {
            let small = TorusGrid::new(dim, 64).unwrap();
            let big = TorusGrid::new(dim, 128).unwrap();
            let w = |r: f64| if r <= 5.0 { 1.0 } else { 0.0 };
            let a = random_box_spectrum(small, 6, 9, w);
            let b = random_box_spectrum(big, 6, 9, w);
            for i in 0..small.len() {
                let f = small.freq_of(i);
                assert_eq!(a.coeffs()[i], b.at(f));
            }
            assert_eq!(a.coeffs().iter().filter(|c| c.norm() > 0.0).count(), b.coeffs().iter().filter(|c| c.norm() > 0.0).count());
        }
    }
}
