//! Reproducible reductions.
//!
//! Every sum in the crate goes through a pairwise tree whose split points
//! depend only on the input length, so results are bit-identical for any
//! rayon pool size. Large inputs fork the two halves with `rayon::join`;
//! the tree shape is the same either way.

use rustfft::num_complex::Complex64;

const LEAF: usize = 128;
const PAR_THRESHOLD: usize = 1 << 14;

/// Pairwise sum of `f(i)` for `i` in `0..len`.
pub fn pairwise_sum_by<F>(len: usize, f: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    fn rec<F: Fn(usize) -> f64 + Sync>(lo: usize, hi: usize, f: &F) -> f64 {
        let n = hi - lo;
        if n <= LEAF {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + n / 2;
        if n >= PAR_THRESHOLD {
            let (a, b) = rayon::join(|| rec(lo, mid, f), || rec(mid, hi, f));
            a + b
        } else {
            rec(lo, mid, f) + rec(mid, hi, f)
        }
    }
    if len == 0 {
        return 0.0;
    }
    rec(0, len, f)
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), &|i| values[i])
}

/// Complex pairwise sum of `f(i)`.
pub fn pairwise_sum_complex_by<F>(len: usize, f: &F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let re = pairwise_sum_by(len, &|i| f(i).re);
    let im = pairwise_sum_by(len, &|i| f(i).im);
    Complex64::new(re, im)
}

/// Maximum of `f(i)`; order-independent, so this is reproducible as is.
pub fn max_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64,
{
    (0..len).map(f).fold(0.0_f64, f64::max)
}
