//! Littlewood–Paley and paradifferential numerics for pseudodifferential
//! operators of type 1,1 on the periodic torus.

pub mod error;
pub mod grid;
pub mod io;
pub mod lpdecomp;
pub mod paradiff;
pub mod probes;
pub mod quadrature;
pub mod random;
pub mod reduce;
pub mod spaces;
pub mod spectral;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{dft, idft, lp_norm, numerical_support, Freq, GridFunction, SpectralFunction, TorusGrid};
pub use lpdecomp::{block, build_partition, decompose, low_pass, CutoffProfile, DyadicBlocks, DyadicPartition};
pub use paradiff::{apply, direct_apply, piece_apply, ParaResult};
pub use symbols::{SeparableTerm, Symbol};
pub use rustfft::num_complex::Complex64;
