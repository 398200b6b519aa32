//! Zero-partition counting for integer vectors, five ways that must agree:
//! exhaustive enumeration, subset-sum dynamic programming, residue-class
//! dynamic programming, trapezoid quadrature of the cosine-product
//! characteristic function, and digit extraction from a big-integer
//! product. On top of the counters: a #SAT → #SUBSET-SUM → #PART reduction
//! chain, a multi-radix prime sieve that bounds and sometimes certifies
//! #SAT, and an empirical search harness for the extremal-count
//! conjecture.

pub mod conjecture;
pub mod error;
pub mod estimator;
pub mod io;
pub mod model;
pub mod modular;
pub mod reduction;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{Partition, PartitionInstance, ResidueSpectrum, SizeSpectrum};
