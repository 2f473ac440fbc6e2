//! Numerical laboratory for weighted bilinear ergodic averages.
//!
//! The crate builds and cross-checks the computable objects that appear in the
//! study of averages `(1/N) Σ ν(n) f(T^{an}x) g(T^{bn}x)` with a 1-bounded
//! multiplicative weight ν:
//!
//! * [`seq`] — arithmetic weight sequences (Möbius, Liouville, custom
//!   multiplicative families, automatic sequences, polynomial phases) and
//!   aperiodicity measurements,
//! * [`spectra`] — trigonometric polynomials on the torus with certified
//!   sup-norm estimation, local polynomials, and Wiener-algebra machinery,
//! * [`kernels`] — Fejér and de la Vallée-Poussin kernels with tail-mass
//!   bounds,
//! * [`gowers`] — Gowers uniformity norms on cyclic groups and intervals,
//! * [`dynamics`] — point-sampled measure-preserving systems and the exact
//!   transfer to the integer shift model,
//! * [`averages`] — weighted bilinear averages, maximal functions along
//!   `⌊ρ^n⌋` times, and modulated-supremum statistics,
//! * [`partition`] — dyadic bump partitions, large-value frequency sets,
//!   local-partition inequality checks, entropy numbers, and variation norms.
//!
//! [`oracle`] holds deliberately naive reference implementations (trial
//! division, brute-force parallelepiped sums, dense grids, exhaustive
//! enumeration) used to verify the fast paths. They share no code with the
//! implementations they check.

pub mod averages;
pub mod dynamics;
pub mod error;
pub mod gowers;
pub mod kernels;
pub mod oracle;
pub mod par;
pub mod partition;
pub mod report;
pub mod rng;
pub mod seq;
pub mod spectra;
pub mod util;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version echoed into every experiment report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
