//! Digital nets over F₂ and the Walsh figure of merit (WAFOM).
//!
//! The crate builds F₂-linear point sets in V = (F₂ⁿ)^S, scores them with
//! WAFOM, searches for low-WAFOM nets among M-sequence generators, and
//! benchmarks the results on quasi-Monte Carlo integration.
//!
//! ```
//! use wafomlab::f2core::{LinearNet, NetPoint};
//! use wafomlab::wafom::{wafom_dual, wafom_inversion};
//!
//! let p = LinearNet::new(2, 1, vec![NetPoint::from_bit_strings(&["11"]).unwrap()]).unwrap();
//! assert_eq!(wafom_dual(&p).unwrap().value, 0.125);
//! assert!((wafom_inversion(&p).unwrap().value - 0.125).abs() < 1e-15);
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod f2core;
pub mod netgen;
pub mod qmc;
pub mod search;
pub mod sum;
pub mod wafom;

pub use error::{Error, Result};
pub use f2core::{BitMatrix, LinearNet, NetPoint};
pub use netgen::{PrimitivePoly, SequentialGenerator};
pub use qmc::{AsianParams, Integrand};
pub use search::{SearchConfig, SearchResult};
pub use wafom::{WafomMethod, WafomReport};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
