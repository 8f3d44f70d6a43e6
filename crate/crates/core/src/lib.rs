//! Determinants of Hankel and Wiener–Hopf operators with independent
//! quadrature oracles.

pub mod barnes;
pub mod dd;
pub mod determinants;
pub mod equilibrium;
pub mod error;
pub mod fourier;
pub mod hankel;
pub mod oracles;
pub mod orthopoly;
pub mod quad;
pub mod specfun;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A float as a string with 17 significant digits, the form used in every
/// JSON output.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // no signed zeros in output
        format!("{:.16e}", 0.0)
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}
