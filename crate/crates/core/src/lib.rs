//! Eigenvalue level curves of the Kac-Murdock-Szego matrix `K_n(rho)` for
//! complex `rho`.
//!
//! The crate traces the closed curves on which `K_n(rho)` owns a type-1 or
//! type-2 eigenvalue of prescribed magnitude `N`, checks every traced point
//! against a brute-force typed spectrum, and counts the eigenvalues above the
//! level through winding numbers. A cubic companion model with the same
//! cusp/loop behaviour lives in [`cubic`].
//!
//! Module map:
//!
//! * [`chebyshev`]: `T_k`, `U_k`, derivatives, zeros and extrema.
//! * [`thresholds`]: `g`, `h`, `N_min`, `x0/u0`, `v0`, `v_im` and the
//!   transcendental solve for `v(n, N, u)`.
//! * [`curve`]: point evaluation, curve tracing, self-intersections, loop
//!   points and symmetry checks.
//! * [`spectral`]: the independent typed-spectrum oracle.
//! * [`topology`]: winding numbers and the `j = 1 - wind` count.
//! * [`cubic`]: the cubic `lambda (lambda - rho - alpha^2)^2 + pi^2 alpha^4 / 4`.
//! * [`io`]: CSV and SVG emitters.
//! * [`verify`]: cross-module check suites shared by the CLI and the tests.

pub mod chebyshev;
pub mod cubic;
pub mod curve;
mod error;
pub mod geometry;
pub mod io;
pub mod roots;
pub mod spectral;
pub mod thresholds;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
