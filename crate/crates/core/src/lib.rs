//! Numerical isomonodromy toolkit for the degenerate Painlevé V equation
//! (all formal monodromy parameters zero).
//!
//! The crate integrates the nonlinear (y, v, u) system between its t -> 0+
//! and t -> +infinity regimes, builds canonical solutions of the associated
//! lambda-system in its Stokes sectors, extracts the Stokes multipliers
//! (s1, s2), evaluates the Whittaker- and Bessel-model uniform approximants
//! of the scalar reductions, and verifies the connection formulas
//!
//!     sigma = (i/pi) ln(3 + sqrt 8),   r = -i u_hat,   s1 s2 = 4,
//!
//! at double precision. Modules:
//!
//! - [`specialfn`]: Gamma, Kummer/Whittaker, modified Bessel kernels with
//!   explicit branch tracking ([`specialfn::SectorArg`]).
//! - [`painleve`]: the nonlinear system, seeds, chart-switching integration,
//!   connection-constant extraction, sine-Gordon reduction residual.
//! - [`lax`]: the linear system, gauges, canonical frames, contour
//!   propagation, Stokes multipliers, zero-curvature residual.
//! - [`asymptotics`]: scalar reductions, model approximants and their
//!   matching coefficients, closed-form multipliers, connection solver.
//! - [`ode`]: the shared adaptive Runge-Kutta 5(4) core.
//! - [`report`]: JSON/CSV serialization of trajectories and Stokes data.

pub mod asymptotics;
pub mod error;
pub mod lax;
pub mod ode;
pub mod painleve;
pub mod report;
pub mod specialfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
