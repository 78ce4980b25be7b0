//! Dynamics of a particle bound in a trap whose depth varies quadratically in
//! time, carrying a bound state up to the continuum threshold and back down.
//!
//! The crate provides two independent routes to the survival probabilities
//! `P_stay[m][n]` (start in bound state `m`, end in bound state `n`):
//!
//! * [`reflect`] — the Sturmian-representation route: the time-dependent
//!   problem is mapped onto a stationary reflection problem for a complex
//!   "potential" in frequency space, integrated with an adaptive
//!   Runge–Kutta scheme and decomposed into semiclassical waves.
//! * [`tdse`] — a direct Crank–Nicolson grid integration of the
//!   time-dependent Schrödinger equation with absorbing layers, used as the
//!   independent reference.
//!
//! Supporting modules: [`trap`] (trap shapes, scalings, adiabatic bound
//! states), [`sturmian`] (eigenvalue branches and coupling matrices),
//! [`threshold`] (Hankel functions, the exact threshold solution and the
//! universal retention constant), and [`acceptance`] (the acceptance
//! checks run by the test suite and the CLI).

pub mod acceptance;
pub mod csv;
pub mod reflect;
pub mod sturmian;
pub mod tdse;
pub mod threshold;
pub mod trap;

pub use num_complex::Complex64 as C64;
