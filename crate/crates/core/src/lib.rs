//! Computational toolkit for elliptic curves over Q with prescribed torsion.
//!
//! The toolkit enumerates curves E: y^2 = x^3 + Ax + B of bounded naive
//! height max(|A|^3, B^2) whose Mordell-Weil group contains a chosen torsion
//! group G, verifies the mod-p weight tables and class-number moments that
//! govern the local behaviour of such families, and evaluates the explicit
//! formula constants behind average analytic rank bounds.
//!
//! Module layout:
//! - [`ff`]: prime-field arithmetic (Legendre symbol, square roots, cube
//!   tests in F_p and in F_p[x]/(x^2+3)).
//! - [`groups`]: the fifteen torsion groups allowed over Q and their
//!   numerical invariants d(G), e(G), r(G), epsilon(G).
//! - [`models`]: the parametrizations Phi_G = (f_G, g_G) from Tate normal
//!   form, defect corrections, and discriminant identities.
//! - [`curve`]: point counting, reduction types, and group structure of a
//!   short Weierstrass model over F_p.
//! - [`weights`]: mod-p weight tables |W_{G,J}|, singular row sums,
//!   trace-weighted class numbers H_G(a,p), and Hurwitz class numbers.
//! - [`census`]: height-ordered enumeration of minimal models with torsion,
//!   asymptotic constants c(G), and local density measurements.
//! - [`bounds`]: Fejer test function sums, moment and tail bounds for the
//!   rank distribution, and the Frobenius trace formula checks.
//! - [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod bounds;
pub mod census;
pub mod curve;
pub mod error;
pub mod ff;
pub mod groups;
pub mod models;
pub mod weights;

pub use error::Error;
pub use groups::Torsion;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
