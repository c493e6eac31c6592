//! Exact-arithmetic analysis of finite maps between subdomains of the
//! p-adic projective line: valuation polygons, boundary-germ invariants
//! (d, sigma, nu, v(eps)), classical ramification counts, Euler
//! characteristics, and the balance checks tying them together.
//!
//! Everything is computed over Q with a fixed prime p, in log scale: radii
//! appear only as rational valuations, and no operation ever rounds.

pub mod berkdomain;
pub mod error;
pub mod exactval;
pub mod laurent;
pub mod ledger;
pub mod ramification;
pub mod rhcheck;
pub mod valpolygon;

pub use error::{Error, Result};
pub use exactval::{padic_val, valq_affine, Prime, QExact, ValQ};
pub use laurent::{LaurentPoly, PValue, RationalMap};
pub use valpolygon::{build_polygon, Side, SlopeBound, ValPolygon};
