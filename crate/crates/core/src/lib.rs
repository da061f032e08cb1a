//! Exact invariants of Abelian covers of the plane and of the degree-5
//! del Pezzo surface branched over line configurations.
//!
//! ```
//! use kummerlab::configs::LineConfiguration;
//! use kummerlab::covers::invariants_kummer_plane;
//!
//! let inv = invariants_kummer_plane(&LineConfiguration::complete_quadrangle(), 5).unwrap();
//! assert!(inv.flags.ball_quotient);
//! ```

pub mod configs;
pub mod covers;
pub mod error;
pub mod geometry;
pub mod hodge;
pub mod kodaira;
pub mod numeric;
pub mod search;
pub mod zgroups;

pub use error::{Error, Result};
pub use zgroups::{Character, FiniteAbelianGroup, GroupElement};
