//! Exact construction and verification of Poisson-Lie structures on the jet
//! groups `G_N` of formal diffeomorphisms of the line, together with the
//! matching Lie bialgebra structures on the Witt algebra.
//!
//! Everything is computed over the rationals with no rounding. A structure is
//! certified by showing that each defining identity reduces to the zero
//! polynomial (or zero series) at a stated truncation.

pub mod bialgebra;
pub mod error;
pub mod jet;
pub mod linalg;
pub mod phi;
pub mod poisson;
pub mod poly;
pub mod report;
pub mod rational;
pub mod series;
pub mod structure;

pub use error::{Error, Result};
pub use jet::{jet_compose, jet_invert, JetElement};
pub use poly::CoordPoly;
pub use rational::Rational;
pub use series::{Coefficient, PolySeries, ScalarSeries, TruncSeries};
