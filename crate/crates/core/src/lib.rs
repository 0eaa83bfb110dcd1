//! Exact arithmetic in twisted iterated Laurent series division rings
//! `Delta = k((x1, y1, ..., xr, yr))` with `x_i y_i = w_{n_i} y_i x_i` over
//! cyclotomic coefficient fields, and in their commutative sub-towers.
//!
//! The crate provides cyclotomic coefficient arithmetic ([`cyclo`]), the
//! exponent lattice with its twisting cocycle ([`exponents`]), truncated
//! series arithmetic with valuations and leading-term decompositions
//! ([`series`]), constructive root extraction ([`roots`]) and the
//! commutator/Kummer witnesses ([`obstruction`]).

pub mod cyclo;
pub mod error;
pub mod exponents;
pub mod obstruction;
pub mod roots;
pub mod sample;
pub mod series;

pub use cyclo::{CycloNum, CyclotomicContext};
pub use error::{Error, Result};
pub use exponents::{ExponentVec, RingSig, SigConfig};
pub use obstruction::{KummerClass, Report};
pub use series::{Decomposition, Precision, Series};
