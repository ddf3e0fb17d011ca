//! Rank-2 Drinfeld modules over finite A-fields.

pub mod afield;
pub mod hecke;
pub mod module;
pub mod torsion;

pub use afield::AField;
pub use hecke::{composition_sides, hecke_image, hecke_image_in, psi_squarefree, HeckeImage};
pub use module::{is_isogeny, DrinfeldModule, Isogeny, LPoly};
pub use torsion::{Torsion, DEFAULT_SPLIT_CAP};
