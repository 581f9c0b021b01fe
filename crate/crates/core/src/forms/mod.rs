//! Polynomial exterior calculus in barycentric coordinates.
//!
//! A [`Form`] lives over a [`CoordSystem`], an ordered list of coordinate
//! groups each summing to one. Forms are built in redundant coordinates
//! and compared through [`Form::canonicalize`], which eliminates the last
//! coordinate of every group.

mod context;
mod form;
mod integrate;
mod json;
mod map;
mod poincare;
mod whitney;

pub use context::{CoordGroup, CoordSystem, GroupKind};
pub use form::{determinant, merge_sign, rank, sort_sign, Form, PolyDifferentialForm};
pub use integrate::{integrate_fiber, integrate_top_form};
pub use json::{ContextFile, FormFile, GroupFile, MonomialFile, TermFile};
pub use map::{face_inclusion, psi_point, theta_point, PolyCoordinateMap};
pub use poincare::{cone_operator, poincare_primitive};
pub use whitney::{
    de_form, is_fiberwise_zero, relative_d, whitney, whitney_antiboundary, whitney_extended, whitney_extended_in,
    whitney_in, whitney_prism, whitney_prism_face_in, whitney_relative, whitney_relative_in,
};
