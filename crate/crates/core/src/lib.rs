//! Exact Whitney-form calculus over simplicial and prismal complexes.
//!
//! The crate covers the combinatorics of simplices and prisms ([`mesh`]),
//! the two prismal sheaves attached to a simplicial map ([`sheaf`]), a
//! polynomial exterior calculus in barycentric coordinates with exact
//! rational coefficients ([`forms`]), the construction of relative primitives
//! of fiberwise-exact forms ([`primitive`]) and executable checks of the
//! Whitney-form identities it relies on ([`verify`]).
//!
//! ```
//! use prismal::forms::{whitney, integrate_top_form};
//! use prismal::mesh::OrientedSimplex;
//!
//! let tri = OrientedSimplex::from_ids(&[0, 1, 2]);
//! let w = whitney(&tri);
//! assert_eq!(integrate_top_form(&w).unwrap(), prismal::poly::q(1));
//! ```

pub mod error;
pub mod fixtures;
pub mod forms;
pub mod mesh;
pub mod poly;
pub mod primitive;
pub mod sheaf;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/forms.md")]
    struct Forms;
    #[doc = include_str!("../../../book/src/sheaves.md")]
    struct Sheaves;
    #[doc = include_str!("../../../book/src/primitives.md")]
    struct Primitives;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct CommandLine;
}
