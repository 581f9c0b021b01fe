//! Explicit relative primitives along a simplicial map.
//!
//! Given a form `η` of degree `r ≥ 1` on the source complex, every prism
//! `π(σ) = τ × σ_0 × … × σ_s` over a base simplex `τ` receives a form `H`
//! with `de ∧ (ψ^*η − dH) = 0`:
//!
//! 1. [`extract`]: coefficients `Ã_φ` of `η` on the relative `r`-faces `φ`.
//! 2. [`assemble`]: coefficients `C̃^φ_γ` from the Euler equation in [`ode`],
//!    giving `H_C`; a cone correction handles non-top fiber degrees.
//! 3. [`descend`]: `H` read back on `σ` as a rational form.
//! 4. [`pipeline`]: all prisms, horizontal and gluing checks, optional
//!    floating-point cross-check from [`oracle`].

pub mod assemble;
pub mod descend;
pub mod extract;
pub mod ode;
pub mod oracle;
pub mod pipeline;

pub use assemble::{assemble_c, cone_correction, face_count, fiber_target, h_from_c, CTerm};
pub use descend::{descend, descent_residual, RationalForm};
pub use extract::{
    decomposition_residual, extract_a, normalization, relative_faces, FaceCoefficient, FiberwiseDecomposition,
    RelativeFace,
};
pub use ode::{ode_residual, ode_solve};
pub use oracle::{homothety_ratio, oracle_check, OracleEntry};
pub use pipeline::{
    restrict_global, run_pipeline, source_system, validate_input, GluingCheck, HorizontalCheck, PipelineOptions,
    PrimitiveFile, PrimitiveRun, PrismPrimitive, ORACLE_TOLERANCE,
};
