//! Simplicial and prismal combinatorics.
//!
//! Simplices carry one stored vertex ordering; orientation questions reduce
//! to permutation parity. Prisms are ordered products of simplices, with the
//! boundary sign `(-1)^{|σ_0|+…+|σ_{j-1}|}` on the `j`-th factor.

mod complex;
mod prism;
mod prismal;
mod simplex;

pub use complex::{ComplexFile, MorphismFile, SimplicialComplex, SimplicialMorphism};
pub use prism::{prism_boundary, prism_codim1_faces, prism_incidence, OrientedPrism, PrismChain};
pub use prismal::{fiber_product, fiber_product_sets, FactorDependence, FiberProduct, PrismalMorphism, PrismalSet};
pub use simplex::{
    boundary_chain, combinations, incidence_number, join, permutation_parity, Chain, OrientedSimplex, SimplexChain,
    VertexId,
};
