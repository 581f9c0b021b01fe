//! Small simplicial maps used by the checks, the tests and the CLI.

use crate::mesh::{SimplicialComplex, SimplicialMorphism};

/// A named simplicial map.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub morphism: SimplicialMorphism,
}

fn build(
    name: &'static str,
    verts: &[u32],
    maximal: &[Vec<u32>],
    target: (&[u32], &[Vec<u32>]),
    map: &[(u32, u32)],
) -> Fixture {
    let src = SimplicialComplex::new(verts, maximal).expect("fixture source");
    let tgt = SimplicialComplex::new(target.0, target.1).expect("fixture target");
    Fixture {
        name,
        morphism: SimplicialMorphism::new(src, tgt, map).expect("fixture morphism"),
    }
}

/// Five triangles over a path of two edges `(0,1)`, `(1,2)`.
///
/// Vertices `A..F = 10..15`; `A, B ↦ 0`, `C, D, E ↦ 1`, `F ↦ 2`. Triangles
/// `ACD`, `ABD`, `BDE` lie over `(0,1)` and `CDF`, `DEF` over `(1,2)`.
pub fn two_edge_strip() -> Fixture {
    build(
        "two-edge-strip",
        &[10, 11, 12, 13, 14, 15],
        &[
            vec![10, 12, 13],
            vec![10, 11, 13],
            vec![11, 13, 14],
            vec![12, 13, 15],
            vec![13, 14, 15],
        ],
        (&[0, 1, 2], &[vec![0, 1], vec![1, 2]]),
        &[(10, 0), (11, 0), (12, 1), (13, 1), (14, 1), (15, 2)],
    )
}

/// Two tetrahedra `ABCD`, `BCDE` over an edge; `A, B ↦ 0`, `C, D, E ↦ 1`.
pub fn two_tetrahedra() -> Fixture {
    build(
        "two-tetrahedra",
        &[10, 11, 12, 13, 14],
        &[vec![10, 11, 12, 13], vec![11, 12, 13, 14]],
        (&[0, 1], &[vec![0, 1]]),
        &[(10, 0), (11, 0), (12, 1), (13, 1), (14, 1)],
    )
}

/// Two tetrahedra over a triangle: `A1, A2 ↦ 0`, `B ↦ 1`, `C1, C2 ↦ 2`.
pub fn tetrahedra_over_triangle() -> Fixture {
    build(
        "tetrahedra-over-triangle",
        &[10, 11, 12, 13, 14],
        &[vec![10, 11, 12, 13], vec![11, 12, 13, 14]],
        (&[0, 1, 2], &[vec![0, 1, 2]]),
        &[(10, 0), (11, 0), (12, 1), (13, 2), (14, 2)],
    )
}

/// A 5-simplex over a triangle with fibers of dimensions 2, 1, 0.
pub fn five_simplex() -> Fixture {
    build(
        "five-simplex",
        &[10, 11, 12, 13, 14, 15],
        &[vec![10, 11, 12, 13, 14, 15]],
        (&[0, 1, 2], &[vec![0, 1, 2]]),
        &[(10, 0), (11, 0), (12, 0), (13, 1), (14, 1), (15, 2)],
    )
}

/// A triangle over an edge whose trivialization is `τ × point × edge`.
pub fn product_prism() -> Fixture {
    build(
        "product-prism",
        &[10, 11, 12],
        &[vec![10, 11, 12]],
        (&[0, 1], &[vec![0, 1]]),
        &[(10, 0), (11, 1), (12, 1)],
    )
}

/// The identity of a triangle.
pub fn identity_triangle() -> Fixture {
    build(
        "identity-triangle",
        &[0, 1, 2],
        &[vec![0, 1, 2]],
        (&[0, 1, 2], &[vec![0, 1, 2]]),
        &[(0, 0), (1, 1), (2, 2)],
    )
}

pub fn all() -> Vec<Fixture> {
    vec![
        two_edge_strip(),
        two_tetrahedra(),
        tetrahedra_over_triangle(),
        five_simplex(),
        product_prism(),
        identity_triangle(),
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
