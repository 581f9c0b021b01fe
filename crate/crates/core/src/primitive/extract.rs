use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{de_form, whitney_relative_in, CoordSystem, Form, GroupKind, PolyCoordinateMap};
use crate::mesh::{combinations, permutation_parity, OrientedSimplex, SimplicialMorphism, VertexId};
use crate::poly::{factorial, sign_q, Poly, Q};

/// A face `φ` of `σ` with image `τ`, split into its pieces over the base vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeFace {
    pub phi: OrientedSimplex,
    pub pieces: Vec<OrientedSimplex>,
}

impl RelativeFace {
    pub fn relative_dim(&self) -> usize {
        self.pieces.iter().map(|p| p.card() - 1).sum()
    }

    /// `t_0^{|φ_0|} ⋯ t_s^{|φ_s|}` in a trivialized system over `tau`.
    pub fn t_weight(&self, ctx: &CoordSystem, tau: &OrientedSimplex) -> Poly {
        let n = ctx.nvars();
        let mut w = Poly::one(n);
        for (y, p) in tau.vertices().iter().zip(&self.pieces) {
            let t = ctx.var(GroupKind::Param, *y).expect("base coordinate");
            w = &w * &Poly::var(n, t).pow(p.card() as u32 - 1);
        }
        w
    }

    /// Edge vectors `e_v − e_{φ_j[0]}` in `σ`'s coordinates, factor by factor.
    pub fn edge_vectors(&self, sigma: &OrientedSimplex) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let base = sigma.position(p.vertices()[0]).expect("vertex of sigma");
            for v in &p.vertices()[1..] {
                let mut e = vec![Q::zero(); sigma.card()];
                e[sigma.position(*v).expect("vertex of sigma")] = Q::one();
                e[base] = -Q::one();
                out.push(e);
            }
        }
        out
    }
}

/// Faces of `σ` over all of `τ` with relative dimension `r`.
pub fn relative_faces(
    f: &SimplicialMorphism,
    sigma: &OrientedSimplex,
    tau: &OrientedSimplex,
    r: usize,
) -> Vec<RelativeFace> {
    let fibers = f.fibers(sigma, tau);
    let mut acc: Vec<Vec<OrientedSimplex>> = vec![vec![]];
    for fj in &fibers {
        let mut next = Vec::new();
        for partial in &acc {
            let used: usize = partial.iter().map(|p| p.card() - 1).sum();
            for k in 1..=fj.card() {
                if used + k - 1 > r {
                    break;
                }
                for idx in combinations(fj.card(), k) {
                    let piece = OrientedSimplex::new(idx.iter().map(|&i| fj.vertices()[i]).collect()).expect("subset");
                    let mut p = partial.clone();
                    p.push(piece);
                    next.push(p);
                }
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter(|pieces| pieces.iter().map(|p| p.card() - 1).sum::<usize>() == r)
        .map(|pieces| {
            let phi = sigma.sub(|v| pieces.iter().any(|p| p.contains(v)));
            RelativeFace { phi, pieces }
        })
        .collect()
}

/// `(-1)^{α(φ,ν)} (r+s)! / (|φ_0|! ⋯ |φ_s|! s!)`.
pub fn normalization(face: &RelativeFace) -> Q {
    let s = face.pieces.len() - 1;
    let r = face.relative_dim();
    let grouped: Vec<VertexId> = face.pieces.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    let mut alpha = permutation_parity(face.phi.vertices(), &grouped);
    let mut c = factorial(r + s) / factorial(s);
    for (j, p) in face.pieces.iter().enumerate() {
        alpha += (s - j) * (p.card() - 1);
        c /= factorial(p.card() - 1);
    }
    c * sign_q(alpha)
}

/// Coefficient data of one relative face.
#[derive(Clone, Debug)]
pub struct FaceCoefficient {
    pub face: RelativeFace,
    /// `Ã_φ`: the form evaluated on the edge vectors of `φ`'s fiber, in `σ`'s coordinates.
    pub tilde_a: Poly,
    /// `A_φ = N(φ) Ã_φ`.
    pub a: Poly,
    /// `Ã_φ / Π|φ_j|! ∘ ψ`: the coefficient of `t^{|φ|} ω(π(φ)/τ;π(σ))`.
    pub coefficient: Poly,
}

/// Fiberwise decomposition of a form on one simplex over `τ`.
#[derive(Clone, Debug)]
pub struct FiberwiseDecomposition {
    pub sigma: OrientedSimplex,
    pub tau: OrientedSimplex,
    pub degree: usize,
    pub psi: PolyCoordinateMap,
    pub faces: Vec<FaceCoefficient>,
}

impl FiberwiseDecomposition {
    pub fn ctx(&self) -> &Arc<CoordSystem> {
        &self.psi.source
    }

    /// `Σ_φ t^{|φ|} (c_φ∘ψ) ω(π(φ)/τ;π(σ))`.
    pub fn combination(&self) -> Form {
        let ctx = self.ctx().clone();
        let mut out = Form::zero(ctx.clone());
        for fc in &self.faces {
            let w = whitney_relative_in(&ctx, &self.tau, &fc.face.pieces).expect("faces of the fibers");
            let coef = &fc.face.t_weight(&ctx, &self.tau) * &fc.coefficient;
            out.add_assign_ref(&w.mul_poly(&coef));
        }
        out
    }
}

/// Extracts the coefficients of `η` (a form of pure degree `r` in `σ`'s
/// coordinates) on every relative `r`-face of `σ` over `τ`.
pub fn extract_a(
    eta: &Form,
    f: &SimplicialMorphism,
    sigma: &OrientedSimplex,
    tau: &OrientedSimplex,
) -> Result<FiberwiseDecomposition> {
    let degs = eta.degrees();
    let r = match degs.as_slice() {
        [] => 0,
        [r] => *r,
        _ => return Err(Error::Decomposition(format!("form of mixed degrees {degs:?}"))),
    };
    let rel = f.relative_dim(sigma);
    if r > rel {
        return Err(Error::Decomposition(format!(
            "degree {r} exceeds the relative dimension {rel} of {sigma}"
        )));
    }
    let psi = PolyCoordinateMap::psi(f, sigma, tau)?;
    let mut faces = Vec::new();
    for face in relative_faces(f, sigma, tau, r) {
        let tilde_a = eta.contract(&face.edge_vectors(sigma));
        let norm: Q = face.pieces.iter().map(|p| factorial(p.card() - 1)).product();
        let coefficient = psi.pullback_poly(&tilde_a.scale(&(Q::one() / norm)));
        let a = tilde_a.scale(&normalization(&face));
        faces.push(FaceCoefficient {
            face,
            tilde_a,
            a,
            coefficient,
        });
    }
    Ok(FiberwiseDecomposition {
        sigma: sigma.clone(),
        tau: tau.clone(),
        degree: r,
        psi,
        faces,
    })
}

/// `de ∧ (ψ^*η − Σ_φ t^{|φ|} (c_φ∘ψ) ω(π(φ)/τ;π(σ)))`, canonical.
pub fn decomposition_residual(eta: &Form, dec: &FiberwiseDecomposition) -> Form {
    let pulled = dec.psi.pullback(eta);
    let de = de_form(dec.ctx()).expect("base group");
    de.wedge(&(&pulled - &dec.combination())).canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::forms::whitney_extended_in;

    #[test]
    fn faces_of_the_strip() {
        let fx = fixtures::two_edge_strip();
        let tau = OrientedSimplex::from_ids(&[0, 1]);
        let acd = OrientedSimplex::from_ids(&[10, 12, 13]);
        let faces = relative_faces(&fx.morphism, &acd, &tau, 1);
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].phi, acd);
        assert_eq!(relative_faces(&fx.morphism, &acd, &tau, 0).len(), 2);
    }

    #[test]
    fn extended_whitney_form_extracts_itself() {
        let fx = fixtures::five_simplex();
        let tau = OrientedSimplex::from_ids(&[0, 1, 2]);
        let sigma = OrientedSimplex::from_ids(&[10, 11, 12, 13, 14, 15]);
        let ctx = Arc::new(CoordSystem::simplex(&sigma));
        for face in [[10, 11, 13, 15], [10, 12, 14, 15]] {
            let phi = OrientedSimplex::from_ids(&face);
            let eta = whitney_extended_in(&ctx, &phi).unwrap();
            let dec = extract_a(&eta, &fx.morphism, &sigma, &tau).unwrap();
            assert!(decomposition_residual(&eta, &dec).is_zero());
        }
        let edge = OrientedSimplex::from_ids(&[10, 11]);
        let eta = whitney_extended_in(&ctx, &edge).unwrap();
        let dec = extract_a(&eta, &fx.morphism, &sigma, &tau).unwrap();
        assert!(decomposition_residual(&eta, &dec).is_zero());
    }
}
