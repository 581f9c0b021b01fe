use super::extract::{FiberwiseDecomposition, RelativeFace};
use super::ode::ode_solve;
use crate::error::{Error, Result};
use crate::forms::{cone_operator, relative_d, whitney_relative_in, Form, GroupKind};
use crate::poly::{sign_q, Poly, Q};

/// One coefficient `C̃^φ_γ` with its face pair; `γ = φ ∖ {x}`, `x` over base vertex `j`.
#[derive(Clone, Debug)]
pub struct CTerm {
    pub face: RelativeFace,
    pub gamma: RelativeFace,
    pub j: usize,
    /// `C̃^φ_γ`, independent of the coordinate of `x`.
    pub c_tilde: Poly,
    /// `±t^{|φ|} C̃^φ_γ / n(φ/τ)`: the coefficient of `ω(π(γ)/τ;π(σ))` in `H`.
    pub weight: Poly,
}

/// `n(φ/τ)`: the number of pairs `(j, x)` with `x ∈ φ_j` and `|φ_j| ≥ 1`.
pub fn face_count(face: &RelativeFace) -> usize {
    face.pieces.iter().filter(|p| p.card() >= 2).map(|p| p.card()).sum()
}

/// Coefficients `C̃^φ_γ` for every relative face in the decomposition.
///
/// For `x` at position `i` of `φ_j`, the coefficient of `φ` is read with
/// `μ_{j,x}` eliminated through the fiber relation and solved against the
/// Euler operator in the coordinates of `γ_j` at rate `|φ_j|`. The term
/// enters `H` with sign `(-1)^i (-1)^{|φ_0|+…+|φ_{j-1}|}` and weight
/// `t^{|φ|}/n(φ/τ)`.
pub fn assemble_c(dec: &FiberwiseDecomposition) -> Result<Vec<CTerm>> {
    let ctx = dec.ctx().clone();
    let n = ctx.nvars();
    let mut out = Vec::new();
    for fc in &dec.faces {
        let face = &fc.face;
        let count = face_count(face);
        if count == 0 {
            if face.relative_dim() == 0 {
                continue;
            }
            return Err(Error::Structure(format!(
                "no admissible codimension-1 face of {}",
                face.phi
            )));
        }
        let t_weight = face.t_weight(&ctx, &dec.tau);
        let mut prefix = 0usize;
        for (j, piece) in face.pieces.iter().enumerate() {
            let pj = piece.card() - 1;
            if pj == 0 {
                continue;
            }
            let y = dec.tau.vertices()[j];
            let kind = GroupKind::Fiber(y.0);
            let group = ctx.find_group(kind).expect("fiber group");
            let gvars: Vec<usize> = ctx.group_vars(group).collect();
            for (i, &x) in piece.vertices().iter().enumerate() {
                let xv = ctx.var(kind, x).expect("fiber coordinate");
                let others: Vec<usize> = gvars.iter().copied().filter(|&v| v != xv).collect();
                let b = fc.coefficient.substitute(xv, &Poly::one_minus_sum(n, &others));
                let gamma_piece = piece.delete(i);
                let ode_vars = ctx.vars_of(kind, gamma_piece.vertices())?;
                let c_tilde = ode_solve(&b, &ode_vars, pj);
                let sign = sign_q(i + prefix) * Q::new(1.into(), (count as i64).into());
                let weight = (&t_weight * &c_tilde).scale(&sign);
                let mut pieces = face.pieces.clone();
                pieces[j] = gamma_piece;
                let phi = face.phi.sub(|v| v != x);
                out.push(CTerm {
                    face: face.clone(),
                    gamma: RelativeFace { phi, pieces },
                    j,
                    c_tilde,
                    weight,
                });
            }
            prefix += pj;
        }
    }
    Ok(out)
}

/// `Σ weight · ω(π(γ)/τ;π(σ))`.
pub fn h_from_c(dec: &FiberwiseDecomposition, terms: &[CTerm]) -> Form {
    let ctx = dec.ctx().clone();
    let mut out = Form::zero(ctx.clone());
    for t in terms {
        let w = whitney_relative_in(&ctx, &dec.tau, &t.gamma.pieces).expect("faces of the fibers");
        out.add_assign_ref(&w.mul_poly(&t.weight));
    }
    out
}

/// Fiber part of `ψ^*η`: the form `ω_1` whose relative primitive is sought.
pub fn fiber_target(eta: &Form, dec: &FiberwiseDecomposition) -> Form {
    dec.psi.pullback(eta).fiber_part()
}

/// Cone correction `K(ω_1 − d_e H_C)` over the free fiber coordinates, the
/// base coordinates acting as parameters. Fails when the difference is not
/// fiberwise closed.
pub fn cone_correction(omega1: &Form, h_c: &Form) -> Result<Form> {
    let rest = (omega1 - &relative_d(h_c)).canonicalize();
    if rest.is_zero() {
        return Ok(Form::zero(omega1.ctx_arc().clone()));
    }
    let closed = relative_d(&rest);
    if !closed.is_zero() {
        return Err(Error::Exactness(format!(
            "form is not fiberwise closed; d_e residual {}",
            closed.display()
        )));
    }
    let ctx = omega1.ctx();
    let vars: Vec<usize> = ctx
        .free_vars()
        .into_iter()
        .filter(|&i| !matches!(ctx.describe(i).0, GroupKind::Param))
        .collect();
    Ok(cone_operator(&rest, &vars))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::forms::CoordSystem;
    use crate::mesh::OrientedSimplex;
    use crate::primitive::extract::extract_a;
    use num_traits::One;

    #[test]
    fn constant_coefficient_splits_evenly() {
        let fx = fixtures::two_edge_strip();
        let tau = OrientedSimplex::from_ids(&[0, 1]);
        let sigma = OrientedSimplex::from_ids(&[10, 12, 13]);
        let ctx = Arc::new(CoordSystem::simplex(&sigma));
        let eta = Form::dvar(ctx.clone(), 2);
        let dec = extract_a(&eta, &fx.morphism, &sigma, &tau).unwrap();
        let terms = assemble_c(&dec).unwrap();
        assert_eq!(terms.len(), 2);
        for t in &terms {
            assert_eq!(t.c_tilde.as_constant(), Some(Q::one()));
        }
        let h = h_from_c(&dec, &terms);
        assert!((&relative_d(&h) - &fiber_target(&eta, &dec)).canonicalize().is_zero());
    }
}
