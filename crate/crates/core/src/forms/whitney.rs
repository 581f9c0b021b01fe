use std::sync::Arc;

use super::context::{CoordSystem, GroupKind};
use super::form::Form;
use crate::error::{Error, Result};
use crate::mesh::{boundary_chain, OrientedPrism, OrientedSimplex, VertexId};
use crate::poly::{factorial, q, Poly, Q};

/// `p! Σ_i (-1)^i x_{v_i} dx_{v_0} ∧ … ∧ \hat{dx_{v_i}} ∧ … ∧ dx_{v_p}` on the
/// coordinates of `verts` in group `kind` of `ctx`.
///
/// Reading the formula for a face of the group's simplex gives the extended
/// Whitney form of that face.
pub fn whitney_in(ctx: &Arc<CoordSystem>, kind: GroupKind, verts: &[VertexId]) -> Result<Form> {
    let vars = ctx.vars_of(kind, verts)?;
    let n = ctx.nvars();
    let p = vars
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Dimension("Whitney form of the empty simplex".into()))?;
    let mut out = Form::zero(ctx.clone());
    for i in 0..=p {
        let others: Vec<usize> = vars
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| *v)
            .collect();
        let coef = if i % 2 == 0 { factorial(p) } else { -factorial(p) };
        let term = Form::dvars(ctx.clone(), &others).mul_poly(&Poly::var(n, vars[i]).scale(&coef));
        out.add_assign_ref(&term);
    }
    Ok(out)
}

/// `ω(σ)` in `σ`'s own coordinates.
pub fn whitney(s: &OrientedSimplex) -> Form {
    let ctx = Arc::new(CoordSystem::simplex(s));
    whitney_in(&ctx, GroupKind::Lambda, s.vertices()).expect("nonempty simplex")
}

/// `ω(σ′;σ)`: the formula of `ω(σ′)` read in `σ`'s coordinates.
pub fn whitney_extended(face: &OrientedSimplex, cell: &OrientedSimplex) -> Result<Form> {
    if !face.is_face_of(cell) {
        return Err(Error::Incidence(format!("{face} is not a face of {cell}")));
    }
    let ctx = Arc::new(CoordSystem::simplex(cell));
    whitney_in(&ctx, GroupKind::Lambda, face.vertices())
}

/// Extended form of a face of a simplex, in a given system.
pub fn whitney_extended_in(ctx: &Arc<CoordSystem>, face: &OrientedSimplex) -> Result<Form> {
    whitney_in(ctx, GroupKind::Lambda, face.vertices())
}

/// `ω(ρ) = pr_0^*ω(σ_0) ∧ … ∧ pr_s^*ω(σ_s)` in the prism's coordinates.
pub fn whitney_prism(p: &OrientedPrism) -> Form {
    let ctx = Arc::new(CoordSystem::prism(p));
    whitney_prism_face_in(&ctx, &p.factors, |k| GroupKind::Fiber(k as u32)).expect("prism factors")
}

/// Wedge of the factor forms of a face `ρ′ = ρ′_0 × …` of a prism, read in
/// the prism's coordinates: the extended form `ω(ρ′;ρ)`.
pub fn whitney_prism_face_in(
    ctx: &Arc<CoordSystem>,
    factors: &[OrientedSimplex],
    kind: impl Fn(usize) -> GroupKind,
) -> Result<Form> {
    let mut out = Form::constant(ctx.clone(), q(1));
    for (k, f) in factors.iter().enumerate() {
        out = out.wedge(&whitney_in(ctx, kind(k), f.vertices())?);
    }
    Ok(out)
}

/// `ω(π(γ)/τ;π(σ)) = ω(γ_0;σ_0) ∧ … ∧ ω(γ_s;σ_s)` on `τ × σ_0 × … × σ_s`,
/// with `fibers[j]` read in the group of base vertex `tau[j]`.
pub fn whitney_relative_in(ctx: &Arc<CoordSystem>, tau: &OrientedSimplex, fibers: &[OrientedSimplex]) -> Result<Form> {
    if fibers.len() != tau.card() {
        return Err(Error::Structure("one fiber face per base vertex expected".into()));
    }
    let ys: Vec<u32> = tau.vertices().iter().map(|y| y.0).collect();
    whitney_prism_face_in(ctx, fibers, |k| GroupKind::Fiber(ys[k]))
}

/// `ω(π(σ)/τ)` in the trivialized coordinates of `π(σ)`.
pub fn whitney_relative(tau: &OrientedSimplex, fibers: &[OrientedSimplex]) -> Form {
    let ctx = Arc::new(CoordSystem::trivialized(tau, fibers));
    whitney_relative_in(&ctx, tau, fibers).expect("matching fibers")
}

/// `de_τ = e^*ω(τ)`: the Whitney form of the base in the `t` coordinates.
pub fn de_form(ctx: &Arc<CoordSystem>) -> Result<Form> {
    let g = ctx
        .find_group(GroupKind::Param)
        .ok_or_else(|| Error::Structure("coordinate system has no base group".into()))?;
    let verts = ctx.groups()[g].vertices.clone();
    whitney_in(ctx, GroupKind::Param, &verts)
}

/// `(1/(p+1)) Σ_i [σ;σ′_i] ω(σ′_i;σ)`, whose exterior derivative is `ω(σ)`.
pub fn whitney_antiboundary(s: &OrientedSimplex) -> Result<Form> {
    let p = s.dim().ok_or_else(|| Error::Dimension("empty simplex".into()))?;
    if p == 0 {
        return Err(Error::Dimension("a vertex has no codimension-1 faces".into()));
    }
    let ctx = Arc::new(CoordSystem::simplex(s));
    let mut out = Form::zero(ctx.clone());
    for (face, c) in boundary_chain(s).iter() {
        out.add_scaled(&whitney_extended_in(&ctx, face)?, &q(*c));
    }
    Ok(out.scale(&Q::new(1.into(), ((p + 1) as i64).into())))
}

/// True when `a ∧ de` vanishes modulo the relations, i.e. `a` restricts to
/// zero on every interior fiber.
pub fn is_fiberwise_zero(a: &Form) -> Result<bool> {
    let de = de_form(a.ctx_arc())?;
    Ok(a.wedge(&de).canonicalize().is_zero())
}

/// Representative of `d_e a`: the canonical `d a` with every `dt` term dropped.
pub fn relative_d(a: &Form) -> Form {
    a.d().fiber_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::integrate_top_form;

    #[test]
    fn low_dimensional_formulas() {
        let v = OrientedSimplex::from_ids(&[5]);
        assert_eq!(
            whitney(&v).canonicalize(),
            Form::constant(whitney(&v).ctx_arc().clone(), q(1))
        );
        let e = OrientedSimplex::from_ids(&[0, 1]);
        let w = whitney(&e);
        let c = w.ctx_arc().clone();
        let mut expect = Form::dvar(c.clone(), 1).mul_poly(&Poly::var(2, 0));
        expect.add_assign_ref(&Form::dvar(c, 0).mul_poly(&Poly::var(2, 1)).scale(&q(-1)));
        assert_eq!(w, expect);
    }

    #[test]
    fn derivative_is_volume() {
        for p in 1..=4u32 {
            let s = OrientedSimplex::from_ids(&(0..=p).collect::<Vec<_>>());
            let w = whitney(&s);
            let all: Vec<usize> = (0..=p as usize).collect();
            let vol = Form::dvars(w.ctx_arc().clone(), &all).scale(&factorial(p as usize + 1));
            assert_eq!(w.d(), vol);
        }
    }

    #[test]
    fn canonical_form_sign() {
        // ω(σ) ≡ (−1)^p p! dλ_0 ∧ … ∧ dλ_{p−1}
        for p in 1..=4usize {
            let s = OrientedSimplex::from_ids(&(0..=p as u32).collect::<Vec<_>>());
            let w = whitney(&s);
            let lead: Vec<usize> = (0..p).collect();
            let sgn = if p % 2 == 0 { q(1) } else { q(-1) };
            let expect = Form::dvars(w.ctx_arc().clone(), &lead).scale(&(sgn * factorial(p)));
            assert_eq!(w.canonicalize(), expect);
        }
    }

    #[test]
    fn antiboundary_of_edge() {
        let e = OrientedSimplex::from_ids(&[0, 1]);
        let a = whitney_antiboundary(&e).unwrap();
        let expect = Form::function(
            a.ctx_arc().clone(),
            (&Poly::var(2, 1) - &Poly::var(2, 0)).scale(&Q::new(1.into(), 2.into())),
        );
        assert_eq!(a, expect);
        assert!(a.d().equals_mod_relations(&whitney(&e)));
    }

    #[test]
    fn relative_form_integrates_to_one() {
        let tau = OrientedSimplex::from_ids(&[0, 1]);
        let fibers = [OrientedSimplex::from_ids(&[10, 11]), OrientedSimplex::from_ids(&[12])];
        let w = whitney_relative(&tau, &fibers);
        assert_eq!(w.degree(), Some(1));
        assert!(!is_fiberwise_zero(&w).unwrap());
        let sq = OrientedPrism::new(fibers.to_vec()).unwrap();
        assert_eq!(integrate_top_form(&whitney_prism(&sq)).unwrap(), q(1));
    }
}
