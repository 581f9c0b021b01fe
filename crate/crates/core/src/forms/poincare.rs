use super::form::Form;
use crate::error::{Error, Result};
use crate::poly::{Poly, Q};

/// Cone operator centred at the point where every variable of `vars` is 0.
///
/// On a canonical form this is `∫_0^1 ι_X h_s^* a ds` for the homothety
/// `h_s(x) = s x` on `vars` (other variables are parameters), with
/// `X = Σ_{i∈vars} x_i ∂_i`. A monomial of degree `m` in `vars` multiplying
/// a term with `k ≥ 1` differentials from `vars` picks up `1/(m + k)`.
///
/// For forms with no differentials outside `vars`,
/// `a = d K a + K d a` in positive degree.
pub fn cone_operator(a: &Form, vars: &[usize]) -> Form {
    let n = a.nvars();
    let mut out = Form::zero(a.ctx_arc().clone());
    for (key, p) in a.terms() {
        let k = key.iter().filter(|i| vars.contains(i)).count();
        if k == 0 {
            continue;
        }
        for (l, &i) in key.iter().enumerate() {
            if !vars.contains(&i) {
                continue;
            }
            let mut rest = key.clone();
            rest.remove(l);
            let sgn = if l % 2 == 0 {
                Q::from_integer(1.into())
            } else {
                Q::from_integer((-1).into())
            };
            let xi = Poly::var(n, i);
            let scaled = p.map_by_degree(vars, |m| Q::new(1.into(), ((m as usize + k) as i64).into()));
            out.add_term(rest, (&scaled * &xi).scale(&sgn));
        }
    }
    out
}

/// Primitive of a closed form of positive degree on a cell, via the cone
/// operator centred at the last vertex of every group.
pub fn poincare_primitive(a: &Form) -> Result<Form> {
    if a.degrees().contains(&0) {
        return Err(Error::Degree("closed 0-forms have no primitive".into()));
    }
    let c = a.canonicalize();
    if !c.d().canonicalize().is_zero() {
        return Err(Error::Exactness("form is not closed".into()));
    }
    let free = a.ctx().free_vars();
    Ok(cone_operator(&c, &free))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::forms::context::CoordSystem;
    use crate::mesh::OrientedSimplex;
    use crate::poly::q;

    #[test]
    fn volume_form_round_trip() {
        for p in 1..=3u32 {
            // (p+1)! dλ_0 ∧ … ∧ dλ_p read on a (p+1)-simplex.
            let s = OrientedSimplex::from_ids(&(0..=p + 1).collect::<Vec<_>>());
            let face = OrientedSimplex::from_ids(&(0..=p).collect::<Vec<_>>());
            let w = crate::forms::whitney_extended(&face, &s).unwrap();
            let vol = w.d();
            assert!(!vol.canonicalize().is_zero());
            let b = poincare_primitive(&vol).unwrap();
            assert!(b.d().equals_mod_relations(&vol));
            assert!((&b - &w).d().canonicalize().is_zero());
        }
    }

    #[test]
    fn exact_round_trip_and_zero() {
        let s = OrientedSimplex::from_ids(&[0, 1, 2]);
        let ctx = Arc::new(CoordSystem::simplex(&s));
        let f = Form::function(ctx.clone(), &Poly::var(3, 0) * &Poly::var(3, 1).pow(2));
        let g = Form::dvar(ctx.clone(), 1).mul_poly(&Poly::var(3, 2).pow(3));
        let a = (&f.d() + &g.d()).canonicalize();
        let b = poincare_primitive(&a).unwrap();
        assert!(b.d().equals_mod_relations(&a));
        assert!(poincare_primitive(&Form::zero(ctx.clone())).unwrap().is_zero());
        assert!(poincare_primitive(&Form::dvar(ctx, 0).mul_poly(&Poly::var(3, 1)).scale(&q(1))).is_err());
    }
}
