use num_traits::Zero;

use super::form::Form;
use crate::error::{Error, Result};
use crate::poly::{factorial, Poly, Q};

/// Exact integral of a top-degree form over its cell.
///
/// Each group `g` of dimension `p_g` is parametrized by its first `p_g`
/// coordinates, with the last one eliminated. A monomial `Π x^a` in the
/// chart integrates to `Π a_i! / (Σ a_i + p_g)!` against the standard
/// volume; the chart `dx_0 ∧ … ∧ dx_{p-1}` carries the sign `(-1)^p`
/// relative to the stored vertex order (which orients by `dx_1 ∧ … ∧ dx_p`
/// after eliminating the first vertex), so that `∫_σ ω(σ) = 1`. Products of
/// groups integrate factor by factor in group order.
pub fn integrate_top_form(a: &Form) -> Result<Q> {
    let ctx = a.ctx();
    let top = ctx.cell_dim();
    let c = a.canonicalize();
    if let Some(k) = c.terms().map(|(k, _)| k.len()).find(|&k| k != top) {
        return Err(Error::Degree(format!(
            "form has a degree-{k} part on a cell of dimension {top}"
        )));
    }
    let free = ctx.free_vars();
    let groups: Vec<std::ops::Range<usize>> = (0..ctx.groups().len()).map(|g| ctx.group_vars(g)).collect();
    let mut total = Q::zero();
    for (key, p) in c.terms() {
        debug_assert_eq!(key, &free);
        for (e, coef) in p.terms() {
            let mut val = coef.clone();
            for r in &groups {
                let pg = r.len() - 1;
                let mut num = Q::from_integer(1.into());
                let mut deg = 0usize;
                for i in r.clone() {
                    num *= factorial(e[i] as usize);
                    deg += e[i] as usize;
                }
                val = val * num / factorial(deg + pg);
                if pg % 2 == 1 {
                    val = -val;
                }
            }
            total += val;
        }
    }
    Ok(total)
}

/// Integral over the cells of the listed groups, the other coordinates
/// acting as parameters: terms with a differential outside those groups are
/// dropped (they vanish on every fiber) and the rest must be of top degree
/// in the groups.
pub fn integrate_fiber(a: &Form, groups: &[usize]) -> Result<Poly> {
    let ctx = a.ctx();
    let n = ctx.nvars();
    let mut fiber_vars: Vec<usize> = Vec::new();
    for &g in groups {
        let r = ctx.group_vars(g);
        fiber_vars.extend(r.start..r.end - 1);
    }
    fiber_vars.sort_unstable();
    let c = a.canonicalize();
    let mut out = Poly::zero(n);
    for (key, p) in c.terms() {
        if !key.iter().all(|i| groups.contains(&ctx.group_of(*i))) {
            continue;
        }
        if *key != fiber_vars {
            return Err(Error::Degree(format!(
                "fiber part of degree {} on fibers of dimension {}",
                key.len(),
                fiber_vars.len()
            )));
        }
        for (e, coef) in p.terms() {
            let mut val = coef.clone();
            let mut rest = e.clone();
            for &g in groups {
                let r = ctx.group_vars(g);
                let pg = r.len() - 1;
                let mut num = Q::from_integer(1.into());
                let mut deg = 0usize;
                for i in r.clone() {
                    num *= factorial(e[i] as usize);
                    deg += e[i] as usize;
                    rest[i] = 0;
                }
                val = val * num / factorial(deg + pg);
                if pg % 2 == 1 {
                    val = -val;
                }
            }
            out.add_term(rest, val);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::forms::context::CoordSystem;
    use crate::forms::whitney;
    use crate::mesh::OrientedSimplex;
    use crate::poly::{q, qr};

    #[test]
    fn whitney_forms_have_unit_mass() {
        for p in 0..=5u32 {
            let s = OrientedSimplex::from_ids(&(0..=p).collect::<Vec<_>>());
            assert_eq!(integrate_top_form(&whitney(&s)).unwrap(), q(1), "p = {p}");
        }
    }

    #[test]
    fn dirichlet_monomial() {
        // ∫ λ0 λ1 over the standard triangle, oriented by the stored order.
        let s = OrientedSimplex::from_ids(&[0, 1, 2]);
        let ctx = Arc::new(CoordSystem::simplex(&s));
        let f = Form::dvars(ctx, &[1, 2]).mul_poly(&(&Poly::var(3, 0) * &Poly::var(3, 1)));
        assert_eq!(integrate_top_form(&f).unwrap(), qr(1, 24));
    }

    #[test]
    fn rejects_wrong_degree() {
        let s = OrientedSimplex::from_ids(&[0, 1, 2]);
        let ctx = Arc::new(CoordSystem::simplex(&s));
        assert!(integrate_top_form(&Form::dvar(ctx, 0)).is_err());
    }
}
