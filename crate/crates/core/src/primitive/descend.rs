use std::sync::Arc;

use crate::forms::{CoordSystem, Form, GroupKind, PolyCoordinateMap};
use crate::mesh::{OrientedSimplex, SimplicialMorphism};
use crate::poly::{q, Poly};

/// A form on a simplex with a polynomial denominator: `numerator / denominator`.
#[derive(Clone, Debug)]
pub struct RationalForm {
    pub numerator: Form,
    pub denominator: Poly,
}

/// Reads a form on `τ × σ_0 × … × σ_s` back on `σ` through
/// `t_j = T_j = Σ_{v↦y_j} λ_v`, `μ_{j,v} = λ_v / T_j`.
///
/// A monomial of degree `m_j` in the `μ_j` coordinates, times `k_j`
/// differentials `dμ_j`, needs `T_j^{m_j + 2k_j}` to clear its denominator;
/// the result is written over `Π T_j^{N_j}` with `N_j` the largest such
/// exponent, then reduced by exact division where possible.
pub fn descend(h: &Form, f: &SimplicialMorphism, sigma: &OrientedSimplex, tau: &OrientedSimplex) -> RationalForm {
    let sctx = Arc::new(CoordSystem::simplex(sigma));
    let n = sctx.nvars();
    let hctx = h.ctx_arc().clone();
    let ys = tau.vertices();
    let mut sums = Vec::new();
    let mut dsums = Vec::new();
    for y in ys {
        let vars: Vec<usize> = (0..n).filter(|&i| f.map_vertex(sigma.vertices()[i]) == *y).collect();
        sums.push(Poly::sum_of(n, &vars));
        let mut d = Form::zero(sctx.clone());
        for v in vars {
            d.add_assign_ref(&Form::dvar(sctx.clone(), v));
        }
        dsums.push(d);
    }
    let base_index = |i: usize| -> (usize, Option<usize>) {
        let (kind, v) = hctx.describe(i);
        match kind {
            GroupKind::Param => (tau.position(v).expect("base vertex"), None),
            GroupKind::Fiber(y) => {
                let j = ys.iter().position(|w| w.0 == y).expect("base vertex");
                (j, Some(sigma.position(v).expect("fiber vertex")))
            }
            GroupKind::Lambda => unreachable!("trivialized systems have no simplex group"),
        }
    };

    let c = h.canonicalize();
    let mut big = vec![0u32; ys.len()];
    for (key, p) in c.terms() {
        let mut k = vec![0u32; ys.len()];
        for &i in key {
            if let (j, Some(_)) = base_index(i) {
                k[j] += 2;
            }
        }
        for (e, _) in p.terms() {
            let mut m = k.clone();
            for (i, &a) in e.iter().enumerate() {
                if let (j, Some(_)) = base_index(i) {
                    m[j] += a;
                }
            }
            for j in 0..ys.len() {
                big[j] = big[j].max(m[j]);
            }
        }
    }

    let mut numerator = Form::zero(sctx.clone());
    for (key, p) in c.terms() {
        let mut k = vec![0u32; ys.len()];
        let mut part = Form::constant(sctx.clone(), q(1));
        for &i in key {
            let image = match base_index(i) {
                (j, None) => dsums[j].clone(),
                (j, Some(v)) => {
                    k[j] += 2;
                    &Form::dvar(sctx.clone(), v).mul_poly(&sums[j]) - &dsums[j].mul_poly(&Poly::var(n, v))
                }
            };
            part = part.wedge(&image);
        }
        let mut coef = Poly::zero(n);
        for (e, cf) in p.terms() {
            let mut m = k.clone();
            let mut mono = Poly::constant(n, cf.clone());
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                match base_index(i) {
                    (j, None) => mono = &mono * &sums[j].pow(a),
                    (j, Some(v)) => {
                        m[j] += a;
                        mono = &mono * &Poly::var(n, v).pow(a);
                    }
                }
            }
            for j in 0..ys.len() {
                mono = &mono * &sums[j].pow(big[j] - m[j]);
            }
            coef.add_assign_ref(&mono);
        }
        numerator.add_assign_ref(&part.mul_poly(&coef));
    }

    // Cancel common factors T_j.
    for j in 0..ys.len() {
        while big[j] > 0 {
            let mut reduced = Form::zero(sctx.clone());
            let mut ok = true;
            for (key, p) in numerator.terms() {
                match p.div_exact(&sums[j]) {
                    Some(qp) => reduced.add_term(key.clone(), qp),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
            numerator = reduced;
            big[j] -= 1;
        }
    }
    let mut denominator = Poly::one(n);
    for j in 0..ys.len() {
        denominator = &denominator * &sums[j].pow(big[j]);
    }
    RationalForm { numerator, denominator }
}

/// `ψ^*(numerator) − h · ψ^*(denominator)`, canonical; zero when `h = ψ^* H_S`.
pub fn descent_residual(h: &Form, hs: &RationalForm, psi: &PolyCoordinateMap) -> Form {
    let num = psi.pullback(&hs.numerator);
    let den = psi.pullback_poly(&hs.denominator);
    (&num - &h.mul_poly(&den)).canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::forms::whitney_relative_in;

    #[test]
    fn relative_whitney_form_descends() {
        let fx = fixtures::two_edge_strip();
        let tau = OrientedSimplex::from_ids(&[0, 1]);
        let sigma = OrientedSimplex::from_ids(&[10, 12, 13]);
        let psi = PolyCoordinateMap::psi(&fx.morphism, &sigma, &tau).unwrap();
        let fibers = fx.morphism.fibers(&sigma, &tau);
        let w = whitney_relative_in(&psi.source, &tau, &fibers).unwrap();
        let hs = descend(&w, &fx.morphism, &sigma, &tau);
        assert!(descent_residual(&w, &hs, &psi).is_zero());
        assert!(!hs.denominator.is_zero());
    }
}
