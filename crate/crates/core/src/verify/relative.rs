use std::sync::Arc;

use super::IdentityReport;
use crate::forms::{integrate_fiber, relative_d, whitney_in, whitney_relative_in, CoordSystem, Form, GroupKind};
use crate::mesh::{incidence_number, OrientedSimplex, SimplicialMorphism, VertexId};
use crate::poly::{q, sign_q, Poly};

fn ids(s: &OrientedSimplex) -> String {
    s.vertices()
        .iter()
        .map(|v| v.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn weighted(ctx: &Arc<CoordSystem>, tau: &OrientedSimplex, fibers: &[OrientedSimplex], w: &Form) -> Form {
    let n = ctx.nvars();
    let mut t = Poly::one(n);
    for (y, f) in tau.vertices().iter().zip(fibers) {
        t = &t * &Poly::var(n, ctx.var(GroupKind::Param, *y).expect("base")).pow(f.card() as u32 - 1);
    }
    w.mul_poly(&t)
}

/// Relative Whitney forms of the trivialized cells of a simplicial map:
/// traces on the faces `t_k = 0`, unit fiber mass, and the relative
/// derivative on codimension-1 fiber faces.
pub fn verify_relative(f: &SimplicialMorphism, name: &str) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for tau in f.target.simplices() {
        for sigma in f.simplices_over(&tau) {
            let case = format!("{name}: [{}] over [{}]", ids(&sigma), ids(&tau));
            match check_cell(f, &sigma, &tau, &case) {
                Ok(mut r) => out.append(&mut r),
                Err(e) => out.push(IdentityReport::error("relative", case, e)),
            }
        }
    }
    out
}

fn check_cell(
    f: &SimplicialMorphism,
    sigma: &OrientedSimplex,
    tau: &OrientedSimplex,
    case: &str,
) -> crate::Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    let fibers = f.fibers(sigma, tau);
    let ctx = Arc::new(CoordSystem::trivialized(tau, &fibers));
    let w = whitney_relative_in(&ctx, tau, &fibers)?;
    let dims: Vec<usize> = fibers.iter().map(|x| x.card() - 1).collect();

    // Traces on t_k = 0.
    if tau.card() >= 2 {
        let wt = weighted(&ctx, tau, &fibers, &w);
        for k in 0..tau.card() {
            let yk = tau.vertices()[k];
            let (rc, map) = ctx.restricted(|kind, v| !(kind == GroupKind::Param && v == yk))?;
            let rc = Arc::new(rc);
            let sub_tau = tau.delete(k);
            let mut sub_fibers = fibers.clone();
            let fk = sub_fibers.remove(k);
            let sub_ctx = Arc::new(CoordSystem::trivialized(&sub_tau, &sub_fibers));
            let sub_w = whitney_relative_in(&sub_ctx, &sub_tau, &sub_fibers)?;
            let later: usize = dims[k + 1..].iter().sum();
            let expect = sub_w
                .embed(rc.clone())
                .expect("face coordinates")
                .wedge(&whitney_in(&rc, GroupKind::Fiber(yk.0), fk.vertices())?)
                .scale(&sign_q(dims[k] * later));
            let c = format!("{case}, t_{} = 0", yk.0);
            out.push(IdentityReport::from_residual(
                "relative-trace",
                c.clone(),
                &(&w.restrict(rc.clone(), &map) - &expect),
            ));
            let expect_w = if dims[k] == 0 {
                weighted(&sub_ctx, &sub_tau, &sub_fibers, &sub_w)
                    .embed(rc.clone())
                    .expect("face coordinates")
            } else {
                Form::zero(rc.clone())
            };
            out.push(IdentityReport::from_residual(
                "relative-weighted-trace",
                c,
                &(&wt.restrict(rc.clone(), &map) - &expect_w),
            ));
        }
    }

    // Unit mass on every fiber.
    let groups: Vec<usize> = (1..ctx.groups().len()).collect();
    let mass = integrate_fiber(&w, &groups)?;
    let ok = mass == Poly::one(ctx.nvars());
    out.push(IdentityReport::from_bool("relative-mass", case.into(), ok, || {
        mass.display_with(&ctx.var_names())
    }));

    // d_e on the cell itself, then on each codimension-1 fiber face.
    out.push(IdentityReport::from_residual(
        "relative-derivative",
        format!("{case}, top"),
        &relative_d(&w),
    ));
    let mut prefix = 0;
    for (j, fj) in fibers.iter().enumerate() {
        if fj.card() >= 2 {
            for i in 0..fj.card() {
                let mut faces = fibers.clone();
                faces[j] = fj.delete(i);
                let wf = whitney_relative_in(&ctx, tau, &faces)?;
                let sign = sign_q(prefix) * q(incidence_number(fj, &faces[j])?);
                let r = &relative_d(&wf) - &w.scale(&sign);
                let dropped: VertexId = fj.vertices()[i];
                out.push(IdentityReport::from_residual(
                    "relative-derivative",
                    format!("{case}, without {}", dropped.0),
                    &r,
                ));
            }
        }
        prefix += dims[j];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_passes() {
        let fx = crate::fixtures::two_edge_strip();
        let reports = verify_relative(&fx.morphism, fx.name);
        assert!(!reports.is_empty());
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
    }
}
