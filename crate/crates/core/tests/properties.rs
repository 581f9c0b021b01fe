use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prismal::fixtures;
use prismal::forms::{face_inclusion, integrate_top_form, poincare_primitive, CoordSystem, Form, PolyCoordinateMap};
use prismal::mesh::{boundary_chain, OrientedSimplex, PrismChain};
use prismal::poly::{sign_q, Poly, Q};
use prismal::primitive::{ode_residual, ode_solve};
use prismal::verify::{prism_of_dims, random_poly, standard_simplex};

fn form(ctx: &Arc<CoordSystem>, r: usize, deg: u32, seed: u64) -> Form {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.nvars();
    let mut out = Form::zero(ctx.clone());
    for _ in 0..3 {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(&mut rng);
        vars.truncate(r.min(n));
        out.add_assign_ref(&Form::dvars(ctx.clone(), &vars).mul_poly(&random_poly(&mut rng, n, deg, 3)));
    }
    out
}

fn simplex_ctx(p: usize) -> Arc<CoordSystem> {
    Arc::new(CoordSystem::simplex(&standard_simplex(p)))
}

fn strip_psi() -> PolyCoordinateMap {
    let fx = fixtures::two_edge_strip();
    PolyCoordinateMap::psi(
        &fx.morphism,
        &OrientedSimplex::from_ids(&[10, 12, 13]),
        &OrientedSimplex::from_ids(&[0, 1]),
    )
    .unwrap()
}

fn same(a: &Form, b: &Form) -> bool {
    (a - b).canonicalize().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(p in 1usize..=4, r in 0usize..=3, seed: u64) {
        let a = form(&simplex_ctx(p), r, 3, seed);
        prop_assert!(a.d().d().canonicalize().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(p in 2usize..=4, r in 0usize..=2, s in 0usize..=2, seed: u64) {
        let ctx = simplex_ctx(p);
        let a = form(&ctx, r, 2, seed);
        let b = form(&ctx, s, 2, seed ^ 0x9e37);
        prop_assert!(same(&a.wedge(&b), &b.wedge(&a).scale(&sign_q(r * s))));
    }

    #[test]
    fn leibniz_rule(p in 2usize..=4, r in 0usize..=2, seed: u64) {
        let ctx = simplex_ctx(p);
        let a = form(&ctx, r, 2, seed);
        let b = form(&ctx, 1, 2, seed ^ 0x51);
        let rhs = &a.d().wedge(&b) + &a.wedge(&b.d()).scale(&sign_q(r));
        prop_assert!(same(&a.wedge(&b).d(), &rhs));
    }

    #[test]
    fn canonicalize_is_idempotent_and_additive(p in 1usize..=4, r in 0usize..=3, seed: u64) {
        let ctx = simplex_ctx(p);
        let a = form(&ctx, r, 3, seed);
        let b = form(&ctx, r, 3, seed.wrapping_add(1));
        let c = a.canonicalize();
        prop_assert_eq!(c.canonicalize().display(), c.display());
        prop_assert!(same(&(&a + &b).canonicalize(), &(&c + &b.canonicalize())));
    }

    #[test]
    fn canonicalize_respects_wedge(p in 2usize..=4, seed: u64) {
        let ctx = simplex_ctx(p);
        let a = form(&ctx, 1, 2, seed);
        let b = form(&ctx, 1, 2, seed ^ 7);
        prop_assert!(same(&a.wedge(&b), &a.canonicalize().wedge(&b.canonicalize())));
    }

    #[test]
    fn pullback_commutes_with_d(r in 0usize..=2, seed: u64) {
        let psi = strip_psi();
        let a = form(&psi.target, r, 3, seed);
        prop_assert!(same(&psi.pullback(&a.d()), &psi.pullback(&a).d()));
    }

    #[test]
    fn stokes_on_a_simplex(p in 1usize..=4, seed: u64) {
        let s = standard_simplex(p);
        let ctx = simplex_ctx(p);
        let a = form(&ctx, p - 1, 3, seed);
        let inner = integrate_top_form(&a.d()).unwrap();
        let mut outer = Q::from_integer(0.into());
        for (face, c) in boundary_chain(&s).iter() {
            let (fctx, map) = face_inclusion(face, &s).unwrap();
            outer += integrate_top_form(&a.restrict(fctx, &map)).unwrap() * Q::from_integer((*c).into());
        }
        prop_assert_eq!(inner, outer);
    }

    #[test]
    fn cone_primitive_of_exact_form(p in 1usize..=3, r in 0usize..=2, seed: u64) {
        let a = form(&simplex_ctx(p), r, 3, seed).d();
        prop_assume!(!a.canonicalize().is_zero());
        let h = poincare_primitive(&a).unwrap();
        prop_assert!(same(&h.d(), &a));
    }

    #[test]
    fn euler_solver_is_linear_and_exact(n in 1usize..=6, r in 1usize..=4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&mut rng, n, 5, 5);
        let b = random_poly(&mut rng, n, 5, 5);
        let vars: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
        let k = Q::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=5).into());
        let combined = &ode_solve(&a, &vars, r) + &ode_solve(&b, &vars, r).scale(&k);
        prop_assert_eq!(ode_solve(&(&a + &b.scale(&k)), &vars, r), combined);
        prop_assert!(ode_residual(&ode_solve(&a, &vars, r), &a, &vars, r).is_zero());
    }

    #[test]
    fn euler_solver_scales_monomials(exp in proptest::collection::vec(0u32..4, 3), r in 1usize..=4) {
        let m: u32 = exp.iter().sum();
        let mono = Poly::monomial(3, exp, Q::from_integer(1.into()));
        let expect = mono.scale(&Q::new((r as i64).into(), ((r as u32 + m) as i64).into()));
        prop_assert_eq!(ode_solve(&mono, &[0, 1, 2], r), expect);
    }

    #[test]
    fn boundary_of_boundary(p in 0usize..=5, seed: u64) {
        let mut ids: Vec<u32> = (0..=p as u32).collect();
        ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(boundary_chain(&OrientedSimplex::from_ids(&ids)).boundary().is_zero());
    }

    #[test]
    fn prism_boundary_of_boundary(dims in proptest::collection::vec(0usize..=2, 1..=3)) {
        let mut c = PrismChain::new();
        c.add_prism(&prism_of_dims(&dims), 1);
        prop_assert!(c.boundary().boundary().is_zero());
    }
}
