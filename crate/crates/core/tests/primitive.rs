use prismal::fixtures;
use prismal::forms::Form;
use prismal::poly::Poly;
use prismal::primitive::{run_pipeline, source_system, PipelineOptions};
use prismal::verify::random_poly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_one_form(fx: &fixtures::Fixture, seed: u64) -> Form {
    let ctx = source_system(&fx.morphism);
    let n = ctx.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eta = Form::zero(ctx.clone());
    for i in 0..n {
        let p = random_poly(&mut rng, n, 2, 3);
        eta.add_assign_ref(&Form::dvar(ctx.clone(), i).mul_poly(&p));
    }
    eta
}

fn full_checks(seed: u64) -> PipelineOptions {
    PipelineOptions {
        check_horizontal: true,
        oracle_eps: Some(1e-4),
        seed,
    }
}

#[test]
fn strip_top_degree() {
    let fx = fixtures::two_edge_strip();
    let run = run_pipeline(&fx.morphism, &random_one_form(&fx, 1), full_checks(3)).unwrap();
    let s = run.summary();
    assert!(run.passed(), "{s:?}");
    assert_eq!(s.horizontal_checks, 24);
    assert!(s.oracle_checks > 0);
}

#[test]
fn tetrahedra_top_degree() {
    let fx = fixtures::tetrahedra_over_triangle();
    let run = run_pipeline(&fx.morphism, &random_one_form(&fx, 2), full_checks(3)).unwrap();
    assert!(run.passed(), "{:?}", run.summary());
}

fn var(ctx: &std::sync::Arc<prismal::forms::CoordSystem>, id: u32) -> usize {
    ctx.var(prismal::forms::GroupKind::Lambda, prismal::mesh::VertexId(id))
        .unwrap()
}

#[test]
fn exact_forms_below_top_degree() {
    let fx = fixtures::five_simplex();
    let ctx = source_system(&fx.morphism);
    let n = ctx.nvars();
    let (a, b, c) = (var(&ctx, 11), var(&ctx, 12), var(&ctx, 13));
    let g = &(&Poly::var(n, a) * &Poly::var(n, b)) * &Poly::var(n, c).pow(2);
    let cases = [
        Form::function(ctx.clone(), g.clone()).d(),
        Form::dvar(ctx.clone(), a).mul_poly(&Poly::var(n, c)).d(),
    ];
    for eta in cases {
        let run = run_pipeline(&fx.morphism, &eta, full_checks(5)).unwrap();
        assert!(run.passed(), "{:?}", run.summary());
    }
}

#[test]
fn non_exact_form_is_rejected() {
    let fx = fixtures::five_simplex();
    let ctx = source_system(&fx.morphism);
    let n = ctx.nvars();
    let eta = Form::dvar(ctx.clone(), var(&ctx, 11)).mul_poly(&Poly::var(n, var(&ctx, 10)));
    let err = run_pipeline(&fx.morphism, &eta, PipelineOptions::default()).unwrap_err();
    assert!(matches!(err, prismal::error::Error::Exactness(_)), "{err}");
}

mod random_inputs {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn differentials_of_functions_have_primitives(seed: u64) {
            let fx = fixtures::five_simplex();
            let ctx = source_system(&fx.morphism);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_poly(&mut rng, ctx.nvars(), 3, 4);
            let eta = Form::function(ctx, g).d();
            prop_assume!(!eta.canonicalize().is_zero());
            let run = run_pipeline(&fx.morphism, &eta, PipelineOptions { check_horizontal: true, oracle_eps: None, seed }).unwrap();
            prop_assert!(run.passed(), "{:?}", run.summary());
        }

        #[test]
        fn top_degree_forms_on_the_strip(seed: u64) {
            let fx = fixtures::two_edge_strip();
            let eta = random_one_form(&fx, seed);
            let run = run_pipeline(&fx.morphism, &eta, PipelineOptions { check_horizontal: true, oracle_eps: None, seed }).unwrap();
            prop_assert!(run.passed(), "{:?}", run.summary());
        }
    }
}
